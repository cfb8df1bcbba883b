use serde::{Deserialize, Serialize};

use super::chorale::check_contiguous;
use super::record::{parse_document, Document, LineError, Record};

/// One measure of a rock analysis: key tonic, key-relative numeral root,
/// and the absolute pitch class of the measure's longest melody note.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RockMeasure {
    pub key_pc: u8,
    pub numeral_root_pc: u8,
    pub melody_degree_pc: u8,
}

impl RockMeasure {
    pub fn new(key_pc: u8, numeral_root_pc: u8, melody_degree_pc: u8) -> Option<Self> {
        (key_pc < 12 && numeral_root_pc < 12 && melody_degree_pc < 12)
            .then_some(RockMeasure { key_pc, numeral_root_pc, melody_degree_pc })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RockSong {
    pub id: String,
    pub measures: Vec<RockMeasure>,
}

/// Why a syntactically valid song was left out of the training set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Exclusion {
    MinorKey,
    NonQuadrupleMeter(String),
}

impl std::fmt::Display for Exclusion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Exclusion::MinorKey => f.write_str("minor key"),
            Exclusion::NonQuadrupleMeter(m) => write!(f, "meter {m} is not quadruple"),
        }
    }
}

fn pc_field(rec: &Record, name: &str) -> Result<u8, LineError> {
    let text = rec.require(name)?;
    text.parse::<u8>().ok().filter(|v| *v < 12).ok_or_else(|| {
        LineError::new(rec.line, format!("measure {}: `{name}` must be 0..=11, got `{text}`", rec.index))
    })
}

fn is_quadruple(meter: &str) -> bool {
    matches!(meter.replace(' ', "").as_str(), "4" | "4/4" | "12/8")
}

fn exclusion(doc: &Document) -> Option<Exclusion> {
    if doc.header("mode").is_some_and(|m| m.trim().eq_ignore_ascii_case("minor")) {
        return Some(Exclusion::MinorKey);
    }
    match doc.header("meter") {
        Some(m) if !is_quadruple(m) => Some(Exclusion::NonQuadrupleMeter(m.to_string())),
        _ => None,
    }
}

/// Parses a rock analysis; `Ok(Err(_))` means the song is valid but out of
/// scope for training (minor key or non-quadruple meter).
pub fn parse_rock_song(
    text: &str,
    fallback_id: &str,
) -> Result<Result<RockSong, Exclusion>, Vec<LineError>> {
    let doc = parse_document(text)?;
    let mut errors = Vec::new();
    if let Err(e) = check_contiguous(&doc) {
        errors.push(e);
    }
    let mut measures = Vec::new();
    for rec in &doc.records {
        let fields = (
            pc_field(rec, "key_pc"),
            pc_field(rec, "numeral_root_pc"),
            pc_field(rec, "melody_degree_pc"),
        );
        match fields {
            (Ok(k), Ok(r), Ok(m)) => measures.push(RockMeasure { key_pc: k, numeral_root_pc: r, melody_degree_pc: m }),
            (k, r, m) => errors.extend([k.err(), r.err(), m.err()].into_iter().flatten()),
        }
    }
    if measures.is_empty() && errors.is_empty() {
        errors.push(LineError::new(1, "song has no measures"));
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    if let Some(ex) = exclusion(&doc) {
        return Ok(Err(ex));
    }
    Ok(Ok(RockSong { id: doc.header("id").unwrap_or(fallback_id).to_string(), measures }))
}

/// Parses a measure-level rock melody: one `melody_degree_pc` per record.
pub fn parse_rock_melody(text: &str) -> Result<Vec<u8>, Vec<LineError>> {
    let doc = parse_document(text)?;
    let mut errors = Vec::new();
    if let Err(e) = check_contiguous(&doc) {
        errors.push(e);
    }
    let mut pcs = Vec::new();
    for rec in &doc.records {
        match pc_field(rec, "melody_degree_pc") {
            Ok(pc) => pcs.push(pc),
            Err(e) => errors.push(e),
        }
    }
    if pcs.is_empty() && errors.is_empty() {
        errors.push(LineError::new(1, "melody has no measures"));
    }
    if errors.is_empty() {
        Ok(pcs)
    } else {
        Err(errors)
    }
}
