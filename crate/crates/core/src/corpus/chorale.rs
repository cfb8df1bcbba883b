use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::record::{parse_document, parse_fraction, Document, LineError, Record};
use crate::music::{
    BeatEvent, KeyLabel, MelodyLine, Mode, MusicError, Pitch, ProgressionAnnotation, RomanChord,
};

/// One beat of an annotated chorale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotatedBeat {
    pub event: BeatEvent,
    pub key: KeyLabel,
    pub chord: RomanChord,
}

/// A chorale whose melody carries a key and Roman numeral on every beat.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotatedChorale {
    pub id: String,
    pub mode: Mode,
    pub meter: u8,
    beats: Vec<AnnotatedBeat>,
}

impl AnnotatedChorale {
    pub const MIN_EVENTS: usize = 2;

    pub fn new(
        id: impl Into<String>,
        mode: Mode,
        meter: u8,
        beats: Vec<AnnotatedBeat>,
    ) -> Result<Self, LineError> {
        if beats.len() < Self::MIN_EVENTS {
            return Err(LineError::new(
                1,
                format!("a chorale needs at least {} beats, found {}", Self::MIN_EVENTS, beats.len()),
            ));
        }
        Ok(AnnotatedChorale { id: id.into(), mode, meter, beats })
    }

    pub fn beats(&self) -> &[AnnotatedBeat] {
        &self.beats
    }

    pub fn len(&self) -> usize {
        self.beats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beats.is_empty()
    }

    pub fn melody(&self) -> MelodyLine {
        MelodyLine::new(self.beats.iter().map(|b| b.event.clone()).collect(), self.meter)
            .expect("chorale beats are contiguous and non-empty")
    }

    pub fn annotation(&self) -> ProgressionAnnotation {
        ProgressionAnnotation {
            keys: self.beats.iter().map(|b| b.key).collect(),
            chords: self.beats.iter().map(|b| b.chord).collect(),
        }
    }

    pub fn opening_key(&self) -> KeyLabel {
        self.beats[0].key
    }

    /// Semitone shift taking the opening tonic to C (major) or A (minor),
    /// choosing the smaller move and going down on a tritone tie.
    pub fn reference_offset(&self) -> i32 {
        let key = self.opening_key();
        let target = match key.mode() {
            Mode::Major => 0,
            Mode::Minor => 9,
        };
        let up = (target - i32::from(key.tonic_pc())).rem_euclid(12);
        if up >= 6 {
            up - 12
        } else {
            up
        }
    }

    pub fn transpose(&self, semitones: i32) -> Result<Self, MusicError> {
        let beats = self
            .beats
            .iter()
            .map(|b| {
                Ok(AnnotatedBeat {
                    event: b.event.transpose(semitones)?,
                    key: b.key.transpose(semitones),
                    chord: b.chord,
                })
            })
            .collect::<Result<Vec<_>, MusicError>>()?;
        Ok(AnnotatedChorale { id: self.id.clone(), mode: self.mode, meter: self.meter, beats })
    }

    /// Moves the chorale so it opens in C major or A minor. Roman numerals
    /// are key-relative and stay as they are.
    pub fn transpose_to_reference(&self) -> Result<Self, MusicError> {
        self.transpose(self.reference_offset())
    }

    /// Text form accepted by [`parse_chorale`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "id: {}", self.id).unwrap();
        writeln!(out, "mode: {}", self.mode).unwrap();
        writeln!(out, "meter: {}", self.meter).unwrap();
        out.push('\n');
        for (i, b) in self.beats.iter().enumerate() {
            writeln!(
                out,
                "{i} | notes={} | key={} | roman={}",
                format_notes(b.event.notes()),
                b.key,
                b.chord
            )
            .unwrap();
        }
        out
    }
}

pub(crate) fn format_notes(notes: &[(Pitch, f64)]) -> String {
    notes.iter().map(|(p, d)| format!("{p}:{d}")).collect::<Vec<_>>().join(",")
}

pub(crate) fn parse_notes(rec: &Record) -> Result<BeatEvent, LineError> {
    let text = rec.require("notes")?;
    let at = |msg: String| LineError::new(rec.line, format!("beat {}: {msg}", rec.index));
    let notes = text
        .split(',')
        .map(|item| {
            let (p, d) = item
                .split_once(':')
                .ok_or_else(|| at(format!("note `{item}` is not pitch:duration")))?;
            let midi: i64 = p.trim().parse().map_err(|_| at(format!("bad pitch `{p}`")))?;
            let pitch = Pitch::new(midi).map_err(|e| at(e.to_string()))?;
            let dur = parse_fraction(d).ok_or_else(|| at(format!("bad duration `{d}`")))?;
            Ok((pitch, dur))
        })
        .collect::<Result<Vec<_>, LineError>>()?;
    BeatEvent::new(rec.index, notes).map_err(|e| LineError::new(rec.line, e.to_string()))
}

pub(crate) fn check_contiguous(doc: &Document) -> Result<(), LineError> {
    for (pos, rec) in doc.records.iter().enumerate() {
        if rec.index != pos {
            return Err(LineError::new(
                rec.line,
                format!("record index {} out of sequence, expected {pos}", rec.index),
            ));
        }
    }
    Ok(())
}

pub(crate) fn parse_meter(doc: &Document) -> Result<u8, LineError> {
    match doc.header("meter") {
        None => Ok(MelodyLine::DEFAULT_METER),
        Some(text) => {
            let beats = text.split('/').next().unwrap_or_default().trim();
            beats
                .parse::<u8>()
                .ok()
                .filter(|m| *m > 0)
                .ok_or_else(|| LineError::new(doc.header_line("meter"), format!("bad meter `{text}`")))
        }
    }
}

/// Parses one annotated chorale document.
pub fn parse_chorale(text: &str, fallback_id: &str) -> Result<AnnotatedChorale, Vec<LineError>> {
    let doc = parse_document(text)?;
    let mut errors = Vec::new();
    let id = doc.header("id").unwrap_or(fallback_id).to_string();
    let mode = match doc.header("mode") {
        Some(m) => m.parse::<Mode>().map_err(|_| {
            LineError::new(doc.header_line("mode"), format!("mode must be major or minor, got `{m}`"))
        }),
        None => Err(LineError::new(1, "missing `mode` header")),
    };
    let meter = parse_meter(&doc);
    if let Err(e) = check_contiguous(&doc) {
        errors.push(e);
    }
    let mut beats = Vec::new();
    for rec in &doc.records {
        let event = parse_notes(rec);
        let key = rec.require("key").and_then(|k| {
            k.parse::<KeyLabel>().map_err(|e| LineError::new(rec.line, e.to_string()))
        });
        let chord = rec.require("roman").and_then(|r| {
            r.parse::<RomanChord>().map_err(|e| LineError::new(rec.line, e.to_string()))
        });
        match (event, key, chord) {
            (Ok(event), Ok(key), Ok(chord)) => beats.push(AnnotatedBeat { event, key, chord }),
            (e, k, c) => errors.extend([e.err(), k.err(), c.err()].into_iter().flatten()),
        }
    }
    let (mode, meter) = match (mode, meter) {
        (Ok(m), Ok(t)) => (m, t),
        (m, t) => {
            errors.extend([m.err(), t.err()].into_iter().flatten());
            return Err(errors);
        }
    };
    if !errors.is_empty() {
        return Err(errors);
    }
    AnnotatedChorale::new(id, mode, meter, beats).map_err(|e| vec![e])
}

/// A melody to harmonize, optionally tagged with its home key.
#[derive(Debug, Clone, PartialEq)]
pub struct MelodyFile {
    pub id: String,
    pub key: Option<KeyLabel>,
    pub melody: MelodyLine,
}

/// Parses a melody-only document: corpus records whose `key`/`roman`
/// fields are absent (or ignored when present).
pub fn parse_melody(text: &str, fallback_id: &str) -> Result<MelodyFile, Vec<LineError>> {
    let doc = parse_document(text)?;
    let mut errors = Vec::new();
    let key = match doc.header("key") {
        Some(k) => match k.parse::<KeyLabel>() {
            Ok(k) => Some(k),
            Err(e) => {
                errors.push(LineError::new(doc.header_line("key"), e.to_string()));
                None
            }
        },
        None => None,
    };
    let meter = parse_meter(&doc).unwrap_or_else(|e| {
        errors.push(e);
        MelodyLine::DEFAULT_METER
    });
    if let Err(e) = check_contiguous(&doc) {
        errors.push(e);
    }
    let mut events = Vec::new();
    for rec in &doc.records {
        match parse_notes(rec) {
            Ok(ev) => events.push(ev),
            Err(e) => errors.push(e),
        }
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    let melody = MelodyLine::new(events, meter).map_err(|e| vec![LineError::new(1, e.to_string())])?;
    Ok(MelodyFile { id: doc.header("id").unwrap_or(fallback_id).to_string(), key, melody })
}

/// Text form accepted by [`parse_melody`].
pub fn melody_to_text(id: &str, key: Option<KeyLabel>, melody: &MelodyLine) -> String {
    let mut out = format!("id: {id}\nmeter: {}\n", melody.meter());
    if let Some(k) = key {
        writeln!(out, "key: {k}").unwrap();
    }
    out.push('\n');
    for (i, ev) in melody.events().iter().enumerate() {
        writeln!(out, "{i} | notes={}", format_notes(ev.notes())).unwrap();
    }
    out
}
