//! Line-level grammar shared by every corpus and melody file.
//!
//! ```text
//! # comment
//! id: bwv269
//! mode: major
//!
//! 0 | notes=72:1 | key=C | roman=I
//! 1 | notes=71:0.5,69:0.5 | key=C | roman=V6
//! ```
//!
//! Header lines (`name: value`) come before the first record. Each record
//! starts with its integer index followed by `|`-separated `name=value`
//! fields.

use std::collections::BTreeMap;

/// A problem found at a specific line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineError {
    pub line: usize,
    pub message: String,
}

impl LineError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        LineError { line, message: message.into() }
    }
}

impl std::fmt::Display for LineError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub line: usize,
    pub index: usize,
    pub fields: BTreeMap<String, String>,
}

impl Record {
    pub fn get(&self, name: &str) -> Option<&str> {
        self.fields.get(name).map(String::as_str)
    }

    pub fn require(&self, name: &str) -> Result<&str, LineError> {
        self.get(name)
            .ok_or_else(|| LineError::new(self.line, format!("record {}: missing `{name}`", self.index)))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Document {
    pub header: BTreeMap<String, (usize, String)>,
    pub records: Vec<Record>,
}

impl Document {
    pub fn header(&self, name: &str) -> Option<&str> {
        self.header.get(name).map(|(_, v)| v.as_str())
    }

    pub fn header_line(&self, name: &str) -> usize {
        self.header.get(name).map_or(1, |(l, _)| *l)
    }
}

pub fn parse_document(text: &str) -> Result<Document, Vec<LineError>> {
    let mut doc = Document::default();
    let mut errors = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        // `#` also spells sharps, so comments are whole lines only.
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        if content.contains('|') || content.chars().all(|c| c.is_ascii_digit()) {
            match parse_record(line, content) {
                Ok(rec) => doc.records.push(rec),
                Err(e) => errors.push(e),
            }
        } else if let Some((name, value)) = content.split_once(':') {
            if !doc.records.is_empty() {
                errors.push(LineError::new(line, "header line after the first record"));
                continue;
            }
            let name = name.trim().to_ascii_lowercase();
            if doc.header.insert(name.clone(), (line, value.trim().to_string())).is_some() {
                errors.push(LineError::new(line, format!("duplicate header `{name}`")));
            }
        } else {
            errors.push(LineError::new(line, format!("unrecognized line `{content}`")));
        }
    }
    if errors.is_empty() {
        Ok(doc)
    } else {
        Err(errors)
    }
}

fn parse_record(line: usize, content: &str) -> Result<Record, LineError> {
    let mut parts = content.split('|').map(str::trim);
    let head = parts.next().unwrap_or_default();
    let index = head
        .parse::<usize>()
        .map_err(|_| LineError::new(line, format!("record index `{head}` is not an integer")))?;
    let mut fields = BTreeMap::new();
    for part in parts {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| LineError::new(line, format!("field `{part}` is not name=value")))?;
        let name = name.trim().to_string();
        if fields.insert(name.clone(), value.trim().to_string()).is_some() {
            return Err(LineError::new(line, format!("duplicate field `{name}`")));
        }
    }
    Ok(Record { line, index, fields })
}

/// Parses a duration written as a decimal (`0.5`) or fraction (`1/2`).
pub fn parse_fraction(text: &str) -> Option<f64> {
    let text = text.trim();
    let value = match text.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().ok()?;
            let d: f64 = d.trim().parse().ok()?;
            if d == 0.0 {
                return None;
            }
            n / d
        }
        None => text.parse().ok()?,
    };
    value.is_finite().then_some(value)
}
