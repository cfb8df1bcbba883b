use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::MusicError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Major,
    Minor,
}

impl Mode {
    /// Scale used for diatonic membership. Minor uses the harmonic form so
    /// the leading tone counts as diatonic.
    pub fn scale(self) -> [u8; 7] {
        match self {
            Mode::Major => [0, 2, 4, 5, 7, 9, 11],
            Mode::Minor => [0, 2, 3, 5, 7, 8, 11],
        }
    }

    /// Roots of the scale degrees as used by Roman numerals (natural minor).
    pub(crate) fn degree_roots(self) -> [u8; 7] {
        match self {
            Mode::Major => [0, 2, 4, 5, 7, 9, 11],
            Mode::Minor => [0, 2, 3, 5, 7, 8, 10],
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Major => "major",
            Mode::Minor => "minor",
        })
    }
}

impl FromStr for Mode {
    type Err = MusicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "major" => Ok(Mode::Major),
            "minor" => Ok(Mode::Minor),
            _ => Err(MusicError::InvalidKey(s.to_string())),
        }
    }
}

const NAMES: [&str; 12] = [
    "C", "C#", "D", "Eb", "E", "F", "F#", "G", "Ab", "A", "Bb", "B",
];

/// A tonality: tonic pitch class plus mode. Exactly 24 values exist.
///
/// Canonical text form is the tonic letter, uppercase for major and
/// lowercase for minor, with `#` or `b` accidentals (`C`, `f#`, `Bb`, `eb`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct KeyLabel {
    mode: Mode,
    tonic_pc: u8,
}

impl KeyLabel {
    pub const COUNT: usize = 24;

    pub fn new(tonic_pc: u8, mode: Mode) -> Result<Self, MusicError> {
        if tonic_pc < 12 {
            Ok(KeyLabel { mode, tonic_pc })
        } else {
            Err(MusicError::InvalidKey(format!("tonic {tonic_pc}")))
        }
    }

    pub fn major(tonic_pc: u8) -> Self {
        KeyLabel { mode: Mode::Major, tonic_pc: tonic_pc % 12 }
    }

    pub fn minor(tonic_pc: u8) -> Self {
        KeyLabel { mode: Mode::Minor, tonic_pc: tonic_pc % 12 }
    }

    pub fn tonic_pc(self) -> u8 {
        self.tonic_pc
    }

    pub fn mode(self) -> Mode {
        self.mode
    }

    /// Position in [`KeyLabel::all`]: majors 0..12 then minors 12..24.
    pub fn index(self) -> usize {
        let base = match self.mode {
            Mode::Major => 0,
            Mode::Minor => 12,
        };
        base + self.tonic_pc as usize
    }

    pub fn from_index(index: usize) -> Option<Self> {
        match index {
            0..=11 => Some(KeyLabel::major(index as u8)),
            12..=23 => Some(KeyLabel::minor((index - 12) as u8)),
            _ => None,
        }
    }

    pub fn all() -> impl Iterator<Item = KeyLabel> {
        (0..Self::COUNT).filter_map(KeyLabel::from_index)
    }

    pub fn transpose(self, semitones: i32) -> Self {
        let pc = (i32::from(self.tonic_pc) + semitones).rem_euclid(12) as u8;
        KeyLabel { mode: self.mode, tonic_pc: pc }
    }

    pub fn leading_tone_pc(self) -> u8 {
        (self.tonic_pc + 11) % 12
    }

    pub fn is_diatonic(self, pitch_class: u8) -> bool {
        let rel = (pitch_class % 12 + 12 - self.tonic_pc) % 12;
        self.mode.scale().contains(&rel)
    }
}

impl fmt::Display for KeyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = NAMES[self.tonic_pc as usize];
        match self.mode {
            Mode::Major => f.write_str(name),
            Mode::Minor => f.write_str(&name.to_ascii_lowercase()),
        }
    }
}

impl FromStr for KeyLabel {
    type Err = MusicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || MusicError::InvalidKey(s.to_string());
        let mut chars = s.trim().chars();
        let letter = chars.next().ok_or_else(err)?;
        let base: i32 = match letter.to_ascii_uppercase() {
            'C' => 0,
            'D' => 2,
            'E' => 4,
            'F' => 5,
            'G' => 7,
            'A' => 9,
            'B' => 11,
            _ => return Err(err()),
        };
        let mode = if letter.is_ascii_uppercase() { Mode::Major } else { Mode::Minor };
        let mut offset: i32 = 0;
        for c in chars {
            offset += match c {
                '#' | '♯' => 1,
                'b' | '-' | '♭' => -1,
                _ => return Err(err()),
            };
        }
        if offset.abs() > 2 {
            return Err(err());
        }
        Ok(KeyLabel { mode, tonic_pc: (base + offset).rem_euclid(12) as u8 })
    }
}

impl TryFrom<String> for KeyLabel {
    type Error = MusicError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl From<KeyLabel> for String {
    fn from(k: KeyLabel) -> String {
        k.to_string()
    }
}
