use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{KeyLabel, MusicError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Accidental {
    Flat,
    Natural,
    Sharp,
}

impl Accidental {
    fn offset(self) -> i32 {
        match self {
            Accidental::Flat => -1,
            Accidental::Natural => 0,
            Accidental::Sharp => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Quality {
    Major,
    Minor,
    Diminished,
    HalfDiminished,
    Augmented,
}

impl Quality {
    fn is_lowercase(self) -> bool {
        matches!(self, Quality::Minor | Quality::Diminished | Quality::HalfDiminished)
    }

    fn suffix(self) -> &'static str {
        match self {
            Quality::Diminished => "o",
            Quality::HalfDiminished => "ø",
            Quality::Augmented => "+",
            Quality::Major | Quality::Minor => "",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Inversion {
    Root,
    First,
    Second,
    /// Seventh in the bass; only valid for seventh chords.
    Third,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FunctionalGroup {
    Tonic,
    Predominant,
    Dominant,
}

impl FunctionalGroup {
    pub const ALL: [FunctionalGroup; 3] =
        [FunctionalGroup::Tonic, FunctionalGroup::Predominant, FunctionalGroup::Dominant];

    pub fn short_name(self) -> &'static str {
        match self {
            FunctionalGroup::Tonic => "T",
            FunctionalGroup::Predominant => "PD",
            FunctionalGroup::Dominant => "D",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Pitch classes of a chord realized in a particular key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChordTones {
    pub root: u8,
    pub third: u8,
    pub fifth: u8,
    pub seventh: Option<u8>,
}

impl ChordTones {
    pub fn contains(&self, pc: u8) -> bool {
        let pc = pc % 12;
        pc == self.root || pc == self.third || pc == self.fifth || self.seventh == Some(pc)
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        [Some(self.root), Some(self.third), Some(self.fifth), self.seventh]
            .into_iter()
            .flatten()
    }
}

/// Key-relative chord label: scale-degree root, quality, seventh flag and
/// inversion figure. Text form follows the usual figured shorthand:
/// `I`, `ii6`, `V65`, `viio`, `viiø7`, `bVII`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct RomanChord {
    degree: u8,
    accidental: Accidental,
    quality: Quality,
    seventh: bool,
    inversion: Inversion,
}

impl RomanChord {
    pub fn new(
        degree: u8,
        accidental: Accidental,
        quality: Quality,
        seventh: bool,
        inversion: Inversion,
    ) -> Result<Self, MusicError> {
        let label = || format!("degree {degree}");
        if !(1..=7).contains(&degree) {
            return Err(MusicError::InvalidNumeral(label(), "degree must be 1..=7"));
        }
        if inversion == Inversion::Third && !seventh {
            return Err(MusicError::InvalidNumeral(label(), "third inversion needs a seventh"));
        }
        if quality == Quality::HalfDiminished && !seventh {
            return Err(MusicError::InvalidNumeral(label(), "half-diminished needs a seventh"));
        }
        Ok(RomanChord { degree, accidental, quality, seventh, inversion })
    }

    /// Root-position triad shorthand used by tests and the rock vocabulary.
    pub fn triad(degree: u8, accidental: Accidental, quality: Quality) -> Self {
        RomanChord::new(degree, accidental, quality, false, Inversion::Root)
            .expect("valid triad degree")
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn accidental(&self) -> Accidental {
        self.accidental
    }

    pub fn quality(&self) -> Quality {
        self.quality
    }

    pub fn has_seventh(&self) -> bool {
        self.seventh
    }

    pub fn inversion(&self) -> Inversion {
        self.inversion
    }

    /// Root pitch class relative to the tonic. In minor, lowercase numerals
    /// on degrees 6 and 7 take the raised (melodic) roots.
    pub fn root_offset(&self, mode: super::Mode) -> u8 {
        let idx = (self.degree - 1) as usize;
        let mut root = i32::from(mode.degree_roots()[idx]);
        if mode == super::Mode::Minor && self.degree >= 6 && self.quality.is_lowercase() {
            root += 1;
        }
        (root + self.accidental.offset()).rem_euclid(12) as u8
    }

    pub fn tones(&self, key: KeyLabel) -> ChordTones {
        let root_rel = self.root_offset(key.mode());
        let (third, fifth) = match self.quality {
            Quality::Major => (4, 7),
            Quality::Minor => (3, 7),
            Quality::Diminished | Quality::HalfDiminished => (3, 6),
            Quality::Augmented => (4, 8),
        };
        let seventh = self.seventh.then(|| match self.quality {
            Quality::Diminished => 9,
            Quality::HalfDiminished => 10,
            _ => {
                let idx = ((self.degree - 1 + 6) % 7) as usize;
                let diatonic = key.mode().degree_roots()[idx];
                match (diatonic + 12 - root_rel) % 12 {
                    interval @ (10 | 11) => interval,
                    _ => 10,
                }
            }
        });
        let abs = |interval: u8| (key.tonic_pc() + root_rel + interval) % 12;
        ChordTones {
            root: abs(0),
            third: abs(third),
            fifth: abs(fifth),
            seventh: seventh.map(abs),
        }
    }

    pub fn bass_pc(&self, key: KeyLabel) -> u8 {
        let t = self.tones(key);
        match self.inversion {
            Inversion::Root => t.root,
            Inversion::First => t.third,
            Inversion::Second => t.fifth,
            Inversion::Third => t.seventh.unwrap_or(t.root),
        }
    }

    /// Groups whose outgoing allowances this chord may use in the phrase
    /// model. Submediant chords belong to both tonic and predominant.
    pub fn phrase_groups(&self) -> &'static [FunctionalGroup] {
        match self.degree {
            6 => &[FunctionalGroup::Tonic, FunctionalGroup::Predominant],
            _ => match functional_group(self) {
                FunctionalGroup::Tonic => &[FunctionalGroup::Tonic],
                FunctionalGroup::Predominant => &[FunctionalGroup::Predominant],
                FunctionalGroup::Dominant => &[FunctionalGroup::Dominant],
            },
        }
    }

    fn numeral_text(&self) -> String {
        const UPPER: [&str; 7] = ["I", "II", "III", "IV", "V", "VI", "VII"];
        let base = UPPER[(self.degree - 1) as usize];
        if self.quality.is_lowercase() {
            base.to_ascii_lowercase()
        } else {
            base.to_string()
        }
    }
}

/// Phrase-model function of a chord, by scale degree of its root.
/// Submediant chords are reported as tonic.
pub fn functional_group(chord: &RomanChord) -> FunctionalGroup {
    match chord.degree {
        1 | 3 | 6 => FunctionalGroup::Tonic,
        2 | 4 => FunctionalGroup::Predominant,
        _ => FunctionalGroup::Dominant,
    }
}

/// True when `from -> to` goes against the phrase model under every group
/// assignment the two chords admit (dominant to predominant, predominant to
/// tonic).
pub fn is_retrogressive(from: &RomanChord, to: &RomanChord) -> bool {
    use FunctionalGroup::*;
    from.phrase_groups().iter().all(|&g_from| {
        to.phrase_groups()
            .iter()
            .all(|&g_to| matches!((g_from, g_to), (Dominant, Predominant) | (Predominant, Tonic)))
    })
}

impl fmt::Display for RomanChord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.accidental {
            Accidental::Flat => f.write_str("b")?,
            Accidental::Sharp => f.write_str("#")?,
            Accidental::Natural => {}
        }
        f.write_str(&self.numeral_text())?;
        f.write_str(self.quality.suffix())?;
        let figure = match (self.seventh, self.inversion) {
            (false, Inversion::Root) => "",
            (false, Inversion::First) => "6",
            (false, Inversion::Second) => "64",
            (true, Inversion::Root) => "7",
            (true, Inversion::First) => "65",
            (true, Inversion::Second) => "43",
            (true, Inversion::Third) => "42",
            (false, Inversion::Third) => unreachable!("rejected by constructor"),
        };
        f.write_str(figure)
    }
}

impl FromStr for RomanChord {
    type Err = MusicError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = |why| MusicError::InvalidNumeral(text.to_string(), why);
        let mut rest = text.trim();
        let accidental = if let Some(r) = rest.strip_prefix('b').or(rest.strip_prefix('♭')) {
            rest = r;
            Accidental::Flat
        } else if let Some(r) = rest.strip_prefix('#').or(rest.strip_prefix('♯')) {
            rest = r;
            Accidental::Sharp
        } else {
            Accidental::Natural
        };

        let numeral_len = rest
            .char_indices()
            .take_while(|(_, c)| matches!(c, 'I' | 'V' | 'i' | 'v'))
            .map(|(i, c)| i + c.len_utf8())
            .last()
            .ok_or_else(|| bad("missing numeral"))?;
        let numeral = &rest[..numeral_len];
        rest = &rest[numeral_len..];
        let upper = numeral.chars().all(|c| c.is_ascii_uppercase());
        let lower = numeral.chars().all(|c| c.is_ascii_lowercase());
        if !upper && !lower {
            return Err(bad("mixed-case numeral"));
        }
        let degree = match numeral.to_ascii_uppercase().as_str() {
            "I" => 1,
            "II" => 2,
            "III" => 3,
            "IV" => 4,
            "V" => 5,
            "VI" => 6,
            "VII" => 7,
            _ => return Err(bad("unknown numeral")),
        };

        let (quality, tail) = if let Some(r) = rest.strip_prefix('o').or(rest.strip_prefix('°')) {
            (Quality::Diminished, r)
        } else if let Some(r) = rest
            .strip_prefix('ø')
            .or(rest.strip_prefix("/o"))
            .or(rest.strip_prefix('%'))
        {
            (Quality::HalfDiminished, r)
        } else if let Some(r) = rest.strip_prefix('+') {
            (Quality::Augmented, r)
        } else if upper {
            (Quality::Major, rest)
        } else {
            (Quality::Minor, rest)
        };
        match quality {
            Quality::Augmented if lower => return Err(bad("augmented numerals are uppercase")),
            Quality::Diminished | Quality::HalfDiminished if upper => {
                return Err(bad("diminished numerals are lowercase"))
            }
            _ => {}
        }

        let (seventh, inversion) = match tail {
            "" => (false, Inversion::Root),
            "6" => (false, Inversion::First),
            "64" => (false, Inversion::Second),
            "7" => (true, Inversion::Root),
            "65" => (true, Inversion::First),
            "43" => (true, Inversion::Second),
            "42" | "2" => (true, Inversion::Third),
            _ => return Err(bad("unknown inversion figure")),
        };
        RomanChord::new(degree, accidental, quality, seventh, inversion)
            .map_err(|_| bad("inconsistent quality and figure"))
    }
}

impl TryFrom<String> for RomanChord {
    type Error = MusicError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl From<RomanChord> for String {
    fn from(c: RomanChord) -> String {
        c.to_string()
    }
}
