use std::fmt;

use serde::{Deserialize, Serialize};

use super::{KeyLabel, MusicError};

/// A MIDI note number, 0..=127.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Pitch(u8);

impl Pitch {
    pub const MAX: u8 = 127;

    pub fn new(midi: i64) -> Result<Self, MusicError> {
        if (0..=i64::from(Self::MAX)).contains(&midi) {
            Ok(Pitch(midi as u8))
        } else {
            Err(MusicError::PitchOutOfRange(midi))
        }
    }

    pub fn midi(self) -> u8 {
        self.0
    }

    pub fn pitch_class(self) -> u8 {
        self.0 % 12
    }

    /// Shifts by `semitones`, failing if the result leaves the MIDI range.
    pub fn transpose(self, semitones: i32) -> Result<Self, MusicError> {
        Pitch::new(i64::from(self.0) + i64::from(semitones))
    }
}

impl TryFrom<u8> for Pitch {
    type Error = MusicError;

    fn try_from(value: u8) -> Result<Self, Self::Error> {
        Pitch::new(i64::from(value))
    }
}

impl From<Pitch> for u8 {
    fn from(p: Pitch) -> u8 {
        p.0
    }
}

impl fmt::Display for Pitch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Melody pitch class measured upward from the key tonic, in 0..12.
///
/// This is the chord layer's observation symbol. It depends only on pitch
/// classes, so it is octave invariant.
pub fn transposed_degree(m: Pitch, key: KeyLabel) -> u8 {
    (m.pitch_class() + 12 - key.tonic_pc()) % 12
}
