//! Shared musical vocabulary: pitches, keys, Roman-numeral chords and
//! beat-indexed melody lines.

mod key;
mod melody;
mod pitch;
mod roman;

pub use key::{KeyLabel, Mode};
pub use melody::{BeatEvent, MelodyLine, ProgressionAnnotation, DURATION_TOLERANCE};
pub use pitch::{transposed_degree, Pitch};
pub use roman::{
    functional_group, is_retrogressive, Accidental, ChordTones, FunctionalGroup, Inversion,
    Quality, RomanChord,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MusicError {
    #[error("MIDI pitch {0} is outside 0..=127")]
    PitchOutOfRange(i64),
    #[error("invalid key label `{0}`")]
    InvalidKey(String),
    #[error("invalid Roman numeral `{0}`: {1}")]
    InvalidNumeral(String, &'static str),
    #[error("beat {beat}: no notes")]
    EmptyBeat { beat: usize },
    #[error("beat {beat}: durations sum to {sum}, expected 1")]
    DurationSum { beat: usize, sum: f64 },
    #[error("beat {beat}: duration {duration} is not positive")]
    NonPositiveDuration { beat: usize, duration: f64 },
    #[error("beat {beat}: representative pitch is not one of the beat's notes")]
    ForeignRepresentative { beat: usize },
    #[error("melody is empty")]
    EmptyMelody,
    #[error("beat indices must be contiguous from 0; found {found} at position {position}")]
    NonContiguous { position: usize, found: usize },
    #[error("annotation length {found} does not match melody length {expected}")]
    LengthMismatch { expected: usize, found: usize },
}
