//! First-order hidden Markov models over labeled finite alphabets.
//!
//! Parameters are fitted by counting from fully labeled sequences (hidden
//! states are known at training time), with additive smoothing and an
//! optional mask that pins forbidden transitions near zero. Decoding is
//! available both as a joint argmax (Viterbi, in log space) and as a
//! per-position marginal argmax (scaled forward-backward).

mod csv;
mod decode;
mod estimate;
mod keychord;
mod matrix;
mod model;
mod overrides;

pub use csv::{matrix_to_csv, parse_labeled_csv, LabeledCsv};
pub use decode::{Posterior, ViterbiPath};
pub use estimate::{LabeledSequence, ModelShape, DEFAULT_ALPHA, MASK_EPSILON};
pub use keychord::{
    decode_chords_given_keys, decode_key_chord, decode_two_stage, pitch_class_labels,
    DecodeMethod, TwoStageDecode,
};
pub use matrix::{Matrix, TransitionMask};
pub use model::HmmModel;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HmmError {
    #[error("label `{label}` is not in the {alphabet} alphabet")]
    UnknownLabel { alphabet: &'static str, label: String },
    #[error("observation index {index} is outside an alphabet of {size}")]
    ObservationOutOfRange { index: usize, size: usize },
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("sequence {sequence}: {hidden} hidden labels but {observed} observations")]
    SequenceLengthMismatch { sequence: usize, hidden: usize, observed: usize },
    #[error("observation sequence is empty")]
    EmptyObservations,
    #[error("decoding infeasible: no state can emit the observation at position {position}")]
    Infeasible { position: usize },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("override rejected at {location}: {reason}")]
    OverrideRejected { location: String, reason: String },
    #[error("label parse failed: {0}")]
    LabelParse(String),
}
