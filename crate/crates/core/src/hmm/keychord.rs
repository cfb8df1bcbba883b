use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{HmmError, HmmModel};
use crate::music::{transposed_degree, KeyLabel, MelodyLine, ProgressionAnnotation, RomanChord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecodeMethod {
    #[default]
    Viterbi,
    Posterior,
}

impl fmt::Display for DecodeMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecodeMethod::Viterbi => "viterbi",
            DecodeMethod::Posterior => "posterior",
        })
    }
}

impl FromStr for DecodeMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "viterbi" => Ok(DecodeMethod::Viterbi),
            "posterior" => Ok(DecodeMethod::Posterior),
            _ => Err(format!("unknown decode method `{s}` (viterbi|posterior)")),
        }
    }
}

/// Observation alphabet shared by both layers: pitch classes `"0"..="11"`.
pub fn pitch_class_labels() -> Vec<String> {
    (0..12).map(|pc| pc.to_string()).collect()
}

impl HmmModel {
    pub fn decode(&self, obs: &[usize], method: DecodeMethod) -> Result<Vec<usize>, HmmError> {
        match method {
            DecodeMethod::Viterbi => Ok(self.viterbi(obs)?.states),
            DecodeMethod::Posterior => Ok(self.posterior(obs)?.states),
        }
    }

    /// State labels parsed as keys.
    pub fn key_states(&self) -> Result<Vec<KeyLabel>, HmmError> {
        self.states()
            .iter()
            .map(|s| s.parse::<KeyLabel>().map_err(|e| HmmError::LabelParse(e.to_string())))
            .collect()
    }

    /// State labels parsed as Roman numerals.
    pub fn chord_states(&self) -> Result<Vec<RomanChord>, HmmError> {
        self.states()
            .iter()
            .map(|s| s.parse::<RomanChord>().map_err(|e| HmmError::LabelParse(e.to_string())))
            .collect()
    }

    fn pitch_class_observations(&self, pcs: &[u8]) -> Result<Vec<usize>, HmmError> {
        pcs.iter().map(|pc| self.observation_index(&pc.to_string())).collect()
    }
}

/// Indices produced by the two-stage decode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoStageDecode {
    pub keys: Vec<usize>,
    pub chords: Vec<usize>,
    /// Positions where the chord path uses a masked transition (possible
    /// with posterior decoding, which ignores path consistency).
    pub forbidden_chord_steps: Vec<usize>,
}

/// Keys from absolute melody pitch classes, then chords from the melody
/// transposed by each decoded key.
pub fn decode_two_stage(
    key_model: &HmmModel,
    chord_model: &HmmModel,
    pitch_classes: &[u8],
    method: DecodeMethod,
) -> Result<TwoStageDecode, HmmError> {
    let key_labels = key_model.key_states()?;
    let keys = key_model.decode(&key_model.pitch_class_observations(pitch_classes)?, method)?;
    let degrees: Vec<u8> = pitch_classes
        .iter()
        .zip(&keys)
        .map(|(&pc, &k)| (pc + 12 - key_labels[k].tonic_pc()) % 12)
        .collect();
    let chords = chord_model.decode(&chord_model.pitch_class_observations(&degrees)?, method)?;
    let forbidden_chord_steps = chord_model.forbidden_steps(&chords);
    Ok(TwoStageDecode { keys, chords, forbidden_chord_steps })
}

/// Decodes a key and chord per beat from the melody's representative notes.
pub fn decode_key_chord(
    key_model: &HmmModel,
    chord_model: &HmmModel,
    melody: &MelodyLine,
    method: DecodeMethod,
) -> Result<ProgressionAnnotation, HmmError> {
    let pcs: Vec<u8> = melody.representatives().iter().map(|p| p.pitch_class()).collect();
    let decoded = decode_two_stage(key_model, chord_model, &pcs, method)?;
    let key_labels = key_model.key_states()?;
    let chord_labels = chord_model.chord_states()?;
    Ok(ProgressionAnnotation {
        keys: decoded.keys.iter().map(|&k| key_labels[k]).collect(),
        chords: decoded.chords.iter().map(|&c| chord_labels[c]).collect(),
    })
}

/// Chord stage only, with the key sequence supplied by the caller.
pub fn decode_chords_given_keys(
    chord_model: &HmmModel,
    melody: &MelodyLine,
    keys: &[KeyLabel],
    method: DecodeMethod,
) -> Result<Vec<RomanChord>, HmmError> {
    if keys.len() != melody.len() {
        return Err(HmmError::SequenceLengthMismatch {
            sequence: 0,
            hidden: keys.len(),
            observed: melody.len(),
        });
    }
    let degrees: Vec<u8> = melody
        .representatives()
        .iter()
        .zip(keys)
        .map(|(&p, &k)| transposed_degree(p, k))
        .collect();
    let labels = chord_model.chord_states()?;
    let path = chord_model.decode(&chord_model.pitch_class_observations(&degrees)?, method)?;
    Ok(path.into_iter().map(|c| labels[c]).collect())
}
