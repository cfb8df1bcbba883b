//! Trained-model entry points shared by the command line and tests.

use serde::{Deserialize, Serialize};

use crate::harmonize::{harmonize_annotated, HarmonizeConfig, HarmonizeError, Harmonization};
use crate::hmm::{decode_two_stage, DecodeMethod, HmmError};
use crate::model::TrainedModels;
use crate::music::{KeyLabel, MelodyLine, MusicError, ProgressionAnnotation};
use crate::ornament::{insert_ornaments, OrnamentConfig};

#[derive(Debug, thiserror::Error)]
pub enum AnalyzeError {
    #[error(transparent)]
    Decode(#[from] HmmError),
    #[error("cannot move melody to the reference key: {0}")]
    Transpose(#[from] MusicError),
}

impl From<AnalyzeError> for HarmonizeError {
    fn from(e: AnalyzeError) -> Self {
        match e {
            AnalyzeError::Decode(e) => HarmonizeError::Decode(e),
            AnalyzeError::Transpose(e) => HarmonizeError::Music(e),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Analysis {
    pub annotation: ProgressionAnnotation,
    /// Beats entered through a masked chord transition.
    pub forbidden_steps: Vec<usize>,
}

impl Analysis {
    /// One line per beat: index, key, Roman numeral.
    pub fn to_text(&self) -> String {
        self.annotation
            .keys
            .iter()
            .zip(&self.annotation.chords)
            .enumerate()
            .map(|(t, (k, c))| format!("{t}\t{k}\t{c}\n"))
            .collect()
    }
}

/// Decodes keys and chords. With a `key_hint`, the melody is moved to the
/// model's reference tonic for decoding and the keys moved back after.
pub fn analyze(
    models: &TrainedModels,
    melody: &MelodyLine,
    key_hint: Option<KeyLabel>,
    method: DecodeMethod,
) -> Result<Analysis, AnalyzeError> {
    let shift = key_hint.map_or(0, |k| models.reference_shift(k));
    let pcs: Vec<u8> = melody
        .representatives()
        .iter()
        .map(|p| ((i32::from(p.pitch_class()) + shift).rem_euclid(12)) as u8)
        .collect();
    let decoded = decode_two_stage(&models.key_model, &models.chord_model, &pcs, method)?;
    let keys = models.key_model.key_states()?;
    let chords = models.chord_model.chord_states()?;
    Ok(Analysis {
        annotation: ProgressionAnnotation {
            keys: decoded.keys.iter().map(|&k| keys[k].transpose(-shift)).collect(),
            chords: decoded.chords.iter().map(|&c| chords[c]).collect(),
        },
        forbidden_steps: decoded.forbidden_chord_steps,
    })
}

/// Full chorale pipeline: analysis, voicing, then optional ornaments.
pub fn harmonize(
    models: &TrainedModels,
    melody: &MelodyLine,
    key_hint: Option<KeyLabel>,
    method: DecodeMethod,
    config: &HarmonizeConfig,
    ornaments: Option<&OrnamentConfig>,
) -> Result<Harmonization, HarmonizeError> {
    let analysis = analyze(models, melody, key_hint, method)?;
    let mut h = harmonize_annotated(melody, analysis.annotation, config)?;
    for t in analysis.forbidden_steps {
        h.diagnostics.push(format!(
            "beat {t}: masked transition {} -> {}",
            h.annotation.chords[t - 1],
            h.annotation.chords[t]
        ));
    }
    Ok(match ornaments {
        Some(cfg) => insert_ornaments(&h, cfg),
        None => h,
    })
}
