//! Training and persistence of a paired key/chord model.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Corpus, Genre};
use crate::hmm::{
    pitch_class_labels, HmmError, HmmModel, LabeledSequence, ModelShape, TransitionMask,
    DEFAULT_ALPHA,
};
use crate::music::{is_retrogressive, transposed_degree, KeyLabel, Mode, MusicError, RomanChord};
use crate::ornament::{estimate_ornament_rates, OrnamentConfig};
use crate::rock::rock_numeral;

pub const MODEL_FORMAT: &str = "keychord-model/1";

#[derive(Debug, Error)]
pub enum TrainError {
    #[error("no {0} chorales in corpus")]
    NoChoralesForMode(Mode),
    #[error("no usable rock songs in corpus ({excluded} excluded)")]
    NoSongs { excluded: usize },
    #[error("corpus genre is {found}, expected {expected}")]
    WrongGenre { expected: Genre, found: Genre },
    #[error(transparent)]
    Music(#[from] MusicError),
    #[error(transparent)]
    Hmm(#[from] HmmError),
}

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("{path}: unsupported model format `{found}`")]
    Format { path: String, found: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainOptions {
    pub mode: Mode,
    pub alpha: f64,
    /// `None` uses the genre default: masked for chorales, unmasked for rock.
    pub mask: Option<bool>,
}

impl Default for TrainOptions {
    fn default() -> Self {
        TrainOptions { mode: Mode::Major, alpha: DEFAULT_ALPHA, mask: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainingStats {
    pub pieces: usize,
    pub events: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModels {
    pub format: String,
    pub genre: Genre,
    pub mode: Mode,
    pub alpha: f64,
    pub mask_enabled: bool,
    pub key_model: HmmModel,
    pub chord_model: HmmModel,
    pub ornament_rates: Option<OrnamentConfig>,
    pub stats: TrainingStats,
}

/// Forbids every chord transition that is retrogressive in the phrase model.
pub fn phrase_mask(chords: &[RomanChord]) -> TransitionMask {
    TransitionMask::from_fn(chords.len(), |i, j| is_retrogressive(&chords[i], &chords[j]))
}

pub fn train(corpus: &Corpus, opts: &TrainOptions) -> Result<TrainedModels, TrainError> {
    match corpus.genre {
        Genre::Chorale => train_chorale(corpus, opts),
        Genre::Rock => train_rock(corpus, opts),
    }
}

/// Fits both layers on the corpus chorales of `opts.mode`, each moved to
/// C major or A minor first.
pub fn train_chorale(corpus: &Corpus, opts: &TrainOptions) -> Result<TrainedModels, TrainError> {
    if corpus.genre != Genre::Chorale {
        return Err(TrainError::WrongGenre { expected: Genre::Chorale, found: corpus.genre });
    }
    let chorales = corpus
        .chorales
        .iter()
        .filter(|c| c.mode == opts.mode)
        .map(|c| c.transpose_to_reference())
        .collect::<Result<Vec<_>, _>>()?;
    if chorales.is_empty() {
        return Err(TrainError::NoChoralesForMode(opts.mode));
    }
    let vocabulary: Vec<RomanChord> = chorales
        .iter()
        .flat_map(|c| c.beats().iter().map(|b| b.chord))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    let mut key_seqs = Vec::with_capacity(chorales.len());
    let mut chord_seqs = Vec::with_capacity(chorales.len());
    for c in &chorales {
        let keys: Vec<KeyLabel> = c.beats().iter().map(|b| b.key).collect();
        let pcs: Vec<u8> = c.beats().iter().map(|b| b.event.representative().pitch_class()).collect();
        let degrees: Vec<u8> =
            c.beats().iter().map(|b| transposed_degree(b.event.representative(), b.key)).collect();
        let chords: Vec<RomanChord> = c.beats().iter().map(|b| b.chord).collect();
        key_seqs.push(LabeledSequence::new(&keys, &pcs));
        chord_seqs.push(LabeledSequence::new(&chords, &degrees));
    }

    let mask_enabled = opts.mask.unwrap_or(true);
    let key_shape = ModelShape::new(KeyLabel::all().map(|k| k.to_string()), pitch_class_labels());
    let chord_shape = ModelShape::new(vocabulary.iter().map(ToString::to_string), pitch_class_labels());
    let key_model = HmmModel::estimate(&key_shape, &key_seqs, None, opts.alpha)?;
    let mask = mask_enabled.then(|| phrase_mask(&vocabulary));
    let chord_model = HmmModel::estimate(&chord_shape, &chord_seqs, mask, opts.alpha)?;

    let transposed = Corpus { chorales, ..Corpus::default() };
    Ok(TrainedModels {
        format: MODEL_FORMAT.to_string(),
        genre: Genre::Chorale,
        mode: opts.mode,
        alpha: opts.alpha,
        mask_enabled,
        key_model,
        chord_model,
        ornament_rates: Some(estimate_ornament_rates(&transposed)),
        stats: TrainingStats {
            pieces: transposed.chorales.len(),
            events: transposed.chorales.iter().map(|c| c.len()).sum(),
        },
    })
}

/// Fits measure-level models over the twelve major keys and the
/// root-position numerals present in the songs.
pub fn train_rock(corpus: &Corpus, opts: &TrainOptions) -> Result<TrainedModels, TrainError> {
    if corpus.genre != Genre::Rock {
        return Err(TrainError::WrongGenre { expected: Genre::Rock, found: corpus.genre });
    }
    if corpus.songs.is_empty() {
        return Err(TrainError::NoSongs { excluded: corpus.excluded.len() });
    }
    let roots: BTreeSet<u8> =
        corpus.songs.iter().flat_map(|s| s.measures.iter().map(|m| m.numeral_root_pc)).collect();
    let vocabulary: Vec<RomanChord> = roots.iter().map(|&r| rock_numeral(r)).collect();

    let mut key_seqs = Vec::new();
    let mut chord_seqs = Vec::new();
    for song in &corpus.songs {
        let keys: Vec<String> =
            song.measures.iter().map(|m| KeyLabel::major(m.key_pc).to_string()).collect();
        let pcs: Vec<u8> = song.measures.iter().map(|m| m.melody_degree_pc).collect();
        let degrees: Vec<u8> =
            song.measures.iter().map(|m| (m.melody_degree_pc + 12 - m.key_pc) % 12).collect();
        let chords: Vec<String> =
            song.measures.iter().map(|m| rock_numeral(m.numeral_root_pc).to_string()).collect();
        key_seqs.push(LabeledSequence::new(&keys, &pcs));
        chord_seqs.push(LabeledSequence::new(&chords, &degrees));
    }

    let mask_enabled = opts.mask.unwrap_or(false);
    let key_shape = ModelShape::new((0..12).map(|pc| KeyLabel::major(pc).to_string()), pitch_class_labels());
    let chord_shape = ModelShape::new(vocabulary.iter().map(ToString::to_string), pitch_class_labels());
    let key_model = HmmModel::estimate(&key_shape, &key_seqs, None, opts.alpha)?;
    let mask = mask_enabled.then(|| phrase_mask(&vocabulary));
    let chord_model = HmmModel::estimate(&chord_shape, &chord_seqs, mask, opts.alpha)?;

    Ok(TrainedModels {
        format: MODEL_FORMAT.to_string(),
        genre: Genre::Rock,
        mode: Mode::Major,
        alpha: opts.alpha,
        mask_enabled,
        key_model,
        chord_model,
        ornament_rates: None,
        stats: TrainingStats {
            pieces: corpus.songs.len(),
            events: corpus.songs.iter().map(|s| s.measures.len()).sum(),
        },
    })
}

impl TrainedModels {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("model serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str, path: &str) -> Result<Self, ModelFileError> {
        let model: TrainedModels = serde_json::from_str(text)
            .map_err(|source| ModelFileError::Json { path: path.to_string(), source })?;
        if model.format != MODEL_FORMAT {
            return Err(ModelFileError::Format { path: path.to_string(), found: model.format });
        }
        Ok(model)
    }

    pub fn save(&self, path: &Path) -> Result<(), ModelFileError> {
        std::fs::write(path, self.to_json())
            .map_err(|source| ModelFileError::Io { path: path.display().to_string(), source })
    }

    pub fn load(path: &Path) -> Result<Self, ModelFileError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ModelFileError::Io { path: path.display().to_string(), source })?;
        Self::from_json(&text, &path.display().to_string())
    }

    /// Shift that takes a melody in `key` to this model's reference tonic
    /// (C major or A minor), by the smallest move.
    pub fn reference_shift(&self, key: KeyLabel) -> i32 {
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
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_chorale;

    fn tiny_corpus() -> Corpus {
        let text = "\
id: a
mode: major
0 | notes=74:1 | key=D | roman=I
1 | notes=73:1 | key=D | roman=V
2 | notes=71:1 | key=D | roman=vi
3 | notes=69:1 | key=D | roman=IV
4 | notes=69:1 | key=D | roman=V
5 | notes=74:1 | key=D | roman=I
";
        Corpus { chorales: vec![parse_chorale(text, "a").unwrap()], ..Corpus::default() }
    }

    #[test]
    fn chorale_training_transposes_and_masks() {
        let m = train(&tiny_corpus(), &TrainOptions::default()).unwrap();
        assert_eq!(m.key_model.n_states(), 24);
        let labels: Vec<&str> = m.chord_model.states().iter().map(String::as_str).collect();
        assert_eq!(labels, ["I", "IV", "V", "vi"]);
        let c = m.key_model.state_index("C").unwrap();
        assert_eq!(m.key_model.initial().iter().cloned().fold(f64::MIN, f64::max), m.key_model.initial()[c]);
        let mask = m.chord_model.mask().unwrap();
        // V -> IV is dominant to predominant
        assert!(mask.is_forbidden(2, 1));
        assert!(!mask.is_forbidden(2, 3));
        assert_eq!(m.stats, TrainingStats { pieces: 1, events: 6 });
    }

    #[test]
    fn no_mask_option() {
        let opts = TrainOptions { mask: Some(false), ..TrainOptions::default() };
        assert!(train(&tiny_corpus(), &opts).unwrap().chord_model.mask().is_none());
    }

    #[test]
    fn missing_mode_is_an_error() {
        let opts = TrainOptions { mode: Mode::Minor, ..TrainOptions::default() };
        assert!(matches!(train(&tiny_corpus(), &opts), Err(TrainError::NoChoralesForMode(Mode::Minor))));
    }

    #[test]
    fn json_round_trip_is_stable() {
        let m = train(&tiny_corpus(), &TrainOptions::default()).unwrap();
        let json = m.to_json();
        let back = TrainedModels::from_json(&json, "mem").unwrap();
        assert_eq!(back, m);
        assert_eq!(back.to_json(), json);
        let bad = json.replace(MODEL_FORMAT, "other/9");
        assert!(matches!(TrainedModels::from_json(&bad, "mem"), Err(ModelFileError::Format { .. })));
    }
}
