#![allow(dead_code)]

pub mod oracle;
pub mod smf;
pub mod voicing;

use std::path::{Path, PathBuf};

use keychord::corpus::{parse_corpus, parse_melody, Corpus, Genre, MelodyFile};
use keychord::exec::Execution;
use keychord::model::{train, TrainOptions, TrainedModels};

pub fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(rel)
}

pub fn chorale_corpus() -> Corpus {
    parse_corpus(&fixture("chorales"), Genre::Chorale, Execution::Parallel).unwrap()
}

pub fn rock_corpus() -> Corpus {
    parse_corpus(&fixture("rock"), Genre::Rock, Execution::Parallel).unwrap()
}

pub fn chorale_models() -> TrainedModels {
    train(&chorale_corpus(), &TrainOptions::default()).unwrap()
}

pub fn melodies() -> Vec<MelodyFile> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(fixture("melodies"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p).unwrap();
            parse_melody(&text, p.file_stem().unwrap().to_str().unwrap()).unwrap()
        })
        .collect()
}
