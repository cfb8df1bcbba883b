//! Annotated training corpora and melody input files.

mod chorale;
mod quantize;
mod record;
mod rock;

pub use chorale::{
    melody_to_text, parse_chorale, parse_melody, AnnotatedBeat, AnnotatedChorale, MelodyFile,
};
pub use quantize::{quantize_beats, QuantizeError, RawNote, GRID_PER_BEAT};
pub use record::LineError;
pub use rock::{parse_rock_melody, parse_rock_song, Exclusion, RockMeasure, RockSong};

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::{self, Execution};
use crate::music::Mode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Genre {
    #[default]
    Chorale,
    Rock,
}

impl fmt::Display for Genre {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Genre::Chorale => "chorale",
            Genre::Rock => "rock",
        })
    }
}

impl FromStr for Genre {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "chorale" => Ok(Genre::Chorale),
            "rock" => Ok(Genre::Rock),
            _ => Err(format!("unknown genre `{s}` (chorale|rock)")),
        }
    }
}

/// A parse problem located in a specific file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub file: PathBuf,
    pub line: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.file.display(), self.line, self.message)
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("corpus directory {0} contains no files")]
    EmptyDirectory(PathBuf),
    #[error("{} file(s) failed to parse:\n{}", .0.len(), format_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),
    #[error("no {mode} chorales in corpus")]
    NoChoralesForMode { mode: Mode },
}

fn format_diagnostics(d: &[Diagnostic]) -> String {
    d.iter().map(|x| format!("  {x}")).collect::<Vec<_>>().join("\n")
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Corpus {
    pub genre: Genre,
    pub chorales: Vec<AnnotatedChorale>,
    pub songs: Vec<RockSong>,
    /// Rock songs that parsed but fall outside the training scope.
    pub excluded: Vec<(String, Exclusion)>,
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.chorales.len() + self.songs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Chorales of one mode only, since each trained model covers a single
    /// mode.
    pub fn with_mode(&self, mode: Mode) -> Corpus {
        Corpus {
            genre: self.genre,
            chorales: self.chorales.iter().filter(|c| c.mode == mode).cloned().collect(),
            songs: self.songs.clone(),
            excluded: self.excluded.clone(),
        }
    }
}

enum Parsed {
    Chorale(AnnotatedChorale),
    Song(RockSong),
    Excluded(String, Exclusion),
}

/// Reads every non-hidden file in `dir`, in lexicographic filename order.
pub fn parse_corpus(dir: &Path, genre: Genre, execution: Execution) -> Result<Corpus, CorpusError> {
    let io = |source| CorpusError::Io { path: dir.to_path_buf(), source };
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .filter(|p| !p.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.starts_with('.')))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(CorpusError::EmptyDirectory(dir.to_path_buf()));
    }

    let results = exec::map(execution, &files, |path| parse_file(path, genre));
    let mut corpus = Corpus { genre, ..Corpus::default() };
    let mut diagnostics = Vec::new();
    for result in results {
        match result {
            Ok(Parsed::Chorale(c)) => corpus.chorales.push(c),
            Ok(Parsed::Song(s)) => corpus.songs.push(s),
            Ok(Parsed::Excluded(id, why)) => corpus.excluded.push((id, why)),
            Err(CorpusErrorOrDiag::Diag(d)) => diagnostics.extend(d),
            Err(CorpusErrorOrDiag::Io(e)) => return Err(e),
        }
    }
    if !diagnostics.is_empty() {
        return Err(CorpusError::Invalid(diagnostics));
    }
    Ok(corpus)
}

enum CorpusErrorOrDiag {
    Io(CorpusError),
    Diag(Vec<Diagnostic>),
}

fn parse_file(path: &Path, genre: Genre) -> Result<Parsed, CorpusErrorOrDiag> {
    let text = std::fs::read_to_string(path).map_err(|source| {
        CorpusErrorOrDiag::Io(CorpusError::Io { path: path.to_path_buf(), source })
    })?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("unnamed");
    let located = |errs: Vec<LineError>| {
        CorpusErrorOrDiag::Diag(
            errs.into_iter()
                .map(|e| Diagnostic { file: path.to_path_buf(), line: e.line, message: e.message })
                .collect(),
        )
    };
    match genre {
        Genre::Chorale => parse_chorale(&text, stem).map(Parsed::Chorale).map_err(located),
        Genre::Rock => match parse_rock_song(&text, stem).map_err(located)? {
            Ok(song) => Ok(Parsed::Song(song)),
            Err(why) => Ok(Parsed::Excluded(stem.to_string(), why)),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, text: &str) {
        std::fs::write(dir.join(name), text).unwrap();
    }

    fn eight_beats() -> String {
        let mut s = String::from("id: t\nmode: major\n");
        for i in 0..8 {
            s.push_str(&format!("{i} | notes=72:1 | key=C | roman=I\n"));
        }
        s
    }

    #[test]
    fn single_file_corpus() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "a.txt", &eight_beats());
        let c = parse_corpus(dir.path(), Genre::Chorale, Execution::Sequential).unwrap();
        assert_eq!(c.chorales.len(), 1);
        assert_eq!(c.chorales[0].len(), 8);
    }

    #[test]
    fn empty_directory_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            parse_corpus(dir.path(), Genre::Chorale, Execution::Sequential),
            Err(CorpusError::EmptyDirectory(_))
        ));
    }

    #[test]
    fn diagnostics_name_file_and_line() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "a.txt", &eight_beats());
        write(dir.path(), "b.txt", &eight_beats().replace("3 | notes=72:1", "3 | notes=72:0.9"));
        let err = parse_corpus(dir.path(), Genre::Chorale, Execution::Parallel).unwrap_err();
        let CorpusError::Invalid(d) = err else { panic!("{err}") };
        assert_eq!(d.len(), 1);
        assert!(d[0].file.ends_with("b.txt"));
        assert_eq!(d[0].line, 6);
    }

    #[test]
    fn order_is_lexicographic_regardless_of_schedule() {
        let dir = tempfile::tempdir().unwrap();
        for name in ["c", "a", "b", "e", "d"] {
            write(dir.path(), name, &eight_beats().replace("id: t", &format!("id: {name}")));
        }
        let seq = parse_corpus(dir.path(), Genre::Chorale, Execution::Sequential).unwrap();
        let par = parse_corpus(dir.path(), Genre::Chorale, Execution::Parallel).unwrap();
        let ids: Vec<_> = par.chorales.iter().map(|c| c.id.as_str()).collect();
        assert_eq!(ids, ["a", "b", "c", "d", "e"]);
        assert_eq!(seq, par);
    }
}
