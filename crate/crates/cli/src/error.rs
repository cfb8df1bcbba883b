use std::fmt;
use std::process::ExitCode;

use keychord::corpus::CorpusError;
use keychord::export::ExportError;
use keychord::harmonize::HarmonizeError;
use keychord::hmm::HmmError;
use keychord::midi::MidiError;
use keychord::model::{ModelFileError, TrainError};
use keychord::pipeline::AnalyzeError;

/// Failure classes, each with its own exit status.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Infeasible(String),
    Io(String),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Input(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::Io(_) => 4,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Infeasible(m) => write!(f, "infeasible: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        match e {
            CorpusError::Io { .. } => CliError::Io(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<TrainError> for CliError {
    fn from(e: TrainError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ModelFileError> for CliError {
    fn from(e: ModelFileError) -> Self {
        match e {
            ModelFileError::Io { .. } => CliError::Io(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<HmmError> for CliError {
    fn from(e: HmmError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<AnalyzeError> for CliError {
    fn from(e: AnalyzeError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<HarmonizeError> for CliError {
    fn from(e: HarmonizeError) -> Self {
        match e {
            HarmonizeError::Infeasible { .. } => CliError::Infeasible(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<MidiError> for CliError {
    fn from(e: MidiError) -> Self {
        match e {
            MidiError::Io { .. } => CliError::Io(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<ExportError> for CliError {
    fn from(e: ExportError) -> Self {
        match e {
            ExportError::Io { .. } => CliError::Io(e.to_string()),
            ExportError::Model(e) => e.into(),
        }
    }
}
