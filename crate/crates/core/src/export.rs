//! CSV exports of fitted matrices and the functional-group summary.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::hmm::{matrix_to_csv, HmmError, HmmModel, Matrix};
use crate::music::{functional_group, FunctionalGroup, RomanChord};

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Model(#[from] HmmError),
}

pub fn transition_csv(model: &HmmModel) -> String {
    matrix_to_csv(model.states(), model.states(), model.transition())
}

pub fn emission_csv(model: &HmmModel) -> String {
    matrix_to_csv(model.states(), model.observations(), model.emission())
}

fn write(path: PathBuf, text: &str) -> Result<PathBuf, ExportError> {
    std::fs::write(&path, text).map_err(|source| ExportError::Io { path: path.clone(), source })?;
    Ok(path)
}

/// Writes `{prefix}_transition.csv` and `{prefix}_emission.csv` into
/// `out_dir`, creating it if needed.
pub fn export_matrices(model: &HmmModel, prefix: &str, out_dir: &Path) -> Result<Vec<PathBuf>, ExportError> {
    std::fs::create_dir_all(out_dir)
        .map_err(|source| ExportError::Io { path: out_dir.to_path_buf(), source })?;
    Ok(vec![
        write(out_dir.join(format!("{prefix}_transition.csv")), &transition_csv(model))?,
        write(out_dir.join(format!("{prefix}_emission.csv")), &emission_csv(model))?,
    ])
}

/// Transition probabilities between tonic, predominant and dominant groups.
///
/// Entry `(g, h)` is the total probability of moving from a chord of group
/// `g` into any chord of group `h`, averaged over the chords of `g` with
/// weights `counts` (how often each chord occurred in training). Groups with
/// no weight fall back to equal weights; rows are renormalized.
pub fn functional_summary(transition: &Matrix, chords: &[RomanChord], counts: &[u64]) -> Matrix {
    let groups: Vec<FunctionalGroup> = chords.iter().map(functional_group).collect();
    let mut summary = Matrix::zeros(3, 3);
    for g in FunctionalGroup::ALL {
        let members: Vec<usize> = (0..chords.len()).filter(|&i| groups[i] == g).collect();
        if members.is_empty() {
            summary.row_mut(g.index()).fill(1.0 / 3.0);
            continue;
        }
        let total: u64 = members.iter().map(|&i| counts.get(i).copied().unwrap_or(0)).sum();
        let weight = |i: usize| {
            if total == 0 {
                1.0
            } else {
                counts.get(i).copied().unwrap_or(0) as f64
            }
        };
        let row = summary.row_mut(g.index());
        for &i in &members {
            for (j, &p) in transition.row(i).iter().enumerate() {
                row[groups[j].index()] += weight(i) * p;
            }
        }
        let sum: f64 = row.iter().sum();
        row.iter_mut().for_each(|x| *x /= sum);
    }
    summary
}

fn group_labels() -> Vec<String> {
    FunctionalGroup::ALL.iter().map(|g| g.short_name().to_string()).collect()
}

pub fn chord_functional_summary(chord_model: &HmmModel) -> Result<Matrix, HmmError> {
    let chords = chord_model.chord_states()?;
    Ok(functional_summary(chord_model.transition(), &chords, chord_model.state_counts()))
}

pub fn functional_summary_csv(summary: &Matrix) -> String {
    let labels = group_labels();
    matrix_to_csv(&labels, &labels, summary)
}

pub fn export_functional_summary(chord_model: &HmmModel, path: &Path) -> Result<PathBuf, ExportError> {
    let summary = chord_functional_summary(chord_model)?;
    write(path.to_path_buf(), &functional_summary_csv(&summary))
}
