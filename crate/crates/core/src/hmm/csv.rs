use std::fmt::Write as _;

use super::{HmmError, Matrix};

/// Corner cell written in the header row of exported matrices.
const CORNER: &str = "from\\to";

/// Renders a labeled matrix as comma-separated text. Values are printed in
/// scientific notation with 17 significant digits so they parse back to
/// the same `f64`.
pub fn matrix_to_csv(row_labels: &[String], col_labels: &[String], m: &Matrix) -> String {
    let mut out = String::new();
    out.push_str(CORNER);
    for c in col_labels {
        out.push(',');
        out.push_str(c);
    }
    out.push('\n');
    for (label, row) in row_labels.iter().zip(m.iter_rows()) {
        out.push_str(label);
        for v in row {
            write!(out, ",{v:.16e}").expect("write to String");
        }
        out.push('\n');
    }
    out
}

/// A parsed labeled matrix file.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledCsv {
    pub col_labels: Vec<String>,
    pub row_labels: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub fn parse_labeled_csv(text: &str) -> Result<LabeledCsv, HmmError> {
    let reject = |line: usize, reason: String| HmmError::OverrideRejected {
        location: format!("line {line}"),
        reason,
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (_, header) = lines.next().ok_or_else(|| reject(1, "empty file".into()))?;
    let col_labels: Vec<String> =
        header.split(',').skip(1).map(|c| c.trim().to_string()).collect();
    let mut row_labels = Vec::new();
    let mut rows = Vec::new();
    for (line, text) in lines {
        let mut cells = text.split(',').map(str::trim);
        let label = cells.next().unwrap_or_default().to_string();
        let values = cells
            .map(|c| {
                c.parse::<f64>()
                    .map_err(|_| reject(line, format!("row {label}: `{c}` is not a number")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if values.len() != col_labels.len() {
            return Err(reject(
                line,
                format!("row {label} has {} values, expected {}", values.len(), col_labels.len()),
            ));
        }
        row_labels.push(label);
        rows.push(values);
    }
    Ok(LabeledCsv { col_labels, row_labels, rows })
}
