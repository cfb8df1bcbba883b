use super::{parse_labeled_csv, HmmError, HmmModel, Matrix};

/// Row sums may be off by at most this much; such rows are rescaled.
pub const OVERRIDE_ROW_TOLERANCE: f64 = 0.01;

impl HmmModel {
    /// Returns a copy with the transition matrix taken from a labeled CSV
    /// document. Labels must match the state alphabet in order. The mask is
    /// not re-applied: an override may deliberately revive masked cells.
    pub fn apply_override(&self, csv_text: &str) -> Result<HmmModel, HmmError> {
        let parsed = parse_labeled_csv(csv_text)?;
        let reject = |location: String, reason: String| HmmError::OverrideRejected {
            location,
            reason,
        };
        let states = self.states();
        if parsed.col_labels != states {
            return Err(reject(
                "header".into(),
                format!(
                    "column labels {:?} do not match states {:?}",
                    parsed.col_labels, states
                ),
            ));
        }
        if parsed.rows.len() != states.len() {
            return Err(reject(
                "rows".into(),
                format!("{} rows for a {}-state model", parsed.rows.len(), states.len()),
            ));
        }
        let mut rows = Vec::with_capacity(states.len());
        for ((label, expected), mut row) in
            parsed.row_labels.iter().zip(states).zip(parsed.rows)
        {
            let at = || format!("row {label}");
            if label != expected {
                return Err(reject(at(), format!("expected label {expected}")));
            }
            if let Some(v) = row.iter().find(|v| !v.is_finite() || **v < 0.0) {
                return Err(reject(at(), format!("entry {v} is not a probability")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > OVERRIDE_ROW_TOLERANCE {
                return Err(reject(at(), format!("row sums to {sum}")));
            }
            if (sum - 1.0).abs() > 1e-12 {
                row.iter_mut().for_each(|v| *v /= sum);
            }
            rows.push(row);
        }
        let matrix = Matrix::from_rows(rows).map_err(|e| reject("matrix".into(), e))?;
        self.replace_transition(matrix)
    }
}
