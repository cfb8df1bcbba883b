use super::{HmmError, HmmModel, Matrix, TransitionMask};

/// Probability assigned to a masked transition before its row is
/// renormalized.
pub const MASK_EPSILON: f64 = 1e-6;

/// Additive smoothing applied to every unmasked count by default.
pub const DEFAULT_ALPHA: f64 = 0.01;

/// Ordered state and observation alphabets of a model to be fitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelShape {
    pub states: Vec<String>,
    pub observations: Vec<String>,
}

impl ModelShape {
    pub fn new<S: Into<String>, O: Into<String>>(
        states: impl IntoIterator<Item = S>,
        observations: impl IntoIterator<Item = O>,
    ) -> Self {
        ModelShape {
            states: states.into_iter().map(Into::into).collect(),
            observations: observations.into_iter().map(Into::into).collect(),
        }
    }
}

/// One training sequence: hidden labels paired with observed labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledSequence {
    pub hidden: Vec<String>,
    pub observed: Vec<String>,
}

impl LabeledSequence {
    pub fn new<H: ToString, O: ToString>(hidden: &[H], observed: &[O]) -> Self {
        LabeledSequence {
            hidden: hidden.iter().map(ToString::to_string).collect(),
            observed: observed.iter().map(ToString::to_string).collect(),
        }
    }
}

impl HmmModel {
    /// Maximum-likelihood fit with additive smoothing `alpha`.
    ///
    /// Unmasked transitions get `count + alpha`, normalized over the
    /// unmasked cells of the row. Masked cells are then set to
    /// [`MASK_EPSILON`] and the row renormalized. A row with no mass at all
    /// (unseen state, `alpha == 0`) becomes uniform over its allowed cells.
    pub fn estimate(
        shape: &ModelShape,
        sequences: &[LabeledSequence],
        mask: Option<TransitionMask>,
        alpha: f64,
    ) -> Result<HmmModel, HmmError> {
        let lookup = |alphabet: &'static str, labels: &[String], label: &str| {
            labels.iter().position(|l| l == label).ok_or_else(|| HmmError::UnknownLabel {
                alphabet,
                label: label.to_string(),
            })
        };
        let indexed = sequences
            .iter()
            .map(|seq| {
                let hidden = seq
                    .hidden
                    .iter()
                    .map(|h| lookup("state", &shape.states, h))
                    .collect::<Result<Vec<_>, _>>()?;
                let observed = seq
                    .observed
                    .iter()
                    .map(|o| lookup("observation", &shape.observations, o))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok((hidden, observed))
            })
            .collect::<Result<Vec<_>, HmmError>>()?;
        Self::estimate_indexed(shape, &indexed, mask, alpha)
    }

    /// As [`HmmModel::estimate`] with sequences already mapped to indices.
    pub fn estimate_indexed(
        shape: &ModelShape,
        sequences: &[(Vec<usize>, Vec<usize>)],
        mask: Option<TransitionMask>,
        alpha: f64,
    ) -> Result<HmmModel, HmmError> {
        let s = shape.states.len();
        let o = shape.observations.len();
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(HmmError::InvalidModel(format!("smoothing alpha {alpha}")));
        }
        if let Some(m) = &mask {
            if m.size() != s {
                return Err(HmmError::InvalidModel("mask size differs from state count".into()));
            }
        }
        if sequences.iter().all(|(h, _)| h.is_empty()) {
            return Err(HmmError::EmptyTrainingSet);
        }

        let mut trans_counts = Matrix::zeros(s, s);
        let mut emit_counts = Matrix::zeros(s, o);
        let mut init_counts = vec![0.0; s];
        let mut state_counts = vec![0u64; s];
        for (k, (hidden, observed)) in sequences.iter().enumerate() {
            if hidden.len() != observed.len() {
                return Err(HmmError::SequenceLengthMismatch {
                    sequence: k,
                    hidden: hidden.len(),
                    observed: observed.len(),
                });
            }
            if let Some(&bad) = hidden.iter().find(|&&h| h >= s) {
                return Err(HmmError::UnknownLabel { alphabet: "state", label: bad.to_string() });
            }
            if let Some(&bad) = observed.iter().find(|&&x| x >= o) {
                return Err(HmmError::ObservationOutOfRange { index: bad, size: o });
            }
            let Some(&first) = hidden.first() else { continue };
            init_counts[first] += 1.0;
            for (&h, &x) in hidden.iter().zip(observed) {
                emit_counts[(h, x)] += 1.0;
                state_counts[h] += 1;
            }
            for w in hidden.windows(2) {
                trans_counts[(w[0], w[1])] += 1.0;
            }
        }

        let mut transition = Matrix::zeros(s, s);
        for i in 0..s {
            let allowed = |j: usize| mask.as_ref().is_none_or(|m| !m.is_forbidden(i, j));
            let counts = trans_counts.row(i);
            let row = transition.row_mut(i);
            fill_smoothed(row, counts, alpha, allowed);
            if mask.is_some() {
                for (j, cell) in row.iter_mut().enumerate() {
                    if !allowed(j) {
                        *cell = MASK_EPSILON;
                    }
                }
                normalize(row);
            }
        }

        let mut emission = Matrix::zeros(s, o);
        for i in 0..s {
            fill_smoothed(emission.row_mut(i), emit_counts.row(i), alpha, |_| true);
        }

        let mut initial = vec![0.0; s];
        fill_smoothed(&mut initial, &init_counts, alpha, |_| true);

        let epsilon = if mask.is_some() { MASK_EPSILON } else { 0.0 };
        let model = HmmModel::new(
            shape.states.clone(),
            shape.observations.clone(),
            transition,
            emission,
            initial,
        )?;
        Ok(model.with_training_metadata(mask, alpha, epsilon, state_counts))
    }
}

fn fill_smoothed(out: &mut [f64], counts: &[f64], alpha: f64, allowed: impl Fn(usize) -> bool) {
    let total: f64 = (0..counts.len()).filter(|&j| allowed(j)).map(|j| counts[j] + alpha).sum();
    let n_allowed = (0..counts.len()).filter(|&j| allowed(j)).count() as f64;
    for (j, cell) in out.iter_mut().enumerate() {
        *cell = match (allowed(j), total > 0.0) {
            (false, _) => 0.0,
            (true, true) => (counts[j] + alpha) / total,
            (true, false) => 1.0 / n_allowed,
        };
    }
}

fn normalize(row: &mut [f64]) {
    let sum: f64 = row.iter().sum();
    for x in row {
        *x /= sum;
    }
}
