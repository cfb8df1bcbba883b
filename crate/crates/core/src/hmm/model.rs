use serde::{Deserialize, Serialize};

use super::{HmmError, Matrix, TransitionMask};

const STOCHASTIC_TOLERANCE: f64 = 1e-9;

/// A fitted (or hand-built) HMM with labeled alphabets.
///
/// Every transition and emission row, and the initial vector, is a
/// probability distribution. The mask is metadata recording which
/// transitions were pinned during estimation; decoding never consults it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModel")]
pub struct HmmModel {
    states: Vec<String>,
    observations: Vec<String>,
    transition: Matrix,
    emission: Matrix,
    initial: Vec<f64>,
    mask: Option<TransitionMask>,
    smoothing_alpha: f64,
    mask_epsilon: f64,
    state_counts: Vec<u64>,
}

#[derive(Deserialize)]
struct RawModel {
    states: Vec<String>,
    observations: Vec<String>,
    transition: Matrix,
    emission: Matrix,
    initial: Vec<f64>,
    mask: Option<TransitionMask>,
    smoothing_alpha: f64,
    mask_epsilon: f64,
    state_counts: Vec<u64>,
}

impl TryFrom<RawModel> for HmmModel {
    type Error = HmmError;

    fn try_from(raw: RawModel) -> Result<Self, Self::Error> {
        let mut model = HmmModel::new(
            raw.states,
            raw.observations,
            raw.transition,
            raw.emission,
            raw.initial,
        )?;
        if raw.state_counts.len() != model.states.len() {
            return Err(HmmError::InvalidModel("state_counts length".into()));
        }
        if let Some(mask) = &raw.mask {
            if mask.size() != model.states.len() {
                return Err(HmmError::InvalidModel("mask size".into()));
            }
        }
        model.mask = raw.mask;
        model.smoothing_alpha = raw.smoothing_alpha;
        model.mask_epsilon = raw.mask_epsilon;
        model.state_counts = raw.state_counts;
        Ok(model)
    }
}

impl HmmModel {
    /// Assembles a model from explicit parameters, validating shapes and
    /// stochasticity.
    pub fn new(
        states: Vec<String>,
        observations: Vec<String>,
        transition: Matrix,
        emission: Matrix,
        initial: Vec<f64>,
    ) -> Result<Self, HmmError> {
        let s = states.len();
        let o = observations.len();
        if s == 0 || o == 0 {
            return Err(HmmError::InvalidModel("empty alphabet".into()));
        }
        if transition.rows() != s || transition.cols() != s {
            return Err(HmmError::InvalidModel(format!(
                "transition is {}x{}, expected {s}x{s}",
                transition.rows(),
                transition.cols()
            )));
        }
        if emission.rows() != s || emission.cols() != o {
            return Err(HmmError::InvalidModel(format!(
                "emission is {}x{}, expected {s}x{o}",
                emission.rows(),
                emission.cols()
            )));
        }
        if initial.len() != s {
            return Err(HmmError::InvalidModel("initial length".into()));
        }
        check_distribution("initial", &initial)?;
        for (i, row) in transition.iter_rows().enumerate() {
            check_distribution(&format!("transition row {}", states[i]), row)?;
        }
        for (i, row) in emission.iter_rows().enumerate() {
            check_distribution(&format!("emission row {}", states[i]), row)?;
        }
        Ok(HmmModel {
            state_counts: vec![0; s],
            states,
            observations,
            transition,
            emission,
            initial,
            mask: None,
            smoothing_alpha: 0.0,
            mask_epsilon: 0.0,
        })
    }

    pub(crate) fn with_training_metadata(
        mut self,
        mask: Option<TransitionMask>,
        alpha: f64,
        epsilon: f64,
        state_counts: Vec<u64>,
    ) -> Self {
        self.mask = mask;
        self.smoothing_alpha = alpha;
        self.mask_epsilon = epsilon;
        self.state_counts = state_counts;
        self
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn observations(&self) -> &[String] {
        &self.observations
    }

    pub fn transition(&self) -> &Matrix {
        &self.transition
    }

    pub fn emission(&self) -> &Matrix {
        &self.emission
    }

    pub fn initial(&self) -> &[f64] {
        &self.initial
    }

    pub fn mask(&self) -> Option<&TransitionMask> {
        self.mask.as_ref()
    }

    pub fn smoothing_alpha(&self) -> f64 {
        self.smoothing_alpha
    }

    pub fn mask_epsilon(&self) -> f64 {
        self.mask_epsilon
    }

    /// How often each hidden state appeared in the training labels.
    pub fn state_counts(&self) -> &[u64] {
        &self.state_counts
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn n_observations(&self) -> usize {
        self.observations.len()
    }

    pub fn state_index(&self, label: &str) -> Result<usize, HmmError> {
        self.states.iter().position(|s| s == label).ok_or_else(|| HmmError::UnknownLabel {
            alphabet: "state",
            label: label.to_string(),
        })
    }

    pub fn observation_index(&self, label: &str) -> Result<usize, HmmError> {
        self.observations.iter().position(|s| s == label).ok_or_else(|| {
            HmmError::UnknownLabel { alphabet: "observation", label: label.to_string() }
        })
    }

    /// Replaces the transition matrix without re-applying the mask.
    pub(crate) fn replace_transition(&self, transition: Matrix) -> Result<Self, HmmError> {
        let mut next = HmmModel::new(
            self.states.clone(),
            self.observations.clone(),
            transition,
            self.emission.clone(),
            self.initial.clone(),
        )?;
        next.mask = self.mask.clone();
        next.smoothing_alpha = self.smoothing_alpha;
        next.mask_epsilon = self.mask_epsilon;
        next.state_counts = self.state_counts.clone();
        Ok(next)
    }

    /// Positions `t` where the step `path[t-1] -> path[t]` is masked.
    pub fn forbidden_steps(&self, path: &[usize]) -> Vec<usize> {
        let Some(mask) = &self.mask else { return Vec::new() };
        path.windows(2)
            .enumerate()
            .filter(|(_, w)| mask.is_forbidden(w[0], w[1]))
            .map(|(t, _)| t + 1)
            .collect()
    }
}

fn check_distribution(what: &str, values: &[f64]) -> Result<(), HmmError> {
    if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(HmmError::InvalidModel(format!("{what} has invalid entry {v}")));
    }
    let sum: f64 = values.iter().sum();
    if (sum - 1.0).abs() > STOCHASTIC_TOLERANCE {
        return Err(HmmError::InvalidModel(format!("{what} sums to {sum}")));
    }
    Ok(())
}
