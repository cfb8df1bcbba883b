use super::{HmmError, HmmModel, Matrix};

/// Most probable hidden path and its joint log-probability.
#[derive(Debug, Clone, PartialEq)]
pub struct ViterbiPath {
    pub states: Vec<usize>,
    pub log_prob: f64,
}

/// Per-position marginal posteriors and their argmax path.
#[derive(Debug, Clone, PartialEq)]
pub struct Posterior {
    pub states: Vec<usize>,
    /// `n x S`, each row sums to one.
    pub marginals: Matrix,
    pub log_likelihood: f64,
}

impl HmmModel {
    fn check_observations(&self, obs: &[usize]) -> Result<(), HmmError> {
        if obs.is_empty() {
            return Err(HmmError::EmptyObservations);
        }
        let size = self.n_observations();
        match obs.iter().find(|&&o| o >= size) {
            Some(&index) => Err(HmmError::ObservationOutOfRange { index, size }),
            None => Ok(()),
        }
    }

    /// Joint argmax over hidden paths. Ties go to the lowest state index,
    /// both at every backpointer and at the final step.
    pub fn viterbi(&self, obs: &[usize]) -> Result<ViterbiPath, HmmError> {
        self.check_observations(obs)?;
        let s = self.n_states();
        let log_t = self.transition().map(f64::ln);
        let log_e = self.emission().map(f64::ln);

        let mut score: Vec<f64> =
            (0..s).map(|j| self.initial()[j].ln() + log_e[(j, obs[0])]).collect();
        if score.iter().all(|v| *v == f64::NEG_INFINITY) {
            return Err(HmmError::Infeasible { position: 0 });
        }
        let mut back = vec![vec![0usize; s]; obs.len()];
        let mut next = vec![f64::NEG_INFINITY; s];
        for (t, &o) in obs.iter().enumerate().skip(1) {
            for j in 0..s {
                let (best_i, best) = argmax((0..s).map(|i| score[i] + log_t[(i, j)]));
                back[t][j] = best_i;
                next[j] = best + log_e[(j, o)];
            }
            std::mem::swap(&mut score, &mut next);
            if score.iter().all(|v| *v == f64::NEG_INFINITY) {
                return Err(HmmError::Infeasible { position: t });
            }
        }
        let (last, log_prob) = argmax(score.iter().copied());
        let mut states = vec![last; obs.len()];
        for t in (1..obs.len()).rev() {
            states[t - 1] = back[t][states[t]];
        }
        Ok(ViterbiPath { states, log_prob })
    }

    /// Forward-backward with per-step scaling; returns each position's
    /// marginal argmax (lowest index on ties).
    pub fn posterior(&self, obs: &[usize]) -> Result<Posterior, HmmError> {
        self.check_observations(obs)?;
        let s = self.n_states();
        let n = obs.len();
        let trans = self.transition();
        let emit = self.emission();

        let mut alpha = Matrix::zeros(n, s);
        let mut scale = vec![0.0; n];
        for t in 0..n {
            for j in 0..s {
                let prior = if t == 0 {
                    self.initial()[j]
                } else {
                    (0..s).map(|i| alpha[(t - 1, i)] * trans[(i, j)]).sum()
                };
                alpha[(t, j)] = prior * emit[(j, obs[t])];
            }
            let c: f64 = alpha.row(t).iter().sum();
            if c.is_nan() || c <= 0.0 {
                return Err(HmmError::Infeasible { position: t });
            }
            scale[t] = c;
            alpha.row_mut(t).iter_mut().for_each(|a| *a /= c);
        }

        let mut beta = Matrix::zeros(n, s);
        beta.row_mut(n - 1).fill(1.0);
        for t in (0..n - 1).rev() {
            for i in 0..s {
                let v: f64 = (0..s)
                    .map(|j| trans[(i, j)] * emit[(j, obs[t + 1])] * beta[(t + 1, j)])
                    .sum();
                beta[(t, i)] = v / scale[t + 1];
            }
        }

        let mut marginals = Matrix::zeros(n, s);
        let mut states = Vec::with_capacity(n);
        for t in 0..n {
            let row = marginals.row_mut(t);
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = alpha[(t, j)] * beta[(t, j)];
            }
            let z: f64 = row.iter().sum();
            row.iter_mut().for_each(|g| *g /= z);
            states.push(argmax(row.iter().copied()).0);
        }
        let log_likelihood = scale.iter().map(|c| c.ln()).sum();
        Ok(Posterior { states, marginals, log_likelihood })
    }

    /// `ln P(hidden, obs)` under the model.
    pub fn joint_log_prob(&self, hidden: &[usize], obs: &[usize]) -> f64 {
        assert_eq!(hidden.len(), obs.len(), "paired sequences");
        let Some((&h0, &o0)) = hidden.first().zip(obs.first()) else { return 0.0 };
        let mut lp = self.initial()[h0].ln() + self.emission()[(h0, o0)].ln();
        for t in 1..hidden.len() {
            lp = lp + self.transition()[(hidden[t - 1], hidden[t])].ln()
                + self.emission()[(hidden[t], obs[t])].ln();
        }
        lp
    }

    pub fn viterbi_labels(&self, obs: &[&str]) -> Result<Vec<String>, HmmError> {
        let idx = self.observation_indices(obs)?;
        Ok(self.viterbi(&idx)?.states.iter().map(|&i| self.states()[i].clone()).collect())
    }

    pub fn posterior_labels(&self, obs: &[&str]) -> Result<(Vec<String>, Matrix), HmmError> {
        let idx = self.observation_indices(obs)?;
        let post = self.posterior(&idx)?;
        let labels = post.states.iter().map(|&i| self.states()[i].clone()).collect();
        Ok((labels, post.marginals))
    }

    pub fn observation_indices(&self, obs: &[&str]) -> Result<Vec<usize>, HmmError> {
        obs.iter().map(|o| self.observation_index(o)).collect()
    }
}

/// First index of the maximum; NaN never wins.
fn argmax(values: impl Iterator<Item = f64>) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in values.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(prefix: &str, n: usize) -> Vec<String> {
        (0..n).map(|i| format!("{prefix}{i}")).collect()
    }

    fn model(t: Vec<Vec<f64>>, e: Vec<Vec<f64>>, init: Vec<f64>) -> HmmModel {
        let s = t.len();
        let o = e[0].len();
        HmmModel::new(
            labels("s", s),
            labels("o", o),
            Matrix::from_rows(t).unwrap(),
            Matrix::from_rows(e).unwrap(),
            init,
        )
        .unwrap()
    }

    #[test]
    fn single_step_picks_peaked_emission() {
        let m = model(
            vec![vec![1.0 / 3.0; 3]; 3],
            vec![vec![0.5, 0.5], vec![0.9, 0.1], vec![0.2, 0.8]],
            vec![1.0 / 3.0; 3],
        );
        assert_eq!(m.viterbi(&[0]).unwrap().states, vec![1]);
        assert_eq!(m.posterior(&[0]).unwrap().states, vec![1]);
    }

    #[test]
    fn identity_transitions_give_constant_path() {
        let m = model(
            vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]],
            vec![vec![0.3, 0.7], vec![0.6, 0.4], vec![0.5, 0.5]],
            vec![0.0, 0.0, 1.0],
        );
        let obs = [0, 1, 1, 0, 0];
        assert_eq!(m.viterbi(&obs).unwrap().states, vec![2; 5]);
        let post = m.posterior(&obs).unwrap();
        assert_eq!(post.states, vec![2; 5]);
        for row in post.marginals.iter_rows() {
            assert_eq!(row, &[0.0, 0.0, 1.0]);
        }
    }

    #[test]
    fn ties_break_to_lowest_index() {
        let m = model(vec![vec![0.5; 2]; 2], vec![vec![1.0]; 2], vec![0.5, 0.5]);
        assert_eq!(m.viterbi(&[0, 0, 0]).unwrap().states, vec![0, 0, 0]);
        assert_eq!(m.posterior(&[0, 0, 0]).unwrap().states, vec![0, 0, 0]);
    }

    #[test]
    fn infeasible_observation() {
        let m = model(vec![vec![0.5; 2]; 2], vec![vec![1.0, 0.0]; 2], vec![0.5, 0.5]);
        assert_eq!(m.viterbi(&[0, 1]), Err(HmmError::Infeasible { position: 1 }));
        assert_eq!(m.posterior(&[0, 1]).unwrap_err(), HmmError::Infeasible { position: 1 });
        assert_eq!(m.viterbi(&[]), Err(HmmError::EmptyObservations));
        assert!(matches!(m.viterbi(&[2]), Err(HmmError::ObservationOutOfRange { .. })));
    }

    #[test]
    fn viterbi_log_prob_matches_joint() {
        let m = model(
            vec![vec![0.7, 0.3], vec![0.4, 0.6]],
            vec![vec![0.1, 0.4, 0.5], vec![0.6, 0.3, 0.1]],
            vec![0.6, 0.4],
        );
        let obs = [0, 1, 2, 0, 1];
        let path = m.viterbi(&obs).unwrap();
        assert_eq!(path.log_prob, m.joint_log_prob(&path.states, &obs));
        assert_eq!(path.states, vec![1, 0, 0, 1, 1]);
        assert!((path.log_prob - (-7.739_116_800_070_987)).abs() < 1e-12);
        let post = m.posterior(&obs).unwrap();
        assert!((post.log_likelihood - (-5.758_240_012_089_921)).abs() < 1e-12);
    }

    #[test]
    fn label_wrappers() {
        let m = model(vec![vec![0.5; 2]; 2], vec![vec![0.9, 0.1], vec![0.1, 0.9]], vec![0.5; 2]);
        assert_eq!(m.viterbi_labels(&["o1", "o1"]).unwrap(), vec!["s1", "s1"]);
        assert!(m.viterbi_labels(&["zz"]).is_err());
        let (lab, marg) = m.posterior_labels(&["o0"]).unwrap();
        assert_eq!(lab, vec!["s0"]);
        assert!((marg[(0, 0)] - 0.9).abs() < 1e-12);
    }
}
