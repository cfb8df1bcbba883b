//! Brute-force references for the decoders.

use keychord::hmm::{HmmModel, Matrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn stochastic_row(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..1.0)).collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / sum).collect()
}

/// Random dense model with `s` states and `o` symbols.
pub fn random_model(seed: u64, s: usize, o: usize) -> HmmModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = Matrix::from_rows((0..s).map(|_| stochastic_row(&mut rng, s)).collect()).unwrap();
    let e = Matrix::from_rows((0..s).map(|_| stochastic_row(&mut rng, o)).collect()).unwrap();
    let init = stochastic_row(&mut rng, s);
    let labels = |p: &str, n: usize| (0..n).map(|i| format!("{p}{i}")).collect::<Vec<_>>();
    HmmModel::new(labels("s", s), labels("o", o), t, e, init).unwrap()
}

pub fn random_observations(seed: u64, o: usize, n: usize) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    (0..n).map(|_| rng.random_range(0..o)).collect()
}

/// Every hidden sequence of length `n` over `s` states, in lexicographic order.
pub fn all_paths(s: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..s).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

/// Joint probability in linear space, computed independently of the crate.
pub fn joint(m: &HmmModel, hidden: &[usize], obs: &[usize]) -> f64 {
    let mut p = m.initial()[hidden[0]] * m.emission()[(hidden[0], obs[0])];
    for t in 1..hidden.len() {
        p *= m.transition()[(hidden[t - 1], hidden[t])] * m.emission()[(hidden[t], obs[t])];
    }
    p
}

/// Maximum joint probability and every path attaining it (within a relative
/// 1e-12, to absorb rounding).
pub fn brute_viterbi(m: &HmmModel, obs: &[usize]) -> (f64, Vec<Vec<usize>>) {
    let paths = all_paths(m.n_states(), obs.len());
    let best = paths.iter().map(|p| joint(m, p, obs)).fold(0.0, f64::max);
    let argmax = paths.into_iter().filter(|p| joint(m, p, obs) >= best * (1.0 - 1e-12)).collect();
    (best, argmax)
}

/// Marginal P(h_t = i | obs) by full enumeration.
pub fn brute_marginals(m: &HmmModel, obs: &[usize]) -> Vec<Vec<f64>> {
    let s = m.n_states();
    let mut marg = vec![vec![0.0; s]; obs.len()];
    let mut total = 0.0;
    for p in all_paths(s, obs.len()) {
        let j = joint(m, &p, obs);
        total += j;
        for (t, &h) in p.iter().enumerate() {
            marg[t][h] += j;
        }
    }
    for row in &mut marg {
        row.iter_mut().for_each(|x| *x /= total);
    }
    marg
}
