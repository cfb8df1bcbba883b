use super::arrangement::Arrangement;
use super::penalty::transition_violations;
use crate::music::Pitch;

/// Beat at which a greedy chain ran out of candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeadEnd {
    pub beat_index: usize,
}

pub(crate) fn satb(soprano: Pitch, a: &Arrangement) -> [u8; 4] {
    [soprano.midi(), a.alto.midi(), a.tenor.midi(), a.bass.midi()]
}

/// Extends `seed` (the arrangement for beat 0) greedily: each next beat takes
/// the candidate nearest the previous choice, breaking distance ties by the
/// number of horizontal violations and then by candidate order.
///
/// `candidates_per_beat[0]` is ignored; the seed stands in for it.
pub fn chain_arrangements(
    candidates_per_beat: &[Vec<Arrangement>],
    soprano: &[Pitch],
    seed: Arrangement,
) -> Result<Vec<Arrangement>, DeadEnd> {
    assert_eq!(candidates_per_beat.len(), soprano.len(), "one candidate list per soprano note");
    let mut chain = Vec::with_capacity(soprano.len());
    chain.push(Arrangement { beat_index: 0, ..seed });
    for t in 1..soprano.len() {
        let prev = chain[t - 1];
        let prev_satb = satb(soprano[t - 1], &prev);
        let best = candidates_per_beat[t]
            .iter()
            .enumerate()
            .min_by_key(|(i, c)| {
                let violations = transition_violations(t, prev_satb, satb(soprano[t], c)).len();
                (prev.squared_distance(c), violations, *i)
            })
            .map(|(_, c)| *c)
            .ok_or(DeadEnd { beat_index: t })?;
        chain.push(Arrangement { beat_index: t, ..best });
    }
    Ok(chain)
}
