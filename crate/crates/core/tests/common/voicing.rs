//! Independent restatement of the voicing rules for oracle checks.

use keychord::harmonize::Arrangement;
use keychord::music::{KeyLabel, Pitch, RomanChord};

pub fn penalty(prev: [u8; 4], cur: [u8; 4]) -> (f64, usize) {
    let (p, c) = (prev.map(i32::from), cur.map(i32::from));
    let mut total = 0.0;
    let mut count = 0;
    let mut hit = |w: f64| {
        total += w;
        count += 1;
    };
    for i in 0..4 {
        for j in i + 1..4 {
            let (di, dj) = (c[i] - p[i], c[j] - p[j]);
            let same_way = (di > 0 && dj > 0) || (di < 0 && dj < 0);
            let was = (p[i] - p[j]).rem_euclid(12);
            let now = (c[i] - c[j]).rem_euclid(12);
            if same_way && was == now && (was == 7 || was == 0) {
                hit(4.0);
            }
        }
    }
    for i in 0..3 {
        if c[i + 1] > p[i] || c[i] < p[i + 1] {
            hit(2.0);
        }
    }
    for v in 1..4 {
        let leap = (c[v] - p[v]).abs();
        if leap > 12 {
            hit(3.0);
        } else if leap > 7 && v != 3 {
            hit(1.0);
        }
    }
    (total, count)
}

pub fn total_penalty(chords: &[[u8; 4]]) -> f64 {
    chords.windows(2).map(|w| penalty(w[0], w[1]).0).sum()
}

pub fn satb(s: Pitch, a: &Arrangement) -> [u8; 4] {
    [s.midi(), a.alto.midi(), a.tenor.midi(), a.bass.midi()]
}

fn sqdist(x: &Arrangement, y: &Arrangement) -> i32 {
    [(x.alto, y.alto), (x.tenor, y.tenor), (x.bass, y.bass)]
        .iter()
        .map(|(p, q)| (i32::from(p.midi()) - i32::from(q.midi())).pow(2))
        .sum()
}

/// Greedy continuation from `seed`; `None` when some beat has no candidates.
pub fn greedy(cands: &[Vec<Arrangement>], soprano: &[Pitch], seed: Arrangement) -> Option<Vec<Arrangement>> {
    let mut chain = vec![seed];
    for t in 1..cands.len() {
        let prev = *chain.last().unwrap();
        let prev_satb = satb(soprano[t - 1], &prev);
        let next = cands[t]
            .iter()
            .enumerate()
            .min_by_key(|(i, a)| (sqdist(&prev, a), penalty(prev_satb, satb(soprano[t], a)).1, *i))?
            .1;
        chain.push(*next);
    }
    Some(chain)
}

/// Checks every vertical and spelling rule for one beat.
pub fn check_beat(key: KeyLabel, chord: RomanChord, s: Pitch, a: &Arrangement) -> Result<(), String> {
    let [s, al, te, ba] = satb(s, a);
    if !(ba <= te && te <= al && al <= s) {
        return Err(format!("order {s} {al} {te} {ba}"));
    }
    if !(53..=74).contains(&al) || !(47..=67).contains(&te) || !(40..=60).contains(&ba) {
        return Err(format!("range {al} {te} {ba}"));
    }
    if s - al > 12 || al - te > 12 {
        return Err(format!("spacing {s} {al} {te}"));
    }
    let tones = chord.tones(key);
    for v in [al, te, ba] {
        if !tones.contains(v % 12) {
            return Err(format!("{v} not in {chord}"));
        }
    }
    if ba % 12 != chord.bass_pc(key) {
        return Err(format!("bass {ba} for {chord}"));
    }
    let sounding: Vec<u8> = [s, al, te, ba].iter().map(|m| m % 12).filter(|pc| tones.contains(*pc)).collect();
    let lt = key.leading_tone_pc();
    if tones.contains(lt) && sounding.iter().filter(|&&pc| pc == lt).count() > 1 {
        return Err("leading tone doubled".into());
    }
    if let Some(seventh) = tones.seventh {
        if !sounding.contains(&seventh) {
            return Err("seventh omitted".into());
        }
    }
    Ok(())
}
