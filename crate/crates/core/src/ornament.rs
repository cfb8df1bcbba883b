//! Non-chord tones added to the generated voices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Corpus;
use crate::harmonize::{Harmonization, Voice, ALTO_RANGE, BASS_RANGE, TENOR_RANGE};
use crate::music::{KeyLabel, Pitch};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrnamentKind {
    Passing,
    Auxiliary,
    Appoggiatura,
}

/// Replacement notes for one voice within one beat.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ornament {
    pub beat_index: usize,
    pub voice: Voice,
    pub kind: OrnamentKind,
    pub notes: Vec<(Pitch, f64)>,
}

#[derive(Debug, Error, PartialEq)]
#[error("{name} must be within [0, 1], got {value}")]
pub struct RateOutOfRange {
    pub name: &'static str,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrnamentConfig {
    pub p_passing: f64,
    pub p_auxiliary: f64,
    pub p_appoggiatura: f64,
    #[serde(default)]
    pub rng_seed: u64,
}

impl Default for OrnamentConfig {
    fn default() -> Self {
        OrnamentConfig { p_passing: 0.3, p_auxiliary: 0.15, p_appoggiatura: 0.05, rng_seed: 0 }
    }
}

impl OrnamentConfig {
    pub fn disabled() -> Self {
        OrnamentConfig { p_passing: 0.0, p_auxiliary: 0.0, p_appoggiatura: 0.0, rng_seed: 0 }
    }

    pub fn with_seed(self, rng_seed: u64) -> Self {
        OrnamentConfig { rng_seed, ..self }
    }

    pub fn validate(&self) -> Result<(), RateOutOfRange> {
        for (name, value) in [
            ("p_passing", self.p_passing),
            ("p_auxiliary", self.p_auxiliary),
            ("p_appoggiatura", self.p_appoggiatura),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(RateOutOfRange { name, value });
            }
        }
        Ok(())
    }

    fn rate(&self, kind: OrnamentKind) -> f64 {
        match kind {
            OrnamentKind::Passing => self.p_passing,
            OrnamentKind::Auxiliary => self.p_auxiliary,
            OrnamentKind::Appoggiatura => self.p_appoggiatura,
        }
    }
}

/// Beats 1 and 3 of a four-beat bar; generally the downbeat and, in even
/// meters of four or more beats, the middle of the bar.
pub fn is_strong_beat(beat_index: usize, meter: u8) -> bool {
    let meter = usize::from(meter.max(1));
    let pos = beat_index % meter;
    pos == 0 || (meter >= 4 && meter % 2 == 0 && pos == meter / 2)
}

/// The diatonic pitch strictly between two notes a third apart, nearest the
/// midpoint (ties toward `from`).
pub fn passing_tone(key: KeyLabel, from: u8, to: u8) -> Option<u8> {
    if !matches!(from.abs_diff(to), 3 | 4) {
        return None;
    }
    let (lo, hi) = (from.min(to), from.max(to));
    let mid2 = i32::from(from) + i32::from(to);
    (lo + 1..hi)
        .filter(|&m| key.is_diatonic(m % 12))
        .min_by_key(|&m| ((2 * i32::from(m) - mid2).abs(), m.abs_diff(from)))
}

/// The next diatonic pitch one or two semitones above `pitch`.
pub fn upper_neighbor(key: KeyLabel, pitch: u8) -> Option<u8> {
    (pitch + 1..=pitch + 2).find(|&m| m <= 127 && key.is_diatonic(m % 12))
}

fn voice_range(voice: Voice) -> std::ops::RangeInclusive<u8> {
    match voice {
        Voice::Alto => ALTO_RANGE,
        Voice::Tenor => TENOR_RANGE,
        _ => BASS_RANGE,
    }
}

fn fits(h: &Harmonization, voice: Voice, t: usize, pitch: u8) -> bool {
    if !voice_range(voice).contains(&pitch) {
        return false;
    }
    let above = Voice::ALL[voice.index() - 1];
    let below_ok = match Voice::ALL.get(voice.index() + 1) {
        Some(&v) => h.beat_notes(v, t).iter().all(|(p, _)| p.midi() <= pitch),
        None => true,
    };
    below_ok && h.beat_notes(above, t).iter().all(|(p, _)| p.midi() >= pitch)
}

fn is_dissonant(a: u8, b: u8) -> bool {
    matches!(a.abs_diff(b) % 12, 1 | 2 | 6 | 10 | 11)
}

/// Adds passing, auxiliary and appoggiatura notes to the alto, tenor and
/// bass, each site firing independently with its configured probability.
///
/// Sites are visited beat by beat, voices top to bottom, kinds in the order
/// passing, auxiliary, appoggiatura; a random draw is taken for each
/// eligible site until one ornament is placed in that voice and beat.
/// Candidates outside the voice's range, or crossing a neighbouring voice,
/// are skipped.
pub fn insert_ornaments(h: &Harmonization, cfg: &OrnamentConfig) -> Harmonization {
    let mut out = h.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let n = h.len();
    let meter = h.soprano.meter();

    for t in 0..n {
        let key = h.annotation.keys[t];
        let tones = h.annotation.chords[t].tones(key);
        for voice in Voice::GENERATED {
            let cur = h.pitch(voice, t).midi();
            let next = (t + 1 < n).then(|| h.pitch(voice, t + 1).midi());
            for kind in [OrnamentKind::Passing, OrnamentKind::Auxiliary, OrnamentKind::Appoggiatura] {
                let eligible = match kind {
                    OrnamentKind::Passing => next.is_some_and(|m| matches!(cur.abs_diff(m), 3 | 4)),
                    OrnamentKind::Auxiliary => next == Some(cur),
                    OrnamentKind::Appoggiatura => is_strong_beat(t, meter),
                };
                if !eligible || !rng.random_bool(cfg.rate(kind)) {
                    continue;
                }
                let (extra, notes) = match kind {
                    OrnamentKind::Passing => match next.and_then(|m| passing_tone(key, cur, m)) {
                        Some(x) => (x, [(cur, 0.5), (x, 0.5)]),
                        None => continue,
                    },
                    OrnamentKind::Auxiliary => match upper_neighbor(key, cur) {
                        Some(x) => (x, [(cur, 0.5), (x, 0.5)]),
                        None => continue,
                    },
                    OrnamentKind::Appoggiatura => match upper_neighbor(key, cur) {
                        Some(x) if !tones.contains(x % 12) => (x, [(x, 0.5), (cur, 0.5)]),
                        _ => continue,
                    },
                };
                if !fits(&out, voice, t, extra) {
                    continue;
                }
                if kind == OrnamentKind::Appoggiatura {
                    let s = h.pitch(Voice::Soprano, t).midi();
                    if is_dissonant(extra, s) {
                        out.diagnostics.push(format!(
                            "beat {t}: {voice} appoggiatura {extra} dissonant with soprano {s}"
                        ));
                    }
                }
                let notes = notes.map(|(m, d)| (Pitch::new(i64::from(m)).expect("midi pitch"), d));
                out.ornaments.push(Ornament { beat_index: t, voice, kind, notes: notes.to_vec() });
                break;
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct SiteCount {
    sites: u64,
    hits: u64,
}

impl SiteCount {
    fn record(&mut self, hit: bool) {
        self.sites += 1;
        self.hits += u64::from(hit);
    }

    fn rate(self) -> f64 {
        if self.sites == 0 {
            0.0
        } else {
            self.hits as f64 / self.sites as f64
        }
    }
}

/// Ornament frequencies in the corpus melodies.
///
/// Sites are defined as in [`insert_ornaments`], using each beat's onset
/// note: a passing site is a pair of beats a third apart, filled when the
/// first beat's second note lies between them; an auxiliary site is a
/// repeated note, filled when the first beat moves to a neighbour; an
/// appoggiatura site is a strong beat, filled when it opens on a non-chord
/// tone that steps to a chord tone.
pub fn estimate_ornament_rates(corpus: &Corpus) -> OrnamentConfig {
    let (mut passing, mut auxiliary, mut appoggiatura) =
        (SiteCount::default(), SiteCount::default(), SiteCount::default());
    for chorale in &corpus.chorales {
        let beats = chorale.beats();
        for (t, beat) in beats.iter().enumerate() {
            let notes: Vec<u8> = beat.event.notes().iter().map(|(p, _)| p.midi()).collect();
            let cur = beat.event.representative().midi();
            if let Some(next) = beats.get(t + 1).map(|b| b.event.representative().midi()) {
                let second = (notes.len() == 2).then(|| notes[1]);
                if matches!(cur.abs_diff(next), 3 | 4) {
                    let (lo, hi) = (cur.min(next), cur.max(next));
                    passing.record(second.is_some_and(|x| lo < x && x < hi));
                } else if cur == next {
                    auxiliary.record(second.is_some_and(|x| matches!(x.abs_diff(cur), 1 | 2)));
                }
            }
            if is_strong_beat(t, chorale.meter) {
                let tones = beat.chord.tones(beat.key);
                let hit = notes.len() >= 2
                    && !tones.contains(notes[0] % 12)
                    && tones.contains(notes[1] % 12)
                    && notes[0].abs_diff(notes[1]) <= 2;
                appoggiatura.record(hit);
            }
        }
    }
    OrnamentConfig {
        p_passing: passing.rate(),
        p_auxiliary: auxiliary.rate(),
        p_appoggiatura: appoggiatura.rate(),
        rng_seed: 0,
    }
}
