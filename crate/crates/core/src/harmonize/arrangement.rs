use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::music::{KeyLabel, Pitch, RomanChord};

pub const ALTO_RANGE: RangeInclusive<u8> = 53..=74;
pub const TENOR_RANGE: RangeInclusive<u8> = 47..=67;
pub const BASS_RANGE: RangeInclusive<u8> = 40..=60;
/// Widest allowed gap between soprano/alto and between alto/tenor.
pub const MAX_SPACING: u8 = 12;

/// Alto, tenor and bass pitches sounding under the soprano at one beat.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrangement {
    pub beat_index: usize,
    pub alto: Pitch,
    pub tenor: Pitch,
    pub bass: Pitch,
}

/// Which vertical rule an arrangement breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerticalFault {
    VoiceOrder,
    AltoRange,
    TenorRange,
    BassRange,
    SopranoAltoSpacing,
    AltoTenorSpacing,
}

impl Arrangement {
    pub fn new(beat_index: usize, alto: u8, tenor: u8, bass: u8) -> Self {
        let p = |m: u8| Pitch::new(i64::from(m)).expect("midi pitch");
        Arrangement { beat_index, alto: p(alto), tenor: p(tenor), bass: p(bass) }
    }

    /// `(bass, tenor, alto)`, the enumeration order.
    pub fn sort_key(&self) -> (u8, u8, u8) {
        (self.bass.midi(), self.tenor.midi(), self.alto.midi())
    }

    pub fn voices(&self) -> [u8; 3] {
        [self.alto.midi(), self.tenor.midi(), self.bass.midi()]
    }

    pub fn squared_distance(&self, other: &Arrangement) -> u32 {
        self.voices()
            .iter()
            .zip(other.voices())
            .map(|(&a, b)| (i32::from(a) - i32::from(b)).pow(2) as u32)
            .sum()
    }

    pub fn distance(&self, other: &Arrangement) -> f64 {
        f64::from(self.squared_distance(other)).sqrt()
    }

    /// Checks SATB order, vocal ranges and spacing against `soprano`.
    pub fn vertical_fault(&self, soprano: Pitch) -> Option<VerticalFault> {
        let (s, a, t, b) = (soprano.midi(), self.alto.midi(), self.tenor.midi(), self.bass.midi());
        if !(b <= t && t <= a && a <= s) {
            Some(VerticalFault::VoiceOrder)
        } else if !ALTO_RANGE.contains(&a) {
            Some(VerticalFault::AltoRange)
        } else if !TENOR_RANGE.contains(&t) {
            Some(VerticalFault::TenorRange)
        } else if !BASS_RANGE.contains(&b) {
            Some(VerticalFault::BassRange)
        } else if s - a > MAX_SPACING {
            Some(VerticalFault::SopranoAltoSpacing)
        } else if a - t > MAX_SPACING {
            Some(VerticalFault::AltoTenorSpacing)
        } else {
            None
        }
    }
}

/// All arrangements of `chord` under `soprano` that satisfy the vertical
/// rules and the chord's spelling rules, ordered by `(bass, tenor, alto)`.
///
/// Spelling: the bass takes the inversion's chord tone; the leading tone is
/// never doubled; a seventh is never omitted. Complete spellings are
/// returned when any exist, otherwise those that drop only the fifth and
/// double the root. A soprano outside the chord is tolerated and simply
/// contributes nothing to the spelling; under a seventh chord that leaves
/// three voices for four tones, so as a last resort the fifth is dropped
/// without doubling.
pub fn enumerate_arrangements(key: KeyLabel, chord: RomanChord, soprano: Pitch) -> Vec<Arrangement> {
    let tones = chord.tones(key);
    let bass_pc = chord.bass_pc(key);
    let s = soprano.midi();
    let mut complete = Vec::new();
    let mut reduced = Vec::new();
    let mut sparse = Vec::new();

    for b in BASS_RANGE.filter(|b| b % 12 == bass_pc) {
        for t in (*TENOR_RANGE.start()).max(b)..=*TENOR_RANGE.end() {
            if !tones.contains(t % 12) {
                continue;
            }
            let lo = (*ALTO_RANGE.start()).max(t).max(s.saturating_sub(MAX_SPACING));
            let hi = (*ALTO_RANGE.end()).min(s).min(t + MAX_SPACING);
            for a in lo..=hi {
                if !tones.contains(a % 12) {
                    continue;
                }
                let arr = Arrangement::new(0, a, t, b);
                match spelling(&tones, key, [s, a, t, b]) {
                    Spelling::Complete => complete.push(arr),
                    Spelling::RootDoubledNoFifth => reduced.push(arr),
                    Spelling::NoFifth => sparse.push(arr),
                    Spelling::Rejected => {}
                }
            }
        }
    }
    [complete, reduced, sparse].into_iter().find(|v| !v.is_empty()).unwrap_or_default()
}

enum Spelling {
    Complete,
    RootDoubledNoFifth,
    NoFifth,
    Rejected,
}

fn spelling(tones: &crate::music::ChordTones, key: KeyLabel, satb: [u8; 4]) -> Spelling {
    let pcs = satb.map(|m| m % 12);
    let sounding: Vec<u8> = pcs.iter().copied().filter(|pc| tones.contains(*pc)).collect();
    let count = |pc: u8| sounding.iter().filter(|&&x| x == pc).count();

    let lt = key.leading_tone_pc();
    if tones.contains(lt) && count(lt) > 1 {
        return Spelling::Rejected;
    }
    if let Some(seventh) = tones.seventh {
        if count(seventh) == 0 {
            return Spelling::Rejected;
        }
    }
    if tones.iter().all(|pc| count(pc) > 0) {
        return Spelling::Complete;
    }
    let only_fifth_missing = tones.iter().all(|pc| pc == tones.fifth || count(pc) > 0);
    match (only_fifth_missing && count(tones.fifth) == 0, count(tones.root)) {
        (true, 2..) => Spelling::RootDoubledNoFifth,
        (true, _) => Spelling::NoFifth,
        (false, _) => Spelling::Rejected,
    }
}
