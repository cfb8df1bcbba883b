use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Voice {
    Soprano,
    Alto,
    Tenor,
    Bass,
}

impl Voice {
    pub const ALL: [Voice; 4] = [Voice::Soprano, Voice::Alto, Voice::Tenor, Voice::Bass];
    pub const GENERATED: [Voice; 3] = [Voice::Alto, Voice::Tenor, Voice::Bass];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Voice::Soprano => "soprano",
            Voice::Alto => "alto",
            Voice::Tenor => "tenor",
            Voice::Bass => "bass",
        }
    }
}

impl fmt::Display for Voice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Rule {
    ParallelFifth { upper: Voice, lower: Voice },
    ParallelOctave { upper: Voice, lower: Voice },
    VoiceOverlap { upper: Voice, lower: Voice },
    InnerLeap { voice: Voice },
    LargeLeap { voice: Voice },
}

impl Rule {
    pub fn weight(self) -> f64 {
        match self {
            Rule::ParallelFifth { .. } | Rule::ParallelOctave { .. } => 4.0,
            Rule::VoiceOverlap { .. } => 2.0,
            Rule::InnerLeap { .. } => 1.0,
            Rule::LargeLeap { .. } => 3.0,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::ParallelFifth { upper, lower } => write!(f, "parallel-fifth {upper}/{lower}"),
            Rule::ParallelOctave { upper, lower } => write!(f, "parallel-octave {upper}/{lower}"),
            Rule::VoiceOverlap { upper, lower } => write!(f, "overlap {upper}/{lower}"),
            Rule::InnerLeap { voice } => write!(f, "inner-leap {voice}"),
            Rule::LargeLeap { voice } => write!(f, "large-leap {voice}"),
        }
    }
}

/// A rule broken on the move into `beat_index` from the beat before.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub beat_index: usize,
    #[serde(flatten)]
    pub rule: Rule,
    pub weight: f64,
}

impl Violation {
    pub fn new(beat_index: usize, rule: Rule) -> Self {
        Violation { beat_index, rule, weight: rule.weight() }
    }
}

const INNER_LEAP_LIMIT: i32 = 7;
const LEAP_LIMIT: i32 = 12;

/// Horizontal violations between two consecutive SATB chords, each given
/// as MIDI pitches in soprano, alto, tenor, bass order.
pub fn transition_violations(beat_index: usize, prev: [u8; 4], cur: [u8; 4]) -> Vec<Violation> {
    let prev = prev.map(i32::from);
    let cur = cur.map(i32::from);
    let mut out = Vec::new();

    for i in 0..4 {
        for j in i + 1..4 {
            let (mi, mj) = (cur[i] - prev[i], cur[j] - prev[j]);
            if mi == 0 || mj == 0 || mi.signum() != mj.signum() {
                continue;
            }
            let before = (prev[i] - prev[j]).rem_euclid(12);
            let after = (cur[i] - cur[j]).rem_euclid(12);
            let (upper, lower) = (Voice::ALL[i], Voice::ALL[j]);
            if before == 7 && after == 7 {
                out.push(Violation::new(beat_index, Rule::ParallelFifth { upper, lower }));
            } else if before == 0 && after == 0 {
                out.push(Violation::new(beat_index, Rule::ParallelOctave { upper, lower }));
            }
        }
    }

    for i in 0..3 {
        let j = i + 1;
        if cur[j] > prev[i] || cur[i] < prev[j] {
            let rule = Rule::VoiceOverlap { upper: Voice::ALL[i], lower: Voice::ALL[j] };
            out.push(Violation::new(beat_index, rule));
        }
    }

    for voice in Voice::GENERATED {
        let leap = (cur[voice.index()] - prev[voice.index()]).abs();
        if leap > LEAP_LIMIT {
            out.push(Violation::new(beat_index, Rule::LargeLeap { voice }));
        } else if leap > INNER_LEAP_LIMIT && voice != Voice::Bass {
            out.push(Violation::new(beat_index, Rule::InnerLeap { voice }));
        }
    }
    out
}

/// Scores a whole chord sequence (one `[S, A, T, B]` per beat).
pub fn score_voicings(chords: &[[u8; 4]]) -> (f64, Vec<Violation>) {
    let log: Vec<Violation> = chords
        .windows(2)
        .enumerate()
        .flat_map(|(t, w)| transition_violations(t + 1, w[0], w[1]))
        .collect();
    (log.iter().map(|v| v.weight).sum(), log)
}
