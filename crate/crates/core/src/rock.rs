//! Measure-level rock harmonization and a fixed-pattern accompaniment.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::hmm::{decode_two_stage, DecodeMethod, HmmError, HmmModel};
use crate::midi::{MidiDocument, MidiTrack, TimedNote, DRUM_CHANNEL, PPQ};
use crate::music::{KeyLabel, Mode, RomanChord};

pub const BEATS_PER_MEASURE: u32 = 4;
const MEASURE: u32 = BEATS_PER_MEASURE * PPQ as u32;
const EIGHTH: u32 = PPQ as u32 / 2;

const BASS_BASE: u8 = 48;
const KEYS_BASE: u8 = 60;
const MELODY_BASE: u8 = 72;

const KICK: u8 = 36;
const SNARE: u8 = 38;
const CLOSED_HAT: u8 = 42;

const NUMERALS: [&str; 12] =
    ["I", "bII", "ii", "bIII", "iii", "IV", "#ivo", "V", "bVI", "vi", "bVII", "viio"];

/// Root-position triad label for a chord root `root_pc` semitones above a
/// major tonic.
pub fn rock_numeral(root_pc: u8) -> RomanChord {
    NUMERALS[usize::from(root_pc % 12)].parse().expect("numeral table is well formed")
}

/// Inverse of [`rock_numeral`] for any root-position chord.
pub fn numeral_root_pc(chord: &RomanChord) -> u8 {
    chord.root_offset(Mode::Major)
}

pub type RockProgression = Vec<(KeyLabel, RomanChord)>;

/// Decodes a key and numeral per measure from absolute melody pitch classes.
pub fn harmonize_rock(
    key_model: &HmmModel,
    chord_model: &HmmModel,
    melody_pcs: &[u8],
    method: DecodeMethod,
) -> Result<RockProgression, HmmError> {
    let decoded = decode_two_stage(key_model, chord_model, melody_pcs, method)?;
    let keys = key_model.key_states()?;
    let chords = chord_model.chord_states()?;
    Ok(decoded.keys.iter().zip(&decoded.chords).map(|(&k, &c)| (keys[k], chords[c])).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KeysPattern {
    #[default]
    Block,
    Arpeggio,
}

impl fmt::Display for KeysPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KeysPattern::Block => "block",
            KeysPattern::Arpeggio => "arpeggio",
        })
    }
}

impl FromStr for KeysPattern {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "block" => Ok(KeysPattern::Block),
            "arpeggio" => Ok(KeysPattern::Arpeggio),
            _ => Err(format!("unknown keys pattern `{s}` (block|arpeggio)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccompanimentScore {
    pub melody_track: Vec<TimedNote>,
    pub bass_track: Vec<TimedNote>,
    pub keys_track: Vec<TimedNote>,
    pub drum_track: Vec<TimedNote>,
    pub beats_per_measure: u32,
}

/// Root, third and fifth as ascending MIDI pitches above `base`.
fn triad(key: KeyLabel, chord: &RomanChord, base: u8) -> [u8; 3] {
    let t = chord.tones(key);
    let root = base + t.root;
    let above = |pc: u8| root + (pc + 12 - t.root) % 12;
    [root, above(t.third), above(t.fifth)]
}

fn note(onset: u32, duration: u32, pitch: u8) -> TimedNote {
    TimedNote { onset, duration, pitch }
}

/// Bass, keys and drums for a measure-level progression; the melody (one
/// pitch class per measure) is held for each whole measure when given.
pub fn render_accompaniment(
    progression: &[(KeyLabel, RomanChord)],
    melody_pcs: Option<&[u8]>,
    pattern: KeysPattern,
    drums: bool,
) -> AccompanimentScore {
    let mut score = AccompanimentScore {
        melody_track: Vec::new(),
        bass_track: Vec::new(),
        keys_track: Vec::new(),
        drum_track: Vec::new(),
        beats_per_measure: BEATS_PER_MEASURE,
    };
    for (m, (key, chord)) in progression.iter().enumerate() {
        let start = m as u32 * MEASURE;
        let beat = |b: u32| start + b * PPQ as u32;

        let [r, third, fifth] = triad(*key, chord, BASS_BASE);
        for (b, p) in [r, third, fifth, third].into_iter().enumerate() {
            score.bass_track.push(note(beat(b as u32), PPQ as u32, p));
        }

        let keys = triad(*key, chord, KEYS_BASE);
        match pattern {
            KeysPattern::Block => {
                for b in [0, 2] {
                    score.keys_track.extend(keys.iter().map(|&p| note(beat(b), 2 * PPQ as u32, p)));
                }
            }
            KeysPattern::Arpeggio => {
                let cycle = [keys[0], keys[1], keys[2], keys[1]];
                for i in 0..8 {
                    score.keys_track.push(note(start + i * EIGHTH, EIGHTH, cycle[i as usize % 4]));
                }
            }
        }

        if drums {
            for b in 0..BEATS_PER_MEASURE {
                let hit = if b % 2 == 0 { KICK } else { SNARE };
                score.drum_track.push(note(beat(b), EIGHTH, hit));
            }
            for i in 0..8 {
                score.drum_track.push(note(start + i * EIGHTH, EIGHTH, CLOSED_HAT));
            }
        }

        if let Some(pc) = melody_pcs.and_then(|pcs| pcs.get(m)) {
            score.melody_track.push(note(start, MEASURE, MELODY_BASE + pc % 12));
        }
    }
    for track in [&mut score.keys_track, &mut score.drum_track] {
        track.sort_unstable();
    }
    score
}

impl MidiDocument {
    /// Melody, bass and keys on channels 0..=2, drums on the percussion
    /// channel.
    pub fn from_accompaniment(score: &AccompanimentScore, tempo_bpm: f64) -> Self {
        let track = |name: &str, channel: u8, notes: &[TimedNote]| MidiTrack {
            name: name.to_string(),
            channel,
            notes: notes.to_vec(),
        };
        MidiDocument {
            tempo_bpm,
            beats_per_measure: score.beats_per_measure as u8,
            tracks: vec![
                track("melody", 0, &score.melody_track),
                track("bass", 1, &score.bass_track),
                track("keys", 2, &score.keys_track),
                track("drums", DRUM_CHANNEL, &score.drum_track),
            ],
        }
    }
}
