//! Standard MIDI File (format 1) encoding.

use std::path::Path;

use thiserror::Error;

use crate::harmonize::{Harmonization, Voice};

pub const PPQ: u16 = 480;
pub const VELOCITY: u8 = 80;
pub const DRUM_CHANNEL: u8 = 9;
pub const CHORALE_TEMPO: f64 = 80.0;
pub const ROCK_TEMPO: f64 = 120.0;

#[derive(Debug, Error)]
pub enum MidiError {
    #[error("pitch {pitch} outside 0..=127 in track `{track}`")]
    PitchOutOfRange { track: String, pitch: u8 },
    #[error("channel {0} outside 0..=15")]
    BadChannel(u8),
    #[error("tempo must be positive and finite, got {0}")]
    BadTempo(f64),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

/// A note with absolute onset and duration in ticks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TimedNote {
    pub onset: u32,
    pub duration: u32,
    pub pitch: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MidiTrack {
    pub name: String,
    pub channel: u8,
    pub notes: Vec<TimedNote>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MidiDocument {
    pub tempo_bpm: f64,
    pub beats_per_measure: u8,
    pub tracks: Vec<MidiTrack>,
}

/// Splits one beat starting at `beat_start` by the given fractions, rounding
/// cumulative positions so the pieces tile the beat exactly.
pub fn beat_ticks(beat_start: u32, fractions: &[f64]) -> Vec<(u32, u32)> {
    let q = f64::from(PPQ);
    let mut acc = 0.0;
    let mut bounds = vec![beat_start];
    for (i, f) in fractions.iter().enumerate() {
        acc += f;
        let end = if i + 1 == fractions.len() {
            beat_start + u32::from(PPQ)
        } else {
            beat_start + (acc * q).round() as u32
        };
        bounds.push(end);
    }
    bounds.windows(2).map(|w| (w[0], w[1] - w[0])).collect()
}

impl MidiDocument {
    /// Four tracks, soprano to bass on channels 0..=3.
    pub fn from_harmonization(h: &Harmonization, tempo_bpm: f64) -> Self {
        let tracks = Voice::ALL
            .iter()
            .enumerate()
            .map(|(ch, &voice)| {
                let mut notes = Vec::new();
                for t in 0..h.len() {
                    let beat = h.beat_notes(voice, t);
                    let fractions: Vec<f64> = beat.iter().map(|(_, d)| *d).collect();
                    let start = t as u32 * u32::from(PPQ);
                    for ((p, _), (onset, duration)) in beat.iter().zip(beat_ticks(start, &fractions)) {
                        if duration > 0 {
                            notes.push(TimedNote { onset, duration, pitch: p.midi() });
                        }
                    }
                }
                MidiTrack { name: voice.name().to_string(), channel: ch as u8, notes }
            })
            .collect();
        MidiDocument { tempo_bpm, beats_per_measure: h.soprano.meter(), tracks }
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, MidiError> {
        if !(self.tempo_bpm.is_finite() && self.tempo_bpm > 0.0) {
            return Err(MidiError::BadTempo(self.tempo_bpm));
        }
        let mut out = Vec::new();
        out.extend_from_slice(b"MThd");
        out.extend_from_slice(&6u32.to_be_bytes());
        out.extend_from_slice(&1u16.to_be_bytes());
        out.extend_from_slice(&(self.tracks.len() as u16 + 1).to_be_bytes());
        out.extend_from_slice(&PPQ.to_be_bytes());

        let micros = (60_000_000.0 / self.tempo_bpm).round().clamp(1.0, 16_777_215.0) as u32;
        let mut tempo = Vec::new();
        push_meta(&mut tempo, 0, 0x51, &micros.to_be_bytes()[1..]);
        push_meta(&mut tempo, 0, 0x58, &[self.beats_per_measure, 2, 24, 8]);
        push_meta(&mut tempo, 0, 0x2F, &[]);
        push_chunk(&mut out, &tempo);

        for track in &self.tracks {
            push_chunk(&mut out, &encode_track(track)?);
        }
        Ok(out)
    }

    pub fn write(&self, path: &Path) -> Result<(), MidiError> {
        let bytes = self.to_bytes()?;
        std::fs::write(path, bytes)
            .map_err(|source| MidiError::Io { path: path.display().to_string(), source })
    }
}

fn encode_track(track: &MidiTrack) -> Result<Vec<u8>, MidiError> {
    if track.channel > 15 {
        return Err(MidiError::BadChannel(track.channel));
    }
    // (tick, note-offs first, pitch, status)
    let mut events: Vec<(u32, u8, u8, u8)> = Vec::with_capacity(track.notes.len() * 2);
    for n in &track.notes {
        if n.pitch > 127 {
            return Err(MidiError::PitchOutOfRange { track: track.name.clone(), pitch: n.pitch });
        }
        events.push((n.onset, 1, n.pitch, 0x90 | track.channel));
        events.push((n.onset + n.duration, 0, n.pitch, 0x80 | track.channel));
    }
    events.sort_unstable();

    let mut data = Vec::new();
    push_meta(&mut data, 0, 0x03, track.name.as_bytes());
    let mut now = 0;
    for (tick, kind, pitch, status) in events {
        push_vlq(&mut data, tick - now);
        now = tick;
        let velocity = if kind == 1 { VELOCITY } else { 0 };
        data.extend_from_slice(&[status, pitch, velocity]);
    }
    push_meta(&mut data, 0, 0x2F, &[]);
    Ok(data)
}

fn push_chunk(out: &mut Vec<u8>, data: &[u8]) {
    out.extend_from_slice(b"MTrk");
    out.extend_from_slice(&(data.len() as u32).to_be_bytes());
    out.extend_from_slice(data);
}

fn push_meta(out: &mut Vec<u8>, delta: u32, kind: u8, payload: &[u8]) {
    push_vlq(out, delta);
    out.extend_from_slice(&[0xFF, kind]);
    push_vlq(out, payload.len() as u32);
    out.extend_from_slice(payload);
}

fn push_vlq(out: &mut Vec<u8>, mut value: u32) {
    let mut buf = [0u8; 5];
    let mut i = buf.len() - 1;
    buf[i] = (value & 0x7F) as u8;
    value >>= 7;
    while value > 0 {
        i -= 1;
        buf[i] = 0x80 | (value & 0x7F) as u8;
        value >>= 7;
    }
    out.extend_from_slice(&buf[i..]);
}
