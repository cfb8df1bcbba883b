use serde::{Deserialize, Serialize};

use super::{KeyLabel, MusicError, Pitch, RomanChord};

/// Allowed slack when checking that a beat's durations fill it exactly.
pub const DURATION_TOLERANCE: f64 = 1e-9;

/// All notes sounding within one quarter-note beat.
///
/// Durations are fractions of the beat and sum to one. The representative
/// pitch is the one sounding at the beat onset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeatEvent {
    beat_index: usize,
    notes: Vec<(Pitch, f64)>,
    representative: Pitch,
}

impl BeatEvent {
    pub fn new(beat_index: usize, notes: Vec<(Pitch, f64)>) -> Result<Self, MusicError> {
        let first = notes.first().ok_or(MusicError::EmptyBeat { beat: beat_index })?.0;
        validate_durations(beat_index, &notes)?;
        Ok(BeatEvent { beat_index, notes, representative: first })
    }

    pub fn single(beat_index: usize, pitch: Pitch) -> Self {
        BeatEvent { beat_index, notes: vec![(pitch, 1.0)], representative: pitch }
    }

    /// Builds an event with an explicit representative, which must be one
    /// of the notes.
    pub fn with_representative(
        beat_index: usize,
        notes: Vec<(Pitch, f64)>,
        representative: Pitch,
    ) -> Result<Self, MusicError> {
        let mut ev = BeatEvent::new(beat_index, notes)?;
        if !ev.notes.iter().any(|(p, _)| *p == representative) {
            return Err(MusicError::ForeignRepresentative { beat: beat_index });
        }
        ev.representative = representative;
        Ok(ev)
    }

    pub fn beat_index(&self) -> usize {
        self.beat_index
    }

    pub fn notes(&self) -> &[(Pitch, f64)] {
        &self.notes
    }

    pub fn representative(&self) -> Pitch {
        self.representative
    }

    pub fn transpose(&self, semitones: i32) -> Result<Self, MusicError> {
        let notes = self
            .notes
            .iter()
            .map(|&(p, d)| Ok((p.transpose(semitones)?, d)))
            .collect::<Result<Vec<_>, MusicError>>()?;
        Ok(BeatEvent {
            beat_index: self.beat_index,
            notes,
            representative: self.representative.transpose(semitones)?,
        })
    }
}

pub(crate) fn validate_durations(beat: usize, notes: &[(Pitch, f64)]) -> Result<(), MusicError> {
    if notes.is_empty() {
        return Err(MusicError::EmptyBeat { beat });
    }
    if let Some(&(_, d)) = notes.iter().find(|(_, d)| d.is_nan() || *d <= 0.0) {
        return Err(MusicError::NonPositiveDuration { beat, duration: d });
    }
    let sum: f64 = notes.iter().map(|(_, d)| d).sum();
    if (sum - 1.0).abs() > DURATION_TOLERANCE {
        return Err(MusicError::DurationSum { beat, sum });
    }
    Ok(())
}

/// A beat-quantized monophonic line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MelodyLine {
    events: Vec<BeatEvent>,
    meter: u8,
}

impl MelodyLine {
    pub const DEFAULT_METER: u8 = 4;

    pub fn new(events: Vec<BeatEvent>, meter: u8) -> Result<Self, MusicError> {
        if events.is_empty() {
            return Err(MusicError::EmptyMelody);
        }
        for (position, ev) in events.iter().enumerate() {
            if ev.beat_index != position {
                return Err(MusicError::NonContiguous { position, found: ev.beat_index });
            }
        }
        Ok(MelodyLine { events, meter: meter.max(1) })
    }

    /// One beat per pitch, each lasting the whole beat.
    pub fn from_pitches(pitches: &[u8]) -> Result<Self, MusicError> {
        let events = pitches
            .iter()
            .enumerate()
            .map(|(i, &m)| Ok(BeatEvent::single(i, Pitch::new(i64::from(m))?)))
            .collect::<Result<Vec<_>, MusicError>>()?;
        MelodyLine::new(events, Self::DEFAULT_METER)
    }

    pub fn events(&self) -> &[BeatEvent] {
        &self.events
    }

    pub fn meter(&self) -> u8 {
        self.meter
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn representatives(&self) -> Vec<Pitch> {
        self.events.iter().map(BeatEvent::representative).collect()
    }

    pub fn transpose(&self, semitones: i32) -> Result<Self, MusicError> {
        let events = self
            .events
            .iter()
            .map(|e| e.transpose(semitones))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MelodyLine { events, meter: self.meter })
    }
}

/// Key and chord label per beat.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgressionAnnotation {
    pub keys: Vec<KeyLabel>,
    pub chords: Vec<RomanChord>,
}

impl ProgressionAnnotation {
    pub fn new(keys: Vec<KeyLabel>, chords: Vec<RomanChord>) -> Result<Self, MusicError> {
        if keys.len() != chords.len() {
            return Err(MusicError::LengthMismatch { expected: keys.len(), found: chords.len() });
        }
        Ok(ProgressionAnnotation { keys, chords })
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn check_length(&self, melody: &MelodyLine) -> Result<(), MusicError> {
        if self.len() != melody.len() {
            return Err(MusicError::LengthMismatch { expected: melody.len(), found: self.len() });
        }
        Ok(())
    }
}
