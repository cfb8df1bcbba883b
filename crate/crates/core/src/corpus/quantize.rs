use thiserror::Error;

use crate::music::{BeatEvent, MusicError, Pitch};

/// Finest subdivision accepted: an eighth of a beat.
pub const GRID_PER_BEAT: u32 = 8;

/// A note with onset and duration measured in quarter-note beats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawNote {
    pub pitch: Pitch,
    pub onset: f64,
    pub duration: f64,
}

impl RawNote {
    pub fn new(pitch: Pitch, onset: f64, duration: f64) -> Self {
        RawNote { pitch, onset, duration }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantizeError {
    #[error("no notes to quantize")]
    Empty,
    #[error("note {index}: {what} {value} is not on the 1/{GRID_PER_BEAT}-beat grid")]
    OffGrid { index: usize, what: &'static str, value: f64 },
    #[error("note {index}: duration must be positive")]
    NonPositive { index: usize },
    #[error("note {index} starts at beat {found}, expected {expected} (gap or overlap)")]
    Discontinuous { index: usize, expected: f64, found: f64 },
    #[error("line ends {remainder} beats into an unfinished beat")]
    PartialFinalBeat { remainder: f64 },
    #[error(transparent)]
    Music(#[from] MusicError),
}

fn to_grid(index: usize, what: &'static str, value: f64) -> Result<u32, QuantizeError> {
    let scaled = value * f64::from(GRID_PER_BEAT);
    let rounded = scaled.round();
    if value < 0.0 || (scaled - rounded).abs() > 1e-9 {
        return Err(QuantizeError::OffGrid { index, what, value });
    }
    Ok(rounded as u32)
}

/// Splits a contiguous monophonic line into one event per beat.
///
/// Notes longer than a beat repeat across the beats they cover; notes
/// shorter than a beat are grouped with their neighbours into a single
/// event whose fractions sum to one.
pub fn quantize_beats(notes: &[RawNote]) -> Result<Vec<BeatEvent>, QuantizeError> {
    if notes.is_empty() {
        return Err(QuantizeError::Empty);
    }
    let grid = GRID_PER_BEAT;
    let mut per_beat: Vec<Vec<(Pitch, f64)>> = Vec::new();
    let mut cursor = 0u32;
    for (index, note) in notes.iter().enumerate() {
        let start = to_grid(index, "onset", note.onset)?;
        let len = to_grid(index, "duration", note.duration)?;
        if len == 0 {
            return Err(QuantizeError::NonPositive { index });
        }
        if start != cursor {
            return Err(QuantizeError::Discontinuous {
                index,
                expected: f64::from(cursor) / f64::from(grid),
                found: note.onset,
            });
        }
        let end = start + len;
        let mut t = start;
        while t < end {
            let beat = (t / grid) as usize;
            let beat_end = (beat as u32 + 1) * grid;
            let piece = end.min(beat_end) - t;
            if per_beat.len() <= beat {
                per_beat.resize_with(beat + 1, Vec::new);
            }
            per_beat[beat].push((note.pitch, f64::from(piece) / f64::from(grid)));
            t += piece;
        }
        cursor = end;
    }
    if !cursor.is_multiple_of(grid) {
        return Err(QuantizeError::PartialFinalBeat {
            remainder: f64::from(cursor % grid) / f64::from(grid),
        });
    }
    per_beat
        .into_iter()
        .enumerate()
        .map(|(i, notes)| BeatEvent::new(i, notes).map_err(QuantizeError::from))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(m: i64) -> Pitch {
        Pitch::new(m).unwrap()
    }

    #[test]
    fn whole_note_splits_per_beat() {
        let beats = quantize_beats(&[RawNote::new(p(60), 0.0, 4.0)]).unwrap();
        assert_eq!(beats.len(), 4);
        for (i, b) in beats.iter().enumerate() {
            assert_eq!(b.beat_index(), i);
            assert_eq!(b.notes(), &[(p(60), 1.0)]);
        }
    }

    #[test]
    fn eighths_group_into_one_beat() {
        let beats =
            quantize_beats(&[RawNote::new(p(62), 0.0, 0.5), RawNote::new(p(64), 0.5, 0.5)])
                .unwrap();
        assert_eq!(beats.len(), 1);
        assert_eq!(beats[0].notes(), &[(p(62), 0.5), (p(64), 0.5)]);
        assert_eq!(beats[0].representative(), p(62));
    }

    #[test]
    fn dotted_quarter_straddles_beats() {
        let beats =
            quantize_beats(&[RawNote::new(p(67), 0.0, 1.5), RawNote::new(p(65), 1.5, 0.5)])
                .unwrap();
        assert_eq!(beats[0].notes(), &[(p(67), 1.0)]);
        assert_eq!(beats[1].notes(), &[(p(67), 0.5), (p(65), 0.5)]);
        assert_eq!(beats[1].representative(), p(67));
    }

    #[test]
    fn errors() {
        assert_eq!(quantize_beats(&[]), Err(QuantizeError::Empty));
        assert!(matches!(
            quantize_beats(&[RawNote::new(p(60), 0.0, 1.0 / 3.0)]),
            Err(QuantizeError::OffGrid { what: "duration", .. })
        ));
        assert!(matches!(
            quantize_beats(&[RawNote::new(p(60), 0.0, 1.0), RawNote::new(p(60), 1.5, 0.5)]),
            Err(QuantizeError::Discontinuous { index: 1, .. })
        ));
        assert!(matches!(
            quantize_beats(&[RawNote::new(p(60), 0.0, 1.5)]),
            Err(QuantizeError::PartialFinalBeat { .. })
        ));
    }

    #[test]
    fn sixteenth_resolution_rejected_below_grid() {
        // 1/8 beat is the finest accepted value
        let ok = (0..8).map(|i| RawNote::new(p(60 + i), f64::from(i as u8) / 8.0, 0.125));
        assert_eq!(quantize_beats(&ok.collect::<Vec<_>>()).unwrap()[0].notes().len(), 8);
        assert!(quantize_beats(&[RawNote::new(p(60), 0.0, 1.0 / 16.0)]).is_err());
    }
}
