//! Alto, tenor and bass realization of a decoded progression.
//!
//! Every arrangement of the first beat seeds one greedy chain; each chain is
//! scored for horizontal voice-leading faults and the cheapest one wins.

mod arrangement;
mod chain;
mod penalty;

pub use arrangement::{
    enumerate_arrangements, Arrangement, VerticalFault, ALTO_RANGE, BASS_RANGE, MAX_SPACING,
    TENOR_RANGE,
};
pub use chain::{chain_arrangements, DeadEnd};
pub use penalty::{score_voicings, transition_violations, Rule, Violation, Voice};

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::{self, Execution};
use crate::hmm::{decode_key_chord, DecodeMethod, HmmError, HmmModel};
use crate::music::{KeyLabel, MelodyLine, MusicError, Pitch, ProgressionAnnotation, RomanChord};
use crate::ornament::Ornament;

#[derive(Debug, Error)]
pub enum HarmonizeError {
    #[error(transparent)]
    Decode(#[from] HmmError),
    #[error(transparent)]
    Music(#[from] MusicError),
    #[error("no arrangement of {chord} in {key} fits beat {beat_index}")]
    Infeasible { beat_index: usize, key: KeyLabel, chord: RomanChord },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct HarmonizeConfig {
    /// Use at most this many first-beat seeds, in enumeration order.
    pub max_seeds: Option<usize>,
    pub execution: Execution,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Harmonization {
    pub soprano: MelodyLine,
    pub arrangements: Vec<Arrangement>,
    pub annotation: ProgressionAnnotation,
    pub penalty: f64,
    pub violation_log: Vec<Violation>,
    pub ornaments: Vec<Ornament>,
    pub diagnostics: Vec<String>,
}

impl Harmonization {
    pub fn len(&self) -> usize {
        self.arrangements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrangements.is_empty()
    }

    /// Chord-tone pitch of `voice` at beat `t`, before ornamentation. The
    /// soprano's is its representative note.
    pub fn pitch(&self, voice: Voice, t: usize) -> Pitch {
        let a = &self.arrangements[t];
        match voice {
            Voice::Soprano => self.soprano.events()[t].representative(),
            Voice::Alto => a.alto,
            Voice::Tenor => a.tenor,
            Voice::Bass => a.bass,
        }
    }

    pub fn satb(&self, t: usize) -> [u8; 4] {
        Voice::ALL.map(|v| self.pitch(v, t).midi())
    }

    pub fn ornament_at(&self, voice: Voice, t: usize) -> Option<&Ornament> {
        self.ornaments.iter().find(|o| o.voice == voice && o.beat_index == t)
    }

    /// Sounding notes of `voice` within beat `t`, as (pitch, beat fraction).
    pub fn beat_notes(&self, voice: Voice, t: usize) -> Vec<(Pitch, f64)> {
        if voice == Voice::Soprano {
            return self.soprano.events()[t].notes().to_vec();
        }
        match self.ornament_at(voice, t) {
            Some(o) => o.notes.clone(),
            None => vec![(self.pitch(voice, t), 1.0)],
        }
    }

    /// Structured-text score: one record per beat with all four voices.
    pub fn to_score_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "meter: {}", self.soprano.meter()).unwrap();
        writeln!(out, "penalty: {}", self.penalty).unwrap();
        for d in &self.diagnostics {
            writeln!(out, "# {d}").unwrap();
        }
        out.push('\n');
        for t in 0..self.len() {
            write!(out, "{t} | key={} | roman={}", self.annotation.keys[t], self.annotation.chords[t])
                .unwrap();
            for v in Voice::ALL {
                let notes: Vec<String> =
                    self.beat_notes(v, t).iter().map(|(p, d)| format!("{p}:{d}")).collect();
                write!(out, " | {v}={}", notes.join(",")).unwrap();
            }
            let faults: Vec<String> = self
                .violation_log
                .iter()
                .filter(|x| x.beat_index == t)
                .map(|x| format!("{}:{}", x.rule, x.weight))
                .collect();
            if !faults.is_empty() {
                write!(out, " | violations={}", faults.join(";")).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Recomputes the penalty and violation log from the arrangements.
pub fn score_penalties(h: &Harmonization) -> (f64, Vec<Violation>) {
    let chords: Vec<[u8; 4]> = (0..h.len()).map(|t| h.satb(t)).collect();
    score_voicings(&chords)
}

/// Feasible arrangements at every beat of an annotated melody.
pub fn beat_candidates(
    melody: &MelodyLine,
    annotation: &ProgressionAnnotation,
    execution: Execution,
) -> Result<Vec<Vec<Arrangement>>, HarmonizeError> {
    annotation.check_length(melody)?;
    let soprano = melody.representatives();
    Ok(exec::map_indexed(execution, melody.len(), |t| {
        enumerate_arrangements(annotation.keys[t], annotation.chords[t], soprano[t])
            .into_iter()
            .map(|a| Arrangement { beat_index: t, ..a })
            .collect()
    }))
}

/// Penalty, violation log and arrangements of one completed chain.
pub type ScoredChain = (f64, Vec<Violation>, Vec<Arrangement>);

/// One scored chain per seed, in seed order; `Err` holds the dead-end beat.
pub fn seeded_chains(
    candidates: &[Vec<Arrangement>],
    soprano: &[Pitch],
    config: &HarmonizeConfig,
) -> Vec<Result<ScoredChain, DeadEnd>> {
    let seeds = candidates.first().map(Vec::as_slice).unwrap_or_default();
    let seeds = &seeds[..config.max_seeds.map_or(seeds.len(), |m| m.min(seeds.len()))];
    exec::map(config.execution, seeds, |&seed| {
        let chain = chain_arrangements(candidates, soprano, seed)?;
        let chords: Vec<[u8; 4]> =
            chain.iter().zip(soprano).map(|(a, &s)| chain::satb(s, a)).collect();
        let (penalty, log) = score_voicings(&chords);
        Ok((penalty, log, chain))
    })
}

/// Voices a melody whose keys and chords are already known.
pub fn harmonize_annotated(
    melody: &MelodyLine,
    annotation: ProgressionAnnotation,
    config: &HarmonizeConfig,
) -> Result<Harmonization, HarmonizeError> {
    let candidates = beat_candidates(melody, &annotation, config.execution)?;
    let infeasible = |t: usize| HarmonizeError::Infeasible {
        beat_index: t,
        key: annotation.keys[t],
        chord: annotation.chords[t],
    };
    if let Some(t) = candidates.iter().position(Vec::is_empty) {
        return Err(infeasible(t));
    }
    let soprano = melody.representatives();
    let results = seeded_chains(&candidates, &soprano, config);

    let mut best: Option<(f64, usize, Vec<Violation>, Vec<Arrangement>)> = None;
    let mut dropped = 0;
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok((penalty, log, chain)) => {
                if best.as_ref().is_none_or(|b| penalty < b.0) {
                    best = Some((penalty, i, log, chain));
                }
            }
            Err(_) => dropped += 1,
        }
    }
    let (penalty, seed, violation_log, arrangements) = best.ok_or_else(|| infeasible(0))?;
    let mut diagnostics = vec![format!("seed {seed} of {} chosen", candidates[0].len())];
    if dropped > 0 {
        diagnostics.push(format!("{dropped} seed(s) dropped at a dead end"));
    }
    Ok(Harmonization {
        soprano: melody.clone(),
        arrangements,
        annotation,
        penalty,
        violation_log,
        ornaments: Vec::new(),
        diagnostics,
    })
}

/// Decodes keys and chords for `melody`, then voices the result.
pub fn harmonize_melody(
    key_model: &HmmModel,
    chord_model: &HmmModel,
    melody: &MelodyLine,
    method: DecodeMethod,
    config: &HarmonizeConfig,
) -> Result<Harmonization, HarmonizeError> {
    let annotation = decode_key_chord(key_model, chord_model, melody, method)?;
    let chord_path: Vec<usize> = annotation
        .chords
        .iter()
        .map(|c| chord_model.state_index(&c.to_string()))
        .collect::<Result<_, _>>()?;
    let forbidden = chord_model.forbidden_steps(&chord_path);
    let mut h = harmonize_annotated(melody, annotation, config)?;
    for t in forbidden {
        h.diagnostics.push(format!(
            "beat {t}: masked transition {} -> {}",
            h.annotation.chords[t - 1],
            h.annotation.chords[t]
        ));
    }
    Ok(h)
}
