mod common;

use common::oracle::all_paths;
use keychord::hmm::{decode_chords_given_keys, decode_key_chord, DecodeMethod};
use keychord::music::{KeyLabel, MelodyLine};
use keychord::pipeline::analyze;

#[test]
fn arpeggiated_tonic_stays_in_c() {
    let models = common::chorale_models();
    let km = &models.key_model;
    let melody = MelodyLine::from_pitches(&[60, 64, 67, 64]).unwrap();
    let obs: Vec<usize> = melody.representatives().iter().map(|p| usize::from(p.pitch_class())).collect();

    let mut best = (f64::NEG_INFINITY, vec![]);
    for path in all_paths(km.n_states(), obs.len()) {
        let mut lp = km.initial()[path[0]].ln() + km.emission()[(path[0], obs[0])].ln();
        for t in 1..obs.len() {
            lp += km.transition()[(path[t - 1], path[t])].ln() + km.emission()[(path[t], obs[t])].ln();
        }
        if lp > best.0 {
            best = (lp, path);
        }
    }
    let c = km.state_index("C").unwrap();
    assert_eq!(best.1, vec![c; 4]);
    let ann = decode_key_chord(km, &models.chord_model, &melody, DecodeMethod::Viterbi).unwrap();
    assert_eq!(ann.keys, vec![KeyLabel::major(0); 4]);
}

#[test]
fn decoding_is_deterministic() {
    let models = common::chorale_models();
    for file in common::melodies() {
        for method in [DecodeMethod::Viterbi, DecodeMethod::Posterior] {
            let a = analyze(&models, &file.melody, file.key, method).unwrap();
            let b = analyze(&models, &file.melody, file.key, method).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.annotation.len(), file.melody.len());
        }
    }
}

#[test]
fn shifted_melody_and_keys_give_same_chords() {
    let models = common::chorale_models();
    for file in common::melodies() {
        let ann = decode_key_chord(&models.key_model, &models.chord_model, &file.melody, DecodeMethod::Viterbi)
            .unwrap();
        for s in [2, -3] {
            let Ok(moved) = file.melody.transpose(s) else { continue };
            let keys: Vec<KeyLabel> = ann.keys.iter().map(|k| k.transpose(s)).collect();
            let chords =
                decode_chords_given_keys(&models.chord_model, &moved, &keys, DecodeMethod::Viterbi).unwrap();
            assert_eq!(chords, ann.chords, "{} shifted {s}", file.id);
        }
    }
}

#[test]
fn key_hint_moves_decoded_keys() {
    let models = common::chorale_models();
    for file in common::melodies().into_iter().filter(|f| f.key.is_some()) {
        let key = file.key.unwrap();
        let shift = models.reference_shift(key);
        let at_reference = file.melody.transpose(shift).unwrap();
        let plain = analyze(&models, &at_reference, None, DecodeMethod::Viterbi).unwrap();
        let hinted = analyze(&models, &file.melody, Some(key), DecodeMethod::Viterbi).unwrap();
        assert_eq!(hinted.annotation.chords, plain.annotation.chords, "{}", file.id);
        let back: Vec<KeyLabel> = plain.annotation.keys.iter().map(|k| k.transpose(-shift)).collect();
        assert_eq!(hinted.annotation.keys, back, "{}", file.id);
    }
}
