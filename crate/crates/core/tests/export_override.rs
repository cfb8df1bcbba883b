mod common;

use keychord::export::{chord_functional_summary, export_functional_summary, export_matrices, functional_summary};
use keychord::hmm::{matrix_to_csv, DecodeMethod, HmmError, Matrix};
use keychord::model::TrainedModels;
use keychord::pipeline::analyze;

/// Plain comma split, independent of the crate's reader.
fn read_csv(text: &str) -> (Vec<String>, Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().unwrap().split(',').skip(1).map(str::to_string).collect();
    let mut labels = Vec::new();
    let mut rows = Vec::new();
    for line in lines {
        let mut cells = line.split(',');
        labels.push(cells.next().unwrap().to_string());
        rows.push(cells.map(|c| c.parse().unwrap()).collect());
    }
    (header, labels, rows)
}

fn decodes(models: &TrainedModels) -> Vec<String> {
    common::melodies()
        .iter()
        .map(|f| analyze(models, &f.melody, f.key, DecodeMethod::Viterbi).unwrap().to_text())
        .collect()
}

#[test]
fn exported_files_have_labels_and_stochastic_rows() {
    let models = common::chorale_models();
    let dir = tempfile::tempdir().unwrap();
    let files = export_matrices(&models.key_model, "key", dir.path()).unwrap();
    let text = std::fs::read_to_string(&files[0]).unwrap();
    assert_eq!(text.lines().count(), 25);
    let (header, labels, rows) = read_csv(&text);
    assert_eq!(header, models.key_model.states());
    assert_eq!(labels, models.key_model.states());
    for row in &rows {
        assert_eq!(row.len(), 24);
        assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-6);
    }
    let emission = std::fs::read_to_string(&files[1]).unwrap();
    let (header, _, rows) = read_csv(&emission);
    assert_eq!(header.len(), 12);
    assert_eq!(rows.len(), 24);
}

#[test]
fn reimported_matrices_decode_identically() {
    let models = common::chorale_models();
    let dir = tempfile::tempdir().unwrap();
    let mut again = models.clone();
    for (prefix, slot) in [("key", 0), ("chord", 1)] {
        let m = if slot == 0 { &models.key_model } else { &models.chord_model };
        let files = export_matrices(m, prefix, dir.path()).unwrap();
        let text = std::fs::read_to_string(&files[0]).unwrap();
        let replaced = m.apply_override(&text).unwrap();
        assert_eq!(replaced.transition(), m.transition());
        if slot == 0 {
            again.key_model = replaced;
        } else {
            again.chord_model = replaced;
        }
    }
    assert_eq!(decodes(&again), decodes(&models));
}

#[test]
fn short_override_is_rejected() {
    let models = common::chorale_models();
    let km = &models.key_model;
    let rows: Vec<Vec<f64>> = km.transition().to_rows().into_iter().take(23).collect();
    let csv = matrix_to_csv(&km.states()[..23], km.states(), &Matrix::from_rows(rows).unwrap());
    assert!(matches!(km.apply_override(&csv), Err(HmmError::OverrideRejected { .. })));
}

#[test]
fn bad_row_sum_names_the_row() {
    let models = common::chorale_models();
    let cm = &models.chord_model;
    let mut rows = cm.transition().to_rows();
    rows[2].iter_mut().for_each(|x| *x *= 2.0);
    let csv = matrix_to_csv(cm.states(), cm.states(), &Matrix::from_rows(rows).unwrap());
    let err = cm.apply_override(&csv).unwrap_err().to_string();
    assert!(err.contains(&cm.states()[2]), "{err}");
}

#[test]
fn boosting_minor_chords_changes_some_decode() {
    let models = common::chorale_models();
    let cm = &models.chord_model;
    let boosted: Vec<usize> = ["ii", "iii", "vi", "viio6"].iter().filter_map(|c| cm.state_index(c).ok()).collect();
    assert!(boosted.len() >= 3);
    let rows: Vec<Vec<f64>> = cm
        .transition()
        .to_rows()
        .into_iter()
        .map(|mut row| {
            for &j in &boosted {
                row[j] *= 20.0;
            }
            let sum: f64 = row.iter().sum();
            row.into_iter().map(|x| x / sum).collect()
        })
        .collect();
    let csv = matrix_to_csv(cm.states(), cm.states(), &Matrix::from_rows(rows).unwrap());
    let mut changed = models.clone();
    changed.chord_model = cm.apply_override(&csv).unwrap();
    let before = decodes(&models);
    let after = decodes(&changed);
    assert!(before.iter().zip(&after).any(|(a, b)| a != b));
    let count = |texts: &[String]| {
        texts
            .iter()
            .flat_map(|t| t.lines())
            .filter(|l| boosted.iter().any(|&j| l.ends_with(&format!("\t{}", cm.states()[j]))))
            .count()
    };
    assert!(count(&after) > count(&before));
}

#[test]
fn summary_recomputed_from_export() {
    let models = common::chorale_models();
    let cm = &models.chord_model;
    let dir = tempfile::tempdir().unwrap();
    let files = export_matrices(cm, "chord", dir.path()).unwrap();
    let summary_path = dir.path().join("summary.csv");
    export_functional_summary(cm, &summary_path).unwrap();

    let (_, labels, rows) = read_csv(&std::fs::read_to_string(&files[0]).unwrap());
    let chords: Vec<_> = labels.iter().map(|l| l.parse().unwrap()).collect();
    let recomputed = functional_summary(&Matrix::from_rows(rows).unwrap(), &chords, cm.state_counts());
    let (header, groups, emitted) = read_csv(&std::fs::read_to_string(&summary_path).unwrap());
    assert_eq!(header, ["T", "PD", "D"]);
    assert_eq!(groups, ["T", "PD", "D"]);
    for (g, row) in emitted.iter().enumerate() {
        for (h, v) in row.iter().enumerate() {
            assert!((v - recomputed[(g, h)]).abs() < 1e-9);
        }
    }
    assert_eq!(chord_functional_summary(cm).unwrap(), recomputed);
}
