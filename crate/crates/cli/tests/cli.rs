use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn fixtures(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(rel)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_keychord")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn trained(dir: &TempDir) -> PathBuf {
    let model = dir.path().join("model.json");
    ok(&["train", "--corpus", s(&fixtures("chorales")), "--out", s(&model)]);
    model
}

fn melody_paths() -> Vec<PathBuf> {
    let mut v: Vec<_> = std::fs::read_dir(fixtures("melodies")).unwrap().map(|e| e.unwrap().path()).collect();
    v.sort();
    v
}

#[test]
fn train_reports_sizes_and_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let out = ok(&["train", "--corpus", s(&fixtures("chorales")), "--genre", "chorale", "--mode", "major", "--out", s(&a)]);
    assert!(out.contains("states: 24 keys, "), "{out}");
    assert!(out.contains(" ms"));
    ok(&["train", "--corpus", s(&fixtures("chorales")), "--out", s(&b)]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn empty_corpus_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let empty = dir.path().join("none");
    std::fs::create_dir(&empty).unwrap();
    let out = run(&["train", "--corpus", s(&empty), "--out", s(&dir.path().join("m.json"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains(s(&empty)));
}

#[test]
fn missing_model_is_an_io_error() {
    let out = run(&["analyze", "--model", "/nonexistent/m.json", "--melody", "x.txt"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn harmonize_annotation_matches_analyze() {
    let dir = TempDir::new().unwrap();
    let model = trained(&dir);
    for melody in melody_paths() {
        let a = ok(&["analyze", "--model", s(&model), "--melody", s(&melody), "--method", "viterbi"]);
        let h = ok(&["harmonize", "--model", s(&model), "--melody", s(&melody), "--method", "viterbi"]);
        assert_eq!(a, h, "{}", melody.display());
        assert_eq!(a.lines().count(), std::fs::read_to_string(&melody).unwrap().lines().filter(|l| l.contains('|')).count());
    }
}

#[test]
fn seeded_runs_repeat_exactly() {
    let dir = TempDir::new().unwrap();
    let model = trained(&dir);
    let melody = fixtures("melodies/melody_03.txt");
    let mut outputs = Vec::new();
    for i in 0..2 {
        let midi = dir.path().join(format!("{i}.mid"));
        let score = dir.path().join(format!("{i}.txt"));
        ok(&[
            "harmonize", "--model", s(&model), "--melody", s(&melody), "--ornaments", "on", "--seed", "17",
            "--out-midi", s(&midi), "--out-score", s(&score),
        ]);
        outputs.push((std::fs::read(&midi).unwrap(), std::fs::read(&score).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn zero_rate_ornaments_change_nothing() {
    let dir = TempDir::new().unwrap();
    let model = trained(&dir);
    let melody = fixtures("melodies/melody_07.txt");
    let off = dir.path().join("off.mid");
    let on = dir.path().join("on.mid");
    ok(&["harmonize", "--model", s(&model), "--melody", s(&melody), "--ornaments", "off", "--out-midi", s(&off)]);
    ok(&[
        "harmonize", "--model", s(&model), "--melody", s(&melody), "--ornaments", "on", "--p-passing", "0",
        "--p-auxiliary", "0", "--p-appoggiatura", "0", "--out-midi", s(&on),
    ]);
    assert_eq!(std::fs::read(&off).unwrap(), std::fs::read(&on).unwrap());
}

#[test]
fn unvoiceable_melody_exits_three() {
    let dir = TempDir::new().unwrap();
    let model = trained(&dir);
    let melody = dir.path().join("low.txt");
    std::fs::write(&melody, "id: low\nmeter: 4\n\n0 | notes=72:1\n1 | notes=50:1\n").unwrap();
    let out = run(&["harmonize", "--model", s(&model), "--melody", s(&melody)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("beat 1"));
}

#[test]
fn invalid_settings_are_rejected_before_work() {
    let dir = TempDir::new().unwrap();
    let model = trained(&dir);
    let melody = fixtures("melodies/melody_01.txt");
    let out = run(&["harmonize", "--model", s(&model), "--melody", s(&melody), "--p-passing", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    let midi = dir.path().join("x.mid");
    let out = run(&["harmonize", "--model", s(&model), "--melody", s(&melody), "--tempo", "0", "--out-midi", s(&midi)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!midi.exists());
}

#[test]
fn flags_override_the_config_file() {
    let dir = TempDir::new().unwrap();
    let model = trained(&dir);
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "method = \"posterior\"\n").unwrap();
    for melody in melody_paths() {
        let from_file = ok(&["analyze", "--model", s(&model), "--melody", s(&melody), "--config", s(&cfg)]);
        let posterior = ok(&["analyze", "--model", s(&model), "--melody", s(&melody), "--method", "posterior"]);
        assert_eq!(from_file, posterior);
        let flag = ok(&["analyze", "--model", s(&model), "--melody", s(&melody), "--config", s(&cfg), "--method", "viterbi"]);
        let viterbi = ok(&["analyze", "--model", s(&model), "--melody", s(&melody)]);
        assert_eq!(flag, viterbi);
    }
    std::fs::write(&cfg, "colour = \"red\"\n").unwrap();
    let out = run(&["analyze", "--model", s(&model), "--melody", s(&melody_paths()[0]), "--config", s(&cfg)]);
    assert_eq!(out.status.code(), Some(2));
}

fn analyses(model: &Path) -> Vec<String> {
    melody_paths().iter().map(|m| ok(&["analyze", "--model", s(model), "--melody", s(m)])).collect()
}

#[test]
fn export_then_override_round_trips() {
    let dir = TempDir::new().unwrap();
    let model = trained(&dir);
    let out_dir = dir.path().join("csv");
    ok(&["export", "--model", s(&model), "--out-dir", s(&out_dir)]);
    let key_csv = std::fs::read_to_string(out_dir.join("key_transition.csv")).unwrap();
    assert_eq!(key_csv.lines().count(), 25);
    assert_eq!(std::fs::read_to_string(out_dir.join("functional_summary.csv")).unwrap().lines().count(), 4);

    let again = dir.path().join("again.json");
    ok(&["override", "--model", s(&model), "--transitions", s(&out_dir.join("key_transition.csv")), "--layer", "key", "--out", s(&again)]);
    ok(&["override", "--model", s(&again), "--transitions", s(&out_dir.join("chord_transition.csv")), "--layer", "chord", "--out", s(&again)]);
    assert_eq!(analyses(&again), analyses(&model));

    let short = dir.path().join("short.csv");
    let lines: Vec<&str> = key_csv.lines().take(24).collect();
    std::fs::write(&short, lines.join("\n")).unwrap();
    let out = run(&["override", "--model", s(&model), "--transitions", s(&short), "--layer", "key", "--out", s(&again)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn boosted_override_changes_a_decode() {
    let dir = TempDir::new().unwrap();
    let model = trained(&dir);
    let out_dir = dir.path().join("csv");
    ok(&["export", "--model", s(&model), "--out-dir", s(&out_dir)]);
    let text = std::fs::read_to_string(out_dir.join("chord_transition.csv")).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let boost: Vec<bool> = header.iter().map(|h| ["ii", "iii", "vi", "viio6"].contains(h)).collect();
    let mut out = vec![header.join(",")];
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        let label = cells[0];
        let mut row: Vec<f64> = cells[1..].iter().map(|c| c.parse().unwrap()).collect();
        for (j, v) in row.iter_mut().enumerate() {
            if boost[j + 1] {
                *v *= 20.0;
            }
        }
        let sum: f64 = row.iter().sum();
        let cells: Vec<String> = row.iter().map(|v| format!("{:.17e}", v / sum)).collect();
        out.push(format!("{label},{}", cells.join(",")));
    }
    let boosted_csv = dir.path().join("boost.csv");
    std::fs::write(&boosted_csv, out.join("\n") + "\n").unwrap();
    let boosted = dir.path().join("boosted.json");
    ok(&["override", "--model", s(&model), "--transitions", s(&boosted_csv), "--layer", "chord", "--out", s(&boosted)]);
    let before = analyses(&model);
    let after = analyses(&boosted);
    assert!(before.iter().zip(&after).any(|(a, b)| a != b));
}

#[test]
fn rock_model_renders_accompaniment() {
    let dir = TempDir::new().unwrap();
    let model = dir.path().join("rock.json");
    let out = ok(&["train", "--corpus", s(&fixtures("rock")), "--genre", "rock", "--out", s(&model)]);
    assert!(out.contains("states: 12 keys"));
    assert!(out.contains("excluded song_minor"));
    let melody = fixtures("rock_melodies/rock_melody_02.txt");
    let midi = dir.path().join("rock.mid");
    let prog = ok(&["harmonize", "--model", s(&model), "--melody", s(&melody), "--keys-pattern", "arpeggio", "--out-midi", s(&midi)]);
    assert_eq!(prog, ok(&["analyze", "--model", s(&model), "--melody", s(&melody)]));
    let bytes = std::fs::read(&midi).unwrap();
    assert_eq!(&bytes[..4], b"MThd");
    assert_eq!(u16::from_be_bytes([bytes[10], bytes[11]]), 5);
    let out = run(&["analyze", "--model", s(&model), "--melody", s(&melody), "--genre", "chorale"]);
    assert_eq!(out.status.code(), Some(2));
}
