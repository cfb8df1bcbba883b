mod config;
mod error;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use keychord::corpus::{parse_corpus, parse_melody, parse_rock_melody, Genre, MelodyFile};
use keychord::exec::Execution;
use keychord::export::{export_functional_summary, export_matrices};
use keychord::harmonize::{HarmonizeConfig, Harmonization};
use keychord::hmm::{DecodeMethod, DEFAULT_ALPHA};
use keychord::midi::{MidiDocument, CHORALE_TEMPO, ROCK_TEMPO};
use keychord::model::{train, TrainOptions, TrainedModels};
use keychord::music::{KeyLabel, Mode};
use keychord::ornament::OrnamentConfig;
use keychord::pipeline::{analyze, harmonize, Analysis};
use keychord::rock::{harmonize_rock, render_accompaniment, KeysPattern, RockProgression};

use config::{check_alpha, FileConfig, RunConfig};
use error::CliError;

#[derive(Parser)]
#[command(name = "keychord", version, about = "Key/chord HMM harmonizer for chorale and rock melodies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit key and chord models from an annotated corpus directory.
    Train(TrainArgs),
    /// Decode a melody and write a four-part (or rock band) arrangement.
    Harmonize(HarmonizeArgs),
    /// Print the decoded key and chord of every beat.
    Analyze(AnalyzeArgs),
    /// Write transition/emission matrices and the functional summary as CSV.
    Export(ExportArgs),
    /// Replace one layer's transition matrix from a CSV file.
    Override(OverrideArgs),
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    genre: Option<Genre>,
    #[arg(long)]
    mode: Option<Mode>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    alpha: Option<f64>,
    /// Train the chord layer without the phrase-model mask.
    #[arg(long, conflicts_with = "mask")]
    no_mask: bool,
    /// Apply the phrase-model mask even where the genre default is off.
    #[arg(long)]
    mask: bool,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Args, Clone)]
struct DecodeArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    melody: PathBuf,
    #[arg(long)]
    method: Option<DecodeMethod>,
    /// Home key of the melody, e.g. `G` or `f#`; overrides the file header.
    #[arg(long)]
    key: Option<KeyLabel>,
    /// Refuse models of another genre.
    #[arg(long)]
    genre: Option<Genre>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct HarmonizeArgs {
    #[command(flatten)]
    decode: DecodeArgs,
    #[arg(long)]
    ornaments: Option<Switch>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    p_passing: Option<f64>,
    #[arg(long)]
    p_auxiliary: Option<f64>,
    #[arg(long)]
    p_appoggiatura: Option<f64>,
    #[arg(long)]
    max_seeds: Option<usize>,
    #[arg(long)]
    tempo: Option<f64>,
    #[arg(long)]
    keys_pattern: Option<KeysPattern>,
    #[arg(long)]
    no_drums: bool,
    /// Evaluate seeds on one thread.
    #[arg(long)]
    sequential: bool,
    #[arg(long)]
    out_midi: Option<PathBuf>,
    #[arg(long)]
    out_score: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    decode: DecodeArgs,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Layer {
    Key,
    Chord,
}

#[derive(Args)]
struct OverrideArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    transitions: PathBuf,
    #[arg(long)]
    layer: Layer,
    #[arg(long)]
    out: PathBuf,
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn millis(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1000.0
}

fn cmd_train(args: TrainArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.config.as_deref())?;
    let genre = args.genre.or(file.genre).unwrap_or_default();
    let mask = match (args.mask, args.no_mask) {
        (true, _) => Some(true),
        (_, true) => Some(false),
        _ => file.mask,
    };
    let opts = TrainOptions {
        mode: args.mode.or(file.mode).unwrap_or(Mode::Major),
        alpha: check_alpha(args.alpha.or(file.alpha).unwrap_or(DEFAULT_ALPHA))?,
        mask,
    };

    let start = Instant::now();
    let corpus = parse_corpus(&args.corpus, genre, Execution::Parallel)?;
    let models = train(&corpus, &opts)?;
    let elapsed = millis(start);
    models.save(&args.out)?;

    println!(
        "states: {} keys, {} chords",
        models.key_model.n_states(),
        models.chord_model.n_states()
    );
    println!(
        "trained {} {} model on {} pieces ({} events) in {elapsed:.1} ms",
        models.genre, models.mode, models.stats.pieces, models.stats.events
    );
    for (id, why) in &corpus.excluded {
        println!("excluded {id}: {why}");
    }
    if let Some(r) = &models.ornament_rates {
        println!(
            "ornament rates: passing {:.3}, auxiliary {:.3}, appoggiatura {:.3}",
            r.p_passing, r.p_auxiliary, r.p_appoggiatura
        );
    }
    println!("mask: {}", if models.mask_enabled { "on" } else { "off" });
    println!("wrote {}", args.out.display());
    Ok(())
}

fn load_models(args: &DecodeArgs) -> Result<TrainedModels, CliError> {
    let models = TrainedModels::load(&args.model)?;
    if let Some(g) = args.genre {
        if g != models.genre {
            return Err(CliError::input(format!(
                "{} holds a {} model, not {g}",
                args.model.display(),
                models.genre
            )));
        }
    }
    Ok(models)
}

fn read_melody(path: &Path) -> Result<MelodyFile, CliError> {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("melody");
    parse_melody(&read_text(path)?, stem).map_err(|errs| {
        let lines: Vec<String> = errs.iter().map(|e| format!("  {}, {e}", path.display())).collect();
        CliError::input(format!("cannot parse melody\n{}", lines.join("\n")))
    })
}

fn read_rock_melody(path: &Path) -> Result<Vec<u8>, CliError> {
    parse_rock_melody(&read_text(path)?).map_err(|errs| {
        let lines: Vec<String> = errs.iter().map(|e| format!("  {}, {e}", path.display())).collect();
        CliError::input(format!("cannot parse rock melody\n{}", lines.join("\n")))
    })
}

fn progression_text(prog: &RockProgression) -> String {
    prog.iter().enumerate().map(|(m, (k, c))| format!("{m}\t{k}\t{c}\n")).collect()
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<(), CliError> {
    let d = &args.decode;
    let file = FileConfig::load(d.config.as_deref())?;
    let method = d.method.or(file.method).unwrap_or_default();
    let models = load_models(&DecodeArgs { genre: d.genre.or(file.genre), ..d.clone() })?;
    match models.genre {
        Genre::Chorale => {
            let melody = read_melody(&d.melody)?;
            let analysis = analyze(&models, &melody.melody, d.key.or(melody.key), method)?;
            print!("{}", analysis.to_text());
            for t in analysis.forbidden_steps {
                eprintln!("warning: beat {t} uses a masked transition");
            }
        }
        Genre::Rock => {
            let pcs = read_rock_melody(&d.melody)?;
            print!("{}", progression_text(&harmonize_rock(&models.key_model, &models.chord_model, &pcs, method)?));
        }
    }
    Ok(())
}

fn resolve_run(args: &HarmonizeArgs, file: &FileConfig, estimated: Option<OrnamentConfig>) -> RunConfig {
    let base = estimated.unwrap_or_default();
    RunConfig {
        genre: args.decode.genre.or(file.genre),
        method: args.decode.method.or(file.method).unwrap_or_default(),
        ornaments: args.ornaments.map(|s| matches!(s, Switch::On)).or(file.ornaments).unwrap_or(false),
        rates: OrnamentConfig {
            p_passing: args.p_passing.or(file.p_passing).unwrap_or(base.p_passing),
            p_auxiliary: args.p_auxiliary.or(file.p_auxiliary).unwrap_or(base.p_auxiliary),
            p_appoggiatura: args.p_appoggiatura.or(file.p_appoggiatura).unwrap_or(base.p_appoggiatura),
            rng_seed: args.seed.or(file.seed).unwrap_or(0),
        },
        max_seeds: args.max_seeds.or(file.max_seeds),
        tempo_bpm: args.tempo.or(file.tempo),
        keys_pattern: args.keys_pattern.or(file.keys_pattern).unwrap_or_default(),
        drums: !args.no_drums && file.drums.unwrap_or(true),
        sequential: args.sequential || file.sequential.unwrap_or(false),
    }
}

fn report(h: &Harmonization) {
    eprintln!("penalty: {}", h.penalty);
    if h.violation_log.is_empty() {
        eprintln!("violations: none");
    } else {
        let mut counts: Vec<(String, usize)> = Vec::new();
        for v in &h.violation_log {
            let name = v.rule.to_string();
            match counts.iter_mut().find(|(n, _)| *n == name) {
                Some(c) => c.1 += 1,
                None => counts.push((name, 1)),
            }
        }
        let parts: Vec<String> = counts.iter().map(|(n, c)| format!("{n} x{c}")).collect();
        eprintln!("violations: {}", parts.join(", "));
    }
    if !h.ornaments.is_empty() {
        eprintln!("ornaments: {}", h.ornaments.len());
    }
    for d in &h.diagnostics {
        eprintln!("note: {d}");
    }
}

fn cmd_harmonize(args: HarmonizeArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.decode.config.as_deref())?;
    let decode_args = DecodeArgs { genre: args.decode.genre.or(file.genre), ..args.decode.clone() };
    let models = load_models(&decode_args)?;
    let run = resolve_run(&args, &file, models.ornament_rates);
    run.validate()?;

    let start = Instant::now();
    match models.genre {
        Genre::Chorale => {
            let melody = read_melody(&args.decode.melody)?;
            let config = HarmonizeConfig {
                max_seeds: run.max_seeds,
                execution: if run.sequential { Execution::Sequential } else { Execution::Parallel },
            };
            let ornaments = run.ornaments.then_some(&run.rates);
            let key = args.decode.key.or(melody.key);
            let h = harmonize(&models, &melody.melody, key, run.method, &config, ornaments)?;
            let elapsed = millis(start);

            let annotation = Analysis { annotation: h.annotation.clone(), forbidden_steps: Vec::new() };
            print!("{}", annotation.to_text());
            report(&h);
            eprintln!("harmonized {} beats in {elapsed:.1} ms", h.len());
            if let Some(path) = &args.out_score {
                write_text(path, &h.to_score_text())?;
            }
            if let Some(path) = &args.out_midi {
                MidiDocument::from_harmonization(&h, run.tempo_bpm.unwrap_or(CHORALE_TEMPO)).write(path)?;
            }
        }
        Genre::Rock => {
            let pcs = read_rock_melody(&args.decode.melody)?;
            let prog = harmonize_rock(&models.key_model, &models.chord_model, &pcs, run.method)?;
            let elapsed = millis(start);
            let text = progression_text(&prog);
            print!("{text}");
            eprintln!("harmonized {} measures in {elapsed:.1} ms", prog.len());
            if let Some(path) = &args.out_score {
                write_text(path, &text)?;
            }
            if let Some(path) = &args.out_midi {
                let score = render_accompaniment(&prog, Some(&pcs), run.keys_pattern, run.drums);
                MidiDocument::from_accompaniment(&score, run.tempo_bpm.unwrap_or(ROCK_TEMPO)).write(path)?;
            }
        }
    }
    Ok(())
}

fn cmd_export(args: ExportArgs) -> Result<(), CliError> {
    let models = TrainedModels::load(&args.model)?;
    let mut written = export_matrices(&models.key_model, "key", &args.out_dir)?;
    written.extend(export_matrices(&models.chord_model, "chord", &args.out_dir)?);
    written.push(export_functional_summary(&models.chord_model, &args.out_dir.join("functional_summary.csv"))?);
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_override(args: OverrideArgs) -> Result<(), CliError> {
    let mut models = TrainedModels::load(&args.model)?;
    let text = read_text(&args.transitions)?;
    let slot = match args.layer {
        Layer::Key => &mut models.key_model,
        Layer::Chord => &mut models.chord_model,
    };
    *slot = slot
        .apply_override(&text)
        .map_err(|e| CliError::input(format!("{}: {e}", args.transitions.display())))?;
    models.save(&args.out)?;
    println!("wrote {}", args.out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Train(a) => cmd_train(a),
        Command::Harmonize(a) => cmd_harmonize(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Export(a) => cmd_export(a),
        Command::Override(a) => cmd_override(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("keychord: {e}");
            e.exit_code()
        }
    }
}
