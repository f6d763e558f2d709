//! `tsdict` — fit, predict, evaluate and benchmark the dilated-dictionary
//! time series classifier on UCR-style train/test splits.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use tsdict_core::ensemble::{default_rmax, default_wmax, memory_estimate};
use tsdict_core::io::{
    append_report_row, load_model, load_ucr_csv, load_ucr_tsv, save_model, write_predictions,
    write_report, ReportRow,
};
use tsdict_core::ridge::accuracy;
use tsdict_core::series::validate_dataset;
use tsdict_core::{EnsembleParams, LabeledDataset, TrainedModel};

type AnyError = Box<dyn std::error::Error + Send + Sync>;

#[derive(Parser)]
#[command(
    name = "tsdict",
    version,
    about = "Time series classification via random dilated word dictionaries"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Either the data-driven default or an explicit value.
#[derive(Clone, Copy, Debug)]
enum AutoOr {
    Auto,
    Value(usize),
}

fn parse_auto_or(s: &str) -> Result<AutoOr, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(AutoOr::Auto);
    }
    s.parse::<usize>()
        .map(AutoOr::Value)
        .map_err(|_| format!("expected 'auto' or a positive integer, got {s:?}"))
}

#[derive(Args)]
struct FitOpts {
    /// Ensemble size: 'auto' applies the dataset-size rule
    #[arg(long, default_value = "auto", value_parser = parse_auto_or)]
    rmax: AutoOr,
    /// Smallest window length
    #[arg(long, default_value_t = 4)]
    wmin: usize,
    /// Largest window length: 'auto' picks 24/44/84 by series length
    #[arg(long, default_value = "auto", value_parser = parse_auto_or)]
    wmax: AutoOr,
    /// Seed for all randomized choices
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Skip the first-order difference channel
    #[arg(long)]
    no_diff: bool,
}

#[derive(Args)]
struct RunOpts {
    /// Worker threads (default: one per core); results do not depend on this
    #[arg(long)]
    threads: Option<usize>,
    /// Suppress informational output
    #[arg(long)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Train on a labeled dataset and write a model file
    Fit {
        #[arg(long)]
        train: PathBuf,
        #[arg(long)]
        model_out: PathBuf,
        #[command(flatten)]
        fit: FitOpts,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Load a model and write predictions for a dataset
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        test: PathBuf,
        /// Predictions CSV
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Fit on a train split, score a test split, report accuracy
    Evaluate {
        #[arg(long)]
        train: PathBuf,
        #[arg(long)]
        test: PathBuf,
        /// Optionally save the fitted model
        #[arg(long)]
        model_out: Option<PathBuf>,
        /// Optionally write a predictions CSV
        #[arg(long)]
        out: Option<PathBuf>,
        /// Optionally append one row to this report CSV
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        fit: FitOpts,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Run every <Name>/<Name>_TRAIN.tsv + _TEST.tsv pair under a directory
    Benchmark {
        /// Directory in the UCR archive layout
        data_dir: PathBuf,
        /// Report CSV
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        fit: FitOpts,
        #[command(flatten)]
        run: RunOpts,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = dispatch(cli.command) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

fn dispatch(command: Command) -> Result<(), AnyError> {
    let threads = match &command {
        Command::Fit { run, .. }
        | Command::Predict { run, .. }
        | Command::Evaluate { run, .. }
        | Command::Benchmark { run, .. } => run.threads,
    };
    match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()?
            .install(|| run_command(command)),
        None => run_command(command),
    }
}

fn run_command(command: Command) -> Result<(), AnyError> {
    match command {
        Command::Fit {
            train,
            model_out,
            fit,
            run,
        } => run_fit(&train, &model_out, &fit, &run),
        Command::Predict {
            model,
            test,
            out,
            run,
        } => run_predict(&model, &test, &out, &run),
        Command::Evaluate {
            train,
            test,
            model_out,
            out,
            report,
            fit,
            run,
        } => run_evaluate(
            &train,
            &test,
            model_out.as_deref(),
            out.as_deref(),
            report.as_deref(),
            &fit,
            &run,
        ),
        Command::Benchmark {
            data_dir,
            out,
            fit,
            run,
        } => run_benchmark(&data_dir, &out, &fit, &run),
    }
}

fn load_dataset(path: &Path) -> Result<LabeledDataset, AnyError> {
    let ds = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        load_ucr_csv(path)?
    } else {
        load_ucr_tsv(path)?
    };
    Ok(ds)
}

/// Resolves the auto rules against the loaded training data and echoes the
/// outcome, so every run documents its own configuration.
fn resolve_params(
    ds: &LabeledDataset,
    fit: &FitOpts,
    quiet: bool,
) -> Result<EnsembleParams, AnyError> {
    validate_dataset(ds).into_result()?;
    let m = ds.len();
    let n = ds.series_len().expect("validated dataset");
    let (r_max, r_origin) = match fit.rmax {
        AutoOr::Auto => (default_rmax(m, n), "auto"),
        AutoOr::Value(v) => (v, "set"),
    };
    let (w_max, w_origin) = match fit.wmax {
        AutoOr::Auto => (default_wmax(n), "auto"),
        AutoOr::Value(v) => (v, "set"),
    };
    let params = EnsembleParams::new(fit.wmin, w_max, r_max, fit.seed, !fit.no_diff)?;
    if !quiet {
        println!("train: {m} series of length {n}, {} classes", ds.num_classes());
        println!("r_max = {r_max} ({r_origin})");
        println!("w_max = {w_max} ({w_origin})");
        println!("feature_dim = {}", params.feature_dim());
    }
    Ok(params)
}

fn run_fit(train: &Path, model_out: &Path, fit: &FitOpts, run: &RunOpts) -> Result<(), AnyError> {
    let ds = load_dataset(train)?;
    let params = resolve_params(&ds, fit, run.quiet)?;
    let started = Instant::now();
    let model = TrainedModel::fit(&ds, &params)?;
    let train_seconds = started.elapsed().as_secs_f64();
    save_model(&model, model_out)?;
    if !run.quiet {
        println!("train_seconds = {train_seconds:.3}");
        println!("model: {}", model_out.display());
    }
    Ok(())
}

fn run_predict(model: &Path, test: &Path, out: &Path, run: &RunOpts) -> Result<(), AnyError> {
    let model = load_model(model)?;
    let ds = load_dataset(test)?;
    let predictions = model.predict(&ds)?;
    write_predictions(&predictions, Some(ds.labels()), out)?;
    if !run.quiet {
        println!("predictions: {} ({} rows)", out.display(), predictions.len());
    }
    Ok(())
}

/// Dataset name for reports: file stem without a _TRAIN/_TEST suffix.
fn dataset_name(path: &Path) -> String {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    stem.trim_end_matches("_TRAIN")
        .trim_end_matches("_TEST")
        .to_owned()
}

fn evaluate_pair(
    name: &str,
    train: &LabeledDataset,
    test: &LabeledDataset,
    params: &EnsembleParams,
) -> Result<(TrainedModel, Vec<tsdict_core::ClassLabel>, ReportRow), AnyError> {
    let started = Instant::now();
    let model = TrainedModel::fit(train, params)?;
    let train_seconds = started.elapsed().as_secs_f64();

    let started = Instant::now();
    let predictions = model.predict(test)?;
    let predict_seconds = started.elapsed().as_secs_f64();

    let row = ReportRow {
        name: name.to_owned(),
        m_train: train.len(),
        m_test: test.len(),
        n: train.series_len().unwrap_or(0),
        r_max: params.r_max,
        feature_dim: params.feature_dim(),
        train_seconds,
        predict_seconds,
        accuracy: accuracy(&predictions, test.labels()),
        memory_estimate_bytes: memory_estimate(train.len(), params.r_max, params.use_diff),
    };
    Ok((model, predictions, row))
}

#[allow(clippy::too_many_arguments)]
fn run_evaluate(
    train: &Path,
    test: &Path,
    model_out: Option<&Path>,
    out: Option<&Path>,
    report: Option<&Path>,
    fit: &FitOpts,
    run: &RunOpts,
) -> Result<(), AnyError> {
    let train_ds = load_dataset(train)?;
    let test_ds = load_dataset(test)?;
    let params = resolve_params(&train_ds, fit, run.quiet)?;
    let name = dataset_name(train);
    let (model, predictions, row) = evaluate_pair(&name, &train_ds, &test_ds, &params)?;

    if let Some(path) = model_out {
        save_model(&model, path)?;
    }
    if let Some(path) = out {
        write_predictions(&predictions, Some(test_ds.labels()), path)?;
    }
    if let Some(path) = report {
        append_report_row(&row, path)?;
    }
    println!("accuracy = {}", row.accuracy);
    if !run.quiet {
        println!(
            "train_seconds = {:.3}, predict_seconds = {:.3}",
            row.train_seconds, row.predict_seconds
        );
    }
    Ok(())
}

fn run_benchmark(data_dir: &Path, out: &Path, fit: &FitOpts, run: &RunOpts) -> Result<(), AnyError> {
    let mut pairs = Vec::new();
    let entries = std::fs::read_dir(data_dir)
        .map_err(|e| format!("cannot read {}: {e}", data_dir.display()))?;
    for entry in entries {
        let entry = entry.map_err(|e| format!("cannot read {}: {e}", data_dir.display()))?;
        if !entry.path().is_dir() {
            continue;
        }
        let name = entry.file_name().to_string_lossy().into_owned();
        for ext in ["tsv", "csv"] {
            let train = entry.path().join(format!("{name}_TRAIN.{ext}"));
            let test = entry.path().join(format!("{name}_TEST.{ext}"));
            if train.is_file() && test.is_file() {
                pairs.push((name.clone(), train, test));
                break;
            }
        }
    }
    if pairs.is_empty() {
        return Err(format!("no train/test pairs found under {}", data_dir.display()).into());
    }
    pairs.sort_by(|a, b| a.0.cmp(&b.0));

    let mut rows = Vec::with_capacity(pairs.len());
    for (name, train_path, test_path) in &pairs {
        let train_ds = load_dataset(train_path)?;
        let test_ds = load_dataset(test_path)?;
        let params = resolve_params(&train_ds, fit, true)?;
        let (_, _, row) = evaluate_pair(name, &train_ds, &test_ds, &params)?;
        if !run.quiet {
            println!(
                "{name}: accuracy = {} (fit {:.3}s, predict {:.3}s, r_max {})",
                row.accuracy, row.train_seconds, row.predict_seconds, row.r_max
            );
        }
        rows.push(row);
    }
    write_report(&rows, out)?;
    if !run.quiet {
        println!("report: {}", out.display());
    }
    Ok(())
}
