//! The `fundcast` command line: one subcommand per pipeline stage.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use chrono::{Datelike, NaiveDate};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::eval::{
    compute_metrics, featurize, fit_model, fmt4, fmt_opt4, labeled, roc_auc, run_dataset, series_a_experiment,
    sweep_cutoffs, temporal_split, topk_from_run, year_range_experiment, HorizonConfig, PipelineConfig, Report,
    DEFAULT_BETA, DEFAULT_TRAIN_RATIO,
};
use crate::features::{read_feature_csv, Dataset, FeatureManifest, FeatureVector};
use crate::ingest::{
    default_observations, generate_synthetic_corpus, load_corpus, load_observations, write_synthetic_corpus, Corpus,
    GenConfig, ObservationPoint, OBSERVATIONS_FILE,
};
use crate::learn::{GbdtModel, TrainConfig};
use crate::topics::{load_headlines, synthetic_headlines, train_topic_classifier, TopicConfig, TopicModel, HEADLINES_FILE};

pub const FEATURES_FILE: &str = "features.csv";
pub const MANIFEST_FILE: &str = "manifest.csv";
pub const MODEL_FILE: &str = "model.json";
pub const PREDICTIONS_FILE: &str = "predictions.csv";

#[derive(Debug, Parser)]
#[command(name = "fundcast", version, about = "Predict whether a startup raises a funding round")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic fixture corpus.
    Generate(GenerateArgs),
    /// Extract feature rows and horizon labels from a fixture directory.
    Featurize(FeaturizeArgs),
    /// Train a boosted-tree model on the training split of a feature file.
    Train(TrainArgs),
    /// Score the test split; with --fixtures, compare horizons of 1 to 5 years.
    Evaluate(EvaluateArgs),
    /// Score the test split at every canonical cutoff.
    Sweep(SweepArgs),
    /// Retrain on the top-k features by importance.
    Ablate(AblateArgs),
    /// Series A or later within a year, for companies past an early round.
    SeriesA(SeriesAArgs),
    /// Score feature rows with a saved model.
    Predict(PredictArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 2000)]
    pub companies: usize,
    #[arg(long, default_value_t = 0.3)]
    pub positive_rate: f64,
    #[arg(long, default_value_t = 1.0)]
    pub signal: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct FeaturizeArgs {
    #[arg(long)]
    pub fixtures: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub horizon: u32,
    #[arg(long, default_value_t = DEFAULT_TRAIN_RATIO)]
    pub train_ratio: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, default_value_t = 500)]
    pub trees: usize,
    #[arg(long, default_value_t = 6)]
    pub depth: usize,
    #[arg(long, default_value_t = 0.1)]
    pub learning_rate: f64,
    #[arg(long, default_value_t = 5)]
    pub min_leaf: usize,
    #[arg(long, default_value_t = 1)]
    pub permutations: usize,
    #[arg(long, default_value_t = DEFAULT_TRAIN_RATIO)]
    pub train_ratio: f64,
}

impl ModelArgs {
    fn pipeline(&self, seed: u64, cutoff: f64, beta: f64) -> PipelineConfig {
        PipelineConfig {
            train_ratio: self.train_ratio,
            train: TrainConfig {
                tree_count: self.trees,
                max_depth: self.depth,
                learning_rate: self.learning_rate,
                min_samples_leaf: self.min_leaf,
                permutation_count: self.permutations,
                seed,
                ..TrainConfig::default()
            },
            cutoff,
            beta,
            seed,
            ..PipelineConfig::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub out: PathBuf,
    /// Defaults to `<out>/features.csv`.
    #[arg(long)]
    pub features: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub features: Option<PathBuf>,
    /// Run the horizon comparison on this fixture directory instead.
    #[arg(long)]
    pub fixtures: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    pub cutoff: f64,
    #[arg(long, default_value_t = DEFAULT_BETA)]
    pub beta: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 5)]
    pub max_horizon: u32,
    #[command(flatten)]
    pub train: ModelArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub features: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_BETA)]
    pub beta: f64,
    #[arg(long, default_value_t = DEFAULT_TRAIN_RATIO)]
    pub train_ratio: f64,
}

#[derive(Debug, Args)]
pub struct AblateArgs {
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub features: Option<PathBuf>,
    #[arg(long, default_value_t = 18)]
    pub top_k: usize,
    #[arg(long, default_value_t = 0.5)]
    pub cutoff: f64,
    #[arg(long, default_value_t = DEFAULT_BETA)]
    pub beta: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Args)]
pub struct SeriesAArgs {
    #[arg(long)]
    pub fixtures: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Repeatable; defaults to 0.5 and 0.75.
    #[arg(long = "cutoff")]
    pub cutoffs: Vec<f64>,
    #[arg(long, default_value_t = DEFAULT_BETA)]
    pub beta: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub features: PathBuf,
    /// Output directory; predictions go to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` and runs the command, returning the process exit code:
/// 0 on success, 1 on usage or validation errors, 2 on I/O errors.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &anyhow::Error) -> i32 {
    for cause in e.chain() {
        if let Some(err) = cause.downcast_ref::<crate::Error>() {
            return if err.is_io() { 2 } else { 1 };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 2;
        }
    }
    1
}

pub fn execute(command: Command) -> Result<()> {
    match command {
        Command::Generate(a) => generate(a),
        Command::Featurize(a) => featurize_cmd(a),
        Command::Train(a) => train(a),
        Command::Evaluate(a) => evaluate(a),
        Command::Sweep(a) => sweep(a),
        Command::Ablate(a) => ablate(a),
        Command::SeriesA(a) => series_a(a),
        Command::Predict(a) => predict(a),
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)
        .map_err(|e| crate::Error::io(dir.display().to_string(), e))
        .map_err(Into::into)
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let body = serde_json::to_string_pretty(value)? + "\n";
    fs::write(path, body).map_err(|e| crate::Error::io(path.display().to_string(), e))?;
    Ok(())
}

fn generate(a: GenerateArgs) -> Result<()> {
    let config = GenConfig {
        companies: a.companies,
        positive_rate: a.positive_rate,
        signal_strength: a.signal,
        ..GenConfig::default()
    };
    let synth = generate_synthetic_corpus(&config, a.seed)?;
    write_synthetic_corpus(&synth, &a.out)?;
    eprintln!(
        "wrote {} companies ({} positive) to {}",
        synth.corpus.companies.len(),
        synth.positives.len(),
        a.out.display()
    );
    Ok(())
}

/// Corpus, observations and topic model for a fixture directory.
pub struct Fixtures {
    pub corpus: Corpus,
    pub observations: Vec<ObservationPoint>,
    pub topics: TopicModel,
}

/// January 1 of the year of the latest dated record.
fn latest_january(corpus: &Corpus) -> NaiveDate {
    let mut latest = corpus.companies.values().map(|c| c.founded_on).max().unwrap_or_default();
    for r in corpus.rounds.values().flatten() {
        latest = latest.max(r.announced_on);
    }
    for p in corpus.press.values().flatten() {
        latest = latest.max(p.published_on);
    }
    for t in corpus.tweets.values().flatten() {
        latest = latest.max(t.created_at.date_naive());
    }
    NaiveDate::from_ymd_opt(latest.year(), 1, 1).expect("January 1 exists")
}

pub fn load_fixtures(dir: &Path, seed: u64) -> Result<Fixtures> {
    let corpus = load_corpus(dir).with_context(|| format!("loading fixtures from {}", dir.display()))?;
    let obs_path = dir.join(OBSERVATIONS_FILE);
    let observations = if obs_path.is_file() {
        load_observations(&obs_path)?
    } else {
        default_observations(&corpus, latest_january(&corpus))
    };
    let head_path = dir.join(HEADLINES_FILE);
    let headlines = if head_path.is_file() {
        load_headlines(&head_path)?
    } else {
        synthetic_headlines(60, seed)
    };
    let topics = train_topic_classifier(
        &headlines,
        &TopicConfig {
            seed,
            ..TopicConfig::default()
        },
    )?;
    Ok(Fixtures {
        corpus,
        observations,
        topics,
    })
}

#[derive(Serialize)]
struct FeaturizeMeta {
    seed: u64,
    manifest_hash: String,
    horizon_years: u32,
    train_ratio: f64,
    rows: usize,
    positives: usize,
    train_rows: usize,
    test_rows: usize,
}

fn featurize_cmd(a: FeaturizeArgs) -> Result<()> {
    let fx = load_fixtures(&a.fixtures, a.seed)?;
    let table = featurize(&fx.corpus, &fx.observations, &fx.topics, a.train_ratio)?;
    let data = labeled(&table, &fx.corpus, &HorizonConfig::years(a.horizon))?;
    create_dir(&a.out)?;
    data.write_csv(a.out.join(FEATURES_FILE))?;
    fs::write(a.out.join(MANIFEST_FILE), data.manifest.to_csv())
        .map_err(|e| crate::Error::io(a.out.join(MANIFEST_FILE).display().to_string(), e))?;
    write_json(
        &a.out.join("featurize.json"),
        &FeaturizeMeta {
            seed: a.seed,
            manifest_hash: data.manifest.hash(),
            horizon_years: a.horizon,
            train_ratio: a.train_ratio,
            rows: data.len(),
            positives: data.positives(),
            train_rows: table.split.train.len(),
            test_rows: table.split.test.len(),
        },
    )?;
    eprintln!("wrote {} rows ({} positive) to {}", data.len(), data.positives(), a.out.display());
    Ok(())
}

fn read_dataset(path: &Path) -> Result<Dataset> {
    Ok(Dataset::read_csv(path, &FeatureManifest::canonical())?)
}

fn observations_of(rows: &[FeatureVector]) -> Vec<ObservationPoint> {
    rows.iter()
        .map(|r| ObservationPoint::new(r.company_id.clone(), r.prediction_date))
        .collect()
}

fn importance_report(model: &GbdtModel) -> Report {
    let mut r = Report::new("Feature importance", model.config.seed, &model.manifest_hash, &["rank", "feature", "importance"]);
    for (i, (name, v)) in model.feature_importance().entries.iter().enumerate() {
        r.push(vec![(i + 1).to_string(), name.clone(), format!("{v:.6}")]);
    }
    r
}

fn train(a: TrainArgs) -> Result<()> {
    let features = a.features.clone().unwrap_or_else(|| a.out.join(FEATURES_FILE));
    let data = read_dataset(&features)?;
    let split = temporal_split(&observations_of(&data.rows), a.model.train_ratio)?;
    let config = a.model.pipeline(a.seed, 0.5, DEFAULT_BETA);
    let model = fit_model(&data.subset(&split.train), &config)?;
    create_dir(&a.out)?;
    model.save(a.out.join(MODEL_FILE))?;
    importance_report(&model).write(&a.out, "importance")?;
    eprintln!(
        "trained {} trees on {} rows; final training loss {:.4}",
        model.booster.trees.len(),
        split.train.len(),
        model.loss_history.last().copied().unwrap_or(f64::NAN)
    );
    Ok(())
}

/// Test-split labels and model probabilities.
fn score_test_split(model_path: &Path, features: &Path, train_ratio: f64) -> Result<(GbdtModel, Vec<u8>, Vec<f64>)> {
    let model = GbdtModel::load(model_path)?;
    let data = Dataset::read_csv(features, &model.manifest)?;
    let split = temporal_split(&observations_of(&data.rows), train_ratio)?;
    let test = data.subset(&split.test);
    let probs = model.predict_proba(&test.manifest, &test.rows)?;
    Ok((model, test.labels, probs))
}

fn evaluate(a: EvaluateArgs) -> Result<()> {
    create_dir(&a.out)?;
    if let Some(fixtures) = &a.fixtures {
        let fx = load_fixtures(fixtures, a.seed)?;
        let config = a.train.pipeline(a.seed, a.cutoff, a.beta);
        let table = featurize(&fx.corpus, &fx.observations, &fx.topics, config.train_ratio)?;
        let horizons: Vec<u32> = (1..=a.max_horizon).collect();
        let rows = year_range_experiment(&fx.corpus, &table, &horizons, &config)?;
        let mut r = Report::new(
            "Prediction horizon comparison",
            a.seed,
            table.manifest.hash(),
            &["horizon_years", "positive_rate", "precision", "recall", "f1", "f_beta", "auc"],
        );
        for row in rows {
            r.push(vec![
                row.horizon_years.to_string(),
                fmt4(row.positive_rate),
                fmt4(row.metrics.precision),
                fmt4(row.metrics.recall),
                fmt4(row.metrics.f1),
                fmt4(row.metrics.f_beta),
                fmt_opt4(row.auc),
            ]);
        }
        r.write(&a.out, "year_range")?;
        print!("{}", r.to_text());
        return Ok(());
    }
    let model_path = a.model.clone().unwrap_or_else(|| a.out.join(MODEL_FILE));
    let features = a.features.clone().unwrap_or_else(|| a.out.join(FEATURES_FILE));
    let (model, labels, probs) = score_test_split(&model_path, &features, a.train.train_ratio)?;
    let m = compute_metrics(&labels, &probs, a.cutoff, a.beta);
    let mut r = Report::new(
        "Held-out evaluation",
        model.config.seed,
        &model.manifest_hash,
        &["cutoff", "beta", "rows", "positives", "tp", "fp", "tn", "fn", "precision", "recall", "f1", "f_beta", "auc"],
    );
    r.push(vec![
        format!("{:.2}", m.cutoff),
        format!("{}", m.beta),
        labels.len().to_string(),
        labels.iter().filter(|&&l| l == 1).count().to_string(),
        m.true_positives.to_string(),
        m.false_positives.to_string(),
        m.true_negatives.to_string(),
        m.false_negatives.to_string(),
        fmt4(m.precision),
        fmt4(m.recall),
        fmt4(m.f1),
        fmt4(m.f_beta),
        fmt_opt4(roc_auc(&labels, &probs)),
    ]);
    r.write(&a.out, "evaluate")?;
    print!("{}", r.to_text());
    Ok(())
}

fn sweep(a: SweepArgs) -> Result<()> {
    let model_path = a.model.clone().unwrap_or_else(|| a.out.join(MODEL_FILE));
    let features = a.features.clone().unwrap_or_else(|| a.out.join(FEATURES_FILE));
    let (model, labels, probs) = score_test_split(&model_path, &features, a.train_ratio)?;
    let s = sweep_cutoffs(&labels, &probs, a.beta);
    let mut r = Report::new(
        format!("Cutoff sweep (beta {}, best cutoff {:.2})", a.beta, s.best_cutoff),
        model.config.seed,
        &model.manifest_hash,
        &["cutoff", "predicted_positive", "precision", "recall", "f1", "f_beta", "best"],
    );
    for m in &s.rows {
        r.push(vec![
            format!("{:.2}", m.cutoff),
            m.predicted_positives().to_string(),
            fmt4(m.precision),
            fmt4(m.recall),
            fmt4(m.f1),
            fmt4(m.f_beta),
            if m.cutoff == s.best_cutoff { "*" } else { "" }.to_string(),
        ]);
    }
    create_dir(&a.out)?;
    r.write(&a.out, "sweep")?;
    print!("{}", r.to_text());
    Ok(())
}

fn ablate(a: AblateArgs) -> Result<()> {
    let features = a.features.clone().unwrap_or_else(|| a.out.join(FEATURES_FILE));
    let data = read_dataset(&features)?;
    if a.top_k == 0 || a.top_k > data.manifest.len() {
        return Err(crate::Error::Config(format!("--top-k {} outside 1..={}", a.top_k, data.manifest.len())).into());
    }
    let split = temporal_split(&observations_of(&data.rows), a.model.train_ratio)?;
    let config = a.model.pipeline(a.seed, a.cutoff, a.beta);
    let full = run_dataset(&data, &split, &config)?;
    let result = topk_from_run(&data, &split, a.top_k, &config, &full)?;
    let hash = data.manifest.hash();
    let mut r = Report::new(
        format!("Top-{} feature ablation (F1 retained {:.4})", a.top_k, result.retained),
        a.seed,
        &hash,
        &["model", "features", "precision", "recall", "f1", "f_beta", "auc"],
    );
    for (name, k, m, auc) in [
        ("full", data.manifest.len(), &result.full, result.full_auc),
        ("top_k", a.top_k, &result.top_k, result.top_k_auc),
    ] {
        r.push(vec![
            name.to_string(),
            k.to_string(),
            fmt4(m.precision),
            fmt4(m.recall),
            fmt4(m.f1),
            fmt4(m.f_beta),
            fmt_opt4(auc),
        ]);
    }
    create_dir(&a.out)?;
    r.write(&a.out, "ablate")?;
    let mut chosen = Report::new("Selected features", a.seed, &hash, &["rank", "feature"]);
    for (i, f) in result.features.iter().enumerate() {
        chosen.push(vec![(i + 1).to_string(), f.clone()]);
    }
    chosen.write(&a.out, "ablate_features")?;
    print!("{}", r.to_text());
    Ok(())
}

fn series_a(a: SeriesAArgs) -> Result<()> {
    let fx = load_fixtures(&a.fixtures, a.seed)?;
    let cutoffs = if a.cutoffs.is_empty() { vec![0.5, 0.75] } else { a.cutoffs.clone() };
    let config = a.model.pipeline(a.seed, cutoffs[0], a.beta);
    let result = series_a_experiment(&fx.corpus, &fx.observations, &fx.topics, &cutoffs, &config)?;
    let mut r = Report::new(
        format!(
            "Series A within one year after an early round ({} observations, {:.4} positive)",
            result.observations, result.positive_rate
        ),
        a.seed,
        FeatureManifest::canonical().hash(),
        &["cutoff", "precision", "recall", "f_beta"],
    );
    for row in &result.rows {
        r.push(vec![
            format!("{:.2}", row.cutoff),
            fmt4(row.precision),
            fmt4(row.metrics.recall),
            fmt4(row.f_beta),
        ]);
    }
    create_dir(&a.out)?;
    r.write(&a.out, "series_a")?;
    print!("{}", r.to_text());
    Ok(())
}

fn predict(a: PredictArgs) -> Result<()> {
    let model = GbdtModel::load(&a.model)?;
    let (rows, _) = read_feature_csv(&a.features, &model.manifest)?;
    let probs = model.predict_proba(&model.manifest, &rows)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["company_id", "prediction_date", "probability", "seed", "manifest_hash"])?;
    for (r, p) in rows.iter().zip(&probs) {
        w.write_record([
            r.company_id.clone(),
            r.prediction_date.to_string(),
            p.to_string(),
            model.config.seed.to_string(),
            model.manifest_hash.clone(),
        ])?;
    }
    let body = String::from_utf8(w.into_inner()?)?;
    match &a.out {
        Some(dir) => {
            create_dir(dir)?;
            let path = dir.join(PREDICTIONS_FILE);
            fs::write(&path, body).map_err(|e| crate::Error::io(path.display().to_string(), e))?;
        }
        None => print!("{body}"),
    }
    Ok(())
}
