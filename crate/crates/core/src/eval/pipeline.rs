//! End-to-end runs: featurize, label, split, balance, train and score.

use serde::{Deserialize, Serialize};

use super::metrics::{compute_metrics, roc_auc, sweep_cutoffs, CutoffSweep, MetricsReport, DEFAULT_BETA};
use super::split::{label_observations, temporal_split, upsample_positive, HorizonConfig, Split, DEFAULT_TRAIN_RATIO};
use crate::error::{Error, Result};
use crate::features::{assemble_feature_matrix, fit_minmax, Dataset, FeatureContext, FeatureManifest, FeatureVector};
use crate::ingest::{apply_time_window, Corpus, FundingStage, ObservationPoint};
use crate::learn::{feature_importance, train_gbdt, GbdtModel, ImportanceReport, TrainConfig};
use crate::topics::TopicModel;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub horizon: HorizonConfig,
    pub train_ratio: f64,
    pub train: TrainConfig,
    pub cutoff: f64,
    pub beta: f64,
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            horizon: HorizonConfig::default(),
            train_ratio: DEFAULT_TRAIN_RATIO,
            train: TrainConfig::default(),
            cutoff: 0.5,
            beta: DEFAULT_BETA,
            seed: 0,
        }
    }
}

/// Feature rows for a set of observations, with the split used to fit
/// publisher and site ranks.
#[derive(Debug, Clone)]
pub struct FeatureTable {
    pub manifest: FeatureManifest,
    pub observations: Vec<ObservationPoint>,
    pub rows: Vec<FeatureVector>,
    pub split: Split,
}

/// Featurizes `observations`, fitting ranks on the training split only.
pub fn featurize(
    corpus: &Corpus,
    observations: &[ObservationPoint],
    topics: &TopicModel,
    train_ratio: f64,
) -> Result<FeatureTable> {
    let split = temporal_split(observations, train_ratio)?;
    let training: Vec<ObservationPoint> = split.train.iter().map(|&i| observations[i].clone()).collect();
    let ctx = FeatureContext::fit(corpus, &training, topics.clone())?;
    let manifest = FeatureManifest::canonical();
    let rows = assemble_feature_matrix(corpus, observations, &manifest, &ctx)?;
    Ok(FeatureTable {
        manifest,
        observations: observations.to_vec(),
        rows,
        split,
    })
}

/// Held-out scores of one trained model.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub model: GbdtModel,
    pub test_labels: Vec<u8>,
    pub test_probabilities: Vec<f64>,
    pub metrics: MetricsReport,
    pub auc: Option<f64>,
    pub sweep: CutoffSweep,
    /// Share of positives over all observations.
    pub positive_rate: f64,
}

/// Scales on the training rows, balances the classes and trains. The
/// returned model carries the scaler and accepts raw rows.
pub fn fit_model(train: &Dataset, config: &PipelineConfig) -> Result<GbdtModel> {
    let scaler = fit_minmax(&train.manifest, &train.rows)?;
    let scaled = Dataset::new(train.manifest.clone(), scaler.apply(&train.rows)?, train.labels.clone())?;
    let balanced = upsample_positive(&scaled, config.seed)?;
    let train_config = TrainConfig {
        seed: config.seed,
        ..config.train
    };
    Ok(train_gbdt(&balanced, &train_config)?.with_scaler(scaler))
}

/// Trains on the training split and scores the test split.
pub fn run_dataset(data: &Dataset, split: &Split, config: &PipelineConfig) -> Result<RunResult> {
    if split.test.is_empty() {
        return Err(Error::EmptyCorpus("test split is empty".into()));
    }
    let train = data.subset(&split.train);
    let test = data.subset(&split.test);
    let model = fit_model(&train, config)?;
    let probs = model.predict_proba(&test.manifest, &test.rows)?;
    Ok(RunResult {
        metrics: compute_metrics(&test.labels, &probs, config.cutoff, config.beta),
        auc: roc_auc(&test.labels, &probs),
        sweep: sweep_cutoffs(&test.labels, &probs, config.beta),
        positive_rate: data.positives() as f64 / data.len().max(1) as f64,
        test_labels: test.labels,
        test_probabilities: probs,
        model,
    })
}

pub fn labeled(table: &FeatureTable, corpus: &Corpus, horizon: &HorizonConfig) -> Result<Dataset> {
    horizon.validate()?;
    let labels = label_observations(corpus, &table.observations, horizon);
    Dataset::new(table.manifest.clone(), table.rows.clone(), labels)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YearRangeRow {
    pub horizon_years: u32,
    pub positive_rate: f64,
    pub metrics: MetricsReport,
    pub auc: Option<f64>,
}

/// Relabels the same observations for each horizon and retrains.
pub fn year_range_experiment(
    corpus: &Corpus,
    table: &FeatureTable,
    horizons: &[u32],
    config: &PipelineConfig,
) -> Result<Vec<YearRangeRow>> {
    horizons
        .iter()
        .map(|&h| {
            let horizon = HorizonConfig {
                horizon_years: h,
                ..config.horizon
            };
            let data = labeled(table, corpus, &horizon)?;
            let run = run_dataset(&data, &table.split, config)?;
            Ok(YearRangeRow {
                horizon_years: h,
                positive_rate: run.positive_rate,
                metrics: run.metrics,
                auc: run.auc,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopKResult {
    pub k: usize,
    /// Selected columns, by descending importance.
    pub features: Vec<String>,
    pub full: MetricsReport,
    pub top_k: MetricsReport,
    pub full_auc: Option<f64>,
    pub top_k_auc: Option<f64>,
    /// Top-k F1 over full-model F1 (1 when both are 0).
    pub retained: f64,
}

/// Retrains on the `k` most important columns of a model trained on all of
/// them. Selected columns keep their manifest order.
pub fn topk_feature_experiment(data: &Dataset, split: &Split, k: usize, config: &PipelineConfig) -> Result<TopKResult> {
    if k == 0 || k > data.manifest.len() {
        return Err(Error::Config(format!("k = {k} outside 1..={}", data.manifest.len())));
    }
    let full = run_dataset(data, split, config)?;
    topk_from_run(data, split, k, config, &full)
}

pub fn topk_from_run(
    data: &Dataset,
    split: &Split,
    k: usize,
    config: &PipelineConfig,
    full: &RunResult,
) -> Result<TopKResult> {
    if k == 0 || k > data.manifest.len() {
        return Err(Error::Config(format!("k = {k} outside 1..={}", data.manifest.len())));
    }
    let importance = feature_importance(&full.model);
    let chosen: Vec<String> = importance.top(k).into_iter().map(str::to_string).collect();
    let mut columns: Vec<usize> = chosen
        .iter()
        .map(|n| data.manifest.position(n).expect("importance names come from the manifest"))
        .collect();
    columns.sort_unstable();
    let reduced = data.select_columns(&columns)?;
    let small = run_dataset(&reduced, split, config)?;
    let retained = if full.metrics.f1 == 0.0 {
        if small.metrics.f1 == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        small.metrics.f1 / full.metrics.f1
    };
    Ok(TopKResult {
        k,
        features: chosen,
        full: full.metrics,
        top_k: small.metrics,
        full_auc: full.auc,
        top_k_auc: small.auc,
        retained,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesARow {
    pub cutoff: f64,
    pub precision: f64,
    pub f_beta: f64,
    pub metrics: MetricsReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesAResult {
    pub observations: usize,
    pub positive_rate: f64,
    pub rows: Vec<SeriesARow>,
}

/// Observations whose company already closed an angel or seed round.
pub fn early_round_observations(corpus: &Corpus, observations: &[ObservationPoint]) -> Result<Vec<ObservationPoint>> {
    let mut out = Vec::new();
    for o in observations {
        let view = apply_time_window(corpus, o)?;
        if view.rounds.iter().any(|r| r.stage.is_early()) {
            out.push(o.clone());
        }
    }
    Ok(out)
}

/// Series A or later within a year, for companies past an early round.
pub fn series_a_experiment(
    corpus: &Corpus,
    observations: &[ObservationPoint],
    topics: &TopicModel,
    cutoffs: &[f64],
    config: &PipelineConfig,
) -> Result<SeriesAResult> {
    let filtered = early_round_observations(corpus, observations)?;
    if filtered.is_empty() {
        return Err(Error::EmptyCorpus("no observation follows an angel or seed round".into()));
    }
    let table = featurize(corpus, &filtered, topics, config.train_ratio)?;
    let horizon = HorizonConfig {
        horizon_years: 1,
        stage_floor: Some(FundingStage::SeriesA),
    };
    let data = labeled(&table, corpus, &horizon)?;
    let run = run_dataset(&data, &table.split, config)?;
    let rows = cutoffs
        .iter()
        .map(|&c| {
            let m = compute_metrics(&run.test_labels, &run.test_probabilities, c, config.beta);
            SeriesARow {
                cutoff: c,
                precision: m.precision,
                f_beta: m.f_beta,
                metrics: m,
            }
        })
        .collect();
    Ok(SeriesAResult {
        observations: filtered.len(),
        positive_rate: run.positive_rate,
        rows,
    })
}

pub fn importance_of(run: &RunResult) -> ImportanceReport {
    feature_importance(&run.model)
}
