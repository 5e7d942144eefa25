//! Horizon labels, temporal splits, class balancing, metrics and the
//! experiment drivers.

mod metrics;
mod pipeline;
mod report;
mod split;

pub use metrics::{
    compute_metrics, f_beta, roc_auc, sweep_at, sweep_cutoffs, CutoffSweep, MetricsReport, CANONICAL_CUTOFFS, DEFAULT_BETA,
};
pub use pipeline::{
    early_round_observations, featurize, fit_model, importance_of, labeled, run_dataset, series_a_experiment, topk_feature_experiment,
    topk_from_run, year_range_experiment, FeatureTable, PipelineConfig, RunResult, SeriesAResult, SeriesARow, TopKResult,
    YearRangeRow,
};
pub use report::{fmt4, fmt_opt4, Report};
pub use split::{
    label_horizon, label_observations, temporal_split, upsample_positive, HorizonConfig, Split, DEFAULT_TRAIN_RATIO,
};
