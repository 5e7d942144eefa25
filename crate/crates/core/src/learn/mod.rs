//! Gradient-boosted trees with target-statistics encoding, plus the
//! comparison baselines.

pub mod baselines;
pub mod boost;
pub mod encode;
pub mod gbdt;
pub mod matrix;
pub mod tree;

pub use baselines::{train_baseline, train_baseline_matrix, BaselineConfig, BaselineKind, BaselineModel, MatrixBaseline};
pub use boost::{logloss_from_margin, sigmoid, BoostParams, BoostRun, Booster};
pub use encode::{encode_text_feature, ordered_target_encode, text_tokens, IndexCodes, LabelStat, TargetTable};
pub use gbdt::{
    feature_importance, predict_proba, train_gbdt, train_gbdt_with_mode, CategoricalMode, ColumnEncoder, GbdtModel,
    ImportanceReport, TrainConfig, MODEL_FORMAT,
};
pub use matrix::DenseMatrix;
pub use tree::{fit_tree, SortedIndex, Tree, TreeParams};
