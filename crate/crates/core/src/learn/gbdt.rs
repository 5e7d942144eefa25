use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::boost::{sigmoid, BoostParams, Booster};
use super::encode::{encode_text_feature, ordered_target_encode, IndexCodes, TargetTable};
use super::matrix::DenseMatrix;
use super::tree::TreeParams;
use crate::error::{Error, Result};
use crate::features::{check_row, Dataset, FeatureKind, FeatureManifest, FeatureVector, ScalerParams};

pub const MODEL_FORMAT: &str = "fundcast-gbdt/1";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub tree_count: usize,
    pub max_depth: usize,
    pub learning_rate: f64,
    pub min_samples_leaf: usize,
    pub seed: u64,
    /// Permutations used for ordered statistics; boosting stages cycle
    /// through them.
    pub permutation_count: usize,
    pub prior_weight: f64,
    pub l2_reg: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            tree_count: 500,
            max_depth: 6,
            learning_rate: 0.1,
            min_samples_leaf: 5,
            seed: 0,
            permutation_count: 1,
            prior_weight: 1.0,
            l2_reg: 1.0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tree_count < 1 {
            return Err(Error::Config("tree_count must be at least 1".into()));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate <= 1.0) {
            return Err(Error::Config(format!("learning_rate {} outside (0, 1]", self.learning_rate)));
        }
        if self.max_depth < 1 {
            return Err(Error::Config("max_depth must be at least 1".into()));
        }
        if self.permutation_count < 1 {
            return Err(Error::Config("permutation_count must be at least 1".into()));
        }
        if self.prior_weight.is_nan() || self.prior_weight <= 0.0 || self.l2_reg.is_nan() || self.l2_reg < 0.0 {
            return Err(Error::Config("prior_weight must be > 0 and l2_reg >= 0".into()));
        }
        Ok(())
    }

    pub(crate) fn boost_params(&self) -> BoostParams {
        BoostParams {
            tree_count: self.tree_count,
            learning_rate: self.learning_rate,
            tree: TreeParams {
                max_depth: self.max_depth,
                min_samples_leaf: self.min_samples_leaf as f64,
                l2_reg: self.l2_reg,
                min_gain: 1e-12,
            },
        }
    }
}

/// How categorical columns become numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CategoricalMode {
    /// Ordered target statistics for categories and description tokens.
    OrderedStatistics,
    /// Integer category codes; text columns become token counts.
    IndexCodes,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum ColumnEncoder {
    Numeric,
    TargetCategory { table: TargetTable },
    TargetText { table: TargetTable },
    IndexCategory { codes: IndexCodes },
    TokenCount,
}

impl ColumnEncoder {
    fn encode(&self, value: &crate::features::FeatureValue) -> f64 {
        match self {
            Self::Numeric => value.as_num().unwrap_or(0.0),
            Self::TargetCategory { table } => table.category(value.as_str().unwrap_or("")),
            Self::TargetText { table } => table.text(value.as_str().unwrap_or("")),
            Self::IndexCategory { codes } => codes.code(value.as_str().unwrap_or("")),
            Self::TokenCount => super::encode::text_tokens(value.as_str().unwrap_or("")).len() as f64,
        }
    }
}

/// Fits column encoders on a training set and returns them together with
/// the training matrices (one per permutation for ordered statistics).
pub(crate) fn fit_encoders(
    data: &Dataset,
    mode: CategoricalMode,
    config: &TrainConfig,
) -> (Vec<ColumnEncoder>, Vec<DenseMatrix>) {
    let n = data.len();
    let labels = data.labels_f64();
    let prior = if n == 0 { 0.5 } else { labels.iter().sum::<f64>() / n as f64 };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let permutations: Vec<Vec<usize>> = match mode {
        CategoricalMode::OrderedStatistics => (0..config.permutation_count)
            .map(|_| {
                let mut p: Vec<usize> = (0..n).collect();
                p.shuffle(&mut rng);
                p
            })
            .collect(),
        CategoricalMode::IndexCodes => vec![(0..n).collect()],
    };
    let mut encoders = Vec::with_capacity(data.manifest.len());
    let mut columns: Vec<Vec<Vec<f64>>> = vec![Vec::new(); permutations.len()];
    for (j, d) in data.manifest.features().iter().enumerate() {
        let strs: Vec<&str> = data.rows.iter().map(|r| r.values[j].as_str().unwrap_or("")).collect();
        match (d.kind, mode) {
            (FeatureKind::Numeric, _) => {
                let col: Vec<f64> = data.rows.iter().map(|r| r.num(j)).collect();
                for c in &mut columns {
                    c.push(col.clone());
                }
                encoders.push(ColumnEncoder::Numeric);
            }
            (FeatureKind::Categorical, CategoricalMode::OrderedStatistics) => {
                for (c, p) in columns.iter_mut().zip(&permutations) {
                    c.push(ordered_target_encode(&strs, &labels, p, config.prior_weight, prior));
                }
                encoders.push(ColumnEncoder::TargetCategory {
                    table: TargetTable::fit_categories(&strs, &labels, config.prior_weight, prior),
                });
            }
            (FeatureKind::Text, CategoricalMode::OrderedStatistics) => {
                for (c, p) in columns.iter_mut().zip(&permutations) {
                    c.push(encode_text_feature(&strs, &labels, p, config.prior_weight, prior));
                }
                encoders.push(ColumnEncoder::TargetText {
                    table: TargetTable::fit_tokens(&strs, &labels, config.prior_weight, prior),
                });
            }
            (FeatureKind::Categorical, CategoricalMode::IndexCodes) => {
                let enc = ColumnEncoder::IndexCategory {
                    codes: IndexCodes::fit(&strs),
                };
                let col: Vec<f64> = data.rows.iter().map(|r| enc.encode(&r.values[j])).collect();
                columns[0].push(col);
                encoders.push(enc);
            }
            (FeatureKind::Text, CategoricalMode::IndexCodes) => {
                let enc = ColumnEncoder::TokenCount;
                let col: Vec<f64> = data.rows.iter().map(|r| enc.encode(&r.values[j])).collect();
                columns[0].push(col);
                encoders.push(enc);
            }
        }
    }
    let matrices = columns.into_iter().map(|c| DenseMatrix::from_columns(n, c)).collect();
    (encoders, matrices)
}

pub(crate) fn encode_rows(encoders: &[ColumnEncoder], rows: &[FeatureVector]) -> DenseMatrix {
    let columns = encoders
        .iter()
        .enumerate()
        .map(|(j, e)| rows.iter().map(|r| e.encode(&r.values[j])).collect())
        .collect();
    DenseMatrix::from_columns(rows.len(), columns)
}

/// Boosted trees over encoded features, with everything needed to score
/// raw feature rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GbdtModel {
    pub format: String,
    pub manifest_hash: String,
    pub manifest: FeatureManifest,
    pub config: TrainConfig,
    pub mode: CategoricalMode,
    /// Applied to numeric columns before encoding when present.
    pub scaler: Option<ScalerParams>,
    pub encoders: Vec<ColumnEncoder>,
    pub booster: Booster,
    /// Training logloss before the first stage and after each stage.
    pub loss_history: Vec<f64>,
}

fn check_both_classes(data: &Dataset) -> Result<()> {
    let pos = data.positives();
    if pos == 0 || pos == data.len() {
        return Err(Error::DegenerateTraining(format!(
            "{} rows with {pos} positives; both classes are required",
            data.len()
        )));
    }
    Ok(())
}

pub fn train_gbdt(train: &Dataset, config: &TrainConfig) -> Result<GbdtModel> {
    train_gbdt_with_mode(train, config, CategoricalMode::OrderedStatistics)
}

pub fn train_gbdt_with_mode(train: &Dataset, config: &TrainConfig, mode: CategoricalMode) -> Result<GbdtModel> {
    config.validate()?;
    check_both_classes(train)?;
    let (encoders, matrices) = fit_encoders(train, mode, config);
    let labels = train.labels_f64();
    let features: Vec<usize> = (0..train.manifest.len()).collect();
    let run = Booster::fit_cycled(&matrices, &labels, None, &features, &config.boost_params());
    Ok(GbdtModel {
        format: MODEL_FORMAT.to_string(),
        manifest_hash: train.manifest.hash(),
        manifest: train.manifest.clone(),
        config: *config,
        mode,
        scaler: None,
        encoders,
        booster: run.booster,
        loss_history: run.loss_history,
    })
}

impl GbdtModel {
    pub fn with_scaler(mut self, scaler: ScalerParams) -> Self {
        self.scaler = Some(scaler);
        self
    }

    fn check_manifest(&self, manifest: &FeatureManifest) -> Result<()> {
        let hash = manifest.hash();
        if hash != self.manifest_hash {
            return Err(Error::Schema(format!(
                "model expects manifest {}, rows use {}",
                &self.manifest_hash[..12.min(self.manifest_hash.len())],
                &hash[..12]
            )));
        }
        Ok(())
    }

    pub fn predict_proba(&self, manifest: &FeatureManifest, rows: &[FeatureVector]) -> Result<Vec<f64>> {
        self.check_manifest(manifest)?;
        for r in rows {
            check_row(manifest, r)?;
        }
        let scaled;
        let rows = match &self.scaler {
            Some(s) => {
                scaled = s.apply(rows)?;
                &scaled[..]
            }
            None => rows,
        };
        let x = encode_rows(&self.encoders, rows);
        Ok((0..x.n_rows())
            .map(|i| sigmoid(self.booster.margin_matrix(&x, i)).clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON))
            .collect())
    }

    pub fn feature_importance(&self) -> ImportanceReport {
        feature_importance(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model serializes")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()).map_err(|e| Error::io(path.display().to_string(), e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        let model: GbdtModel =
            serde_json::from_str(&text).map_err(|e| Error::parse(path, e.line() as u64, e.to_string()))?;
        if model.format != MODEL_FORMAT {
            return Err(Error::Schema(format!("unsupported model format `{}`", model.format)));
        }
        if model.manifest.hash() != model.manifest_hash {
            return Err(Error::Schema("model manifest does not match its recorded hash".into()));
        }
        Ok(model)
    }
}

pub fn predict_proba(model: &GbdtModel, manifest: &FeatureManifest, rows: &[FeatureVector]) -> Result<Vec<f64>> {
    model.predict_proba(manifest, rows)
}

/// Normalized total split gain per feature, highest first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImportanceReport {
    pub entries: Vec<(String, f64)>,
}

impl ImportanceReport {
    pub fn top(&self, k: usize) -> Vec<&str> {
        self.entries.iter().take(k).map(|(n, _)| n.as_str()).collect()
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }
}

pub fn feature_importance(model: &GbdtModel) -> ImportanceReport {
    let gains = model.booster.gains(model.manifest.len());
    let total: f64 = gains.iter().sum();
    let mut entries: Vec<(String, f64)> = model
        .manifest
        .names()
        .zip(&gains)
        .map(|(n, &g)| (n.to_string(), if total > 0.0 { g / total } else { 0.0 }))
        .collect();
    entries.sort_by(|a, b| b.1.total_cmp(&a.1));
    ImportanceReport { entries }
}
