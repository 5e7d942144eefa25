//! Classical comparison models. All of them see categoricals as integer
//! codes and the description as a token count, min-max scaled on the
//! training rows.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::boost::{sigmoid, BoostParams, Booster};
use super::gbdt::{encode_rows, fit_encoders, CategoricalMode, ColumnEncoder, TrainConfig};
use super::matrix::DenseMatrix;
use super::tree::{fit_tree, SortedIndex, Tree, TreeParams};
use crate::error::{Error, Result};
use crate::features::{check_row, Dataset, FeatureManifest, FeatureVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselineKind {
    LogisticRegression,
    NaiveBayes,
    Knn,
    DecisionTree,
    RandomForest,
    GradientBoostPlain,
}

impl BaselineKind {
    pub const ALL: [BaselineKind; 6] = [
        Self::LogisticRegression,
        Self::NaiveBayes,
        Self::Knn,
        Self::DecisionTree,
        Self::RandomForest,
        Self::GradientBoostPlain,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::LogisticRegression => "logistic_regression",
            Self::NaiveBayes => "naive_bayes",
            Self::Knn => "knn",
            Self::DecisionTree => "decision_tree",
            Self::RandomForest => "random_forest",
            Self::GradientBoostPlain => "gradient_boost_plain",
        }
    }
}

impl FromStr for BaselineKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown baseline kind `{s}`")))
    }
}

impl std::fmt::Display for BaselineKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaselineConfig {
    pub seed: u64,
    pub knn_k: usize,
    pub tree_count: usize,
    pub max_depth: usize,
    pub min_samples_leaf: usize,
    pub learning_rate: f64,
    pub lr_epochs: usize,
    pub lr_l2: f64,
}

impl Default for BaselineConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            knn_k: 5,
            tree_count: 100,
            max_depth: 6,
            min_samples_leaf: 5,
            learning_rate: 0.1,
            lr_epochs: 500,
            lr_l2: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
enum Fitted {
    Logistic { weights: Vec<f64>, bias: f64 },
    NaiveBayes { log_prior: [f64; 2], mean: [Vec<f64>; 2], var: [Vec<f64>; 2] },
    Knn { k: usize, points: DenseMatrix, labels: Vec<f64> },
    Trees { trees: Vec<Tree> },
    Boosted { booster: Booster },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineModel {
    pub kind: BaselineKind,
    manifest_hash: String,
    encoders: Vec<ColumnEncoder>,
    /// Training (min, max) of every encoded column.
    ranges: Vec<(f64, f64)>,
    fitted: Fitted,
}

fn column_ranges(x: &DenseMatrix) -> Vec<(f64, f64)> {
    (0..x.n_cols())
        .map(|j| {
            let c = x.column(j);
            let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            (lo, hi)
        })
        .collect()
}

fn scale_in_place(x: &mut DenseMatrix, ranges: &[(f64, f64)]) {
    for (j, &(lo, hi)) in ranges.iter().enumerate() {
        for v in x.column_mut(j) {
            *v = if hi > lo { ((*v - lo) / (hi - lo)).clamp(0.0, 1.0) } else { 0.0 };
        }
    }
}

pub fn train_baseline(kind: BaselineKind, train: &Dataset, config: &BaselineConfig) -> Result<BaselineModel> {
    let pos = train.positives();
    if pos == 0 || pos == train.len() {
        return Err(Error::DegenerateTraining(format!(
            "{} rows with {pos} positives; both classes are required",
            train.len()
        )));
    }
    let enc_config = TrainConfig {
        seed: config.seed,
        ..TrainConfig::default()
    };
    let (encoders, mut matrices) = fit_encoders(train, CategoricalMode::IndexCodes, &enc_config);
    let mut x = matrices.remove(0);
    let ranges = column_ranges(&x);
    scale_in_place(&mut x, &ranges);
    let y = train.labels_f64();
    let fitted = fit_matrix(kind, &x, &y, config);
    Ok(BaselineModel {
        kind,
        manifest_hash: train.manifest.hash(),
        encoders,
        ranges,
        fitted,
    })
}

/// Fits a baseline directly on an already-numeric matrix.
pub fn train_baseline_matrix(kind: BaselineKind, x: &DenseMatrix, y: &[f64], config: &BaselineConfig) -> MatrixBaseline {
    MatrixBaseline(fit_matrix(kind, x, y, config))
}

/// A baseline fitted with [`train_baseline_matrix`].
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixBaseline(Fitted);

impl MatrixBaseline {
    pub fn predict_proba(&self, x: &DenseMatrix) -> Vec<f64> {
        self.0.predict(x)
    }
}

fn fit_matrix(kind: BaselineKind, x: &DenseMatrix, y: &[f64], config: &BaselineConfig) -> Fitted {
    match kind {
        BaselineKind::LogisticRegression => fit_logistic(x, y, config),
        BaselineKind::NaiveBayes => fit_naive_bayes(x, y),
        BaselineKind::Knn => Fitted::Knn {
            k: config.knn_k.max(1),
            points: x.clone(),
            labels: y.to_vec(),
        },
        BaselineKind::DecisionTree => {
            let index = SortedIndex::new(x);
            let features: Vec<usize> = (0..x.n_cols()).collect();
            let w = vec![1.0; x.n_rows()];
            Fitted::Trees {
                trees: vec![fit_mean_tree(x, &index, y, &w, &features, config)],
            }
        }
        BaselineKind::RandomForest => fit_forest(x, y, config),
        BaselineKind::GradientBoostPlain => {
            let params = BoostParams {
                tree_count: config.tree_count,
                learning_rate: config.learning_rate,
                tree: TreeParams {
                    max_depth: config.max_depth,
                    min_samples_leaf: config.min_samples_leaf as f64,
                    ..TreeParams::default()
                },
            };
            let features: Vec<usize> = (0..x.n_cols()).collect();
            Fitted::Boosted {
                booster: Booster::fit(x, y, None, &features, &params).booster,
            }
        }
    }
}

/// Squared-loss tree: with unit hessians and no regularization the Newton
/// leaf is the weighted label mean.
fn fit_mean_tree(
    x: &DenseMatrix,
    index: &SortedIndex,
    y: &[f64],
    w: &[f64],
    features: &[usize],
    config: &BaselineConfig,
) -> Tree {
    let grad: Vec<f64> = y.iter().map(|v| -v).collect();
    let hess = vec![1.0; y.len()];
    let params = TreeParams {
        max_depth: config.max_depth,
        min_samples_leaf: config.min_samples_leaf as f64,
        l2_reg: 0.0,
        min_gain: 1e-12,
    };
    fit_tree(x, index, &grad, &hess, w, features, &params)
}

fn fit_forest(x: &DenseMatrix, y: &[f64], config: &BaselineConfig) -> Fitted {
    let n = x.n_rows();
    let p = x.n_cols();
    let index = SortedIndex::new(x);
    let per_tree = ((p as f64).sqrt().ceil() as usize).clamp(1, p.max(1));
    let trees = (0..config.tree_count.max(1))
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ (t as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let mut w = vec![0.0; n];
            for _ in 0..n {
                w[rng.gen_range(0..n)] += 1.0;
            }
            let features = rand::seq::index::sample(&mut rng, p, per_tree).into_vec();
            let mut features = features;
            features.sort_unstable();
            fit_mean_tree(x, &index, y, &w, &features, config)
        })
        .collect();
    Fitted::Trees { trees }
}

fn fit_logistic(x: &DenseMatrix, y: &[f64], config: &BaselineConfig) -> Fitted {
    let (n, p) = (x.n_rows(), x.n_cols());
    let mut weights = vec![0.0; p];
    let mut bias = 0.0;
    let rate = 1.0;
    let mut margin = vec![0.0; n];
    for _ in 0..config.lr_epochs {
        let resid: Vec<f64> = (0..n).map(|i| sigmoid(margin[i]) - y[i]).collect();
        let gb = resid.iter().sum::<f64>() / n as f64;
        let gw: Vec<f64> = (0..p)
            .into_par_iter()
            .map(|j| {
                let c = x.column(j);
                c.iter().zip(&resid).map(|(a, r)| a * r).sum::<f64>() / n as f64
            })
            .collect();
        bias -= rate * gb;
        for j in 0..p {
            weights[j] -= rate * (gw[j] + config.lr_l2 * weights[j]);
        }
        for (i, m) in margin.iter_mut().enumerate() {
            *m = bias + (0..p).map(|j| weights[j] * x.get(i, j)).sum::<f64>();
        }
    }
    Fitted::Logistic { weights, bias }
}

fn fit_naive_bayes(x: &DenseMatrix, y: &[f64]) -> Fitted {
    let p = x.n_cols();
    let mut count = [0.0f64; 2];
    let mut mean = [vec![0.0; p], vec![0.0; p]];
    let mut var = [vec![0.0; p], vec![0.0; p]];
    for &v in y {
        count[(v > 0.5) as usize] += 1.0;
    }
    for j in 0..p {
        let c = x.column(j);
        for (i, &v) in c.iter().enumerate() {
            mean[(y[i] > 0.5) as usize][j] += v;
        }
        for k in 0..2 {
            mean[k][j] /= count[k];
        }
        for (i, &v) in c.iter().enumerate() {
            let k = (y[i] > 0.5) as usize;
            var[k][j] += (v - mean[k][j]).powi(2);
        }
        for k in 0..2 {
            var[k][j] /= count[k];
        }
    }
    // variance floor relative to the largest feature variance
    let max_var = var.iter().flatten().copied().fold(0.0f64, f64::max);
    let eps = 1e-9 * max_var.max(1e-12);
    for v in var.iter_mut().flatten() {
        *v += eps;
    }
    let total = count[0] + count[1];
    Fitted::NaiveBayes {
        log_prior: [(count[0] / total).ln(), (count[1] / total).ln()],
        mean,
        var,
    }
}

impl Fitted {
    fn predict(&self, x: &DenseMatrix) -> Vec<f64> {
        let n = x.n_rows();
        match self {
            Fitted::Logistic { weights, bias } => (0..n)
                .map(|i| sigmoid(bias + weights.iter().enumerate().map(|(j, w)| w * x.get(i, j)).sum::<f64>()))
                .collect(),
            Fitted::NaiveBayes { log_prior, mean, var } => (0..n)
                .map(|i| {
                    let mut ll = *log_prior;
                    for (k, l) in ll.iter_mut().enumerate() {
                        for j in 0..x.n_cols() {
                            let d = x.get(i, j) - mean[k][j];
                            *l -= 0.5 * ((2.0 * std::f64::consts::PI * var[k][j]).ln() + d * d / var[k][j]);
                        }
                    }
                    sigmoid(ll[1] - ll[0])
                })
                .collect(),
            Fitted::Knn { k, points, labels } => (0..n)
                .into_par_iter()
                .map(|i| {
                    let row = x.row(i);
                    let mut d: Vec<(f64, usize)> = (0..points.n_rows())
                        .map(|r| {
                            let s = (0..points.n_cols()).map(|j| (points.get(r, j) - row[j]).powi(2)).sum::<f64>();
                            (s, r)
                        })
                        .collect();
                    let k = (*k).min(d.len());
                    d.select_nth_unstable_by(k - 1, |a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                    d[..k].iter().map(|&(_, r)| labels[r]).sum::<f64>() / k as f64
                })
                .collect(),
            Fitted::Trees { trees } => (0..n)
                .map(|i| {
                    let s: f64 = trees.iter().map(|t| t.predict_matrix(x, i)).sum();
                    (s / trees.len() as f64).clamp(0.0, 1.0)
                })
                .collect(),
            Fitted::Boosted { booster } => (0..n).map(|i| sigmoid(booster.margin_matrix(x, i))).collect(),
        }
    }
}

impl BaselineModel {
    pub fn predict_proba(&self, manifest: &FeatureManifest, rows: &[FeatureVector]) -> Result<Vec<f64>> {
        if manifest.hash() != self.manifest_hash {
            return Err(Error::Schema("rows do not match the model's feature manifest".into()));
        }
        for r in rows {
            check_row(manifest, r)?;
        }
        let mut x = encode_rows(&self.encoders, rows);
        scale_in_place(&mut x, &self.ranges);
        Ok(self.fitted.predict(&x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_distr_free::normal;

    // Box-Muller keeps the tests free of an extra distribution crate.
    mod rand_distr_free {
        use rand::Rng;
        pub fn normal(rng: &mut impl Rng) -> f64 {
            let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
            let u2: f64 = rng.gen();
            (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
        }
    }

    fn blobs(n: usize, sep: f64, seed: u64) -> (DenseMatrix, Vec<f64>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows = Vec::new();
        let mut y = Vec::new();
        for i in 0..n {
            let c = (i % 2) as f64;
            rows.push(vec![c * sep + normal(&mut rng), c * sep + normal(&mut rng)]);
            y.push(c);
        }
        (DenseMatrix::from_rows(&rows), y)
    }

    fn accuracy(p: &[f64], y: &[f64]) -> f64 {
        p.iter().zip(y).filter(|(p, y)| (**p >= 0.5) == (**y > 0.5)).count() as f64 / y.len() as f64
    }

    #[test]
    fn naive_bayes_separates_blobs() {
        let (x, y) = blobs(400, 4.0, 7);
        let (xt, yt) = blobs(400, 4.0, 8);
        let m = train_baseline_matrix(BaselineKind::NaiveBayes, &x, &y, &BaselineConfig::default());
        assert!(accuracy(&m.predict_proba(&xt), &yt) > 0.9);
    }

    #[test]
    fn one_nearest_neighbour_memorizes() {
        let (x, y) = blobs(200, 1.0, 3);
        let cfg = BaselineConfig {
            knn_k: 1,
            ..BaselineConfig::default()
        };
        let m = train_baseline_matrix(BaselineKind::Knn, &x, &y, &cfg);
        assert_eq!(accuracy(&m.predict_proba(&x), &y), 1.0);
    }

    #[test]
    fn trees_and_forest_fit_blobs() {
        let (x, y) = blobs(400, 4.0, 11);
        let (xt, yt) = blobs(400, 4.0, 12);
        for kind in [BaselineKind::DecisionTree, BaselineKind::RandomForest, BaselineKind::GradientBoostPlain] {
            let m = train_baseline_matrix(kind, &x, &y, &BaselineConfig::default());
            let p = m.predict_proba(&xt);
            assert!(p.iter().all(|v| (0.0..=1.0).contains(v)));
            assert!(accuracy(&p, &yt) > 0.9, "{kind}");
        }
    }

    #[test]
    fn unknown_kind_is_config_error() {
        assert!(matches!("svm".parse::<BaselineKind>(), Err(Error::Config(_))));
        for k in BaselineKind::ALL {
            assert_eq!(k.as_str().parse::<BaselineKind>().unwrap(), k);
        }
    }
}
