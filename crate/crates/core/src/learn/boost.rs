//! Stagewise logloss boosting over a dense matrix.

use serde::{Deserialize, Serialize};

use super::matrix::DenseMatrix;
use super::tree::{fit_tree, SortedIndex, Tree, TreeParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoostParams {
    pub tree_count: usize,
    pub learning_rate: f64,
    pub tree: TreeParams,
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Logloss of one example from its margin, computed without forming the
/// probability so it stays finite for large margins.
pub fn logloss_from_margin(y: f64, margin: f64) -> f64 {
    // log(1 + e^m) - y m
    let softplus = if margin > 0.0 {
        margin + (-margin).exp().ln_1p()
    } else {
        margin.exp().ln_1p()
    };
    softplus - y * margin
}

fn mean_loss(y: &[f64], margin: &[f64], w: &[f64]) -> f64 {
    let (mut s, mut tw) = (0.0, 0.0);
    for i in 0..y.len() {
        if w[i] > 0.0 {
            s += w[i] * logloss_from_margin(y[i], margin[i]);
            tw += w[i];
        }
    }
    if tw == 0.0 {
        0.0
    } else {
        s / tw
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Booster {
    pub base_score: f64,
    pub trees: Vec<Tree>,
}

/// Result of a boosting run: the model and the training loss before the
/// first tree and after every stage.
#[derive(Debug, Clone)]
pub struct BoostRun {
    pub booster: Booster,
    pub loss_history: Vec<f64>,
}

impl Booster {
    pub fn margin_row(&self, row: &[f64]) -> f64 {
        self.base_score + self.trees.iter().map(|t| t.predict_row(row)).sum::<f64>()
    }

    pub fn margin_matrix(&self, x: &DenseMatrix, i: usize) -> f64 {
        self.base_score + self.trees.iter().map(|t| t.predict_matrix(x, i)).sum::<f64>()
    }

    pub fn gains(&self, n_features: usize) -> Vec<f64> {
        let mut g = vec![0.0; n_features];
        for t in &self.trees {
            t.add_gains(&mut g);
        }
        g
    }

    /// Fits `tree_count` stages. Each stage fits a tree to the logloss
    /// gradients with Newton leaf values, shrinks it by the learning rate,
    /// and halves the shrinkage while the step would raise training loss.
    /// A stage that cannot lower the loss ends training.
    pub fn fit(x: &DenseMatrix, y: &[f64], weight: Option<&[f64]>, features: &[usize], params: &BoostParams) -> BoostRun {
        Self::fit_cycled(std::slice::from_ref(x), y, weight, features, params)
    }

    /// As [`Booster::fit`], with stage `t` trained on `xs[t % xs.len()]`.
    /// The matrices are alternative training encodings of the same rows.
    pub fn fit_cycled(
        xs: &[DenseMatrix],
        y: &[f64],
        weight: Option<&[f64]>,
        features: &[usize],
        params: &BoostParams,
    ) -> BoostRun {
        assert!(!xs.is_empty());
        let n = xs[0].n_rows();
        assert_eq!(y.len(), n);
        let ones;
        let w = match weight {
            Some(w) => w,
            None => {
                ones = vec![1.0; n];
                &ones
            }
        };
        let (mut pos, mut tot) = (0.0, 0.0);
        for i in 0..n {
            pos += w[i] * y[i];
            tot += w[i];
        }
        let mean = if tot > 0.0 { pos / tot } else { 0.5 };
        let mean = mean.clamp(1e-6, 1.0 - 1e-6);
        let base_score = (mean / (1.0 - mean)).ln();

        let indexes: Vec<SortedIndex> = xs.iter().map(SortedIndex::new).collect();
        let mut margin = vec![base_score; n];
        let mut loss = mean_loss(y, &margin, w);
        let mut history = vec![loss];
        let mut trees = Vec::with_capacity(params.tree_count);
        let mut grad = vec![0.0; n];
        let mut hess = vec![0.0; n];

        for stage in 0..params.tree_count {
            let x = &xs[stage % xs.len()];
            let index = &indexes[stage % xs.len()];
            for i in 0..n {
                let p = sigmoid(margin[i]);
                grad[i] = p - y[i];
                hess[i] = (p * (1.0 - p)).max(1e-16);
            }
            let tree = fit_tree(x, index, &grad, &hess, w, features, &params.tree);
            if tree.node_count() == 1 && tree.value[0] == 0.0 {
                break;
            }
            let raw: Vec<f64> = (0..n).map(|i| tree.predict_matrix(x, i)).collect();
            let mut step = params.learning_rate;
            let mut accepted = None;
            for _ in 0..30 {
                let trial: Vec<f64> = margin.iter().zip(&raw).map(|(m, r)| m + step * r).collect();
                let trial_loss = mean_loss(y, &trial, w);
                if trial_loss <= loss {
                    accepted = Some((trial, trial_loss));
                    break;
                }
                step /= 2.0;
            }
            let Some((trial, trial_loss)) = accepted else { break };
            let mut tree = tree;
            tree.scale(step);
            margin = trial;
            loss = trial_loss;
            history.push(loss);
            trees.push(tree);
        }
        BoostRun {
            booster: Booster { base_score, trees },
            loss_history: history,
        }
    }
}
