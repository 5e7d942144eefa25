use serde::{Deserialize, Serialize};

/// Cutoffs 0.50, 0.55, …, 0.95, then 0.97 and 0.99.
pub const CANONICAL_CUTOFFS: [f64; 12] = [0.50, 0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95, 0.97, 0.99];
pub const DEFAULT_BETA: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub cutoff: f64,
    pub beta: f64,
    pub true_positives: usize,
    pub false_positives: usize,
    pub true_negatives: usize,
    pub false_negatives: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub f_beta: f64,
}

impl MetricsReport {
    pub fn predicted_positives(&self) -> usize {
        self.true_positives + self.false_positives
    }

    pub fn accuracy(&self) -> f64 {
        let n = self.true_positives + self.false_positives + self.true_negatives + self.false_negatives;
        if n == 0 {
            0.0
        } else {
            (self.true_positives + self.true_negatives) as f64 / n as f64
        }
    }
}

/// `(1 + β²)·P·R / (β²·P + R)`, and 0 when both are 0.
pub fn f_beta(precision: f64, recall: f64, beta: f64) -> f64 {
    let b2 = beta * beta;
    let denom = b2 * precision + recall;
    if denom == 0.0 {
        0.0
    } else {
        (1.0 + b2) * precision * recall / denom
    }
}

/// Scores at one cutoff; a probability at or above it predicts positive.
///
/// # Panics
/// When `labels` and `probabilities` differ in length.
pub fn compute_metrics(labels: &[u8], probabilities: &[f64], cutoff: f64, beta: f64) -> MetricsReport {
    assert_eq!(labels.len(), probabilities.len(), "labels and probabilities differ in length");
    let (mut tp, mut fp, mut tn, mut fn_) = (0, 0, 0, 0);
    for (&y, &p) in labels.iter().zip(probabilities) {
        match (p >= cutoff, y == 1) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, false) => tn += 1,
            (false, true) => fn_ += 1,
        }
    }
    let precision = if tp + fp == 0 { 0.0 } else { tp as f64 / (tp + fp) as f64 };
    let recall = if tp + fn_ == 0 { 0.0 } else { tp as f64 / (tp + fn_) as f64 };
    MetricsReport {
        cutoff,
        beta,
        true_positives: tp,
        false_positives: fp,
        true_negatives: tn,
        false_negatives: fn_,
        precision,
        recall,
        f1: f_beta(precision, recall, 1.0),
        f_beta: f_beta(precision, recall, beta),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutoffSweep {
    pub beta: f64,
    pub rows: Vec<MetricsReport>,
    /// Cutoff with the highest F-beta; the lowest such cutoff on ties.
    pub best_cutoff: f64,
}

impl CutoffSweep {
    pub fn best(&self) -> &MetricsReport {
        self.rows.iter().find(|r| r.cutoff == self.best_cutoff).expect("best cutoff is a row")
    }
}

pub fn sweep_cutoffs(labels: &[u8], probabilities: &[f64], beta: f64) -> CutoffSweep {
    sweep_at(labels, probabilities, beta, &CANONICAL_CUTOFFS)
}

pub fn sweep_at(labels: &[u8], probabilities: &[f64], beta: f64, cutoffs: &[f64]) -> CutoffSweep {
    let rows: Vec<MetricsReport> = cutoffs.iter().map(|&c| compute_metrics(labels, probabilities, c, beta)).collect();
    let mut best = 0;
    for (i, r) in rows.iter().enumerate() {
        if r.f_beta > rows[best].f_beta {
            best = i;
        }
    }
    CutoffSweep {
        beta,
        best_cutoff: rows.get(best).map_or(f64::NAN, |r| r.cutoff),
        rows,
    }
}

/// Area under the ROC curve with tied scores sharing their average rank.
/// `None` when either class is absent.
pub fn roc_auc(labels: &[u8], scores: &[f64]) -> Option<f64> {
    assert_eq!(labels.len(), scores.len());
    let pos = labels.iter().filter(|&&y| y == 1).count();
    let neg = labels.len() - pos;
    if pos == 0 || neg == 0 {
        return None;
    }
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && scores[idx[j + 1]] == scores[idx[i]] {
            j += 1;
        }
        let avg_rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            if labels[k] == 1 {
                rank_sum += avg_rank;
            }
        }
        i = j + 1;
    }
    let u = rank_sum - (pos * (pos + 1)) as f64 / 2.0;
    Some(u / (pos as f64 * neg as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_beta_examples() {
        assert!((f_beta(0.9505, 0.2621, 0.1) - 0.9265).abs() < 5e-4);
        assert!((f_beta(0.7009, 0.7955, 1.0) - 0.7452).abs() < 5e-4);
        assert_eq!(f_beta(0.0, 0.0, 0.1), 0.0);
        assert_eq!(f_beta(1.0, 1.0, 0.1), 1.0);
    }

    #[test]
    fn cutoff_is_inclusive() {
        let m = compute_metrics(&[1, 0, 1], &[0.5, 0.49, 0.7], 0.5, 1.0);
        assert_eq!((m.true_positives, m.false_positives, m.true_negatives), (2, 0, 1));
        assert_eq!((m.precision, m.recall, m.f1), (1.0, 1.0, 1.0));
    }

    #[test]
    fn constant_scores() {
        let labels = [1, 0, 1, 0, 1];
        let sweep = sweep_cutoffs(&labels, &[0.6; 5], 0.1);
        assert_eq!(sweep.rows.len(), 12);
        let at = |c: f64| sweep.rows.iter().find(|r| r.cutoff == c).unwrap();
        assert_eq!(at(0.5).precision, at(0.6).precision);
        assert_eq!(at(0.5).recall, at(0.6).recall);
        assert!(sweep.rows.iter().filter(|r| r.cutoff > 0.6).all(|r| r.recall == 0.0));
        assert_eq!(sweep.best_cutoff, 0.5);
    }

    #[test]
    fn auc_cases() {
        assert_eq!(roc_auc(&[0, 0, 1, 1], &[0.1, 0.2, 0.3, 0.4]), Some(1.0));
        assert_eq!(roc_auc(&[1, 1, 0, 0], &[0.1, 0.2, 0.3, 0.4]), Some(0.0));
        assert_eq!(roc_auc(&[0, 1], &[0.5, 0.5]), Some(0.5));
        assert_eq!(roc_auc(&[1, 1], &[0.5, 0.5]), None);
    }
}
