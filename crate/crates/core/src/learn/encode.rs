//! Column encoders turning categorical and text features into numbers.
//!
//! The ordered target statistic of a row uses only the labels of rows that
//! come before it in a random permutation:
//!
//! ```text
//! enc(i) = (sum of earlier same-category labels + w * prior) / (earlier count + w)
//! ```
//!
//! so a row's own label, and every label after it, never leak into its
//! encoding. Rows scored after training use statistics over the whole
//! training set.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

/// Lowercased unigram token set of a text.
pub fn text_tokens(text: &str) -> BTreeSet<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct LabelStat {
    pub sum: f64,
    pub count: f64,
}

impl LabelStat {
    fn add(&mut self, y: f64) {
        self.sum += y;
        self.count += 1.0;
    }

    pub fn smoothed(self, prior: f64, prior_weight: f64) -> f64 {
        (self.sum + prior_weight * prior) / (self.count + prior_weight)
    }
}

/// Ordered target statistics for a categorical column. `permutation[p]` is
/// the row visited at position `p`.
pub fn ordered_target_encode(
    column: &[&str],
    labels: &[f64],
    permutation: &[usize],
    prior_weight: f64,
    prior: f64,
) -> Vec<f64> {
    assert_eq!(column.len(), labels.len());
    assert_eq!(column.len(), permutation.len());
    let mut history: BTreeMap<&str, LabelStat> = BTreeMap::new();
    let mut out = vec![0.0; column.len()];
    for &row in permutation {
        let stat = history.entry(column[row]).or_default();
        out[row] = stat.smoothed(prior, prior_weight);
        stat.add(labels[row]);
    }
    out
}

/// Per-token ordered statistics; a text scores the mean over its distinct
/// tokens, or the prior when it has none.
pub fn encode_text_feature(
    texts: &[&str],
    labels: &[f64],
    permutation: &[usize],
    prior_weight: f64,
    prior: f64,
) -> Vec<f64> {
    assert_eq!(texts.len(), labels.len());
    assert_eq!(texts.len(), permutation.len());
    let mut history: BTreeMap<String, LabelStat> = BTreeMap::new();
    let mut out = vec![0.0; texts.len()];
    for &row in permutation {
        let tokens = text_tokens(texts[row]);
        out[row] = if tokens.is_empty() {
            prior
        } else {
            tokens
                .iter()
                .map(|t| history.get(t).copied().unwrap_or_default().smoothed(prior, prior_weight))
                .sum::<f64>()
                / tokens.len() as f64
        };
        for t in tokens {
            history.entry(t).or_default().add(labels[row]);
        }
    }
    out
}

/// Full-training statistics applied to rows scored after training.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetTable {
    pub prior: f64,
    pub prior_weight: f64,
    pub stats: BTreeMap<String, LabelStat>,
}

impl TargetTable {
    pub fn fit_categories(column: &[&str], labels: &[f64], prior_weight: f64, prior: f64) -> Self {
        let mut stats: BTreeMap<String, LabelStat> = BTreeMap::new();
        for (c, &y) in column.iter().zip(labels) {
            stats.entry(c.to_string()).or_default().add(y);
        }
        Self {
            prior,
            prior_weight,
            stats,
        }
    }

    pub fn fit_tokens(texts: &[&str], labels: &[f64], prior_weight: f64, prior: f64) -> Self {
        let mut stats: BTreeMap<String, LabelStat> = BTreeMap::new();
        for (t, &y) in texts.iter().zip(labels) {
            for tok in text_tokens(t) {
                stats.entry(tok).or_default().add(y);
            }
        }
        Self {
            prior,
            prior_weight,
            stats,
        }
    }

    pub fn category(&self, value: &str) -> f64 {
        self.stats
            .get(value)
            .copied()
            .unwrap_or_default()
            .smoothed(self.prior, self.prior_weight)
    }

    pub fn text(&self, value: &str) -> f64 {
        let tokens = text_tokens(value);
        if tokens.is_empty() {
            return self.prior;
        }
        tokens
            .iter()
            .map(|t| self.category(t))
            .sum::<f64>()
            / tokens.len() as f64
    }
}

/// Integer codes for categories in first-seen training order; unseen
/// values map to the next free code.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IndexCodes {
    pub codes: BTreeMap<String, usize>,
}

impl IndexCodes {
    pub fn fit(column: &[&str]) -> Self {
        let mut codes = BTreeMap::new();
        for &c in column {
            let next = codes.len();
            codes.entry(c.to_string()).or_insert(next);
        }
        Self { codes }
    }

    pub fn code(&self, value: &str) -> f64 {
        self.codes.get(value).copied().unwrap_or(self.codes.len()) as f64
    }
}
