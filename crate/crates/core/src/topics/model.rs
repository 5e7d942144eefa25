use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{HeadlineExample, TopicLabel};
use crate::error::{Error, Result};
use crate::learn::{sigmoid, BoostParams, Booster, DenseMatrix, TreeParams};

pub const MIN_TRAINING_EXAMPLES: usize = 50;
const MIN_DOCUMENT_FREQUENCY: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TopicConfig {
    pub tree_count: usize,
    pub max_depth: usize,
    pub learning_rate: f64,
    pub seed: u64,
}

impl Default for TopicConfig {
    fn default() -> Self {
        Self {
            tree_count: 40,
            max_depth: 3,
            learning_rate: 0.3,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicModel {
    pub vocabulary: BTreeMap<String, usize>,
    /// One-vs-rest scorer per label; `None` for labels absent from training.
    pub classifiers: Vec<Option<Booster>>,
    pub priors: [f64; 7],
}

/// Lowercased unigrams and adjacent-pair bigrams.
fn terms(text: &str) -> Vec<String> {
    let words: Vec<String> = text
        .split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
        .collect();
    let mut out = words.clone();
    out.extend(words.windows(2).map(|w| format!("{} {}", w[0], w[1])));
    out
}

impl TopicModel {
    fn vectorize(&self, text: &str) -> Option<Vec<f64>> {
        let mut row = vec![0.0; self.vocabulary.len()];
        let mut any = false;
        for t in terms(text) {
            if let Some(&j) = self.vocabulary.get(&t) {
                row[j] += 1.0;
                any = true;
            }
        }
        any.then_some(row)
    }

    fn prior_label(&self) -> TopicLabel {
        argmax(&self.priors)
    }

    pub fn classify(&self, text: &str) -> TopicLabel {
        let Some(row) = self.vectorize(text) else {
            return self.prior_label();
        };
        let scores: Vec<f64> = self
            .classifiers
            .iter()
            .map(|c| c.as_ref().map_or(f64::NEG_INFINITY, |b| sigmoid(b.margin_row(&row))))
            .collect();
        argmax(&scores)
    }
}

/// First maximum in label order.
fn argmax(scores: &[f64]) -> TopicLabel {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = i;
        }
    }
    TopicLabel::ALL[best]
}

pub fn train_topic_classifier(examples: &[HeadlineExample], config: &TopicConfig) -> Result<TopicModel> {
    if examples.len() < MIN_TRAINING_EXAMPLES {
        return Err(Error::DegenerateTraining(format!(
            "{} headlines; at least {MIN_TRAINING_EXAMPLES} are required",
            examples.len()
        )));
    }
    let labels: BTreeSet<TopicLabel> = examples.iter().map(|e| e.label).collect();
    if labels.len() < 2 {
        return Err(Error::DegenerateTraining("headlines carry a single label".into()));
    }
    let docs: Vec<Vec<String>> = examples.iter().map(|e| terms(&e.text)).collect();
    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    for d in &docs {
        for t in d.iter().map(String::as_str).collect::<BTreeSet<_>>() {
            *df.entry(t).or_default() += 1;
        }
    }
    let vocabulary: BTreeMap<String, usize> = df
        .into_iter()
        .filter(|&(_, c)| c >= MIN_DOCUMENT_FREQUENCY)
        .enumerate()
        .map(|(i, (t, _))| (t.to_string(), i))
        .collect();
    let mut columns = vec![vec![0.0; docs.len()]; vocabulary.len()];
    for (i, d) in docs.iter().enumerate() {
        for t in d {
            if let Some(&j) = vocabulary.get(t) {
                columns[j][i] += 1.0;
            }
        }
    }
    let x = DenseMatrix::from_columns(docs.len(), columns);
    let features: Vec<usize> = (0..vocabulary.len()).collect();
    let params = BoostParams {
        tree_count: config.tree_count,
        learning_rate: config.learning_rate,
        tree: TreeParams {
            max_depth: config.max_depth,
            min_samples_leaf: 1.0,
            ..TreeParams::default()
        },
    };
    let mut priors = [0.0; 7];
    for e in examples {
        priors[e.label.index()] += 1.0 / examples.len() as f64;
    }
    let classifiers = TopicLabel::ALL
        .iter()
        .map(|&label| {
            labels.contains(&label).then(|| {
                let y: Vec<f64> = examples.iter().map(|e| (e.label == label) as u8 as f64).collect();
                Booster::fit(&x, &y, None, &features, &params).booster
            })
        })
        .collect();
    Ok(TopicModel {
        vocabulary,
        classifiers,
        priors,
    })
}

pub fn classify_headline(model: &TopicModel, text: &str) -> TopicLabel {
    model.classify(text)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub label: TopicLabel,
    pub support: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicMetrics {
    /// Labels with no held-out examples are left out.
    pub per_class: Vec<ClassMetrics>,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
    pub accuracy: f64,
}

pub fn evaluate_topic_classifier(model: &TopicModel, heldout: &[HeadlineExample]) -> Result<TopicMetrics> {
    let predicted: Vec<TopicLabel> = heldout.iter().map(|e| model.classify(&e.text)).collect();
    score_predictions(heldout, &predicted)
}

pub(crate) fn score_predictions(heldout: &[HeadlineExample], predicted: &[TopicLabel]) -> Result<TopicMetrics> {
    if heldout.is_empty() {
        return Err(Error::EmptyInput("held-out headlines"));
    }
    let mut per_class = Vec::new();
    for label in TopicLabel::ALL {
        let support = heldout.iter().filter(|e| e.label == label).count();
        if support == 0 {
            continue;
        }
        let tp = heldout.iter().zip(predicted).filter(|(e, &p)| e.label == label && p == label).count();
        let pp = predicted.iter().filter(|&&p| p == label).count();
        let precision = if pp == 0 { 0.0 } else { tp as f64 / pp as f64 };
        let recall = tp as f64 / support as f64;
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        per_class.push(ClassMetrics {
            label,
            support,
            precision,
            recall,
            f1,
        });
    }
    let k = per_class.len() as f64;
    let correct = heldout.iter().zip(predicted).filter(|(e, &p)| e.label == p).count();
    Ok(TopicMetrics {
        macro_precision: per_class.iter().map(|c| c.precision).sum::<f64>() / k,
        macro_recall: per_class.iter().map(|c| c.recall).sum::<f64>() / k,
        macro_f1: per_class.iter().map(|c| c.f1).sum::<f64>() / k,
        accuracy: correct as f64 / heldout.len() as f64,
        per_class,
    })
}

#[cfg(test)]
mod tests {
    use super::super::synthetic_headlines;
    use super::*;

    fn split(seed: u64) -> (Vec<HeadlineExample>, Vec<HeadlineExample>) {
        let all = synthetic_headlines(70, seed);
        let (mut train, mut test) = (Vec::new(), Vec::new());
        for (i, e) in all.into_iter().enumerate() {
            if i % 5 == 0 {
                test.push(e);
            } else {
                train.push(e);
            }
        }
        (train, test)
    }

    #[test]
    fn separable_corpus_is_learned() {
        let (train, test) = split(7);
        let model = train_topic_classifier(&train, &TopicConfig::default()).unwrap();
        let m = evaluate_topic_classifier(&model, &test).unwrap();
        assert!(m.accuracy >= 0.95, "accuracy {}", m.accuracy);
    }

    #[test]
    fn retraining_is_deterministic() {
        let (train, _) = split(3);
        let a = train_topic_classifier(&train, &TopicConfig::default()).unwrap();
        let b = train_topic_classifier(&train, &TopicConfig::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn too_few_or_single_label_rejected() {
        let (train, _) = split(1);
        assert!(matches!(
            train_topic_classifier(&train[..10], &TopicConfig::default()),
            Err(Error::DegenerateTraining(_))
        ));
        let single: Vec<_> = train.iter().filter(|e| e.label == TopicLabel::Award).cloned().collect();
        let single: Vec<_> = single.iter().cycle().take(60).cloned().collect();
        assert!(matches!(
            train_topic_classifier(&single, &TopicConfig::default()),
            Err(Error::DegenerateTraining(_))
        ));
    }

    #[test]
    fn empty_text_gets_prior_argmax() {
        let (mut train, _) = split(5);
        train.extend(synthetic_headlines(20, 9).into_iter().filter(|e| e.label == TopicLabel::Award));
        let model = train_topic_classifier(&train, &TopicConfig::default()).unwrap();
        assert_eq!(classify_headline(&model, ""), TopicLabel::Award);
        assert_eq!(classify_headline(&model, "zzqx"), TopicLabel::Award);
    }

    #[test]
    fn all_other_predictor_macro_recall() {
        let heldout: Vec<HeadlineExample> = TopicLabel::ALL
            .iter()
            .flat_map(|&label| (0..3).map(move |i| HeadlineExample { text: format!("h{i}"), label }))
            .collect();
        let predicted = vec![TopicLabel::Other; heldout.len()];
        let m = score_predictions(&heldout, &predicted).unwrap();
        assert!((m.macro_recall - 1.0 / 7.0).abs() < 1e-12);
        let perfect: Vec<_> = heldout.iter().map(|e| e.label).collect();
        let m = score_predictions(&heldout, &perfect).unwrap();
        assert_eq!((m.macro_precision, m.macro_recall, m.macro_f1), (1.0, 1.0, 1.0));
    }

    #[test]
    fn empty_class_is_skipped() {
        let heldout = vec![HeadlineExample {
            text: "x".into(),
            label: TopicLabel::Award,
        }];
        let m = score_predictions(&heldout, &[TopicLabel::Award]).unwrap();
        assert_eq!(m.per_class.len(), 1);
        assert_eq!(m.per_class[0].label, TopicLabel::Award);
    }
}
