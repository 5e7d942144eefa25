mod common;

use common::*;
use fundcast::eval::{compute_metrics, f_beta, sweep_cutoffs, CANONICAL_CUTOFFS};
use fundcast::text::{analyze, count_syllables, flesch_reading_ease, sentiment_compound, tokenize, ReadabilityStats};

#[test]
fn cutoff_table_rows_from_confusion_counts() {
    for r in cutoff_table() {
        let (labels, probs) = confusion_vectors(r.tp, r.fp, r.tn, r.fn_, r.cutoff);
        let m = compute_metrics(&labels, &probs, r.cutoff, 0.1);
        assert!((m.precision - r.precision).abs() < 5e-5, "{} P {}", r.cutoff, m.precision);
        assert!((m.recall - r.recall).abs() < 5e-5, "{} R {}", r.cutoff, m.recall);
        assert!((m.f1 - r.f1).abs() <= 5e-4, "{} F1 {} vs {}", r.cutoff, m.f1, r.f1);
        assert!((m.f_beta - r.f_beta).abs() <= 5e-4, "{} F0.1 {} vs {}", r.cutoff, m.f_beta, r.f_beta);
    }
}

#[test]
fn f1_from_printed_precision_and_recall() {
    for r in cutoff_table() {
        assert!((f_beta(r.precision, r.recall, 1.0) - r.f1).abs() <= 5e-4, "{}", r.cutoff);
    }
}

#[test]
fn f_beta_examples() {
    assert!((f_beta(0.9505, 0.2621, 0.1) - 0.9265).abs() <= 5e-4);
    assert!((f_beta(0.7009, 0.7955, 1.0) - 0.7452).abs() <= 5e-4);
    assert_eq!(f_beta(1.0, 1.0, 0.1), 1.0);
    assert_eq!(f_beta(0.0, 0.0, 0.1), 0.0);
}

#[test]
fn single_score_vector_reproduces_whole_table() {
    let rows = cutoff_table();
    let (labels, probs) = table_score_vector(&rows);
    assert_eq!(labels.len(), 3004);
    let sweep = sweep_cutoffs(&labels, &probs, 0.1);
    assert_eq!(sweep.rows.len(), 12);
    for (m, c) in sweep.rows.iter().zip(CANONICAL_CUTOFFS) {
        let r = rows.iter().find(|r| (r.cutoff - c).abs() < 1e-9).unwrap();
        assert_eq!((m.true_positives, m.false_positives), (r.tp, r.fp), "cutoff {c}");
    }
    assert!((sweep.best_cutoff - 0.90).abs() < 1e-12);
}

#[test]
fn flesch_hand_cases() {
    for c in &FLESCH_CASES {
        let stats = ReadabilityStats {
            word_count: c.words,
            sentence_count: c.sentences,
            syllable_count: c.syllables,
            ..Default::default()
        };
        let got = flesch_reading_ease(&stats).unwrap();
        assert!((got - c.expected).abs() < 1e-9, "{}/{}/{}: {got}", c.words, c.sentences, c.syllables);
    }
}

#[test]
fn flesch_from_text() {
    // 6 one-syllable words in one sentence.
    let s = ReadabilityStats::from_tokens(&tokenize("The cat sat on the mat."));
    assert_eq!((s.word_count, s.sentence_count, s.syllable_count), (6, 1, 6));
    assert!((flesch_reading_ease(&s).unwrap() - 116.145).abs() < 1e-9);
    // hap-py / dogs / run / fast; two sentences.
    let s = ReadabilityStats::from_tokens(&tokenize("Happy dogs run. Cats nap fast."));
    assert_eq!((s.word_count, s.sentence_count, s.syllable_count), (6, 2, 7));
    let expected = 206.835 - 1.015 * 3.0 - 84.6 * 7.0 / 6.0;
    assert!((flesch_reading_ease(&s).unwrap() - expected).abs() < 1e-9);
}

#[test]
fn syllable_counts() {
    for (w, n) in [
        ("cat", 1),
        ("make", 1),
        ("the", 1),
        ("happy", 2),
        ("table", 2),
        ("beautiful", 3),
        ("education", 4),
        ("queue", 1),
    ] {
        assert_eq!(count_syllables(w).unwrap(), n, "{w}");
    }
    assert!(count_syllables("2024").is_err());
}

#[test]
fn sentiment_matches_reference_corpus() {
    let corpus = sentiment_corpus();
    assert_eq!(corpus.len(), 50);
    let mut worst: (f64, &str) = (0.0, "");
    for (text, expected) in &corpus {
        let got = sentiment_compound(text).compound;
        let err = (got - expected).abs();
        if err > worst.0 {
            worst = (err, text);
        }
    }
    assert!(worst.0 < 1e-4, "max error {} on {:?}", worst.0, worst.1);
}

#[test]
fn sentiment_single_word() {
    assert!((sentiment_compound("good").compound - 0.4404).abs() < 1e-4);
    assert_eq!(sentiment_compound("").compound, 0.0);
}

#[test]
fn text_metrics_are_finite() {
    let m = analyze("We raised a seed round! Thanks to our investors.");
    assert!(m.flesch.is_finite() && m.words == 9 && m.sentences == 2);
}
