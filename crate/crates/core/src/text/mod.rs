//! Per-text linguistic metrics: tokens, readability, part of speech, passive
//! voice, sentiment and surface counts. Everything here is a pure function
//! of its input.

mod passive;
mod pos;
mod readability;
mod sentiment;
mod surface;
mod tokenize;

use std::collections::BTreeSet;

pub use passive::passive_voice_count;
pub use pos::{pos_distribution, tag_token, PosTag};
pub use readability::{count_syllables, flesch_reading_ease, ReadabilityStats};
pub use sentiment::{sentiment_compound, SentimentScore};
pub use surface::{
    distinct_language_count, dominant_script, is_emoji, surface_counts, word_shape, Script,
    SurfaceCounts,
};
pub use tokenize::{tokenize, Token, TokenKind, TokenizedText};

/// Scores a batch of texts with a model-backed sentiment scorer. The
/// default applies the lexicon scorer.
pub trait TextScorer: Send + Sync {
    fn score(&self, text: &str) -> f64;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LexiconScorer;

impl TextScorer for LexiconScorer {
    fn score(&self, text: &str) -> f64 {
        sentiment_compound(text).compound
    }
}

/// Everything measured on one tweet.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TextMetrics {
    pub characters: usize,
    pub tokens: usize,
    pub words: usize,
    pub sentences: usize,
    pub punctuation: usize,
    pub shapes: usize,
    pub surface: SurfaceCounts,
    pub passive: usize,
    pub readability: ReadabilityStats,
    /// Flesch reading ease, 0 when undefined.
    pub flesch: f64,
    pub sentiment: f64,
    /// Zero for a text without tokens.
    pub pos: [f64; 12],
}

impl TextMetrics {
    pub fn syllables_per_word(&self) -> f64 {
        ratio(self.readability.syllable_count, self.readability.word_count)
    }

    pub fn long_word_fraction(&self) -> f64 {
        ratio(self.readability.long_word_count, self.readability.word_count)
    }

    pub fn complex_word_fraction(&self) -> f64 {
        ratio(self.readability.complex_word_count, self.readability.word_count)
    }
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

pub fn analyze(text: &str) -> TextMetrics {
    let tt = tokenize(text);
    let readability = ReadabilityStats::from_tokens(&tt);
    let shapes: BTreeSet<String> = tt
        .tokens
        .iter()
        .filter(|t| matches!(t.kind, TokenKind::Word | TokenKind::Number))
        .map(|t| word_shape(&t.text))
        .collect();
    TextMetrics {
        characters: text.chars().count(),
        tokens: tt.tokens.len(),
        words: readability.word_count,
        sentences: tt.sentences.len(),
        punctuation: tt.tokens.iter().filter(|t| t.kind == TokenKind::Punct).count(),
        shapes: shapes.len(),
        surface: surface::surface_counts_with(text, &tt),
        passive: passive_voice_count(&tt),
        flesch: readability.flesch_score().unwrap_or(0.0),
        readability,
        sentiment: sentiment_compound(text).compound,
        pos: pos_distribution(&tt).unwrap_or([0.0; 12]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analyze_sample() {
        let m = analyze("We were funded by great investors! 🚀 #seed");
        assert_eq!(m.sentences, 2);
        assert_eq!(m.passive, 1);
        assert_eq!(m.surface.hashtags, 1);
        assert_eq!(m.surface.emojis, 1);
        assert!(m.sentiment > 0.0);
        assert!((m.pos.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn analyze_empty() {
        let m = analyze("");
        assert_eq!(m, TextMetrics::default());
    }
}
