use super::tokenize::TokenizedText;
use crate::error::{Error, Result};

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

/// Vowel-group syllable estimate. Each run of `a e i o u y` is one syllable;
/// a final consonant + `e` is silent unless the word ends in consonant +
/// `le`. Never less than one.
pub fn count_syllables(word: &str) -> Result<usize> {
    let letters: Vec<char> = word
        .chars()
        .filter(|c| c.is_alphabetic())
        .flat_map(char::to_lowercase)
        .collect();
    if letters.is_empty() {
        return Err(Error::NotAWord(word.to_string()));
    }
    let mut groups: usize = 0;
    let mut in_group = false;
    for &c in &letters {
        let v = is_vowel(c);
        if v && !in_group {
            groups += 1;
        }
        in_group = v;
    }
    let n = letters.len();
    if n >= 2 && letters[n - 1] == 'e' && !is_vowel(letters[n - 2]) {
        let consonant_le = n >= 3 && letters[n - 2] == 'l' && !is_vowel(letters[n - 3]);
        if !consonant_le {
            groups = groups.saturating_sub(1);
        }
    }
    Ok(groups.max(1))
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ReadabilityStats {
    pub word_count: usize,
    pub sentence_count: usize,
    pub syllable_count: usize,
    /// Words with more than 7 letters.
    pub long_word_count: usize,
    /// Words with more than 3 syllables.
    pub complex_word_count: usize,
}

impl ReadabilityStats {
    pub fn from_tokens(tt: &TokenizedText) -> Self {
        let mut s = ReadabilityStats {
            sentence_count: tt.word_sentence_count(),
            ..Default::default()
        };
        for w in tt.words() {
            let Ok(syl) = count_syllables(&w.text) else { continue };
            s.word_count += 1;
            s.syllable_count += syl;
            if w.text.chars().filter(|c| c.is_alphabetic()).count() > 7 {
                s.long_word_count += 1;
            }
            if syl > 3 {
                s.complex_word_count += 1;
            }
        }
        s
    }

    pub fn flesch_score(&self) -> Result<f64> {
        flesch_reading_ease(self)
    }
}

pub fn flesch_reading_ease(stats: &ReadabilityStats) -> Result<f64> {
    if stats.word_count == 0 {
        return Err(Error::Undefined("reading ease of text without words"));
    }
    if stats.sentence_count == 0 {
        return Err(Error::Undefined("reading ease of text without sentences"));
    }
    let words = stats.word_count as f64;
    Ok(206.835 - 1.015 * (words / stats.sentence_count as f64) - 84.6 * (stats.syllable_count as f64 / words))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::tokenize;

    #[test]
    fn syllables() {
        assert_eq!(count_syllables("cat").unwrap(), 1);
        assert_eq!(count_syllables("beautiful").unwrap(), 3);
        assert_eq!(count_syllables("table").unwrap(), 2);
        assert_eq!(count_syllables("make").unwrap(), 1);
        assert_eq!(count_syllables("the").unwrap(), 1);
        assert_eq!(count_syllables("free").unwrap(), 1);
        assert_eq!(count_syllables("Rhythm").unwrap(), 1);
        assert_eq!(count_syllables("investment").unwrap(), 3);
        assert!(matches!(count_syllables("123"), Err(Error::NotAWord(_))));
    }

    #[test]
    fn flesch_examples() {
        let s = |w, se, sy| ReadabilityStats {
            word_count: w,
            sentence_count: se,
            syllable_count: sy,
            ..Default::default()
        };
        assert!((flesch_reading_ease(&s(1, 1, 1)).unwrap() - 121.22).abs() < 1e-9);
        assert!((flesch_reading_ease(&s(6, 1, 6)).unwrap() - 116.145).abs() < 1e-9);
        assert!((flesch_reading_ease(&s(10, 1, 20)).unwrap() - 27.485).abs() < 1e-9);
        assert!(flesch_reading_ease(&s(0, 1, 0)).is_err());
        assert!(flesch_reading_ease(&s(3, 0, 3)).is_err());
    }

    #[test]
    fn stats_from_text() {
        let s = ReadabilityStats::from_tokens(&tokenize("Extraordinary investors funded us. Great!"));
        assert_eq!(s.word_count, 5);
        assert_eq!(s.sentence_count, 2);
        // extraordinary: e|ao|i|a|y = 5, investors: i|e|o = 3, funded 2, us 1, great 1
        assert_eq!(s.syllable_count, 12);
        assert_eq!(s.long_word_count, 2);
        assert_eq!(s.complex_word_count, 1);
    }
}
