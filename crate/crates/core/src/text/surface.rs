use std::collections::BTreeSet;
use std::sync::OnceLock;

use super::tokenize::{tokenize, TokenKind, TokenizedText};
use crate::ingest::TweetRecord;

const EMOJI_RANGES: &str = include_str!("../../data/emoji_ranges.txt");

fn emoji_ranges() -> &'static [(u32, u32)] {
    static R: OnceLock<Vec<(u32, u32)>> = OnceLock::new();
    R.get_or_init(|| {
        EMOJI_RANGES
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| {
                let (a, b) = l.split_once('-').expect("range line is LO-HI");
                (
                    u32::from_str_radix(a, 16).expect("hex code point"),
                    u32::from_str_radix(b, 16).expect("hex code point"),
                )
            })
            .collect()
    })
}

pub fn is_emoji(c: char) -> bool {
    let cp = c as u32;
    emoji_ranges().iter().any(|&(lo, hi)| (lo..=hi).contains(&cp))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SurfaceCounts {
    pub hashtags: usize,
    pub mentions: usize,
    pub links: usize,
    pub emojis: usize,
}

pub fn surface_counts(text: &str) -> SurfaceCounts {
    surface_counts_with(text, &tokenize(text))
}

pub(crate) fn surface_counts_with(text: &str, tt: &TokenizedText) -> SurfaceCounts {
    SurfaceCounts {
        hashtags: tt.tokens.iter().filter(|t| t.kind == TokenKind::Hashtag).count(),
        mentions: tt.tokens.iter().filter(|t| t.kind == TokenKind::Mention).count(),
        links: text.matches("http://").count() + text.matches("https://").count(),
        emojis: text.chars().filter(|&c| is_emoji(c)).count(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Script {
    Latin,
    Cyrillic,
    Cjk,
    Arabic,
    Other,
}

fn script_of(c: char) -> Script {
    match c as u32 {
        0x0041..=0x024F | 0x1E00..=0x1EFF => Script::Latin,
        0x0400..=0x052F => Script::Cyrillic,
        0x3040..=0x30FF | 0x3400..=0x4DBF | 0x4E00..=0x9FFF | 0xAC00..=0xD7AF => Script::Cjk,
        0x0600..=0x06FF | 0x0750..=0x077F => Script::Arabic,
        _ => Script::Other,
    }
}

/// Majority script over the letters of a text, `None` when it has none.
pub fn dominant_script(text: &str) -> Option<Script> {
    let mut counts = [0usize; 5];
    for c in text.chars().filter(|c| c.is_alphabetic()) {
        counts[script_of(c) as usize] += 1;
    }
    let (idx, &n) = counts.iter().enumerate().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))?;
    (n > 0).then(|| [Script::Latin, Script::Cyrillic, Script::Cjk, Script::Arabic, Script::Other][idx])
}

/// Distinct languages over a tweet set. Hinted tweets count by hint;
/// unhinted ones by the coarse script class of their text.
pub fn distinct_language_count<'a>(tweets: impl IntoIterator<Item = &'a TweetRecord>) -> usize {
    let mut hints = BTreeSet::new();
    let mut scripts = BTreeSet::new();
    for t in tweets {
        match t.language_hint.as_deref().filter(|h| !h.is_empty()) {
            Some(h) => {
                hints.insert(h.to_lowercase());
            }
            None => {
                if let Some(s) = dominant_script(&t.text) {
                    scripts.insert(s);
                }
            }
        }
    }
    hints.len() + scripts.len()
}

/// Word shape: upper → `X`, lower → `x`, digit → `d`, other characters kept,
/// runs of one class cut at four.
pub fn word_shape(word: &str) -> String {
    let mut out = String::new();
    let mut last = None;
    let mut run = 0;
    for c in word.chars() {
        let s = if c.is_uppercase() {
            'X'
        } else if c.is_lowercase() {
            'x'
        } else if c.is_numeric() {
            'd'
        } else {
            c
        };
        if Some(s) == last {
            run += 1;
        } else {
            run = 1;
            last = Some(s);
        }
        if run <= 4 {
            out.push(s);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::test_support::tweet;

    #[test]
    fn counts() {
        assert_eq!(
            surface_counts("#a #b @c http://x.co 🚀"),
            SurfaceCounts {
                hashtags: 2,
                mentions: 1,
                links: 1,
                emojis: 1
            }
        );
        assert_eq!(surface_counts("plain text"), SurfaceCounts::default());
        assert_eq!(surface_counts("##"), SurfaceCounts::default());
        assert_eq!(surface_counts("@ # https://a.io https://b.io").links, 2);
    }

    fn hinted(text: &str, hint: Option<&str>) -> TweetRecord {
        let mut t = tweet("c1", "t", "2020-01-01T00:00:00Z");
        t.text = text.into();
        t.language_hint = hint.map(str::to_string);
        t
    }

    #[test]
    fn languages() {
        let ts = [hinted("a", Some("en")), hinted("b", Some("en")), hinted("c", Some("fr"))];
        assert_eq!(distinct_language_count(&ts), 2);
        assert_eq!(distinct_language_count(&[]), 0);
        let ts = [hinted("hello there", None), hinted("привет мир", None), hinted("bonjour", None)];
        assert_eq!(distinct_language_count(&ts), 2);
        assert_eq!(distinct_language_count(&[hinted("123 !!", None)]), 0);
    }

    #[test]
    fn shapes() {
        assert_eq!(word_shape("Apple"), "Xxxxx");
        assert_eq!(word_shape("Seed-Round2024"), "Xxxx-Xxxxxdddd");
        assert_eq!(word_shape("NASA"), "XXXX");
        assert_eq!(word_shape("internationalization"), "xxxx");
    }
}
