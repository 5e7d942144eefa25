use std::collections::HashMap;
use std::sync::OnceLock;

use super::tokenize::{TokenKind, TokenizedText};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PosTag {
    Noun,
    Verb,
    Aux,
    Adj,
    Adv,
    Pron,
    Det,
    Adp,
    Num,
    Conj,
    Punct,
    Other,
}

impl PosTag {
    pub const ALL: [PosTag; 12] = [
        Self::Noun,
        Self::Verb,
        Self::Aux,
        Self::Adj,
        Self::Adv,
        Self::Pron,
        Self::Det,
        Self::Adp,
        Self::Num,
        Self::Conj,
        Self::Punct,
        Self::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Noun => "NOUN",
            Self::Verb => "VERB",
            Self::Aux => "AUX",
            Self::Adj => "ADJ",
            Self::Adv => "ADV",
            Self::Pron => "PRON",
            Self::Det => "DET",
            Self::Adp => "ADP",
            Self::Num => "NUM",
            Self::Conj => "CONJ",
            Self::Punct => "PUNCT",
            Self::Other => "OTHER",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.as_str() == s)
    }
}

const CLOSED_CLASS: &str = include_str!("../../data/pos_lexicon.tsv");
const PARTICIPLES: &str = include_str!("../../data/irregular_participles.txt");

fn closed_class() -> &'static HashMap<&'static str, PosTag> {
    static LEX: OnceLock<HashMap<&'static str, PosTag>> = OnceLock::new();
    LEX.get_or_init(|| {
        CLOSED_CLASS
            .lines()
            .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
            .filter_map(|l| {
                let (w, t) = l.split_once('\t')?;
                Some((w.trim(), PosTag::parse(t.trim()).expect("valid tag in pos lexicon")))
            })
            .collect()
    })
}

pub(crate) fn irregular_participles() -> &'static std::collections::HashSet<&'static str> {
    static SET: OnceLock<std::collections::HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| {
        PARTICIPLES
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect()
    })
}

const SUFFIX_RULES: [(&str, PosTag); 7] = [
    ("ly", PosTag::Adv),
    ("ing", PosTag::Verb),
    ("ed", PosTag::Verb),
    ("tion", PosTag::Noun),
    ("ness", PosTag::Noun),
    ("ous", PosTag::Adj),
    ("ful", PosTag::Adj),
];

/// Layered rules: token kind, closed-class lexicon, irregular participles,
/// suffixes, then NOUN.
pub fn tag_token(text: &str, kind: TokenKind) -> PosTag {
    match kind {
        TokenKind::Punct => return PosTag::Punct,
        TokenKind::Number => return PosTag::Num,
        TokenKind::Url | TokenKind::Mention | TokenKind::Hashtag | TokenKind::Symbol => return PosTag::Other,
        TokenKind::Word => {}
    }
    let lower = text.to_lowercase();
    if let Some(&tag) = closed_class().get(lower.as_str()) {
        return tag;
    }
    if irregular_participles().contains(lower.as_str()) {
        return PosTag::Verb;
    }
    let letters = lower.chars().count();
    for (suffix, tag) in SUFFIX_RULES {
        // Keep a stem of at least two letters so "red" or "fly" stay nouns.
        if lower.ends_with(suffix) && letters >= suffix.len() + 2 {
            return tag;
        }
    }
    PosTag::Noun
}

/// Fraction of tokens carrying each tag, indexed by [`PosTag::index`].
pub fn pos_distribution(tt: &TokenizedText) -> Result<[f64; 12]> {
    if tt.tokens.is_empty() {
        return Err(Error::EmptyInput("token list"));
    }
    let mut counts = [0usize; 12];
    for t in &tt.tokens {
        counts[t.tag.index()] += 1;
    }
    let n = tt.tokens.len() as f64;
    Ok(counts.map(|c| c as f64 / n))
}
