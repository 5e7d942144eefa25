use super::pos::{irregular_participles, PosTag};
use super::tokenize::{TokenKind, TokenizedText};

const BE_FORMS: [&str; 8] = ["am", "is", "are", "was", "were", "be", "been", "being"];

/// Tokens after a form of "be" searched for a participle, adverbs excluded.
const PARTICIPLE_REACH: usize = 2;

fn is_be(word: &str) -> bool {
    BE_FORMS.contains(&word)
}

fn is_participle(word: &str) -> bool {
    (word.len() >= 4 && word.ends_with("ed")) || irregular_participles().contains(word)
}

/// Counts "be" + past participle constructions, e.g. "was raised",
/// "is being quickly developed". Adverbs between the two are skipped and do
/// not count toward the reach; punctuation ends the search.
pub fn passive_voice_count(tt: &TokenizedText) -> usize {
    let lower: Vec<String> = tt.tokens.iter().map(|t| t.text.to_lowercase()).collect();
    let mut count = 0;
    let mut i = 0;
    while i < tt.tokens.len() {
        if tt.tokens[i].kind != TokenKind::Word || !is_be(&lower[i]) {
            i += 1;
            continue;
        }
        let mut seen = 0;
        let mut found = None;
        for j in i + 1..tt.tokens.len() {
            let t = &tt.tokens[j];
            if t.kind != TokenKind::Word {
                break;
            }
            if t.tag == PosTag::Adv {
                continue;
            }
            if is_participle(&lower[j]) && !is_be(&lower[j]) {
                found = Some(j);
                break;
            }
            seen += 1;
            if seen == PARTICIPLE_REACH {
                break;
            }
        }
        match found {
            Some(j) => {
                count += 1;
                i = j + 1;
            }
            None => i += 1,
        }
    }
    count
}
