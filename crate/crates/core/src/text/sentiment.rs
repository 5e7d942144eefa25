//! Lexicon and rule based sentiment (VADER). Follows the reference
//! implementation rule for rule, including its quirks, so compound scores
//! agree with it to rounding.

use std::collections::HashMap;
use std::sync::OnceLock;

const LEXICON: &str = include_str!("../../data/sentiment_lexicon.tsv");
const EMOJI: &str = include_str!("../../data/emoji_descriptions.tsv");

const B_INCR: f64 = 0.293;
const B_DECR: f64 = -0.293;
const C_INCR: f64 = 0.733;
const N_SCALAR: f64 = -0.74;
const NORMALIZE_ALPHA: f64 = 15.0;

const NEGATE: &[&str] = &[
    "aint", "arent", "cannot", "cant", "couldnt", "darent", "didnt", "doesnt", "ain't", "aren't",
    "can't", "couldn't", "daren't", "didn't", "doesn't", "dont", "hadnt", "hasnt", "havent", "isnt",
    "mightnt", "mustnt", "neither", "don't", "hadn't", "hasn't", "haven't", "isn't", "mightn't",
    "mustn't", "neednt", "needn't", "never", "none", "nope", "nor", "not", "nothing", "nowhere",
    "oughtnt", "shant", "shouldnt", "uhuh", "wasnt", "werent", "oughtn't", "shan't", "shouldn't",
    "uh-uh", "wasn't", "weren't", "without", "wont", "wouldnt", "won't", "wouldn't", "rarely",
    "seldom", "despite",
];

const BOOSTERS_UP: &[&str] = &[
    "absolutely", "amazingly", "awfully", "completely", "considerable", "considerably", "decidedly",
    "deeply", "effing", "enormous", "enormously", "entirely", "especially", "exceptional",
    "exceptionally", "extreme", "extremely", "fabulously", "flipping", "flippin", "frackin",
    "fracking", "fricking", "frickin", "frigging", "friggin", "fully", "fuckin", "fucking", "fuggin",
    "fugging", "greatly", "hella", "highly", "hugely", "incredible", "incredibly", "intensely",
    "major", "majorly", "more", "most", "particularly", "purely", "quite", "really", "remarkably",
    "so", "substantially", "thoroughly", "total", "totally", "tremendous", "tremendously", "uber",
    "unbelievably", "unusually", "utter", "utterly", "very",
];

const BOOSTERS_DOWN: &[&str] = &[
    "almost", "barely", "hardly", "just enough", "kind of", "kinda", "kindof", "kind-of", "less",
    "little", "marginal", "marginally", "occasional", "occasionally", "partly", "scarce", "scarcely",
    "slight", "slightly", "somewhat", "sort of", "sorta", "sortof", "sort-of",
];

const SPECIAL_CASES: [(&str, f64); 9] = [
    ("the shit", 3.0),
    ("the bomb", 3.0),
    ("bad ass", 1.5),
    ("badass", 1.5),
    ("bus stop", 0.0),
    ("yeah right", -2.0),
    ("kiss of death", -1.5),
    ("to die for", 3.0),
    ("beating heart", 3.5),
];

struct Tables {
    lexicon: HashMap<&'static str, f64>,
    emoji: HashMap<char, &'static str>,
    boosters: HashMap<&'static str, f64>,
    special: HashMap<&'static str, f64>,
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| {
        let lexicon = LEXICON
            .lines()
            .filter_map(|l| {
                let (w, v) = l.split_once('\t')?;
                Some((w, v.trim().parse().expect("numeric valence")))
            })
            .collect();
        let emoji = EMOJI
            .lines()
            .filter_map(|l| {
                let (e, d) = l.split_once('\t')?;
                let mut chars = e.chars();
                let c = chars.next()?;
                chars.next().is_none().then_some((c, d))
            })
            .collect();
        let mut boosters = HashMap::new();
        for &w in BOOSTERS_UP {
            boosters.insert(w, B_INCR);
        }
        for &w in BOOSTERS_DOWN {
            boosters.insert(w, B_DECR);
        }
        Tables {
            lexicon,
            emoji,
            boosters,
            special: SPECIAL_CASES.into_iter().collect(),
        }
    })
}

/// Compound polarity in `[-1, 1]`.
#[derive(Debug, Clone, Copy, Default, PartialEq, PartialOrd)]
pub struct SentimentScore {
    pub compound: f64,
}

/// Python's `str.isupper`: at least one cased character and no lowercase.
fn is_upper(s: &str) -> bool {
    s.chars().any(char::is_uppercase) && !s.chars().any(char::is_lowercase)
}

fn strip_punct_if_word(token: &str) -> &str {
    let stripped = token.trim_matches(|c: char| c.is_ascii_punctuation());
    if stripped.chars().count() <= 2 {
        token
    } else {
        stripped
    }
}

fn negated(word: &str) -> bool {
    NEGATE.contains(&word) || word.contains("n't")
}

fn scalar_inc_dec(word: &str, lower: &str, valence: f64, cap_diff: bool) -> f64 {
    let t = tables();
    let Some(&b) = t.boosters.get(lower) else {
        return 0.0;
    };
    let mut scalar = if valence < 0.0 { -b } else { b };
    if is_upper(word) && cap_diff {
        if valence > 0.0 {
            scalar += C_INCR;
        } else {
            scalar -= C_INCR;
        }
    }
    scalar
}

fn replace_emoji(text: &str) -> String {
    let t = tables();
    let mut out = String::with_capacity(text.len());
    let mut prev_space = true;
    for c in text.chars() {
        if let Some(desc) = t.emoji.get(&c) {
            if !prev_space {
                out.push(' ');
            }
            out.push_str(desc);
            prev_space = false;
        } else {
            out.push(c);
            prev_space = c == ' ';
        }
    }
    out.trim().to_string()
}

struct Words<'a> {
    raw: Vec<&'a str>,
    lower: Vec<String>,
    cap_diff: bool,
}

impl Words<'_> {
    fn in_lexicon(&self, i: usize) -> bool {
        tables().lexicon.contains_key(self.lower[i].as_str())
    }
}

fn negation_check(mut valence: f64, w: &[String], start_i: usize, i: usize) -> f64 {
    match start_i {
        0 => {
            if negated(&w[i - 1]) {
                valence *= N_SCALAR;
            }
        }
        1 => {
            if w[i - 2] == "never" && (w[i - 1] == "so" || w[i - 1] == "this") {
                valence *= 1.25;
            } else if w[i - 2] == "without" && w[i - 1] == "doubt" {
            } else if negated(&w[i - 2]) {
                valence *= N_SCALAR;
            }
        }
        _ => {
            if (w[i - 3] == "never" && (w[i - 2] == "so" || w[i - 2] == "this"))
                || (w[i - 1] == "so" || w[i - 1] == "this")
            {
                valence *= 1.25;
            } else if w[i - 3] == "without" && (w[i - 2] == "doubt" || w[i - 1] == "doubt") {
            } else if negated(&w[i - 3]) {
                valence *= N_SCALAR;
            }
        }
    }
    valence
}

fn special_idioms_check(mut valence: f64, w: &[String], i: usize) -> f64 {
    let t = tables();
    let onezero = format!("{} {}", w[i - 1], w[i]);
    let twoonezero = format!("{} {} {}", w[i - 2], w[i - 1], w[i]);
    let twoone = format!("{} {}", w[i - 2], w[i - 1]);
    let threetwoone = format!("{} {} {}", w[i - 3], w[i - 2], w[i - 1]);
    let threetwo = format!("{} {}", w[i - 3], w[i - 2]);
    for seq in [&onezero, &twoonezero, &twoone, &threetwoone, &threetwo] {
        if let Some(&v) = t.special.get(seq.as_str()) {
            valence = v;
            break;
        }
    }
    if w.len() - 1 > i {
        let zeroone = format!("{} {}", w[i], w[i + 1]);
        if let Some(&v) = t.special.get(zeroone.as_str()) {
            valence = v;
        }
    }
    if w.len() - 1 > i + 1 {
        let zeroonetwo = format!("{} {} {}", w[i], w[i + 1], w[i + 2]);
        if let Some(&v) = t.special.get(zeroonetwo.as_str()) {
            valence = v;
        }
    }
    for ngram in [&threetwoone, &threetwo, &twoone] {
        if let Some(&b) = t.boosters.get(ngram.as_str()) {
            valence += b;
        }
    }
    valence
}

fn least_check(mut valence: f64, words: &Words<'_>, i: usize) -> f64 {
    let w = &words.lower;
    if i > 1 && !words.in_lexicon(i - 1) && w[i - 1] == "least" {
        if w[i - 2] != "at" && w[i - 2] != "very" {
            valence *= N_SCALAR;
        }
    } else if i > 0 && !words.in_lexicon(i - 1) && w[i - 1] == "least" {
        valence *= N_SCALAR;
    }
    valence
}

fn sentiment_valence(words: &Words<'_>, i: usize) -> f64 {
    let t = tables();
    let item = words.raw[i];
    let w = &words.lower;
    let Some(&base) = t.lexicon.get(w[i].as_str()) else {
        return 0.0;
    };
    let mut valence = base;
    if w[i] == "no" && i != w.len() - 1 && words.in_lexicon(i + 1) {
        valence = 0.0;
    }
    if (i > 0 && w[i - 1] == "no")
        || (i > 1 && w[i - 2] == "no")
        || (i > 2 && w[i - 3] == "no" && (w[i - 1] == "or" || w[i - 1] == "nor"))
    {
        valence = base * N_SCALAR;
    }
    if is_upper(item) && words.cap_diff {
        if valence > 0.0 {
            valence += C_INCR;
        } else {
            valence -= C_INCR;
        }
    }
    for start_i in 0..3 {
        if i > start_i && !words.in_lexicon(i - (start_i + 1)) {
            let mut s = scalar_inc_dec(words.raw[i - (start_i + 1)], &w[i - (start_i + 1)], valence, words.cap_diff);
            if start_i == 1 && s != 0.0 {
                s *= 0.95;
            }
            if start_i == 2 && s != 0.0 {
                s *= 0.9;
            }
            valence += s;
            valence = negation_check(valence, w, start_i, i);
            if start_i == 2 {
                valence = special_idioms_check(valence, w, i);
            }
        }
    }
    least_check(valence, words, i)
}

/// Contrastive "but": halves sentiment before it and boosts it by half
/// after. Reproduces the reference's lookup of each value by first equal
/// element.
fn but_check(lower: &[String], sentiments: &mut [f64]) {
    let Some(bi) = lower.iter().position(|w| w == "but") else {
        return;
    };
    for k in 0..sentiments.len() {
        let s = sentiments[k];
        let si = sentiments.iter().position(|&x| x == s).expect("value present");
        if si < bi {
            sentiments[si] = s * 0.5;
        } else if si > bi {
            sentiments[si] = s * 1.5;
        }
    }
}

fn punctuation_emphasis(text: &str) -> f64 {
    let ep = text.matches('!').count().min(4) as f64 * 0.292;
    let qm_count = text.matches('?').count();
    let qm = match qm_count {
        0 | 1 => 0.0,
        2 | 3 => qm_count as f64 * 0.18,
        _ => 0.96,
    };
    ep + qm
}

fn normalize(score: f64) -> f64 {
    (score / (score * score + NORMALIZE_ALPHA).sqrt()).clamp(-1.0, 1.0)
}

pub fn sentiment_compound(text: &str) -> SentimentScore {
    let t = tables();
    let text = replace_emoji(text);
    let raw: Vec<&str> = text.split_whitespace().map(strip_punct_if_word).collect();
    let lower: Vec<String> = raw.iter().map(|w| w.to_lowercase()).collect();
    let upper_count = raw.iter().filter(|w| is_upper(w)).count();
    let cap_diff = upper_count > 0 && upper_count < raw.len();
    let words = Words { raw, lower, cap_diff };

    let mut sentiments = Vec::with_capacity(words.raw.len());
    for i in 0..words.raw.len() {
        let lw = &words.lower[i];
        if t.boosters.contains_key(lw.as_str())
            || (i + 1 < words.raw.len() && lw == "kind" && words.lower[i + 1] == "of")
        {
            sentiments.push(0.0);
            continue;
        }
        sentiments.push(sentiment_valence(&words, i));
    }
    but_check(&words.lower, &mut sentiments);

    if sentiments.is_empty() {
        return SentimentScore::default();
    }
    let mut sum: f64 = sentiments.iter().sum();
    let emphasis = punctuation_emphasis(&text);
    if sum > 0.0 {
        sum += emphasis;
    } else if sum < 0.0 {
        sum -= emphasis;
    }
    SentimentScore {
        compound: normalize(sum),
    }
}
