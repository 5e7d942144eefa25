use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{HeadlineExample, TopicLabel};

/// Phrases that identify each topic in generated text, in label order.
pub const MARKERS: [&[&str]; 7] = [
    &["raises funding", "closes seed round", "secures investment", "announces series funding", "raises capital"],
    &["acquires startup", "agrees merger", "completes acquisition", "is acquired by", "merges with"],
    &["expands to europe", "opens new office", "enters asian market", "launches international expansion", "expands operations"],
    &["launches new product", "unveils platform", "releases app", "debuts product", "introduces new feature"],
    &["wins award", "named finalist", "receives prize", "honored with award", "takes top prize"],
    &["appoints new ceo", "hires chief officer", "names president", "ceo steps down", "promotes new cto"],
    &["shares thoughts", "talks about", "hosts webinar", "comments on trends", "joins panel"],
];

const SUBJECTS: &[&str] = &[
    "Acme", "Brightloop", "Corvid Labs", "Datafin", "Evergrid", "Fluxa", "Glimmer", "Helio", "Ironleaf", "Jadeware",
];

const TAILS: &[&str] = &[
    "this week",
    "in boston",
    "amid growth",
    "for customers",
    "today",
    "says report",
    "",
    "after strong year",
];

/// One headline for `label`, optionally about a given company name.
pub fn synthetic_headline(label: TopicLabel, subject: Option<&str>, rng: &mut impl Rng) -> String {
    let subject = subject.unwrap_or_else(|| SUBJECTS.choose(rng).unwrap());
    let marker = MARKERS[label.index()].choose(rng).unwrap();
    let tail = TAILS.choose(rng).unwrap();
    if tail.is_empty() {
        format!("{subject} {marker}")
    } else {
        format!("{subject} {marker} {tail}")
    }
}

/// `per_class` labeled headlines for every topic, shuffled.
pub fn synthetic_headlines(per_class: usize, seed: u64) -> Vec<HeadlineExample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(per_class * 7);
    for label in TopicLabel::ALL {
        for _ in 0..per_class {
            out.push(HeadlineExample {
                text: synthetic_headline(label, None, &mut rng),
                label,
            });
        }
    }
    out.shuffle(&mut rng);
    out
}
