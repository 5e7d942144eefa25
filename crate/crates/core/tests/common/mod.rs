#![allow(dead_code)]

use std::sync::OnceLock;

use chrono::{Duration, NaiveDate};
use fundcast::features::{Dataset, FeatureCategory, FeatureDescriptor, FeatureKind, FeatureManifest, FeatureValue, FeatureVector};
use fundcast::ingest::{
    generate_synthetic_corpus, start_of_day, Corpus, FundingRound, FundingStage, GenConfig, ObservationPoint,
    PressReference, SearchItem, SearchResponse, SyntheticCorpus, TweetRecord,
};
use fundcast::topics::{synthetic_headlines, train_topic_classifier, TopicConfig, TopicModel};
use rand::Rng;

pub fn fixture(name: &str) -> String {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/").to_string() + name;
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn topics() -> &'static TopicModel {
    static T: OnceLock<TopicModel> = OnceLock::new();
    T.get_or_init(|| train_topic_classifier(&synthetic_headlines(30, 1), &TopicConfig::default()).unwrap())
}

/// A 300-company synthetic corpus shared by the slower property tests.
pub fn small_world() -> &'static SyntheticCorpus {
    static W: OnceLock<SyntheticCorpus> = OnceLock::new();
    W.get_or_init(|| {
        let cfg = GenConfig { companies: 300, ..GenConfig::default() };
        generate_synthetic_corpus(&cfg, 5).unwrap()
    })
}

/// Dataset of numeric columns named `x0, x1, ...`.
pub fn numeric_dataset(x: &[Vec<f64>], y: &[u8]) -> Dataset {
    let width = x.first().map_or(0, Vec::len);
    let manifest = FeatureManifest::new(
        (0..width)
            .map(|j| FeatureDescriptor {
                name: format!("x{j}"),
                category: FeatureCategory::General,
                kind: FeatureKind::Numeric,
            })
            .collect(),
    )
    .unwrap();
    let day = NaiveDate::from_ymd_opt(2020, 1, 1).unwrap();
    let rows = x
        .iter()
        .enumerate()
        .map(|(i, r)| FeatureVector {
            company_id: format!("r{i:05}"),
            prediction_date: day,
            values: r.iter().map(|&v| FeatureValue::Num(v)).collect(),
            missing: vec![false; width],
        })
        .collect();
    Dataset::new(manifest, rows, y.to_vec()).unwrap()
}

/// Bitwise row equality, so NaN compares equal to itself.
pub fn same_row(a: &FeatureVector, b: &FeatureVector) -> bool {
    a.company_id == b.company_id
        && a.prediction_date == b.prediction_date
        && a.missing == b.missing
        && a.values.len() == b.values.len()
        && a.values.iter().zip(&b.values).all(|(x, y)| match (x, y) {
            (FeatureValue::Num(x), FeatureValue::Num(y)) => x.to_bits() == y.to_bits(),
            _ => x == y,
        })
}

const WORDS: [&str; 12] = [
    "funding", "raises", "launch", "hiring", "great", "terrible", "partner", "award", "lawsuit", "series", "growth",
    "product",
];

fn text(rng: &mut impl Rng) -> String {
    (0..rng.gen_range(1..8)).map(|_| WORDS[rng.gen_range(0..WORDS.len())]).collect::<Vec<_>>().join(" ")
}

/// Copy of `corpus` with random rounds, press, tweets and searches for
/// `obs.company_id`, all dated on or after the prediction date.
pub fn inject_future(corpus: &Corpus, obs: &ObservationPoint, rng: &mut impl Rng) -> Corpus {
    let mut out = corpus.clone();
    let id = &obs.company_id;
    let pred = obs.prediction_date;
    let later = |rng: &mut dyn rand::RngCore| pred + Duration::days(rng.gen_range(0..2000));
    for _ in 0..rng.gen_range(0..4) {
        let announced_on = later(rng);
        out.rounds.entry(id.clone()).or_default().push(FundingRound {
            company_id: id.clone(),
            announced_on,
            amount_usd: Some(rng.gen_range(1e5..1e8)),
            stage: FundingStage::ALL[rng.gen_range(0..FundingStage::ALL.len())],
            investor_ids: vec![format!("inv{}", rng.gen_range(0..50))],
        });
    }
    for _ in 0..rng.gen_range(0..6) {
        let published_on = later(rng);
        out.press.entry(id.clone()).or_default().push(PressReference {
            company_id: id.clone(),
            title: text(rng),
            publisher: format!("Publisher {}", rng.gen_range(0..20)),
            published_on,
        });
    }
    for i in 0..rng.gen_range(0..10) {
        let created_at = start_of_day(pred) + Duration::seconds(rng.gen_range(0..200_000_000));
        out.tweets.entry(id.clone()).or_default().push(TweetRecord {
            tweet_id: format!("future{i}"),
            company_id: id.clone(),
            author_id: format!("u{}", rng.gen_range(0..30)),
            author_is_company: rng.gen_bool(0.3),
            reply_to_company: rng.gen_bool(0.2),
            created_at,
            text: text(rng) + " #launch @someone http://example.com",
            like_count: rng.gen_range(0..1000),
            retweet_count: rng.gen_range(0..100),
            reply_count: rng.gen_range(0..50),
            quote_count: rng.gen_range(0..10),
            language_hint: None,
        });
    }
    if rng.gen_bool(0.5) {
        let query_date = pred + Duration::days(rng.gen_range(1..2000));
        out.searches.entry(id.clone()).or_default().push(SearchResponse {
            company_id: id.clone(),
            query_date,
            total_results: rng.gen_range(0..10_000_000),
            items: vec![SearchItem {
                link: "https://news.example.com/a".into(),
                title: text(rng),
                snippet: text(rng),
            }],
        });
    }
    for v in out.rounds.values_mut() {
        v.sort_by_key(|r| r.announced_on);
    }
    for v in out.press.values_mut() {
        v.sort_by_key(|p| p.published_on);
    }
    for v in out.searches.values_mut() {
        v.sort_by_key(|s| s.query_date);
    }
    for v in out.tweets.values_mut() {
        v.sort_by(|a, b| (a.created_at, &a.tweet_id).cmp(&(b.created_at, &b.tweet_id)));
    }
    out
}

/// Label and score vectors with exactly the given confusion counts at `cutoff`.
pub fn confusion_vectors(tp: usize, fp: usize, tn: usize, fn_: usize, cutoff: f64) -> (Vec<u8>, Vec<f64>) {
    let hi = (cutoff + 1.0) / 2.0;
    let lo = cutoff / 2.0;
    let mut labels = Vec::new();
    let mut probs = Vec::new();
    for (n, y, p) in [(tp, 1, hi), (fp, 0, hi), (tn, 0, lo), (fn_, 1, lo)] {
        labels.extend(std::iter::repeat_n(y, n));
        probs.extend(std::iter::repeat_n(p, n));
    }
    (labels, probs)
}

pub struct CutoffRow {
    pub cutoff: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub f_beta: f64,
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

pub fn cutoff_table() -> Vec<CutoffRow> {
    let text = fixture("cutoff_table.csv");
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.records()
        .map(|rec| {
            let rec = rec.unwrap();
            let f = |i: usize| rec[i].parse::<f64>().unwrap();
            let u = |i: usize| rec[i].parse::<usize>().unwrap();
            CutoffRow {
                cutoff: f(0),
                precision: f(1),
                recall: f(2),
                f1: f(3),
                f_beta: f(4),
                tp: u(5),
                fp: u(6),
                tn: u(7),
                fn_: u(8),
            }
        })
        .collect()
}

/// One score vector whose confusion counts match every row of the table.
pub fn table_score_vector(rows: &[CutoffRow]) -> (Vec<u8>, Vec<f64>) {
    let mut rows: Vec<&CutoffRow> = rows.iter().collect();
    rows.sort_by(|a, b| b.cutoff.partial_cmp(&a.cutoff).unwrap());
    let total_pos = rows[0].tp + rows[0].fn_;
    let total_neg = rows[0].fp + rows[0].tn;
    let (mut labels, mut probs) = (Vec::new(), Vec::new());
    let (mut tp, mut fp) = (0, 0);
    for r in &rows {
        // New arrivals at this cutoff score exactly the cutoff.
        labels.extend(std::iter::repeat_n(1, r.tp - tp));
        probs.extend(std::iter::repeat_n(r.cutoff, r.tp - tp));
        labels.extend(std::iter::repeat_n(0, r.fp - fp));
        probs.extend(std::iter::repeat_n(r.cutoff, r.fp - fp));
        tp = r.tp;
        fp = r.fp;
    }
    labels.extend(std::iter::repeat_n(1, total_pos - tp));
    probs.extend(std::iter::repeat_n(0.1, total_pos - tp));
    labels.extend(std::iter::repeat_n(0, total_neg - fp));
    probs.extend(std::iter::repeat_n(0.1, total_neg - fp));
    (labels, probs)
}

pub struct FleschCase {
    pub words: usize,
    pub sentences: usize,
    pub syllables: usize,
    pub expected: f64,
}

/// Hand-evaluated: 206.835 - 1.015 * W/S - 84.6 * Y/W, exact in rationals.
pub const FLESCH_CASES: [FleschCase; 10] = [
    FleschCase { words: 6, sentences: 1, syllables: 6, expected: 116.145 },
    FleschCase { words: 100, sentences: 5, syllables: 150, expected: 59.635 },
    FleschCase { words: 12, sentences: 2, syllables: 18, expected: 73.845 },
    FleschCase { words: 20, sentences: 1, syllables: 40, expected: 17.335 },
    FleschCase { words: 1, sentences: 1, syllables: 1, expected: 121.22 },
    FleschCase { words: 30, sentences: 3, syllables: 60, expected: 27.485 },
    FleschCase { words: 15, sentences: 3, syllables: 15, expected: 117.16 },
    FleschCase { words: 50, sentences: 2, syllables: 100, expected: 12.26 },
    FleschCase { words: 8, sentences: 4, syllables: 16, expected: 35.605 },
    FleschCase { words: 250, sentences: 10, syllables: 400, expected: 46.1 },
];

pub fn sentiment_corpus() -> Vec<(String, f64)> {
    let text = fixture("sentiment_corpus.csv");
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.records()
        .map(|rec| {
            let rec = rec.unwrap();
            (rec[0].to_string(), rec[1].parse().unwrap())
        })
        .collect()
}
