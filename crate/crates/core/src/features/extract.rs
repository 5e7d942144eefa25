//! Per-family extractors and the row assembler.

use std::collections::BTreeSet;
use std::sync::Arc;

use chrono::{Datelike, Duration, NaiveDate};
use rayon::prelude::*;

use super::manifest::FeatureManifest;
use super::matrix::{FeatureValue, FeatureVector};
use super::rank::{own_link_count, publisher_key, rank_publishers, rank_sites, registrable_domain, PublisherRank};
use crate::error::{Error, Result};
use crate::ingest::{
    apply_time_window, start_of_day, CompanyRecord, Corpus, FundingRound, ObservationPoint, PressReference,
    SearchResponse, TweetRecord, WindowedView,
};
use crate::text::{analyze, distinct_language_count, LexiconScorer, PosTag, TextMetrics, TextScorer};
use crate::topics::{TopicLabel, TopicModel};

/// Stage string used when no round precedes the prediction date.
pub const NO_STAGE: &str = "none";
/// Category used for absent country, state, industry or topic values.
pub const UNKNOWN: &str = "unknown";
/// Tweets scored by the pluggable scorer, most recent first.
pub const SCORER_RECENT_TWEETS: usize = 100;
const SENTIMENT_THRESHOLD: f64 = 0.05;

/// Named feature values produced by one extractor.
pub type Partial = Vec<(String, FeatureValue)>;

fn num(out: &mut Partial, name: impl Into<String>, v: f64) {
    out.push((name.into(), FeatureValue::Num(v)));
}

fn cat(out: &mut Partial, name: impl Into<String>, v: impl Into<String>) {
    out.push((name.into(), FeatureValue::Cat(v.into())));
}

fn ratio(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        0.0
    } else {
        a / b
    }
}

/// Whole calendar months from `from` to `to`, counting a month only once
/// its day-of-month is reached.
pub fn whole_months_between(from: NaiveDate, to: NaiveDate) -> i64 {
    let mut m = (to.year() as i64 - from.year() as i64) * 12 + to.month() as i64 - from.month() as i64;
    if to.day() < from.day() {
        m -= 1;
    }
    m
}

fn non_empty_or_unknown(s: &str) -> String {
    let s = s.trim();
    if s.is_empty() {
        UNKNOWN.to_string()
    } else {
        s.to_string()
    }
}

/// Shared fitted inputs for row extraction.
#[derive(Clone)]
pub struct FeatureContext {
    pub publishers: PublisherRank,
    pub sites: PublisherRank,
    pub topics: TopicModel,
    pub scorer: Arc<dyn TextScorer>,
}

impl std::fmt::Debug for FeatureContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FeatureContext")
            .field("publishers", &self.publishers.ordered.len())
            .field("sites", &self.sites.ordered.len())
            .finish_non_exhaustive()
    }
}

impl FeatureContext {
    /// Fits publisher and site ranks on what the training observations can
    /// see: press before each prediction date and the search in effect then.
    pub fn fit(corpus: &Corpus, training: &[ObservationPoint], topics: TopicModel) -> Result<Self> {
        let mut press: BTreeSet<(&str, usize)> = BTreeSet::new();
        let mut searches: BTreeSet<(&str, chrono::NaiveDate)> = BTreeSet::new();
        let mut press_refs: Vec<PressReference> = Vec::new();
        let mut search_refs: Vec<&SearchResponse> = Vec::new();
        for obs in training {
            let view = apply_time_window(corpus, obs)?;
            for (i, p) in view.press.iter().enumerate() {
                if press.insert((p.company_id.as_str(), i)) {
                    press_refs.push(p.clone());
                }
            }
            if let Some(s) = view.search {
                if searches.insert((s.company_id.as_str(), s.query_date)) {
                    search_refs.push(s);
                }
            }
        }
        let publishers = if press_refs.is_empty() {
            PublisherRank::default()
        } else {
            rank_publishers(&press_refs)?
        };
        Ok(Self {
            publishers,
            sites: rank_sites(search_refs),
            topics,
            scorer: Arc::new(LexiconScorer),
        })
    }

    pub fn with_scorer(mut self, scorer: Arc<dyn TextScorer>) -> Self {
        self.scorer = scorer;
        self
    }
}

fn topic_block(out: &mut Partial, prefix: &str, labels: &[TopicLabel]) -> [usize; 7] {
    let mut counts = [0usize; 7];
    for l in labels {
        counts[l.index()] += 1;
    }
    for t in TopicLabel::ALL {
        num(out, format!("{prefix}_topic_{t}_count"), counts[t.index()] as f64);
    }
    for t in TopicLabel::ALL {
        num(
            out,
            format!("{prefix}_topic_{t}_fraction"),
            ratio(counts[t.index()] as f64, labels.len() as f64),
        );
    }
    counts
}

pub fn general_features(company: &CompanyRecord, obs: &ObservationPoint, dominant_topic: &str) -> Result<Partial> {
    let pred = obs.prediction_date;
    if company.founded_on > pred {
        return Err(Error::InvalidObservation(format!(
            "{} predicted at {pred}, before founding on {}",
            company.company_id, company.founded_on
        )));
    }
    let mut out = Partial::new();
    out.push(("description".into(), FeatureValue::Text(company.description.clone())));
    num(&mut out, "age_months", whole_months_between(company.founded_on, pred) as f64);
    num(&mut out, "founder_count", company.founder_count as f64);
    num(&mut out, "industry_count", company.industries.len() as f64);
    num(&mut out, "name_length", company.name.chars().count() as f64);
    num(&mut out, "website_length", company.website_url.chars().count() as f64);
    num(&mut out, "social_account_count", company.social_account_count() as f64);
    cat(&mut out, "country", non_empty_or_unknown(&company.country));
    cat(&mut out, "state", non_empty_or_unknown(&company.state));
    for (name, flag) in ["hub_ca", "hub_ny", "hub_tx", "hub_other"].iter().zip(company.hubs.as_array()) {
        cat(&mut out, *name, if flag { "1" } else { "0" });
    }
    cat(&mut out, "status", company.status.as_str());
    cat(
        &mut out,
        "primary_industry",
        non_empty_or_unknown(company.industries.first().map_or("", String::as_str)),
    );
    cat(&mut out, "dominant_topic", dominant_topic);
    Ok(out)
}

/// Funding-history features; the second value lists columns holding a
/// default because the source had no value.
pub fn funding_features(rounds: &[FundingRound], prediction_date: NaiveDate) -> (Partial, Vec<&'static str>) {
    let mut out = Partial::new();
    let mut missing = Vec::new();
    let last = rounds.iter().max_by_key(|r| r.announced_on);
    num(&mut out, "funding_round_count", rounds.len() as f64);
    let amount = last.and_then(|r| r.amount_usd);
    if amount.is_none() {
        missing.push("funding_last_amount_usd");
    }
    num(&mut out, "funding_last_amount_usd", amount.unwrap_or(0.0));
    match last {
        Some(r) => num(
            &mut out,
            "funding_months_since_last_round",
            whole_months_between(r.announced_on, prediction_date) as f64,
        ),
        None => {
            missing.push("funding_months_since_last_round");
            num(&mut out, "funding_months_since_last_round", 0.0);
        }
    }
    cat(&mut out, "funding_last_stage", last.map_or(NO_STAGE, |r| r.stage.as_str()));
    let total: usize = rounds.iter().map(|r| r.investor_ids.len()).sum();
    let distinct: BTreeSet<&str> = rounds.iter().flat_map(|r| r.investor_ids.iter().map(String::as_str)).collect();
    num(&mut out, "funding_total_investments", total as f64);
    num(&mut out, "funding_distinct_investors", distinct.len() as f64);
    num(
        &mut out,
        "funding_distinct_investor_ratio",
        ratio(distinct.len() as f64, total as f64),
    );
    (out, missing)
}

pub fn news_features(press: &[PressReference], ranks: &PublisherRank, topics: &[TopicLabel]) -> Partial {
    let mut out = Partial::new();
    let n = press.len() as f64;
    let top10 = press.iter().filter(|p| ranks.top10.contains(&p.publisher)).count() as f64;
    let top50 = press.iter().filter(|p| ranks.top50.contains(&p.publisher)).count() as f64;
    num(&mut out, "news_article_count", n);
    num(&mut out, "news_top10_publisher_count", top10);
    num(&mut out, "news_top10_publisher_fraction", ratio(top10, n));
    num(&mut out, "news_top50_publisher_count", top50);
    num(&mut out, "news_top50_publisher_fraction", ratio(top50, n));
    topic_block(&mut out, "news", topics);
    out
}

pub fn google_features(
    search: Option<&SearchResponse>,
    company: &CompanyRecord,
    publishers: &PublisherRank,
    sites: &PublisherRank,
    topics: &[TopicLabel],
) -> Partial {
    let mut out = Partial::new();
    let items = search.map_or(&[][..], |s| &s.items[..]);
    let domains: Vec<Option<String>> = items.iter().map(|i| registrable_domain(&i.link)).collect();
    let publisher_hits = |set: &BTreeSet<String>| {
        let keys: BTreeSet<String> = set.iter().map(|p| publisher_key(p)).collect();
        domains
            .iter()
            .flatten()
            .filter(|d| keys.contains(d.split('.').next().unwrap_or("")))
            .count() as f64
    };
    let site_hits = |set: &BTreeSet<String>| domains.iter().flatten().filter(|d| set.contains(*d)).count() as f64;
    num(&mut out, "google_total_results", search.map_or(0, |s| s.total_results) as f64);
    num(
        &mut out,
        "google_own_link_count",
        own_link_count(company, items.iter().map(|i| i.link.as_str())) as f64,
    );
    num(&mut out, "google_top10_publisher_count", publisher_hits(&publishers.top10));
    num(&mut out, "google_top50_publisher_count", publisher_hits(&publishers.top50));
    num(&mut out, "google_top10_site_count", site_hits(&sites.top10));
    num(&mut out, "google_top50_site_count", site_hits(&sites.top50));
    topic_block(&mut out, "google", topics);
    out
}

fn mean_std(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count() as f64;
    if n == 0.0 {
        return (0.0, 0.0);
    }
    let mean = values.clone().sum::<f64>() / n;
    let var = values.map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

fn handle_of(company: &CompanyRecord) -> Option<String> {
    company
        .twitter
        .as_deref()
        .map(|h| h.trim().trim_start_matches('@').to_lowercase())
        .filter(|h| !h.is_empty())
}

/// Twitter features over the windowed tweets. Zero tweets give zeros
/// throughout.
pub fn twitter_features(
    tweets: &[TweetRecord],
    company: &CompanyRecord,
    prediction_date: NaiveDate,
    scorer: &dyn TextScorer,
    topics: &[TopicLabel],
) -> Partial {
    let mut out = Partial::new();
    let n = tweets.len() as f64;
    let metrics: Vec<TextMetrics> = tweets.iter().map(|t| analyze(&t.text)).collect();

    num(&mut out, "twitter_tweet_count", n);
    let company_tweets: Vec<&TweetRecord> = tweets.iter().filter(|t| t.author_is_company).collect();
    num(&mut out, "twitter_company_tweet_count", company_tweets.len() as f64);
    let users: BTreeSet<&str> = tweets.iter().map(|t| t.author_id.as_str()).collect();
    num(&mut out, "twitter_unique_users", users.len() as f64);

    let engagement: [(&str, fn(&TweetRecord) -> u64); 4] = [
        ("likes", |t| t.like_count),
        ("retweets", |t| t.retweet_count),
        ("replies", |t| t.reply_count),
        ("quotes", |t| t.quote_count),
    ];
    for (name, get) in engagement {
        let total: u64 = tweets.iter().map(get).sum();
        let max = tweets.iter().map(get).max().unwrap_or(0);
        num(&mut out, format!("twitter_{name}_avg"), ratio(total as f64, n));
        num(&mut out, format!("twitter_{name}_total"), total as f64);
        num(&mut out, format!("twitter_{name}_max"), max as f64);
    }

    // tweets are sorted by time; score the most recent ones
    let recent = &tweets[tweets.len().saturating_sub(SCORER_RECENT_TWEETS)..];
    let scored: f64 = recent.iter().map(|t| scorer.score(&t.text)).sum();
    num(&mut out, "twitter_scorer_sentiment_recent", ratio(scored, recent.len() as f64));
    let frac = |pred: &dyn Fn(usize) -> bool| ratio((0..tweets.len()).filter(|&i| pred(i)).count() as f64, n);
    num(
        &mut out,
        "twitter_sentiment_positive_fraction",
        frac(&|i| metrics[i].sentiment >= SENTIMENT_THRESHOLD),
    );
    num(
        &mut out,
        "twitter_sentiment_negative_fraction",
        frac(&|i| metrics[i].sentiment <= -SENTIMENT_THRESHOLD),
    );
    num(
        &mut out,
        "twitter_sentiment_neutral_fraction",
        frac(&|i| metrics[i].sentiment.abs() < SENTIMENT_THRESHOLD),
    );

    let handle = handle_of(company).map(|h| format!("@{h}"));
    let site = registrable_domain(&company.website_url);
    num(&mut out, "twitter_fraction_company_authored", frac(&|i| tweets[i].author_is_company));
    num(
        &mut out,
        "twitter_fraction_account_mention",
        frac(&|i| handle.as_ref().is_some_and(|h| tweets[i].text.to_lowercase().contains(h.as_str()))),
    );
    num(
        &mut out,
        "twitter_fraction_website",
        frac(&|i| site.as_ref().is_some_and(|s| tweets[i].text.to_lowercase().contains(s.as_str()))),
    );
    num(&mut out, "twitter_fraction_replies", frac(&|i| tweets[i].reply_to_company));
    num(&mut out, "twitter_fraction_mentions", frac(&|i| metrics[i].surface.mentions > 0));
    num(&mut out, "twitter_fraction_hashtags", frac(&|i| metrics[i].surface.hashtags > 0));
    num(&mut out, "twitter_fraction_links", frac(&|i| metrics[i].surface.links > 0));
    num(&mut out, "twitter_fraction_emojis", frac(&|i| metrics[i].surface.emojis > 0));
    num(&mut out, "twitter_distinct_languages", distinct_language_count(tweets) as f64);
    topic_block(&mut out, "twitter", topics);

    let per_tweet: [(&str, fn(&TextMetrics) -> f64); 17] = [
        ("characters", |m| m.characters as f64),
        ("tokens", |m| m.tokens as f64),
        ("words", |m| m.words as f64),
        ("sentences", |m| m.sentences as f64),
        ("punctuation", |m| m.punctuation as f64),
        ("shapes", |m| m.shapes as f64),
        ("hashtags", |m| m.surface.hashtags as f64),
        ("mentions", |m| m.surface.mentions as f64),
        ("links", |m| m.surface.links as f64),
        ("emojis", |m| m.surface.emojis as f64),
        ("passive", |m| m.passive as f64),
        ("syllables", |m| m.readability.syllable_count as f64),
        ("syllables_per_word", TextMetrics::syllables_per_word),
        ("flesch", |m| m.flesch),
        ("long_word_fraction", TextMetrics::long_word_fraction),
        ("complex_word_fraction", TextMetrics::complex_word_fraction),
        ("sentiment", |m| m.sentiment),
    ];
    for (name, get) in per_tweet {
        let (mean, std) = mean_std(metrics.iter().map(get));
        num(&mut out, format!("twitter_{name}_mean"), mean);
        num(&mut out, format!("twitter_{name}_std"), std);
    }
    for tag in PosTag::ALL {
        let (mean, std) = mean_std(metrics.iter().map(|m| m.pos[tag.index()]));
        num(&mut out, format!("twitter_pos_{}_mean", tag.as_str().to_lowercase()), mean);
        num(&mut out, format!("twitter_pos_{}_std", tag.as_str().to_lowercase()), std);
    }

    let months: BTreeSet<(i32, u32)> = tweets.iter().map(|t| (t.created_at.year(), t.created_at.month())).collect();
    num(&mut out, "twitter_active_months", months.len() as f64);
    let pred = start_of_day(prediction_date);
    let days_since = |t: Option<&TweetRecord>| t.map_or(0.0, |t| (pred - t.created_at).num_days() as f64);
    num(&mut out, "twitter_days_since_first_tweet", days_since(tweets.first()));
    num(&mut out, "twitter_days_since_last_tweet", days_since(tweets.last()));
    let recent_start = pred - Duration::days(90);
    num(
        &mut out,
        "twitter_recent_90d_count",
        tweets.iter().filter(|t| t.created_at >= recent_start).count() as f64,
    );
    let avg = |ts: &[&TweetRecord], get: fn(&TweetRecord) -> u64| {
        ratio(ts.iter().map(|t| get(t)).sum::<u64>() as f64, ts.len() as f64)
    };
    let others: Vec<&TweetRecord> = tweets.iter().filter(|t| !t.author_is_company).collect();
    num(&mut out, "twitter_company_avg_likes", avg(&company_tweets, |t| t.like_count));
    num(&mut out, "twitter_company_avg_retweets", avg(&company_tweets, |t| t.retweet_count));
    num(&mut out, "twitter_other_avg_likes", avg(&others, |t| t.like_count));
    num(&mut out, "twitter_other_avg_retweets", avg(&others, |t| t.retweet_count));
    num(
        &mut out,
        "twitter_passive_total",
        metrics.iter().map(|m| m.passive).sum::<usize>() as f64,
    );
    out
}

/// Most frequent non-"other" topic, ties by label order; [`UNKNOWN`] when
/// nothing was classified into a milestone topic.
pub fn dominant_topic(counts: &[[usize; 7]]) -> String {
    let mut total = [0usize; 7];
    for c in counts {
        for (t, v) in total.iter_mut().zip(c) {
            *t += v;
        }
    }
    let mut best: Option<TopicLabel> = None;
    for label in TopicLabel::ALL {
        if label == TopicLabel::Other || total[label.index()] == 0 {
            continue;
        }
        if best.is_none_or(|b| total[label.index()] > total[b.index()]) {
            best = Some(label);
        }
    }
    best.map_or_else(|| UNKNOWN.to_string(), |l| l.as_str().to_string())
}

fn count_labels(labels: &[TopicLabel]) -> [usize; 7] {
    let mut c = [0; 7];
    for l in labels {
        c[l.index()] += 1;
    }
    c
}

/// One row for one windowed view.
pub fn extract_row(manifest: &FeatureManifest, view: &WindowedView<'_>, ctx: &FeatureContext) -> Result<FeatureVector> {
    let pred = view.prediction_date();
    let news_topics: Vec<TopicLabel> = view.press.iter().map(|p| ctx.topics.classify(&p.title)).collect();
    let google_topics: Vec<TopicLabel> = view
        .search
        .map(|s| s.items.iter().map(|i| ctx.topics.classify(&i.title)).collect())
        .unwrap_or_default();
    let tweet_topics: Vec<TopicLabel> = view.tweets.iter().map(|t| ctx.topics.classify(&t.text)).collect();
    let dominant = dominant_topic(&[
        count_labels(&news_topics),
        count_labels(&google_topics),
        count_labels(&tweet_topics),
    ]);

    let mut parts = general_features(view.company, view.observation, &dominant)?;
    let (funding, mut missing_names) = funding_features(view.rounds, pred);
    parts.extend(funding);
    parts.extend(news_features(view.press, &ctx.publishers, &news_topics));
    let google = google_features(view.search, view.company, &ctx.publishers, &ctx.sites, &google_topics);
    let google_missing: Vec<String> = if view.search.is_none() {
        google.iter().map(|(n, _)| n.clone()).collect()
    } else {
        Vec::new()
    };
    parts.extend(google);
    let twitter = twitter_features(view.tweets, view.company, pred, ctx.scorer.as_ref(), &tweet_topics);
    let twitter_missing: Vec<String> = if view.tweets.is_empty() {
        twitter.iter().map(|(n, _)| n.clone()).collect()
    } else {
        Vec::new()
    };
    parts.extend(twitter);

    let mut values: Vec<Option<FeatureValue>> = vec![None; manifest.len()];
    for (name, value) in parts {
        let Some(i) = manifest.position(&name) else {
            continue;
        };
        values[i] = Some(value);
    }
    let mut missing = vec![false; manifest.len()];
    let all_missing = google_missing.iter().chain(&twitter_missing).map(String::as_str);
    for name in all_missing.chain(missing_names.drain(..)) {
        if let Some(i) = manifest.position(name) {
            missing[i] = true;
        }
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| Error::Schema(format!("no extractor produces column `{}`", manifest.get(i).name)))
        })
        .collect::<Result<Vec<_>>>()?;
    let row = FeatureVector {
        company_id: view.company.company_id.clone(),
        prediction_date: pred,
        values,
        missing,
    };
    super::matrix::check_row(manifest, &row)?;
    Ok(row)
}

/// One row per observation, in observation order.
pub fn assemble_feature_matrix(
    corpus: &Corpus,
    observations: &[ObservationPoint],
    manifest: &FeatureManifest,
    ctx: &FeatureContext,
) -> Result<Vec<FeatureVector>> {
    observations
        .par_iter()
        .map(|obs| {
            let view = apply_time_window(corpus, obs)?;
            extract_row(manifest, &view, ctx)
        })
        .collect()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::ingest::test_support::{company, tweet};
    use crate::ingest::{FundingStage, SearchItem};
    use crate::topics::{synthetic_headlines, train_topic_classifier, TopicConfig};
    use std::sync::OnceLock;

    pub(crate) fn topic_model() -> TopicModel {
        static MODEL: OnceLock<TopicModel> = OnceLock::new();
        MODEL
            .get_or_init(|| train_topic_classifier(&synthetic_headlines(20, 1), &TopicConfig::default()).unwrap())
            .clone()
    }

    fn d(s: &str) -> NaiveDate {
        s.parse().unwrap()
    }

    fn get(p: &Partial, name: &str) -> f64 {
        p.iter().find(|(n, _)| n == name).unwrap().1.as_num().unwrap()
    }

    fn round(on: &str, investors: &[&str]) -> FundingRound {
        FundingRound {
            company_id: "c1".into(),
            announced_on: d(on),
            amount_usd: Some(1e6),
            stage: FundingStage::Seed,
            investor_ids: investors.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn general_block() {
        let mut c = company("c1");
        c.founded_on = d("2020-01-01");
        c.twitter = Some("acme".into());
        c.linkedin = Some("acme".into());
        let obs = ObservationPoint::new("c1", d("2021-01-01"));
        let p = general_features(&c, &obs, UNKNOWN).unwrap();
        assert_eq!(get(&p, "age_months"), 12.0);
        assert_eq!(get(&p, "name_length"), 4.0);
        assert_eq!(get(&p, "social_account_count"), 2.0);
        let early = ObservationPoint::new("c1", d("2019-01-01"));
        assert!(matches!(general_features(&c, &early, UNKNOWN), Err(Error::InvalidObservation(_))));
    }

    #[test]
    fn funding_block() {
        let (p, missing) = funding_features(&[], d("2021-01-01"));
        assert_eq!(get(&p, "funding_round_count"), 0.0);
        assert_eq!(get(&p, "funding_distinct_investor_ratio"), 0.0);
        assert!(p.iter().any(|(n, v)| n == "funding_last_stage" && v.as_str() == Some(NO_STAGE)));
        assert_eq!(missing.len(), 2);

        let rounds = [round("2019-05-01", &["A", "B"]), round("2020-03-01", &["A", "C"])];
        let (p, _) = funding_features(&rounds, d("2021-01-01"));
        assert_eq!(get(&p, "funding_total_investments"), 4.0);
        assert_eq!(get(&p, "funding_distinct_investors"), 3.0);
        assert_eq!(get(&p, "funding_distinct_investor_ratio"), 0.75);
        assert_eq!(get(&p, "funding_months_since_last_round"), 10.0);
    }

    #[test]
    fn news_block() {
        let press: Vec<PressReference> = (0..40)
            .map(|i| PressReference {
                company_id: "x".into(),
                title: "t".into(),
                publisher: format!("P{i:02}"),
                published_on: d("2020-01-01"),
            })
            .chain((0..39).map(|_| PressReference {
                company_id: "x".into(),
                title: "t".into(),
                publisher: "P00".into(),
                published_on: d("2020-01-01"),
            }))
            .collect();
        let ranks = rank_publishers(&press).unwrap();
        let mine: Vec<PressReference> = ["P00", "P30", "P35", "Nobody"]
            .iter()
            .map(|p| PressReference {
                publisher: p.to_string(),
                ..press[0].clone()
            })
            .collect();
        assert_eq!(ranks.rank_of("P30"), Some(31));
        let p = news_features(&mine, &ranks, &[TopicLabel::Other; 4]);
        assert_eq!(get(&p, "news_top10_publisher_count"), 1.0);
        assert_eq!(get(&p, "news_top10_publisher_fraction"), 0.25);
        assert_eq!(get(&p, "news_top50_publisher_count"), 3.0);
        let empty = news_features(&[], &ranks, &[]);
        assert!(empty.iter().all(|(_, v)| v.as_num() == Some(0.0)));
    }

    #[test]
    fn google_block() {
        let mut c = company("c1");
        c.linkedin = Some("acme".into());
        let item = |link: &str| SearchItem {
            link: link.into(),
            title: "x".into(),
            snippet: String::new(),
        };
        let s = SearchResponse {
            company_id: "c1".into(),
            query_date: d("2021-01-01"),
            total_results: 1234,
            items: vec![item("https://acme.com"), item("https://linkedin.com/company/acme"), item("https://techcrunch.com/a")],
        };
        let publishers = rank_publishers(&[PressReference {
            company_id: "c1".into(),
            title: "t".into(),
            publisher: "TechCrunch".into(),
            published_on: d("2020-01-01"),
        }])
        .unwrap();
        let sites = rank_sites([&s]);
        let p = google_features(Some(&s), &c, &publishers, &sites, &[TopicLabel::Other; 3]);
        assert_eq!(get(&p, "google_total_results"), 1234.0);
        assert_eq!(get(&p, "google_own_link_count"), 2.0);
        assert_eq!(get(&p, "google_top10_publisher_count"), 1.0);
        assert_eq!(get(&p, "google_top10_site_count"), 3.0);
        let none = google_features(None, &c, &publishers, &sites, &[]);
        assert!(none.iter().all(|(_, v)| v.as_num() == Some(0.0)));
    }

    #[test]
    fn twitter_block() {
        let c = company("c1");
        let pred = d("2021-01-01");
        let p = twitter_features(&[], &c, pred, &LexiconScorer, &[]);
        assert_eq!(p.len(), 109);
        assert!(p.iter().all(|(_, v)| v.as_num() == Some(0.0)));

        let mut a = tweet("c1", "1", "2020-12-01T00:00:00Z");
        let mut b = tweet("c1", "2", "2020-12-02T00:00:00Z");
        a.like_count = 3;
        b.like_count = 5;
        let p = twitter_features(&[a.clone(), b.clone()], &c, pred, &LexiconScorer, &[TopicLabel::Other; 2]);
        assert_eq!(get(&p, "twitter_likes_avg"), 4.0);
        assert_eq!(get(&p, "twitter_likes_total"), 8.0);
        assert_eq!(get(&p, "twitter_likes_max"), 5.0);

        let mut four = vec![a.clone(), b.clone(), a.clone(), b];
        four[0].author_is_company = true;
        let p = twitter_features(&four, &c, pred, &LexiconScorer, &[TopicLabel::Other; 4]);
        assert_eq!(get(&p, "twitter_fraction_company_authored"), 0.25);
        assert_eq!(get(&p, "twitter_days_since_last_tweet"), 30.0);
    }

    #[test]
    fn dominant_topic_skips_other() {
        assert_eq!(dominant_topic(&[[0, 0, 0, 0, 0, 0, 5]]), UNKNOWN);
        assert_eq!(dominant_topic(&[[0, 2, 0, 0, 0, 0, 9], [0, 0, 0, 0, 2, 0, 0]]), "merger_acquisition");
    }

    #[test]
    fn assembled_rows_are_canonical() {
        let corpus = Corpus::from_parts(vec![company("c1"), company("c2")], vec![], vec![], vec![], vec![
            tweet("c1", "t1", "2020-11-01T00:00:00Z"),
        ])
        .unwrap();
        let manifest = FeatureManifest::canonical();
        let obs: Vec<ObservationPoint> = ["c1", "c2", "c1", "c2", "c1"]
            .iter()
            .zip(["2020-01-01", "2020-01-01", "2021-01-01", "2021-01-01", "2022-01-01"])
            .map(|(c, t)| ObservationPoint::new(*c, d(t)))
            .collect();
        let ctx = FeatureContext::fit(&corpus, &obs, topic_model()).unwrap();
        let rows = assemble_feature_matrix(&corpus, &obs, &manifest, &ctx).unwrap();
        assert_eq!(rows.len(), 5);
        assert!(rows.iter().all(|r| r.values.len() == 171));
        let tw = manifest.position("twitter_tweet_count").unwrap();
        assert_eq!(rows[2].num(tw), 1.0);
        for r in [&rows[0], &rows[1], &rows[3], &rows[4]] {
            for (i, f) in manifest.features().iter().enumerate() {
                if f.name.starts_with("twitter_") || f.name.starts_with("news_") {
                    assert_eq!(r.num(i), 0.0, "{}", f.name);
                }
            }
        }
        let mut reversed = obs.clone();
        reversed.reverse();
        let mut again = assemble_feature_matrix(&corpus, &reversed, &manifest, &ctx).unwrap();
        again.reverse();
        assert_eq!(again, rows);
    }
}
