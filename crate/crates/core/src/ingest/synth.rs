//! Seeded synthetic corpora with a planted funding signal.
//!
//! Every company gets one observation date. Exactly `round(n * rate)`
//! companies raise a round in the year after it; the rest raise nothing in
//! that year. Background rounds arrive as a class-independent Poisson
//! process outside that year, so longer horizons pick up more positives.
//! Positives are shifted, by `signal_strength`, on the columns listed in
//! [`INFORMATIVE_FEATURES`]; every other column is drawn identically for
//! both classes.

use std::collections::BTreeSet;
use std::path::Path;

use chrono::{DateTime, Datelike, Duration, NaiveDate, Utc};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::corpus::{write_corpus, write_observations, Corpus, OBSERVATIONS_FILE};
use super::types::*;
use super::window::{months_after, months_before, start_of_day, TWEET_LOOKBACK_MONTHS};
use crate::error::{Error, Result};
use crate::topics::{synthetic_headline, synthetic_headlines, write_headlines, HeadlineExample, TopicLabel, HEADLINES_FILE};

/// Columns whose distribution differs between the classes.
pub const INFORMATIVE_FEATURES: [&str; 10] = [
    "founder_count",
    "industry_count",
    "social_account_count",
    "news_article_count",
    "news_topic_funding_event_count",
    "google_total_results",
    "google_own_link_count",
    "twitter_tweet_count",
    "twitter_likes_avg",
    "twitter_sentiment_mean",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenConfig {
    pub companies: usize,
    pub positive_rate: f64,
    /// 0 draws both classes from the same distributions.
    pub signal_strength: f64,
    pub first_founding_year: i32,
    pub last_observation_year: i32,
    /// Expected background rounds per company-year.
    pub background_round_rate: f64,
    /// Labeled headlines per topic written alongside the corpus.
    pub headlines_per_topic: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            companies: 2_000,
            positive_rate: 0.3,
            signal_strength: 1.0,
            first_founding_year: 2008,
            last_observation_year: 2022,
            background_round_rate: 0.3,
            headlines_per_topic: 60,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.positive_rate) {
            return Err(Error::Config(format!("positive rate {} outside [0, 1]", self.positive_rate)));
        }
        if self.companies == 0 {
            return Err(Error::Config("company count must be positive".into()));
        }
        if self.signal_strength < 0.0 || !self.signal_strength.is_finite() {
            return Err(Error::Config("signal strength must be finite and non-negative".into()));
        }
        if self.last_observation_year <= self.first_founding_year + 1 {
            return Err(Error::Config("observation years must follow the founding years".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticCorpus {
    pub corpus: Corpus,
    pub observations: Vec<ObservationPoint>,
    pub headlines: Vec<HeadlineExample>,
    /// Companies that raise a round within a year of their observation.
    pub positives: BTreeSet<String>,
}

/// Last day covered by generated funding rounds.
pub const SYNTHETIC_HORIZON_END: (i32, u32, u32) = (2027, 12, 31);

const PUBLISHERS: &[&str] = &[
    "TechCrunch", "PR Newswire", "Business Wire", "VentureBeat", "Forbes", "Reuters", "Bloomberg",
    "The Verge", "Wired", "Fast Company", "Inc", "Axios", "CNBC", "Fortune", "GeekWire", "Crunchbase News",
    "SiliconANGLE", "ZDNet", "Mashable", "Engadget", "Recode", "Quartz", "Protocol", "The Information",
];
const SITES: &[&str] = &[
    "crunchbase.com", "techcrunch.com", "forbes.com", "reuters.com", "bloomberg.com", "wikipedia.org",
    "glassdoor.com", "indeed.com", "producthunt.com", "github.com", "medium.com", "angel.co", "yelp.com",
    "reddit.com", "youtube.com", "zoominfo.com",
];
const WORDS: &[&str] = &[
    "platform", "data", "cloud", "customers", "analytics", "health", "payments", "marketplace", "mobile",
    "ai", "secure", "teams", "energy", "logistics", "retail", "learning", "software", "network", "finance",
    "insurance", "food", "travel", "media", "devices", "automation", "developers", "privacy", "climate",
    "biotech", "hardware", "social", "gaming", "real", "estate", "legal", "hiring", "creators", "fitness",
];
const INDUSTRIES: &[&str] = &[
    "Software", "Fintech", "Healthcare", "E-Commerce", "Education", "Energy", "Media", "Hardware",
    "Biotech", "Logistics", "Security", "Gaming",
];
const STATES: &[&str] = &["CA", "NY", "TX", "MA", "WA", "FL", "IL", "CO", "GA", "OR"];
const OTHER_HUB_STATES: &[&str] = &["MA", "WA", "IL"];
const COUNTRIES: &[&str] = &["GBR", "DEU", "FRA", "CAN", "ISR", "IND", "SGP"];
const SYLLABLES: &[&str] = &["ka", "lo", "mi", "ra", "ven", "tor", "zu", "pex", "ly", "qua", "dex", "no", "fi", "sa"];
const POSITIVE_WORDS: &[&str] = &["great", "love", "excellent", "amazing", "happy", "awesome", "win"];
const NEGATIVE_WORDS: &[&str] = &["bad", "terrible", "hate", "awful", "sad", "broken", "fail"];
const NEUTRAL_PHRASES: &[&str] = &[
    "update from the team",
    "new blog post is live",
    "we are hiring engineers",
    "join us at the meetup",
    "check out the release notes",
    "thoughts on the market",
];
const HASHTAGS: &[&str] = &["#startup", "#tech", "#growth", "#product", "#launch"];
const LANGUAGES: &[&str] = &["en", "en", "en", "en", "en", "en", "es", "fr", "de"];

fn poisson(rng: &mut impl Rng, lambda: f64) -> usize {
    if lambda <= 0.0 {
        return 0;
    }
    let limit = (-lambda).exp();
    let mut k = 0;
    let mut p: f64 = rng.gen();
    while p > limit {
        k += 1;
        p *= rng.gen::<f64>();
    }
    k
}

fn normal(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn date_between(rng: &mut impl Rng, lo: NaiveDate, hi: NaiveDate) -> NaiveDate {
    let span = (hi - lo).num_days().max(1);
    lo + Duration::days(rng.gen_range(0..span))
}

fn time_between(rng: &mut impl Rng, lo: DateTime<Utc>, hi: DateTime<Utc>) -> DateTime<Utc> {
    let span = (hi - lo).num_seconds().max(1);
    lo + Duration::seconds(rng.gen_range(0..span))
}

fn jan1(year: i32) -> NaiveDate {
    NaiveDate::from_ymd_opt(year, 1, 1).expect("January 1 exists")
}

struct Gen<'a> {
    cfg: &'a GenConfig,
    rng: ChaCha8Rng,
    user_pool: usize,
}

impl Gen<'_> {
    /// Signal shift for this company: 0 for negatives.
    fn lift(&self, positive: bool) -> f64 {
        if positive {
            self.cfg.signal_strength
        } else {
            0.0
        }
    }

    fn name(&mut self) -> String {
        let n = self.rng.gen_range(2..=3);
        let mut s: String = (0..n).map(|_| *SYLLABLES.choose(&mut self.rng).unwrap()).collect();
        s[..1].make_ascii_uppercase();
        s
    }

    fn company(&mut self, idx: usize, positive: bool) -> (CompanyRecord, NaiveDate) {
        let lift = self.lift(positive);
        let id = format!("c{idx:05}");
        let name = self.name();
        let slug = format!("{}{idx}", name.to_lowercase());
        let founded = date_between(
            &mut self.rng,
            jan1(self.cfg.first_founding_year),
            jan1(self.cfg.last_observation_year - 1),
        );
        let obs_year = self.rng.gen_range(founded.year() + 1..=self.cfg.last_observation_year);
        let words = self.rng.gen_range(6..=14);
        let description = (0..words)
            .map(|_| *WORDS.choose(&mut self.rng).unwrap())
            .collect::<Vec<_>>()
            .join(" ");
        let founders = 1 + poisson(&mut self.rng, 1.0 + 1.05 * lift);
        let p_industry = (0.25 + 0.26 * lift).min(0.95);
        let industry_count = 1 + (0..3).filter(|_| self.rng.gen_bool(p_industry)).count();
        let industries: Vec<String> = INDUSTRIES
            .choose_multiple(&mut self.rng, industry_count)
            .map(|s| s.to_string())
            .collect();
        let p_social = (0.4 + 0.29 * lift).min(0.95);
        let twitter = self.rng.gen_bool(0.85).then(|| slug.clone());
        let facebook = self.rng.gen_bool(p_social).then(|| slug.clone());
        let linkedin = self.rng.gen_bool(p_social).then(|| slug.clone());
        let (country, state) = if self.rng.gen_bool(0.7) {
            ("USA".to_string(), STATES.choose(&mut self.rng).unwrap().to_string())
        } else {
            (COUNTRIES.choose(&mut self.rng).unwrap().to_string(), String::new())
        };
        let hubs = HubFlags {
            ca: state == "CA",
            ny: state == "NY",
            tx: state == "TX",
            other: OTHER_HUB_STATES.contains(&state.as_str()) || country == "GBR" || country == "ISR",
        };
        let status = match self.rng.gen_range(0..100) {
            0..=79 => CompanyStatus::Active,
            80..=89 => CompanyStatus::Closed,
            90..=97 => CompanyStatus::Acquired,
            _ => CompanyStatus::Ipo,
        };
        let record = CompanyRecord {
            company_id: id,
            name,
            description,
            founded_on: founded,
            founder_count: founders as u32,
            industries,
            website_url: format!("https://www.{slug}.com"),
            twitter,
            facebook,
            linkedin,
            country,
            state,
            hubs,
            status,
        };
        (record, jan1(obs_year))
    }

    fn rounds(&mut self, c: &CompanyRecord, obs: NaiveDate, positive: bool) -> Vec<FundingRound> {
        let (y, m, d) = SYNTHETIC_HORIZON_END;
        let end = NaiveDate::from_ymd_opt(y, m, d).unwrap();
        let quiet = (obs, months_after(obs, 12));
        let mut dates = Vec::new();
        let mut t = c.founded_on;
        loop {
            let u: f64 = self.rng.gen_range(f64::EPSILON..1.0);
            let gap_days = (-u.ln() / self.cfg.background_round_rate * 365.25).ceil() as i64;
            t += Duration::days(gap_days.max(1));
            if t > end {
                break;
            }
            if t < quiet.0 || t >= quiet.1 {
                dates.push(t);
            }
        }
        if positive {
            dates.push(date_between(&mut self.rng, quiet.0, quiet.1));
        }
        dates.sort();
        dates
            .into_iter()
            .enumerate()
            .map(|(i, announced_on)| {
                let stage = if self.rng.gen_bool(0.08) {
                    FundingStage::Other
                } else {
                    match i {
                        0 if self.rng.gen_bool(0.3) => FundingStage::Angel,
                        0 => FundingStage::Seed,
                        1 => FundingStage::SeriesA,
                        2 => FundingStage::SeriesB,
                        _ => FundingStage::SeriesCPlus,
                    }
                };
                let scale = match stage {
                    FundingStage::Angel => 5e5,
                    FundingStage::Seed => 2e6,
                    FundingStage::SeriesA => 1e7,
                    FundingStage::SeriesB => 3e7,
                    FundingStage::SeriesCPlus => 8e7,
                    FundingStage::Other => 1e6,
                };
                let amount_usd = self
                    .rng
                    .gen_bool(0.9)
                    .then(|| (scale * (0.5 * normal(&mut self.rng)).exp()).round());
                let investors = self.rng.gen_range(1..=4);
                let investor_ids = (0..investors).map(|_| format!("inv{:04}", self.rng.gen_range(0..400))).collect();
                FundingRound {
                    company_id: c.company_id.clone(),
                    announced_on,
                    amount_usd,
                    stage,
                    investor_ids,
                }
            })
            .collect()
    }

    fn publisher(&mut self) -> &'static str {
        // Zipf-like popularity
        let w: Vec<f64> = (1..=PUBLISHERS.len()).map(|r| 1.0 / r as f64).collect();
        let total: f64 = w.iter().sum();
        let mut u = self.rng.gen::<f64>() * total;
        for (i, wi) in w.iter().enumerate() {
            if u < *wi {
                return PUBLISHERS[i];
            }
            u -= wi;
        }
        PUBLISHERS[PUBLISHERS.len() - 1]
    }

    fn other_topic(&mut self) -> TopicLabel {
        *TopicLabel::ALL[1..].choose(&mut self.rng).unwrap()
    }

    fn press(&mut self, c: &CompanyRecord, obs: NaiveDate, positive: bool) -> Vec<PressReference> {
        let lift = self.lift(positive);
        let before = poisson(&mut self.rng, 3.0 * (1.0 + 0.65 * lift));
        let after = poisson(&mut self.rng, 2.0);
        let p_funding = (0.2 + 0.2 * lift).min(0.9);
        let mut out = Vec::with_capacity(before + after);
        for k in 0..before + after {
            let published_on = if k < before {
                date_between(&mut self.rng, c.founded_on, obs)
            } else {
                date_between(&mut self.rng, obs, months_after(obs, 24))
            };
            let p = if k < before { p_funding } else { 0.15 };
            let topic = if self.rng.gen_bool(p) {
                TopicLabel::FundingEvent
            } else {
                self.other_topic()
            };
            out.push(PressReference {
                company_id: c.company_id.clone(),
                title: synthetic_headline(topic, Some(&c.name), &mut self.rng),
                publisher: self.publisher().to_string(),
                published_on,
            });
        }
        out
    }

    fn search(&mut self, c: &CompanyRecord, obs: NaiveDate, positive: bool) -> SearchResponse {
        let lift = self.lift(positive);
        let total_results = (8.0 + 0.9 * lift + normal(&mut self.rng)).exp().round() as u64;
        let p_own = (0.12 + 0.1 * lift).min(0.9);
        let own_links: Vec<String> = [
            Some(c.website_url.clone()),
            c.twitter.as_ref().map(|h| format!("https://twitter.com/{h}")),
            c.facebook.as_ref().map(|h| format!("https://facebook.com/{h}")),
            c.linkedin.as_ref().map(|h| format!("https://www.linkedin.com/company/{h}")),
        ]
        .into_iter()
        .flatten()
        .collect();
        let items = (0..MAX_SEARCH_ITEMS)
            .map(|i| {
                let own = self.rng.gen_bool(p_own);
                let link = if own {
                    format!("{}/p{i}", own_links.choose(&mut self.rng).unwrap())
                } else if self.rng.gen_bool(0.4) {
                    let p = self.publisher();
                    format!("https://{}.com/{}", crate::features::publisher_key(p), c.company_id)
                } else {
                    format!("https://{}/{}", SITES.choose(&mut self.rng).unwrap(), c.company_id)
                };
                let topic = self.other_topic();
                SearchItem {
                    link,
                    title: synthetic_headline(topic, Some(&c.name), &mut self.rng),
                    snippet: format!("{} {}", c.name, c.description),
                }
            })
            .collect();
        SearchResponse {
            company_id: c.company_id.clone(),
            query_date: obs,
            total_results,
            items,
        }
    }

    fn tweet_text(&mut self, c: &CompanyRecord, p_positive: f64) -> String {
        let mut parts: Vec<String> = Vec::new();
        let u: f64 = self.rng.gen();
        if u < p_positive {
            parts.push(POSITIVE_WORDS.choose(&mut self.rng).unwrap().to_string());
        } else if u < p_positive + 0.2 {
            parts.push(NEGATIVE_WORDS.choose(&mut self.rng).unwrap().to_string());
        }
        parts.push(NEUTRAL_PHRASES.choose(&mut self.rng).unwrap().to_string());
        if let Some(h) = &c.twitter {
            if self.rng.gen_bool(0.4) {
                parts.push(format!("@{h}"));
            }
        }
        if self.rng.gen_bool(0.3) {
            parts.push(HASHTAGS.choose(&mut self.rng).unwrap().to_string());
        }
        if self.rng.gen_bool(0.2) {
            parts.push(c.website_url.clone());
        }
        if self.rng.gen_bool(0.1) {
            parts.push("🚀".to_string());
        }
        let mut s = parts.join(" ");
        if self.rng.gen_bool(0.5) {
            s.push('.');
        }
        s
    }

    fn tweets(&mut self, c: &CompanyRecord, obs: NaiveDate, positive: bool) -> Vec<TweetRecord> {
        let lift = self.lift(positive);
        let end = start_of_day(obs);
        let window_start = start_of_day(months_before(obs, TWEET_LOOKBACK_MONTHS));
        let early_start = start_of_day(months_before(obs, 30).max(c.founded_on));
        let late_end = start_of_day(months_after(obs, 12));
        let inside = poisson(&mut self.rng, 10.0 * (1.0 + 0.33 * lift));
        let early = if early_start < window_start {
            poisson(&mut self.rng, 4.0)
        } else {
            0
        };
        let late = poisson(&mut self.rng, 4.0);
        // company popularity varies; positives are shifted up
        let like_mean = 4.0 * (0.4 * normal(&mut self.rng) + 0.45 * lift).exp();
        let p_positive = (0.25 + 0.17 * lift).min(0.75);
        let mut out = Vec::with_capacity(inside + early + late);
        for k in 0..inside + early + late {
            let created_at = if k < inside {
                time_between(&mut self.rng, window_start.max(start_of_day(c.founded_on)), end)
            } else if k < inside + early {
                time_between(&mut self.rng, early_start, window_start)
            } else {
                time_between(&mut self.rng, end, late_end)
            };
            let (likes, pp) = if k < inside { (like_mean, p_positive) } else { (4.0, 0.25) };
            let from_company = self.rng.gen_bool(0.3);
            let author_id = if from_company {
                c.twitter.clone().unwrap_or_else(|| c.company_id.clone())
            } else {
                format!("u{}", self.rng.gen_range(0..self.user_pool))
            };
            let text = self.tweet_text(c, pp);
            out.push(TweetRecord {
                tweet_id: format!("{}-t{k}", c.company_id),
                company_id: c.company_id.clone(),
                author_id,
                author_is_company: from_company,
                reply_to_company: !from_company && self.rng.gen_bool(0.2),
                created_at,
                text,
                like_count: poisson(&mut self.rng, likes) as u64,
                retweet_count: poisson(&mut self.rng, 1.5) as u64,
                reply_count: poisson(&mut self.rng, 1.0) as u64,
                quote_count: poisson(&mut self.rng, 0.3) as u64,
                language_hint: Some(LANGUAGES.choose(&mut self.rng).unwrap().to_string()),
            });
        }
        out
    }
}

/// Builds a corpus deterministically from `seed`.
pub fn generate_synthetic_corpus(config: &GenConfig, seed: u64) -> Result<SyntheticCorpus> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = config.companies;
    let n_pos = (n as f64 * config.positive_rate).round() as usize;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let positive_idx: BTreeSet<usize> = order[..n_pos].iter().copied().collect();
    let headlines = synthetic_headlines(config.headlines_per_topic, rng.gen());

    let mut g = Gen {
        cfg: config,
        rng,
        user_pool: (n * 20).max(100),
    };
    let (mut companies, mut rounds, mut press, mut searches, mut tweets) =
        (Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let mut observations = Vec::with_capacity(n);
    let mut positives = BTreeSet::new();
    for i in 0..n {
        let positive = positive_idx.contains(&i);
        let (c, obs) = g.company(i, positive);
        rounds.extend(g.rounds(&c, obs, positive));
        press.extend(g.press(&c, obs, positive));
        searches.push(g.search(&c, obs, positive));
        tweets.extend(g.tweets(&c, obs, positive));
        observations.push(ObservationPoint::new(c.company_id.clone(), obs));
        if positive {
            positives.insert(c.company_id.clone());
        }
        companies.push(c);
    }
    let corpus = Corpus::from_parts(companies, rounds, press, searches, tweets)?;
    Ok(SyntheticCorpus {
        corpus,
        observations,
        headlines,
        positives,
    })
}

/// Writes the fixture tables plus the observation and headline files.
pub fn write_synthetic_corpus(synth: &SyntheticCorpus, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    write_corpus(&synth.corpus, dir)?;
    write_observations(dir.join(OBSERVATIONS_FILE), &synth.observations)?;
    write_headlines(dir.join(HEADLINES_FILE), &synth.headlines)
}
