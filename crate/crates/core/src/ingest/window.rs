use chrono::{DateTime, Months, NaiveDate, Utc};

use super::corpus::Corpus;
use super::types::{
    CompanyRecord, FundingRound, ObservationPoint, PressReference, SearchResponse, TweetRecord,
};
use crate::error::{Error, Result};

/// How far back tweets are collected before the prediction date.
pub const TWEET_LOOKBACK_MONTHS: u32 = 9;
/// How far before founding search results may reach.
pub const SEARCH_LOOKBACK_MONTHS: u32 = 12;

/// Subtracts calendar months, clamping to the last day of the target month
/// when the day does not exist (Mar 31 - 1 month = Feb 28/29).
pub fn months_before(date: NaiveDate, months: u32) -> NaiveDate {
    date.checked_sub_months(Months::new(months))
        .expect("date arithmetic stays within chrono's range")
}

pub fn months_after(date: NaiveDate, months: u32) -> NaiveDate {
    date.checked_add_months(Months::new(months))
        .expect("date arithmetic stays within chrono's range")
}

pub fn start_of_day(date: NaiveDate) -> DateTime<Utc> {
    date.and_hms_opt(0, 0, 0).expect("midnight exists").and_utc()
}

/// Everything known about one company at one prediction date. Lower bounds
/// are inclusive and the prediction date itself is always excluded.
#[derive(Debug, Clone, Copy)]
pub struct WindowedView<'a> {
    pub company: &'a CompanyRecord,
    pub observation: &'a ObservationPoint,
    pub rounds: &'a [FundingRound],
    pub press: &'a [PressReference],
    pub tweets: &'a [TweetRecord],
    /// Latest search issued no later than the prediction date. Its
    /// `query_date` is the exclusive end of the result date range.
    pub search: Option<&'a SearchResponse>,
    pub tweet_range: (DateTime<Utc>, DateTime<Utc>),
    pub search_range: (NaiveDate, NaiveDate),
}

impl WindowedView<'_> {
    pub fn prediction_date(&self) -> NaiveDate {
        self.observation.prediction_date
    }
}

pub fn apply_time_window<'a>(corpus: &'a Corpus, obs: &'a ObservationPoint) -> Result<WindowedView<'a>> {
    let company = corpus.company(&obs.company_id)?;
    let pred = obs.prediction_date;
    if pred < company.founded_on {
        return Err(Error::InvalidObservation(format!(
            "{} predicted at {pred}, before founding on {}",
            obs.company_id, company.founded_on
        )));
    }

    let rounds = corpus.rounds_of(&obs.company_id);
    let rounds = &rounds[..rounds.partition_point(|r| r.announced_on < pred)];

    let press = corpus.press_of(&obs.company_id);
    let press = &press[..press.partition_point(|p| p.published_on < pred)];

    let tweet_start = start_of_day(months_before(pred, TWEET_LOOKBACK_MONTHS));
    let tweet_end = start_of_day(pred);
    let tweets = corpus.tweets_of(&obs.company_id);
    let lo = tweets.partition_point(|t| t.created_at < tweet_start);
    let hi = tweets.partition_point(|t| t.created_at < tweet_end);
    let tweets = &tweets[lo..hi.max(lo)];

    let searches = corpus.searches_of(&obs.company_id);
    let search = searches[..searches.partition_point(|s| s.query_date <= pred)].last();

    Ok(WindowedView {
        company,
        observation: obs,
        rounds,
        press,
        tweets,
        search,
        tweet_range: (tweet_start, tweet_end),
        search_range: (months_before(company.founded_on, SEARCH_LOOKBACK_MONTHS), pred),
    })
}
