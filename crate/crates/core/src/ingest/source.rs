//! Source abstraction. The fixture reader is the only built-in backend; live
//! clients for the paid APIs implement [`DataSource`] out of tree and read
//! their credentials from the environment.

use std::path::PathBuf;

use chrono::{DateTime, NaiveDate, Utc};

use super::corpus::{load_corpus, Corpus};
use super::types::{CompanyRecord, FundingRound, PressReference, SearchResponse, TweetRecord};
use crate::error::{Error, Result};

pub const TWITTER_TOKEN_ENV: &str = "TWITTER_BEARER_TOKEN";
pub const SEARCH_KEY_ENV: &str = "SEARCH_API_KEY";
pub const CRUNCHBASE_KEY_ENV: &str = "CB_API_KEY";

pub trait DataSource {
    fn company(&self, company_id: &str) -> Result<CompanyRecord>;
    fn funding_rounds(&self, company_id: &str) -> Result<Vec<FundingRound>>;
    fn press_references(&self, company_id: &str) -> Result<Vec<PressReference>>;
    /// Search for `company` restricted to results published in `[start, end)`.
    fn search(&self, company: &CompanyRecord, start: NaiveDate, end: NaiveDate) -> Result<SearchResponse>;
    fn tweets(&self, query: &str, company_id: &str, start: DateTime<Utc>, end: DateTime<Utc>)
        -> Result<Vec<TweetRecord>>;
}

/// Credentials for live mode. Absent variables leave the field empty.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LiveCredentials {
    pub twitter_bearer_token: Option<String>,
    pub search_api_key: Option<String>,
    pub crunchbase_api_key: Option<String>,
}

impl LiveCredentials {
    pub fn from_env() -> Self {
        let var = |k: &str| std::env::var(k).ok().filter(|v| !v.is_empty());
        Self {
            twitter_bearer_token: var(TWITTER_TOKEN_ENV),
            search_api_key: var(SEARCH_KEY_ENV),
            crunchbase_api_key: var(CRUNCHBASE_KEY_ENV),
        }
    }

    pub fn is_complete(&self) -> bool {
        self.twitter_bearer_token.is_some()
            && self.search_api_key.is_some()
            && self.crunchbase_api_key.is_some()
    }
}

/// Serves requests from an on-disk fixture directory.
#[derive(Debug, Clone)]
pub struct FixtureSource {
    pub root: PathBuf,
    corpus: Corpus,
}

impl FixtureSource {
    pub fn open(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        let corpus = load_corpus(&root)?;
        Ok(Self { root, corpus })
    }

    pub fn corpus(&self) -> &Corpus {
        &self.corpus
    }
}

impl DataSource for FixtureSource {
    fn company(&self, company_id: &str) -> Result<CompanyRecord> {
        self.corpus.company(company_id).cloned()
    }

    fn funding_rounds(&self, company_id: &str) -> Result<Vec<FundingRound>> {
        self.corpus.company(company_id)?;
        Ok(self.corpus.rounds_of(company_id).to_vec())
    }

    fn press_references(&self, company_id: &str) -> Result<Vec<PressReference>> {
        self.corpus.company(company_id)?;
        Ok(self.corpus.press_of(company_id).to_vec())
    }

    fn search(&self, company: &CompanyRecord, _start: NaiveDate, end: NaiveDate) -> Result<SearchResponse> {
        self.corpus
            .searches_of(&company.company_id)
            .iter()
            .rev()
            .find(|s| s.query_date <= end)
            .cloned()
            .ok_or_else(|| Error::EmptyCorpus(format!("no search fixture for {} by {end}", company.company_id)))
    }

    fn tweets(
        &self,
        _query: &str,
        company_id: &str,
        start: DateTime<Utc>,
        end: DateTime<Utc>,
    ) -> Result<Vec<TweetRecord>> {
        self.corpus.company(company_id)?;
        Ok(self
            .corpus
            .tweets_of(company_id)
            .iter()
            .filter(|t| t.created_at >= start && t.created_at < end)
            .cloned()
            .collect())
    }
}
