use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, NaiveDate, Utc};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompanyStatus {
    Active,
    Closed,
    Acquired,
    Ipo,
}

impl CompanyStatus {
    pub const ALL: [CompanyStatus; 4] = [Self::Active, Self::Closed, Self::Acquired, Self::Ipo];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Active => "active",
            Self::Closed => "closed",
            Self::Acquired => "acquired",
            Self::Ipo => "ipo",
        }
    }
}

impl FromStr for CompanyStatus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| format!("unknown status `{s}`"))
    }
}

/// Funding stage, ordered from earliest to latest so that a stage floor is a
/// plain `>=` comparison. `Other` sorts lowest: it never satisfies a floor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FundingStage {
    Other,
    Angel,
    Seed,
    SeriesA,
    SeriesB,
    SeriesCPlus,
}

impl FundingStage {
    pub const ALL: [FundingStage; 6] = [
        Self::Other,
        Self::Angel,
        Self::Seed,
        Self::SeriesA,
        Self::SeriesB,
        Self::SeriesCPlus,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Angel => "angel",
            Self::Seed => "seed",
            Self::SeriesA => "series_a",
            Self::SeriesB => "series_b",
            Self::SeriesCPlus => "series_c_plus",
            Self::Other => "other",
        }
    }

    pub fn is_early(self) -> bool {
        matches!(self, Self::Angel | Self::Seed)
    }
}

impl FromStr for FundingStage {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| format!("unknown funding stage `{s}`"))
    }
}

impl fmt::Display for FundingStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Headquarter hub flags: California, New York, Texas, any other hub.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HubFlags {
    pub ca: bool,
    pub ny: bool,
    pub tx: bool,
    pub other: bool,
}

impl HubFlags {
    pub fn as_array(&self) -> [bool; 4] {
        [self.ca, self.ny, self.tx, self.other]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompanyRecord {
    pub company_id: String,
    pub name: String,
    pub description: String,
    pub founded_on: NaiveDate,
    pub founder_count: u32,
    pub industries: Vec<String>,
    pub website_url: String,
    pub twitter: Option<String>,
    pub facebook: Option<String>,
    pub linkedin: Option<String>,
    pub country: String,
    pub state: String,
    pub hubs: HubFlags,
    pub status: CompanyStatus,
}

impl CompanyRecord {
    pub fn social_account_count(&self) -> usize {
        [&self.twitter, &self.facebook, &self.linkedin]
            .iter()
            .filter(|h| h.as_deref().is_some_and(|s| !s.is_empty()))
            .count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FundingRound {
    pub company_id: String,
    pub announced_on: NaiveDate,
    pub amount_usd: Option<f64>,
    pub stage: FundingStage,
    pub investor_ids: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PressReference {
    pub company_id: String,
    pub title: String,
    pub publisher: String,
    pub published_on: NaiveDate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchItem {
    pub link: String,
    pub title: String,
    pub snippet: String,
}

pub const MAX_SEARCH_ITEMS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResponse {
    pub company_id: String,
    pub query_date: NaiveDate,
    pub total_results: u64,
    pub items: Vec<SearchItem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TweetRecord {
    pub tweet_id: String,
    pub company_id: String,
    /// Posting account. Empty when the source did not report it.
    #[serde(default)]
    pub author_id: String,
    pub author_is_company: bool,
    /// Reply to a tweet posted by the company account.
    #[serde(default)]
    pub reply_to_company: bool,
    pub created_at: DateTime<Utc>,
    pub text: String,
    pub like_count: u64,
    pub retweet_count: u64,
    pub reply_count: u64,
    pub quote_count: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language_hint: Option<String>,
}

/// A company at a prediction date (January 1 of some year).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ObservationPoint {
    pub company_id: String,
    pub prediction_date: NaiveDate,
}

impl ObservationPoint {
    pub fn new(company_id: impl Into<String>, prediction_date: NaiveDate) -> Self {
        Self {
            company_id: company_id.into(),
            prediction_date,
        }
    }
}
