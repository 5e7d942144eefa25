//! Milestone topics for headlines, tweets and search snippets.

mod model;
mod synth;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use model::{
    classify_headline, evaluate_topic_classifier, train_topic_classifier, ClassMetrics, TopicConfig, TopicMetrics,
    TopicModel, MIN_TRAINING_EXAMPLES,
};
pub use synth::{synthetic_headline, synthetic_headlines, MARKERS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TopicLabel {
    FundingEvent,
    MergerAcquisition,
    GeoExpansion,
    ProductLaunch,
    Award,
    ManagementChange,
    Other,
}

impl TopicLabel {
    pub const ALL: [TopicLabel; 7] = [
        Self::FundingEvent,
        Self::MergerAcquisition,
        Self::GeoExpansion,
        Self::ProductLaunch,
        Self::Award,
        Self::ManagementChange,
        Self::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::FundingEvent => "funding_event",
            Self::MergerAcquisition => "merger_acquisition",
            Self::GeoExpansion => "geo_expansion",
            Self::ProductLaunch => "product_launch",
            Self::Award => "award",
            Self::ManagementChange => "management_change",
            Self::Other => "other",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl FromStr for TopicLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown topic label `{s}`")))
    }
}

impl fmt::Display for TopicLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeadlineExample {
    pub text: String,
    pub label: TopicLabel,
}

pub const HEADLINES_FILE: &str = "headlines.csv";

#[derive(Deserialize)]
struct HeadlineRow {
    text: String,
    label: String,
}

/// Reads a `text,label` CSV.
pub fn load_headlines(path: impl AsRef<Path>) -> Result<Vec<HeadlineExample>> {
    let path = path.as_ref();
    if !path.exists() {
        return Err(Error::MissingTable(path.to_path_buf()));
    }
    let mut reader = csv::Reader::from_path(path).map_err(|e| Error::parse(path, 0, e.to_string()))?;
    let mut out = Vec::new();
    for (i, row) in reader.deserialize::<HeadlineRow>().enumerate() {
        let line = i as u64 + 2;
        let row = row.map_err(|e| Error::parse(path, line, e.to_string()))?;
        if row.text.trim().is_empty() {
            return Err(Error::parse(path, line, "empty headline text"));
        }
        let label = row.label.parse().map_err(|e: Error| Error::parse(path, line, e.to_string()))?;
        out.push(HeadlineExample { text: row.text, label });
    }
    Ok(out)
}

pub fn write_headlines(path: impl AsRef<Path>, examples: &[HeadlineExample]) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::io(path.display().to_string(), e.into()))?;
    let io = |e: csv::Error| Error::io(path.display().to_string(), e.into());
    w.write_record(["text", "label"]).map_err(io)?;
    for ex in examples {
        w.write_record([ex.text.as_str(), ex.label.as_str()]).map_err(io)?;
    }
    w.flush().map_err(|e| Error::io(path.display().to_string(), e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_round_trip() {
        assert_eq!(TopicLabel::ALL.len(), 7);
        for l in TopicLabel::ALL {
            assert_eq!(l.as_str().parse::<TopicLabel>().unwrap(), l);
        }
        assert!("funding".parse::<TopicLabel>().is_err());
    }

    #[test]
    fn headline_csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(HEADLINES_FILE);
        let ex = vec![
            HeadlineExample {
                text: "Acme raises $5M, led by \"Big\" Ventures".into(),
                label: TopicLabel::FundingEvent,
            },
            HeadlineExample {
                text: "Weather today".into(),
                label: TopicLabel::Other,
            },
        ];
        write_headlines(&path, &ex).unwrap();
        assert_eq!(load_headlines(&path).unwrap(), ex);
    }
}
