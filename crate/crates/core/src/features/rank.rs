use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{CompanyRecord, PressReference, SearchResponse};

/// Most frequent names, split into the top 10 and top 50.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublisherRank {
    /// Names by descending frequency, ties by name.
    pub ordered: Vec<String>,
    pub top10: BTreeSet<String>,
    pub top50: BTreeSet<String>,
}

impl PublisherRank {
    fn from_counts(counts: BTreeMap<String, usize>) -> Self {
        let mut ordered: Vec<(String, usize)> = counts.into_iter().collect();
        ordered.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        let ordered: Vec<String> = ordered.into_iter().map(|(n, _)| n).collect();
        Self {
            top10: ordered.iter().take(10).cloned().collect(),
            top50: ordered.iter().take(50).cloned().collect(),
            ordered,
        }
    }

    pub fn rank_of(&self, name: &str) -> Option<usize> {
        self.ordered.iter().position(|n| n == name).map(|i| i + 1)
    }
}

pub fn rank_publishers(press: &[PressReference]) -> Result<PublisherRank> {
    if press.is_empty() {
        return Err(Error::EmptyCorpus("no press references to rank publishers".into()));
    }
    let mut counts = BTreeMap::new();
    for p in press {
        *counts.entry(p.publisher.clone()).or_default() += 1;
    }
    Ok(PublisherRank::from_counts(counts))
}

/// Most frequent result domains across searches; same layout as the
/// publisher ranking.
pub fn rank_sites<'a>(searches: impl IntoIterator<Item = &'a SearchResponse>) -> PublisherRank {
    let mut counts = BTreeMap::new();
    for s in searches {
        for item in &s.items {
            if let Some(domain) = registrable_domain(&item.link) {
                *counts.entry(domain).or_default() += 1;
            }
        }
    }
    PublisherRank::from_counts(counts)
}

/// Lowercase alphanumerics of a publisher name, compared against the first
/// label of a result's domain.
pub fn publisher_key(name: &str) -> String {
    name.chars().filter(char::is_ascii_alphanumeric).map(|c| c.to_ascii_lowercase()).collect()
}

fn split_url(url: &str) -> (String, String) {
    let rest = url.trim();
    let rest = rest.split_once("://").map_or(rest, |(_, r)| r);
    let (host, path) = match rest.find(['/', '?', '#']) {
        Some(i) => (&rest[..i], &rest[i..]),
        None => (rest, ""),
    };
    let host = host.rsplit('@').next().unwrap_or(host);
    let host = host.split(':').next().unwrap_or(host).to_ascii_lowercase();
    let host = host.strip_prefix("www.").unwrap_or(&host).to_string();
    (host, path.to_ascii_lowercase())
}

const SECOND_LEVEL: &[&str] = &["co", "com", "org", "net", "ac", "gov", "edu"];

/// `news.bbc.co.uk` → `bbc.co.uk`; `blog.acme.com` → `acme.com`.
pub fn registrable_domain(url: &str) -> Option<String> {
    let (host, _) = split_url(url);
    let labels: Vec<&str> = host.split('.').filter(|l| !l.is_empty()).collect();
    if labels.len() < 2 {
        return None;
    }
    let n = labels.len();
    let keep = if n >= 3 && labels[n - 1].len() == 2 && SECOND_LEVEL.contains(&labels[n - 2]) {
        3
    } else {
        2
    };
    Some(labels[n - keep..].join("."))
}

/// Profile URL prefixes (host, path) for the company's social handles.
fn social_prefixes(company: &CompanyRecord) -> Vec<(String, String)> {
    let mut out = Vec::new();
    let mut push = |handle: &Option<String>, hosts: &[&str], path_prefix: &str| {
        let Some(h) = handle.as_deref().map(str::trim).filter(|h| !h.is_empty()) else {
            return;
        };
        if h.contains('/') {
            let (host, path) = split_url(h);
            out.push((host, path.trim_end_matches('/').to_string()));
        } else {
            let h = h.trim_start_matches('@').to_ascii_lowercase();
            for host in hosts {
                out.push((host.to_string(), format!("{path_prefix}/{h}")));
            }
        }
    };
    push(&company.twitter, &["twitter.com", "x.com"], "");
    push(&company.facebook, &["facebook.com"], "");
    push(&company.linkedin, &["linkedin.com"], "/company");
    out
}

fn path_has_prefix(path: &str, prefix: &str) -> bool {
    path.strip_prefix(prefix).is_some_and(|rest| rest.is_empty() || rest.starts_with(['/', '?', '#']))
}

/// Links to the company's own site or social profiles.
pub fn own_link_count<'a>(company: &CompanyRecord, links: impl IntoIterator<Item = &'a str>) -> usize {
    let site = registrable_domain(&company.website_url);
    let social = social_prefixes(company);
    links
        .into_iter()
        .filter(|link| {
            let (host, path) = split_url(link);
            if site.is_some() && registrable_domain(link) == site {
                return true;
            }
            social.iter().any(|(h, p)| *h == host && path_has_prefix(&path, p))
        })
        .count()
}
