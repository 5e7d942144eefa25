use super::types::CompanyRecord;
use crate::error::{Error, Result};

/// Builds the tweet search query for a company: tweets containing the
/// website, posted by the account, reposting it, or mentioning it. Retweets
/// are always excluded.
pub fn build_tweet_query(company: &CompanyRecord) -> Result<String> {
    let site = normalize_site(&company.website_url);
    let handle = company
        .twitter
        .as_deref()
        .map(|h| h.trim().trim_start_matches('@'))
        .filter(|h| !h.is_empty());

    let mut clauses = Vec::with_capacity(4);
    if let Some(site) = site {
        clauses.push(site.to_string());
    }
    if let Some(h) = handle {
        clauses.push(format!("from:{h}"));
        clauses.push(format!("url:{h}"));
        clauses.push(format!("@{h}"));
    }
    if clauses.is_empty() {
        return Err(Error::EmptyQuery);
    }
    Ok(format!("{} -is:retweet", clauses.join(" OR ")))
}

fn normalize_site(url: &str) -> Option<&str> {
    let s = url.trim();
    let s = s
        .strip_prefix("https://")
        .or_else(|| s.strip_prefix("http://"))
        .unwrap_or(s);
    let s = s.trim_end_matches('/');
    (!s.is_empty()).then_some(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::test_support::company;

    #[test]
    fn site_and_handle() {
        let mut c = company("c1");
        c.website_url = "acme.com".into();
        c.twitter = Some("acme".into());
        assert_eq!(
            build_tweet_query(&c).unwrap(),
            "acme.com OR from:acme OR url:acme OR @acme -is:retweet"
        );
    }

    #[test]
    fn handle_only() {
        let mut c = company("c1");
        c.website_url = String::new();
        c.twitter = Some("@acme".into());
        assert_eq!(
            build_tweet_query(&c).unwrap(),
            "from:acme OR url:acme OR @acme -is:retweet"
        );
    }

    #[test]
    fn site_only_strips_scheme() {
        let mut c = company("c1");
        c.website_url = "https://acme.com/".into();
        c.twitter = None;
        assert_eq!(build_tweet_query(&c).unwrap(), "acme.com -is:retweet");
    }

    #[test]
    fn nothing_to_query() {
        let mut c = company("c1");
        c.website_url = " ".into();
        c.twitter = Some(String::new());
        assert!(matches!(build_tweet_query(&c), Err(Error::EmptyQuery)));
    }
}
