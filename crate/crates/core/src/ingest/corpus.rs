use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use chrono::NaiveDate;

use super::types::{
    CompanyRecord, CompanyStatus, FundingRound, HubFlags, ObservationPoint,
    PressReference, SearchResponse, TweetRecord, MAX_SEARCH_ITEMS,
};
use crate::error::{Error, Result};

pub const COMPANIES_FILE: &str = "companies.csv";
pub const ROUNDS_FILE: &str = "funding_rounds.csv";
pub const PRESS_FILE: &str = "press_references.csv";
pub const SEARCH_DIR: &str = "search";
pub const TWEETS_DIR: &str = "tweets";
pub const OBSERVATIONS_FILE: &str = "observations.csv";

/// Most recent press references kept per company.
pub const PRESS_CAP: usize = 2_000;
/// Most recent tweets kept per company.
pub const TWEET_CAP: usize = 5_000;

const COMPANY_HEADER: [&str; 17] = [
    "company_id",
    "name",
    "description",
    "founded_on",
    "founder_count",
    "industries",
    "website_url",
    "twitter",
    "facebook",
    "linkedin",
    "country",
    "state",
    "hub_ca",
    "hub_ny",
    "hub_tx",
    "hub_other",
    "status",
];
const ROUND_HEADER: [&str; 5] = ["company_id", "announced_on", "amount_usd", "stage", "investor_ids"];
const PRESS_HEADER: [&str; 4] = ["company_id", "title", "publisher", "published_on"];

/// All five source tables, keyed by company id. Per-company lists are sorted
/// chronologically and capped at load time.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Corpus {
    pub companies: BTreeMap<String, CompanyRecord>,
    pub rounds: BTreeMap<String, Vec<FundingRound>>,
    pub press: BTreeMap<String, Vec<PressReference>>,
    pub searches: BTreeMap<String, Vec<SearchResponse>>,
    pub tweets: BTreeMap<String, Vec<TweetRecord>>,
}

impl Corpus {
    /// Builds a corpus from loose records, checking cross references and
    /// applying the ordering and cap rules.
    pub fn from_parts(
        companies: Vec<CompanyRecord>,
        rounds: Vec<FundingRound>,
        press: Vec<PressReference>,
        searches: Vec<SearchResponse>,
        tweets: Vec<TweetRecord>,
    ) -> Result<Self> {
        let mut corpus = Corpus::default();
        for c in companies {
            validate_company(&c)?;
            corpus.companies.insert(c.company_id.clone(), c);
        }
        for r in rounds {
            validate_round(&r)?;
            corpus.check_ref(&r.company_id)?;
            corpus.rounds.entry(r.company_id.clone()).or_default().push(r);
        }
        for p in press {
            validate_press(&p)?;
            corpus.check_ref(&p.company_id)?;
            corpus.press.entry(p.company_id.clone()).or_default().push(p);
        }
        for s in searches {
            validate_search(&s)?;
            corpus.check_ref(&s.company_id)?;
            corpus.searches.entry(s.company_id.clone()).or_default().push(s);
        }
        for t in tweets {
            corpus.check_ref(&t.company_id)?;
            corpus.tweets.entry(t.company_id.clone()).or_default().push(t);
        }
        corpus.normalize();
        Ok(corpus)
    }

    fn check_ref(&self, company_id: &str) -> Result<()> {
        if self.companies.contains_key(company_id) {
            Ok(())
        } else {
            Err(Error::Reference(company_id.to_string()))
        }
    }

    fn normalize(&mut self) {
        for v in self.rounds.values_mut() {
            v.sort_by_key(|r| r.announced_on);
        }
        for v in self.press.values_mut() {
            v.sort_by_key(|p| p.published_on);
            keep_last(v, PRESS_CAP);
        }
        for v in self.searches.values_mut() {
            v.sort_by_key(|s| s.query_date);
        }
        for v in self.tweets.values_mut() {
            v.sort_by(|a, b| (a.created_at, &a.tweet_id).cmp(&(b.created_at, &b.tweet_id)));
            keep_last(v, TWEET_CAP);
        }
    }

    pub fn company(&self, company_id: &str) -> Result<&CompanyRecord> {
        self.companies
            .get(company_id)
            .ok_or_else(|| Error::Reference(company_id.to_string()))
    }

    pub fn rounds_of(&self, company_id: &str) -> &[FundingRound] {
        self.rounds.get(company_id).map_or(&[], Vec::as_slice)
    }

    pub fn press_of(&self, company_id: &str) -> &[PressReference] {
        self.press.get(company_id).map_or(&[], Vec::as_slice)
    }

    pub fn searches_of(&self, company_id: &str) -> &[SearchResponse] {
        self.searches.get(company_id).map_or(&[], Vec::as_slice)
    }

    pub fn tweets_of(&self, company_id: &str) -> &[TweetRecord] {
        self.tweets.get(company_id).map_or(&[], Vec::as_slice)
    }

    pub fn round_count(&self) -> usize {
        self.rounds.values().map(Vec::len).sum()
    }

    pub fn press_count(&self) -> usize {
        self.press.values().map(Vec::len).sum()
    }

    pub fn tweet_count(&self) -> usize {
        self.tweets.values().map(Vec::len).sum()
    }

    pub fn search_count(&self) -> usize {
        self.searches.values().map(Vec::len).sum()
    }
}

fn keep_last<T>(v: &mut Vec<T>, cap: usize) {
    if v.len() > cap {
        v.drain(..v.len() - cap);
    }
}

fn validate_company(c: &CompanyRecord) -> Result<()> {
    if c.company_id.is_empty() {
        return Err(Error::Config("company with empty id".into()));
    }
    Ok(())
}

fn validate_round(r: &FundingRound) -> Result<()> {
    match r.amount_usd {
        Some(a) if !(a >= 0.0 && a.is_finite()) => Err(Error::Config(format!(
            "round for `{}` has invalid amount {a}",
            r.company_id
        ))),
        _ => Ok(()),
    }
}

fn validate_press(p: &PressReference) -> Result<()> {
    if p.title.trim().is_empty() {
        return Err(Error::Config(format!("press reference for `{}` has an empty title", p.company_id)));
    }
    Ok(())
}

fn validate_search(s: &SearchResponse) -> Result<()> {
    if s.items.len() > MAX_SEARCH_ITEMS {
        return Err(Error::Config(format!(
            "search response for `{}` has {} items (max {MAX_SEARCH_ITEMS})",
            s.company_id,
            s.items.len()
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Loading
// ---------------------------------------------------------------------------

struct Row<'a> {
    file: &'a Path,
    line: u64,
    record: &'a csv::StringRecord,
    headers: &'a csv::StringRecord,
}

impl Row<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.file, self.line, msg)
    }

    fn get(&self, name: &str) -> Result<&str> {
        let idx = self
            .headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| self.err(format!("missing column `{name}`")))?;
        self.record
            .get(idx)
            .ok_or_else(|| self.err(format!("row is missing field `{name}`")))
    }

    fn non_empty(&self, name: &str) -> Result<&str> {
        let v = self.get(name)?;
        if v.trim().is_empty() {
            Err(self.err(format!("`{name}` must not be empty")))
        } else {
            Ok(v)
        }
    }

    fn optional(&self, name: &str) -> Result<Option<String>> {
        let v = self.get(name)?;
        Ok((!v.is_empty()).then(|| v.to_string()))
    }

    fn date(&self, name: &str) -> Result<NaiveDate> {
        let v = self.get(name)?;
        NaiveDate::parse_from_str(v, "%Y-%m-%d")
            .map_err(|e| self.err(format!("`{name}`: invalid date `{v}`: {e}")))
    }

    fn flag(&self, name: &str) -> Result<bool> {
        match self.get(name)? {
            "1" | "true" | "TRUE" | "True" => Ok(true),
            "0" | "false" | "FALSE" | "False" | "" => Ok(false),
            other => Err(self.err(format!("`{name}`: invalid boolean `{other}`"))),
        }
    }

    fn list(&self, name: &str) -> Result<Vec<String>> {
        Ok(split_list(self.get(name)?))
    }
}

fn split_list(v: &str) -> Vec<String> {
    v.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

fn read_csv<T>(path: &Path, mut parse: impl FnMut(&Row<'_>) -> Result<T>) -> Result<Vec<T>> {
    if !path.is_file() {
        return Err(Error::MissingTable(path.to_path_buf()));
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    let mut out = Vec::new();
    for result in reader.records() {
        let record = result.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let row = Row {
            file: path,
            line,
            record: &record,
            headers: &headers,
        };
        out.push(parse(&row)?);
    }
    Ok(out)
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path.display().to_string(), io),
        kind => Error::parse(path, line, format!("{kind:?}")),
    }
}

fn parse_company(row: &Row<'_>) -> Result<CompanyRecord> {
    let founders = row.get("founder_count")?;
    let founder_count: i64 = founders
        .trim()
        .parse()
        .map_err(|_| row.err(format!("`founder_count`: not an integer: `{founders}`")))?;
    if founder_count < 0 {
        return Err(row.err(format!("`founder_count` must be >= 0, got {founder_count}")));
    }
    let status = row.get("status")?;
    Ok(CompanyRecord {
        company_id: row.non_empty("company_id")?.to_string(),
        name: row.get("name")?.to_string(),
        description: row.get("description")?.to_string(),
        founded_on: row.date("founded_on")?,
        founder_count: u32::try_from(founder_count).map_err(|e| row.err(e.to_string()))?,
        industries: row.list("industries")?,
        website_url: row.get("website_url")?.to_string(),
        twitter: row.optional("twitter")?,
        facebook: row.optional("facebook")?,
        linkedin: row.optional("linkedin")?,
        country: row.get("country")?.to_string(),
        state: row.get("state")?.to_string(),
        hubs: HubFlags {
            ca: row.flag("hub_ca")?,
            ny: row.flag("hub_ny")?,
            tx: row.flag("hub_tx")?,
            other: row.flag("hub_other")?,
        },
        status: status.parse::<CompanyStatus>().map_err(|e| row.err(e))?,
    })
}

fn parse_round(row: &Row<'_>) -> Result<FundingRound> {
    let amount = row.get("amount_usd")?.trim();
    let amount_usd = if amount.is_empty() {
        None
    } else {
        let a: f64 = amount
            .parse()
            .map_err(|_| row.err(format!("`amount_usd`: not a number: `{amount}`")))?;
        if !(a >= 0.0 && a.is_finite()) {
            return Err(row.err(format!("`amount_usd` must be >= 0, got {a}")));
        }
        Some(a)
    };
    Ok(FundingRound {
        company_id: row.non_empty("company_id")?.to_string(),
        announced_on: row.date("announced_on")?,
        amount_usd,
        stage: row.get("stage")?.parse().map_err(|e: String| row.err(e))?,
        investor_ids: row.list("investor_ids")?,
    })
}

fn parse_press(row: &Row<'_>) -> Result<PressReference> {
    Ok(PressReference {
        company_id: row.non_empty("company_id")?.to_string(),
        title: row.non_empty("title")?.to_string(),
        publisher: row.get("publisher")?.to_string(),
        published_on: row.date("published_on")?,
    })
}

fn sorted_dir_entries(dir: &Path, ext: &str) -> Result<Vec<PathBuf>> {
    if !dir.is_dir() {
        return Err(Error::MissingTable(dir.to_path_buf()));
    }
    let mut paths = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir.display().to_string(), e))? {
        let path = entry.map_err(|e| Error::io(dir.display().to_string(), e))?.path();
        if path.extension().and_then(|e| e.to_str()) == Some(ext) {
            paths.push(path);
        }
    }
    paths.sort();
    Ok(paths)
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))
}

fn load_searches(dir: &Path) -> Result<Vec<SearchResponse>> {
    let mut out = Vec::new();
    for path in sorted_dir_entries(dir, "json")? {
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
        let (id, date) = stem
            .rsplit_once('_')
            .ok_or_else(|| Error::parse(&path, 0, "file name must be <company_id>_<YYYY-MM-DD>.json"))?;
        let date = NaiveDate::parse_from_str(date, "%Y-%m-%d")
            .map_err(|e| Error::parse(&path, 0, format!("bad date in file name: {e}")))?;
        let response: SearchResponse = serde_json::from_str(&read_to_string(&path)?)
            .map_err(|e| Error::parse(&path, e.line() as u64, e.to_string()))?;
        if response.company_id != id || response.query_date != date {
            return Err(Error::parse(&path, 1, "company_id/query_date disagree with file name"));
        }
        if response.items.len() > MAX_SEARCH_ITEMS {
            return Err(Error::parse(
                &path,
                1,
                format!("{} items exceed the limit of {MAX_SEARCH_ITEMS}", response.items.len()),
            ));
        }
        out.push(response);
    }
    Ok(out)
}

fn load_tweets(dir: &Path) -> Result<Vec<TweetRecord>> {
    let mut out = Vec::new();
    for path in sorted_dir_entries(dir, "jsonl")? {
        let id = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default().to_string();
        let file = fs::File::open(&path).map_err(|e| Error::io(path.display().to_string(), e))?;
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| Error::io(path.display().to_string(), e))?;
            if line.trim().is_empty() {
                continue;
            }
            let lineno = i as u64 + 1;
            let tweet: TweetRecord =
                serde_json::from_str(&line).map_err(|e| Error::parse(&path, lineno, e.to_string()))?;
            if tweet.company_id != id {
                return Err(Error::parse(
                    &path,
                    lineno,
                    format!("tweet belongs to `{}`, not `{id}`", tweet.company_id),
                ));
            }
            out.push(tweet);
        }
    }
    Ok(out)
}

/// Loads a fixture directory into a validated [`Corpus`].
pub fn load_corpus(dir: impl AsRef<Path>) -> Result<Corpus> {
    let dir = dir.as_ref();
    let companies = read_csv(&dir.join(COMPANIES_FILE), parse_company)?;
    let rounds = read_csv(&dir.join(ROUNDS_FILE), parse_round)?;
    let press = read_csv(&dir.join(PRESS_FILE), parse_press)?;
    let searches = load_searches(&dir.join(SEARCH_DIR))?;
    let tweets = load_tweets(&dir.join(TWEETS_DIR))?;
    Corpus::from_parts(companies, rounds, press, searches, tweets)
}

// ---------------------------------------------------------------------------
// Writing
// ---------------------------------------------------------------------------

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).map_err(|e| csv_error(path, e))
}

fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

fn date_str(d: NaiveDate) -> String {
    d.format("%Y-%m-%d").to_string()
}

/// Writes a corpus in the fixture layout understood by [`load_corpus`].
pub fn write_corpus(corpus: &Corpus, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    create_dir(dir)?;

    let path = dir.join(COMPANIES_FILE);
    let mut w = csv_writer(&path)?;
    let io = |e: csv::Error| csv_error(&path, e);
    w.write_record(COMPANY_HEADER).map_err(io)?;
    for c in corpus.companies.values() {
        let founders = c.founder_count.to_string();
        let industries = c.industries.join(";");
        w.write_record([
            c.company_id.as_str(),
            &c.name,
            &c.description,
            &date_str(c.founded_on),
            &founders,
            &industries,
            &c.website_url,
            c.twitter.as_deref().unwrap_or(""),
            c.facebook.as_deref().unwrap_or(""),
            c.linkedin.as_deref().unwrap_or(""),
            &c.country,
            &c.state,
            flag(c.hubs.ca),
            flag(c.hubs.ny),
            flag(c.hubs.tx),
            flag(c.hubs.other),
            c.status.as_str(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::io(path.display().to_string(), e))?;

    let path = dir.join(ROUNDS_FILE);
    let mut w = csv_writer(&path)?;
    let io = |e: csv::Error| csv_error(&path, e);
    w.write_record(ROUND_HEADER).map_err(io)?;
    for r in corpus.rounds.values().flatten() {
        let amount = r.amount_usd.map(|a| a.to_string()).unwrap_or_default();
        w.write_record([
            r.company_id.as_str(),
            &date_str(r.announced_on),
            &amount,
            r.stage.as_str(),
            &r.investor_ids.join(";"),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::io(path.display().to_string(), e))?;

    let path = dir.join(PRESS_FILE);
    let mut w = csv_writer(&path)?;
    let io = |e: csv::Error| csv_error(&path, e);
    w.write_record(PRESS_HEADER).map_err(io)?;
    for p in corpus.press.values().flatten() {
        w.write_record([
            p.company_id.as_str(),
            &p.title,
            &p.publisher,
            &date_str(p.published_on),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::io(path.display().to_string(), e))?;

    let search_dir = dir.join(SEARCH_DIR);
    create_dir(&search_dir)?;
    for s in corpus.searches.values().flatten() {
        let path = search_dir.join(format!("{}_{}.json", s.company_id, date_str(s.query_date)));
        let body = serde_json::to_string_pretty(s).expect("search response serializes");
        fs::write(&path, body + "\n").map_err(|e| Error::io(path.display().to_string(), e))?;
    }

    let tweet_dir = dir.join(TWEETS_DIR);
    create_dir(&tweet_dir)?;
    for (id, tweets) in &corpus.tweets {
        let path = tweet_dir.join(format!("{id}.jsonl"));
        let mut f = std::io::BufWriter::new(
            fs::File::create(&path).map_err(|e| Error::io(path.display().to_string(), e))?,
        );
        for t in tweets {
            let line = serde_json::to_string(t).expect("tweet serializes");
            writeln!(f, "{line}").map_err(|e| Error::io(path.display().to_string(), e))?;
        }
        f.flush().map_err(|e| Error::io(path.display().to_string(), e))?;
    }
    Ok(())
}

/// Reads `company_id,prediction_date` rows.
pub fn load_observations(path: impl AsRef<Path>) -> Result<Vec<ObservationPoint>> {
    read_csv(path.as_ref(), |row| {
        Ok(ObservationPoint {
            company_id: row.non_empty("company_id")?.to_string(),
            prediction_date: row.date("prediction_date")?,
        })
    })
}

pub fn write_observations(path: impl AsRef<Path>, observations: &[ObservationPoint]) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv_writer(path)?;
    let io = |e: csv::Error| csv_error(path, e);
    w.write_record(["company_id", "prediction_date"]).map_err(io)?;
    for o in observations {
        w.write_record([o.company_id.as_str(), &date_str(o.prediction_date)])
            .map_err(io)?;
    }
    w.flush().map_err(|e| Error::io(path.display().to_string(), e))
}

/// Observation points for a corpus without an explicit observation table:
/// January 1 of every year after founding, up to and including `through`.
pub fn default_observations(corpus: &Corpus, through: NaiveDate) -> Vec<ObservationPoint> {
    use chrono::Datelike;
    let mut out = Vec::new();
    for c in corpus.companies.values() {
        for year in c.founded_on.year() + 1..=through.year() {
            let d = NaiveDate::from_ymd_opt(year, 1, 1).expect("January 1 exists");
            if d <= through {
                out.push(ObservationPoint::new(c.company_id.clone(), d));
            }
        }
    }
    out
}
