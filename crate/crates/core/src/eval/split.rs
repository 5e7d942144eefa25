use chrono::NaiveDate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::Dataset;
use crate::ingest::{months_after, Corpus, FundingRound, FundingStage, ObservationPoint};

/// Paper-scale train share: 17,233 of 20,237 observations.
pub const DEFAULT_TRAIN_RATIO: f64 = 0.85;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HorizonConfig {
    pub horizon_years: u32,
    /// Minimum stage of a qualifying round.
    pub stage_floor: Option<FundingStage>,
}

impl Default for HorizonConfig {
    fn default() -> Self {
        Self {
            horizon_years: 1,
            stage_floor: None,
        }
    }
}

impl HorizonConfig {
    pub fn years(horizon_years: u32) -> Self {
        Self {
            horizon_years,
            stage_floor: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon_years < 1 {
            return Err(Error::Config("horizon must be at least one year".into()));
        }
        Ok(())
    }

    pub fn end(&self, prediction_date: NaiveDate) -> NaiveDate {
        months_after(prediction_date, 12 * self.horizon_years)
    }
}

/// 1 iff a qualifying round is announced in `[prediction_date, prediction_date + horizon)`.
pub fn label_horizon(rounds: &[FundingRound], prediction_date: NaiveDate, config: &HorizonConfig) -> u8 {
    let end = config.end(prediction_date);
    rounds.iter().any(|r| {
        r.announced_on >= prediction_date && r.announced_on < end && config.stage_floor.is_none_or(|f| r.stage >= f)
    }) as u8
}

pub fn label_observations(corpus: &Corpus, observations: &[ObservationPoint], config: &HorizonConfig) -> Vec<u8> {
    observations
        .iter()
        .map(|o| label_horizon(corpus.rounds_of(&o.company_id), o.prediction_date, config))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    /// Indices into the input, in chronological order.
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Orders observations by (date, company) and holds out the last
/// `floor(n * (1 - ratio))` of them, so no training point postdates a test
/// point.
pub fn temporal_split(observations: &[ObservationPoint], ratio: f64) -> Result<Split> {
    if !(0.0..=1.0).contains(&ratio) {
        return Err(Error::Config(format!("train ratio {ratio} outside [0, 1]")));
    }
    let mut order: Vec<usize> = (0..observations.len()).collect();
    order.sort_by(|&a, &b| {
        let (x, y) = (&observations[a], &observations[b]);
        x.prediction_date.cmp(&y.prediction_date).then_with(|| x.company_id.cmp(&y.company_id))
    });
    let n = observations.len();
    // the small epsilon keeps 10 * 0.15 from landing a hair above 1.5
    let n_test = ((n as f64 * (1.0 - ratio)) + 1e-9).floor() as usize;
    let n_test = n_test.min(n);
    let test = order.split_off(n - n_test);
    Ok(Split { train: order, test })
}

/// Resamples the minority class with replacement until both classes have
/// the same count. Original rows keep their order; draws are appended.
pub fn upsample_positive(train: &Dataset, seed: u64) -> Result<Dataset> {
    let pos: Vec<usize> = (0..train.len()).filter(|&i| train.labels[i] == 1).collect();
    let neg: Vec<usize> = (0..train.len()).filter(|&i| train.labels[i] == 0).collect();
    if pos.is_empty() || neg.is_empty() {
        return Err(Error::DegenerateTraining(format!(
            "cannot balance {} positives against {} negatives",
            pos.len(),
            neg.len()
        )));
    }
    let (minority, target) = if pos.len() <= neg.len() {
        (&pos, neg.len())
    } else {
        (&neg, pos.len())
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx: Vec<usize> = (0..train.len()).collect();
    for _ in minority.len()..target {
        idx.push(minority[rng.gen_range(0..minority.len())]);
    }
    Ok(train.subset(&idx))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> NaiveDate {
        s.parse().unwrap()
    }

    fn round(on: &str, stage: FundingStage) -> FundingRound {
        FundingRound {
            company_id: "c".into(),
            announced_on: d(on),
            amount_usd: None,
            stage,
            investor_ids: vec![],
        }
    }

    #[test]
    fn horizon_boundaries() {
        let obs = d("2020-01-01");
        let r = [round("2021-07-01", FundingStage::SeriesA)];
        assert_eq!(label_horizon(&r, obs, &HorizonConfig::years(1)), 0);
        assert_eq!(label_horizon(&r, obs, &HorizonConfig::years(2)), 1);
        let exact = [round("2021-01-01", FundingStage::SeriesA)];
        assert_eq!(label_horizon(&exact, obs, &HorizonConfig::years(1)), 0);
        let at_start = [round("2020-01-01", FundingStage::SeriesA)];
        assert_eq!(label_horizon(&at_start, obs, &HorizonConfig::years(1)), 1);
        let seed = [round("2020-07-01", FundingStage::Seed)];
        let floor = HorizonConfig {
            horizon_years: 1,
            stage_floor: Some(FundingStage::SeriesA),
        };
        assert_eq!(label_horizon(&seed, obs, &floor), 0);
    }

    #[test]
    fn split_sizes_and_order() {
        let obs: Vec<ObservationPoint> = (0..10)
            .map(|i| ObservationPoint::new(format!("c{i}"), d(&format!("{}-01-01", 2010 + i))))
            .collect();
        let s = temporal_split(&obs, 0.85).unwrap();
        assert_eq!((s.train.len(), s.test.len()), (9, 1));
        assert_eq!(s.test, vec![9]);
    }

    #[test]
    fn later_point_of_a_test_company_is_never_trained() {
        let obs = vec![
            ObservationPoint::new("a", d("2021-01-01")),
            ObservationPoint::new("a", d("2019-01-01")),
            ObservationPoint::new("b", d("2018-01-01")),
            ObservationPoint::new("b", d("2020-01-01")),
        ];
        let s = temporal_split(&obs, 0.5).unwrap();
        assert_eq!(s.test, vec![3, 0]);
    }
}
