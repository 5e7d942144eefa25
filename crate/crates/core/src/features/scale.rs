use serde::{Deserialize, Serialize};

use super::manifest::{FeatureKind, FeatureManifest};
use super::matrix::{FeatureValue, FeatureVector};
use crate::error::{Error, Result};

/// Per-column training range of the numeric features; `None` for
/// categorical and text columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalerParams {
    pub ranges: Vec<Option<(f64, f64)>>,
}

pub fn fit_minmax(manifest: &FeatureManifest, rows: &[FeatureVector]) -> Result<ScalerParams> {
    if rows.is_empty() {
        return Err(Error::EmptyCorpus("cannot fit a scaler on zero rows".into()));
    }
    let ranges = manifest
        .features()
        .iter()
        .enumerate()
        .map(|(j, d)| {
            (d.kind == FeatureKind::Numeric).then(|| {
                rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
                    let v = r.num(j);
                    (lo.min(v), hi.max(v))
                })
            })
        })
        .collect();
    Ok(ScalerParams { ranges })
}

impl ScalerParams {
    /// Maps a value into `[0, 1]`: clipped outside the training range, 0 for
    /// a constant column.
    pub fn scale_value(&self, column: usize, v: f64) -> f64 {
        match self.ranges[column] {
            Some((lo, hi)) if hi > lo => ((v - lo) / (hi - lo)).clamp(0.0, 1.0),
            Some(_) => 0.0,
            None => v,
        }
    }

    pub fn apply(&self, rows: &[FeatureVector]) -> Result<Vec<FeatureVector>> {
        rows.iter()
            .map(|r| {
                if r.values.len() != self.ranges.len() {
                    return Err(Error::Schema(format!(
                        "scaler expects {} columns, row has {}",
                        self.ranges.len(),
                        r.values.len()
                    )));
                }
                let mut out = r.clone();
                for (j, v) in out.values.iter_mut().enumerate() {
                    if let (Some(_), FeatureValue::Num(x)) = (self.ranges[j], &*v) {
                        *v = FeatureValue::Num(self.scale_value(j, *x));
                    }
                }
                Ok(out)
            })
            .collect()
    }
}

pub fn apply_minmax(params: &ScalerParams, rows: &[FeatureVector]) -> Result<Vec<FeatureVector>> {
    params.apply(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::manifest::{FeatureCategory, FeatureDescriptor};

    fn manifest() -> FeatureManifest {
        FeatureManifest::new(vec![
            FeatureDescriptor {
                name: "x".into(),
                category: FeatureCategory::General,
                kind: FeatureKind::Numeric,
            },
            FeatureDescriptor {
                name: "c".into(),
                category: FeatureCategory::General,
                kind: FeatureKind::Numeric,
            },
        ])
        .unwrap()
    }

    fn row(x: f64, c: f64) -> FeatureVector {
        FeatureVector {
            company_id: "c".into(),
            prediction_date: "2021-01-01".parse().unwrap(),
            values: vec![FeatureValue::Num(x), FeatureValue::Num(c)],
            missing: vec![false; 2],
        }
    }

    #[test]
    fn examples() {
        let train = [row(2.0, 5.0), row(4.0, 5.0), row(6.0, 5.0)];
        let p = fit_minmax(&manifest(), &train).unwrap();
        let scaled = apply_minmax(&p, &train).unwrap();
        let xs: Vec<f64> = scaled.iter().map(|r| r.num(0)).collect();
        assert_eq!(xs, [0.0, 0.5, 1.0]);
        assert!(scaled.iter().all(|r| r.num(1) == 0.0));
        let test = apply_minmax(&p, &[row(8.0, 7.0), row(-1.0, 5.0)]).unwrap();
        assert_eq!(test[0].num(0), 1.0);
        assert_eq!(test[1].num(0), 0.0);
    }

    #[test]
    fn empty_fit() {
        assert!(matches!(fit_minmax(&manifest(), &[]), Err(Error::EmptyCorpus(_))));
    }
}
