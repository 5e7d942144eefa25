use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::manifest::{FeatureKind, FeatureManifest};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FeatureValue {
    Num(f64),
    Cat(String),
    Text(String),
}

impl FeatureValue {
    pub fn as_num(&self) -> Option<f64> {
        match self {
            Self::Num(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Self::Cat(s) | Self::Text(s) => Some(s),
            Self::Num(_) => None,
        }
    }

    pub fn kind(&self) -> FeatureKind {
        match self {
            Self::Num(_) => FeatureKind::Numeric,
            Self::Cat(_) => FeatureKind::Categorical,
            Self::Text(_) => FeatureKind::Text,
        }
    }

    fn to_field(&self) -> String {
        match self {
            Self::Num(v) => v.to_string(),
            Self::Cat(s) | Self::Text(s) => s.clone(),
        }
    }
}

/// One observation's features in manifest order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub company_id: String,
    pub prediction_date: NaiveDate,
    pub values: Vec<FeatureValue>,
    /// Set where a source was unavailable and the value is a default.
    pub missing: Vec<bool>,
}

impl FeatureVector {
    pub fn num(&self, i: usize) -> f64 {
        self.values[i].as_num().unwrap_or(0.0)
    }

    pub fn select(&self, columns: &[usize]) -> Self {
        Self {
            company_id: self.company_id.clone(),
            prediction_date: self.prediction_date,
            values: columns.iter().map(|&i| self.values[i].clone()).collect(),
            missing: columns.iter().map(|&i| self.missing[i]).collect(),
        }
    }
}

pub fn check_row(manifest: &FeatureManifest, row: &FeatureVector) -> Result<()> {
    if row.values.len() != manifest.len() || row.missing.len() != manifest.len() {
        return Err(Error::Schema(format!(
            "row for {} has {} values, manifest has {}",
            row.company_id,
            row.values.len(),
            manifest.len()
        )));
    }
    for (v, d) in row.values.iter().zip(manifest.features()) {
        if v.kind() != d.kind {
            return Err(Error::Schema(format!(
                "column `{}` expects {} but row for {} holds {}",
                d.name,
                d.kind,
                row.company_id,
                v.kind()
            )));
        }
    }
    Ok(())
}

/// Feature rows with binary labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub manifest: FeatureManifest,
    pub rows: Vec<FeatureVector>,
    pub labels: Vec<u8>,
}

impl Dataset {
    pub fn new(manifest: FeatureManifest, rows: Vec<FeatureVector>, labels: Vec<u8>) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::Schema(format!("{} rows but {} labels", rows.len(), labels.len())));
        }
        if let Some(bad) = labels.iter().find(|&&l| l > 1) {
            return Err(Error::Schema(format!("label {bad} is not binary")));
        }
        for r in &rows {
            check_row(&manifest, r)?;
        }
        Ok(Self { manifest, rows, labels })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn positives(&self) -> usize {
        self.labels.iter().filter(|&&l| l == 1).count()
    }

    pub fn labels_f64(&self) -> Vec<f64> {
        self.labels.iter().map(|&l| l as f64).collect()
    }

    pub fn subset(&self, rows: &[usize]) -> Self {
        Self {
            manifest: self.manifest.clone(),
            rows: rows.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: rows.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    pub fn select_columns(&self, columns: &[usize]) -> Result<Self> {
        Ok(Self {
            manifest: self.manifest.select(columns)?,
            rows: self.rows.iter().map(|r| r.select(columns)).collect(),
            labels: self.labels.clone(),
        })
    }

    pub fn select_named(&self, names: &[&str]) -> Result<Self> {
        let cols = names
            .iter()
            .map(|n| {
                self.manifest
                    .position(n)
                    .ok_or_else(|| Error::Schema(format!("unknown feature `{n}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.select_columns(&cols)
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        write_feature_csv(path, &self.manifest, &self.rows, Some(&self.labels))
    }

    pub fn read_csv(path: impl AsRef<Path>, manifest: &FeatureManifest) -> Result<Self> {
        let path = path.as_ref();
        let (rows, labels) = read_feature_csv(path, manifest)?;
        let labels = labels.ok_or_else(|| Error::Schema(format!("{} has no label column", path.display())))?;
        Self::new(manifest.clone(), rows, labels)
    }
}

/// Header: `company_id,prediction_date,<manifest names...>[,label]`.
pub fn write_feature_csv(
    path: impl AsRef<Path>,
    manifest: &FeatureManifest,
    rows: &[FeatureVector],
    labels: Option<&[u8]>,
) -> Result<()> {
    let path = path.as_ref();
    let ioerr = |e: csv::Error| Error::io(path.display().to_string(), std::io::Error::other(e));
    let mut w = csv::Writer::from_path(path).map_err(ioerr)?;
    let mut header = vec!["company_id", "prediction_date"];
    header.extend(manifest.names());
    if labels.is_some() {
        header.push("label");
    }
    w.write_record(&header).map_err(ioerr)?;
    for (i, r) in rows.iter().enumerate() {
        let mut rec = Vec::with_capacity(header.len());
        rec.push(r.company_id.clone());
        rec.push(r.prediction_date.format("%Y-%m-%d").to_string());
        rec.extend(r.values.iter().map(FeatureValue::to_field));
        if let Some(l) = labels {
            rec.push(l[i].to_string());
        }
        w.write_record(&rec).map_err(ioerr)?;
    }
    w.flush().map_err(|e| Error::io(path.display().to_string(), e))
}

pub fn read_feature_csv(
    path: impl AsRef<Path>,
    manifest: &FeatureManifest,
) -> Result<(Vec<FeatureVector>, Option<Vec<u8>>)> {
    let path = path.as_ref();
    if !path.is_file() {
        return Err(Error::MissingTable(path.to_path_buf()));
    }
    let mut reader = csv::Reader::from_path(path).map_err(|e| Error::parse(path, 0, e.to_string()))?;
    let header = reader
        .headers()
        .map_err(|e| Error::parse(path, 1, e.to_string()))?
        .clone();
    let n = manifest.len();
    let has_label = header.len() == n + 3 && &header[n + 2] == "label";
    let names_match = (header.len() == n + 2 || has_label)
        && header.get(0) == Some("company_id")
        && header.get(1) == Some("prediction_date")
        && header.iter().skip(2).take(n).eq(manifest.names());
    if !names_match {
        return Err(Error::Schema(format!(
            "{}: header does not match the feature manifest ({} columns expected, {} found)",
            path.display(),
            n + 2,
            header.len()
        )));
    }
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| Error::parse(path, 0, e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        let prediction_date = NaiveDate::parse_from_str(&rec[1], "%Y-%m-%d")
            .map_err(|e| Error::parse(path, line, format!("prediction_date: {e}")))?;
        let mut values = Vec::with_capacity(n);
        for (j, d) in manifest.features().iter().enumerate() {
            let field = &rec[j + 2];
            values.push(match d.kind {
                FeatureKind::Numeric => FeatureValue::Num(
                    field
                        .parse()
                        .map_err(|_| Error::parse(path, line, format!("`{}`: not a number: `{field}`", d.name)))?,
                ),
                FeatureKind::Categorical => FeatureValue::Cat(field.to_string()),
                FeatureKind::Text => FeatureValue::Text(field.to_string()),
            });
        }
        if has_label {
            labels.push(match &rec[n + 2] {
                "0" => 0,
                "1" => 1,
                other => return Err(Error::parse(path, line, format!("label `{other}` is not 0/1"))),
            });
        }
        rows.push(FeatureVector {
            company_id: rec[0].to_string(),
            prediction_date,
            values,
            missing: vec![false; n],
        });
    }
    Ok((rows, has_label.then_some(labels)))
}
