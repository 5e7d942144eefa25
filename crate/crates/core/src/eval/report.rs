//! Aligned text tables and CSV files for experiment output.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// A table whose every rendering carries the run seed and manifest hash.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub title: String,
    pub seed: u64,
    pub manifest_hash: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

pub fn fmt4(v: f64) -> String {
    format!("{v:.4}")
}

pub fn fmt_opt4(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), fmt4)
}

impl Report {
    pub fn new(title: impl Into<String>, seed: u64, manifest_hash: impl Into<String>, header: &[&str]) -> Self {
        Self {
            title: title.into(),
            seed,
            manifest_hash: manifest_hash.into(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_text(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(String::len).collect();
        for r in &self.rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.len());
            }
        }
        let line = |cells: &[String]| {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
        };
        let mut out = format!("{}\nseed: {}  manifest: {}\n\n", self.title, self.seed, self.manifest_hash);
        out.push_str(&line(&self.header));
        out.push('\n');
        out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * widths.len().saturating_sub(1)));
        out.push('\n');
        for r in &self.rows {
            out.push_str(&line(r));
            out.push('\n');
        }
        out
    }

    /// CSV with `seed` and `manifest_hash` appended to every row.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = self.header.clone();
        header.extend(["seed".to_string(), "manifest_hash".to_string()]);
        w.write_record(&header).expect("in-memory write");
        for r in &self.rows {
            let mut rec = r.clone();
            rec.extend([self.seed.to_string(), self.manifest_hash.clone()]);
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }

    /// Writes `<stem>.txt` and `<stem>.csv` into `dir`.
    pub fn write(&self, dir: impl AsRef<Path>, stem: &str) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
        for (ext, body) in [("txt", self.to_text()), ("csv", self.to_csv())] {
            let path = dir.join(format!("{stem}.{ext}"));
            fs::write(&path, body).map_err(|e| Error::io(path.display().to_string(), e))?;
        }
        Ok(())
    }
}
