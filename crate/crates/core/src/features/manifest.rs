use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

const CANONICAL: &str = include_str!("../../data/manifest.csv");

pub const CANONICAL_WIDTH: usize = 171;
pub const CANONICAL_CATEGORICAL: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureCategory {
    General,
    Funding,
    News,
    Google,
    Twitter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureKind {
    Numeric,
    Categorical,
    Text,
}

macro_rules! str_enum {
    ($t:ty { $($v:ident => $s:literal),* $(,)? }) => {
        impl $t {
            pub fn as_str(self) -> &'static str {
                match self { $(Self::$v => $s),* }
            }
        }
        impl FromStr for $t {
            type Err = String;
            fn from_str(s: &str) -> std::result::Result<Self, String> {
                match s { $($s => Ok(Self::$v),)* other => Err(format!("unknown value `{other}`")) }
            }
        }
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

str_enum!(FeatureCategory {
    General => "general",
    Funding => "funding",
    News => "news",
    Google => "google",
    Twitter => "twitter",
});

str_enum!(FeatureKind {
    Numeric => "numeric",
    Categorical => "categorical",
    Text => "text",
});

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureDescriptor {
    pub name: String,
    pub category: FeatureCategory,
    pub kind: FeatureKind,
}

/// Ordered column schema. The canonical manifest ships with the crate; other
/// manifests arise by selecting columns for ablations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<FeatureDescriptor>", into = "Vec<FeatureDescriptor>")]
pub struct FeatureManifest {
    features: Vec<FeatureDescriptor>,
    positions: HashMap<String, usize>,
}

impl FeatureManifest {
    pub fn new(features: Vec<FeatureDescriptor>) -> Result<Self> {
        let mut positions = HashMap::with_capacity(features.len());
        for (i, f) in features.iter().enumerate() {
            if positions.insert(f.name.clone(), i).is_some() {
                return Err(Error::Schema(format!("duplicate feature name `{}`", f.name)));
            }
        }
        Ok(Self { features, positions })
    }

    /// The 171-column schema bundled with the crate.
    pub fn canonical() -> Self {
        let m = Self::parse(CANONICAL).expect("bundled manifest parses");
        debug_assert_eq!(m.len(), CANONICAL_WIDTH);
        m
    }

    /// Parses `index,name,category,kind` rows.
    pub fn parse(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
        let mut features = Vec::new();
        for (i, rec) in reader.records().enumerate() {
            let line = i as u64 + 2;
            let rec = rec.map_err(|e| Error::parse("manifest", line, e.to_string()))?;
            if rec.len() != 4 {
                return Err(Error::parse("manifest", line, "expected index,name,category,kind"));
            }
            let index: usize = rec[0]
                .parse()
                .map_err(|_| Error::parse("manifest", line, "bad index"))?;
            if index != i {
                return Err(Error::parse("manifest", line, format!("index {index} out of order")));
            }
            features.push(FeatureDescriptor {
                name: rec[1].to_string(),
                category: rec[2].parse().map_err(|e: String| Error::parse("manifest", line, e))?,
                kind: rec[3].parse().map_err(|e: String| Error::parse("manifest", line, e))?,
            });
        }
        Self::new(features)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,name,category,kind\n");
        for (i, f) in self.features.iter().enumerate() {
            out.push_str(&format!("{i},{},{},{}\n", f.name, f.category, f.kind));
        }
        out
    }

    /// Hex SHA-256 of the CSV form; identifies the schema in model files.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_csv().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn features(&self) -> &[FeatureDescriptor] {
        &self.features
    }

    pub fn get(&self, i: usize) -> &FeatureDescriptor {
        &self.features[i]
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.positions.get(name).copied()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.features.iter().map(|f| f.name.as_str())
    }

    pub fn count_kind(&self, kind: FeatureKind) -> usize {
        self.features.iter().filter(|f| f.kind == kind).count()
    }

    pub fn select(&self, columns: &[usize]) -> Result<Self> {
        Self::new(columns.iter().map(|&i| self.features[i].clone()).collect())
    }

    pub fn ensure_canonical_shape(&self) -> Result<()> {
        if self.len() != CANONICAL_WIDTH || self.count_kind(FeatureKind::Categorical) != CANONICAL_CATEGORICAL {
            return Err(Error::Schema(format!(
                "expected {CANONICAL_WIDTH} columns with {CANONICAL_CATEGORICAL} categorical, got {} with {}",
                self.len(),
                self.count_kind(FeatureKind::Categorical)
            )));
        }
        Ok(())
    }
}

impl TryFrom<Vec<FeatureDescriptor>> for FeatureManifest {
    type Error = Error;

    fn try_from(features: Vec<FeatureDescriptor>) -> Result<Self> {
        Self::new(features)
    }
}

impl From<FeatureManifest> for Vec<FeatureDescriptor> {
    fn from(m: FeatureManifest) -> Self {
        m.features
    }
}
