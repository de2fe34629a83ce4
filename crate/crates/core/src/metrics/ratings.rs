use std::collections::HashSet;
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::Level;

pub const RATINGS_HEADER: [&str; 4] = ["sample_id", "rater_id", "arousal_rating", "valence_rating"];

/// The two rated dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RatingDimension {
    Arousal,
    Valence,
}

impl RatingDimension {
    pub const ALL: [RatingDimension; 2] = [RatingDimension::Arousal, RatingDimension::Valence];

    /// Class names in ordinal order.
    pub fn labels(self) -> [&'static str; 3] {
        match self {
            RatingDimension::Arousal => ["low", "mid", "high"],
            RatingDimension::Valence => ["negative", "neutral", "positive"],
        }
    }

    pub fn parse_class(self, s: &str) -> Result<Class> {
        self.labels()
            .iter()
            .position(|l| *l == s.trim())
            .map(|i| Class::ALL[i])
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "{s:?} is not a {self} rating (expected one of {})",
                    self.labels().join(", ")
                ))
            })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RatingDimension::Arousal => "arousal",
            RatingDimension::Valence => "valence",
        }
    }
}

impl fmt::Display for RatingDimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Ordinal rating class: low/negative, mid/neutral, high/positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Class {
    Low,
    Mid,
    High,
}

impl Class {
    pub const ALL: [Class; 3] = [Class::Low, Class::Mid, Class::High];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self, dimension: RatingDimension) -> &'static str {
        dimension.labels()[self.index()]
    }
}

/// Intended class of an experiment level: 0.1 → low/negative,
/// 0.5 → mid/neutral, 0.9 → high/positive.
///
/// Both dimensions share the ordinal order, so `_dimension` only names
/// the caller's intent.
pub fn level_to_class(level: f64, _dimension: RatingDimension) -> Result<Class> {
    Ok(match Level::from_value(level)? {
        Level::Low => Class::Low,
        Level::Mid => Class::Mid,
        Level::High => Class::High,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatingRecord {
    pub sample_id: String,
    pub rater_id: String,
    pub arousal: Class,
    pub valence: Class,
}

impl RatingRecord {
    pub fn class(&self, dimension: RatingDimension) -> Class {
        match dimension {
            RatingDimension::Arousal => self.arousal,
            RatingDimension::Valence => self.valence,
        }
    }
}

pub fn read_ratings<R: Read>(input: R) -> Result<Vec<RatingRecord>> {
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != RATINGS_HEADER {
        return Err(Error::Malformed {
            line: 1,
            message: format!("ratings header must be {}", RATINGS_HEADER.join(",")),
        });
    }
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (idx, record) in r.records().enumerate() {
        let record = record?;
        let line = idx + 2;
        let bad = |e: Error| Error::Malformed {
            line,
            message: e.to_string(),
        };
        let field = |i: usize| record.get(i).unwrap_or("");
        if field(0).is_empty() || field(1).is_empty() {
            return Err(bad(Error::InvalidArgument(
                "empty sample_id or rater_id".into(),
            )));
        }
        let rec = RatingRecord {
            sample_id: field(0).to_string(),
            rater_id: field(1).to_string(),
            arousal: RatingDimension::Arousal
                .parse_class(field(2))
                .map_err(bad)?,
            valence: RatingDimension::Valence
                .parse_class(field(3))
                .map_err(bad)?,
        };
        if !seen.insert((rec.sample_id.clone(), rec.rater_id.clone())) {
            return Err(Error::DuplicateRating {
                sample_id: rec.sample_id,
                rater_id: rec.rater_id,
            });
        }
        out.push(rec);
    }
    Ok(out)
}

pub fn write_ratings<W: Write>(ratings: &[RatingRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(RATINGS_HEADER)?;
    for r in ratings {
        w.write_record([
            r.sample_id.as_str(),
            r.rater_id.as_str(),
            r.arousal.label(RatingDimension::Arousal),
            r.valence.label(RatingDimension::Valence),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<ratings>", e))?;
    Ok(())
}

pub fn load_ratings(path: impl AsRef<Path>) -> Result<Vec<RatingRecord>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_ratings(file)
}

pub fn save_ratings(ratings: &[RatingRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut buf = Vec::new();
    write_ratings(ratings, &mut buf)?;
    std::fs::write(path, buf).map_err(|e| Error::io(path, e))
}
