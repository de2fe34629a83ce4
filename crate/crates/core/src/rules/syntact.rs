use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{ProsodyRanges, ProsodyTarget};
use crate::emotion::{map_to_natural_range, BipolarEmotion};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dimension {
    Valence,
    Arousal,
    Power,
}

impl Dimension {
    pub const ALL: [Dimension; 3] = [Dimension::Valence, Dimension::Arousal, Dimension::Power];

    fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Dimension::Valence => "valence",
            Dimension::Arousal => "arousal",
            Dimension::Power => "power",
        }
    }

    fn of(self, e: &BipolarEmotion) -> f64 {
        match self {
            Dimension::Valence => e.valence(),
            Dimension::Arousal => e.arousal(),
            Dimension::Power => e.power(),
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Dimension {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "valence" | "pleasure" => Ok(Dimension::Valence),
            "arousal" => Ok(Dimension::Arousal),
            "power" | "dominance" => Ok(Dimension::Power),
            _ => Err(Error::InvalidArgument(format!(
                "unknown emotion dimension {s:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProsodyParam {
    Pitch,
    Rate,
    Volume,
}

impl ProsodyParam {
    pub const ALL: [ProsodyParam; 3] = [
        ProsodyParam::Pitch,
        ProsodyParam::Rate,
        ProsodyParam::Volume,
    ];

    fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ProsodyParam::Pitch => "pitch",
            ProsodyParam::Rate => "rate",
            ProsodyParam::Volume => "volume",
        }
    }
}

impl fmt::Display for ProsodyParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProsodyParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pitch" => Ok(ProsodyParam::Pitch),
            "rate" => Ok(ProsodyParam::Rate),
            "volume" => Ok(ProsodyParam::Volume),
            _ => Err(Error::InvalidArgument(format!(
                "unknown prosody parameter {s:?}"
            ))),
        }
    }
}

/// Coefficients `w[e][y]` of the linear emotion-to-prosody combination.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightMatrix {
    w: [[f64; 3]; 3],
}

impl Default for WeightMatrix {
    /// Pitch follows valence, rate follows arousal, nothing else is coupled.
    fn default() -> Self {
        let mut m = Self::zeros();
        m.set(Dimension::Valence, ProsodyParam::Pitch, 1.0);
        m.set(Dimension::Arousal, ProsodyParam::Rate, 1.0);
        m
    }
}

impl WeightMatrix {
    pub fn zeros() -> Self {
        Self { w: [[0.0; 3]; 3] }
    }

    pub fn get(&self, e: Dimension, y: ProsodyParam) -> f64 {
        self.w[e.index()][y.index()]
    }

    pub fn set(&mut self, e: Dimension, y: ProsodyParam, value: f64) {
        self.w[e.index()][y.index()] = value;
    }

    pub fn validate(&self) -> Result<()> {
        if self.w.iter().flatten().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite("weight"))
        }
    }

    /// Largest `|raw(y)|` reachable on `[-1, 1]^3`: `sum_e |w[e][y]|`.
    pub fn halfwidth(&self, y: ProsodyParam) -> f64 {
        Dimension::ALL.iter().map(|&e| self.get(e, y).abs()).sum()
    }

    pub fn raw(&self, e: &BipolarEmotion, y: ProsodyParam) -> f64 {
        Dimension::ALL
            .iter()
            .map(|&d| self.get(d, y) * d.of(e))
            .sum()
    }
}

fn resolve(raw: f64, halfwidth: f64, (lo, hi): (f64, f64)) -> Result<f64> {
    if halfwidth == 0.0 {
        return Ok((lo + hi) / 2.0);
    }
    map_to_natural_range(raw, halfwidth, lo, hi)
}

/// Weighted sum per prosody parameter, rescaled from its theoretical span
/// onto the natural range. A parameter with all-zero weights stays at its
/// range midpoint.
pub fn syntact_map(
    e: BipolarEmotion,
    weights: &WeightMatrix,
    ranges: &ProsodyRanges,
) -> Result<ProsodyTarget> {
    weights.validate()?;
    ranges.validate()?;
    let value =
        |y: ProsodyParam| resolve(weights.raw(&e, y), weights.halfwidth(y), ranges.bounds(y));
    Ok(ProsodyTarget {
        pitch_shift: value(ProsodyParam::Pitch)?,
        rate_factor: value(ProsodyParam::Rate)?,
        volume_shift: value(ProsodyParam::Volume)?,
    })
}
