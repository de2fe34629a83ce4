//! Emotion-to-prosody rule models.
//!
//! Two models are provided: a linear weight matrix over bipolar emotion
//! dimensions ([`syntact_map`]) and the MARY emotion-module rules
//! ([`schroeder_full`], reduced to pitch and rate by [`schroeder_reduced`]).
//! [`ProsodyModel`] composes either one with the matching input rescaler.

mod config;
mod schroeder;
mod syntact;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::emotion::{rescale_unit_to_bipolar, rescale_unit_to_mary, EmotionPoint};
use crate::error::{Error, Result};

pub use config::{parse_rule_config, RuleConfig, DEFAULT_RULE_CONFIG};
pub use schroeder::{
    schroeder_full, schroeder_reduced, AccentShape, SchroederAcoustics, RANGE_DYNAMICS_FLOOR,
    REDUCED_PITCH_HALFWIDTH, REDUCED_RATE_HALFWIDTH,
};
pub use syntact::{syntact_map, Dimension, ProsodyParam, WeightMatrix};

/// Natural-sounding output bounds per prosody parameter.
///
/// Pitch in semitones, rate as a speaking-rate factor (1.0 neutral),
/// volume in decibels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProsodyRanges {
    pub pitch_min: f64,
    pub pitch_max: f64,
    pub rate_min: f64,
    pub rate_max: f64,
    pub volume_min: f64,
    pub volume_max: f64,
}

impl Default for ProsodyRanges {
    fn default() -> Self {
        Self {
            pitch_min: -4.0,
            pitch_max: 4.0,
            rate_min: 0.7,
            rate_max: 1.3,
            volume_min: -6.0,
            volume_max: 6.0,
        }
    }
}

impl ProsodyRanges {
    pub fn validate(&self) -> Result<()> {
        for param in ProsodyParam::ALL {
            let (lo, hi) = self.bounds(param);
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::NonFinite("prosody range"));
            }
            if lo >= hi {
                return Err(Error::InvalidArgument(format!(
                    "{param} range [{lo}, {hi}] is empty"
                )));
            }
        }
        if self.rate_min < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "rate_min must be non-negative, got {}",
                self.rate_min
            )));
        }
        Ok(())
    }

    pub fn bounds(&self, param: ProsodyParam) -> (f64, f64) {
        match param {
            ProsodyParam::Pitch => (self.pitch_min, self.pitch_max),
            ProsodyParam::Rate => (self.rate_min, self.rate_max),
            ProsodyParam::Volume => (self.volume_min, self.volume_max),
        }
    }

    pub fn midpoint(&self, param: ProsodyParam) -> f64 {
        let (lo, hi) = self.bounds(param);
        (lo + hi) / 2.0
    }

    pub fn neutral_target(&self) -> ProsodyTarget {
        ProsodyTarget {
            pitch_shift: self.midpoint(ProsodyParam::Pitch),
            rate_factor: self.midpoint(ProsodyParam::Rate),
            volume_shift: self.midpoint(ProsodyParam::Volume),
        }
    }

    pub fn contains(&self, target: &ProsodyTarget) -> bool {
        let inside = |v: f64, (lo, hi): (f64, f64)| v >= lo && v <= hi;
        inside(target.pitch_shift, self.bounds(ProsodyParam::Pitch))
            && inside(target.rate_factor, self.bounds(ProsodyParam::Rate))
            && inside(target.volume_shift, self.bounds(ProsodyParam::Volume))
    }
}

/// Resolved global prosody values for one utterance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProsodyTarget {
    /// Semitones relative to the voice default.
    pub pitch_shift: f64,
    /// Speaking-rate multiplier, 1.0 is the voice default.
    pub rate_factor: f64,
    /// Decibels relative to the voice default.
    pub volume_shift: f64,
}

impl ProsodyTarget {
    pub fn neutral() -> Self {
        Self {
            pitch_shift: 0.0,
            rate_factor: 1.0,
            volume_shift: 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.pitch_shift.is_finite()
            && self.rate_factor.is_finite()
            && self.volume_shift.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Syntact,
    Schroeder,
}

impl Method {
    pub const ALL: [Method; 2] = [Method::Syntact, Method::Schroeder];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Syntact => "syntact",
            Method::Schroeder => "schroeder",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "syntact" => Ok(Method::Syntact),
            "schroeder" | "schröder" => Ok(Method::Schroeder),
            _ => Err(Error::UnknownMethod(s.to_string())),
        }
    }
}

/// A configured mapping from [`EmotionPoint`] to [`ProsodyTarget`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProsodyModel {
    method: Method,
    config: RuleConfig,
}

impl ProsodyModel {
    pub fn new(method: Method, config: RuleConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self { method, config })
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn config(&self) -> &RuleConfig {
        &self.config
    }

    pub fn target(&self, point: EmotionPoint) -> Result<ProsodyTarget> {
        match self.method {
            Method::Syntact => syntact_map(
                rescale_unit_to_bipolar(point),
                &self.config.weights,
                &self.config.ranges,
            ),
            Method::Schroeder => {
                schroeder_reduced(rescale_unit_to_mary(point), &self.config.ranges)
            }
        }
    }
}

/// Looks up a model by name and binds it to `config`.
pub fn model_for(method: &str, config: &RuleConfig) -> Result<ProsodyModel> {
    ProsodyModel::new(method.parse()?, *config)
}
