//! Plain-text weight and range configuration.
//!
//! One `key = value` pair per line, `#` starts a comment. Weight keys are
//! `<dimension>.<parameter>` (e.g. `valence.pitch`), range keys are
//! `<parameter>.min` / `<parameter>.max`. Keys not present keep their
//! defaults.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Dimension, ProsodyParam, ProsodyRanges, WeightMatrix};
use crate::error::{Error, Result};

/// The defaults written out in configuration syntax.
pub const DEFAULT_RULE_CONFIG: &str = "\
# Emotion-to-prosody weights: <dimension>.<parameter> = coefficient
valence.pitch = 1.0
valence.rate = 0.0
valence.volume = 0.0
arousal.pitch = 0.0
arousal.rate = 1.0
arousal.volume = 0.0
power.pitch = 0.0
power.rate = 0.0
power.volume = 0.0

# Natural output ranges
# pitch in semitones, rate as a speaking-rate factor, volume in dB
pitch.min = -4.0
pitch.max = 4.0
rate.min = 0.7
rate.max = 1.3
volume.min = -6.0
volume.max = 6.0
";

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RuleConfig {
    pub weights: WeightMatrix,
    pub ranges: ProsodyRanges,
}

impl RuleConfig {
    pub fn validate(&self) -> Result<()> {
        self.weights.validate()?;
        self.ranges.validate()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        parse_rule_config(&text, path)
    }
}

/// Parses configuration text; `origin` only labels error messages.
pub fn parse_rule_config(text: &str, origin: &Path) -> Result<RuleConfig> {
    let mut config = RuleConfig::default();
    let err = |line: usize, message: String| Error::Config {
        path: origin.to_path_buf(),
        line,
        message,
    };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(line_no, format!("expected `key = value`, got {line:?}")))?;
        let key = key.trim();
        let value: f64 = value.trim().parse().map_err(|_| {
            err(
                line_no,
                format!("{key}: {:?} is not a decimal number", value.trim()),
            )
        })?;
        if !value.is_finite() {
            return Err(err(line_no, format!("{key}: value must be finite")));
        }
        let (head, tail) = key
            .split_once('.')
            .ok_or_else(|| err(line_no, format!("key {key:?} must look like `<a>.<b>`")))?;

        if let Ok(dim) = head.parse::<Dimension>() {
            let param = tail
                .parse::<ProsodyParam>()
                .map_err(|e| err(line_no, e.to_string()))?;
            config.weights.set(dim, param, value);
            continue;
        }
        let param = head
            .parse::<ProsodyParam>()
            .map_err(|_| err(line_no, format!("unknown key {key:?}")))?;
        let r = &mut config.ranges;
        let slot = match (param, tail) {
            (ProsodyParam::Pitch, "min") => &mut r.pitch_min,
            (ProsodyParam::Pitch, "max") => &mut r.pitch_max,
            (ProsodyParam::Rate, "min") => &mut r.rate_min,
            (ProsodyParam::Rate, "max") => &mut r.rate_max,
            (ProsodyParam::Volume, "min") => &mut r.volume_min,
            (ProsodyParam::Volume, "max") => &mut r.volume_max,
            _ => return Err(err(line_no, format!("unknown key {key:?}"))),
        };
        *slot = value;
    }

    config.validate().map_err(|e| err(0, e.to_string()))?;
    Ok(config)
}
