//! Emotion-dimension value types and the rescaling steps shared by both
//! rule models.
//!
//! Public inputs live on the unit interval with 0.5 as the neutral level.
//! The weight-matrix model consumes the bipolar `[-1, 1]` form, the MARY
//! style rules consume the `[-100, 100]` form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Neutral level on every unit-interval dimension.
pub const NEUTRAL_LEVEL: f64 = 0.5;

fn check_range(name: &'static str, value: f64, min: f64, max: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::NonFinite(name));
    }
    if value < min || value > max {
        return Err(Error::OutOfRange {
            name,
            value,
            min,
            max,
        });
    }
    Ok(value)
}

/// A point in `[0, 1]^3` naming an intended expressive state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmotionPoint {
    valence: f64,
    arousal: f64,
    power: f64,
}

impl EmotionPoint {
    pub fn new(valence: f64, arousal: f64, power: f64) -> Result<Self> {
        Ok(Self {
            valence: check_range("valence", valence, 0.0, 1.0)?,
            arousal: check_range("arousal", arousal, 0.0, 1.0)?,
            power: check_range("power", power, 0.0, 1.0)?,
        })
    }

    /// Power pinned to neutral, as in the listening experiment.
    pub fn with_neutral_power(valence: f64, arousal: f64) -> Result<Self> {
        Self::new(valence, arousal, NEUTRAL_LEVEL)
    }

    pub fn neutral() -> Self {
        Self {
            valence: NEUTRAL_LEVEL,
            arousal: NEUTRAL_LEVEL,
            power: NEUTRAL_LEVEL,
        }
    }

    pub fn valence(&self) -> f64 {
        self.valence
    }

    pub fn arousal(&self) -> f64 {
        self.arousal
    }

    pub fn power(&self) -> f64 {
        self.power
    }
}

impl Default for EmotionPoint {
    fn default() -> Self {
        Self::neutral()
    }
}

/// Emotion dimensions rescaled to `[-1, 1]`, neutral at zero.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BipolarEmotion {
    valence: f64,
    arousal: f64,
    power: f64,
}

impl BipolarEmotion {
    pub fn new(valence: f64, arousal: f64, power: f64) -> Result<Self> {
        Ok(Self {
            valence: check_range("valence", valence, -1.0, 1.0)?,
            arousal: check_range("arousal", arousal, -1.0, 1.0)?,
            power: check_range("power", power, -1.0, 1.0)?,
        })
    }

    pub fn valence(&self) -> f64 {
        self.valence
    }

    pub fn arousal(&self) -> f64 {
        self.arousal
    }

    pub fn power(&self) -> f64 {
        self.power
    }
}

/// Emotion dimensions on the `[-100, 100]` scale the MARY rule constants
/// are written against.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MaryScaleEmotion {
    valence: f64,
    arousal: f64,
    power: f64,
}

impl MaryScaleEmotion {
    pub fn new(valence: f64, arousal: f64, power: f64) -> Result<Self> {
        Ok(Self {
            valence: check_range("valence", valence, -100.0, 100.0)?,
            arousal: check_range("arousal", arousal, -100.0, 100.0)?,
            power: check_range("power", power, -100.0, 100.0)?,
        })
    }

    pub fn valence(&self) -> f64 {
        self.valence
    }

    pub fn arousal(&self) -> f64 {
        self.arousal
    }

    pub fn power(&self) -> f64 {
        self.power
    }
}

/// `d' = 2d - 1` on every dimension.
pub fn rescale_unit_to_bipolar(p: EmotionPoint) -> BipolarEmotion {
    let f = |d: f64| 2.0 * d - 1.0;
    BipolarEmotion {
        valence: f(p.valence),
        arousal: f(p.arousal),
        power: f(p.power),
    }
}

/// `d' = 200d - 100` on every dimension.
pub fn rescale_unit_to_mary(p: EmotionPoint) -> MaryScaleEmotion {
    let f = |d: f64| 200.0 * d - 100.0;
    MaryScaleEmotion {
        valence: f(p.valence),
        arousal: f(p.arousal),
        power: f(p.power),
    }
}

/// Affinely maps `raw` from `[-halfwidth, +halfwidth]` onto
/// `[out_min, out_max]`, sending 0 to the midpoint, then clamps.
///
/// The clamp only matters when user weights push `raw` past the
/// theoretical span.
pub fn map_to_natural_range(raw: f64, halfwidth: f64, out_min: f64, out_max: f64) -> Result<f64> {
    if !raw.is_finite() {
        return Err(Error::NonFinite("raw"));
    }
    if !halfwidth.is_finite() {
        return Err(Error::NonFinite("halfwidth"));
    }
    if !out_min.is_finite() || !out_max.is_finite() {
        return Err(Error::NonFinite("output range"));
    }
    if halfwidth <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "halfwidth must be positive, got {halfwidth}"
        )));
    }
    if out_min >= out_max {
        return Err(Error::InvalidArgument(format!(
            "empty output range [{out_min}, {out_max}]"
        )));
    }
    let center = (out_min + out_max) / 2.0;
    let half_span = (out_max - out_min) / 2.0;
    Ok((center + raw / halfwidth * half_span).clamp(out_min, out_max))
}
