//! Prosody rules of the MARY TTS emotion module.
//!
//! All formulas take the `[-100, 100]` emotion scale. Only pitch and rate
//! reach SSML; the remaining parameters are computed for inspection.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ProsodyParam, ProsodyRanges, ProsodyTarget};
use crate::emotion::{map_to_natural_range, MaryScaleEmotion};
use crate::error::Result;

/// Annotated lower bound of `range_dynamics`. Not enforced; see
/// [`SchroederAcoustics::range_dynamics_below_floor`].
pub const RANGE_DYNAMICS_FLOOR: f64 = 100.0;

/// `max |0.3a + 0.1v - 0.1p|` over the cube: `(0.3 + 0.1 + 0.1) * 100`.
pub const REDUCED_PITCH_HALFWIDTH: f64 = 50.0;

/// `max |0.5a + 0.2v|` over the cube: `(0.5 + 0.2) * 100`.
pub const REDUCED_RATE_HALFWIDTH: f64 = 70.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AccentShape {
    Falling,
    Rising,
    Alternating,
}

impl AccentShape {
    /// Strict thresholds: valence -20 and 40 both give `Rising`.
    pub fn for_valence(valence: f64) -> Self {
        if valence < -20.0 {
            AccentShape::Falling
        } else if valence > 40.0 {
            AccentShape::Alternating
        } else {
            AccentShape::Rising
        }
    }
}

impl fmt::Display for AccentShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AccentShape::Falling => "falling",
            AccentShape::Rising => "rising",
            AccentShape::Alternating => "alternating",
        })
    }
}

/// Every output of the full MARY rule set, in rule units unless noted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchroederAcoustics {
    pub pitch: f64,
    pub pitch_dynamics: f64,
    pub range_semitones: f64,
    /// Raw formula value, never clamped to [`RANGE_DYNAMICS_FLOOR`].
    pub range_dynamics: f64,
    pub range_dynamics_below_floor: bool,
    pub accent_prominence: f64,
    pub preferred_accent_shape: AccentShape,
    pub accent_slope: f64,
    pub rate: f64,
    pub number_of_pauses: f64,
    pub duration: f64,
    pub vowel_duration: f64,
    pub nasal_duration: f64,
    pub liquid_duration: f64,
    pub plosive_duration: f64,
    pub fricative_duration: f64,
    pub volume: f64,
}

fn reduced_pitch(a: f64, v: f64, p: f64) -> f64 {
    0.3 * a + 0.1 * v - 0.1 * p
}

fn reduced_rate(a: f64, v: f64) -> f64 {
    0.5 * a + 0.2 * v
}

pub fn schroeder_full(e: MaryScaleEmotion) -> SchroederAcoustics {
    let (a, v, p) = (e.arousal(), e.valence(), e.power());
    let range_dynamics = -40.0 + 1.2 * a + 0.4 * p;
    let segment = 0.3 * v + 0.3 * p;
    let obstruent = 0.5 * a - 0.3 * v;
    SchroederAcoustics {
        pitch: reduced_pitch(a, v, p),
        pitch_dynamics: -15.0 + 0.3 * a - 0.3 * p,
        range_semitones: 4.0 + 0.04 * a,
        range_dynamics,
        range_dynamics_below_floor: range_dynamics < RANGE_DYNAMICS_FLOOR,
        accent_prominence: 0.5 * a - 0.5 * v,
        preferred_accent_shape: AccentShape::for_valence(v),
        accent_slope: 1.0 * a - 0.5 * v,
        rate: reduced_rate(a, v),
        number_of_pauses: 0.7 * a,
        duration: -0.2 * a,
        vowel_duration: segment,
        nasal_duration: segment,
        liquid_duration: segment,
        plosive_duration: obstruent,
        fricative_duration: obstruent,
        volume: 50.0 + 0.33 * a,
    }
}

/// Pitch and rate rules only, rescaled onto `ranges`. Volume stays at the
/// range midpoint.
pub fn schroeder_reduced(e: MaryScaleEmotion, ranges: &ProsodyRanges) -> Result<ProsodyTarget> {
    ranges.validate()?;
    let (a, v, p) = (e.arousal(), e.valence(), e.power());
    let (pitch_min, pitch_max) = ranges.bounds(ProsodyParam::Pitch);
    let (rate_min, rate_max) = ranges.bounds(ProsodyParam::Rate);
    Ok(ProsodyTarget {
        pitch_shift: map_to_natural_range(
            reduced_pitch(a, v, p),
            REDUCED_PITCH_HALFWIDTH,
            pitch_min,
            pitch_max,
        )?,
        rate_factor: map_to_natural_range(
            reduced_rate(a, v),
            REDUCED_RATE_HALFWIDTH,
            rate_min,
            rate_max,
        )?,
        volume_shift: ranges.midpoint(ProsodyParam::Volume),
    })
}
