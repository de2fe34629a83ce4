use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ratings::{level_to_class, Class, RatingDimension, RatingRecord};
use crate::error::{Error, Result};
use crate::experiment::Manifest;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimulationMode {
    /// Every rater perceives exactly the intended classes.
    Perfect,
    /// Every rating is drawn uniformly from the three classes.
    UniformRandom,
}

impl FromStr for SimulationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "perfect" => Ok(SimulationMode::Perfect),
            "uniform-random" => Ok(SimulationMode::UniformRandom),
            _ => Err(Error::InvalidArgument(format!(
                "unknown simulation mode {s:?} (expected perfect or uniform-random)"
            ))),
        }
    }
}

impl fmt::Display for SimulationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SimulationMode::Perfect => "perfect",
            SimulationMode::UniformRandom => "uniform-random",
        })
    }
}

pub fn rater_id(index: usize) -> String {
    format!("r{:02}", index + 1)
}

/// Synthetic ratings for every manifest row, `raters` per row, in
/// manifest order then rater order. Output depends only on the inputs.
pub fn simulate_ratings(
    manifest: &Manifest,
    mode: SimulationMode,
    raters: usize,
    seed: u64,
) -> Result<Vec<RatingRecord>> {
    if raters == 0 {
        return Err(Error::InvalidArgument("need at least one rater".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(manifest.len() * raters);
    for row in &manifest.rows {
        let intended_arousal =
            level_to_class(row.spec.arousal_level.value(), RatingDimension::Arousal)?;
        let intended_valence =
            level_to_class(row.spec.valence_level.value(), RatingDimension::Valence)?;
        for r in 0..raters {
            let (arousal, valence) = match mode {
                SimulationMode::Perfect => (intended_arousal, intended_valence),
                SimulationMode::UniformRandom => (
                    Class::ALL[rng.random_range(0..3)],
                    Class::ALL[rng.random_range(0..3)],
                ),
            };
            out.push(RatingRecord {
                sample_id: row.spec.sample_id.clone(),
                rater_id: rater_id(r),
                arousal,
                valence,
            });
        }
    }
    Ok(out)
}
