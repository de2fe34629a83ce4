use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::emotion::EmotionPoint;
use crate::error::{Error, Result};
use crate::rules::Method;

/// The two sentences of the listening experiment, taken from the Berlin
/// Emotional Database because they carry no lexical emotion.
pub const DEFAULT_SENTENCES: [&str; 2] = [
    "In sieben Stunden wird es soweit sein.",
    "Heute Abend könnte ich es ihm sagen.",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Voice {
    Female,
    Male,
}

impl Voice {
    pub const ALL: [Voice; 2] = [Voice::Female, Voice::Male];

    pub fn as_str(&self) -> &'static str {
        match self {
            Voice::Female => "female",
            Voice::Male => "male",
        }
    }
}

impl fmt::Display for Voice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Voice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "female" => Ok(Voice::Female),
            "male" => Ok(Voice::Male),
            _ => Err(Error::InvalidArgument(format!("unknown voice {s:?}"))),
        }
    }
}

/// One of the three emotion levels varied in the experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Level {
    Low,
    Mid,
    High,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::Low, Level::Mid, Level::High];

    pub fn value(self) -> f64 {
        match self {
            Level::Low => 0.1,
            Level::Mid => 0.5,
            Level::High => 0.9,
        }
    }

    pub fn from_value(value: f64) -> Result<Self> {
        Level::ALL
            .into_iter()
            .find(|l| (l.value() - value).abs() < 1e-9)
            .ok_or_else(|| {
                Error::InvalidArgument(format!("level {value} is not one of 0.1, 0.5, 0.9"))
            })
    }

    /// Short form used in sample ids and manifests.
    pub fn as_str(self) -> &'static str {
        match self {
            Level::Low => "0.1",
            Level::Mid => "0.5",
            Level::High => "0.9",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// 1-based sentence index, rendered as `s1`, `s2`, ...
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SentenceId(pub usize);

impl fmt::Display for SentenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

impl FromStr for SentenceId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.strip_prefix('s')
            .and_then(|n| n.parse::<usize>().ok())
            .filter(|&n| n >= 1)
            .map(SentenceId)
            .ok_or_else(|| Error::InvalidArgument(format!("bad sentence id {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StimulusSpec {
    pub sample_id: String,
    pub method: Method,
    pub voice: Voice,
    pub sentence_id: SentenceId,
    pub valence_level: Level,
    pub arousal_level: Level,
}

impl StimulusSpec {
    pub fn new(
        method: Method,
        voice: Voice,
        sentence_id: SentenceId,
        valence_level: Level,
        arousal_level: Level,
    ) -> Self {
        Self {
            sample_id: format!("{method}-{voice}-{sentence_id}-v{valence_level}-a{arousal_level}"),
            method,
            voice,
            sentence_id,
            valence_level,
            arousal_level,
        }
    }

    /// Valence and arousal from the levels, power held neutral.
    pub fn emotion(&self) -> EmotionPoint {
        EmotionPoint::with_neutral_power(self.valence_level.value(), self.arousal_level.value())
            .expect("levels lie inside the unit interval")
    }

    pub fn is_neutral(&self) -> bool {
        self.valence_level == Level::Mid && self.arousal_level == Level::Mid
    }
}

/// Factors of the stimulus grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFactors {
    pub sentences: Vec<String>,
    pub voices: Vec<Voice>,
    pub methods: Vec<Method>,
    pub levels: Vec<Level>,
}

impl Default for GridFactors {
    fn default() -> Self {
        Self {
            sentences: DEFAULT_SENTENCES.iter().map(|s| s.to_string()).collect(),
            voices: Voice::ALL.to_vec(),
            methods: Method::ALL.to_vec(),
            levels: Level::ALL.to_vec(),
        }
    }
}

/// A built grid: the sentence texts plus one spec per factor combination.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub sentences: Vec<String>,
    pub specs: Vec<StimulusSpec>,
}

impl Grid {
    pub fn len(&self) -> usize {
        self.specs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.specs.is_empty()
    }

    pub fn sentence(&self, id: SentenceId) -> Option<&str> {
        id.0.checked_sub(1)
            .and_then(|i| self.sentences.get(i))
            .map(String::as_str)
    }

    pub fn retain(&mut self, keep: impl FnMut(&StimulusSpec) -> bool) {
        self.specs.retain(keep);
    }
}

fn ensure_distinct<T: Eq + std::hash::Hash + fmt::Debug>(what: &str, items: &[T]) -> Result<()> {
    if items.is_empty() {
        return Err(Error::InvalidArgument(format!("no {what} given")));
    }
    let mut seen = HashSet::new();
    for item in items {
        if !seen.insert(item) {
            return Err(Error::InvalidArgument(format!(
                "duplicate {what}: {item:?}"
            )));
        }
    }
    Ok(())
}

/// Full Cartesian product ordered by method, voice, sentence, valence,
/// arousal, each factor in the order given.
pub fn build_grid(factors: &GridFactors) -> Result<Grid> {
    let trimmed: Vec<&str> = factors.sentences.iter().map(|s| s.trim()).collect();
    if trimmed.iter().any(|s| s.is_empty()) {
        return Err(Error::InvalidArgument("empty sentence".into()));
    }
    ensure_distinct("sentences", &trimmed)?;
    ensure_distinct("voices", &factors.voices)?;
    ensure_distinct("methods", &factors.methods)?;
    ensure_distinct("levels", &factors.levels)?;
    if factors.levels.len() != 3 {
        return Err(Error::InvalidArgument(format!(
            "expected exactly three levels, got {}",
            factors.levels.len()
        )));
    }

    let mut specs = Vec::with_capacity(
        factors.methods.len() * factors.voices.len() * trimmed.len() * factors.levels.len().pow(2),
    );
    for &method in &factors.methods {
        for &voice in &factors.voices {
            for sentence in 1..=trimmed.len() {
                for &valence in &factors.levels {
                    for &arousal in &factors.levels {
                        specs.push(StimulusSpec::new(
                            method,
                            voice,
                            SentenceId(sentence),
                            valence,
                            arousal,
                        ));
                    }
                }
            }
        }
    }
    Ok(Grid {
        sentences: factors.sentences.clone(),
        specs,
    })
}
