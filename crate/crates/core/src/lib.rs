//! Rule-based mapping from emotion dimensions (valence, arousal, power) to
//! SSML prosody, with tooling for listening-test stimulus grids and for
//! evaluating listener ratings.
//!
//! ```
//! use affect_ssml::emotion::EmotionPoint;
//! use affect_ssml::rules::{model_for, RuleConfig};
//! use affect_ssml::ssml::emit_ssml;
//!
//! let model = model_for("syntact", &RuleConfig::default()).unwrap();
//! let point = EmotionPoint::with_neutral_power(0.9, 0.1).unwrap();
//! let doc = emit_ssml("Hallo.", &model.target(point).unwrap()).unwrap();
//! assert!(doc.as_str().contains(r#"pitch="+3.20st" rate="76%""#));
//! ```

pub mod emotion;
pub mod error;
pub mod experiment;
pub mod metrics;
pub mod rules;
pub mod ssml;

pub use error::{Error, Result};
