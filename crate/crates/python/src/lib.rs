//! Python bindings: emotion points, prosody models, SSML and rating metrics.

use affect::emotion::{self, rescale_unit_to_bipolar, rescale_unit_to_mary};
use affect::experiment::{build_grid as core_build_grid, GridFactors, Manifest};
use affect::metrics::{self, ConfusionMatrix, RatingDimension};
use affect::rules::{self, Method, ProsodyModel, RuleConfig};
use affect::ssml;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: affect::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn dimension(name: &str) -> PyResult<RatingDimension> {
    match name {
        "arousal" => Ok(RatingDimension::Arousal),
        "valence" => Ok(RatingDimension::Valence),
        other => Err(PyValueError::new_err(format!(
            "unknown dimension {other:?}"
        ))),
    }
}

/// Point in [0, 1]^3 with 0.5 as neutral.
#[pyclass(name = "EmotionPoint", frozen, eq, skip_from_py_object)]
#[derive(Clone, Copy, PartialEq)]
pub struct PyEmotionPoint(emotion::EmotionPoint);

#[pymethods]
impl PyEmotionPoint {
    #[new]
    #[pyo3(signature = (valence, arousal, power = 0.5))]
    fn new(valence: f64, arousal: f64, power: f64) -> PyResult<Self> {
        emotion::EmotionPoint::new(valence, arousal, power)
            .map(Self)
            .map_err(err)
    }

    #[staticmethod]
    fn neutral() -> Self {
        Self(emotion::EmotionPoint::neutral())
    }

    #[getter]
    fn valence(&self) -> f64 {
        self.0.valence()
    }

    #[getter]
    fn arousal(&self) -> f64 {
        self.0.arousal()
    }

    #[getter]
    fn power(&self) -> f64 {
        self.0.power()
    }

    /// (valence, arousal, power) in [-1, 1].
    fn bipolar(&self) -> (f64, f64, f64) {
        let b = rescale_unit_to_bipolar(self.0);
        (b.valence(), b.arousal(), b.power())
    }

    /// (valence, arousal, power) in [-100, 100].
    fn mary(&self) -> (f64, f64, f64) {
        let m = rescale_unit_to_mary(self.0);
        (m.valence(), m.arousal(), m.power())
    }

    fn __repr__(&self) -> String {
        format!(
            "EmotionPoint(valence={}, arousal={}, power={})",
            self.0.valence(),
            self.0.arousal(),
            self.0.power()
        )
    }
}

#[pyclass(name = "ProsodyTarget", frozen, eq, skip_from_py_object)]
#[derive(Clone, Copy, PartialEq)]
pub struct PyProsodyTarget(rules::ProsodyTarget);

#[pymethods]
impl PyProsodyTarget {
    #[new]
    fn new(pitch_shift: f64, rate_factor: f64, volume_shift: f64) -> Self {
        Self(rules::ProsodyTarget {
            pitch_shift,
            rate_factor,
            volume_shift,
        })
    }

    /// Semitones.
    #[getter]
    fn pitch_shift(&self) -> f64 {
        self.0.pitch_shift
    }

    #[getter]
    fn rate_factor(&self) -> f64 {
        self.0.rate_factor
    }

    /// Decibels.
    #[getter]
    fn volume_shift(&self) -> f64 {
        self.0.volume_shift
    }

    fn __repr__(&self) -> String {
        format!(
            "ProsodyTarget(pitch_shift={}, rate_factor={}, volume_shift={})",
            self.0.pitch_shift, self.0.rate_factor, self.0.volume_shift
        )
    }
}

/// Prosody model with the default or a file-loaded rule configuration.
#[pyclass(name = "ProsodyModel", frozen)]
pub struct PyProsodyModel(ProsodyModel);

#[pymethods]
impl PyProsodyModel {
    #[new]
    #[pyo3(signature = (method, rules_path = None))]
    fn new(method: &str, rules_path: Option<&str>) -> PyResult<Self> {
        let config = match rules_path {
            Some(path) => RuleConfig::load(path).map_err(err)?,
            None => RuleConfig::default(),
        };
        rules::model_for(method, &config).map(Self).map_err(err)
    }

    #[getter]
    fn method(&self) -> &'static str {
        self.0.method().as_str()
    }

    fn target(&self, point: &PyEmotionPoint) -> PyResult<PyProsodyTarget> {
        self.0.target(point.0).map(PyProsodyTarget).map_err(err)
    }
}

#[pyfunction]
fn map_to_natural_range(raw: f64, halfwidth: f64, out_min: f64, out_max: f64) -> PyResult<f64> {
    emotion::map_to_natural_range(raw, halfwidth, out_min, out_max).map_err(err)
}

#[pyfunction]
fn emit_ssml(text: &str, target: &PyProsodyTarget) -> PyResult<String> {
    ssml::emit_ssml(text, &target.0)
        .map(|d| d.into_string())
        .map_err(err)
}

/// List of violation messages; empty when the document is valid.
#[pyfunction]
fn validate_ssml(document: &str) -> Vec<String> {
    ssml::validate_ssml(document)
        .violations
        .iter()
        .map(ToString::to_string)
        .collect()
}

type GridRow = (String, String, String, String, f64, f64);

/// Default grid as (sample_id, method, voice, sentence, valence, arousal).
#[pyfunction]
fn build_grid() -> PyResult<Vec<GridRow>> {
    let grid = core_build_grid(&GridFactors::default()).map_err(err)?;
    Ok(grid
        .specs
        .iter()
        .map(|s| {
            (
                s.sample_id.clone(),
                s.method.to_string(),
                s.voice.to_string(),
                grid.sentence(s.sentence_id).unwrap_or_default().to_string(),
                s.valence_level.value(),
                s.arousal_level.value(),
            )
        })
        .collect())
}

/// Items as rows of per-category counts.
#[pyfunction]
fn fleiss_kappa(items: Vec<Vec<usize>>) -> PyResult<f64> {
    metrics::fleiss_kappa(&items).map_err(err)
}

/// 3x3 counts, rows intended, columns perceived.
#[pyfunction]
#[pyo3(signature = (counts, dimension = "arousal"))]
fn uar(counts: [[u64; 3]; 3], dimension: &str) -> PyResult<f64> {
    metrics::uar(&ConfusionMatrix::from_counts(
        self::dimension(dimension)?,
        counts,
    ))
    .map_err(err)
}

/// Confusion matrix of a ratings CSV against a manifest.
#[pyfunction]
#[pyo3(signature = (ratings_path, manifest_path, dimension, method = None))]
fn confusion(
    ratings_path: &str,
    manifest_path: &str,
    dimension: &str,
    method: Option<&str>,
) -> PyResult<[[u64; 3]; 3]> {
    let ratings = metrics::load_ratings(ratings_path).map_err(err)?;
    let manifest = Manifest::load(manifest_path).map_err(err)?;
    let method = method.map(str::parse::<Method>).transpose().map_err(err)?;
    metrics::confusion_from_ratings(&ratings, &manifest, method, self::dimension(dimension)?)
        .map(|cm| cm.counts)
        .map_err(err)
}

/// Full evaluation report as a JSON string.
#[pyfunction]
fn evaluate(ratings_path: &str, manifest_path: &str) -> PyResult<String> {
    let ratings = metrics::load_ratings(ratings_path).map_err(err)?;
    let manifest = Manifest::load(manifest_path).map_err(err)?;
    metrics::evaluate(&ratings, &manifest)
        .and_then(|r| r.to_json())
        .map_err(err)
}

#[pymodule]
#[pyo3(name = "affect_ssml")]
fn init(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEmotionPoint>()?;
    m.add_class::<PyProsodyTarget>()?;
    m.add_class::<PyProsodyModel>()?;
    m.add_function(wrap_pyfunction!(map_to_natural_range, m)?)?;
    m.add_function(wrap_pyfunction!(emit_ssml, m)?)?;
    m.add_function(wrap_pyfunction!(validate_ssml, m)?)?;
    m.add_function(wrap_pyfunction!(build_grid, m)?)?;
    m.add_function(wrap_pyfunction!(fleiss_kappa, m)?)?;
    m.add_function(wrap_pyfunction!(uar, m)?)?;
    m.add_function(wrap_pyfunction!(confusion, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    Ok(())
}
