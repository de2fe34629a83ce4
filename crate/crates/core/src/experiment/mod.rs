//! Stimulus grid construction, SSML rendering to disk and batch synthesis.

mod grid;
mod manifest;
mod synth;
mod tts;

use std::path::Path;

use crate::error::{Error, Result};
use crate::rules::{ProsodyModel, RuleConfig};
use crate::ssml::emit_ssml;

pub use grid::{
    build_grid, Grid, GridFactors, Level, SentenceId, StimulusSpec, Voice, DEFAULT_SENTENCES,
};
pub use manifest::{resolve, Manifest, ManifestRow, Status, MANIFEST_FILE, MANIFEST_HEADER};
pub use synth::{synthesize_batch, BatchOptions, BatchReport};
pub use tts::{
    EndpointConfig, HttpTransport, MockBehavior, MockTransport, TtsOutcome, TtsRequest,
    TtsTransport, VoiceNames, TOKEN_ENV_VAR,
};

pub const SSML_DIR: &str = "ssml";

/// Writes one `.ssml` file per stimulus under `out_dir/ssml/` and the
/// manifest to `out_dir/manifest.csv`.
pub fn render_grid(grid: &Grid, config: &RuleConfig, out_dir: &Path) -> Result<Manifest> {
    let ssml_dir = out_dir.join(SSML_DIR);
    std::fs::create_dir_all(&ssml_dir).map_err(|e| Error::io(&ssml_dir, e))?;

    let models: Vec<ProsodyModel> = crate::rules::Method::ALL
        .into_iter()
        .map(|m| ProsodyModel::new(m, *config))
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(grid.len());
    for spec in &grid.specs {
        let text = grid.sentence(spec.sentence_id).ok_or_else(|| {
            Error::InvalidArgument(format!("{} refers to a missing sentence", spec.sample_id))
        })?;
        let model = models
            .iter()
            .find(|m| m.method() == spec.method)
            .expect("a model exists for every method");
        let doc = emit_ssml(text, &model.target(spec.emotion())?)?;
        let relative = format!("{SSML_DIR}/{}.ssml", spec.sample_id);
        doc.write_to(resolve(out_dir, &relative))?;
        rows.push(ManifestRow {
            spec: spec.clone(),
            ssml_path: relative,
            audio_path: None,
            status: Status::Pending,
        });
    }

    let manifest = Manifest { rows };
    manifest.check_unique()?;
    manifest.save(out_dir.join(MANIFEST_FILE))?;
    Ok(manifest)
}
