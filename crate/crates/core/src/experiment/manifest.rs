//! Stimulus manifest: one CSV row per stimulus.
//!
//! Paths are stored relative to the directory holding the manifest, with
//! `/` separators, so a rendered output directory can be moved as a whole.

use std::collections::HashSet;
use std::fmt;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::grid::{Level, StimulusSpec};
use crate::error::{Error, Result};

pub const MANIFEST_HEADER: [&str; 9] = [
    "sample_id",
    "method",
    "voice",
    "sentence_id",
    "valence_level",
    "arousal_level",
    "ssml_path",
    "audio_path",
    "status",
];

pub const MANIFEST_FILE: &str = "manifest.csv";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pending,
    Ok,
    RetryableFailure,
    PermanentFailure,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pending => "pending",
            Status::Ok => "ok",
            Status::RetryableFailure => "retryable_failure",
            Status::PermanentFailure => "permanent_failure",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Status {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pending" | "" => Ok(Status::Pending),
            "ok" => Ok(Status::Ok),
            "retryable_failure" => Ok(Status::RetryableFailure),
            "permanent_failure" => Ok(Status::PermanentFailure),
            _ => Err(Error::InvalidArgument(format!("unknown status {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestRow {
    pub spec: StimulusSpec,
    pub ssml_path: String,
    pub audio_path: Option<String>,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Manifest {
    pub rows: Vec<ManifestRow>,
}

impl Manifest {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn find(&self, sample_id: &str) -> Option<&ManifestRow> {
        self.rows.iter().find(|r| r.spec.sample_id == sample_id)
    }

    /// Sample ids and paths must be unique.
    pub fn check_unique(&self) -> Result<()> {
        let mut ids = HashSet::new();
        let mut paths = HashSet::new();
        for row in &self.rows {
            if !ids.insert(row.spec.sample_id.as_str()) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate sample id {}",
                    row.spec.sample_id
                )));
            }
            for path in std::iter::once(&row.ssml_path).chain(row.audio_path.as_ref()) {
                if !paths.insert(path.as_str()) {
                    return Err(Error::InvalidArgument(format!("duplicate path {path}")));
                }
            }
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(MANIFEST_HEADER)?;
        for row in &self.rows {
            let s = &row.spec;
            w.write_record([
                s.sample_id.as_str(),
                s.method.as_str(),
                s.voice.as_str(),
                &s.sentence_id.to_string(),
                s.valence_level.as_str(),
                s.arousal_level.as_str(),
                row.ssml_path.as_str(),
                row.audio_path.as_deref().unwrap_or(""),
                row.status.as_str(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<manifest>", e))?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().from_reader(input);
        let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
        if header != MANIFEST_HEADER {
            return Err(Error::Malformed {
                line: 1,
                message: format!("manifest header must be {}", MANIFEST_HEADER.join(",")),
            });
        }
        let mut rows = Vec::new();
        for (idx, record) in r.records().enumerate() {
            let record = record?;
            let line = idx + 2;
            let bad = |e: Error| Error::Malformed {
                line,
                message: e.to_string(),
            };
            let field = |i: usize| record.get(i).unwrap_or("");
            let level = |i: usize| {
                field(i)
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidArgument(format!("bad level {:?}", field(i))))
                    .and_then(Level::from_value)
            };
            let spec = StimulusSpec {
                sample_id: field(0).to_string(),
                method: field(1).parse().map_err(bad)?,
                voice: field(2).parse().map_err(bad)?,
                sentence_id: field(3).parse().map_err(bad)?,
                valence_level: level(4).map_err(bad)?,
                arousal_level: level(5).map_err(bad)?,
            };
            if spec.sample_id.is_empty() {
                return Err(bad(Error::InvalidArgument("empty sample_id".into())));
            }
            rows.push(ManifestRow {
                spec,
                ssml_path: field(6).to_string(),
                audio_path: Some(field(7)).filter(|p| !p.is_empty()).map(str::to_string),
                status: field(8).parse().map_err(bad)?,
            });
        }
        let manifest = Manifest { rows };
        manifest.check_unique()?;
        Ok(manifest)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        std::fs::write(path, buf).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_csv(file)
    }
}

/// Resolves a manifest-relative path against the manifest directory.
pub fn resolve(base_dir: &Path, relative: &str) -> PathBuf {
    let mut out = base_dir.to_path_buf();
    out.extend(relative.split('/'));
    out
}
