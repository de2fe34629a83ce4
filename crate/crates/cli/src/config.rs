//! Run configuration loaded from `--config <path>` (TOML).
//!
//! Relative paths inside the file resolve against the file's directory.

use std::path::{Path, PathBuf};
use std::time::Duration;

use affect_ssml::experiment::{VoiceNames, DEFAULT_SENTENCES};
use affect_ssml::rules::{Method, RuleConfig};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    methods: Option<Vec<String>>,
    rules: Option<PathBuf>,
    sentences: Option<PathBuf>,
    output_dir: Option<PathBuf>,
    parallelism: Option<usize>,
    voices: Option<VoiceNames>,
    #[serde(default)]
    tts: RawTts,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawTts {
    endpoint: Option<String>,
    timeout_secs: Option<u64>,
    max_attempts: Option<u32>,
    retry_base_ms: Option<u64>,
    audio_extension: Option<String>,
}

#[derive(Debug, Clone)]
pub struct TtsSettings {
    pub endpoint: Option<String>,
    pub timeout: Duration,
    pub max_attempts: u32,
    pub retry_base: Duration,
    pub audio_extension: String,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub methods: Vec<Method>,
    pub rules: RuleConfig,
    pub sentences: Vec<String>,
    pub output_dir: PathBuf,
    pub voices: VoiceNames,
    pub tts: TtsSettings,
    pub parallelism: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            methods: Method::ALL.to_vec(),
            rules: RuleConfig::default(),
            sentences: DEFAULT_SENTENCES.iter().map(|s| s.to_string()).collect(),
            output_dir: PathBuf::from("out"),
            voices: VoiceNames {
                female: "female".into(),
                male: "male".into(),
            },
            tts: TtsSettings {
                endpoint: None,
                timeout: Duration::from_secs(30),
                max_attempts: 3,
                retry_base: Duration::from_millis(500),
                audio_extension: "wav".into(),
            },
            parallelism: 4,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn parse_methods(names: &[String]) -> Result<Vec<Method>, CliError> {
    names
        .iter()
        .map(|n| n.parse::<Method>().map_err(|e| usage(e.to_string())))
        .collect()
}

/// Sentences, one per line; blank lines and `#` comments are skipped.
pub fn load_sentences(path: &Path) -> Result<Vec<String>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        usage(format!(
            "cannot read sentences file {}: {e}",
            path.display()
        ))
    })?;
    let sentences: Vec<String> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect();
    if sentences.is_empty() {
        return Err(usage(format!("{} contains no sentences", path.display())));
    }
    Ok(sentences)
}

pub fn load_rules(path: &Path) -> Result<RuleConfig, CliError> {
    RuleConfig::load(path).map_err(|e| usage(e.to_string()))
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
        let raw: RawConfig =
            toml::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let resolve = |p: PathBuf| if p.is_absolute() { p } else { base.join(p) };

        let mut config = Self::default();
        if let Some(methods) = raw.methods {
            config.methods = parse_methods(&methods)?;
        }
        if let Some(rules) = raw.rules {
            config.rules = load_rules(&resolve(rules))?;
        }
        if let Some(sentences) = raw.sentences {
            config.sentences = load_sentences(&resolve(sentences))?;
        }
        if let Some(dir) = raw.output_dir {
            config.output_dir = resolve(dir);
        }
        if let Some(voices) = raw.voices {
            config.voices = voices;
        }
        if let Some(p) = raw.parallelism {
            config.parallelism = p;
        }
        let tts = &mut config.tts;
        tts.endpoint = raw.tts.endpoint;
        if let Some(s) = raw.tts.timeout_secs {
            tts.timeout = Duration::from_secs(s);
        }
        if let Some(n) = raw.tts.max_attempts {
            tts.max_attempts = n;
        }
        if let Some(ms) = raw.tts.retry_base_ms {
            tts.retry_base = Duration::from_millis(ms);
        }
        if let Some(ext) = raw.tts.audio_extension {
            tts.audio_extension = ext;
        }
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.parallelism == 0 {
            return Err(usage("parallelism must be at least 1"));
        }
        if self.tts.max_attempts == 0 {
            return Err(usage("tts.max_attempts must be at least 1"));
        }
        if self.methods.is_empty() {
            return Err(usage("no methods configured"));
        }
        let ext = &self.tts.audio_extension;
        if ext.is_empty() || !ext.chars().all(|c| c.is_ascii_alphanumeric()) {
            return Err(usage(format!("bad audio extension {ext:?}")));
        }
        Ok(())
    }
}
