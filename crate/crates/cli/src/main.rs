//! `affect-ssml` command-line tool.
//!
//! Exit codes: 0 success, 1 data or processing error, 2 usage or
//! configuration error.

mod config;

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use affect_ssml::emotion::EmotionPoint;
use affect_ssml::experiment::{
    build_grid, render_grid, synthesize_batch, BatchOptions, EndpointConfig, GridFactors,
    HttpTransport, Level, Manifest, MockBehavior, MockTransport, TtsTransport, Voice,
    MANIFEST_FILE, TOKEN_ENV_VAR,
};
use affect_ssml::metrics::{
    evaluate, load_ratings, save_ratings, simulate_ratings, SimulationMode,
};
use affect_ssml::rules::ProsodyModel;
use affect_ssml::ssml::emit_ssml;
use clap::{Parser, Subcommand};

use config::{load_rules, load_sentences, parse_methods, RunConfig};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Data(_) => 1,
            CliError::Usage(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) => f.write_str(m),
        }
    }
}

impl From<affect_ssml::Error> for CliError {
    fn from(e: affect_ssml::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "affect-ssml",
    version,
    about = "Emotion-dimension to SSML prosody toolkit"
)]
struct Cli {
    /// Run configuration (TOML)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

fn unit_interval(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is outside [0, 1]"))
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the SSML document for one utterance
    Emit {
        #[arg(long, default_value = "syntact")]
        method: String,
        #[arg(long, value_parser = unit_interval)]
        valence: f64,
        #[arg(long, value_parser = unit_interval)]
        arousal: f64,
        #[arg(long, value_parser = unit_interval, default_value_t = 0.5)]
        power: f64,
        /// Weight/range file overriding the configured one
        #[arg(long, value_name = "PATH")]
        rules: Option<PathBuf>,
        text: String,
    },
    /// Render the stimulus grid to SSML files and a manifest
    Grid {
        /// Comma-separated subset of methods
        #[arg(long, value_delimiter = ',')]
        methods: Option<Vec<String>>,
        #[arg(long, value_name = "PATH")]
        sentences: Option<PathBuf>,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Synthesize pending manifest rows through the TTS endpoint
    Synth {
        #[arg(long, value_name = "PATH")]
        manifest: Option<PathBuf>,
        /// Endpoint URL, or mock://ok|flaky|unavailable|unauthorized
        #[arg(long)]
        endpoint: Option<String>,
        #[arg(long)]
        parallelism: Option<usize>,
    },
    /// Compute kappa, confusion matrices and UAR from listener ratings
    Eval {
        #[arg(long, value_name = "PATH")]
        ratings: PathBuf,
        #[arg(long, value_name = "PATH")]
        manifest: PathBuf,
        /// Directory for report.json and report.txt (default: manifest directory)
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Write seed-fixed synthetic ratings for a manifest
    #[command(hide = true)]
    SimulateRaters {
        #[arg(long, value_name = "PATH")]
        manifest: PathBuf,
        #[arg(long, default_value = "perfect")]
        mode: String,
        #[arg(long, default_value_t = 10)]
        raters: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = RunConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::Emit {
            method,
            valence,
            arousal,
            power,
            rules,
            text,
        } => cmd_emit(
            &config,
            &method,
            valence,
            arousal,
            power,
            rules.as_deref(),
            &text,
        ),
        Command::Grid {
            methods,
            sentences,
            out,
        } => cmd_grid(config, methods, sentences, out),
        Command::Synth {
            manifest,
            endpoint,
            parallelism,
        } => cmd_synth(config, manifest, endpoint, parallelism),
        Command::Eval {
            ratings,
            manifest,
            out,
        } => cmd_eval(&ratings, &manifest, out),
        Command::SimulateRaters {
            manifest,
            mode,
            raters,
            seed,
            out,
        } => cmd_simulate(&manifest, &mode, raters, seed, &out),
    }
}

fn cmd_emit(
    config: &RunConfig,
    method: &str,
    valence: f64,
    arousal: f64,
    power: f64,
    rules: Option<&Path>,
    text: &str,
) -> Result<(), CliError> {
    let method = method
        .parse()
        .map_err(|e: affect_ssml::Error| CliError::Usage(e.to_string()))?;
    let rules = match rules {
        Some(path) => load_rules(path)?,
        None => config.rules,
    };
    let point =
        EmotionPoint::new(valence, arousal, power).map_err(|e| CliError::Usage(e.to_string()))?;
    let model = ProsodyModel::new(method, rules)?;
    let doc = emit_ssml(text, &model.target(point)?).map_err(|e| CliError::Usage(e.to_string()))?;
    println!("{doc}");
    Ok(())
}

fn cmd_grid(
    mut config: RunConfig,
    methods: Option<Vec<String>>,
    sentences: Option<PathBuf>,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    if let Some(methods) = methods {
        config.methods = parse_methods(&methods)?;
    }
    if let Some(path) = sentences {
        config.sentences = load_sentences(&path)?;
    }
    let out = out.unwrap_or(config.output_dir);
    let factors = GridFactors {
        sentences: config.sentences,
        voices: Voice::ALL.to_vec(),
        methods: config.methods,
        levels: Level::ALL.to_vec(),
    };
    let grid = build_grid(&factors).map_err(|e| CliError::Usage(e.to_string()))?;
    let manifest = render_grid(&grid, &config.rules, &out)?;
    println!(
        "wrote {} stimuli to {}",
        manifest.len(),
        out.join(MANIFEST_FILE).display()
    );
    Ok(())
}

fn transport_for(
    endpoint: &str,
    config: &RunConfig,
    token: String,
) -> Result<Box<dyn TtsTransport>, CliError> {
    if let Some(name) = endpoint.strip_prefix("mock://") {
        let behavior = MockBehavior::from_name(name)
            .ok_or_else(|| CliError::Usage(format!("unknown mock endpoint {endpoint:?}")))?;
        return Ok(Box::new(MockTransport::new(behavior)));
    }
    if !(endpoint.starts_with("http://") || endpoint.starts_with("https://")) {
        return Err(CliError::Usage(format!(
            "endpoint must be an http(s) URL or mock://…, got {endpoint:?}"
        )));
    }
    Ok(Box::new(HttpTransport::new(
        EndpointConfig {
            url: endpoint.to_string(),
            timeout: config.tts.timeout,
        },
        token,
    )))
}

fn cmd_synth(
    config: RunConfig,
    manifest_path: Option<PathBuf>,
    endpoint: Option<String>,
    parallelism: Option<usize>,
) -> Result<(), CliError> {
    let token = std::env::var(TOKEN_ENV_VAR)
        .ok()
        .filter(|t| !t.trim().is_empty())
        .ok_or_else(|| CliError::Usage(format!("{TOKEN_ENV_VAR} is not set")))?;
    let endpoint = endpoint
        .or_else(|| config.tts.endpoint.clone())
        .ok_or_else(|| {
            CliError::Usage("no TTS endpoint configured (tts.endpoint or --endpoint)".into())
        })?;
    let parallelism = parallelism.unwrap_or(config.parallelism);
    if parallelism == 0 {
        return Err(CliError::Usage("parallelism must be at least 1".into()));
    }
    let transport = transport_for(&endpoint, &config, token)?;

    let manifest_path = manifest_path.unwrap_or_else(|| config.output_dir.join(MANIFEST_FILE));
    if !manifest_path.is_file() {
        return Err(CliError::Usage(format!(
            "manifest {} not found",
            manifest_path.display()
        )));
    }
    let base_dir = manifest_path
        .parent()
        .unwrap_or(Path::new("."))
        .to_path_buf();
    let manifest = Manifest::load(&manifest_path)?;

    let options = BatchOptions {
        voices: config.voices.clone(),
        parallelism,
        max_attempts: config.tts.max_attempts,
        base_delay: config.tts.retry_base,
        audio_extension: config.tts.audio_extension.clone(),
    };
    let report = synthesize_batch(&manifest, &base_dir, transport.as_ref(), &options)?;
    report.manifest.save(&manifest_path)?;

    let ok = report
        .manifest
        .rows
        .iter()
        .filter(|r| r.status == affect_ssml::experiment::Status::Ok)
        .count();
    println!("{ok}/{} rows ok", report.manifest.len());
    if report.all_ok() {
        return Ok(());
    }
    let mut stderr = std::io::stderr().lock();
    for (id, message) in &report.failures {
        let _ = writeln!(stderr, "{id}: {message}");
    }
    Err(CliError::Data(if report.aborted {
        "synthesis aborted after a permanent failure".into()
    } else {
        format!(
            "{} rows not synthesized; rerun to retry them",
            report.manifest.len() - ok
        )
    }))
}

fn cmd_eval(ratings: &Path, manifest: &Path, out: Option<PathBuf>) -> Result<(), CliError> {
    let manifest_rows = Manifest::load(manifest)?;
    let ratings = load_ratings(ratings)?;
    let report = evaluate(&ratings, &manifest_rows)?;

    let out = out.unwrap_or_else(|| manifest.parent().unwrap_or(Path::new(".")).to_path_buf());
    std::fs::create_dir_all(&out).map_err(|e| CliError::Data(format!("{}: {e}", out.display())))?;
    let text = report.to_text();
    let write = |name: &str, content: &str| {
        let path = out.join(name);
        std::fs::write(&path, content)
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
    };
    write("report.json", &report.to_json()?)?;
    write("report.txt", &text)?;
    print!("{text}");
    Ok(())
}

fn cmd_simulate(
    manifest: &Path,
    mode: &str,
    raters: usize,
    seed: u64,
    out: &Path,
) -> Result<(), CliError> {
    let mode: SimulationMode = mode
        .parse()
        .map_err(|e: affect_ssml::Error| CliError::Usage(e.to_string()))?;
    if raters == 0 {
        return Err(CliError::Usage("--raters must be at least 1".into()));
    }
    let manifest = Manifest::load(manifest)?;
    let ratings = simulate_ratings(&manifest, mode, raters, seed)?;
    save_ratings(&ratings, out)?;
    println!("wrote {} ratings to {}", ratings.len(), out.display());
    Ok(())
}
