use std::path::Path;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use super::manifest::{resolve, Manifest, Status};
use super::tts::{TtsOutcome, TtsRequest, TtsTransport, VoiceNames};
use crate::error::{Error, Result};

pub const AUDIO_DIR: &str = "audio";

#[derive(Debug, Clone)]
pub struct BatchOptions {
    pub voices: VoiceNames,
    /// Maximum requests in flight.
    pub parallelism: usize,
    /// Attempts per item, including the first.
    pub max_attempts: u32,
    /// Delay before the second attempt; doubles for each further attempt.
    pub base_delay: Duration,
    pub audio_extension: String,
}

impl BatchOptions {
    pub fn new(voices: VoiceNames) -> Self {
        Self {
            voices,
            parallelism: 4,
            max_attempts: 3,
            base_delay: Duration::from_millis(500),
            audio_extension: "wav".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchReport {
    /// Input manifest with audio paths and statuses filled in, same row order.
    pub manifest: Manifest,
    /// Requests issued per row; 0 for skipped or never-started rows.
    pub attempts: Vec<u32>,
    /// `(sample_id, message)` for every row that did not end `ok`.
    pub failures: Vec<(String, String)>,
    /// Set when a permanent failure stopped the run early.
    pub aborted: bool,
}

impl BatchReport {
    pub fn all_ok(&self) -> bool {
        self.manifest.rows.iter().all(|r| r.status == Status::Ok)
    }
}

struct RowResult {
    status: Status,
    audio_path: Option<String>,
    attempts: u32,
    failure: Option<String>,
}

fn backoff_delay(base: Duration, failed_attempts: u32) -> Duration {
    base.saturating_mul(1u32 << failed_attempts.saturating_sub(1).min(16))
}

/// Synthesizes every row not already completed.
///
/// A row counts as completed when its status is `ok` and its audio file
/// exists. Up to `parallelism` rows are in flight; retryable failures are
/// retried with exponential backoff. The first permanent failure stops new
/// rows from starting; rows already in flight finish.
pub fn synthesize_batch(
    manifest: &Manifest,
    base_dir: &Path,
    transport: &dyn TtsTransport,
    options: &BatchOptions,
) -> Result<BatchReport> {
    if options.parallelism == 0 {
        return Err(Error::InvalidArgument(
            "parallelism must be at least 1".into(),
        ));
    }
    if options.max_attempts == 0 {
        return Err(Error::InvalidArgument(
            "max_attempts must be at least 1".into(),
        ));
    }

    let mut documents = Vec::with_capacity(manifest.len());
    for row in &manifest.rows {
        let done = row.status == Status::Ok
            && row
                .audio_path
                .as_ref()
                .is_some_and(|p| resolve(base_dir, p).is_file());
        if done {
            documents.push(None);
            continue;
        }
        let path = resolve(base_dir, &row.ssml_path);
        let ssml = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        documents.push(Some(ssml));
    }

    let audio_dir = base_dir.join(AUDIO_DIR);
    std::fs::create_dir_all(&audio_dir).map_err(|e| Error::io(&audio_dir, e))?;

    let next = AtomicUsize::new(0);
    let abort = AtomicBool::new(false);
    let results: Vec<Mutex<Option<Result<RowResult>>>> =
        (0..manifest.len()).map(|_| Mutex::new(None)).collect();

    let worker = || loop {
        if abort.load(Ordering::SeqCst) {
            break;
        }
        let idx = next.fetch_add(1, Ordering::SeqCst);
        let Some(row) = manifest.rows.get(idx) else {
            break;
        };
        let Some(ssml) = &documents[idx] else {
            continue;
        };
        let request = TtsRequest {
            sample_id: row.spec.sample_id.clone(),
            ssml: ssml.clone(),
            voice_name: options.voices.name(row.spec.voice).to_string(),
        };
        let result = run_one(&request, base_dir, transport, options);
        if matches!(&result, Ok(r) if r.status == Status::PermanentFailure) || result.is_err() {
            abort.store(true, Ordering::SeqCst);
        }
        *results[idx].lock().unwrap() = Some(result);
    };

    std::thread::scope(|scope| {
        for _ in 0..options.parallelism.min(manifest.len().max(1)) {
            scope.spawn(worker);
        }
    });

    let mut out = manifest.clone();
    let mut attempts = vec![0; manifest.len()];
    let mut failures = Vec::new();
    for (idx, slot) in results.into_iter().enumerate() {
        let Some(result) = slot.into_inner().unwrap() else {
            continue;
        };
        let result = result?;
        let row = &mut out.rows[idx];
        row.status = result.status;
        if result.audio_path.is_some() {
            row.audio_path = result.audio_path;
        }
        attempts[idx] = result.attempts;
        if let Some(message) = result.failure {
            failures.push((row.spec.sample_id.clone(), message));
        }
    }
    for row in &out.rows {
        if row.status != Status::Ok && !failures.iter().any(|(id, _)| id == &row.spec.sample_id) {
            failures.push((
                row.spec.sample_id.clone(),
                format!("not synthesized ({})", row.status),
            ));
        }
    }

    Ok(BatchReport {
        manifest: out,
        attempts,
        failures,
        aborted: abort.load(Ordering::SeqCst),
    })
}

fn run_one(
    request: &TtsRequest,
    base_dir: &Path,
    transport: &dyn TtsTransport,
    options: &BatchOptions,
) -> Result<RowResult> {
    let mut attempt = 0;
    loop {
        attempt += 1;
        match transport.synthesize(request) {
            TtsOutcome::Audio(bytes) => {
                let relative = format!(
                    "{AUDIO_DIR}/{}.{}",
                    request.sample_id, options.audio_extension
                );
                let path = resolve(base_dir, &relative);
                std::fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
                log::info!("{}: ok after {attempt} attempt(s)", request.sample_id);
                return Ok(RowResult {
                    status: Status::Ok,
                    audio_path: Some(relative),
                    attempts: attempt,
                    failure: None,
                });
            }
            TtsOutcome::Retryable(message) if attempt < options.max_attempts => {
                let delay = backoff_delay(options.base_delay, attempt);
                log::warn!(
                    "{}: attempt {attempt} failed ({message}), retrying in {delay:?}",
                    request.sample_id
                );
                std::thread::sleep(delay);
            }
            TtsOutcome::Retryable(message) => {
                log::error!(
                    "{}: giving up after {attempt} attempts: {message}",
                    request.sample_id
                );
                return Ok(RowResult {
                    status: Status::RetryableFailure,
                    audio_path: None,
                    attempts: attempt,
                    failure: Some(message),
                });
            }
            TtsOutcome::Permanent(message) => {
                log::error!("{}: permanent failure: {message}", request.sample_id);
                return Ok(RowResult {
                    status: Status::PermanentFailure,
                    audio_path: None,
                    attempts: attempt,
                    failure: Some(message),
                });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backoff_doubles() {
        let base = Duration::from_millis(10);
        assert_eq!(backoff_delay(base, 1), Duration::from_millis(10));
        assert_eq!(backoff_delay(base, 2), Duration::from_millis(20));
        assert_eq!(backoff_delay(base, 3), Duration::from_millis(40));
    }
}
