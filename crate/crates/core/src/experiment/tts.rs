//! TTS transports.
//!
//! The HTTP contract is a `POST` of the SSML document to the endpoint with
//! the voice name in the `X-Voice-Name` header and a bearer token. A 2xx
//! reply carries the audio bytes. 5xx replies, 408, 429 and transport
//! errors are retryable; any other 4xx is permanent.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::grid::Voice;

/// Environment variable holding the endpoint bearer token.
pub const TOKEN_ENV_VAR: &str = "AFFECT_SSML_TTS_TOKEN";

const EXCERPT_LEN: usize = 200;
const MAX_AUDIO_BYTES: u64 = 256 * 1024 * 1024;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VoiceNames {
    pub female: String,
    pub male: String,
}

impl VoiceNames {
    pub fn name(&self, voice: Voice) -> &str {
        match voice {
            Voice::Female => &self.female,
            Voice::Male => &self.male,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndpointConfig {
    pub url: String,
    pub timeout: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TtsRequest {
    pub sample_id: String,
    pub ssml: String,
    pub voice_name: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TtsOutcome {
    Audio(Vec<u8>),
    Retryable(String),
    Permanent(String),
}

pub trait TtsTransport: Sync {
    fn synthesize(&self, request: &TtsRequest) -> TtsOutcome;
}

fn excerpt(body: &[u8]) -> String {
    let text = String::from_utf8_lossy(body);
    let mut out: String = text.chars().take(EXCERPT_LEN).collect();
    if text.chars().count() > EXCERPT_LEN {
        out.push('…');
    }
    out
}

/// Maps a non-2xx status onto the retry contract.
pub(crate) fn classify_status(status: u16, body: &[u8]) -> TtsOutcome {
    let message = format!("HTTP {status}: {}", excerpt(body));
    match status {
        408 | 429 | 500..=599 => TtsOutcome::Retryable(message),
        _ => TtsOutcome::Permanent(message),
    }
}

/// A 2xx body must be non-empty binary audio; text and JSON replies are
/// treated as malformed.
pub(crate) fn classify_success(content_type: Option<&str>, body: Vec<u8>) -> TtsOutcome {
    let textual = content_type.is_some_and(|ct| {
        let ct = ct.to_ascii_lowercase();
        ct.starts_with("text/") || ct.starts_with("application/json") || ct.contains("xml")
    });
    if body.is_empty() || textual {
        return TtsOutcome::Permanent(format!(
            "malformed response ({}): {}",
            content_type.unwrap_or("no content type"),
            excerpt(&body)
        ));
    }
    TtsOutcome::Audio(body)
}

pub struct HttpTransport {
    agent: ureq::Agent,
    endpoint: EndpointConfig,
    token: String,
}

impl fmt::Debug for HttpTransport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HttpTransport")
            .field("endpoint", &self.endpoint)
            .field("token", &"<redacted>")
            .finish()
    }
}

impl HttpTransport {
    pub fn new(endpoint: EndpointConfig, token: String) -> Self {
        let agent = ureq::Agent::config_builder()
            .http_status_as_error(false)
            .timeout_global(Some(endpoint.timeout))
            .build()
            .into();
        Self {
            agent,
            endpoint,
            token,
        }
    }
}

impl TtsTransport for HttpTransport {
    fn synthesize(&self, request: &TtsRequest) -> TtsOutcome {
        let sent = self
            .agent
            .post(&self.endpoint.url)
            .header("Authorization", &format!("Bearer {}", self.token))
            .header("Content-Type", "application/ssml+xml; charset=utf-8")
            .header("X-Voice-Name", &request.voice_name)
            .send(request.ssml.as_bytes());
        let mut response = match sent {
            Ok(r) => r,
            Err(e) => {
                return match e {
                    ureq::Error::Timeout(_)
                    | ureq::Error::Io(_)
                    | ureq::Error::ConnectionFailed
                    | ureq::Error::HostNotFound => TtsOutcome::Retryable(e.to_string()),
                    _ => TtsOutcome::Permanent(e.to_string()),
                };
            }
        };
        let status = response.status().as_u16();
        let content_type = response
            .headers()
            .get("content-type")
            .and_then(|v| v.to_str().ok())
            .map(str::to_string);
        let body = match response
            .body_mut()
            .with_config()
            .limit(MAX_AUDIO_BYTES)
            .read_to_vec()
        {
            Ok(b) => b,
            Err(e @ (ureq::Error::Timeout(_) | ureq::Error::Io(_))) => {
                return TtsOutcome::Retryable(e.to_string())
            }
            Err(e) => return TtsOutcome::Permanent(format!("reading response body: {e}")),
        };
        if (200..300).contains(&status) {
            classify_success(content_type.as_deref(), body)
        } else {
            classify_status(status, &body)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MockBehavior {
    /// Every request succeeds.
    Ok,
    /// The first attempt for each sample fails with a retryable error.
    FailFirstAttempt,
    /// Every attempt fails with a retryable error.
    AlwaysRetryable,
    /// Every request is rejected with HTTP 401.
    Unauthorized,
}

impl MockBehavior {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "ok" => Some(MockBehavior::Ok),
            "flaky" => Some(MockBehavior::FailFirstAttempt),
            "unavailable" => Some(MockBehavior::AlwaysRetryable),
            "unauthorized" => Some(MockBehavior::Unauthorized),
            _ => None,
        }
    }
}

/// In-process transport returning deterministic fake audio.
#[derive(Debug)]
pub struct MockTransport {
    behavior: MockBehavior,
    attempts: Mutex<HashMap<String, u32>>,
}

impl MockTransport {
    pub fn new(behavior: MockBehavior) -> Self {
        Self {
            behavior,
            attempts: Mutex::new(HashMap::new()),
        }
    }

    /// Total requests seen for `sample_id`.
    pub fn attempts(&self, sample_id: &str) -> u32 {
        self.attempts
            .lock()
            .unwrap()
            .get(sample_id)
            .copied()
            .unwrap_or(0)
    }

    pub fn total_requests(&self) -> u32 {
        self.attempts.lock().unwrap().values().sum()
    }

    /// The bytes returned for a successful request.
    pub fn fake_audio(request: &TtsRequest) -> Vec<u8> {
        let mut audio = b"MOCKAUDIO\n".to_vec();
        audio.extend_from_slice(request.voice_name.as_bytes());
        audio.push(b'\n');
        audio.extend_from_slice(request.ssml.as_bytes());
        audio
    }
}

impl TtsTransport for MockTransport {
    fn synthesize(&self, request: &TtsRequest) -> TtsOutcome {
        let attempt = {
            let mut attempts = self.attempts.lock().unwrap();
            let n = attempts.entry(request.sample_id.clone()).or_insert(0);
            *n += 1;
            *n
        };
        match self.behavior {
            MockBehavior::Ok => TtsOutcome::Audio(Self::fake_audio(request)),
            MockBehavior::FailFirstAttempt if attempt == 1 => {
                TtsOutcome::Retryable("HTTP 503: mock transient failure".into())
            }
            MockBehavior::FailFirstAttempt => TtsOutcome::Audio(Self::fake_audio(request)),
            MockBehavior::AlwaysRetryable => {
                TtsOutcome::Retryable("HTTP 503: mock unavailable".into())
            }
            MockBehavior::Unauthorized => TtsOutcome::Permanent("HTTP 401: unauthorized".into()),
        }
    }
}
