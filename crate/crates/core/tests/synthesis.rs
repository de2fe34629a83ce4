use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::path::Path;
use std::sync::{Arc, Mutex};
use std::time::Duration;

use affect_ssml::experiment::{
    build_grid, render_grid, synthesize_batch, BatchOptions, EndpointConfig, GridFactors,
    HttpTransport, Manifest, MockBehavior, MockTransport, Status, TtsOutcome, TtsRequest,
    TtsTransport, VoiceNames,
};
use affect_ssml::rules::RuleConfig;

fn voices() -> VoiceNames {
    VoiceNames {
        female: "de-female".into(),
        male: "de-male".into(),
    }
}

fn options() -> BatchOptions {
    BatchOptions {
        base_delay: Duration::from_millis(1),
        ..BatchOptions::new(voices())
    }
}

fn rendered(dir: &Path) -> Manifest {
    let grid = build_grid(&GridFactors::default()).unwrap();
    render_grid(&grid, &RuleConfig::default(), dir).unwrap()
}

#[test]
fn mock_success_marks_every_row_ok() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = rendered(dir.path());
    let mock = MockTransport::new(MockBehavior::Ok);
    let report = synthesize_batch(&manifest, dir.path(), &mock, &options()).unwrap();

    assert!(report.all_ok());
    assert!(!report.aborted);
    assert_eq!(report.manifest.len(), 72);
    for (before, after) in manifest.rows.iter().zip(&report.manifest.rows) {
        assert_eq!(before.spec, after.spec);
        let audio = after.audio_path.as_ref().unwrap();
        let bytes = std::fs::read(dir.path().join(audio)).unwrap();
        assert!(bytes.starts_with(b"MOCKAUDIO\n"));
    }
    assert!(report.attempts.iter().all(|&a| a == 1));
}

#[test]
fn flaky_mock_recovers_on_second_attempt() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = rendered(dir.path());
    let mock = MockTransport::new(MockBehavior::FailFirstAttempt);
    let report = synthesize_batch(&manifest, dir.path(), &mock, &options()).unwrap();
    assert!(report.all_ok());
    assert!(
        report.attempts.iter().all(|&a| a == 2),
        "{:?}",
        report.attempts
    );
}

#[test]
fn retries_stop_after_three_attempts() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = rendered(dir.path());
    let mock = MockTransport::new(MockBehavior::AlwaysRetryable);
    let report = synthesize_batch(&manifest, dir.path(), &mock, &options()).unwrap();
    assert!(!report.aborted);
    assert!(report
        .manifest
        .rows
        .iter()
        .all(|r| r.status == Status::RetryableFailure && r.audio_path.is_none()));
    assert!(report.attempts.iter().all(|&a| a == 3));
    assert_eq!(report.failures.len(), 72);
}

#[test]
fn unauthorized_aborts_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = rendered(dir.path());
    let mock = MockTransport::new(MockBehavior::Unauthorized);
    let opts = BatchOptions {
        parallelism: 1,
        ..options()
    };
    let report = synthesize_batch(&manifest, dir.path(), &mock, &opts).unwrap();
    assert!(report.aborted);
    assert_eq!(mock.total_requests(), 1);
    assert_eq!(report.manifest.rows[0].status, Status::PermanentFailure);
    assert!(report.manifest.rows[1..]
        .iter()
        .all(|r| r.status == Status::Pending));
    assert!(report.failures[0].1.contains("401"));
}

#[test]
fn completed_rows_are_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = rendered(dir.path());
    let first = synthesize_batch(
        &manifest,
        dir.path(),
        &MockTransport::new(MockBehavior::Ok),
        &options(),
    )
    .unwrap();

    let mut partial = first.manifest.clone();
    for row in partial.rows.iter_mut().skip(70) {
        row.status = Status::RetryableFailure;
        row.audio_path = None;
    }
    let mock = MockTransport::new(MockBehavior::Ok);
    let second = synthesize_batch(&partial, dir.path(), &mock, &options()).unwrap();
    assert!(second.all_ok());
    assert_eq!(mock.total_requests(), 2);
    assert_eq!(second.manifest, first.manifest);
}

#[test]
fn output_order_follows_input_order() {
    struct Slow;
    impl TtsTransport for Slow {
        fn synthesize(&self, request: &TtsRequest) -> TtsOutcome {
            // Later rows finish first.
            let n = request.sample_id.len() as u64 % 5;
            std::thread::sleep(Duration::from_millis(5 - n));
            TtsOutcome::Audio(request.sample_id.as_bytes().to_vec())
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let manifest = rendered(dir.path());
    let opts = BatchOptions {
        parallelism: 8,
        ..options()
    };
    let report = synthesize_batch(&manifest, dir.path(), &Slow, &opts).unwrap();
    for (row, out) in manifest.rows.iter().zip(&report.manifest.rows) {
        assert_eq!(row.spec.sample_id, out.spec.sample_id);
        let bytes = std::fs::read(dir.path().join(out.audio_path.as_ref().unwrap())).unwrap();
        assert_eq!(bytes, row.spec.sample_id.as_bytes());
    }
}

#[test]
fn missing_ssml_file_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = rendered(dir.path());
    std::fs::remove_file(dir.path().join(&manifest.rows[5].ssml_path)).unwrap();
    let mock = MockTransport::new(MockBehavior::Ok);
    assert!(synthesize_batch(&manifest, dir.path(), &mock, &options()).is_err());
    assert_eq!(mock.total_requests(), 0);
}

#[derive(Debug, Clone)]
struct Seen {
    authorization: Option<String>,
    voice: Option<String>,
    body: String,
}

/// Minimal HTTP/1.1 server answering each connection with the next scripted
/// `(status, content_type, body)`.
fn serve(script: Vec<(u16, &'static str, &'static [u8])>) -> (String, Arc<Mutex<Vec<Seen>>>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}/synthesize", listener.local_addr().unwrap());
    let seen = Arc::new(Mutex::new(Vec::new()));
    let log = Arc::clone(&seen);
    std::thread::spawn(move || {
        for (status, content_type, body) in script {
            let Ok((stream, _)) = listener.accept() else {
                return;
            };
            let mut reader = BufReader::new(stream);
            let mut headers = Vec::new();
            loop {
                let mut line = String::new();
                reader.read_line(&mut line).unwrap();
                if line == "\r\n" || line.is_empty() {
                    break;
                }
                headers.push(line.trim_end().to_string());
            }
            let header = |name: &str| {
                headers.iter().find_map(|h| {
                    let (k, v) = h.split_once(':')?;
                    k.eq_ignore_ascii_case(name).then(|| v.trim().to_string())
                })
            };
            let len: usize = header("content-length")
                .and_then(|v| v.parse().ok())
                .unwrap_or(0);
            let mut buf = vec![0; len];
            reader.read_exact(&mut buf).unwrap();
            log.lock().unwrap().push(Seen {
                authorization: header("authorization"),
                voice: header("x-voice-name"),
                body: String::from_utf8(buf).unwrap(),
            });
            let mut stream = reader.into_inner();
            write!(
                stream,
                "HTTP/1.1 {status} X\r\nContent-Type: {content_type}\r\nContent-Length: {}\r\nConnection: close\r\n\r\n",
                body.len()
            )
            .unwrap();
            stream.write_all(body).unwrap();
        }
    });
    (url, seen)
}

fn http(url: String) -> HttpTransport {
    HttpTransport::new(
        EndpointConfig {
            url,
            timeout: Duration::from_secs(5),
        },
        "tok123".into(),
    )
}

fn request() -> TtsRequest {
    TtsRequest {
        sample_id: "x".into(),
        ssml:
            "<speak><prosody pitch=\"+0.00st\" rate=\"100%\" volume=\"+0.0dB\">x</prosody></speak>"
                .into(),
        voice_name: "de-female".into(),
    }
}

#[test]
fn http_posts_ssml_with_auth_and_voice() {
    let (url, seen) = serve(vec![(200, "audio/wav", b"RIFFdata")]);
    let outcome = http(url).synthesize(&request());
    assert_eq!(outcome, TtsOutcome::Audio(b"RIFFdata".to_vec()));
    let seen = seen.lock().unwrap();
    assert_eq!(seen[0].authorization.as_deref(), Some("Bearer tok123"));
    assert_eq!(seen[0].voice.as_deref(), Some("de-female"));
    assert_eq!(seen[0].body, request().ssml);
}

#[test]
fn http_status_mapping() {
    let (url, _) = serve(vec![
        (503, "text/plain", b"busy"),
        (401, "text/plain", b"bad token"),
        (200, "application/json", b"{\"error\":\"quota\"}"),
    ]);
    let t = http(url);
    assert!(matches!(t.synthesize(&request()), TtsOutcome::Retryable(m) if m.contains("503")));
    assert!(
        matches!(t.synthesize(&request()), TtsOutcome::Permanent(m) if m.contains("401") && m.contains("bad token"))
    );
    assert!(matches!(t.synthesize(&request()), TtsOutcome::Permanent(m) if m.contains("quota")));
}

#[test]
fn http_connection_refused_is_retryable() {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}/", listener.local_addr().unwrap());
    drop(listener);
    assert!(matches!(
        http(url).synthesize(&request()),
        TtsOutcome::Retryable(_)
    ));
}

#[test]
fn http_batch_retries_server_errors() {
    let dir = tempfile::tempdir().unwrap();
    let mut grid = build_grid(&GridFactors::default()).unwrap();
    grid.specs.truncate(1);
    let manifest = render_grid(&grid, &RuleConfig::default(), dir.path()).unwrap();
    let (url, seen) = serve(vec![
        (500, "text/plain", b"oops"),
        (200, "audio/mpeg", b"ID3"),
    ]);
    let report = synthesize_batch(&manifest, dir.path(), &http(url), &options()).unwrap();
    assert!(report.all_ok());
    assert_eq!(report.attempts, vec![2]);
    assert_eq!(seen.lock().unwrap().len(), 2);
}
