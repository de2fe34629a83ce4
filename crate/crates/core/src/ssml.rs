//! SSML rendering and validation for a single global `<prosody>` element.
//!
//! Canonical attribute forms:
//!
//! | attribute | form            | example   |
//! |-----------|-----------------|-----------|
//! | `pitch`   | `[+-]\d+\.\d{2}st` | `+3.20st` |
//! | `rate`    | `\d+%`           | `76%`     |
//! | `volume`  | `[+-]\d+\.\d{1}dB` | `+0.0dB`  |

use std::fmt;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rules::ProsodyTarget;

/// A complete SSML document produced by [`emit_ssml`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SsmlDocument {
    content: String,
}

impl SsmlDocument {
    pub fn as_str(&self) -> &str {
        &self.content
    }

    pub fn into_string(self) -> String {
        self.content
    }

    pub fn write_to(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.content.as_bytes()).map_err(|e| Error::io(path, e))
    }
}

impl fmt::Display for SsmlDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.content)
    }
}

impl AsRef<str> for SsmlDocument {
    fn as_ref(&self) -> &str {
        &self.content
    }
}

// Rounds first so that values like -0.001 print as +0.00 rather than -0.00.
fn signed_fixed(value: f64, decimals: i32) -> String {
    let scale = 10f64.powi(decimals);
    let mut rounded = (value * scale).round() / scale;
    if rounded == 0.0 {
        rounded = 0.0;
    }
    format!("{:+.*}", decimals as usize, rounded)
}

pub fn format_pitch(semitones: f64) -> String {
    format!("{}st", signed_fixed(semitones, 2))
}

pub fn format_rate(factor: f64) -> String {
    format!("{}%", (factor * 100.0).round().max(0.0) as u64)
}

pub fn format_volume(db: f64) -> String {
    format!("{}dB", signed_fixed(db, 1))
}

fn is_xml_char(c: char) -> bool {
    matches!(c, '\t' | '\n' | '\r' | '\u{20}'..='\u{D7FF}' | '\u{E000}'..='\u{FFFD}' | '\u{10000}'..)
}

pub fn escape_text(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Wraps `text` in `<speak><prosody …>` with canonical attributes.
///
/// The text is kept verbatim apart from escaping; it must contain
/// something other than whitespace and only characters XML 1.0 allows.
pub fn emit_ssml(text: &str, target: &ProsodyTarget) -> Result<SsmlDocument> {
    if text.trim().is_empty() {
        return Err(Error::InvalidArgument("text must not be empty".into()));
    }
    if let Some(c) = text.chars().find(|&c| !is_xml_char(c)) {
        return Err(Error::InvalidArgument(format!(
            "text contains U+{:04X}, which XML cannot represent",
            c as u32
        )));
    }
    if !target.is_finite() {
        return Err(Error::NonFinite("prosody target"));
    }
    if target.rate_factor < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "rate factor must be non-negative, got {}",
            target.rate_factor
        )));
    }
    let content = format!(
        "<speak><prosody pitch=\"{}\" rate=\"{}\" volume=\"{}\">{}</prosody></speak>",
        format_pitch(target.pitch_shift),
        format_rate(target.rate_factor),
        format_volume(target.volume_shift),
        escape_text(text),
    );
    Ok(SsmlDocument { content })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    WellFormedness { message: String },
    Root { found: String },
    UnexpectedElement { name: String },
    ProsodyCount { found: usize },
    MissingAttribute { attribute: String },
    AttributeGrammar { attribute: String, value: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WellFormedness { message } => write!(f, "not well-formed XML: {message}"),
            Violation::Root { found } => write!(f, "root element is <{found}>, expected <speak>"),
            Violation::UnexpectedElement { name } => write!(f, "unexpected element <{name}>"),
            Violation::ProsodyCount { found } => {
                write!(f, "expected exactly one <prosody> element, found {found}")
            }
            Violation::MissingAttribute { attribute } => {
                write!(f, "<prosody> is missing the {attribute} attribute")
            }
            Violation::AttributeGrammar { attribute, value } => {
                write!(
                    f,
                    "{attribute}={value:?} does not match the {attribute} grammar"
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Splits `s` into `digits` and what follows; `None` if there are no digits.
fn take_digits(s: &str) -> Option<(&str, &str)> {
    let end = s.find(|c: char| !c.is_ascii_digit()).unwrap_or(s.len());
    (end > 0).then(|| s.split_at(end))
}

fn signed_decimal_with_suffix(value: &str, decimals: usize, suffix: &str) -> bool {
    let Some(body) = value
        .strip_prefix(['+', '-'])
        .and_then(|s| s.strip_suffix(suffix))
    else {
        return false;
    };
    match take_digits(body) {
        Some((_, rest)) => rest
            .strip_prefix('.')
            .is_some_and(|frac| frac.len() == decimals && frac.bytes().all(|b| b.is_ascii_digit())),
        None => false,
    }
}

pub fn is_canonical_pitch(value: &str) -> bool {
    signed_decimal_with_suffix(value, 2, "st")
}

pub fn is_canonical_rate(value: &str) -> bool {
    value
        .strip_suffix('%')
        .and_then(take_digits)
        .is_some_and(|(_, rest)| rest.is_empty())
}

pub fn is_canonical_volume(value: &str) -> bool {
    signed_decimal_with_suffix(value, 1, "dB")
}

/// Checks structure and attribute grammar, collecting every violation.
pub fn validate_ssml(doc: &str) -> ValidationReport {
    let mut violations = Vec::new();
    let tree = match roxmltree::Document::parse(doc) {
        Ok(tree) => tree,
        Err(e) => {
            violations.push(Violation::WellFormedness {
                message: e.to_string(),
            });
            return ValidationReport { violations };
        }
    };

    let root = tree.root_element();
    if root.tag_name().name() != "speak" {
        violations.push(Violation::Root {
            found: root.tag_name().name().to_string(),
        });
    }

    let mut prosody = Vec::new();
    for node in root.descendants().filter(|n| n.is_element()) {
        if node == root {
            continue;
        }
        match node.tag_name().name() {
            "prosody" => prosody.push(node),
            other => violations.push(Violation::UnexpectedElement {
                name: other.to_string(),
            }),
        }
    }
    if prosody.len() != 1 {
        violations.push(Violation::ProsodyCount {
            found: prosody.len(),
        });
    }

    type Check = (&'static str, fn(&str) -> bool);
    let checks: [Check; 3] = [
        ("pitch", is_canonical_pitch),
        ("rate", is_canonical_rate),
        ("volume", is_canonical_volume),
    ];
    for node in &prosody {
        for (attribute, check) in checks {
            match node.attribute(attribute) {
                None => violations.push(Violation::MissingAttribute {
                    attribute: attribute.to_string(),
                }),
                Some(value) if !check(value) => violations.push(Violation::AttributeGrammar {
                    attribute: attribute.to_string(),
                    value: value.to_string(),
                }),
                Some(_) => {}
            }
        }
    }

    ValidationReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn neutral_document() {
        let doc = emit_ssml(
            "In sieben Stunden wird es soweit sein.",
            &ProsodyTarget::neutral(),
        )
        .unwrap();
        assert_eq!(
            doc.as_str(),
            "<speak><prosody pitch=\"+0.00st\" rate=\"100%\" volume=\"+0.0dB\">\
             In sieben Stunden wird es soweit sein.</prosody></speak>"
        );
    }

    #[test]
    fn escapes_text() {
        let doc = emit_ssml("a & b", &ProsodyTarget::neutral()).unwrap();
        assert!(doc.as_str().contains(">a &amp; b<"));
        let doc = emit_ssml("<\"x\"> 'y'", &ProsodyTarget::neutral()).unwrap();
        assert!(doc
            .as_str()
            .contains(">&lt;&quot;x&quot;&gt; &apos;y&apos;<"));
        assert!(validate_ssml(doc.as_str()).is_ok());
    }

    #[test]
    fn attribute_formatting() {
        let t = ProsodyTarget {
            pitch_shift: 3.2,
            rate_factor: 0.76,
            volume_shift: 0.0,
        };
        let doc = emit_ssml("Heute Abend könnte ich es ihm sagen.", &t).unwrap();
        assert!(doc
            .as_str()
            .contains("pitch=\"+3.20st\" rate=\"76%\" volume=\"+0.0dB\""));
        assert_eq!(format_pitch(-2.4), "-2.40st");
        assert_eq!(format_pitch(-0.001), "+0.00st");
        assert_eq!(format_pitch(-0.0), "+0.00st");
        assert_eq!(format_rate(0.785714), "79%");
        assert_eq!(format_rate(1.3), "130%");
        assert_eq!(format_volume(-6.0), "-6.0dB");
        assert_eq!(format_volume(-0.04), "+0.0dB");
    }

    #[test]
    fn emit_errors() {
        let n = ProsodyTarget::neutral();
        assert!(emit_ssml("", &n).is_err());
        assert!(emit_ssml("  \t\n", &n).is_err());
        assert!(emit_ssml("bad \u{1} char", &n).is_err());
        let t = ProsodyTarget {
            pitch_shift: f64::NAN,
            ..n
        };
        assert!(emit_ssml("x", &t).is_err());
        let t = ProsodyTarget {
            rate_factor: f64::INFINITY,
            ..n
        };
        assert!(emit_ssml("x", &t).is_err());
    }

    #[test]
    fn grammar_violation() {
        let r = validate_ssml("<speak><prosody pitch=\"high\">x</prosody></speak>");
        assert!(r.violations.contains(&Violation::AttributeGrammar {
            attribute: "pitch".into(),
            value: "high".into()
        }));
        assert!(r.violations.contains(&Violation::MissingAttribute {
            attribute: "rate".into()
        }));
        assert!(r.violations.contains(&Violation::MissingAttribute {
            attribute: "volume".into()
        }));
    }

    #[test]
    fn unclosed_root_is_not_well_formed() {
        let r = validate_ssml(
            "<speak><prosody pitch=\"+0.00st\" rate=\"100%\" volume=\"+0.0dB\">x</prosody>",
        );
        assert!(matches!(
            r.violations.as_slice(),
            [Violation::WellFormedness { .. }]
        ));
    }

    #[test]
    fn structural_violations() {
        let r = validate_ssml("<voice><prosody pitch=\"+0.00st\" rate=\"100%\" volume=\"+0.0dB\">x</prosody><break/></voice>");
        assert!(r.violations.contains(&Violation::Root {
            found: "voice".into()
        }));
        assert!(r.violations.contains(&Violation::UnexpectedElement {
            name: "break".into()
        }));

        let r = validate_ssml("<speak>x</speak>");
        assert_eq!(r.violations, vec![Violation::ProsodyCount { found: 0 }]);
    }

    #[test]
    fn grammar_matchers() {
        assert!(is_canonical_pitch("+3.20st"));
        assert!(is_canonical_pitch("-12.05st"));
        assert!(!is_canonical_pitch("3.20st"));
        assert!(!is_canonical_pitch("+3.2st"));
        assert!(!is_canonical_pitch("+.20st"));
        assert!(!is_canonical_pitch("+3.20Hz"));
        assert!(is_canonical_rate("0%"));
        assert!(is_canonical_rate("130%"));
        assert!(!is_canonical_rate("-5%"));
        assert!(!is_canonical_rate("1.5%"));
        assert!(!is_canonical_rate("%"));
        assert!(is_canonical_volume("-6.0dB"));
        assert!(!is_canonical_volume("+6dB"));
        assert!(!is_canonical_volume("+6.00dB"));
        assert!(!is_canonical_volume("loud"));
    }

    fn target() -> impl Strategy<Value = ProsodyTarget> {
        (-24.0..24.0f64, 0.0..4.0f64, -40.0..40.0f64).prop_map(|(p, r, v)| ProsodyTarget {
            pitch_shift: p,
            rate_factor: r,
            volume_shift: v,
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn emitted_documents_validate(text in "[^\u{0}-\u{8}\u{b}-\u{1f}\u{fffe}\u{ffff}]*[a-zA-Z&<>\"'][^\u{0}-\u{8}\u{b}-\u{1f}\u{fffe}\u{ffff}]*", t in target()) {
            let doc = emit_ssml(&text, &t).unwrap();
            prop_assert!(validate_ssml(doc.as_str()).is_ok(), "{}", doc);
            prop_assert_eq!(&doc, &emit_ssml(&text, &t).unwrap());

            let tree = roxmltree::Document::parse(doc.as_str()).unwrap();
            let prosody = tree.root_element().first_child().unwrap();
            prop_assert_eq!(prosody.text().unwrap_or(""), text.as_str());

            let inner = doc.as_str().split_once('>').unwrap().1.split_once('>').unwrap().1;
            let inner = inner.rsplit_once("</prosody>").unwrap().0;
            prop_assert!(!inner.contains('<') && !inner.contains('>'));
            let entities = ["&amp;", "&lt;", "&gt;", "&quot;", "&apos;"];
            let escaped = inner
                .match_indices('&')
                .all(|(i, _)| entities.iter().any(|e| inner[i..].starts_with(e)));
            prop_assert!(escaped);
        }
    }
}
