use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use super::confusion::{
    confusion_from_ratings, index_manifest, intended_level, orphan_sample_ids, uar,
};
use super::kappa::fleiss_kappa;
use super::ratings::{RatingDimension, RatingRecord};
use crate::error::{Error, Result};
use crate::experiment::Manifest;
use crate::rules::Method;

/// Table order: Schroeder first, then Syntact.
const TABLE_METHODS: [Method; 2] = [Method::Schroeder, Method::Syntact];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KappaRow {
    /// Method name, or `all` for the pooled row.
    pub group: String,
    /// `None` when kappa is undefined for this cell.
    pub arousal: Option<f64>,
    pub valence: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UarRow {
    pub method: Method,
    pub arousal: Option<f64>,
    pub valence: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfusionEntry {
    pub method: Method,
    pub dimension: RatingDimension,
    /// Class order of both rows (intended) and columns (perceived).
    pub labels: [&'static str; 3],
    pub counts: [[u64; 3]; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub ratings: usize,
    pub raters: usize,
    pub rated_stimuli: usize,
    pub kappa: Vec<KappaRow>,
    pub uar: Vec<UarRow>,
    pub confusion: Vec<ConfusionEntry>,
    /// Why any cell above is undefined.
    pub notes: Vec<String>,
}

impl EvaluationReport {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// Plain-text tables: kappa, UAR, then one confusion matrix per
    /// method and dimension.
    pub fn to_text(&self) -> String {
        let cell = |v: Option<f64>| match v {
            // Round first so tiny negatives print as 0.000.
            Some(v) => format!("{:.3}", (v * 1000.0).round() / 1000.0 + 0.0),
            None => "undef".to_string(),
        };
        let mut out = String::new();

        let _ = writeln!(
            out,
            "{:<15} {:>8} {:>8}",
            "Fleiss' kappa", "Arousal", "Valence"
        );
        for row in &self.kappa {
            let _ = writeln!(
                out,
                "{:<15} {:>8} {:>8}",
                title(&row.group),
                cell(row.arousal),
                cell(row.valence)
            );
        }
        out.push('\n');

        let _ = writeln!(out, "{:<15} {:>8} {:>8}", "UAR", "Arousal", "Valence");
        for row in &self.uar {
            let _ = writeln!(
                out,
                "{:<15} {:>8} {:>8}",
                title(row.method.as_str()),
                cell(row.arousal),
                cell(row.valence)
            );
        }

        for cm in &self.confusion {
            let _ = writeln!(
                out,
                "\nConfusion {} ({}): rows intended, columns perceived",
                cm.dimension,
                title(cm.method.as_str())
            );
            let _ = write!(out, "{:<10}", "");
            for label in cm.labels {
                let _ = write!(out, " {label:>9}");
            }
            out.push('\n');
            for (label, row) in cm.labels.iter().zip(cm.counts.iter()) {
                let _ = write!(out, "{label:<10}");
                for c in row {
                    let _ = write!(out, " {c:>9}");
                }
                out.push('\n');
            }
        }

        if !self.notes.is_empty() {
            out.push('\n');
            for note in &self.notes {
                let _ = writeln!(out, "note: {note}");
            }
        }
        out
    }
}

fn title(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Per-stimulus category counts for one dimension, restricted to
/// `method` if given. Stimuli without ratings are left out.
pub fn kappa_items(
    ratings: &[RatingRecord],
    manifest: &Manifest,
    method: Option<Method>,
    dimension: RatingDimension,
) -> Result<Vec<[usize; 3]>> {
    let orphans = orphan_sample_ids(ratings, manifest);
    if !orphans.is_empty() {
        return Err(Error::OrphanSamples(orphans));
    }
    let mut per_sample: BTreeMap<&str, [usize; 3]> = BTreeMap::new();
    for r in ratings {
        per_sample.entry(r.sample_id.as_str()).or_default()[r.class(dimension).index()] += 1;
    }
    Ok(manifest
        .rows
        .iter()
        .filter(|row| method.is_none_or(|m| m == row.spec.method))
        .filter_map(|row| per_sample.get(row.spec.sample_id.as_str()).copied())
        .collect())
}

fn kappa_cell(
    ratings: &[RatingRecord],
    manifest: &Manifest,
    method: Option<Method>,
    dimension: RatingDimension,
    notes: &mut Vec<String>,
) -> Result<Option<f64>> {
    let items = kappa_items(ratings, manifest, method, dimension)?;
    let group = method.map_or("all", |m| m.as_str());
    match fleiss_kappa(&items) {
        Ok(k) => Ok(Some(k)),
        Err(e @ Error::UnequalRaterCounts { .. }) => Err(e),
        Err(e) => {
            notes.push(format!("kappa {group}/{dimension}: {e}"));
            Ok(None)
        }
    }
}

/// Builds the agreement table, UAR table and confusion matrices.
///
/// UAR is computed from the pooled per-method confusion matrix.
pub fn evaluate(ratings: &[RatingRecord], manifest: &Manifest) -> Result<EvaluationReport> {
    let orphans = orphan_sample_ids(ratings, manifest);
    if !orphans.is_empty() {
        return Err(Error::OrphanSamples(orphans));
    }

    let index = index_manifest(manifest);
    for r in ratings {
        for dim in RatingDimension::ALL {
            super::ratings::level_to_class(intended_level(index[r.sample_id.as_str()], dim), dim)?;
        }
    }

    let methods: Vec<Method> = TABLE_METHODS
        .into_iter()
        .filter(|m| manifest.rows.iter().any(|r| r.spec.method == *m))
        .collect();

    let mut notes = Vec::new();
    let mut kappa = Vec::new();
    for group in methods.iter().copied().map(Some).chain([None]) {
        kappa.push(KappaRow {
            group: group.map_or("all", |m| m.as_str()).to_string(),
            arousal: kappa_cell(
                ratings,
                manifest,
                group,
                RatingDimension::Arousal,
                &mut notes,
            )?,
            valence: kappa_cell(
                ratings,
                manifest,
                group,
                RatingDimension::Valence,
                &mut notes,
            )?,
        });
    }

    let mut uar_rows = Vec::new();
    let mut confusion = Vec::new();
    for &method in &methods {
        let mut cells = [None; 2];
        for (slot, dim) in cells.iter_mut().zip(RatingDimension::ALL) {
            let cm = confusion_from_ratings(ratings, manifest, Some(method), dim)?;
            match uar(&cm) {
                Ok(v) => *slot = Some(v),
                Err(e) => notes.push(format!("uar {method}/{dim}: {e}")),
            }
            confusion.push(ConfusionEntry {
                method,
                dimension: dim,
                labels: cm.labels(),
                counts: cm.counts,
            });
        }
        uar_rows.push(UarRow {
            method,
            arousal: cells[0],
            valence: cells[1],
        });
    }

    let raters: BTreeSet<&str> = ratings.iter().map(|r| r.rater_id.as_str()).collect();
    let stimuli: BTreeSet<&str> = ratings.iter().map(|r| r.sample_id.as_str()).collect();
    Ok(EvaluationReport {
        ratings: ratings.len(),
        raters: raters.len(),
        rated_stimuli: stimuli.len(),
        kappa,
        uar: uar_rows,
        confusion,
        notes,
    })
}
