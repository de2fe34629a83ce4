use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::ratings::{level_to_class, RatingDimension, RatingRecord};
use crate::error::{Error, Result};
use crate::experiment::{Manifest, StimulusSpec};
use crate::rules::Method;

/// Intended (rows) versus perceived (columns) class counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfusionMatrix {
    pub dimension: RatingDimension,
    pub counts: [[u64; 3]; 3],
}

impl ConfusionMatrix {
    pub fn new(dimension: RatingDimension) -> Self {
        Self {
            dimension,
            counts: [[0; 3]; 3],
        }
    }

    pub fn from_counts(dimension: RatingDimension, counts: [[u64; 3]; 3]) -> Self {
        Self { dimension, counts }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn row_sum(&self, row: usize) -> u64 {
        self.counts[row].iter().sum()
    }

    pub fn labels(&self) -> [&'static str; 3] {
        self.dimension.labels()
    }
}

pub(crate) fn index_manifest(manifest: &Manifest) -> HashMap<&str, &StimulusSpec> {
    manifest
        .rows
        .iter()
        .map(|r| (r.spec.sample_id.as_str(), &r.spec))
        .collect()
}

/// Every sample id in `ratings` that the manifest does not list, sorted.
pub fn orphan_sample_ids(ratings: &[RatingRecord], manifest: &Manifest) -> Vec<String> {
    let index = index_manifest(manifest);
    ratings
        .iter()
        .filter(|r| !index.contains_key(r.sample_id.as_str()))
        .map(|r| r.sample_id.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

pub(crate) fn intended_level(spec: &StimulusSpec, dimension: RatingDimension) -> f64 {
    match dimension {
        RatingDimension::Arousal => spec.arousal_level.value(),
        RatingDimension::Valence => spec.valence_level.value(),
    }
}

/// One count per individual rating; ratings are never fused into a
/// majority label. `method` restricts to stimuli of that method.
pub fn confusion_from_ratings(
    ratings: &[RatingRecord],
    manifest: &Manifest,
    method: Option<Method>,
    dimension: RatingDimension,
) -> Result<ConfusionMatrix> {
    let orphans = orphan_sample_ids(ratings, manifest);
    if !orphans.is_empty() {
        return Err(Error::OrphanSamples(orphans));
    }
    let index = index_manifest(manifest);
    let mut cm = ConfusionMatrix::new(dimension);
    for rating in ratings {
        let spec = index[rating.sample_id.as_str()];
        if method.is_some_and(|m| m != spec.method) {
            continue;
        }
        let intended = level_to_class(intended_level(spec, dimension), dimension)?;
        cm.counts[intended.index()][rating.class(dimension).index()] += 1;
    }
    Ok(cm)
}

/// Mean over intended classes of diagonal count / row sum.
pub fn uar(cm: &ConfusionMatrix) -> Result<f64> {
    let mut sum = 0.0;
    for row in 0..3 {
        let total = cm.row_sum(row);
        if total == 0 {
            return Err(Error::EmptyClass(cm.labels()[row].to_string()));
        }
        sum += cm.counts[row][row] as f64 / total as f64;
    }
    Ok(sum / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::{build_grid, GridFactors, ManifestRow, Status};
    use crate::metrics::ratings::Class;
    use proptest::prelude::*;

    fn manifest() -> Manifest {
        Manifest {
            rows: build_grid(&GridFactors::default())
                .unwrap()
                .specs
                .into_iter()
                .map(|spec| ManifestRow {
                    ssml_path: format!("ssml/{}.ssml", spec.sample_id),
                    spec,
                    audio_path: None,
                    status: Status::Pending,
                })
                .collect(),
        }
    }

    fn rating(sample: &str, rater: &str, arousal: Class, valence: Class) -> RatingRecord {
        RatingRecord {
            sample_id: sample.into(),
            rater_id: rater.into(),
            arousal,
            valence,
        }
    }

    #[test]
    fn single_rating() {
        let r = vec![rating(
            "syntact-male-s1-v0.1-a0.5",
            "r1",
            Class::High,
            Class::Low,
        )];
        let cm = confusion_from_ratings(&r, &manifest(), None, RatingDimension::Arousal).unwrap();
        let mut expected = [[0; 3]; 3];
        expected[1][2] = 1;
        assert_eq!(cm.counts, expected);
        let cm = confusion_from_ratings(&r, &manifest(), None, RatingDimension::Valence).unwrap();
        assert_eq!(cm.counts[0][0], 1);
        assert_eq!(cm.total(), 1);
    }

    #[test]
    fn empty_ratings_give_zero_matrix() {
        let cm = confusion_from_ratings(&[], &manifest(), None, RatingDimension::Arousal).unwrap();
        assert_eq!(cm.counts, [[0; 3]; 3]);
    }

    #[test]
    fn full_design_counts() {
        let m = manifest();
        let ratings: Vec<_> = m
            .rows
            .iter()
            .flat_map(|row| {
                (0..10).map(move |r| {
                    rating(
                        &row.spec.sample_id,
                        &format!("r{r}"),
                        Class::Mid,
                        Class::Mid,
                    )
                })
            })
            .collect();
        for method in Method::ALL {
            for dim in RatingDimension::ALL {
                let cm = confusion_from_ratings(&ratings, &m, Some(method), dim).unwrap();
                assert_eq!(cm.total(), 360);
            }
        }
    }

    #[test]
    fn method_filter_and_orphans() {
        let r = vec![
            rating("syntact-male-s1-v0.1-a0.5", "r1", Class::High, Class::Low),
            rating("schroeder-male-s1-v0.1-a0.5", "r1", Class::High, Class::Low),
        ];
        let cm = confusion_from_ratings(
            &r,
            &manifest(),
            Some(Method::Schroeder),
            RatingDimension::Arousal,
        )
        .unwrap();
        assert_eq!(cm.total(), 1);

        let r = vec![
            rating("practice-3", "r1", Class::Low, Class::Low),
            rating("practice-1", "r1", Class::Low, Class::Low),
        ];
        match confusion_from_ratings(&r, &manifest(), None, RatingDimension::Arousal) {
            Err(Error::OrphanSamples(ids)) => assert_eq!(ids, vec!["practice-1", "practice-3"]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn uar_examples() {
        let diag = ConfusionMatrix::from_counts(
            RatingDimension::Arousal,
            [[4, 0, 0], [0, 7, 0], [0, 0, 1]],
        );
        assert_eq!(uar(&diag).unwrap(), 1.0);

        let cm = ConfusionMatrix::from_counts(
            RatingDimension::Arousal,
            [[8, 2, 0], [1, 8, 1], [0, 4, 6]],
        );
        assert!((uar(&cm).unwrap() - 2.2 / 3.0).abs() < 1e-12);

        let uniform = ConfusionMatrix::from_counts(RatingDimension::Valence, [[5; 3]; 3]);
        assert_eq!(uar(&uniform).unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn uar_empty_row_is_error() {
        let cm = ConfusionMatrix::from_counts(
            RatingDimension::Valence,
            [[1, 0, 0], [0, 0, 0], [0, 0, 1]],
        );
        assert!(matches!(uar(&cm), Err(Error::EmptyClass(ref c)) if c == "neutral"));
    }

    proptest! {
        #[test]
        fn uar_scale_invariant(
            counts in proptest::array::uniform3(proptest::array::uniform3(0u64..50)),
            factor in 1u64..20,
        ) {
            let cm = ConfusionMatrix::from_counts(RatingDimension::Arousal, counts);
            prop_assume!((0..3).all(|r| cm.row_sum(r) > 0));
            let scaled = counts.map(|row| row.map(|c| c * factor));
            let scaled = ConfusionMatrix::from_counts(RatingDimension::Arousal, scaled);
            prop_assert!((uar(&cm).unwrap() - uar(&scaled).unwrap()).abs() < 1e-12);
        }
    }
}
