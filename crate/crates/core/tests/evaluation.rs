use affect_ssml::experiment::{build_grid, GridFactors, Manifest, ManifestRow, Status};
use affect_ssml::metrics::{evaluate, simulate_ratings, Class, RatingRecord, SimulationMode};
use affect_ssml::Error;

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

#[test]
fn perfect_raters_agree_completely() {
    let m = manifest();
    let ratings = simulate_ratings(&m, SimulationMode::Perfect, 10, 0).unwrap();
    let report = evaluate(&ratings, &m).unwrap();
    assert_eq!(report.ratings, 720);
    assert_eq!(report.raters, 10);
    assert_eq!(report.rated_stimuli, 72);
    let groups: Vec<_> = report.kappa.iter().map(|r| r.group.as_str()).collect();
    assert_eq!(groups, ["schroeder", "syntact", "all"]);
    for row in &report.kappa {
        assert_eq!(row.arousal, Some(1.0));
        assert_eq!(row.valence, Some(1.0));
    }
    for row in &report.uar {
        assert_eq!(row.arousal, Some(1.0));
        assert_eq!(row.valence, Some(1.0));
    }
    assert_eq!(report.confusion.len(), 4);
    for cm in &report.confusion {
        assert_eq!(cm.counts.iter().flatten().sum::<u64>(), 360);
        assert_eq!(cm.counts[0][0], 120);
    }
    assert!(report.notes.is_empty());
}

#[test]
fn uniform_random_raters_are_near_chance() {
    let m = manifest();
    let ratings = simulate_ratings(&m, SimulationMode::UniformRandom, 10, 42).unwrap();
    let report = evaluate(&ratings, &m).unwrap();
    for row in &report.kappa {
        for k in [row.arousal.unwrap(), row.valence.unwrap()] {
            assert!(k.abs() <= 0.05, "{row:?}");
        }
    }
    for row in &report.uar {
        for u in [row.arousal.unwrap(), row.valence.unwrap()] {
            assert!((u - 1.0 / 3.0).abs() <= 0.05, "{row:?}");
        }
    }
}

#[test]
fn simulation_is_seed_deterministic() {
    let m = manifest();
    let a = simulate_ratings(&m, SimulationMode::UniformRandom, 10, 9).unwrap();
    let b = simulate_ratings(&m, SimulationMode::UniformRandom, 10, 9).unwrap();
    let c = simulate_ratings(&m, SimulationMode::UniformRandom, 10, 10).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn single_category_kappa_is_reported_undefined() {
    let m = manifest();
    let ratings: Vec<_> = m
        .rows
        .iter()
        .flat_map(|row| {
            (0..3).map(move |r| RatingRecord {
                sample_id: row.spec.sample_id.clone(),
                rater_id: format!("r{r}"),
                arousal: Class::Mid,
                valence: Class::Mid,
            })
        })
        .collect();
    let report = evaluate(&ratings, &m).unwrap();
    assert!(report
        .kappa
        .iter()
        .all(|r| r.arousal.is_none() && r.valence.is_none()));
    assert!(report.notes.iter().any(|n| n.contains("undefined")));
    assert!(report.to_text().contains("undef"));
    assert!(report.to_json().unwrap().contains("\"arousal\": null"));
    // Uniform "mid" answers still give a recall of 1 for mid, 0 elsewhere.
    assert!(report
        .uar
        .iter()
        .all(|r| (r.arousal.unwrap() - 1.0 / 3.0).abs() < 1e-12));
}

#[test]
fn orphan_ratings_are_rejected() {
    let m = manifest();
    let mut ratings = simulate_ratings(&m, SimulationMode::Perfect, 2, 0).unwrap();
    ratings.push(RatingRecord {
        sample_id: "warmup-07".into(),
        rater_id: "r01".into(),
        arousal: Class::Low,
        valence: Class::Low,
    });
    match evaluate(&ratings, &m) {
        Err(Error::OrphanSamples(ids)) => assert_eq!(ids, vec!["warmup-07"]),
        other => panic!("{other:?}"),
    }
}

#[test]
fn unequal_rater_counts_fail() {
    let m = manifest();
    let mut ratings = simulate_ratings(&m, SimulationMode::Perfect, 3, 0).unwrap();
    ratings.remove(0);
    assert!(matches!(
        evaluate(&ratings, &m),
        Err(Error::UnequalRaterCounts { expected: 3, .. })
    ));
}

#[test]
fn text_report_layout() {
    let m = manifest();
    let ratings = simulate_ratings(&m, SimulationMode::Perfect, 10, 0).unwrap();
    let text = evaluate(&ratings, &m).unwrap().to_text();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0].split_whitespace().collect::<Vec<_>>(),
        ["Fleiss'", "kappa", "Arousal", "Valence"]
    );
    assert!(lines[1].starts_with("Schroeder"));
    assert!(lines[2].starts_with("Syntact"));
    assert!(lines[3].starts_with("All"));
    assert!(lines[5].starts_with("UAR"));
    assert!(text.contains("Confusion arousal (Schroeder)"));
    assert!(text.contains("Confusion valence (Syntact)"));
}
