mod common;

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symlogo::clustering::KMeans;
use symlogo::imaging::save_png;
use symlogo::pipeline::experiment::prepare_split;
use symlogo::pipeline::{
    cached_features, compare_on_features, generate_synthetic, load_corpus, report, run_model,
    stratified_split, ExperimentConfig, ModelKind,
};
use symlogo::{build_reference, Error, FeatureExtractor, FeatureTable, ImageBuffer};

fn write_class(root: &Path, name: &str, n: usize, shade: u8) {
    let dir = root.join(name);
    std::fs::create_dir_all(&dir).unwrap();
    for i in 0..n {
        let img =
            ImageBuffer::from_fn_rgb(12, 10, |x, y| [shade, (x * 20) as u8, (y * 20 + i) as u8]);
        save_png(&img, &dir.join(format!("{i}.png"))).unwrap();
    }
}

#[test]
fn corpus_from_class_directories() {
    let dir = tempfile::tempdir().unwrap();
    for (name, shade) in [("both", 10), ("text", 100), ("symbol", 200)] {
        write_class(dir.path(), name, 5, shade);
    }
    let c = load_corpus(dir.path()).unwrap();
    assert_eq!(c.len(), 15);
    assert_eq!(c.class_names, vec!["both", "symbol", "text"]);
    assert_eq!(c.class_counts(), vec![5, 5, 5]);
    assert_eq!(c.skipped, 0);
    assert_eq!(c.entries[0].image().unwrap().channels(), 3);
}

#[test]
fn non_image_file_is_skipped_and_counted() {
    let dir = tempfile::tempdir().unwrap();
    write_class(dir.path(), "a", 3, 0);
    write_class(dir.path(), "b", 3, 255);
    std::fs::write(dir.path().join("a").join("notes.txt"), "not an image").unwrap();
    let c = load_corpus(dir.path()).unwrap();
    assert_eq!((c.len(), c.skipped), (6, 1));
}

#[test]
fn corpus_errors() {
    let dir = tempfile::tempdir().unwrap();
    write_class(dir.path(), "only", 2, 0);
    assert!(matches!(
        load_corpus(dir.path()),
        Err(Error::TooFewClasses(1))
    ));
    std::fs::create_dir_all(dir.path().join("empty")).unwrap();
    std::fs::write(dir.path().join("empty").join("x.txt"), "x").unwrap();
    assert!(matches!(load_corpus(dir.path()), Err(Error::EmptyClass(_))));
    assert!(load_corpus(&dir.path().join("missing")).is_err());
}

#[test]
fn synthetic_corpus_is_deterministic() {
    let a = generate_synthetic(10, 7, 200, 200);
    let b = generate_synthetic(10, 7, 200, 200);
    assert_eq!(a.class_counts(), vec![10, 10, 10]);
    assert_eq!(a.content_hash().unwrap(), b.content_hash().unwrap());
    for e in &a.entries {
        let img = e.image().unwrap();
        assert_eq!((img.width(), img.height(), img.channels()), (200, 200, 3));
    }
    assert_ne!(
        a.content_hash().unwrap(),
        generate_synthetic(10, 8, 200, 200).content_hash().unwrap()
    );
}

#[test]
fn synthetic_corpus_survives_disk_roundtrip() {
    let corpus = generate_synthetic(3, 2, 40, 40);
    let dir = tempfile::tempdir().unwrap();
    corpus.write_pngs(dir.path()).unwrap();
    let loaded = load_corpus(dir.path()).unwrap();
    assert_eq!(loaded.class_names, corpus.class_names);
    assert_eq!(loaded.labels(), corpus.labels());
    for (a, b) in loaded.entries.iter().zip(&corpus.entries) {
        assert_eq!(a.image().unwrap(), b.image().unwrap());
    }
}

#[test]
fn feature_cache_is_reused() {
    let corpus = generate_synthetic(2, 3, 48, 48);
    let ex = FeatureExtractor::default();
    let dir = tempfile::tempdir().unwrap();
    let first = cached_features(&corpus, &ex, Some(dir.path())).unwrap();
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(files.len(), 1);
    let second = cached_features(&corpus, &ex, Some(dir.path())).unwrap();
    assert_eq!(first.labels, second.labels);
    for (a, b) in first.rows.iter().zip(&second.rows) {
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()));
        }
    }
}

#[test]
fn split_examples() {
    let labels: Vec<usize> = (0..10).map(|_| 0).chain((0..4).map(|_| 1)).collect();
    let s = stratified_split(&labels, 2, 0.7, 3).unwrap();
    assert_eq!(s.train.iter().filter(|&&i| labels[i] == 0).count(), 7);
    assert_eq!(s.train.iter().filter(|&&i| labels[i] == 1).count(), 2);
    let mut all: Vec<usize> = s.train.iter().chain(&s.test).copied().collect();
    all.sort_unstable();
    assert_eq!(all, (0..14).collect::<Vec<_>>());
    assert_eq!(s, stratified_split(&labels, 2, 0.7, 3).unwrap());
    assert!(stratified_split(&[0, 0, 1], 2, 0.5, 0).is_err());
    assert!(stratified_split(&labels, 2, 1.0, 0).is_err());
}

fn clustered_table(per_class: usize, d: usize, seed: u64) -> FeatureTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for c in 0..3 {
        for mut p in common::random_points(&mut rng, per_class, d) {
            p[c % d] += 6.0;
            rows.push(p);
            labels.push(c);
        }
    }
    let names = vec!["both".to_string(), "symbol".into(), "text".into()];
    let paths = (0..rows.len()).map(|i| format!("img{i}.png")).collect();
    FeatureTable::new(rows, labels, names, paths).unwrap()
}

#[test]
fn poisoned_test_rows_do_not_reach_fitting() {
    let table = clustered_table(20, 4, 1);
    let split = stratified_split(&table.labels, 3, 0.6, 5).unwrap();
    let mut poisoned = table.clone();
    for &i in &split.test {
        poisoned.rows[i] = vec![1e12; 4];
    }
    let (train_a, _) = prepare_split(&table, &split).unwrap();
    let (train_b, test_b) = prepare_split(&poisoned, &split).unwrap();
    assert_eq!(train_a, train_b);
    assert!(test_b.rows.iter().all(|r| r.iter().all(|&v| v > 1e6)));
    let km = KMeans::default();
    assert_eq!(
        build_reference(&train_a, 3, &km, 2).unwrap(),
        build_reference(&train_b, 3, &km, 2).unwrap()
    );
}

fn small_config() -> ExperimentConfig {
    ExperimentConfig {
        train_fractions: vec![0.5, 0.7],
        k_values: vec![2, 4],
        trials: 3,
        seed: 11,
        ..ExperimentConfig::default()
    }
}

#[test]
fn full_sweep_has_sixty_three_cells() {
    let table = clustered_table(50, 5, 2);
    let config = ExperimentConfig {
        trials: 1,
        ..ExperimentConfig::default()
    };
    let r = run_model(&config, &table, ModelKind::Proposed).unwrap();
    assert_eq!(r.cells.len(), 63);
    assert!(r.cells.iter().all(|c| c.skipped.is_none() && c.trials == 1));
    assert_eq!(r.best_per_fraction.len(), 7);
}

#[test]
fn infeasible_cells_are_skipped_not_fatal() {
    let table = clustered_table(8, 3, 3);
    let config = ExperimentConfig {
        train_fractions: vec![0.5],
        k_values: vec![2, 6],
        trials: 2,
        ..small_config()
    };
    let r = run_model(&config, &table, ModelKind::Proposed).unwrap();
    assert!(r.cell(0.5, Some(6)).unwrap().skipped.is_some());
    assert!(r.cell(0.5, Some(2)).unwrap().stats.is_some());
    let all_bad = ExperimentConfig {
        k_values: vec![6],
        ..config
    };
    assert!(matches!(
        run_model(&all_bad, &table, ModelKind::Proposed),
        Err(Error::Infeasible(_))
    ));
}

#[test]
fn models_share_splits_and_report_counts() {
    let table = clustered_table(30, 4, 4);
    let config = small_config();
    let cmp = compare_on_features(&config, &table).unwrap();
    assert_eq!(cmp.models.len(), 3);
    let fps = |kind| {
        let r = cmp.model(kind).unwrap();
        r.cells
            .iter()
            .map(|c| {
                (
                    c.train_fraction,
                    c.stats.as_ref().unwrap().split_fingerprints.clone(),
                )
            })
            .collect::<Vec<_>>()
    };
    let proposed = fps(ModelKind::Proposed);
    let nn = fps(ModelKind::NearestNeighbor);
    for (f, p) in &proposed {
        let other = nn.iter().find(|(g, _)| g == f).unwrap();
        assert_eq!(p, &other.1);
    }
    for c in &cmp.model(ModelKind::Proposed).unwrap().cells {
        assert_eq!(
            c.stats.as_ref().unwrap().comparisons_per_sample,
            3 * c.k.unwrap()
        );
    }
    for c in &cmp.model(ModelKind::NearestNeighbor).unwrap().cells {
        let n_train: usize = table
            .class_counts()
            .iter()
            .map(|&n| symlogo::pipeline::split::train_count(n, c.train_fraction))
            .sum();
        assert_eq!(c.stats.as_ref().unwrap().comparisons_per_sample, n_train);
    }
    for c in &cmp.model(ModelKind::ClusterMean).unwrap().cells {
        assert_eq!(
            c.stats.as_ref().unwrap().comparisons_per_sample,
            3 * c.k.unwrap()
        );
    }
    let text = report::comparison_text(&cmp);
    for kind in [
        ModelKind::Proposed,
        ModelKind::NearestNeighbor,
        ModelKind::ClusterMean,
    ] {
        assert!(text.contains(kind.title()), "missing {}", kind.title());
    }
    let timing = report::timing_text(&cmp.timing);
    assert_eq!(timing.lines().count(), 1 + 3 * config.train_fractions.len());
    for kind in ["proposed", "model1", "model2"] {
        assert!(timing.contains(kind));
    }
}

#[test]
fn best_rows_appear_in_grid() {
    let table = clustered_table(30, 4, 5);
    let r = run_model(&small_config(), &table, ModelKind::Proposed).unwrap();
    for best in r.best_per_fraction.iter().chain(r.best.iter()) {
        assert_eq!(r.cell(best.train_fraction, best.k).unwrap(), best);
    }
    let best = r.best.as_ref().unwrap();
    for c in &r.cells {
        assert!(c.avg_f().unwrap() <= best.avg_f().unwrap());
        let s = c.stats.as_ref().unwrap();
        for m in [s.accuracy, s.precision, s.recall, s.f_measure] {
            assert!(m.min <= m.avg && m.avg <= m.max);
        }
    }
}

#[test]
fn reports_are_reproducible() {
    let table = clustered_table(25, 3, 6);
    let a = compare_on_features(&small_config(), &table).unwrap();
    let b = compare_on_features(&small_config(), &table).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    let (da, db) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    report::write_comparison(&a, da.path()).unwrap();
    report::write_comparison(&b, db.path()).unwrap();
    for name in [
        "comparison.json",
        "comparison.txt",
        "grid.csv",
        "misclassified.csv",
        "proposed.txt",
        "model1.txt",
    ] {
        let x = std::fs::read(da.path().join(name)).unwrap();
        let y = std::fs::read(db.path().join(name)).unwrap();
        assert!(x == y, "{name} differs");
    }
    assert!(da.path().join("timing.json").exists() && da.path().join("timing.txt").exists());
}

#[test]
fn config_file_roundtrip() {
    let c = small_config();
    assert_eq!(ExperimentConfig::parse(&c.to_toml()).unwrap(), c);
    assert!(ExperimentConfig::parse("no_such_key = 1").is_err());
    assert!(ExperimentConfig::parse("trials = 0").is_err());
    assert!(ExperimentConfig::parse("train_fractions = [1.5]").is_err());
}
