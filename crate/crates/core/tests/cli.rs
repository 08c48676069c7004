use std::path::Path;
use std::process::{Command, Output};

fn symlogo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symlogo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn synth_extract_train_classify() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    let out = symlogo(&[
        "synth",
        "--n",
        "4",
        "--seed",
        "3",
        "--size",
        "48",
        "--out",
        s(&corpus),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let features = dir.path().join("features.csv");
    let out = symlogo(&["extract", "--corpus", s(&corpus), "--out", s(&features)]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&features).unwrap();
    assert_eq!(text.lines().count(), 13);
    assert!(text.starts_with("f0,"));

    let model = dir.path().join("model.csv");
    let out = symlogo(&[
        "train",
        "--features",
        s(&features),
        "--k",
        "2",
        "--seed",
        "1",
        "--out",
        s(&model),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(std::fs::read_to_string(&model).unwrap().lines().count(), 7);

    let img = corpus.join("symbol").join("symbol_0001.png");
    let out = symlogo(&["classify", "--model", s(&model), s(&img), s(&img)]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<serde_json::Value> = stdout
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], lines[1]);
    assert_eq!(lines[0]["acceptance_counts"].as_array().unwrap().len(), 6);
    assert!(["both", "symbol", "text"].contains(&lines[0]["predicted_class"].as_str().unwrap()));

    let out = symlogo(&[
        "train",
        "--features",
        s(&features),
        "--k",
        "5",
        "--out",
        s(&model),
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn exit_codes() {
    assert_eq!(symlogo(&["--help"]).status.code(), Some(0));
    assert_eq!(symlogo(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(
        symlogo(&["synth", "--n", "0", "--out", "x"]).status.code(),
        Some(1)
    );

    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing");
    let out = symlogo(&[
        "extract",
        "--corpus",
        s(&missing),
        "--out",
        s(&dir.path().join("f.csv")),
    ]);
    assert_eq!(out.status.code(), Some(2));

    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "colour_grid = 3\n").unwrap();
    let out = symlogo(&["experiment", "--config", s(&cfg), "--out", s(dir.path())]);
    assert_eq!(out.status.code(), Some(1));

    std::fs::write(
        &cfg,
        "synthetic_per_class = 3\nresize_width = 32\nresize_height = 32\ntrain_fractions = [0.5]\nk_values = [4]\ntrials = 1\n",
    )
    .unwrap();
    let out = symlogo(&[
        "experiment",
        "--config",
        s(&cfg),
        "--out",
        s(&dir.path().join("r")),
    ]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn compare_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cmp.toml");
    std::fs::write(
        &cfg,
        "synthetic_per_class = 8\nresize_width = 40\nresize_height = 40\ntrain_fractions = [0.5]\nk_values = [2]\ntrials = 2\n",
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = symlogo(&["compare", "--config", s(&cfg), "--out", s(&out_dir)]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    for f in [
        "comparison.json",
        "comparison.txt",
        "timing.json",
        "timing.txt",
        "grid.csv",
        "misclassified.csv",
    ] {
        assert!(out_dir.join(f).exists(), "{f}");
    }
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("Classification time"));
}
