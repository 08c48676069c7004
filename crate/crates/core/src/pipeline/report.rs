//! Aligned plain-text tables and CSV export for experiment reports.

use std::fmt::Write;
use std::path::Path;

use super::compare::{ComparisonReport, TimingRow};
use super::experiment::{Cell, ExperimentReport};
use crate::error::{Error, Result};
use crate::eval::{ConfusionMatrix, Summary};

fn split_label(fraction: f64) -> String {
    let train = (fraction * 100.0).round() as i64;
    format!("{}-{}", train, 100 - train)
}

fn k_label(k: Option<usize>) -> String {
    k.map_or_else(|| "-".into(), |k| k.to_string())
}

fn triple(s: &Summary) -> String {
    format!("{:>7.2} {:>7.2} {:>7.2}", s.min, s.max, s.avg)
}

fn grid_row(out: &mut String, label: &str, cell: &Cell) {
    match &cell.stats {
        Some(s) => {
            let _ = writeln!(
                out,
                "{label:<12} | {} | {} | {} | {} | {:>9}",
                triple(&s.accuracy),
                triple(&s.precision),
                triple(&s.recall),
                triple(&s.f_measure),
                k_label(cell.k)
            );
        }
        None => {
            let _ = writeln!(
                out,
                "{label:<12} | skipped: {}",
                cell.skipped.as_deref().unwrap_or("no trials")
            );
        }
    }
}

fn grid_header(out: &mut String) {
    let group = format!("{:>7} {:>7} {:>7}", "Min", "Max", "Avg");
    let _ = writeln!(
        out,
        "{:<12} | {:^23} | {:^23} | {:^23} | {:^23} | {:>9}",
        "Train-Test %", "Accuracy", "Precision", "Recall", "F-Measure", "Cluster #"
    );
    let _ = writeln!(out, "{:<12} | {group} | {group} | {group} | {group} |", "");
    let _ = writeln!(out, "{}", "-".repeat(12 + 4 * 26 + 12));
}

/// Per-fraction best rows plus the overall best, then the full grid.
pub fn experiment_text(report: &ExperimentReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", report.model.title());
    let _ = writeln!(
        out,
        "\nBest results per training fraction (selected by average F-measure)\n"
    );
    grid_header(&mut out);
    for cell in &report.best_per_fraction {
        grid_row(&mut out, &split_label(cell.train_fraction), cell);
    }
    if let Some(best) = &report.best {
        grid_row(&mut out, "Best", best);
    }
    let _ = writeln!(out, "\nAll cells\n");
    grid_header(&mut out);
    for cell in &report.cells {
        grid_row(&mut out, &split_label(cell.train_fraction), cell);
    }
    out
}

/// Min / Max / Avg block for a single best configuration.
pub fn best_block(report: &ExperimentReport) -> String {
    let mut out = String::new();
    let Some(best) = &report.best else {
        return "no feasible configuration\n".into();
    };
    let Some(s) = &best.stats else {
        return "no feasible configuration\n".into();
    };
    let _ = writeln!(
        out,
        "{:<10} {:>7} {:>7} {:>7}   {:>9}  {:>12}",
        "", "Min", "Max", "Avg", "Cluster #", "Train-Test %"
    );
    let rows = [
        ("Accuracy", &s.accuracy),
        ("Precision", &s.precision),
        ("Recall", &s.recall),
        ("F-Measure", &s.f_measure),
    ];
    for (i, (name, v)) in rows.iter().enumerate() {
        let (k, split) = if i == 0 {
            (k_label(best.k), split_label(best.train_fraction))
        } else {
            (String::new(), String::new())
        };
        let _ = writeln!(out, "{name:<10} {}   {k:>9}  {split:>12}", triple(v));
    }
    out
}

pub fn confusion_text(cm: &ConfusionMatrix, class_names: &[String]) -> String {
    let mut out = String::new();
    let width = class_names
        .iter()
        .map(String::len)
        .max()
        .unwrap_or(4)
        .max(6)
        + 2;
    let _ = write!(out, "{:<w$}", "", w = width + 8);
    for name in class_names {
        let _ = write!(out, "{name:>width$}");
    }
    out.push('\n');
    for (i, row) in cm.counts.iter().enumerate() {
        let label = format!("{} ({})", class_names[i], cm.class_total(i));
        let _ = write!(out, "{label:<w$}", w = width + 8);
        for v in row {
            let _ = write!(out, "{v:>width$}");
        }
        out.push('\n');
    }
    out
}

pub fn timing_text(rows: &[TimingRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<12} {:<8} {:>9} {:>16} {:>12}",
        "Train-Test %", "Model", "Cluster #", "s / sample", "comparisons"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:<12} {:<8} {:>9} {:>16.3e} {:>12}",
            split_label(r.train_fraction),
            r.model.to_string(),
            k_label(r.k),
            r.avg_seconds_per_sample,
            r.comparisons_per_sample
        );
    }
    out
}

pub fn comparison_text(report: &ComparisonReport) -> String {
    let mut out = String::new();
    for m in &report.models {
        let _ = writeln!(out, "== {} ==\n", m.model.title());
        out.push_str(&best_block(m));
        if let Some(s) = m.best.as_ref().and_then(|b| b.stats.as_ref()) {
            let _ = writeln!(
                out,
                "\nConfusion matrix (trial {}):\n",
                s.representative_trial
            );
            out.push_str(&confusion_text(&s.confusion, &m.class_names));
        }
        out.push('\n');
    }
    out
}

/// Every cell of one or more reports as CSV.
pub fn write_grid_csv(reports: &[&ExperimentReport], path: &Path) -> Result<()> {
    let mut w = crate::files::csv_writer(path, true)?;
    w.write_record([
        "model",
        "train_fraction",
        "k",
        "trials",
        "acc_min",
        "acc_max",
        "acc_avg",
        "p_min",
        "p_max",
        "p_avg",
        "r_min",
        "r_max",
        "r_avg",
        "f_min",
        "f_max",
        "f_avg",
        "skipped",
    ])?;
    for report in reports {
        for c in &report.cells {
            let mut rec = vec![
                report.model.to_string(),
                c.train_fraction.to_string(),
                k_label(c.k),
                c.trials.to_string(),
            ];
            match &c.stats {
                Some(s) => {
                    for v in [&s.accuracy, &s.precision, &s.recall, &s.f_measure] {
                        rec.extend([v.min, v.max, v.avg].map(|x| format!("{x:.4}")));
                    }
                    rec.push(String::new());
                }
                None => {
                    rec.extend(std::iter::repeat_n(String::new(), 12));
                    rec.push(c.skipped.clone().unwrap_or_default());
                }
            }
            w.write_record(&rec)?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Misclassified test images of every model's best configuration.
pub fn write_misclassified_csv(report: &ComparisonReport, path: &Path) -> Result<()> {
    let mut w = crate::files::csv_writer(path, true)?;
    w.write_record(["model", "path", "truth", "predicted"])?;
    for m in &report.models {
        if let Some(s) = m.best.as_ref().and_then(|b| b.stats.as_ref()) {
            for x in &s.misclassified {
                w.write_record([
                    m.model.to_string().as_str(),
                    &x.path,
                    &x.truth,
                    &x.predicted,
                ])?;
            }
        }
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// `report.json`, `report.txt`, `grid.csv` and `timing.json` under `dir`.
/// Only the timing file depends on the clock.
pub fn write_experiment(report: &ExperimentReport, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write(&dir.join("report.json"), &report.to_json())?;
    write(&dir.join("report.txt"), &experiment_text(report))?;
    write_grid_csv(&[report], &dir.join("grid.csv"))?;
    let timing = super::compare::timing_rows(report);
    write(
        &dir.join("timing.json"),
        &serde_json::to_string_pretty(&timing).expect("timing serializes"),
    )
}

pub fn write_comparison(report: &ComparisonReport, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write(&dir.join("comparison.json"), &report.to_json())?;
    write(&dir.join("comparison.txt"), &comparison_text(report))?;
    write(&dir.join("timing.json"), &report.timing_json())?;
    write(&dir.join("timing.txt"), &timing_text(&report.timing))?;
    let refs: Vec<&ExperimentReport> = report.models.iter().collect();
    write_grid_csv(&refs, &dir.join("grid.csv"))?;
    write_misclassified_csv(report, &dir.join("misclassified.csv"))?;
    for m in &report.models {
        write(&dir.join(format!("{}.txt", m.model)), &experiment_text(m))?;
    }
    Ok(())
}
