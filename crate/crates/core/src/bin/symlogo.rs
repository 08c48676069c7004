use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use symlogo::imaging::FeatureExtractor;
use symlogo::pipeline::{self, report, ExperimentConfig, LabeledCorpus};
use symlogo::{Error, FeatureTable, Result, TrainedModel};

#[derive(Parser)]
#[command(
    name = "symlogo",
    version,
    about = "Symbolic interval classification of color logos"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract raw features for every image of a class-per-directory corpus.
    Extract {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Experiment config supplying feature parameters.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Fit a normalizer and reference matrix on a feature CSV.
    Train {
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Classify images; one JSON object per line.
    Classify {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(required = true)]
        images: Vec<PathBuf>,
    },
    /// Sweep the proposed classifier over fractions, k values and trials.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare the proposed classifier with the two nearest-neighbour models.
    Compare {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a synthetic logo corpus as PNG files.
    Synth {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 200)]
        size: usize,
    },
}

fn load_config(path: Option<&Path>) -> Result<ExperimentConfig> {
    path.map_or_else(|| Ok(ExperimentConfig::default()), ExperimentConfig::load)
}

fn corpus_for(config: &ExperimentConfig) -> Result<LabeledCorpus> {
    match &config.corpus_dir {
        Some(dir) => pipeline::load_corpus(dir),
        None => Ok(pipeline::generate_synthetic(
            config.synthetic_per_class,
            config.synthetic_seed,
            config.resize_width,
            config.resize_height,
        )),
    }
}

#[derive(Serialize)]
struct ClassifyLine<'a> {
    image: String,
    predicted_class: &'a str,
    predicted_index: usize,
    best_representative: Representative<'a>,
    acceptance_counts: &'a [usize],
    max_count: usize,
    tie: bool,
    out_of_coverage: bool,
}

#[derive(Serialize)]
struct Representative<'a> {
    class: &'a str,
    cluster: usize,
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Extract {
            corpus,
            out,
            config,
        } => {
            let cfg = load_config(config.as_deref())?;
            let extractor = FeatureExtractor::new(cfg.feature_config())?;
            let corpus = pipeline::load_corpus(&corpus)?;
            if corpus.skipped > 0 {
                eprintln!("skipped {} unreadable file(s)", corpus.skipped);
            }
            let table = corpus.extract_features(&extractor)?;
            table.write_csv(&out)?;
            eprintln!(
                "wrote {} x {} features to {}",
                table.len(),
                table.dim(),
                out.display()
            );
        }
        Command::Train {
            features,
            k,
            seed,
            out,
            config,
        } => {
            let cfg = load_config(config.as_deref())?;
            let table = FeatureTable::read_csv(&features)?;
            if table.is_empty() {
                return Err(Error::Empty(format!("{} has no rows", features.display())));
            }
            let model = TrainedModel::fit(&table, k, &cfg.kmeans(), seed)?;
            model.save(&out)?;
            let reference = &model.reference;
            eprintln!(
                "wrote {} representatives ({} classes x k = {k}) to {}",
                reference.len(),
                reference.num_classes(),
                out.display()
            );
        }
        Command::Classify {
            model,
            config,
            images,
        } => {
            let cfg = load_config(config.as_deref())?;
            let extractor = FeatureExtractor::new(cfg.feature_config())?;
            let model = TrainedModel::load(&model)?;
            let reference = &model.reference;
            if extractor.dim() != reference.dim() {
                return Err(Error::Format(format!(
                    "model has {} features but the extractor produces {}",
                    reference.dim(),
                    extractor.dim()
                )));
            }
            for path in images {
                let features = extractor.extract_path(&path)?;
                let outcome = model.classify_raw(features.as_slice())?;
                let names = reference.class_names();
                let line = ClassifyLine {
                    image: path.display().to_string(),
                    predicted_class: &names[outcome.predicted_class],
                    predicted_index: outcome.predicted_class,
                    best_representative: Representative {
                        class: &names[outcome.best_representative.0],
                        cluster: outcome.best_representative.1,
                    },
                    acceptance_counts: &outcome.acceptance_counts,
                    max_count: outcome.max_count,
                    tie: outcome.tie,
                    out_of_coverage: outcome.out_of_coverage,
                };
                println!("{}", serde_json::to_string(&line)?);
            }
        }
        Command::Experiment { config, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            let corpus = corpus_for(&cfg)?;
            let report = pipeline::run_experiment(&cfg, &corpus)?;
            report::write_experiment(&report, &out)?;
            print!("{}", report::experiment_text(&report));
        }
        Command::Compare { config, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            let corpus = corpus_for(&cfg)?;
            let report = pipeline::compare_models(&cfg, &corpus)?;
            report::write_comparison(&report, &out)?;
            print!("{}", report::comparison_text(&report));
            println!("== Classification time ==\n");
            print!("{}", report::timing_text(&report.timing));
        }
        Command::Synth { n, seed, out, size } => {
            if n == 0 || size == 0 {
                return Err(Error::InvalidArgument(
                    "--n and --size must be positive".into(),
                ));
            }
            let corpus = pipeline::generate_synthetic(n, seed, size, size);
            corpus.write_pngs(&out)?;
            eprintln!("wrote {} images to {}", corpus.len(), out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
