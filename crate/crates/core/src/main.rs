use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cmav::cli;
use cmav::compression::CompressorKind;
use cmav::dissimilarity::MeasureKind;
use cmav::Error;

#[derive(Parser)]
#[command(
    name = "cmav",
    version,
    about = "Compression-model authorship verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Subcommand)]
enum Commands {
    /// Clean a corpus and drop near-duplicate known documents
    Preprocess {
        /// Corpus to read (PAN layout)
        #[arg(long)]
        input: PathBuf,
        /// Where the cleaned mirror corpus is written
        #[arg(long)]
        output: PathBuf,
        /// Overlap coefficient above which a pair counts as near-duplicate
        #[arg(long, default_value_t = cmav::corpus::DEFAULT_DEDUP_THRESHOLD)]
        dedup_threshold: f64,
    },
    /// Calibrate a verifier on a labeled, balanced training corpus
    Train {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value = "ppm")]
        compressor: CompressorKind,
        #[arg(long, default_value = "cbc")]
        measure: MeasureKind,
        /// Where the model JSON is written
        #[arg(long)]
        output: PathBuf,
        /// Downsample the larger class instead of failing on imbalance
        #[arg(long)]
        subsample_balance: bool,
        /// Seed for the balancing subsample
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Worker threads for scoring
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Verify one problem: known documents against one unknown
    Verify {
        #[arg(long)]
        model: PathBuf,
        /// Known document (repeatable)
        #[arg(long = "known", required = true)]
        known: Vec<PathBuf>,
        #[arg(long)]
        unknown: PathBuf,
        /// Override the model's threshold
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Evaluate a model on a labeled corpus and write a JSON report
    Evaluate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        corpus: PathBuf,
        /// Where the report JSON is written
        #[arg(long)]
        output: PathBuf,
        /// Override the model's threshold
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Training-AUC grid: five compressors by three measures per corpus
    Grid {
        /// Labeled training corpus (repeatable)
        #[arg(long = "corpus", required = true)]
        corpus: Vec<PathBuf>,
        /// Where the CSV is written (in addition to the printed table)
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn format_duration(seconds: f64) -> String {
    let total = seconds.round() as u64;
    format!(
        "{:02}:{:02}:{:02}",
        total / 3600,
        (total / 60) % 60,
        total % 60
    )
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.3}"))
}

fn run(command: Commands) -> Result<(), Error> {
    match command {
        Commands::Preprocess {
            input,
            output,
            dedup_threshold,
        } => {
            let summary = cli::run_preprocess(&input, &output, dedup_threshold)?;
            for warning in &summary.warnings {
                eprintln!("warning: {warning}");
            }
            println!(
                "cleaned {} problems into {} ({} near-duplicate(s) removed)",
                summary.problem_count,
                output.display(),
                summary.removed.len()
            );
            for entry in &summary.removed {
                println!(
                    "  {}: removed {} (overlap {:.4} with {})",
                    entry.problem_id,
                    entry.removal.removed,
                    entry.removal.coefficient,
                    entry.removal.kept
                );
            }
        }
        Commands::Train {
            corpus,
            compressor,
            measure,
            output,
            subsample_balance,
            seed,
            jobs,
        } => {
            let balance = subsample_balance.then_some(seed);
            let outcome = cli::run_train(&corpus, compressor, measure, &output, balance, jobs)?;
            let stats = &outcome.stats;
            println!(
                "theta = {} ({})",
                cmav::verification::theta_to_string(outcome.model.theta.0),
                outcome.model.theta.0
            );
            println!(
                "problems: {} ({} Y / {} N), calibrated on {} per class",
                stats.y_count + stats.n_count,
                stats.y_count,
                stats.n_count,
                stats.calibrated_per_class
            );
            println!("training AUC = {}", opt(stats.training_auc));
            println!(
                "FAR = {:.3}, FRR = {:.3} at theta",
                stats.far_at_theta, stats.frr_at_theta
            );
            println!("model written to {}", output.display());
        }
        Commands::Verify {
            model,
            known,
            unknown,
            threshold,
        } => {
            let out = cli::run_verify(&model, &known, &unknown, threshold)?;
            println!(
                "{}",
                serde_json::to_string(&out).expect("output serialization cannot fail")
            );
        }
        Commands::Evaluate {
            model,
            corpus,
            output,
            threshold,
            jobs,
        } => {
            let report = cli::run_evaluate(&model, &corpus, &output, threshold, jobs)?;
            for warning in &report.warnings {
                eprintln!("warning: {warning}");
            }
            println!("FS      AUC     c@1     UP  Runtime");
            println!(
                "{}   {}   {:.3}   {}   {}",
                opt(report.metrics.final_score),
                opt(report.metrics.auc),
                report.metrics.c_at_1,
                report
                    .rows
                    .iter()
                    .filter(|r| !r.answer.is_answered())
                    .count(),
                format_duration(report.duration_seconds)
            );
            println!("report written to {}", output.display());
        }
        Commands::Grid {
            corpus,
            output,
            jobs,
        } => {
            let result = cli::run_grid(&corpus, jobs)?;

            // one row per corpus plus the average row, measures grouped
            // under each compressor
            print!("{:<16}", "corpus");
            for compressor in CompressorKind::ALL {
                for measure in cli::GRID_MEASURES {
                    print!("  {:>11}", format!("{compressor}/{measure}"));
                }
            }
            println!();
            let mut names: Vec<&str> = result.cells.iter().map(|c| c.corpus.as_str()).collect();
            names.dedup();
            for name in names {
                print!("{name:<16}");
                for compressor in CompressorKind::ALL {
                    for measure in cli::GRID_MEASURES {
                        let cell = result
                            .cells
                            .iter()
                            .find(|c| {
                                c.corpus == name
                                    && c.compressor == compressor
                                    && c.measure == measure
                            })
                            .expect("every grid cell is filled");
                        print!("  {:>11.3}", cell.auc);
                    }
                }
                println!();
            }
            print!("{:<16}", "AVERAGE");
            for compressor in CompressorKind::ALL {
                for measure in cli::GRID_MEASURES {
                    let (_, _, auc) = result
                        .averages
                        .iter()
                        .find(|(c, m, _)| *c == compressor && *m == measure)
                        .expect("every average is filled");
                    print!("  {auc:>11.3}");
                }
            }
            println!();

            if let Some(path) = output {
                std::fs::write(&path, result.to_csv()).map_err(|source| Error::Io {
                    context: format!("writing {}", path.display()),
                    source,
                })?;
                println!("grid CSV written to {}", path.display());
            }
        }
    }
    Ok(())
}

#[cfg(unix)]
fn reset_sigpipe() {
    // die quietly when a pipe closes instead of panicking mid-print
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn main() -> ExitCode {
    reset_sigpipe();
    // clap's own usage-error exit code would collide with the corpus
    // error code, so argument failures map to 1 explicitly
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
