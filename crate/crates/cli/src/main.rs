use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser};
use iqucs_cli::{run_experiment, Mode, RunConfig, TargetSpec};
use iqucs_core::iqucs::{DEFAULT_MAX_ITERATIONS, DEFAULT_SHOTS, DEFAULT_THRESHOLD};

/// Compare iterative qubit-reducing Grover search against one-shot Grover
/// search on a frequency-ranked word list.
#[derive(Debug, Parser)]
#[command(name = "iqucs", version)]
#[command(group(ArgGroup::new("target").required(true).args(["targets", "num_targets"])))]
struct Args {
    /// Number of top-ranked words in the dataset.
    #[arg(long, default_value_t = 10)]
    size: usize,

    /// Comma-separated word ranks to search for.
    #[arg(long, value_delimiter = ',')]
    targets: Vec<u64>,

    /// Draw this many targets uniformly at random instead.
    #[arg(long)]
    num_targets: Option<usize>,

    /// Seed for random target selection (defaults to --seed).
    #[arg(long, requires = "num_targets")]
    target_seed: Option<u64>,

    #[arg(long, value_enum, default_value_t = Mode::Both)]
    mode: Mode,

    /// Measurement shots per readout; 0 uses exact probabilities.
    #[arg(long, default_value_t = DEFAULT_SHOTS)]
    shots: u64,

    /// Filter threshold multiplier T_s.
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    threshold: f64,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Word list, one word per line in rank order (built-in top-100 if omitted).
    #[arg(long)]
    wordlist: Option<PathBuf>,

    /// Fall back to the built-in word list if --wordlist cannot be read.
    #[arg(long)]
    fallback_builtin: bool,

    #[arg(long, default_value_t = DEFAULT_MAX_ITERATIONS)]
    max_iterations: usize,

    /// Output directory for report.json and histogram CSVs.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

impl Args {
    fn into_config(self) -> RunConfig {
        let targets = match self.num_targets {
            Some(count) => TargetSpec::Random { count, seed: self.target_seed.unwrap_or(self.seed) },
            None => TargetSpec::Values(self.targets),
        };
        RunConfig {
            dataset_size: self.size,
            targets,
            mode: self.mode,
            shots: self.shots,
            threshold_ts: self.threshold,
            seed: self.seed,
            wordlist: self.wordlist,
            fallback_builtin: self.fallback_builtin,
            output_dir: self.out,
            max_iterations: self.max_iterations,
        }
    }
}

fn main() -> ExitCode {
    let config = Args::parse().into_config();
    let summary = match run_experiment(&config) {
        Ok(summary) => summary,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };

    let report = &summary.report;
    if let Some(iq) = &report.iqucs {
        println!(
            "iqucs:   {} after {} iterations, {} invocations, CQC {}, accuracy {:.3}",
            iq.termination, iq.iterations_used, iq.total_invocations, iq.cqc, iq.accuracy
        );
    }
    if let Some(gs) = &report.gsearch {
        println!(
            "gsearch: {} invocations on {} qubits, CQC {}, accuracy {:.3}",
            gs.invocations, gs.total_qubits, gs.cqc, gs.accuracy
        );
    }
    if let Some(c) = &report.comparison {
        println!("CQC reduction: {:.1}%", c.reduction_pct_display);
    }
    println!("wrote {} files to {}", summary.files.len(), config.output_dir.display());

    if summary.success() {
        ExitCode::SUCCESS
    } else {
        eprintln!("iterative search did not converge");
        ExitCode::from(1)
    }
}
