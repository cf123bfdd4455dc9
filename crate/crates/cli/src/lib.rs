//! Experiment harness: runs the iterative search and/or the one-shot
//! baseline on a ranked word list and writes `report.json` plus one
//! probability histogram CSV per Grover invocation.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use iqucs_core::iqucs::{DEFAULT_MAX_ITERATIONS, DEFAULT_SHOTS, DEFAULT_THRESHOLD};
use iqucs_core::{
    accuracy, cqc, gsearch, round_tenth, search, BaselineOutcomeF64, ComparisonReport, CqcTrace,
    EncodedPair, FilterConfigF64, SearchOutcomeF64, TargetSet, Wordlist,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

pub const REPORT_FILE: &str = "report.json";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Search(#[from] iqucs_core::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write histogram {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 for bad input, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        use iqucs_core::Error as E;
        match self {
            CliError::InvalidConfig(_) => 2,
            CliError::Search(
                E::TargetMissing(_)
                | E::EmptyTargetSet
                | E::InvalidThreshold(_)
                | E::NotEnoughWords { .. }
                | E::EmptyWordlistLine(_)
                | E::Io { .. },
            ) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Iqucs,
    Gsearch,
    Both,
}

impl Mode {
    fn runs_iqucs(self) -> bool {
        matches!(self, Mode::Iqucs | Mode::Both)
    }

    fn runs_gsearch(self) -> bool {
        matches!(self, Mode::Gsearch | Mode::Both)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TargetSpec {
    /// Explicit word ranks.
    Values(Vec<u64>),
    /// `count` ranks drawn uniformly without replacement.
    Random { count: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub dataset_size: usize,
    pub targets: TargetSpec,
    pub mode: Mode,
    /// 0 reads exact probabilities.
    pub shots: u64,
    pub threshold_ts: f64,
    pub seed: u64,
    pub wordlist: Option<PathBuf>,
    /// Use the built-in corpus when `wordlist` cannot be read.
    pub fallback_builtin: bool,
    pub output_dir: PathBuf,
    pub max_iterations: usize,
}

impl RunConfig {
    pub fn new(dataset_size: usize, targets: TargetSpec, output_dir: impl Into<PathBuf>) -> Self {
        Self {
            dataset_size,
            targets,
            mode: Mode::Both,
            shots: DEFAULT_SHOTS,
            threshold_ts: DEFAULT_THRESHOLD,
            seed: 0,
            wordlist: None,
            fallback_builtin: false,
            output_dir: output_dir.into(),
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let invalid = |msg: String| Err(CliError::InvalidConfig(msg));
        if self.dataset_size == 0 {
            return invalid("dataset size must be at least 1".into());
        }
        if !(self.threshold_ts > 0.0 && self.threshold_ts <= 1.0) {
            return invalid(format!("threshold must lie in (0, 1], got {}", self.threshold_ts));
        }
        if self.max_iterations == 0 {
            return invalid("max iterations must be at least 1".into());
        }
        match &self.targets {
            TargetSpec::Values(values) => {
                if values.is_empty() {
                    return invalid("at least one target is required".into());
                }
                if let Some(v) = values.iter().find(|&&v| v >= self.dataset_size as u64) {
                    return invalid(format!(
                        "target {v} is outside the dataset of size {}",
                        self.dataset_size
                    ));
                }
            }
            TargetSpec::Random { count, .. } => {
                if *count == 0 || *count > self.dataset_size {
                    return invalid(format!(
                        "target count must be in 1..={}, got {count}",
                        self.dataset_size
                    ));
                }
            }
        }
        Ok(())
    }

    fn filter_config(&self) -> FilterConfigF64 {
        FilterConfigF64 {
            threshold_ts: self.threshold_ts,
            shots: self.shots,
            seed: self.seed,
            max_iterations: self.max_iterations,
        }
    }
}

/// Resolves the target ranks for a dataset of `dataset_size` words.
pub fn resolve_targets(spec: &TargetSpec, dataset_size: usize) -> Result<TargetSet, CliError> {
    let values: Vec<u64> = match spec {
        TargetSpec::Values(values) => values.clone(),
        TargetSpec::Random { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            rand::seq::index::sample(&mut rng, dataset_size, *count)
                .into_iter()
                .map(|v| v as u64)
                .collect()
        }
    };
    Ok(TargetSet::new(values)?)
}

/// One row of a probability histogram.
#[derive(Debug, Clone, PartialEq)]
pub struct HistogramRow {
    pub pair_code: usize,
    pub original_index: usize,
    pub original_value: u64,
    pub current_index: usize,
    pub current_value: u64,
    pub probability: f64,
    pub filtered: bool,
}

/// Rows for the working-set pairs, sorted by original index; `filtered`
/// marks probabilities strictly below `threshold`.
pub fn histogram_rows(
    pairs: &[EncodedPair],
    snapshot: &BTreeMap<usize, f64>,
    threshold: f64,
) -> Vec<HistogramRow> {
    let mut rows: Vec<HistogramRow> = pairs
        .iter()
        .map(|p| {
            let probability = snapshot.get(&p.original_index).copied().unwrap_or(0.0);
            HistogramRow {
                pair_code: p.pair_code,
                original_index: p.original_index,
                original_value: p.original_value,
                current_index: p.current_index,
                current_value: p.current_value,
                probability,
                filtered: probability < threshold,
            }
        })
        .collect();
    rows.sort_by_key(|r| r.original_index);
    rows
}

/// Writes `rows` as CSV with the columns
/// `pair_code,original_index,original_value,current_index,current_value,probability,filtered`.
pub fn emit_histogram(rows: &[HistogramRow], path: &Path) -> Result<(), CliError> {
    let csv_err = |source| CliError::Csv { path: path.to_path_buf(), source };
    let mut writer = csv::Writer::from_path(path).map_err(csv_err)?;
    writer
        .write_record([
            "pair_code",
            "original_index",
            "original_value",
            "current_index",
            "current_value",
            "probability",
            "filtered",
        ])
        .map_err(csv_err)?;
    for r in rows {
        writer
            .write_record([
                r.pair_code.to_string(),
                r.original_index.to_string(),
                r.original_value.to_string(),
                r.current_index.to_string(),
                r.current_value.to_string(),
                format!("{:.12}", r.probability),
                u8::from(r.filtered).to_string(),
            ])
            .map_err(csv_err)?;
    }
    writer.flush().map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// Rounds to 12 decimals so serialized floats do not depend on the last ulp.
fn fixed(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fidelity {
    pub original_index: usize,
    pub probability: f64,
}

fn fidelity_list(map: &BTreeMap<usize, f64>) -> Vec<Fidelity> {
    map.iter()
        .map(|(&original_index, &p)| Fidelity { original_index, probability: fixed(p) })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportConfig {
    pub dataset_size: usize,
    pub mode: Mode,
    pub shots: u64,
    pub threshold_ts: f64,
    pub seed: u64,
    pub target_seed: Option<u64>,
    pub wordlist: Option<String>,
    pub max_iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TargetEntry {
    pub value: u64,
    pub word: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationReport {
    pub iteration: usize,
    pub invocations: usize,
    pub set_size: usize,
    pub idx_qubits: usize,
    pub val_qubits: usize,
    pub total_qubits: usize,
    pub threshold_value: f64,
    pub potential: Vec<usize>,
    pub filtered: Vec<usize>,
    pub fidelities: Vec<Fidelity>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IqucsReport {
    pub solution_original_indexes: Vec<usize>,
    pub converged: bool,
    pub termination: &'static str,
    pub iterations_used: usize,
    pub total_invocations: usize,
    pub cqc: u64,
    pub accuracy: f64,
    pub trace: Vec<IterationReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GsearchReport {
    pub predicted: Vec<usize>,
    pub invocations: usize,
    pub total_qubits: usize,
    pub set_size: usize,
    pub threshold_value: f64,
    pub cqc: u64,
    pub accuracy: f64,
    pub fidelities: Vec<Fidelity>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonJson {
    pub baseline_cqc: u64,
    pub iqucs_cqc: u64,
    pub reduction_pct: f64,
    pub reduction_pct_display: f64,
    pub baseline_accuracy: f64,
    pub iqucs_accuracy: f64,
    pub baseline_invocations: usize,
    pub iqucs_invocations: usize,
}

impl From<&ComparisonReport> for ComparisonJson {
    fn from(c: &ComparisonReport) -> Self {
        Self {
            baseline_cqc: c.baseline_cqc,
            iqucs_cqc: c.iqucs_cqc,
            reduction_pct: fixed(c.reduction_pct),
            reduction_pct_display: round_tenth(c.reduction_pct),
            baseline_accuracy: fixed(c.baseline_accuracy),
            iqucs_accuracy: fixed(c.iqucs_accuracy),
            baseline_invocations: c.baseline_invocations,
            iqucs_invocations: c.iqucs_invocations,
        }
    }
}

/// Contents of `report.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub config: ReportConfig,
    pub targets: Vec<TargetEntry>,
    pub truth_indexes: Vec<usize>,
    pub comparison: Option<ComparisonJson>,
    pub iqucs: Option<IqucsReport>,
    pub gsearch: Option<GsearchReport>,
    pub histograms: Vec<String>,
}

/// Everything a run produced, in memory and on disk.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub report: Report,
    pub iqucs: Option<SearchOutcomeF64>,
    pub gsearch: Option<BaselineOutcomeF64>,
    pub comparison: Option<ComparisonReport>,
    pub files: Vec<PathBuf>,
}

impl RunSummary {
    /// False when the iterative search did not converge.
    pub fn success(&self) -> bool {
        self.iqucs.as_ref().is_none_or(|o| o.converged())
    }
}

fn iqucs_report(outcome: &SearchOutcomeF64, truth: &BTreeSet<usize>, size: usize) -> Result<IqucsReport, CliError> {
    Ok(IqucsReport {
        solution_original_indexes: outcome.solution_original_indexes.iter().copied().collect(),
        converged: outcome.converged(),
        termination: outcome.termination.as_str(),
        iterations_used: outcome.iterations_used(),
        total_invocations: outcome.total_invocations(),
        cqc: cqc(&CqcTrace::from_search(outcome))?,
        accuracy: fixed(accuracy(&outcome.solution_original_indexes, truth, size)?),
        trace: outcome
            .trace
            .iter()
            .map(|r| IterationReport {
                iteration: r.iteration,
                invocations: r.invocations,
                set_size: r.set_size,
                idx_qubits: r.idx_qubits,
                val_qubits: r.val_qubits,
                total_qubits: r.total_qubits,
                threshold_value: fixed(r.threshold_value),
                potential: r.potential.iter().copied().collect(),
                filtered: r.filtered.iter().copied().collect(),
                fidelities: fidelity_list(&r.fidelities),
            })
            .collect(),
    })
}

fn gsearch_report(outcome: &BaselineOutcomeF64, truth: &BTreeSet<usize>, size: usize) -> Result<GsearchReport, CliError> {
    Ok(GsearchReport {
        predicted: outcome.predicted.iter().copied().collect(),
        invocations: outcome.invocations,
        total_qubits: outcome.total_qubits,
        set_size: outcome.set_size,
        threshold_value: fixed(outcome.threshold_value),
        cqc: cqc(&CqcTrace::from_baseline(outcome))?,
        accuracy: fixed(accuracy(&outcome.predicted, truth, size)?),
        fidelities: fidelity_list(&outcome.fidelities),
    })
}

/// Runs the configured experiment and writes its output tree.
///
/// A search that ends without converging still produces a full report;
/// check [`RunSummary::success`].
pub fn run_experiment(config: &RunConfig) -> Result<RunSummary, CliError> {
    config.validate()?;
    let wordlist = match &config.wordlist {
        Some(path) => Wordlist::load(path, config.fallback_builtin)?,
        None => Wordlist::builtin(),
    };
    let records = wordlist.records(config.dataset_size)?;
    let targets = resolve_targets(&config.targets, config.dataset_size)?;
    let truth = targets.truth_indexes(&records);
    let filter = config.filter_config();

    let iqucs = config.mode.runs_iqucs().then(|| search(&records, &targets, &filter)).transpose()?;
    let baseline =
        config.mode.runs_gsearch().then(|| gsearch(&records, &targets, &filter)).transpose()?;
    let comparison = match (&iqucs, &baseline) {
        (Some(s), Some(b)) => Some(ComparisonReport::new(s, b, &truth, config.dataset_size)?),
        _ => None,
    };

    let out = &config.output_dir;
    fs::create_dir_all(out).map_err(|source| CliError::Io { path: out.clone(), source })?;
    let mut files = Vec::new();
    let mut histograms = Vec::new();
    let mut write_histogram = |name: String, rows: Vec<HistogramRow>| -> Result<(), CliError> {
        let path = out.join(&name);
        emit_histogram(&rows, &path)?;
        histograms.push(name);
        files.push(path);
        Ok(())
    };
    if let Some(outcome) = &iqucs {
        let mut invocation = 0;
        for record in &outcome.trace {
            for snapshot in &record.snapshots {
                invocation += 1;
                write_histogram(
                    format!("iqucs_iter{}_inv{}.csv", record.iteration, invocation),
                    histogram_rows(&record.pairs, snapshot, record.threshold_value),
                )?;
            }
        }
    }
    if let Some(outcome) = &baseline {
        for (k, snapshot) in outcome.snapshots.iter().enumerate() {
            write_histogram(
                format!("gsearch_iter1_inv{}.csv", k + 1),
                histogram_rows(&outcome.pairs, snapshot, outcome.threshold_value),
            )?;
        }
    }

    let report = Report {
        schema_version: SCHEMA_VERSION,
        config: ReportConfig {
            dataset_size: config.dataset_size,
            mode: config.mode,
            shots: config.shots,
            threshold_ts: config.threshold_ts,
            seed: config.seed,
            target_seed: match config.targets {
                TargetSpec::Random { seed, .. } => Some(seed),
                TargetSpec::Values(_) => None,
            },
            wordlist: config.wordlist.as_ref().map(|p| p.display().to_string()),
            max_iterations: config.max_iterations,
        },
        targets: targets
            .values()
            .iter()
            .map(|&value| TargetEntry {
                value,
                word: wordlist.word(value as usize).map(str::to_string),
            })
            .collect(),
        truth_indexes: truth.iter().copied().collect(),
        comparison: comparison.as_ref().map(ComparisonJson::from),
        iqucs: iqucs.as_ref().map(|o| iqucs_report(o, &truth, config.dataset_size)).transpose()?,
        gsearch: baseline
            .as_ref()
            .map(|o| gsearch_report(o, &truth, config.dataset_size))
            .transpose()?,
        histograms,
    };
    let report_path = out.join(REPORT_FILE);
    let mut json = serde_json::to_string_pretty(&report)?;
    json.push('\n');
    fs::write(&report_path, json).map_err(|source| CliError::Io { path: report_path.clone(), source })?;
    files.push(report_path);

    Ok(RunSummary { report, iqucs, gsearch: baseline, comparison, files })
}
