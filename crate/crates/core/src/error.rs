use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("preparation subset is empty")]
    EmptySubset,
    #[error("basis code {code} out of range for a {num_qubits}-qubit register")]
    CodeOutOfRange { code: usize, num_qubits: usize },
    #[error("register of {0} qubits is too wide for a dense statevector")]
    RegisterTooWide(usize),
    #[error("marked code {0} is not part of the prepared subset")]
    MarkedOutsidePreparation(usize),
    #[error("number of targets must be positive")]
    ZeroTargets,
    #[error("{targets} targets exceed the {dimension}-state register")]
    TooManyTargets { targets: usize, dimension: usize },
    #[error("target set is empty")]
    EmptyTargetSet,
    #[error("target value {0} does not occur in the dataset")]
    TargetMissing(u64),
    #[error("no alive records left at iteration {0}")]
    EmptyWorkingSet(usize),
    #[error("iteration numbers start at 1")]
    InvalidIteration,
    #[error("{field} {value} does not fit in {width} qubits")]
    FieldExceedsWidth { field: &'static str, value: u64, width: usize },
    #[error("record {0} has been filtered out and cannot be encoded")]
    FilteredRecord(usize),
    #[error("threshold must lie in (0, 1], got {0}")]
    InvalidThreshold(f64),
    #[error("shots must be positive")]
    ZeroShots,
    #[error("CQC trace is empty")]
    EmptyTrace,
    #[error("CQC trace entry ({qubits} qubits, {invocations} invocations) is not positive")]
    NonPositiveEntry { qubits: usize, invocations: usize },
    #[error("dataset size must be positive")]
    ZeroDatasetSize,
    #[error("baseline CQC must be positive")]
    ZeroBaseline,
    #[error("cannot read word list {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("word list line {0} is empty")]
    EmptyWordlistLine(usize),
    #[error("word list has {available} entries, {requested} requested")]
    NotEnoughWords { available: usize, requested: usize },
}
