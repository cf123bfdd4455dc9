//! Grover-based index search over `(index, value)` pairs with iterative
//! qubit reduction.
//!
//! The crate is organised bottom-up:
//!
//! - [`statevector`]: dense complex amplitude arrays and the three reflections
//!   amplitude amplification needs.
//! - [`grover`]: oracle/diffusion rounds over a prepared subset and the
//!   optimal invocation count used by the one-shot baseline.
//! - [`encoding`]: index/value regeneration, rank compaction and pair codes.
//! - [`iqucs`]: the iterative search loop with threshold filtering.
//! - [`baseline`]: one-shot Grover search at the optimal invocation count.
//! - [`metrics`]: cumulative qubit consumption, accuracy and reductions.
//!
//! All numerical code is generic over the scalar type ([`Real`]); the
//! `*F64` / `*F32` aliases below fix it for the common cases.

pub mod baseline;
pub mod encoding;
pub mod error;
pub mod grover;
pub mod iqucs;
pub mod metrics;
pub mod scalar;
pub mod statevector;

pub use baseline::{gsearch, gsearch_with_preparation, BaselineOutcome};
pub use encoding::{
    encode_pair, gen_indexes, gen_values, rank, register_width, PairRecord, ProblemInstance,
    TargetSet, Wordlist,
};
pub use error::{Error, Result};
pub use grover::{optimal_num_invocations, GroverRun};
pub use iqucs::{
    classify, filter_threshold, invocations_for, search, search_with_preparation, EncodedPair,
    FilterConfig, IterationRecord, SearchOutcome, Termination,
};
pub use metrics::{accuracy, cqc, reduction, round_tenth, ComparisonReport, CqcEntry, CqcTrace};
pub use scalar::Real;
pub use statevector::{AmplitudeState, Preparation};

pub type AmplitudeStateF64 = AmplitudeState<f64>;
pub type AmplitudeStateF32 = AmplitudeState<f32>;
pub type FilterConfigF64 = FilterConfig<f64>;
pub type FilterConfigF32 = FilterConfig<f32>;
pub type SearchOutcomeF64 = SearchOutcome<f64>;
pub type SearchOutcomeF32 = SearchOutcome<f32>;
pub type BaselineOutcomeF64 = BaselineOutcome<f64>;
pub type BaselineOutcomeF32 = BaselineOutcome<f32>;
pub type IterationRecordF64 = IterationRecord<f64>;
