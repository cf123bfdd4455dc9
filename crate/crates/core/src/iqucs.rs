//! Iterative quantum search.
//!
//! Each iteration encodes the surviving pairs, runs one or two Grover rounds
//! (odd iterations one, even iterations two), reads the fidelity of every
//! pair and drops the pairs whose fidelity falls below `T_s` times the
//! uniform mean `1 / 2^ceil(log2 |G_i|)`. The loop stops once two consecutive
//! iterations keep exactly the same set of potential solutions.

use std::collections::{BTreeMap, BTreeSet};

use crate::encoding::{ceil_log2, gen_indexes, PairRecord, ProblemInstance, TargetSet};
use crate::error::{Error, Result};
use crate::grover::{derive_seed, GroverRun, Shots};
use crate::scalar::Real;
use crate::statevector::Preparation;

pub const DEFAULT_THRESHOLD: f64 = 0.85;
pub const DEFAULT_SHOTS: u64 = 12_000;
pub const DEFAULT_MAX_ITERATIONS: usize = 50;

/// Filtering and measurement parameters shared by both search methods.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterConfig<T> {
    /// Multiplier `T_s` applied to the uniform mean probability.
    pub threshold_ts: T,
    /// Shots per fidelity readout; 0 reads exact probabilities.
    pub shots: u64,
    pub seed: u64,
    pub max_iterations: usize,
}

impl<T: Real> Default for FilterConfig<T> {
    fn default() -> Self {
        Self {
            threshold_ts: T::from_f64_lossy(DEFAULT_THRESHOLD),
            shots: DEFAULT_SHOTS,
            seed: 0,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }
}

impl<T: Real> FilterConfig<T> {
    /// Exact probabilities, default threshold.
    pub fn exact() -> Self {
        Self { shots: 0, ..Self::default() }
    }

    pub fn sampled(shots: u64, seed: u64) -> Self {
        Self { shots, seed, ..Self::default() }
    }

    pub fn with_threshold(self, threshold_ts: T) -> Self {
        Self { threshold_ts, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let ts = self.threshold_ts;
        if !(ts > T::zero() && ts <= T::one()) {
            return Err(Error::InvalidThreshold(ts.to_f64_lossy()));
        }
        Ok(())
    }

    pub fn is_exact(&self) -> bool {
        self.shots == 0
    }

    pub(crate) fn shots_for(&self, tag: u64) -> Option<Shots> {
        (!self.is_exact()).then(|| Shots { shots: self.shots, seed: derive_seed(self.seed, tag) })
    }
}

/// Which superposition a search prepares before amplifying.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PrepMode {
    /// Uniform over the encoded pairs of the working set only.
    #[default]
    ValidPairs,
    /// Uniform over the whole `idx + val` qubit register.
    FullRegister,
}

/// Grover rounds at iteration `iteration`: 1 when odd, 2 when even.
pub fn invocations_for(iteration: usize) -> usize {
    (iteration + 1) % 2 + 1
}

/// `threshold_ts / 2^ceil(log2 set_size)`.
pub fn filter_threshold<T: Real>(set_size: usize, threshold_ts: T) -> T {
    threshold_ts / T::from_count(1usize << ceil_log2(set_size))
}

/// Splits `fidelities` into (potential, filtered); strictly below the
/// threshold is filtered.
pub fn classify<K: Ord + Copy, T: Real>(
    fidelities: &BTreeMap<K, T>,
    threshold: T,
) -> (BTreeSet<K>, BTreeSet<K>) {
    let (filtered, potential): (Vec<_>, Vec<_>) =
        fidelities.iter().partition(|(_, &fidelity)| fidelity < threshold);
    (
        potential.into_iter().map(|(&k, _)| k).collect(),
        filtered.into_iter().map(|(&k, _)| k).collect(),
    )
}

/// A pair as it was encoded at one iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncodedPair {
    pub pair_code: usize,
    pub original_index: usize,
    pub original_value: u64,
    pub current_index: usize,
    pub current_value: u64,
}

/// Trace of one iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord<T> {
    pub iteration: usize,
    /// Grover rounds `C_i`.
    pub invocations: usize,
    /// `|G_i|`.
    pub set_size: usize,
    pub idx_qubits: usize,
    pub val_qubits: usize,
    /// `N_{q_i}`.
    pub total_qubits: usize,
    pub threshold_value: T,
    pub pairs: Vec<EncodedPair>,
    /// Fidelities by original index after each round of this iteration.
    pub snapshots: Vec<BTreeMap<usize, T>>,
    /// Fidelities the filter was applied to (the last snapshot).
    pub fidelities: BTreeMap<usize, T>,
    pub potential: BTreeSet<usize>,
    pub filtered: BTreeSet<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Two consecutive iterations kept the same potential set.
    Converged,
    /// The iteration cap was reached first.
    IterationCap,
    /// Every record was filtered out.
    Exhausted,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::Converged => "converged",
            Termination::IterationCap => "iteration_cap",
            Termination::Exhausted => "exhausted",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome<T> {
    pub solution_original_indexes: BTreeSet<usize>,
    pub trace: Vec<IterationRecord<T>>,
    pub termination: Termination,
}

impl<T> SearchOutcome<T> {
    pub fn converged(&self) -> bool {
        self.termination == Termination::Converged
    }

    pub fn iterations_used(&self) -> usize {
        self.trace.len()
    }

    pub fn total_invocations(&self) -> usize {
        self.trace.iter().map(|r| r.invocations).sum()
    }
}

/// Fidelities by original index, one map per round.
pub(crate) type Snapshots<T> = Vec<BTreeMap<usize, T>>;

/// Pairs of `instance` and their fidelities after each of `invocations`
/// rounds (keyed by original index). With zero rounds the prepared state is
/// read once.
pub(crate) fn measure_instance<T: Real>(
    instance: &ProblemInstance,
    targets: &TargetSet,
    mode: PrepMode,
    invocations: usize,
    shots: Option<Shots>,
) -> Result<(Vec<EncodedPair>, Snapshots<T>)> {
    let codes = instance.codes()?;
    let pairs: Vec<EncodedPair> = instance
        .pairs
        .iter()
        .zip(&codes)
        .map(|(p, &pair_code)| EncodedPair {
            pair_code,
            original_index: p.original_index(),
            original_value: p.original_value(),
            current_index: p.current_index().expect("instances hold alive records only"),
            current_value: p.current_value(),
        })
        .collect();
    let marked = pairs
        .iter()
        .filter(|p| targets.contains(p.original_value))
        .map(|p| p.pair_code);
    let preparation = match mode {
        PrepMode::ValidPairs => Preparation::subset(codes.iter().copied()),
        PrepMode::FullRegister => Preparation::FullRegister,
    };
    let run = GroverRun::with_preparation(instance.total_qubits(), preparation, marked, invocations)?;
    let mut snapshots = run.snapshots::<T>(&codes, shots)?;
    if invocations > 0 {
        snapshots.remove(0);
    }
    let by_original = snapshots
        .into_iter()
        .map(|snap| pairs.iter().map(|p| (p.original_index, snap[&p.pair_code])).collect())
        .collect();
    Ok((pairs, by_original))
}

/// Iterative search with the valid-pair preparation.
pub fn search<T: Real>(
    records: &[PairRecord],
    targets: &TargetSet,
    config: &FilterConfig<T>,
) -> Result<SearchOutcome<T>> {
    search_with_preparation(records, targets, config, PrepMode::ValidPairs)
}

pub fn search_with_preparation<T: Real>(
    records: &[PairRecord],
    targets: &TargetSet,
    config: &FilterConfig<T>,
    mode: PrepMode,
) -> Result<SearchOutcome<T>> {
    config.validate()?;
    targets.check_present(records)?;
    let mut records = records.to_vec();
    let mut trace: Vec<IterationRecord<T>> = Vec::new();
    let mut previous: Option<BTreeSet<usize>> = None;

    for iteration in 1..=config.max_iterations {
        let instance = match gen_indexes(&mut records, iteration) {
            Ok(instance) => instance,
            Err(Error::EmptyWorkingSet(_)) => {
                return Ok(SearchOutcome {
                    solution_original_indexes: BTreeSet::new(),
                    trace,
                    termination: Termination::Exhausted,
                })
            }
            Err(e) => return Err(e),
        };
        let invocations = invocations_for(iteration);
        let shots = config.shots_for(iteration as u64);
        let (pairs, snapshots) = measure_instance(&instance, targets, mode, invocations, shots)?;
        let fidelities = snapshots.last().cloned().unwrap_or_default();
        let threshold_value = filter_threshold(instance.len(), config.threshold_ts);
        let (potential, filtered) = classify(&fidelities, threshold_value);

        // Original indexes equal dataset positions from iteration 1 on.
        for &index in &filtered {
            records[index].filter_out();
        }
        trace.push(IterationRecord {
            iteration,
            invocations,
            set_size: instance.len(),
            idx_qubits: instance.idx_qubits,
            val_qubits: instance.val_qubits,
            total_qubits: instance.total_qubits(),
            threshold_value,
            pairs,
            snapshots,
            fidelities,
            potential: potential.clone(),
            filtered,
        });
        if previous.as_ref() == Some(&potential) {
            return Ok(SearchOutcome {
                solution_original_indexes: potential,
                trace,
                termination: Termination::Converged,
            });
        }
        previous = Some(potential);
    }
    Ok(SearchOutcome {
        solution_original_indexes: previous.unwrap_or_default(),
        trace,
        termination: Termination::IterationCap,
    })
}
