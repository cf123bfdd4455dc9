//! Cumulative qubit consumption, accuracy and reduction percentages.

use std::collections::BTreeSet;

use crate::baseline::BaselineOutcome;
use crate::error::{Error, Result};
use crate::iqucs::SearchOutcome;

/// One Grover batch: `invocations` rounds on a `qubits`-wide register.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CqcEntry {
    pub qubits: usize,
    pub invocations: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CqcTrace {
    pub entries: Vec<CqcEntry>,
}

impl CqcTrace {
    /// From `(qubits, invocations)` pairs.
    pub fn new(entries: impl IntoIterator<Item = (usize, usize)>) -> Self {
        Self {
            entries: entries
                .into_iter()
                .map(|(qubits, invocations)| CqcEntry { qubits, invocations })
                .collect(),
        }
    }

    pub fn from_search<T>(outcome: &SearchOutcome<T>) -> Self {
        Self::new(outcome.trace.iter().map(|r| (r.total_qubits, r.invocations)))
    }

    pub fn from_baseline<T>(outcome: &BaselineOutcome<T>) -> Self {
        Self::new([(outcome.total_qubits, outcome.invocations)])
    }

    pub fn concat(mut self, other: &CqcTrace) -> Self {
        self.entries.extend_from_slice(&other.entries);
        self
    }
}

/// `sum qubits * invocations`.
pub fn cqc(trace: &CqcTrace) -> Result<u64> {
    if trace.entries.is_empty() {
        return Err(Error::EmptyTrace);
    }
    trace.entries.iter().try_fold(0u64, |acc, e| {
        if e.qubits == 0 || e.invocations == 0 {
            return Err(Error::NonPositiveEntry { qubits: e.qubits, invocations: e.invocations });
        }
        Ok(acc + (e.qubits as u64) * (e.invocations as u64))
    })
}

/// Fraction of the dataset classified correctly.
pub fn accuracy(
    predicted: &BTreeSet<usize>,
    truth: &BTreeSet<usize>,
    dataset_size: usize,
) -> Result<f64> {
    if dataset_size == 0 {
        return Err(Error::ZeroDatasetSize);
    }
    let errors = predicted.symmetric_difference(truth).count();
    Ok(dataset_size.saturating_sub(errors) as f64 / dataset_size as f64)
}

/// Percentage saved relative to the baseline: `100 (1 - iqucs / baseline)`.
pub fn reduction(baseline_cqc: u64, iqucs_cqc: u64) -> Result<f64> {
    if baseline_cqc == 0 {
        return Err(Error::ZeroBaseline);
    }
    Ok(100.0 * (1.0 - iqucs_cqc as f64 / baseline_cqc as f64))
}

pub fn round_tenth(x: f64) -> f64 {
    (x * 10.0).round() / 10.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub baseline_cqc: u64,
    pub iqucs_cqc: u64,
    pub reduction_pct: f64,
    pub baseline_accuracy: f64,
    pub iqucs_accuracy: f64,
    pub baseline_invocations: usize,
    pub iqucs_invocations: usize,
}

impl ComparisonReport {
    pub fn new<T>(
        search: &SearchOutcome<T>,
        baseline: &BaselineOutcome<T>,
        truth: &BTreeSet<usize>,
        dataset_size: usize,
    ) -> Result<Self> {
        let baseline_cqc = cqc(&CqcTrace::from_baseline(baseline))?;
        let iqucs_cqc = cqc(&CqcTrace::from_search(search))?;
        Ok(Self {
            baseline_cqc,
            iqucs_cqc,
            reduction_pct: reduction(baseline_cqc, iqucs_cqc)?,
            baseline_accuracy: accuracy(&baseline.predicted, truth, dataset_size)?,
            iqucs_accuracy: accuracy(&search.solution_original_indexes, truth, dataset_size)?,
            baseline_invocations: baseline.invocations,
            iqucs_invocations: search.total_invocations(),
        })
    }
}
