//! One-shot Grover search at the optimal invocation count.
//!
//! The baseline knows how many targets exist (not which ones), runs
//! `floor(pi/4 sqrt(2^n / M))` rounds over the iteration-1 encoding and keeps
//! the pairs that clear the same threshold the iterative search uses.
//!
//! The optimal count is derived from the full register dimension, so the
//! baseline amplifies over the full register by default; amplifying only over
//! the valid pairs with that count overshoots badly (see
//! [`gsearch_with_preparation`]).

use std::collections::{BTreeMap, BTreeSet};

use crate::encoding::{gen_indexes, PairRecord, TargetSet};
use crate::error::Result;
use crate::grover::optimal_num_invocations;
use crate::iqucs::{classify, filter_threshold, measure_instance, EncodedPair, FilterConfig, PrepMode};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineOutcome<T> {
    /// Original indexes at or above the threshold.
    pub predicted: BTreeSet<usize>,
    pub fidelities: BTreeMap<usize, T>,
    /// `I`.
    pub invocations: usize,
    /// `N_q`.
    pub total_qubits: usize,
    pub set_size: usize,
    pub threshold_value: T,
    pub preparation: PrepMode,
    pub pairs: Vec<EncodedPair>,
    /// Fidelities by original index after each of the `I` rounds.
    pub snapshots: Vec<BTreeMap<usize, T>>,
}

pub fn gsearch<T: Real>(
    records: &[PairRecord],
    targets: &TargetSet,
    config: &FilterConfig<T>,
) -> Result<BaselineOutcome<T>> {
    gsearch_with_preparation(records, targets, config, PrepMode::FullRegister)
}

pub fn gsearch_with_preparation<T: Real>(
    records: &[PairRecord],
    targets: &TargetSet,
    config: &FilterConfig<T>,
    preparation: PrepMode,
) -> Result<BaselineOutcome<T>> {
    config.validate()?;
    targets.check_present(records)?;
    let mut records = records.to_vec();
    let instance = gen_indexes(&mut records, 1)?;
    let invocations = optimal_num_invocations(instance.total_qubits(), targets.len())?;
    let (pairs, snapshots) =
        measure_instance(&instance, targets, preparation, invocations, config.shots_for(0))?;
    let fidelities = snapshots.last().cloned().unwrap_or_default();
    let threshold_value = filter_threshold(instance.len(), config.threshold_ts);
    let (predicted, _) = classify(&fidelities, threshold_value);
    Ok(BaselineOutcome {
        predicted,
        fidelities,
        invocations,
        total_qubits: instance.total_qubits(),
        set_size: instance.len(),
        threshold_value,
        preparation,
        pairs,
        snapshots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn dataset(n: u64) -> Vec<PairRecord> {
        (0..n).map(|v| PairRecord::new(v as usize, v)).collect()
    }

    #[test]
    fn dataset_ten() {
        let targets = TargetSet::new([0, 4, 9]).unwrap();
        let out = gsearch(&dataset(10), &targets, &FilterConfig::<f64>::exact()).unwrap();
        assert_eq!(out.invocations, 7);
        assert_eq!(out.total_qubits, 8);
        assert_eq!(out.predicted, BTreeSet::from([0, 4, 9]));
        assert_eq!(out.snapshots.len(), 7);
    }

    #[test]
    fn valid_pair_preparation_overshoots() {
        // Seven rounds over 10 states with 3 marked: each unmarked pair ends at
        // 0.079, above the 0.053 cut, so every record is predicted.
        let targets = TargetSet::new([0, 4, 9]).unwrap();
        let out = gsearch_with_preparation(
            &dataset(10),
            &targets,
            &FilterConfig::<f64>::exact(),
            PrepMode::ValidPairs,
        )
        .unwrap();
        assert_eq!(out.invocations, 7);
        assert_eq!(out.predicted.len(), 10);
    }

    #[test]
    fn dataset_hundred() {
        let targets = TargetSet::new((0..100).step_by(5)).unwrap();
        let out = gsearch(&dataset(100), &targets, &FilterConfig::<f64>::exact()).unwrap();
        assert_eq!(out.invocations, 22);
        assert_eq!(out.total_qubits, 14);
        assert_eq!(out.predicted, (0..100).step_by(5).collect());
    }

    #[test]
    fn single_record() {
        let targets = TargetSet::new([0]).unwrap();
        let out = gsearch(&dataset(1), &targets, &FilterConfig::<f64>::exact()).unwrap();
        assert_eq!(out.invocations, 1);
        assert_eq!(out.total_qubits, 2);
        assert_eq!(out.predicted, BTreeSet::from([0]));
    }

    #[test]
    fn missing_target() {
        let targets = TargetSet::new([11]).unwrap();
        assert!(matches!(
            gsearch(&dataset(10), &targets, &FilterConfig::<f64>::exact()),
            Err(Error::TargetMissing(11))
        ));
    }
}
