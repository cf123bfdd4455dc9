//! Amplitude amplification rounds and the optimal invocation count.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::statevector::{AmplitudeState, Preparation};

/// Measurement budget for sampled fidelity estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shots {
    pub shots: u64,
    pub seed: u64,
}

/// SplitMix64 finaliser; derives independent sampling seeds from one base seed.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One Grover search: a preparation, the marked codes and a round count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroverRun {
    num_qubits: usize,
    preparation: Preparation,
    marked: Vec<usize>,
    invocations: usize,
}

impl GroverRun {
    /// Amplification over the subspace spanned by `prep_subset`.
    pub fn new(
        num_qubits: usize,
        prep_subset: impl IntoIterator<Item = usize>,
        marked: impl IntoIterator<Item = usize>,
        invocations: usize,
    ) -> Result<Self> {
        Self::with_preparation(num_qubits, Preparation::subset(prep_subset), marked, invocations)
    }

    /// Amplification over the whole register.
    pub fn full_register(
        num_qubits: usize,
        marked: impl IntoIterator<Item = usize>,
        invocations: usize,
    ) -> Result<Self> {
        Self::with_preparation(num_qubits, Preparation::FullRegister, marked, invocations)
    }

    pub fn with_preparation(
        num_qubits: usize,
        preparation: Preparation,
        marked: impl IntoIterator<Item = usize>,
        invocations: usize,
    ) -> Result<Self> {
        let mut marked: Vec<usize> = marked.into_iter().collect();
        marked.sort_unstable();
        marked.dedup();
        if let Some(&outside) = marked.iter().find(|&&c| !preparation.contains(c, num_qubits)) {
            return Err(Error::MarkedOutsidePreparation(outside));
        }
        Ok(Self { num_qubits, preparation, marked, invocations })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn preparation(&self) -> &Preparation {
        &self.preparation
    }

    pub fn marked(&self) -> &[usize] {
        &self.marked
    }

    pub fn invocations(&self) -> usize {
        self.invocations
    }

    pub fn prepare<T: Real>(&self) -> Result<AmplitudeState<T>> {
        AmplitudeState::prepare(self.num_qubits, self.preparation.clone())
    }

    /// Exact probabilities of every prepared code after all rounds.
    pub fn run<T: Real>(&self) -> Result<BTreeMap<usize, T>> {
        let mut state = self.prepare::<T>()?;
        amplify(&mut state, &self.marked, self.invocations)?;
        state.probabilities(self.preparation.codes(self.num_qubits))
    }

    /// Shot-count estimates (`count / shots`) for every prepared code.
    pub fn run_sampled<T: Real>(&self, shots: u64, seed: u64) -> Result<BTreeMap<usize, T>> {
        let codes = self.preparation.codes(self.num_qubits);
        let mut snapshots = self.snapshots::<T>(&codes, Some(Shots { shots, seed }))?;
        Ok(snapshots.pop().expect("at least the prepared snapshot exists"))
    }

    /// Fidelities of `observed` after 0, 1, ..., `invocations` rounds.
    ///
    /// With `shots`, snapshot `k` is estimated from a multinomial draw seeded
    /// with `derive_seed(seed, k)`; otherwise exact probabilities are read.
    pub fn snapshots<T: Real>(
        &self,
        observed: &[usize],
        shots: Option<Shots>,
    ) -> Result<Vec<BTreeMap<usize, T>>> {
        let mut state = self.prepare::<T>()?;
        let mut out = Vec::with_capacity(self.invocations + 1);
        out.push(read_fidelities(&state, observed, shots, 0)?);
        for round in 1..=self.invocations {
            amplify(&mut state, &self.marked, 1)?;
            out.push(read_fidelities(&state, observed, shots, round as u64)?);
        }
        Ok(out)
    }
}

fn read_fidelities<T: Real>(
    state: &AmplitudeState<T>,
    observed: &[usize],
    shots: Option<Shots>,
    round: u64,
) -> Result<BTreeMap<usize, T>> {
    match shots {
        None => state.probabilities(observed.iter().copied()),
        Some(Shots { shots, seed }) => {
            let counts = state.sample(shots, derive_seed(seed, round))?;
            let total = T::from_f64_lossy(shots as f64);
            observed
                .iter()
                .map(|&code| {
                    if code >= state.dimension() {
                        return Err(Error::CodeOutOfRange { code, num_qubits: state.num_qubits() });
                    }
                    let c = counts.get(&code).copied().unwrap_or(0);
                    Ok((code, T::from_f64_lossy(c as f64) / total))
                })
                .collect()
        }
    }
}

/// Applies `rounds` oracle + diffusion steps in place.
pub fn amplify<T: Real>(state: &mut AmplitudeState<T>, marked: &[usize], rounds: usize) -> Result<()> {
    for _ in 0..rounds {
        state.phase_oracle(marked)?;
        state.diffuse();
    }
    Ok(())
}

/// `floor(pi/4 * sqrt(2^num_qubits / num_targets))`, at least 1.
///
/// Uses the full register dimension, matching the reference framework's
/// `optimal_num_iterations`.
pub fn optimal_num_invocations(num_qubits: usize, num_targets: usize) -> Result<usize> {
    if num_targets == 0 {
        return Err(Error::ZeroTargets);
    }
    let dimension = 2f64.powi(num_qubits as i32);
    if num_targets as f64 > dimension {
        return Err(Error::TooManyTargets { targets: num_targets, dimension: dimension as usize });
    }
    let k = (std::f64::consts::FRAC_PI_4 * (dimension / num_targets as f64).sqrt()).floor();
    Ok((k as usize).max(1))
}
