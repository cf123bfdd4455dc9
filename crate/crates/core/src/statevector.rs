//! Dense statevector over an `n`-qubit register.
//!
//! Only the operations amplitude amplification needs are provided: uniform
//! preparation over a subset of basis codes, a phase oracle, the diffusion
//! reflection about the prepared state, probability readout and seeded
//! multinomial sampling.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Widest register the dense kernel accepts (2^26 amplitudes).
pub const MAX_QUBITS: usize = 26;

/// Set of basis codes the uniform superposition is taken over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Preparation {
    /// Every basis state of the register (plain Hadamard layer).
    FullRegister,
    /// Only the listed codes; sorted and deduplicated.
    Subset(Vec<usize>),
}

impl Preparation {
    pub fn subset(codes: impl IntoIterator<Item = usize>) -> Self {
        let mut codes: Vec<usize> = codes.into_iter().collect();
        codes.sort_unstable();
        codes.dedup();
        Preparation::Subset(codes)
    }

    pub fn len(&self, num_qubits: usize) -> usize {
        match self {
            Preparation::FullRegister => 1 << num_qubits,
            Preparation::Subset(codes) => codes.len(),
        }
    }

    pub fn is_empty(&self, num_qubits: usize) -> bool {
        self.len(num_qubits) == 0
    }

    pub fn contains(&self, code: usize, num_qubits: usize) -> bool {
        match self {
            Preparation::FullRegister => code < (1 << num_qubits),
            Preparation::Subset(codes) => codes.binary_search(&code).is_ok(),
        }
    }

    pub fn codes(&self, num_qubits: usize) -> Vec<usize> {
        match self {
            Preparation::FullRegister => (0..1 << num_qubits).collect(),
            Preparation::Subset(codes) => codes.clone(),
        }
    }
}

fn check_width(num_qubits: usize) -> Result<()> {
    if num_qubits > MAX_QUBITS {
        return Err(Error::RegisterTooWide(num_qubits));
    }
    Ok(())
}

fn check_code(code: usize, num_qubits: usize) -> Result<()> {
    if code >= 1 << num_qubits {
        return Err(Error::CodeOutOfRange { code, num_qubits });
    }
    Ok(())
}

/// Complex amplitudes over `2^num_qubits` basis states, together with the
/// preparation the diffusion reflects about.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeState<T> {
    num_qubits: usize,
    amplitudes: Vec<Complex<T>>,
    preparation: Preparation,
}

impl<T: Real> AmplitudeState<T> {
    /// Uniform superposition over `subset`: `1/sqrt(|subset|)` on each member.
    pub fn uniform_over(num_qubits: usize, subset: impl IntoIterator<Item = usize>) -> Result<Self> {
        Self::prepare(num_qubits, Preparation::subset(subset))
    }

    /// Uniform superposition over every basis state of the register.
    pub fn uniform(num_qubits: usize) -> Result<Self> {
        Self::prepare(num_qubits, Preparation::FullRegister)
    }

    pub fn prepare(num_qubits: usize, preparation: Preparation) -> Result<Self> {
        check_width(num_qubits)?;
        let dim = 1usize << num_qubits;
        let mut amplitudes = vec![Complex::zero(); dim];
        match &preparation {
            Preparation::FullRegister => {
                let amp = Complex::new(T::one() / T::from_count(dim).sqrt(), T::zero());
                amplitudes.iter_mut().for_each(|a| *a = amp);
            }
            Preparation::Subset(codes) => {
                if codes.is_empty() {
                    return Err(Error::EmptySubset);
                }
                for &code in codes {
                    check_code(code, num_qubits)?;
                }
                let amp = Complex::new(T::one() / T::from_count(codes.len()).sqrt(), T::zero());
                for &code in codes {
                    amplitudes[code] = amp;
                }
            }
        }
        Ok(Self { num_qubits, amplitudes, preparation })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn preparation(&self) -> &Preparation {
        &self.preparation
    }

    /// Codes of the preparation subset, ascending.
    pub fn prep_subset(&self) -> Vec<usize> {
        self.preparation.codes(self.num_qubits)
    }

    /// `sum |a_k|^2`.
    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    /// Negates the amplitude of every code in `marked`.
    ///
    /// Duplicate codes are applied once.
    pub fn phase_oracle(&mut self, marked: &[usize]) -> Result<()> {
        for &code in marked {
            check_code(code, self.num_qubits)?;
        }
        let mut sorted = marked.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for code in sorted {
            self.amplitudes[code] = -self.amplitudes[code];
        }
        Ok(())
    }

    /// Reflection `2|psi><psi| - I` about the prepared uniform state.
    ///
    /// On the prepared subset this is inversion about the subset mean; every
    /// other amplitude is negated.
    pub fn diffuse(&mut self) {
        match &self.preparation {
            Preparation::FullRegister => {
                let mean = self.amplitudes.iter().fold(Complex::zero(), |acc, a| acc + a)
                    / T::from_count(self.amplitudes.len());
                let twice = mean + mean;
                self.amplitudes.iter_mut().for_each(|a| *a = twice - *a);
            }
            Preparation::Subset(codes) => {
                let sum = codes.iter().fold(Complex::zero(), |acc, &c| acc + self.amplitudes[c]);
                let mean = sum / T::from_count(codes.len());
                let twice = mean + mean;
                self.amplitudes.iter_mut().for_each(|a| *a = -*a);
                // The loop above negated the subset too; `2m - a` = `2m + (-a)`.
                for &code in codes {
                    self.amplitudes[code] = twice + self.amplitudes[code];
                }
            }
        }
    }

    pub fn probability(&self, code: usize) -> Result<T> {
        check_code(code, self.num_qubits)?;
        Ok(self.amplitudes[code].norm_sqr())
    }

    /// `|a_k|^2` for each requested code.
    pub fn probabilities(&self, subset: impl IntoIterator<Item = usize>) -> Result<BTreeMap<usize, T>> {
        subset
            .into_iter()
            .map(|code| self.probability(code).map(|p| (code, p)))
            .collect()
    }

    /// Multinomial draw of `shots` measurements in the computational basis.
    ///
    /// Codes with zero counts are omitted. The draw depends only on the
    /// amplitudes, `shots` and `seed`.
    pub fn sample(&self, shots: u64, seed: u64) -> Result<BTreeMap<usize, u64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample_with(shots, &mut rng)
    }

    pub fn sample_with<R: rand::Rng + ?Sized>(
        &self,
        shots: u64,
        rng: &mut R,
    ) -> Result<BTreeMap<usize, u64>> {
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        let support: Vec<(usize, f64)> = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(code, a)| (code, a.norm_sqr().to_f64_lossy()))
            .filter(|&(_, p)| p > 0.0)
            .collect();

        // Conditional binomials: code k takes Bin(remaining, p_k / mass_{>=k}).
        let mut tail = vec![0.0; support.len() + 1];
        for i in (0..support.len()).rev() {
            tail[i] = tail[i + 1] + support[i].1;
        }
        let mut counts = BTreeMap::new();
        let mut remaining = shots;
        for (i, &(code, p)) in support.iter().enumerate() {
            if remaining == 0 {
                break;
            }
            let draw = if i + 1 == support.len() {
                remaining
            } else {
                let q = (p / tail[i]).clamp(0.0, 1.0);
                Binomial::new(remaining, q)
                    .expect("conditional probability is clamped to [0, 1]")
                    .sample(rng)
            };
            if draw > 0 {
                counts.insert(code, draw);
                remaining -= draw;
            }
        }
        Ok(counts)
    }
}
