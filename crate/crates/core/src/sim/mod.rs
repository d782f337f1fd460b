//! Execution engines: dense statevector, classical basis-state permutation,
//! and a structured evaluator for order-finding measurement statistics.

mod dense;
mod order_finding;
mod reversible;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numfmt;
use crate::templates::TemplateError;

pub use dense::{measure_probs, simulate_dense, DenseConfig, StateVector, DEFAULT_DENSE_CAP};
pub use order_finding::{
    dense_order_finding_distribution, modexp_table, order_finding_distribution,
    order_finding_input, ModexpTable,
};
pub use reversible::{
    read_register, simulate_reversible, write_register, BasisState, ReversibleProgram,
    MAX_REVERSIBLE_WIDTH,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error(
        "circuit width {width} exceeds the dense cap of {cap} qubits; use the reversible \
         engine for classical circuits or the structured order-finding evaluator"
    )]
    WidthOverCap { width: usize, cap: usize },
    #[error("state has {state} qubits but circuit has {circuit}")]
    WidthMismatch { state: usize, circuit: usize },
    #[error("gate {gate} at position {position} is not a basis-state permutation")]
    NonClassicalGate { gate: &'static str, position: usize },
    #[error("circuit width {0} exceeds the reversible engine limit of 128 wires")]
    TooWideForReversible(usize),
    #[error("wire {wire} out of range for width {width}")]
    WireOutOfRange { wire: usize, width: usize },
    #[error("wire {0} listed more than once")]
    DuplicateWire(usize),
    #[error("state length {0} is not a power of two")]
    BadStateLength(usize),
    #[error("state norm {0} differs from 1")]
    NotNormalized(f64),
    #[error(
        "modular exponentiation circuit gave {got} for x = {x}, expected {expected} (mod_pow)"
    )]
    EngineMismatch { x: u64, got: u64, expected: u64 },
    #[error("ancilla registers not restored for x = {0}")]
    AncillaNotRestored(u64),
    #[error(transparent)]
    Template(#[from] TemplateError),
}

/// Probability of every outcome of a `bits`-wide measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    bits: usize,
    probs: Vec<f64>,
}

/// Outcomes with probability at or below this are left out of exports.
pub const SUPPORT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct OutcomeProbability {
    pub outcome: u64,
    pub probability: f64,
}

impl Distribution {
    pub fn from_dense(probs: &[f64]) -> Self {
        assert!(probs.len().is_power_of_two());
        Self {
            bits: probs.len().trailing_zeros() as usize,
            probs: probs.to_vec(),
        }
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn prob(&self, outcome: u64) -> f64 {
        self.probs.get(outcome as usize).copied().unwrap_or(0.0)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Outcomes with probability above [`SUPPORT_EPS`], ascending.
    pub fn support(&self) -> Vec<u64> {
        self.entries().into_iter().map(|e| e.outcome).collect()
    }

    pub fn entries(&self) -> Vec<OutcomeProbability> {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > SUPPORT_EPS)
            .map(|(k, &p)| OutcomeProbability {
                outcome: k as u64,
                probability: p,
            })
            .collect()
    }

    /// Largest absolute probability difference over all outcomes.
    pub fn max_abs_diff(&self, other: &Distribution) -> f64 {
        let len = self.probs.len().max(other.probs.len());
        (0..len as u64)
            .map(|k| (self.prob(k) - other.prob(k)).abs())
            .fold(0.0, f64::max)
    }

    /// Draws one outcome by inverse-CDF sampling.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let u: f64 = rng.gen::<f64>() * self.total();
        let mut acc = 0.0;
        let mut last = 0;
        for (k, &p) in self.probs.iter().enumerate() {
            if p <= 0.0 {
                continue;
            }
            acc += p;
            last = k;
            if u < acc {
                return k as u64;
            }
        }
        last as u64
    }

    /// Empirical distribution of `shots` samples.
    pub fn sample_shots<R: Rng + ?Sized>(&self, rng: &mut R, shots: usize) -> Distribution {
        let mut counts = vec![0.0; self.probs.len()];
        for _ in 0..shots {
            counts[self.sample(rng) as usize] += 1.0;
        }
        for c in &mut counts {
            *c /= shots as f64;
        }
        Distribution {
            bits: self.bits,
            probs: counts,
        }
    }

    /// `outcome,probability` lines, ascending, support only.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("outcome,probability\n");
        for e in self.entries() {
            out.push_str(&format!("{},{}\n", e.outcome, numfmt::sig(e.probability)));
        }
        out
    }
}
