//! Lowering to the trapped-ion gate set `{R(θ, φ), XX(χ)}`.
//!
//! The pipeline is `lower_toffoli` → `lower_two_qubit` → `merge_singles`.
//! Each stage keeps the circuit unitary up to a tracked global phase, so
//! the final [`NativeProgram`] reproduces the input exactly once its
//! `global_phase` is applied.

mod decompose;
mod lower;
mod merge;
mod native;

use std::collections::BTreeSet;

use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::matrix::DenseMatrix;
use crate::circuit::{Circuit, CircuitError, WireId};
use crate::sim::StateVector;

pub use decompose::{decompose_unitary, UnitaryParams, DEGENERATE_TOL};
pub use lower::{lower_toffoli, lower_two_qubit, Lowered};
pub use merge::merge_singles;
pub use native::{NativeGate, NativeProgram};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TranspileError {
    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),
    #[error("{stage}: unexpected gate {gate} at position {position}")]
    UnexpectedGate {
        stage: &'static str,
        gate: &'static str,
        position: usize,
    },
    #[error("{0}")]
    Circuit(#[from] CircuitError),
}

/// Per-pair sign of the `XX` interaction. Hardware couplings may only
/// realise one sign of `χ`; pairs listed in `negative_pairs` get `χ < 0`,
/// everything else `χ > 0`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TranspileConfig {
    pub negative_pairs: BTreeSet<(WireId, WireId)>,
}

impl TranspileConfig {
    pub fn sign(&self, a: WireId, b: WireId) -> f64 {
        let key = (a.min(b), a.max(b));
        if self.negative_pairs.contains(&key) {
            -1.0
        } else {
            1.0
        }
    }
}

pub fn transpile(c: &Circuit) -> Result<NativeProgram, TranspileError> {
    transpile_with(c, &TranspileConfig::default())
}

pub fn transpile_with(c: &Circuit, cfg: &TranspileConfig) -> Result<NativeProgram, TranspileError> {
    let step2 = lower_toffoli(c)?;
    let step3 = lower_two_qubit(&step2, cfg)?;
    let mut prog = merge_singles(&step3.circuit)?;
    prog.global_phase = merge::wrap_phase(prog.global_phase + step3.global_phase);
    Ok(prog)
}

/// Unitary of `c` assembled column by column from basis-state runs.
pub fn circuit_unitary(c: &Circuit) -> DenseMatrix {
    let dim = 1usize << c.width();
    let mut u = DenseMatrix::zeros(dim);
    for col in 0..dim {
        let mut s = StateVector::basis(c.width(), col);
        for g in c.gates() {
            s.apply_gate(g);
        }
        for (row, &amp) in s.amplitudes().iter().enumerate() {
            u.set(row, col, amp);
        }
    }
    u
}

/// `max |U_c − e^{iγ} U_p|` over all entries, with `γ` the program's
/// recorded global phase.
pub fn equivalence_error(c: &Circuit, p: &NativeProgram) -> Result<f64, TranspileError> {
    let source = circuit_unitary(c);
    let mut native = circuit_unitary(&p.to_circuit()?);
    let phase = Complex64::from_polar(1.0, p.global_phase);
    for v in native.data.iter_mut() {
        *v *= phase;
    }
    Ok(source.max_abs_diff(&native))
}
