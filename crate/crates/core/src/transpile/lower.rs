//! Gate-level rewrites towards `{XX, single-qubit}`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::circuit::matrix::{self, Matrix2};
use crate::circuit::{Circuit, GateKind, WireId};

use super::{TranspileConfig, TranspileError};

/// A circuit together with the phase dropped while rewriting it:
/// the original unitary is `e^{i·global_phase}` times `circuit`'s.
#[derive(Debug, Clone, PartialEq)]
pub struct Lowered {
    pub circuit: Circuit,
    pub global_phase: f64,
}

/// Replaces every Toffoli by five controlled-V/CNOT gates and every
/// Fredkin by CNOT·Toffoli·CNOT (then lowered the same way). Exact.
pub fn lower_toffoli(c: &Circuit) -> Result<Circuit, TranspileError> {
    let mut out = new_like(c);
    for g in c.gates() {
        let w = g.wires();
        match g.kind {
            GateKind::Toffoli => push_toffoli(&mut out, w[0], w[1], w[2])?,
            GateKind::Fredkin => {
                let (ctrl, t1, t2) = (w[0], w[1], w[2]);
                out.cnot(t2, t1)?;
                push_toffoli(&mut out, ctrl, t1, t2)?;
                out.cnot(t2, t1)?;
            }
            _ => out.push_gate(*g)?,
        }
    }
    Ok(out)
}

fn push_toffoli(
    out: &mut Circuit,
    c1: WireId,
    c2: WireId,
    t: WireId,
) -> Result<(), TranspileError> {
    out.push(GateKind::CV, &[c2, t])?;
    out.cnot(c1, c2)?;
    out.push(GateKind::CVInv, &[c2, t])?;
    out.cnot(c1, c2)?;
    out.push(GateKind::CV, &[c1, t])?;
    Ok(())
}

/// Rewrites SWAP, CR_k, CNOT and CV gates into `XX` plus single-qubit
/// `U1` gates. Three-qubit gates must already be gone.
pub fn lower_two_qubit(c: &Circuit, cfg: &TranspileConfig) -> Result<Lowered, TranspileError> {
    let mut out = Lowered {
        circuit: new_like(c),
        global_phase: 0.0,
    };
    for (position, g) in c.gates().iter().enumerate() {
        let w = g.wires();
        match g.kind {
            GateKind::X
            | GateKind::H
            | GateKind::U1(_)
            | GateKind::R { .. }
            | GateKind::XX { .. } => out.circuit.push_gate(*g)?,
            GateKind::Cnot => controlled_exp(&mut out, cfg, w[0], w[1], PI)?,
            GateKind::CV => controlled_exp(&mut out, cfg, w[0], w[1], FRAC_PI_2)?,
            GateKind::CVInv => controlled_exp(&mut out, cfg, w[0], w[1], -FRAC_PI_2)?,
            GateKind::Swap => {
                controlled_exp(&mut out, cfg, w[0], w[1], PI)?;
                controlled_exp(&mut out, cfg, w[1], w[0], PI)?;
                controlled_exp(&mut out, cfg, w[0], w[1], PI)?;
            }
            GateKind::CRk(k) => controlled_phase(&mut out, cfg, w[0], w[1], matrix::crk_angle(k))?,
            GateKind::CRkInv(k) => {
                controlled_phase(&mut out, cfg, w[0], w[1], -matrix::crk_angle(k))?
            }
            GateKind::Toffoli | GateKind::Fredkin => {
                return Err(TranspileError::UnexpectedGate {
                    stage: "lower_two_qubit",
                    gate: g.kind.name(),
                    position,
                })
            }
        }
    }
    Ok(out)
}

/// `diag(1,1,1,e^{iλ}) = P(λ/2)_c · CNOT · P(−λ/2)_t · CNOT · P(λ/2)_t`.
fn controlled_phase(
    out: &mut Lowered,
    cfg: &TranspileConfig,
    ctrl: WireId,
    target: WireId,
    lambda: f64,
) -> Result<(), TranspileError> {
    out.circuit
        .push(GateKind::U1(matrix::phase(lambda / 2.0)), &[ctrl])?;
    controlled_exp(out, cfg, ctrl, target, PI)?;
    out.circuit
        .push(GateKind::U1(matrix::phase(-lambda / 2.0)), &[target])?;
    controlled_exp(out, cfg, ctrl, target, PI)?;
    out.circuit
        .push(GateKind::U1(matrix::phase(lambda / 2.0)), &[target])?;
    Ok(())
}

/// Emits `exp(iλ |1⟩⟨1| ⊗ |−⟩⟨−|)`, i.e. a controlled `X^{λ/π}`, using one
/// `XX(±λ/4)`. Expanding the projector gives
/// `e^{iλ/4} Rz_c(λ/2) Rx_t(λ/2) exp(iλ/4 Z⊗X)`, and
/// `exp(iλ/4 Z⊗X) = H_c XX(−λ/4) H_c`.
fn controlled_exp(
    out: &mut Lowered,
    cfg: &TranspileConfig,
    ctrl: WireId,
    target: WireId,
    lambda: f64,
) -> Result<(), TranspileError> {
    let chi = -lambda / 4.0;
    let h = matrix::hadamard();
    // XX(χ) = Z_c XX(−χ) Z_c when the pair only offers the other sign
    let flip = chi * cfg.sign(ctrl, target) < 0.0;
    let (pre, post, chi) = if flip {
        (
            matrix::mul2(&pauli_z(), &h),
            matrix::mul2(&h, &pauli_z()),
            -chi,
        )
    } else {
        (h, h, chi)
    };
    let c = &mut out.circuit;
    c.push(GateKind::U1(pre), &[ctrl])?;
    c.push(GateKind::XX { chi }, &[ctrl, target])?;
    c.push(
        GateKind::U1(matrix::mul2(&rz(lambda / 2.0), &post)),
        &[ctrl],
    )?;
    c.push(GateKind::U1(rx(lambda / 2.0)), &[target])?;
    out.global_phase += lambda / 4.0;
    Ok(())
}

fn new_like(c: &Circuit) -> Circuit {
    match c.layout() {
        Some(l) => Circuit::with_layout(*l),
        None => Circuit::new(c.width()),
    }
}

fn pauli_z() -> Matrix2 {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    [[one, zero], [zero, -one]]
}

/// `exp(−iθZ/2)`.
fn rz(theta: f64) -> Matrix2 {
    let zero = Complex64::new(0.0, 0.0);
    [
        [Complex64::from_polar(1.0, -theta / 2.0), zero],
        [zero, Complex64::from_polar(1.0, theta / 2.0)],
    ]
}

/// `exp(−iθX/2)`.
fn rx(theta: f64) -> Matrix2 {
    let (s, c) = (theta / 2.0).sin_cos();
    let c = Complex64::new(c, 0.0);
    let s = Complex64::new(0.0, -s);
    [[c, s], [s, c]]
}
