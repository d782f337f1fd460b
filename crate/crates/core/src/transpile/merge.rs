//! Fusing single-qubit runs into at most two native rotations.

use std::f64::consts::PI;

use crate::circuit::matrix::{self, Matrix2};
use crate::circuit::{Circuit, GateKind};

use super::decompose::{decompose_unitary, UnitaryParams, DEGENERATE_TOL};
use super::{NativeGate, NativeProgram, TranspileError};

/// Multiplies each maximal run of single-qubit gates on a wire and emits
/// the product as `R` gates. Products equal to the identity up to phase
/// vanish; every dropped phase goes into `global_phase`.
pub fn merge_singles(c: &Circuit) -> Result<NativeProgram, TranspileError> {
    let mut prog = NativeProgram::new(c.width());
    let mut pending: Vec<Option<Matrix2>> = vec![None; c.width()];
    for (position, g) in c.gates().iter().enumerate() {
        let w = g.wires();
        match g.kind {
            GateKind::XX { chi } => {
                flush(&mut prog, &mut pending, w[0])?;
                flush(&mut prog, &mut pending, w[1])?;
                prog.gates.push(NativeGate::XX {
                    w1: w[0],
                    w2: w[1],
                    chi,
                });
            }
            kind => {
                let Some(m) = kind.matrix2() else {
                    return Err(TranspileError::UnexpectedGate {
                        stage: "merge_singles",
                        gate: kind.name(),
                        position,
                    });
                };
                let slot = &mut pending[w[0]];
                *slot = Some(match slot {
                    Some(acc) => matrix::mul2(&m, acc),
                    None => m,
                });
            }
        }
    }
    for w in 0..c.width() {
        flush(&mut prog, &mut pending, w)?;
    }
    prog.global_phase = wrap_phase(prog.global_phase);
    Ok(prog)
}

fn flush(
    prog: &mut NativeProgram,
    pending: &mut [Option<Matrix2>],
    wire: usize,
) -> Result<(), TranspileError> {
    let Some(u) = pending[wire].take() else {
        return Ok(());
    };
    let p = decompose_unitary(&u)?;
    prog.global_phase += p.d;
    if is_phase_only(&p) {
        // u = e^{i(d+a)} I
        prog.global_phase += p.a;
        return Ok(());
    }
    for (theta, phi) in [p.first_rotation(), p.second_rotation()] {
        push_rotation(prog, wire, theta, phi);
    }
    Ok(())
}

fn is_phase_only(p: &UnitaryParams) -> bool {
    p.b.abs() <= DEGENERATE_TOL && near_multiple(p.a, PI)
}

/// `R(2πk, φ) = (−1)^k I`, dropped with its sign folded into the phase.
fn push_rotation(prog: &mut NativeProgram, wire: usize, theta: f64, phi: f64) {
    if near_multiple(theta, 2.0 * PI) {
        let k = (theta / (2.0 * PI)).round();
        prog.global_phase += PI * k;
        return;
    }
    prog.gates.push(NativeGate::R { wire, theta, phi });
}

fn near_multiple(x: f64, period: f64) -> bool {
    let r = x.rem_euclid(period);
    r.min(period - r) <= 1e-10
}

/// Reduces an angle into `(−π, π]`.
pub(crate) fn wrap_phase(x: f64) -> f64 {
    let r = (x + PI).rem_euclid(2.0 * PI) - PI;
    if r <= -PI {
        r + 2.0 * PI
    } else {
        r
    }
}
