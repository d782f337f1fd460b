//! Closed-form factorisation of a 2×2 unitary into two native rotations:
//!
//! `U = e^{id} · R(−π, −c − π/2) · R(2b + π, a − c − π/2)`
//!
//! with `b = arccos|u00|`, `a = (φ00 − φ11)/2`,
//! `c = (φ00 − 2φ10 + φ11)/2 − π`, `d = (φ00 + φ11)/2` and `φij = Arg(uij)`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::matrix::{self, Matrix2};
use crate::circuit::UNITARY_TOL;

use super::TranspileError;

/// Entries smaller than this are treated as exact zeros.
pub const DEGENERATE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitaryParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl UnitaryParams {
    /// `(θ, φ)` of the rotation applied first in time.
    pub fn first_rotation(&self) -> (f64, f64) {
        (2.0 * self.b + PI, self.a - self.c - FRAC_PI_2)
    }

    /// `(θ, φ)` of the rotation applied second in time.
    pub fn second_rotation(&self) -> (f64, f64) {
        (-PI, -self.c - FRAC_PI_2)
    }

    /// Rebuilds `e^{id} R(−π, −c−π/2) R(2b+π, a−c−π/2)`.
    pub fn reconstruct(&self) -> Matrix2 {
        let (t1, p1) = self.first_rotation();
        let (t2, p2) = self.second_rotation();
        let m = matrix::mul2(&matrix::native_r(t2, p2), &matrix::native_r(t1, p1));
        matrix::scale2(&m, Complex64::from_polar(1.0, self.d))
    }
}

pub fn decompose_unitary(u: &Matrix2) -> Result<UnitaryParams, TranspileError> {
    let err = matrix::unitarity_error2(u);
    if err > UNITARY_TOL {
        return Err(TranspileError::NotUnitary(err));
    }
    // + 0.0 turns a −0.0 imaginary part into +0.0 so Arg(−x) = π
    let phi = |i: usize, j: usize| Complex64::new(u[i][j].re, u[i][j].im + 0.0).arg();
    let abs00 = u[0][0].norm();

    if u[0][1].norm() <= DEGENERATE_TOL {
        // diagonal: c is free
        return Ok(UnitaryParams {
            a: (phi(0, 0) - phi(1, 1)) / 2.0,
            b: 0.0,
            c: 0.0,
            d: (phi(0, 0) + phi(1, 1)) / 2.0,
        });
    }
    if abs00 <= DEGENERATE_TOL {
        // anti-diagonal: a is free
        return Ok(UnitaryParams {
            a: 0.0,
            b: FRAC_PI_2,
            c: (phi(0, 1) - phi(1, 0) + PI) / 2.0,
            d: (phi(0, 1) + phi(1, 0) - PI) / 2.0,
        });
    }
    Ok(UnitaryParams {
        a: (phi(0, 0) - phi(1, 1)) / 2.0,
        b: abs00.min(1.0).acos(),
        c: (phi(0, 0) - 2.0 * phi(1, 0) + phi(1, 1)) / 2.0 - PI,
        d: (phi(0, 0) + phi(1, 1)) / 2.0,
    })
}
