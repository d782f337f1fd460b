//! Small dense complex matrices used for gate definitions.

use num_complex::Complex64;
use std::f64::consts::PI;

/// A 2×2 complex matrix, row-major.
pub type Matrix2 = [[Complex64; 2]; 2];

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn identity2() -> Matrix2 {
    [[ONE, ZERO], [ZERO, ONE]]
}

pub fn mul2(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    let mut out = [[ZERO; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn adjoint2(m: &Matrix2) -> Matrix2 {
    [
        [m[0][0].conj(), m[1][0].conj()],
        [m[0][1].conj(), m[1][1].conj()],
    ]
}

/// Max-abs entry of `U†U − I`.
pub fn unitarity_error2(m: &Matrix2) -> f64 {
    let p = mul2(&adjoint2(m), m);
    let id = identity2();
    let mut err: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            err = err.max((p[i][j] - id[i][j]).norm());
        }
    }
    err
}

pub fn max_abs_diff2(a: &Matrix2, b: &Matrix2) -> f64 {
    let mut err: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            err = err.max((a[i][j] - b[i][j]).norm());
        }
    }
    err
}

pub fn scale2(m: &Matrix2, s: Complex64) -> Matrix2 {
    [[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]]
}

pub fn pauli_x() -> Matrix2 {
    [[ZERO, ONE], [ONE, ZERO]]
}

pub fn hadamard() -> Matrix2 {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

/// Square root of X: `(1/2)[[1+i, 1−i], [1−i, 1+i]]`.
pub fn sqrt_x() -> Matrix2 {
    let p = Complex64::new(0.5, 0.5);
    let m = Complex64::new(0.5, -0.5);
    [[p, m], [m, p]]
}

/// `diag(1, e^{iλ})`.
pub fn phase(lambda: f64) -> Matrix2 {
    [[ONE, ZERO], [ZERO, Complex64::from_polar(1.0, lambda)]]
}

/// Trapped-ion native rotation `R(θ, φ)`.
pub fn native_r(theta: f64, phi: f64) -> Matrix2 {
    let (s, c) = (theta / 2.0).sin_cos();
    [
        [Complex64::new(c, 0.0), -I * Complex64::from_polar(s, -phi)],
        [-I * Complex64::from_polar(s, phi), Complex64::new(c, 0.0)],
    ]
}

/// Phase of the controlled rotation `CR_k`: `2π / 2^k`.
pub fn crk_angle(k: u32) -> f64 {
    2.0 * PI / 2f64.powi(k as i32)
}

/// Dense square matrix stored row-major with side `dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Self {
        let dim = rows.len();
        let data: Vec<_> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), dim * dim, "matrix must be square");
        Self { dim, data }
    }

    pub fn from_permutation(perm: &[usize]) -> Self {
        // column j maps to row perm[j]
        let dim = perm.len();
        let mut m = Self::zeros(dim);
        for (j, &i) in perm.iter().enumerate() {
            m.data[i * dim + j] = ONE;
        }
        m
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, v: Complex64) {
        self.data[row * self.dim + col] = v;
    }

    pub fn mul(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = DenseMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> DenseMatrix {
        let n = self.dim;
        let mut out = DenseMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max-abs entry of `U†U − I`.
    pub fn unitarity_error(&self) -> f64 {
        self.adjoint()
            .mul(self)
            .max_abs_diff(&DenseMatrix::identity(self.dim))
    }

    /// Distance to `other` after removing the relative global phase.
    ///
    /// The phase is fixed by aligning the largest-magnitude entry of `self`.
    pub fn phase_insensitive_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        let (idx, _) = self
            .data
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, z)| {
                if z.norm() > best.1 {
                    (i, z.norm())
                } else {
                    best
                }
            });
        let a = self.data[idx];
        let b = other.data[idx];
        if b.norm() < 1e-12 {
            return f64::INFINITY;
        }
        let rot = a / b;
        let rot = rot / rot.norm();
        self.data
            .iter()
            .zip(&other.data)
            .map(|(x, y)| (x - y * rot).norm())
            .fold(0.0, f64::max)
    }
}

impl From<Matrix2> for DenseMatrix {
    fn from(m: Matrix2) -> Self {
        DenseMatrix {
            dim: 2,
            data: vec![m[0][0], m[0][1], m[1][0], m[1][1]],
        }
    }
}
