//! Gate-level circuit representation shared by every other module.
//!
//! Wire `i` of a circuit is bit `i` of a basis-state index, and within a
//! register the lowest wire holds the least-significant bit. Gate matrices
//! are written with the *first* wire of the gate as the most-significant
//! local bit, so `CNOT(c, t)` has the familiar `[[I, 0], [0, X]]` block form.

pub mod matrix;
mod text;

use std::fmt;
use std::ops::Range;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use matrix::{DenseMatrix, Matrix2};
pub use text::{parse, serialize, ParseError};

use matrix::ZERO;

/// Index of a qubit inside a circuit.
pub type WireId = usize;

/// Tolerance used when validating user-supplied single-qubit unitaries.
pub const UNITARY_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("gate {gate} expects {expected} wires, got {got}")]
    Arity {
        gate: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("wire {wire} out of range for width {width}")]
    WireOutOfRange { wire: WireId, width: usize },
    #[error("gate {gate} uses wire {wire} more than once")]
    DuplicateWire { gate: &'static str, wire: WireId },
    #[error("U1 matrix is not unitary (error {0:.3e})")]
    NotUnitary(f64),
    #[error("CRk requires k >= 1")]
    InvalidCrk,
    #[error("Wrong size of registers: {0}")]
    WrongRegisterSize(String),
    #[error("cannot append a circuit of width {other} to a circuit of width {width}")]
    WidthMismatch { width: usize, other: usize },
}

/// The closed gate alphabet: elementary gates plus the trapped-ion natives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    X,
    H,
    Cnot,
    Swap,
    Toffoli,
    Fredkin,
    /// Controlled phase `diag(1, 1, 1, e^{2πi/2^k})`.
    CRk(u32),
    CRkInv(u32),
    /// Controlled square root of X.
    CV,
    CVInv,
    U1(Matrix2),
    R {
        theta: f64,
        phi: f64,
    },
    XX {
        chi: f64,
    },
}

impl GateKind {
    pub fn arity(&self) -> usize {
        use GateKind::*;
        match self {
            X | H | U1(_) | R { .. } => 1,
            Cnot | Swap | CRk(_) | CRkInv(_) | CV | CVInv | XX { .. } => 2,
            Toffoli | Fredkin => 3,
        }
    }

    /// Name used in the text format.
    pub fn name(&self) -> &'static str {
        use GateKind::*;
        match self {
            X => "X",
            H => "H",
            Cnot => "CNOT",
            Swap => "SWAP",
            Toffoli => "TOFFOLI",
            Fredkin => "FREDKIN",
            CRk(_) => "CRK",
            CRkInv(_) => "CRKINV",
            CV => "CV",
            CVInv => "CVINV",
            U1(_) => "U1",
            R { .. } => "R",
            XX { .. } => "XX",
        }
    }

    pub fn adjoint(&self) -> GateKind {
        use GateKind::*;
        match *self {
            CRk(k) => CRkInv(k),
            CRkInv(k) => CRk(k),
            CV => CVInv,
            CVInv => CV,
            U1(m) => U1(matrix::adjoint2(&m)),
            R { theta, phi } => R { theta: -theta, phi },
            XX { chi } => XX { chi: -chi },
            g => g,
        }
    }

    /// True for gates that permute computational basis states.
    pub fn is_classical(&self) -> bool {
        matches!(
            self,
            GateKind::X | GateKind::Cnot | GateKind::Swap | GateKind::Toffoli | GateKind::Fredkin
        )
    }

    pub fn is_native(&self) -> bool {
        matches!(self, GateKind::R { .. } | GateKind::XX { .. })
    }

    /// Single-qubit matrix for arity-1 gates.
    pub fn matrix2(&self) -> Option<Matrix2> {
        match *self {
            GateKind::X => Some(matrix::pauli_x()),
            GateKind::H => Some(matrix::hadamard()),
            GateKind::U1(m) => Some(m),
            GateKind::R { theta, phi } => Some(matrix::native_r(theta, phi)),
            _ => None,
        }
    }

    /// Full `2^k × 2^k` matrix, first wire most significant.
    pub fn matrix(&self) -> DenseMatrix {
        use GateKind::*;
        if let Some(m) = self.matrix2() {
            return m.into();
        }
        match *self {
            Cnot => DenseMatrix::from_permutation(&[0, 1, 3, 2]),
            Swap => DenseMatrix::from_permutation(&[0, 2, 1, 3]),
            Toffoli => DenseMatrix::from_permutation(&[0, 1, 2, 3, 4, 5, 7, 6]),
            Fredkin => DenseMatrix::from_permutation(&[0, 1, 2, 3, 4, 6, 5, 7]),
            CRk(k) | CRkInv(k) => {
                let sign = if matches!(self, CRk(_)) { 1.0 } else { -1.0 };
                let mut m = DenseMatrix::identity(4);
                m.set(
                    3,
                    3,
                    Complex64::from_polar(1.0, sign * matrix::crk_angle(k)),
                );
                m
            }
            CV | CVInv => {
                let v = if matches!(self, CV) {
                    matrix::sqrt_x()
                } else {
                    matrix::adjoint2(&matrix::sqrt_x())
                };
                let mut m = DenseMatrix::identity(4);
                for (i, row) in v.iter().enumerate() {
                    for (j, &z) in row.iter().enumerate() {
                        m.set(2 + i, 2 + j, z);
                    }
                }
                m
            }
            XX { chi } => {
                let (s, c) = chi.sin_cos();
                let c = Complex64::new(c, 0.0);
                let s = Complex64::new(0.0, -s);
                DenseMatrix::from_rows(vec![
                    vec![c, ZERO, ZERO, s],
                    vec![ZERO, c, s, ZERO],
                    vec![ZERO, s, c, ZERO],
                    vec![s, ZERO, ZERO, c],
                ])
            }
            X | H | U1(_) | R { .. } => unreachable!("handled by matrix2"),
        }
    }

    fn validate(&self) -> Result<(), CircuitError> {
        match self {
            GateKind::CRk(0) | GateKind::CRkInv(0) => Err(CircuitError::InvalidCrk),
            GateKind::U1(m) => {
                let err = matrix::unitarity_error2(m);
                if err > UNITARY_TOL {
                    Err(CircuitError::NotUnitary(err))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

/// A gate applied to a concrete wire tuple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    wires: [WireId; 3],
}

impl Gate {
    /// Builds a gate, checking arity and wire distinctness (not width).
    pub fn new(kind: GateKind, wires: &[WireId]) -> Result<Self, CircuitError> {
        kind.validate()?;
        if wires.len() != kind.arity() {
            return Err(CircuitError::Arity {
                gate: kind.name(),
                expected: kind.arity(),
                got: wires.len(),
            });
        }
        for (i, w) in wires.iter().enumerate() {
            if wires[..i].contains(w) {
                return Err(CircuitError::DuplicateWire {
                    gate: kind.name(),
                    wire: *w,
                });
            }
        }
        let mut fixed = [0; 3];
        fixed[..wires.len()].copy_from_slice(wires);
        Ok(Self { kind, wires: fixed })
    }

    pub fn wires(&self) -> &[WireId] {
        &self.wires[..self.kind.arity()]
    }

    pub fn adjoint(&self) -> Gate {
        Gate {
            kind: self.kind.adjoint(),
            wires: self.wires,
        }
    }

    fn remapped(&self, map: &[WireId]) -> Gate {
        let mut g = *self;
        for w in g.wires.iter_mut().take(self.kind.arity()) {
            *w = map[*w];
        }
        g
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.name())?;
        for w in self.wires() {
            write!(f, " {w}")?;
        }
        Ok(())
    }
}

/// Contiguous wire ranges for the order-finding registers, in the order
/// `x, z, a, b, c, N, t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegisterLayout {
    pub n_x: usize,
    pub n: usize,
}

impl RegisterLayout {
    pub fn new(n_x: usize, n: usize) -> Result<Self, CircuitError> {
        if n == 0 || n_x == 0 {
            return Err(CircuitError::WrongRegisterSize(format!(
                "n_x = {n_x} and n = {n} must both be positive"
            )));
        }
        Ok(Self { n_x, n })
    }

    /// Recovers `n` from a total wire count, rejecting widths that do not
    /// decompose as `n_x + 5n + 2`.
    pub fn from_width(width: usize, n_x: usize) -> Result<Self, CircuitError> {
        let rest = width.checked_sub(n_x + 2).ok_or_else(|| {
            CircuitError::WrongRegisterSize(format!("width {width} smaller than n_x + 2"))
        })?;
        if rest == 0 || rest % 5 != 0 {
            return Err(CircuitError::WrongRegisterSize(format!(
                "width {width} - n_x {n_x} - 2 = {rest} is not a positive multiple of 5"
            )));
        }
        Self::new(n_x, rest / 5)
    }

    pub fn width(&self) -> usize {
        self.n_x + 5 * self.n + 2
    }

    pub fn x(&self) -> Range<WireId> {
        0..self.n_x
    }

    pub fn z(&self) -> Range<WireId> {
        let s = self.n_x;
        s..s + self.n
    }

    pub fn a(&self) -> Range<WireId> {
        let s = self.n_x + self.n;
        s..s + self.n
    }

    /// `n + 1` wires; the top wire catches the adder overflow.
    pub fn b(&self) -> Range<WireId> {
        let s = self.n_x + 2 * self.n;
        s..s + self.n + 1
    }

    pub fn c(&self) -> Range<WireId> {
        let s = self.n_x + 3 * self.n + 1;
        s..s + self.n
    }

    pub fn modulus(&self) -> Range<WireId> {
        let s = self.n_x + 4 * self.n + 1;
        s..s + self.n
    }

    pub fn t(&self) -> WireId {
        self.n_x + 5 * self.n + 1
    }

    /// All registers with their names, in wire order.
    pub fn registers(&self) -> [(&'static str, Range<WireId>); 7] {
        let t = self.t();
        [
            ("x", self.x()),
            ("z", self.z()),
            ("a", self.a()),
            ("b", self.b()),
            ("c", self.c()),
            ("N", self.modulus()),
            ("t", t..t + 1),
        ]
    }
}

/// Ordered gate list over a fixed number of wires.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
    layout: Option<RegisterLayout>,
}

impl Circuit {
    pub fn new(width: usize) -> Self {
        Self {
            width,
            gates: Vec::new(),
            layout: None,
        }
    }

    pub fn with_layout(layout: RegisterLayout) -> Self {
        Self {
            width: layout.width(),
            gates: Vec::new(),
            layout: Some(layout),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn layout(&self) -> Option<&RegisterLayout> {
        self.layout.as_ref()
    }

    pub fn set_layout(&mut self, layout: RegisterLayout) -> Result<(), CircuitError> {
        if layout.width() != self.width {
            return Err(CircuitError::WrongRegisterSize(format!(
                "layout width {} does not match circuit width {}",
                layout.width(),
                self.width
            )));
        }
        self.layout = Some(layout);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, kind: GateKind, wires: &[WireId]) -> Result<(), CircuitError> {
        let gate = Gate::new(kind, wires)?;
        self.push_gate(gate)
    }

    pub fn push_gate(&mut self, gate: Gate) -> Result<(), CircuitError> {
        if let Some(&wire) = gate.wires().iter().find(|&&w| w >= self.width) {
            return Err(CircuitError::WireOutOfRange {
                wire,
                width: self.width,
            });
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn x(&mut self, w: WireId) -> Result<(), CircuitError> {
        self.push(GateKind::X, &[w])
    }

    pub fn h(&mut self, w: WireId) -> Result<(), CircuitError> {
        self.push(GateKind::H, &[w])
    }

    pub fn cnot(&mut self, control: WireId, target: WireId) -> Result<(), CircuitError> {
        self.push(GateKind::Cnot, &[control, target])
    }

    pub fn swap(&mut self, a: WireId, b: WireId) -> Result<(), CircuitError> {
        self.push(GateKind::Swap, &[a, b])
    }

    pub fn toffoli(&mut self, c0: WireId, c1: WireId, target: WireId) -> Result<(), CircuitError> {
        self.push(GateKind::Toffoli, &[c0, c1, target])
    }

    pub fn fredkin(&mut self, control: WireId, t0: WireId, t1: WireId) -> Result<(), CircuitError> {
        self.push(GateKind::Fredkin, &[control, t0, t1])
    }

    /// Appends all gates of `other`, which must have the same width.
    pub fn append(&mut self, other: &Circuit) -> Result<(), CircuitError> {
        if other.width != self.width {
            return Err(CircuitError::WidthMismatch {
                width: self.width,
                other: other.width,
            });
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    /// Appends `other` with its wire `i` mapped to `map[i]`.
    pub fn append_mapped(&mut self, other: &Circuit, map: &[WireId]) -> Result<(), CircuitError> {
        if map.len() != other.width {
            return Err(CircuitError::WidthMismatch {
                width: map.len(),
                other: other.width,
            });
        }
        for g in &other.gates {
            self.push_gate(g.remapped(map))?;
        }
        Ok(())
    }

    /// Conjugate transpose: reversed order, every gate replaced by its adjoint.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            width: self.width,
            gates: self.gates.iter().rev().map(Gate::adjoint).collect(),
            layout: self.layout,
        }
    }

    /// Histogram of gate names.
    pub fn counts(&self) -> std::collections::BTreeMap<&'static str, usize> {
        let mut out = std::collections::BTreeMap::new();
        for g in &self.gates {
            *out.entry(g.kind.name()).or_insert(0) += 1;
        }
        out
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize(self))
    }
}

/// Embeds a gate matrix into the full `2^width` space by index mapping.
pub fn embed(gate: &Gate, width: usize) -> DenseMatrix {
    let local = gate.kind.matrix();
    let wires = gate.wires();
    let k = wires.len();
    let dim = 1usize << width;
    let mask: usize = wires.iter().map(|w| 1usize << w).sum();
    let local_index = |i: usize| -> usize {
        wires
            .iter()
            .enumerate()
            .map(|(j, &w)| ((i >> w) & 1) << (k - 1 - j))
            .sum()
    };
    let mut out = DenseMatrix::zeros(dim);
    for row in 0..dim {
        for col in 0..dim {
            if row & !mask != col & !mask {
                continue;
            }
            let v = local.get(local_index(row), local_index(col));
            if v != ZERO {
                out.set(row, col, v);
            }
        }
    }
    out
}

/// Full unitary of a circuit as a product of embedded gate matrices.
///
/// Cost is `O(gates · 4^width · 2^width)`; intended for small widths only.
pub fn unitary(c: &Circuit) -> DenseMatrix {
    let dim = 1usize << c.width;
    let mut acc = DenseMatrix::identity(dim);
    for g in &c.gates {
        acc = embed(g, c.width).mul(&acc);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_empty_is_empty() {
        let c = Circuit::new(3);
        assert!(c.inverse().is_empty());
    }

    #[test]
    fn inverse_reverses_self_adjoint_gates() {
        let mut c = Circuit::new(2);
        c.cnot(0, 1).unwrap();
        c.x(0).unwrap();
        let inv = c.inverse();
        assert_eq!(inv.gates()[0], Gate::new(GateKind::X, &[0]).unwrap());
        assert_eq!(inv.gates()[1], Gate::new(GateKind::Cnot, &[0, 1]).unwrap());
    }

    #[test]
    fn adjoint_table() {
        assert_eq!(GateKind::CRk(3).adjoint(), GateKind::CRkInv(3));
        assert_eq!(GateKind::CV.adjoint(), GateKind::CVInv);
        assert_eq!(
            GateKind::R {
                theta: 0.3,
                phi: 1.1
            }
            .adjoint(),
            GateKind::R {
                theta: -0.3,
                phi: 1.1
            }
        );
        assert_eq!(
            GateKind::XX { chi: 0.2 }.adjoint(),
            GateKind::XX { chi: -0.2 }
        );
        assert_eq!(GateKind::Toffoli.adjoint(), GateKind::Toffoli);
    }

    #[test]
    fn gate_construction_errors() {
        assert!(matches!(
            Gate::new(GateKind::Cnot, &[1, 1]),
            Err(CircuitError::DuplicateWire { .. })
        ));
        assert!(matches!(
            Gate::new(GateKind::Toffoli, &[0, 1]),
            Err(CircuitError::Arity {
                expected: 3,
                got: 2,
                ..
            })
        ));
        assert_eq!(
            Gate::new(GateKind::CRk(0), &[0, 1]),
            Err(CircuitError::InvalidCrk)
        );
        let mut bad = matrix::identity2();
        bad[0][0] = Complex64::new(2.0, 0.0);
        assert!(matches!(
            Gate::new(GateKind::U1(bad), &[0]),
            Err(CircuitError::NotUnitary(_))
        ));
        let mut c = Circuit::new(2);
        assert_eq!(
            c.x(2),
            Err(CircuitError::WireOutOfRange { wire: 2, width: 2 })
        );
    }

    #[test]
    fn every_gate_matrix_is_unitary() {
        let kinds = [
            GateKind::X,
            GateKind::H,
            GateKind::Cnot,
            GateKind::Swap,
            GateKind::Toffoli,
            GateKind::Fredkin,
            GateKind::CRk(1),
            GateKind::CRk(4),
            GateKind::CRkInv(2),
            GateKind::CV,
            GateKind::CVInv,
            GateKind::R {
                theta: 0.7,
                phi: -1.3,
            },
            GateKind::XX { chi: 0.4 },
        ];
        for k in kinds {
            let m = k.matrix();
            assert_eq!(m.dim, 1 << k.arity());
            assert!(m.unitarity_error() < 1e-12, "{k:?}");
            // adjoint's matrix is the conjugate transpose
            assert!(
                k.adjoint().matrix().max_abs_diff(&m.adjoint()) < 1e-12,
                "{k:?}"
            );
        }
    }

    #[test]
    fn cv_squared_is_cnot() {
        let cv = GateKind::CV.matrix();
        assert!(cv.mul(&cv).max_abs_diff(&GateKind::Cnot.matrix()) < 1e-12);
    }

    #[test]
    fn layout_ranges_cover_width() {
        let l = RegisterLayout::new(8, 3).unwrap();
        assert_eq!(l.width(), 25);
        let mut covered = vec![false; l.width()];
        for (_, r) in l.registers() {
            for w in r {
                assert!(!covered[w]);
                covered[w] = true;
            }
        }
        assert!(covered.iter().all(|&c| c));
        assert_eq!(l.b().len(), 4);
        assert_eq!(l.t(), 24);
    }

    #[test]
    fn layout_from_width_rejects_bad_sizes() {
        assert_eq!(RegisterLayout::from_width(25, 8).unwrap().n, 3);
        assert!(matches!(
            RegisterLayout::from_width(26, 8),
            Err(CircuitError::WrongRegisterSize(_))
        ));
        assert!(RegisterLayout::from_width(5, 8).is_err());
    }

    #[test]
    fn embed_matches_local_matrix_on_two_wires() {
        // CNOT with control on wire 1, target on wire 0: index bit 1 is control.
        let g = Gate::new(GateKind::Cnot, &[1, 0]).unwrap();
        let m = embed(&g, 2);
        let expected = DenseMatrix::from_permutation(&[0, 1, 3, 2]);
        assert!(m.max_abs_diff(&expected) < 1e-15);
        let g = Gate::new(GateKind::Cnot, &[0, 1]).unwrap();
        let expected = DenseMatrix::from_permutation(&[0, 3, 2, 1]);
        assert!(embed(&g, 2).max_abs_diff(&expected) < 1e-15);
    }
}
