//! Reversible ripple-carry arithmetic: CARRY/SUM blocks, the plain adder,
//! modular addition, controlled modular multiplication and modular
//! exponentiation. All blocks append to an existing circuit.

use crate::arith;
use crate::circuit::{Circuit, RegisterLayout, WireId};

use super::TemplateError;

/// `c ⊕= a ⊕ b` on `(w0, w1, w2)`, target last.
pub fn sum_gate(c: &mut Circuit, w0: WireId, w1: WireId, w2: WireId) -> Result<(), TemplateError> {
    distinct(&[w0, w1, w2])?;
    c.cnot(w0, w2)?;
    c.cnot(w1, w2)?;
    Ok(())
}

/// Majority into `c_next`; leaves `b` holding `a ⊕ b`.
pub fn carry_gate(
    c: &mut Circuit,
    c_in: WireId,
    a: WireId,
    b: WireId,
    c_next: WireId,
) -> Result<(), TemplateError> {
    distinct(&[c_in, a, b, c_next])?;
    c.toffoli(a, b, c_next)?;
    c.cnot(a, b)?;
    c.toffoli(c_in, b, c_next)?;
    Ok(())
}

pub fn carry_gate_inv(
    c: &mut Circuit,
    c_in: WireId,
    a: WireId,
    b: WireId,
    c_next: WireId,
) -> Result<(), TemplateError> {
    distinct(&[c_in, a, b, c_next])?;
    c.toffoli(c_in, b, c_next)?;
    c.cnot(a, b)?;
    c.toffoli(a, b, c_next)?;
    Ok(())
}

fn distinct(wires: &[WireId]) -> Result<(), TemplateError> {
    for (i, w) in wires.iter().enumerate() {
        if wires[..i].contains(w) {
            return Err(TemplateError::CoincidentWires(*w));
        }
    }
    Ok(())
}

/// Wires for the plain adder: `a` has `n` wires, `b` has `n + 1`, carries `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdderRegs {
    pub a: Vec<WireId>,
    pub b: Vec<WireId>,
    pub c: Vec<WireId>,
}

impl AdderRegs {
    pub fn n(&self) -> usize {
        self.a.len()
    }

    /// `a = 0..n`, `b = n..2n+1`, `c = 2n+1..3n+1`.
    pub fn compact(n: usize) -> Self {
        Self {
            a: (0..n).collect(),
            b: (n..2 * n + 1).collect(),
            c: (2 * n + 1..3 * n + 1).collect(),
        }
    }

    pub fn from_layout(l: &RegisterLayout) -> Self {
        Self {
            a: l.a().collect(),
            b: l.b().collect(),
            c: l.c().collect(),
        }
    }

    fn validate(&self) -> Result<(), TemplateError> {
        let n = self.a.len();
        if n == 0 || self.b.len() != n + 1 || self.c.len() != n {
            return Err(TemplateError::RegisterMismatch(format!(
                "adder needs |a| = n, |b| = n + 1, |c| = n with n >= 1; got {}, {}, {}",
                self.a.len(),
                self.b.len(),
                self.c.len()
            )));
        }
        let all: Vec<_> = self
            .a
            .iter()
            .chain(&self.b)
            .chain(&self.c)
            .copied()
            .collect();
        distinct(&all)
    }
}

/// `|a⟩|b⟩|0⟩ → |a⟩|(a + b) mod 2^{n+1}⟩|0⟩`.
pub fn adder(c: &mut Circuit, r: &AdderRegs) -> Result<(), TemplateError> {
    r.validate()?;
    let n = r.n();
    let next_carry = |i: usize| if i + 1 < n { r.c[i + 1] } else { r.b[n] };
    for i in 0..n {
        carry_gate(c, r.c[i], r.a[i], r.b[i], next_carry(i))?;
    }
    c.cnot(r.a[n - 1], r.b[n - 1])?;
    sum_gate(c, r.c[n - 1], r.a[n - 1], r.b[n - 1])?;
    for i in (0..n - 1).rev() {
        carry_gate_inv(c, r.c[i], r.a[i], r.b[i], r.c[i + 1])?;
        sum_gate(c, r.c[i], r.a[i], r.b[i])?;
    }
    Ok(())
}

pub fn adder_inv(c: &mut Circuit, r: &AdderRegs) -> Result<(), TemplateError> {
    append_inverse(c, |tmp| adder(tmp, r))
}

/// Runs `build` into a scratch circuit of the same width and appends its
/// inverse.
fn append_inverse(
    c: &mut Circuit,
    build: impl FnOnce(&mut Circuit) -> Result<(), TemplateError>,
) -> Result<(), TemplateError> {
    let mut tmp = Circuit::new(c.width());
    build(&mut tmp)?;
    c.append(&tmp.inverse())?;
    Ok(())
}

/// Registers for modular addition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModAdderRegs {
    pub adder: AdderRegs,
    pub modulus: Vec<WireId>,
    pub t: WireId,
}

impl ModAdderRegs {
    /// `a, b, c, N, t` packed from wire 0, width `5n + 2`.
    pub fn compact(n: usize) -> Self {
        Self {
            adder: AdderRegs::compact(n),
            modulus: (3 * n + 1..4 * n + 1).collect(),
            t: 4 * n + 1,
        }
    }

    pub fn from_layout(l: &RegisterLayout) -> Self {
        Self {
            adder: AdderRegs::from_layout(l),
            modulus: l.modulus().collect(),
            t: l.t(),
        }
    }

    fn validate(&self) -> Result<(), TemplateError> {
        self.adder.validate()?;
        if self.modulus.len() != self.adder.n() {
            return Err(TemplateError::RegisterMismatch(format!(
                "modulus register has {} wires, expected {}",
                self.modulus.len(),
                self.adder.n()
            )));
        }
        let r = &self.adder;
        let all: Vec<_> =
            r.a.iter()
                .chain(&r.b)
                .chain(&r.c)
                .chain(&self.modulus)
                .chain(std::iter::once(&self.t))
                .copied()
                .collect();
        distinct(&all)
    }
}

pub(crate) fn check_modulus(modulus: u64, n: usize) -> Result<(), TemplateError> {
    if modulus < 2 {
        return Err(TemplateError::ModulusTooSmall(modulus));
    }
    if n >= 63 || modulus > (1u64 << n) - 1 {
        return Err(TemplateError::ModulusTooBig { modulus, n });
    }
    Ok(())
}

/// `|a⟩|b⟩|0⟩|N⟩|0⟩ → |a⟩|(a + b) mod N⟩|0⟩|N⟩|0⟩` for `a, b < N`.
///
/// `modulus` is the classical value held in the `N` register; it decides
/// which `a` wires the `t`-controlled CNOTs touch.
pub fn adder_mod(c: &mut Circuit, r: &ModAdderRegs, modulus: u64) -> Result<(), TemplateError> {
    r.validate()?;
    let n = r.adder.n();
    check_modulus(modulus, n)?;
    let top = r.adder.b[n];
    let set_bits: Vec<usize> = (0..n).filter(|i| modulus >> i & 1 == 1).collect();

    // Block 1
    adder(c, &r.adder)?;
    for i in 0..n {
        c.swap(r.adder.a[i], r.modulus[i])?;
    }
    adder_inv(c, &r.adder)?;
    // t = 1 iff a + b - N >= 0, i.e. the sign bit is clear
    c.x(top)?;
    c.cnot(top, r.t)?;
    c.x(top)?;
    for &i in &set_bits {
        c.cnot(r.t, r.adder.a[i])?;
    }
    adder(c, &r.adder)?;
    for &i in &set_bits {
        c.cnot(r.t, r.adder.a[i])?;
    }
    for i in 0..n {
        c.swap(r.adder.a[i], r.modulus[i])?;
    }

    // Block 2: b - a is negative exactly when t was set
    adder_inv(c, &r.adder)?;
    c.cnot(top, r.t)?;
    adder(c, &r.adder)?;
    Ok(())
}

pub fn adder_mod_inv(c: &mut Circuit, r: &ModAdderRegs, modulus: u64) -> Result<(), TemplateError> {
    append_inverse(c, |tmp| adder_mod(tmp, r, modulus))
}

/// Registers for controlled modular multiplication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultRegs {
    pub control: WireId,
    pub z: Vec<WireId>,
    pub inner: ModAdderRegs,
}

impl MultRegs {
    /// `control, z, a, b, c, N, t` packed from wire 0, width `6n + 3`.
    pub fn compact(n: usize) -> Self {
        let shift = |v: Vec<WireId>| v.into_iter().map(|w| w + n + 1).collect::<Vec<_>>();
        let m = ModAdderRegs::compact(n);
        Self {
            control: 0,
            z: (1..n + 1).collect(),
            inner: ModAdderRegs {
                adder: AdderRegs {
                    a: shift(m.adder.a),
                    b: shift(m.adder.b),
                    c: shift(m.adder.c),
                },
                modulus: shift(m.modulus),
                t: m.t + n + 1,
            },
        }
    }

    pub fn from_layout(l: &RegisterLayout, control: WireId) -> Self {
        Self {
            control,
            z: l.z().collect(),
            inner: ModAdderRegs::from_layout(l),
        }
    }

    fn validate(&self) -> Result<(), TemplateError> {
        self.inner.validate()?;
        if self.z.len() != self.inner.adder.n() {
            return Err(TemplateError::RegisterMismatch(format!(
                "z register has {} wires, expected {}",
                self.z.len(),
                self.inner.adder.n()
            )));
        }
        let mut all = vec![self.control, self.inner.t];
        all.extend(&self.z);
        all.extend(&self.inner.adder.a);
        all.extend(&self.inner.adder.b);
        all.extend(&self.inner.adder.c);
        all.extend(&self.inner.modulus);
        distinct(&all)
    }
}

/// Control set: `b ← z·m mod N`. Control clear: `b ← z`. Every other
/// register is restored.
pub fn ctrl_mult_mod(
    c: &mut Circuit,
    r: &MultRegs,
    multiplier: u64,
    modulus: u64,
) -> Result<(), TemplateError> {
    r.validate()?;
    let n = r.z.len();
    check_modulus(modulus, n)?;
    if arith::gcd(multiplier, modulus)? != 1 {
        return Err(TemplateError::NotCoprime {
            value: multiplier,
            modulus,
        });
    }
    let a = &r.inner.adder.a;
    let m = multiplier % modulus;
    for i in 0..n {
        // 2^i·m mod N, computed without overflow
        let addend = (((1u128 << i) % modulus as u128) * m as u128 % modulus as u128) as u64;
        let bits: Vec<usize> = (0..n).filter(|j| addend >> j & 1 == 1).collect();
        for &j in &bits {
            c.toffoli(r.control, r.z[i], a[j])?;
        }
        adder_mod(c, &r.inner, modulus)?;
        for &j in &bits {
            c.toffoli(r.control, r.z[i], a[j])?;
        }
    }
    c.x(r.control)?;
    for i in 0..n {
        c.toffoli(r.control, r.z[i], r.inner.adder.b[i])?;
    }
    c.x(r.control)?;
    Ok(())
}

pub fn ctrl_mult_mod_inv(
    c: &mut Circuit,
    r: &MultRegs,
    multiplier: u64,
    modulus: u64,
) -> Result<(), TemplateError> {
    append_inverse(c, |tmp| ctrl_mult_mod(tmp, r, multiplier, modulus))
}

/// Fredkin gate: swap `t0`, `t1` when `control` is set.
pub fn ctrl_swap(
    c: &mut Circuit,
    control: WireId,
    t0: WireId,
    t1: WireId,
) -> Result<(), TemplateError> {
    distinct(&[control, t0, t1])?;
    c.fredkin(control, t0, t1)?;
    Ok(())
}

/// `|x⟩|1⟩|0⟩|0⟩|0⟩|N⟩|0⟩ → |x⟩|y^x mod N⟩|0⟩|0⟩|0⟩|N⟩|0⟩` over the given layout.
pub fn modular_exponentiation(
    c: &mut Circuit,
    layout: &RegisterLayout,
    base: u64,
    modulus: u64,
) -> Result<(), TemplateError> {
    if c.width() != layout.width() {
        return Err(TemplateError::RegisterMismatch(format!(
            "circuit width {} does not match layout width {}",
            c.width(),
            layout.width()
        )));
    }
    check_modulus(modulus, layout.n)?;
    let multipliers =
        arith::precompute_multipliers(base, modulus, layout.n_x).map_err(|e| match e {
            arith::ArithError::NotCoprime { value, modulus } => {
                TemplateError::NotCoprime { value, modulus }
            }
            other => other.into(),
        })?;
    let z: Vec<_> = layout.z().collect();
    let b: Vec<_> = layout.b().collect();
    for (i, &m) in multipliers.iter().enumerate() {
        let regs = MultRegs::from_layout(layout, layout.x().start + i);
        let m_inv = arith::modular_multiplicative_inverse(m, modulus)?;
        ctrl_mult_mod(c, &regs, m, modulus)?;
        for j in 0..layout.n {
            c.swap(z[j], b[j])?;
        }
        ctrl_mult_mod_inv(c, &regs, m_inv, modulus)?;
    }
    Ok(())
}
