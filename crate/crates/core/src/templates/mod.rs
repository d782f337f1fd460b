//! Circuit templates over the elementary gate set
//! `{X, H, CNOT, SWAP, Toffoli, Fredkin, CR_k, CR_k†}`.
//!
//! Building blocks append to a caller-owned [`Circuit`]; [`build`] emits any
//! template by its catalog name on a standalone circuit.

mod arithmetic;
mod qft;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, ArithError};
use crate::circuit::{Circuit, CircuitError, RegisterLayout};

pub use arithmetic::{
    adder, adder_inv, adder_mod, adder_mod_inv, carry_gate, carry_gate_inv, ctrl_mult_mod,
    ctrl_mult_mod_inv, ctrl_swap, modular_exponentiation, sum_gate, AdderRegs, ModAdderRegs,
    MultRegs,
};
pub use qft::{cr_k, cr_k_inv, qft, qft_inv};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TemplateError {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("N is too big: {modulus} does not fit in {n} bits (need N <= 2^n - 1)")]
    ModulusTooBig { modulus: u64, n: usize },
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u64),
    #[error("{value} is not coprime to N = {modulus}")]
    NotCoprime { value: u64, modulus: u64 },
    #[error("wire {0} used twice in one template")]
    CoincidentWires(usize),
    #[error("Wrong size of registers: {0}")]
    RegisterMismatch(String),
    #[error("n_x = {n_x} is below 2n + 1 = {min} required for order finding")]
    ExponentRegisterTooSmall { n_x: usize, min: usize },
    #[error("unknown template `{0}`")]
    UnknownTemplate(String),
}

/// Parameters shared by the arithmetic templates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateParams {
    #[serde(rename = "N")]
    pub modulus: u64,
    pub y: u64,
    pub n: usize,
    pub n_x: usize,
    /// Multiplier for `Ctrl_MULT_MOD`.
    pub m: u64,
}

impl TemplateParams {
    /// Order-finding parameters with `n_x = 2n + 2`.
    pub fn for_order_finding(modulus: u64, y: u64, n: usize) -> Self {
        Self {
            modulus,
            y,
            n,
            n_x: 2 * n + 2,
            m: y,
        }
    }

    pub fn layout(&self) -> Result<RegisterLayout, TemplateError> {
        Ok(RegisterLayout::new(self.n_x, self.n)?)
    }

    /// Checks `2 <= N < 2^n` and `gcd(y, N) = 1`.
    pub fn validate(&self) -> Result<(), TemplateError> {
        arithmetic::check_modulus(self.modulus, self.n)?;
        if arith::gcd(self.y, self.modulus)? != 1 {
            return Err(TemplateError::NotCoprime {
                value: self.y,
                modulus: self.modulus,
            });
        }
        Ok(())
    }

    /// [`validate`](Self::validate) plus the `n_x >= 2n + 1` precision bound.
    pub fn validate_for_shor(&self) -> Result<(), TemplateError> {
        self.validate()?;
        let min = 2 * self.n + 1;
        if self.n_x < min {
            return Err(TemplateError::ExponentRegisterTooSmall { n_x: self.n_x, min });
        }
        Ok(())
    }
}

/// Hadamards on `x`, modular exponentiation, inverse QFT on `x`.
///
/// Only [`TemplateParams::validate`] is enforced so that reduced-`n_x`
/// instances can be built for dense cross-checks; callers running Shor
/// should use [`TemplateParams::validate_for_shor`].
pub fn order_finding(p: &TemplateParams) -> Result<Circuit, TemplateError> {
    p.validate()?;
    let layout = p.layout()?;
    let mut c = Circuit::with_layout(layout);
    for w in layout.x() {
        c.h(w)?;
    }
    modular_exponentiation(&mut c, &layout, p.y, p.modulus)?;
    let x: Vec<_> = layout.x().collect();
    qft_inv(&mut c, &x)?;
    Ok(c)
}

/// Template catalog names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TemplateName {
    Sum,
    Carry,
    CarryInv,
    Adder,
    AdderInv,
    AdderMod,
    AdderModInv,
    CtrlMultMod,
    CtrlMultModInv,
    CtrlSwap,
    ModularExponentiation,
    CrK,
    CrKInv,
    Qft,
    QftInv,
    OrderFinding,
}

impl TemplateName {
    pub const ALL: [TemplateName; 16] = [
        TemplateName::Sum,
        TemplateName::Carry,
        TemplateName::CarryInv,
        TemplateName::Adder,
        TemplateName::AdderInv,
        TemplateName::AdderMod,
        TemplateName::AdderModInv,
        TemplateName::CtrlMultMod,
        TemplateName::CtrlMultModInv,
        TemplateName::CtrlSwap,
        TemplateName::ModularExponentiation,
        TemplateName::CrK,
        TemplateName::CrKInv,
        TemplateName::Qft,
        TemplateName::QftInv,
        TemplateName::OrderFinding,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TemplateName::Sum => "SUM",
            TemplateName::Carry => "CARRY",
            TemplateName::CarryInv => "CARRY_inv",
            TemplateName::Adder => "ADDER",
            TemplateName::AdderInv => "ADDER_inv",
            TemplateName::AdderMod => "ADDER_MOD",
            TemplateName::AdderModInv => "ADDER_MOD_inv",
            TemplateName::CtrlMultMod => "Ctrl_MULT_MOD",
            TemplateName::CtrlMultModInv => "Ctrl_MULT_MOD_inv",
            TemplateName::CtrlSwap => "Ctrl_SWAP",
            TemplateName::ModularExponentiation => "MODULAR_EXPONENTIATION",
            TemplateName::CrK => "CR_k",
            TemplateName::CrKInv => "CR_k_inv",
            TemplateName::Qft => "QFT_",
            TemplateName::QftInv => "QFT_inv",
            TemplateName::OrderFinding => "Order_Finding",
        }
    }
}

impl fmt::Display for TemplateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TemplateName {
    type Err = TemplateError;

    /// Case-insensitive; `QFT` is accepted for `QFT_`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim_end_matches('_').to_ascii_uppercase();
        TemplateName::ALL
            .into_iter()
            .find(|t| t.as_str().trim_end_matches('_').to_ascii_uppercase() == key)
            .ok_or_else(|| TemplateError::UnknownTemplate(s.to_string()))
    }
}

/// Extra knobs for standalone emission.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    /// Rotation index for `CR_k`.
    pub k: u32,
    /// Wire count for `QFT_` / `QFT_inv`.
    pub qft_width: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self { k: 2, qft_width: 3 }
    }
}

/// Emits one template on the smallest circuit that hosts it. Arithmetic
/// blocks use packed registers (`a, b, c, N, t`, with `control, z` in
/// front for multiplication); exponentiation and order finding use the
/// full register layout.
pub fn build(
    name: TemplateName,
    p: &TemplateParams,
    opts: &BuildOptions,
) -> Result<Circuit, TemplateError> {
    let n = p.n;
    let circuit = match name {
        TemplateName::Sum => {
            let mut c = Circuit::new(3);
            sum_gate(&mut c, 0, 1, 2)?;
            c
        }
        TemplateName::Carry | TemplateName::CarryInv => {
            let mut c = Circuit::new(4);
            if name == TemplateName::Carry {
                carry_gate(&mut c, 0, 1, 2, 3)?;
            } else {
                carry_gate_inv(&mut c, 0, 1, 2, 3)?;
            }
            c
        }
        TemplateName::Adder | TemplateName::AdderInv => {
            let regs = AdderRegs::compact(n);
            let mut c = Circuit::new(3 * n + 1);
            if name == TemplateName::Adder {
                adder(&mut c, &regs)?;
            } else {
                adder_inv(&mut c, &regs)?;
            }
            c
        }
        TemplateName::AdderMod | TemplateName::AdderModInv => {
            let regs = ModAdderRegs::compact(n);
            let mut c = Circuit::new(5 * n + 2);
            if name == TemplateName::AdderMod {
                adder_mod(&mut c, &regs, p.modulus)?;
            } else {
                adder_mod_inv(&mut c, &regs, p.modulus)?;
            }
            c
        }
        TemplateName::CtrlMultMod | TemplateName::CtrlMultModInv => {
            let regs = MultRegs::compact(n);
            let mut c = Circuit::new(6 * n + 3);
            if name == TemplateName::CtrlMultMod {
                ctrl_mult_mod(&mut c, &regs, p.m, p.modulus)?;
            } else {
                ctrl_mult_mod_inv(&mut c, &regs, p.m, p.modulus)?;
            }
            c
        }
        TemplateName::CtrlSwap => {
            let mut c = Circuit::new(3);
            ctrl_swap(&mut c, 0, 1, 2)?;
            c
        }
        TemplateName::ModularExponentiation => {
            p.validate()?;
            let layout = p.layout()?;
            let mut c = Circuit::with_layout(layout);
            modular_exponentiation(&mut c, &layout, p.y, p.modulus)?;
            c
        }
        TemplateName::CrK | TemplateName::CrKInv => {
            let mut c = Circuit::new(2);
            if name == TemplateName::CrK {
                cr_k(&mut c, 0, 1, opts.k)?;
            } else {
                cr_k_inv(&mut c, 0, 1, opts.k)?;
            }
            c
        }
        TemplateName::Qft | TemplateName::QftInv => {
            let w = opts.qft_width;
            let wires: Vec<_> = (0..w).collect();
            let mut c = Circuit::new(w);
            if name == TemplateName::Qft {
                qft(&mut c, &wires)?;
            } else {
                qft_inv(&mut c, &wires)?;
            }
            c
        }
        TemplateName::OrderFinding => order_finding(p)?,
    };
    Ok(circuit)
}
