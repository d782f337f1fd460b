use std::fmt;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, CircuitError, GateKind, WireId};
use crate::numfmt::sig;

/// A trapped-ion native operation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate")]
pub enum NativeGate {
    R { wire: WireId, theta: f64, phi: f64 },
    XX { w1: WireId, w2: WireId, chi: f64 },
}

impl NativeGate {
    pub fn is_two_qubit(&self) -> bool {
        matches!(self, NativeGate::XX { .. })
    }

    pub fn wires(&self) -> Vec<WireId> {
        match *self {
            NativeGate::R { wire, .. } => vec![wire],
            NativeGate::XX { w1, w2, .. } => vec![w1, w2],
        }
    }
}

impl fmt::Display for NativeGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            NativeGate::R { wire, theta, phi } => write!(f, "R {wire} {} {}", sig(theta), sig(phi)),
            NativeGate::XX { w1, w2, chi } => write!(f, "XX {w1} {w2} {}", sig(chi)),
        }
    }
}

/// Output of the transpiler. The source unitary equals
/// `e^{i·global_phase}` times the product of `gates`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NativeProgram {
    pub width: usize,
    pub gates: Vec<NativeGate>,
    pub global_phase: f64,
}

impl NativeProgram {
    pub fn new(width: usize) -> Self {
        Self {
            width,
            gates: Vec::new(),
            global_phase: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// The program as a circuit of `R`/`XX` gates (global phase dropped).
    pub fn to_circuit(&self) -> Result<Circuit, CircuitError> {
        let mut c = Circuit::new(self.width);
        for g in &self.gates {
            match *g {
                NativeGate::R { wire, theta, phi } => {
                    c.push(GateKind::R { theta, phi }, &[wire])?
                }
                NativeGate::XX { w1, w2, chi } => c.push(GateKind::XX { chi }, &[w1, w2])?,
            }
        }
        Ok(c)
    }

    /// Largest number of `R` gates on one wire between consecutive `XX`
    /// gates touching that wire (also counting before the first and after
    /// the last).
    pub fn max_single_run(&self) -> usize {
        let mut run = vec![0usize; self.width];
        let mut worst = 0;
        for g in &self.gates {
            match *g {
                NativeGate::R { wire, .. } => {
                    run[wire] += 1;
                    worst = worst.max(run[wire]);
                }
                NativeGate::XX { w1, w2, .. } => {
                    run[w1] = 0;
                    run[w2] = 0;
                }
            }
        }
        worst
    }

    /// `qubits <width>`, one gate per line, then `# global_phase <d>`.
    pub fn to_text(&self) -> String {
        let mut out = format!("qubits {}\n", self.width);
        for g in &self.gates {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out.push_str(&format!("# global_phase {}\n", sig(self.global_phase)));
        out
    }
}
