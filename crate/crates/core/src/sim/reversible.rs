//! Basis-state engine for circuits made only of permutation gates.

use crate::circuit::{Circuit, GateKind, WireId};

use super::SimError;

/// A computational basis state; bit `i` is wire `i`.
pub type BasisState = u128;

/// Widest circuit the reversible engine accepts.
pub const MAX_REVERSIBLE_WIDTH: usize = 128;

#[derive(Debug, Clone, Copy)]
enum Op {
    Flip(BasisState),
    /// Flip `target` when all bits in `controls` are set.
    Controlled {
        controls: BasisState,
        target: BasisState,
    },
    /// Exchange bits `a` and `b` when all bits in `controls` are set.
    Swap {
        controls: BasisState,
        a: u32,
        b: u32,
    },
}

/// A circuit compiled to bit masks, for running many basis inputs.
#[derive(Debug, Clone)]
pub struct ReversibleProgram {
    ops: Vec<Op>,
}

impl ReversibleProgram {
    pub fn compile(c: &Circuit) -> Result<Self, SimError> {
        if c.width() > MAX_REVERSIBLE_WIDTH {
            return Err(SimError::TooWideForReversible(c.width()));
        }
        let bit = |w: WireId| 1u128 << w;
        let ops = c
            .gates()
            .iter()
            .enumerate()
            .map(|(position, g)| {
                let w = g.wires();
                Ok(match g.kind {
                    GateKind::X => Op::Flip(bit(w[0])),
                    GateKind::Cnot => Op::Controlled {
                        controls: bit(w[0]),
                        target: bit(w[1]),
                    },
                    GateKind::Toffoli => Op::Controlled {
                        controls: bit(w[0]) | bit(w[1]),
                        target: bit(w[2]),
                    },
                    GateKind::Swap => Op::Swap {
                        controls: 0,
                        a: w[0] as u32,
                        b: w[1] as u32,
                    },
                    GateKind::Fredkin => Op::Swap {
                        controls: bit(w[0]),
                        a: w[1] as u32,
                        b: w[2] as u32,
                    },
                    other => {
                        return Err(SimError::NonClassicalGate {
                            gate: other.name(),
                            position,
                        })
                    }
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { ops })
    }

    pub fn run(&self, mut s: BasisState) -> BasisState {
        for op in &self.ops {
            match *op {
                Op::Flip(m) => s ^= m,
                Op::Controlled { controls, target } => {
                    if s & controls == controls {
                        s ^= target;
                    }
                }
                Op::Swap { controls, a, b } => {
                    if s & controls == controls && ((s >> a) ^ (s >> b)) & 1 == 1 {
                        s ^= (1 << a) | (1 << b);
                    }
                }
            }
        }
        s
    }
}

pub fn simulate_reversible(c: &Circuit, basis_in: BasisState) -> Result<BasisState, SimError> {
    Ok(ReversibleProgram::compile(c)?.run(basis_in))
}

/// Reads the little-endian integer held on `wires`.
pub fn read_register<I>(s: BasisState, wires: I) -> u64
where
    I: IntoIterator<Item = WireId>,
{
    wires
        .into_iter()
        .enumerate()
        .map(|(j, w)| ((s >> w & 1) as u64) << j)
        .sum()
}

/// Overwrites `wires` with the little-endian bits of `value`.
pub fn write_register<I>(s: BasisState, wires: I, value: u64) -> BasisState
where
    I: IntoIterator<Item = WireId>,
{
    let mut s = s;
    for (j, w) in wires.into_iter().enumerate() {
        s &= !(1u128 << w);
        s |= ((value >> j & 1) as u128) << w;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;

    #[test]
    fn x_on_zero() {
        let mut c = Circuit::new(1);
        c.x(0).unwrap();
        assert_eq!(simulate_reversible(&c, 0), Ok(1));
    }

    #[test]
    fn rejects_non_classical_gates_with_position() {
        let mut c = Circuit::new(2);
        c.x(0).unwrap();
        c.h(1).unwrap();
        assert_eq!(
            simulate_reversible(&c, 0),
            Err(SimError::NonClassicalGate {
                gate: "H",
                position: 1
            })
        );
    }

    #[test]
    fn fredkin_truth_table() {
        let mut c = Circuit::new(3);
        c.push_gate(Gate::new(GateKind::Fredkin, &[0, 1, 2]).unwrap())
            .unwrap();
        for s in 0..8u128 {
            let expected = if s & 1 == 1 {
                (s & 1) | ((s >> 1 & 1) << 2) | ((s >> 2 & 1) << 1)
            } else {
                s
            };
            assert_eq!(simulate_reversible(&c, s).unwrap(), expected);
        }
    }

    #[test]
    fn register_helpers_round_trip() {
        let s = write_register(0, [3, 5, 9], 0b101);
        assert_eq!(s, (1 << 3) | (1 << 9));
        assert_eq!(read_register(s, [3, 5, 9]), 0b101);
        assert_eq!(read_register(s, [9, 5, 3]), 0b101);
        assert_eq!(read_register(write_register(s, [9], 0), [3, 5, 9]), 0b001);
    }

    #[test]
    fn wide_circuits_work() {
        let mut c = Circuit::new(100);
        c.cnot(0, 99).unwrap();
        assert_eq!(simulate_reversible(&c, 1).unwrap(), 1 | (1 << 99));
    }
}
