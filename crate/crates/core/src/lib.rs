//! Order-finding circuits built from reversible-arithmetic templates,
//! simulators to run them, and a lowering pipeline to trapped-ion native
//! `R(θ, φ)` / `XX(χ)` gates with resource estimation.

pub mod arith;
pub mod circuit;
pub mod estimate;
pub mod numfmt;
pub mod shor;
pub mod sim;
pub mod templates;
pub mod transpile;

pub use circuit::{Circuit, Gate, GateKind, RegisterLayout, WireId};
