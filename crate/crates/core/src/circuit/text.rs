//! Line-oriented text format for circuits.
//!
//! ```text
//! qubits 3
//! # layout 1 0        (optional, written as "# layout <n_x> <n>")
//! H 0
//! CNOT 0 1
//! CRK 1 2 3
//! R 0 1.5707963267948966 0
//! XX 0 1 0.7853981633974483
//! U1 2 <re00> <im00> <re01> <im01> <re10> <im10> <re11> <im11>
//! ```
//!
//! Floats are written with the shortest representation that parses back to
//! the same value, so `parse(serialize(c)) == c` holds exactly.

use num_complex::Complex64;
use thiserror::Error;

use super::{Circuit, CircuitError, Gate, GateKind, RegisterLayout};

#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

pub fn serialize(c: &Circuit) -> String {
    let mut lines = vec![format!("qubits {}", c.width())];
    if let Some(l) = c.layout() {
        lines.push(format!("# layout {} {}", l.n_x, l.n));
    }
    for g in c.gates() {
        lines.push(gate_line(g));
    }
    lines.join("\n")
}

fn gate_line(g: &Gate) -> String {
    let mut s = g.to_string();
    match g.kind {
        GateKind::CRk(k) | GateKind::CRkInv(k) => s.push_str(&format!(" {k}")),
        GateKind::R { theta, phi } => s.push_str(&format!(" {theta} {phi}")),
        GateKind::XX { chi } => s.push_str(&format!(" {chi}")),
        GateKind::U1(m) => {
            for z in m.iter().flatten() {
                s.push_str(&format!(" {} {}", z.re, z.im));
            }
        }
        _ => {}
    }
    s
}

pub fn parse(text: &str) -> Result<Circuit, ParseError> {
    let mut circuit: Option<Circuit> = None;
    let mut layout = None;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if let Some(comment) = line.strip_prefix('#') {
            let mut it = comment.split_whitespace();
            if it.next() == Some("layout") {
                let n_x = parse_usize(it.next(), lineno, "layout n_x")?;
                let n = parse_usize(it.next(), lineno, "layout n")?;
                layout = Some(
                    RegisterLayout::new(n_x, n)
                        .map_err(|e| ParseError::new(lineno, e.to_string()))?,
                );
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let head = tokens.next().unwrap_or_default();
        let Some(c) = circuit.as_mut() else {
            if head != "qubits" {
                return Err(ParseError::new(lineno, "expected header `qubits <width>`"));
            }
            let width = parse_usize(tokens.next(), lineno, "width")?;
            if tokens.next().is_some() {
                return Err(ParseError::new(lineno, "trailing tokens after header"));
            }
            circuit = Some(Circuit::new(width));
            continue;
        };
        let rest: Vec<&str> = tokens.collect();
        let gate = parse_gate(head, &rest, lineno)?;
        c.push_gate(gate)
            .map_err(|e| ParseError::new(lineno, e.to_string()))?;
    }
    let mut c = circuit.ok_or_else(|| ParseError::new(1, "missing header `qubits <width>`"))?;
    if let Some(l) = layout {
        c.set_layout(l)
            .map_err(|e| ParseError::new(1, e.to_string()))?;
    }
    Ok(c)
}

fn parse_gate(name: &str, args: &[&str], line: usize) -> Result<Gate, ParseError> {
    let (arity, nparams) = match name {
        "X" | "H" => (1, 0),
        "CNOT" | "SWAP" | "CV" | "CVINV" => (2, 0),
        "TOFFOLI" | "FREDKIN" => (3, 0),
        "CRK" | "CRKINV" | "XX" => (2, 1),
        "R" => (1, 2),
        "U1" => (1, 8),
        other => return Err(ParseError::new(line, format!("unknown gate `{other}`"))),
    };
    if args.len() != arity + nparams {
        return Err(ParseError::new(
            line,
            format!(
                "{name} expects {arity} wires and {nparams} parameters, got {} tokens",
                args.len()
            ),
        ));
    }
    let wires = args[..arity]
        .iter()
        .map(|t| parse_usize(Some(t), line, "wire"))
        .collect::<Result<Vec<_>, _>>()?;
    let params = &args[arity..];
    let float = |i: usize| parse_f64(params[i], line);
    let kind = match name {
        "X" => GateKind::X,
        "H" => GateKind::H,
        "CNOT" => GateKind::Cnot,
        "SWAP" => GateKind::Swap,
        "CV" => GateKind::CV,
        "CVINV" => GateKind::CVInv,
        "TOFFOLI" => GateKind::Toffoli,
        "FREDKIN" => GateKind::Fredkin,
        "CRK" => GateKind::CRk(parse_u32(params[0], line)?),
        "CRKINV" => GateKind::CRkInv(parse_u32(params[0], line)?),
        "XX" => GateKind::XX { chi: float(0)? },
        "R" => GateKind::R {
            theta: float(0)?,
            phi: float(1)?,
        },
        "U1" => {
            let v = (0..8).map(float).collect::<Result<Vec<_>, _>>()?;
            let z = |i: usize| Complex64::new(v[2 * i], v[2 * i + 1]);
            GateKind::U1([[z(0), z(1)], [z(2), z(3)]])
        }
        _ => unreachable!(),
    };
    Gate::new(kind, &wires).map_err(|e: CircuitError| ParseError::new(line, e.to_string()))
}

fn parse_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize, ParseError> {
    let tok = tok.ok_or_else(|| ParseError::new(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| ParseError::new(line, format!("malformed {what} `{tok}`")))
}

fn parse_u32(tok: &str, line: usize) -> Result<u32, ParseError> {
    tok.parse()
        .map_err(|_| ParseError::new(line, format!("malformed integer `{tok}`")))
}

fn parse_f64(tok: &str, line: usize) -> Result<f64, ParseError> {
    match tok.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(ParseError::new(line, format!("malformed number `{tok}`"))),
    }
}
