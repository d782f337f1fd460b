//! Gate counts and the level-label depth bound of native programs, and the
//! end-to-end resource table for order finding.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::gcd;
use crate::templates::{order_finding, TemplateError, TemplateParams};
use crate::transpile::{transpile, NativeGate, NativeProgram, TranspileError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EstimateError {
    #[error("n must be at least 2, got {0}")]
    WidthTooSmall(usize),
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error(transparent)]
    Transpile(#[from] TranspileError),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCounts {
    pub total_native: usize,
    pub two_qubit: usize,
    pub single_qubit: usize,
    pub histogram: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceReport {
    pub n: usize,
    pub n_x: usize,
    #[serde(rename = "N")]
    pub modulus: u64,
    pub y: u64,
    pub total_native: usize,
    pub two_qubit: usize,
    pub single_qubit: usize,
    /// Already multiplied by 3.
    pub depth_bound: usize,
    pub histogram: BTreeMap<String, usize>,
}

pub fn count_gates(p: &NativeProgram) -> GateCounts {
    let mut counts = GateCounts::default();
    for g in &p.gates {
        let key = match g {
            NativeGate::R { .. } => {
                counts.single_qubit += 1;
                "R"
            }
            NativeGate::XX { .. } => {
                counts.two_qubit += 1;
                "XX"
            }
        };
        *counts.histogram.entry(key.to_string()).or_default() += 1;
    }
    counts.total_native = counts.single_qubit + counts.two_qubit;
    counts
}

/// Each wire carries a level label starting at 0. A two-qubit gate lifts
/// both of its wires to `max(labels) + 1`; single-qubit gates are ignored.
/// Every level is padded by the up-to-two rotations around it, hence the
/// factor 3.
pub fn depth_bound(p: &NativeProgram) -> usize {
    let mut label = vec![0usize; p.width];
    let mut top = 0;
    for g in &p.gates {
        if let NativeGate::XX { w1, w2, .. } = *g {
            let next = label[w1].max(label[w2]) + 1;
            label[w1] = next;
            label[w2] = next;
            top = top.max(next);
        }
    }
    3 * top
}

/// Layer count of an as-soon-as-possible schedule of the two-qubit gates
/// that keeps gate order on each wire.
pub fn greedy_two_qubit_depth(p: &NativeProgram) -> usize {
    let mut busy_until = vec![0usize; p.width];
    let mut layers = 0;
    for g in &p.gates {
        if let NativeGate::XX { w1, w2, .. } = *g {
            let slot = busy_until[w1].max(busy_until[w2]);
            busy_until[w1] = slot + 1;
            busy_until[w2] = slot + 1;
            layers = layers.max(slot + 1);
        }
    }
    layers
}

/// `N = 2^n − 1` and the smallest base `y ≥ 2` coprime to it.
pub fn representative_params(n: usize) -> Result<(u64, u64), EstimateError> {
    if n < 2 {
        return Err(EstimateError::WidthTooSmall(n));
    }
    let modulus = (1u64 << n) - 1;
    let y = (2..modulus)
        .find(|&y| gcd(y, modulus) == Ok(1))
        .unwrap_or(1);
    Ok((modulus, y))
}

pub fn estimate_order_finding(n: usize, n_x: usize) -> Result<ResourceReport, EstimateError> {
    let (modulus, y) = representative_params(n)?;
    estimate_for(modulus, y, n, n_x)
}

/// Resources of the order-finding circuit for a specific `N` and `y`.
pub fn estimate_for(
    modulus: u64,
    y: u64,
    n: usize,
    n_x: usize,
) -> Result<ResourceReport, EstimateError> {
    let params = TemplateParams {
        modulus,
        y,
        n,
        n_x,
        m: y,
    };
    let circuit = order_finding(&params)?;
    let program = transpile(&circuit)?;
    let counts = count_gates(&program);
    Ok(ResourceReport {
        n,
        n_x,
        modulus,
        y,
        total_native: counts.total_native,
        two_qubit: counts.two_qubit,
        single_qubit: counts.single_qubit,
        depth_bound: depth_bound(&program),
        histogram: counts.histogram,
    })
}

/// One report per `n`, with `n_x = 2n + 2`. Rows are built in parallel.
pub fn estimate_table(ns: RangeInclusive<usize>) -> Result<Vec<ResourceReport>, EstimateError> {
    let ns: Vec<usize> = ns.collect();
    std::thread::scope(|s| {
        let handles: Vec<_> = ns
            .iter()
            .map(|&n| s.spawn(move || estimate_order_finding(n, 2 * n + 2)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("estimator thread panicked"))
            .collect()
    })
}

pub const TABLE_HEADER: &str = "max_N,all_native,two_qubit,depth_bound,n,n_x,N,y";

/// CSV with the columns of the published resource table first.
pub fn table_csv(rows: &[ResourceReport]) -> String {
    let mut out = format!("{TABLE_HEADER}\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            1u64 << r.n,
            r.total_native,
            r.two_qubit,
            r.depth_bound,
            r.n,
            r.n_x,
            r.modulus,
            r.y
        ));
    }
    out
}
