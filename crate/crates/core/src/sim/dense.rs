use num_complex::Complex64;

use crate::circuit::{Circuit, Gate, WireId};

use super::{Distribution, SimError};

/// Default qubit cap for the dense engine.
pub const DEFAULT_DENSE_CAP: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DenseConfig {
    pub cap: usize,
}

impl Default for DenseConfig {
    fn default() -> Self {
        Self {
            cap: DEFAULT_DENSE_CAP,
        }
    }
}

/// Amplitudes over `2^width` basis states; bit `i` of an index is wire `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    width: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zero(width: usize) -> Self {
        Self::basis(width, 0)
    }

    pub fn basis(width: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << width];
        amps[index] = Complex64::new(1.0, 0.0);
        Self { width, amps }
    }

    /// Wraps raw amplitudes; the length must be a power of two and the norm 1.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, SimError> {
        if !amps.len().is_power_of_two() {
            return Err(SimError::BadStateLength(amps.len()));
        }
        let width = amps.len().trailing_zeros() as usize;
        let s = Self { width, amps };
        let norm = s.norm_sqr();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(SimError::NotNormalized(norm));
        }
        Ok(s)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply_gate(&mut self, gate: &Gate) {
        let wires = gate.wires();
        if let Some(m) = gate.kind.matrix2() {
            self.apply_single(wires[0], &m);
        } else {
            self.apply_multi(wires, &gate.kind.matrix().data);
        }
    }

    fn apply_single(&mut self, wire: WireId, m: &[[Complex64; 2]; 2]) {
        let stride = 1usize << wire;
        let dim = self.amps.len();
        let mut base = 0;
        while base < dim {
            for i in base..base + stride {
                let a0 = self.amps[i];
                let a1 = self.amps[i + stride];
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i + stride] = m[1][0] * a0 + m[1][1] * a1;
            }
            base += 2 * stride;
        }
    }

    /// Applies a `2^k × 2^k` row-major matrix whose first wire is the most
    /// significant local bit.
    fn apply_multi(&mut self, wires: &[WireId], matrix: &[Complex64]) {
        let k = wires.len();
        let local = 1usize << k;
        let mut sorted = wires.to_vec();
        sorted.sort_unstable();
        let offsets: Vec<usize> = (0..local)
            .map(|l| {
                wires
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| l >> (k - 1 - j) & 1 == 1)
                    .map(|(_, &w)| 1usize << w)
                    .sum()
            })
            .collect();
        let mut buf = vec![Complex64::new(0.0, 0.0); local];
        for i in 0..self.amps.len() >> k {
            let base = deposit_zero_bits(i, &sorted);
            for (l, off) in offsets.iter().enumerate() {
                buf[l] = self.amps[base | off];
            }
            for (r, off) in offsets.iter().enumerate() {
                let row = &matrix[r * local..(r + 1) * local];
                self.amps[base | off] = row.iter().zip(&buf).map(|(m, a)| m * a).sum();
            }
        }
    }
}

/// Spreads the bits of `i` so that every position in `zeros` (ascending)
/// holds a 0.
fn deposit_zero_bits(mut i: usize, zeros: &[usize]) -> usize {
    for &z in zeros {
        let low = i & ((1 << z) - 1);
        i = ((i >> z) << (z + 1)) | low;
    }
    i
}

/// Runs `c` on `initial` gate by gate.
pub fn simulate_dense(
    c: &Circuit,
    initial: StateVector,
    cfg: &DenseConfig,
) -> Result<StateVector, SimError> {
    if c.width() > cfg.cap {
        return Err(SimError::WidthOverCap {
            width: c.width(),
            cap: cfg.cap,
        });
    }
    if initial.width != c.width() {
        return Err(SimError::WidthMismatch {
            state: initial.width,
            circuit: c.width(),
        });
    }
    let mut state = initial;
    for g in c.gates() {
        state.apply_gate(g);
    }
    Ok(state)
}

/// Marginal distribution over `wires`; outcome bit `j` is `wires[j]`.
pub fn measure_probs(s: &StateVector, wires: &[WireId]) -> Result<Distribution, SimError> {
    for (i, &w) in wires.iter().enumerate() {
        if w >= s.width {
            return Err(SimError::WireOutOfRange {
                wire: w,
                width: s.width,
            });
        }
        if wires[..i].contains(&w) {
            return Err(SimError::DuplicateWire(w));
        }
    }
    let mut probs = vec![0.0; 1 << wires.len()];
    for (idx, a) in s.amps.iter().enumerate() {
        let p = a.norm_sqr();
        if p == 0.0 {
            continue;
        }
        let outcome: usize = wires
            .iter()
            .enumerate()
            .map(|(j, &w)| (idx >> w & 1) << j)
            .sum();
        probs[outcome] += p;
    }
    Ok(Distribution::from_dense(&probs))
}
