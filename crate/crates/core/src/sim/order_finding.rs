//! Exact measurement statistics of the order-finding circuit without a
//! `2^(n_x + 5n + 2)` statevector.
//!
//! After the Hadamards and the modular exponentiation the joint state is
//! `2^{-n_x/2} Σ_x |x⟩|f(x)⟩` with ancillas back at their inputs. Grouping
//! `x` by `f(x)` makes the inverse QFT act on each group independently, so
//! the `x`-register distribution is a sum of squared DFTs of indicator
//! vectors.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::arith::{self, bit_length};
use crate::circuit::{Circuit, RegisterLayout};
use crate::templates::{modular_exponentiation, order_finding, TemplateParams};

use super::{
    measure_probs, read_register, simulate_dense, write_register, BasisState, DenseConfig,
    Distribution, ReversibleProgram, SimError, StateVector,
};

/// `f(x) = y^x mod N` for every `x < 2^{n_x}`, evaluated on the circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct ModexpTable {
    pub layout: RegisterLayout,
    pub values: Vec<u64>,
}

/// Runs the modular-exponentiation circuit on every basis `x`, checking
/// the result against [`arith::mod_pow`] and that every other register is
/// restored.
pub fn modexp_table(modulus: u64, y: u64, n_x: usize) -> Result<ModexpTable, SimError> {
    let n = bit_length(modulus);
    let params = TemplateParams {
        modulus,
        y,
        n,
        n_x,
        m: y,
    };
    params.validate()?;
    let layout = params.layout()?;
    let mut c = Circuit::with_layout(layout);
    modular_exponentiation(&mut c, &layout, y, modulus)?;
    let program = ReversibleProgram::compile(&c)?;

    let base = order_finding_input(&layout, modulus);
    let mut values = Vec::with_capacity(1 << n_x);
    for x in 0..1u64 << n_x {
        let input = write_register(base, layout.x(), x);
        let out = program.run(input);
        let z = read_register(out, layout.z());
        let expected =
            arith::mod_pow(y, x, modulus).map_err(crate::templates::TemplateError::from)?;
        if z != expected {
            return Err(SimError::EngineMismatch {
                x,
                got: z,
                expected,
            });
        }
        if write_register(out, layout.z(), 1) != input {
            return Err(SimError::AncillaNotRestored(x));
        }
        values.push(z);
    }
    Ok(ModexpTable { layout, values })
}

/// Distribution of the `x` register after the inverse QFT.
pub fn order_finding_distribution(
    modulus: u64,
    y: u64,
    n_x: usize,
) -> Result<Distribution, SimError> {
    let table = modexp_table(modulus, y, n_x)?;
    Ok(distribution_from_values(&table.values))
}

/// Basis state the order-finding circuit starts from: `z = 1`, the `N`
/// register holding the modulus, everything else zero.
pub fn order_finding_input(layout: &RegisterLayout, modulus: u64) -> BasisState {
    write_register(write_register(0, layout.z(), 1), layout.modulus(), modulus)
}

/// The same distribution by full statevector simulation of the
/// order-finding circuit; only feasible for tiny instances.
pub fn dense_order_finding_distribution(
    modulus: u64,
    y: u64,
    n_x: usize,
    cfg: &DenseConfig,
) -> Result<Distribution, SimError> {
    let params = TemplateParams {
        modulus,
        y,
        n: bit_length(modulus),
        n_x,
        m: y,
    };
    let c = order_finding(&params)?;
    let layout = params.layout()?;
    if c.width() > cfg.cap {
        return Err(SimError::WidthOverCap {
            width: c.width(),
            cap: cfg.cap,
        });
    }
    let input = StateVector::basis(c.width(), order_finding_input(&layout, modulus) as usize);
    let out = simulate_dense(&c, input, cfg)?;
    let x: Vec<_> = layout.x().collect();
    measure_probs(&out, &x)
}

pub(crate) fn distribution_from_values(values: &[u64]) -> Distribution {
    let size = values.len();
    let mut groups: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (x, &v) in values.iter().enumerate() {
        groups.entry(v).or_default().push(x);
    }
    let fft = FftPlanner::<f64>::new().plan_fft_forward(size);
    let mut probs = vec![0.0; size];
    let mut buf = vec![Complex64::new(0.0, 0.0); size];
    let scale = 1.0 / size as f64;
    for xs in groups.values() {
        buf.fill(Complex64::new(0.0, 0.0));
        for &x in xs {
            buf[x] = Complex64::new(1.0, 0.0);
        }
        fft.process(&mut buf);
        for (p, a) in probs.iter_mut().zip(&buf) {
            *p += (a * scale).norm_sqr();
        }
    }
    Distribution::from_dense(&probs)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct `O(M^2)` sum, independent of the FFT path.
    fn brute_distribution(values: &[u64]) -> Vec<f64> {
        let m = values.len();
        let mut groups: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        for (x, &v) in values.iter().enumerate() {
            groups.entry(v).or_default().push(x);
        }
        (0..m)
            .map(|k| {
                groups
                    .values()
                    .map(|xs| {
                        let amp: Complex64 = xs
                            .iter()
                            .map(|&x| {
                                let ang =
                                    -2.0 * std::f64::consts::PI * ((x * k) % m) as f64 / m as f64;
                                Complex64::from_polar(1.0 / m as f64, ang)
                            })
                            .sum();
                        amp.norm_sqr()
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn trivial_base_gives_zero_outcome() {
        let d = order_finding_distribution(5, 1, 4).unwrap();
        assert!((d.prob(0) - 1.0).abs() < 1e-12);
        assert_eq!(d.support(), vec![0]);
    }

    #[test]
    fn order_two_peaks() {
        let d = order_finding_distribution(5, 4, 8).unwrap();
        assert!((d.prob(0) - 0.5).abs() < 1e-9);
        assert!((d.prob(128) - 0.5).abs() < 1e-9);
        assert_eq!(d.support(), vec![0, 128]);
    }

    #[test]
    fn fft_matches_direct_sum() {
        let table = modexp_table(7, 3, 6).unwrap();
        let fast = distribution_from_values(&table.values);
        let slow = brute_distribution(&table.values);
        for (k, p) in slow.iter().enumerate() {
            assert!((fast.prob(k as u64) - p).abs() < 1e-12);
        }
        assert!((fast.total() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn dense_path_agrees() {
        let cfg = DenseConfig::default();
        let dense = dense_order_finding_distribution(3, 2, 2, &cfg).unwrap();
        let fast = order_finding_distribution(3, 2, 2).unwrap();
        assert!(dense.max_abs_diff(&fast) < 1e-9);
        assert!(matches!(
            dense_order_finding_distribution(5, 3, 8, &cfg),
            Err(SimError::WidthOverCap { .. })
        ));
    }

    #[test]
    fn rejects_non_coprime_base() {
        assert!(matches!(
            order_finding_distribution(15, 5, 4),
            Err(SimError::Template(_))
        ));
    }
}
