//! Classical number theory: the helpers the circuit builders need to
//! precompute constants, plus the post-processing for measured phases.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("gcd(0, 0) is undefined")]
    BothZero,
    #[error("{a} has no inverse modulo {modulus} (gcd = {gcd})")]
    NoInverse { a: u64, modulus: u64, gcd: u64 },
    #[error("modulus must be at least {min}, got {got}")]
    ModulusTooSmall { min: u64, got: u64 },
    #[error("{value} and {modulus} are not coprime")]
    NotCoprime { value: u64, modulus: u64 },
    #[error("outcome {outcome} does not fit in {bits} bits")]
    OutcomeOutOfRange { outcome: u64, bits: usize },
    #[error("arithmetic overflow: {0}")]
    Overflow(&'static str),
}

/// Coefficients `x, y` with `a·x + b·y = g = gcd(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BezoutSolution {
    pub x: i64,
    pub y: i64,
    pub g: u64,
}

pub fn gcd(a: u64, b: u64) -> Result<u64, ArithError> {
    if a == 0 && b == 0 {
        return Err(ArithError::BothZero);
    }
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    Ok(a)
}

/// Extended Euclid.
pub fn diophantine_equation(a: u64, b: u64) -> Result<BezoutSolution, ArithError> {
    if a == 0 && b == 0 {
        return Err(ArithError::BothZero);
    }
    let (mut r0, mut r1) = (i128::from(a), i128::from(b));
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    let narrow = |v: i128| i64::try_from(v).map_err(|_| ArithError::Overflow("bezout coefficient"));
    Ok(BezoutSolution {
        x: narrow(s0)?,
        y: narrow(t0)?,
        g: r0 as u64,
    })
}

/// Inverse of `a` modulo `modulus`, in `[1, modulus)`.
pub fn modular_multiplicative_inverse(a: u64, modulus: u64) -> Result<u64, ArithError> {
    if modulus < 2 {
        return Err(ArithError::ModulusTooSmall {
            min: 2,
            got: modulus,
        });
    }
    let sol = diophantine_equation(a % modulus, modulus)?;
    if sol.g != 1 {
        return Err(ArithError::NoInverse {
            a,
            modulus,
            gcd: sol.g,
        });
    }
    Ok(sol.x.rem_euclid(modulus as i64) as u64)
}

/// `base^exp mod modulus` by square-and-multiply.
pub fn mod_pow(base: u64, exp: u64, modulus: u64) -> Result<u64, ArithError> {
    if modulus == 0 {
        return Err(ArithError::ModulusTooSmall { min: 1, got: 0 });
    }
    let m = modulus as u128;
    let mut result = 1u128 % m;
    let mut b = base as u128 % m;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    Ok(result as u64)
}

/// `[y^{2^0}, y^{2^1}, …, y^{2^{count-1}}] mod modulus`.
pub fn precompute_multipliers(y: u64, modulus: u64, count: usize) -> Result<Vec<u64>, ArithError> {
    if modulus < 2 {
        return Err(ArithError::ModulusTooSmall {
            min: 2,
            got: modulus,
        });
    }
    if gcd(y, modulus)? != 1 {
        return Err(ArithError::NotCoprime { value: y, modulus });
    }
    let m = modulus as u128;
    let mut cur = y as u128 % m;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        out.push(cur as u64);
        cur = cur * cur % m;
    }
    Ok(out)
}

/// Denominators of the continued-fraction convergents of `outcome / 2^bits`
/// that are below `bound`, in increasing order without repeats.
pub fn order_candidates(outcome: u64, bits: usize, bound: u64) -> Result<Vec<u64>, ArithError> {
    if bits >= 64 {
        return Err(ArithError::Overflow("register too wide"));
    }
    let denom = 1u64 << bits;
    if outcome >= denom {
        return Err(ArithError::OutcomeOutOfRange { outcome, bits });
    }
    let mut out = Vec::new();
    if outcome == 0 {
        return Ok(out);
    }
    // q_k = a_k q_{k-1} + q_{k-2} with q_{-2} = 1, q_{-1} = 0.
    let (mut num, mut den) = (outcome as u128, denom as u128);
    let (mut q_prev, mut q) = (1u128, 0u128);
    while den != 0 {
        let a = num / den;
        (num, den) = (den, num - a * den);
        let q_next = a * q + q_prev;
        (q_prev, q) = (q, q_next);
        if q >= bound as u128 {
            break;
        }
        let qv = q as u64;
        if out.last() != Some(&qv) {
            out.push(qv);
        }
    }
    Ok(out)
}

/// Returns `(base, exponent)` with `base^exponent = n` and `exponent ≥ 2`,
/// choosing the largest exponent (smallest base).
pub fn is_perfect_power(n: u64) -> Option<(u64, u32)> {
    if n < 4 {
        return None;
    }
    let max_exp = 64 - n.leading_zeros();
    for exp in (2..=max_exp).rev() {
        let root = integer_root(n, exp);
        for cand in [root.saturating_sub(1), root, root + 1] {
            if cand >= 2 && checked_pow(cand, exp) == Some(n) {
                return Some((cand, exp));
            }
        }
    }
    None
}

fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

fn integer_root(n: u64, exp: u32) -> u64 {
    let approx = (n as f64).powf(1.0 / exp as f64).round() as u64;
    approx.max(1)
}

/// Least `r ≥ 1` with `y^r ≡ 1 (mod modulus)`, by direct iteration.
pub fn classical_order(y: u64, modulus: u64) -> Result<u64, ArithError> {
    if modulus < 2 {
        return Err(ArithError::ModulusTooSmall {
            min: 2,
            got: modulus,
        });
    }
    if gcd(y, modulus)? != 1 {
        return Err(ArithError::NotCoprime { value: y, modulus });
    }
    let mut acc = y % modulus;
    let mut r = 1;
    while acc != 1 {
        acc = (acc as u128 * y as u128 % modulus as u128) as u64;
        r += 1;
    }
    Ok(r)
}

/// Number of bits needed to represent `v` (0 for 0).
pub fn bit_length(v: u64) -> usize {
    (64 - v.leading_zeros()) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_gcd(a: u64, b: u64) -> u64 {
        (1..=a.max(b))
            .rev()
            .find(|d| a.is_multiple_of(*d) && b.is_multiple_of(*d))
            .unwrap()
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(6, 4), Ok(2));
        assert_eq!(gcd(9, 0), Ok(9));
        assert_eq!(gcd(0, 9), Ok(9));
        assert_eq!(gcd(35, 21), Ok(brute_gcd(35, 21)));
        assert_eq!(gcd(35, 21), Ok(7));
        assert_eq!(gcd(0, 0), Err(ArithError::BothZero));
    }

    #[test]
    fn diophantine_examples() {
        assert_eq!(
            diophantine_equation(5, 0),
            Ok(BezoutSolution { x: 1, y: 0, g: 5 })
        );
        let s = diophantine_equation(3, 5).unwrap();
        assert_eq!(3 * s.x + 5 * s.y, 1);
        let s = diophantine_equation(6, 4).unwrap();
        assert_eq!(6 * s.x + 4 * s.y, 2);
        assert_eq!(s.g, 2);
        assert_eq!(diophantine_equation(0, 0), Err(ArithError::BothZero));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(modular_multiplicative_inverse(1, 7), Ok(1));
        let brute = |a: u64, n: u64| (1..n).find(|v| a * v % n == 1).unwrap();
        assert_eq!(modular_multiplicative_inverse(3, 5), Ok(brute(3, 5)));
        assert_eq!(modular_multiplicative_inverse(3, 5), Ok(2));
        assert_eq!(modular_multiplicative_inverse(7, 15), Ok(brute(7, 15)));
        assert_eq!(modular_multiplicative_inverse(7, 15), Ok(13));
        assert!(matches!(
            modular_multiplicative_inverse(6, 15),
            Err(ArithError::NoInverse { gcd: 3, .. })
        ));
    }

    #[test]
    fn mod_pow_examples() {
        assert_eq!(mod_pow(3, 4, 5), Ok(1));
        assert_eq!(mod_pow(7, 0, 13), Ok(1));
        assert_eq!(mod_pow(2, 10, 1000), Ok(1024 % 1000));
        assert_eq!(mod_pow(2, 10, 1000), Ok(24));
        assert_eq!(mod_pow(5, 3, 1), Ok(0));
    }

    #[test]
    fn multiplier_examples() {
        assert_eq!(precompute_multipliers(3, 5, 4), Ok(vec![3, 4, 1, 1]));
        assert_eq!(precompute_multipliers(1, 11, 3), Ok(vec![1, 1, 1]));
        assert_eq!(precompute_multipliers(2, 5, 3), Ok(vec![2, 4, 1]));
        assert!(matches!(
            precompute_multipliers(5, 15, 3),
            Err(ArithError::NotCoprime { .. })
        ));
    }

    #[test]
    fn order_candidate_examples() {
        assert_eq!(order_candidates(0, 8, 5), Ok(vec![]));
        assert!(order_candidates(64, 8, 5).unwrap().contains(&4));
        assert!(order_candidates(192, 8, 5).unwrap().contains(&4));
        assert_eq!(order_candidates(128, 8, 5), Ok(vec![1, 2]));
        assert!(order_candidates(256, 8, 5).is_err());
        // 0.0101010... ~ 1/3 with denominators below 21
        assert!(order_candidates(1365, 12, 21).unwrap().contains(&3));
    }

    #[test]
    fn perfect_power_examples() {
        assert_eq!(is_perfect_power(8), Some((2, 3)));
        assert_eq!(is_perfect_power(49), Some((7, 2)));
        assert_eq!(is_perfect_power(15), None);
        assert_eq!(is_perfect_power(2), None);
        assert_eq!(is_perfect_power(64), Some((2, 6)));
        // exhaustive scan oracle
        for n in 2..2000u64 {
            let brute = (2..=11u32).any(|e| (2..=n).any(|b| checked_pow(b, e) == Some(n)));
            assert_eq!(is_perfect_power(n).is_some(), brute, "n = {n}");
            if let Some((b, e)) = is_perfect_power(n) {
                assert_eq!(checked_pow(b, e), Some(n));
            }
        }
    }

    #[test]
    fn classical_order_examples() {
        assert_eq!(classical_order(3, 5), Ok(4));
        assert_eq!(classical_order(4, 15), Ok(2));
        assert_eq!(classical_order(1, 7), Ok(1));
    }

    #[test]
    fn diophantine_exhaustive_small() {
        for a in 0..=1000u64 {
            for b in (0..=1000u64).step_by(7) {
                if a == 0 && b == 0 {
                    continue;
                }
                let s = diophantine_equation(a, b).unwrap();
                assert_eq!(a as i64 * s.x + b as i64 * s.y, s.g as i64);
                assert_eq!(s.g, gcd(a, b).unwrap());
            }
        }
    }

    #[test]
    fn inverse_exhaustive_small() {
        for n in 2..=1000u64 {
            for a in (1..n).step_by(13) {
                if gcd(a, n).unwrap() == 1 {
                    let inv = modular_multiplicative_inverse(a, n).unwrap();
                    assert!((1..n).contains(&inv) || n == 2);
                    assert_eq!(a * inv % n, 1);
                }
            }
        }
    }

    #[test]
    fn mod_pow_matches_naive() {
        for y in 0..=64u64 {
            for x in 0..=64u64 {
                for n in 1..=64u64 {
                    let mut naive = 1 % n;
                    for _ in 0..x {
                        naive = naive * y % n;
                    }
                    assert_eq!(mod_pow(y, x, n), Ok(naive));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn bezout_identity(a in 0u64..100_000, b in 1u64..100_000) {
            let s = diophantine_equation(a, b).unwrap();
            prop_assert_eq!(a as i64 * s.x + b as i64 * s.y, s.g as i64);
            prop_assert_eq!(s.g, gcd(a, b).unwrap());
        }

        #[test]
        fn candidates_recover_exact_orders(
            bits in 2usize..14,
            log_r in 0usize..6,
            s_raw in 0u64..1000,
            extra in 1u64..50,
        ) {
            let r = 1u64 << log_r.min(bits);
            prop_assume!(r > 1);
            let s = (s_raw % r) | 1; // odd s is coprime to a power of two
            let bound = r + extra;
            let outcome = s * ((1u64 << bits) / r);
            let cands = order_candidates(outcome, bits, bound).unwrap();
            prop_assert!(cands.contains(&r), "{:?} missing {}", cands, r);
            prop_assert!(cands.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
