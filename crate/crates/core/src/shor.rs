//! Classical reduction from factoring to order finding, driving the
//! simulated order-finding circuit.

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{bit_length, gcd, is_perfect_power, mod_pow, order_candidates, ArithError};
use crate::sim::{order_finding_distribution, Distribution, SimError};

pub const DEFAULT_MAX_TRIALS: usize = 20;
pub const DEFAULT_MAX_SAMPLES: usize = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ShorError {
    #[error("N must be at least 2, got {0}")]
    ModulusTooSmall(u64),
    #[error("y = {y} shares a factor with N = {modulus}")]
    NotCoprime { y: u64, modulus: u64 },
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// How measurement outcomes are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingMode {
    /// Straight from the exact distribution.
    Exact,
    /// From the empirical distribution of this many shots.
    Shots(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShorConfig {
    pub max_trials: usize,
    /// Measurements per order-finding call.
    pub max_samples: usize,
    /// Exponent register width; `None` means `2n + 2`.
    pub n_x: Option<usize>,
    pub sampling: SamplingMode,
}

impl Default for ShorConfig {
    fn default() -> Self {
        Self {
            max_trials: DEFAULT_MAX_TRIALS,
            max_samples: DEFAULT_MAX_SAMPLES,
            n_x: None,
            sampling: SamplingMode::Exact,
        }
    }
}

impl ShorConfig {
    pub fn n_x_for(&self, modulus: u64) -> usize {
        self.n_x.unwrap_or(2 * bit_length(modulus) + 2)
    }
}

/// Record of one order-finding call.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderSearch {
    pub outcomes: Vec<u64>,
    pub candidates: Vec<u64>,
    pub order: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trial {
    pub x: u64,
    pub gcd_shortcut: bool,
    pub outcomes: Vec<u64>,
    pub candidates: Vec<u64>,
    pub order: Option<u64>,
    pub factor: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Even,
    PerfectPower,
    Gcd,
    Order,
    NoFactorFound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShorOutcome {
    #[serde(rename = "N")]
    pub modulus: u64,
    pub seed: u64,
    pub n_x: usize,
    pub method: Method,
    pub factor: Option<u64>,
    pub cofactor: Option<u64>,
    pub trial_count: usize,
    pub trials: Vec<Trial>,
}

impl ShorOutcome {
    pub fn success(&self) -> bool {
        self.factor.is_some()
    }

    /// Trials whose base led to a factor (at most one per run).
    pub fn successful_trials(&self) -> usize {
        self.trials.iter().filter(|t| t.factor.is_some()).count()
    }
}

/// Order finder with a distribution cache keyed by `(N, y, n_x)`.
#[derive(Debug, Default)]
pub struct OrderFinder {
    cache: HashMap<(u64, u64, usize, SamplingKey), Distribution>,
}

type SamplingKey = Option<usize>;

impl OrderFinder {
    pub fn new() -> Self {
        Self::default()
    }

    fn distribution<R: Rng>(
        &mut self,
        y: u64,
        modulus: u64,
        n_x: usize,
        sampling: SamplingMode,
        rng: &mut R,
    ) -> Result<&Distribution, ShorError> {
        let key_mode = match sampling {
            SamplingMode::Exact => None,
            SamplingMode::Shots(s) => Some(s),
        };
        let key = (modulus, y, n_x, key_mode);
        if let std::collections::hash_map::Entry::Vacant(e) = self.cache.entry(key) {
            let exact = order_finding_distribution(modulus, y, n_x)?;
            let d = match sampling {
                SamplingMode::Exact => exact,
                SamplingMode::Shots(s) => exact.sample_shots(rng, s.max(1)),
            };
            e.insert(d);
        }
        Ok(&self.cache[&key])
    }

    /// Samples up to `max_samples` outcomes and returns the order of `y`
    /// once a candidate passes the `mod_pow` check.
    pub fn find_order<R: Rng>(
        &mut self,
        y: u64,
        modulus: u64,
        n_x: usize,
        max_samples: usize,
        sampling: SamplingMode,
        rng: &mut R,
    ) -> Result<OrderSearch, ShorError> {
        if modulus < 2 {
            return Err(ShorError::ModulusTooSmall(modulus));
        }
        if gcd(y, modulus)? != 1 {
            return Err(ShorError::NotCoprime { y, modulus });
        }
        let mut search = OrderSearch::default();
        if y % modulus == 1 {
            search.order = Some(1);
            return Ok(search);
        }
        for _ in 0..max_samples {
            let outcome = self
                .distribution(y, modulus, n_x, sampling, rng)?
                .sample(rng);
            search.outcomes.push(outcome);
            let cands = order_candidates(outcome, n_x, modulus)?;
            search.candidates.extend(&cands);
            if let Some(r) = validate_candidates(y, modulus, &cands)? {
                search.order = Some(r);
                break;
            }
        }
        Ok(search)
    }
}

/// Tries every candidate and its multiples up to twice the largest one;
/// the first that satisfies `y^r ≡ 1` is reduced to the exact order.
fn validate_candidates(y: u64, modulus: u64, cands: &[u64]) -> Result<Option<u64>, ArithError> {
    let Some(&largest) = cands.iter().max() else {
        return Ok(None);
    };
    let bound = 2 * largest;
    let mut tries = BTreeSet::new();
    for &q in cands.iter().filter(|&&q| q > 0) {
        tries.extend((1..).map(|k| k * q).take_while(|&m| m <= bound));
    }
    for r in tries {
        if mod_pow(y, r, modulus)? == 1 {
            return Ok(Some(reduce_order(y, r, modulus)?));
        }
    }
    Ok(None)
}

/// Divides prime factors out of `r` while `y^r ≡ 1` still holds.
fn reduce_order(y: u64, mut r: u64, modulus: u64) -> Result<u64, ArithError> {
    let mut p = 2;
    let mut rest = r;
    while rest > 1 {
        if p * p > rest {
            p = rest;
        }
        if rest.is_multiple_of(p) {
            while rest.is_multiple_of(p) {
                rest /= p;
            }
            while r.is_multiple_of(p) && mod_pow(y, r / p, modulus)? == 1 {
                r /= p;
            }
        }
        p += 1;
    }
    Ok(r)
}

/// Seeded order finding for `y` modulo `N` with exact sampling.
pub fn find_order(
    y: u64,
    modulus: u64,
    n_x: usize,
    max_samples: usize,
    seed: u64,
) -> Result<Option<u64>, ShorError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = OrderFinder::new().find_order(
        y,
        modulus,
        n_x,
        max_samples,
        SamplingMode::Exact,
        &mut rng,
    )?;
    Ok(s.order)
}

pub fn factor(modulus: u64, seed: u64, max_trials: usize) -> Result<ShorOutcome, ShorError> {
    let cfg = ShorConfig {
        max_trials,
        ..ShorConfig::default()
    };
    factor_with(modulus, seed, &cfg, &mut OrderFinder::new())
}

pub fn factor_with(
    modulus: u64,
    seed: u64,
    cfg: &ShorConfig,
    finder: &mut OrderFinder,
) -> Result<ShorOutcome, ShorError> {
    if modulus < 2 {
        return Err(ShorError::ModulusTooSmall(modulus));
    }
    let n_x = cfg.n_x_for(modulus);
    let mut out = ShorOutcome {
        modulus,
        seed,
        n_x,
        method: Method::NoFactorFound,
        factor: None,
        cofactor: None,
        trial_count: 0,
        trials: Vec::new(),
    };
    let found = |out: &mut ShorOutcome, method, f: u64| {
        out.method = method;
        out.factor = Some(f);
        out.cofactor = Some(modulus / f);
    };
    if modulus > 2 && modulus.is_multiple_of(2) {
        found(&mut out, Method::Even, 2);
        return Ok(out);
    }
    if let Some((base, _)) = is_perfect_power(modulus) {
        found(&mut out, Method::PerfectPower, base);
        return Ok(out);
    }
    if modulus < 4 {
        return Ok(out);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cfg.max_trials {
        out.trial_count += 1;
        let x = rng.gen_range(2..modulus);
        let mut trial = Trial {
            x,
            gcd_shortcut: false,
            outcomes: Vec::new(),
            candidates: Vec::new(),
            order: None,
            factor: None,
        };
        let g = gcd(x, modulus)?;
        if g > 1 {
            trial.gcd_shortcut = true;
            trial.factor = Some(g);
            out.trials.push(trial);
            found(&mut out, Method::Gcd, g);
            return Ok(out);
        }
        let search = finder.find_order(x, modulus, n_x, cfg.max_samples, cfg.sampling, &mut rng)?;
        trial.outcomes = search.outcomes;
        trial.candidates = search.candidates;
        trial.order = search.order;
        if let Some(r) = search.order {
            trial.factor = split_with_order(x, r, modulus)?;
        }
        let f = trial.factor;
        out.trials.push(trial);
        if let Some(f) = f {
            found(&mut out, Method::Order, f);
            return Ok(out);
        }
    }
    Ok(out)
}

/// For even `r` with `x^{r/2} ≢ −1`, one of `gcd(x^{r/2} ± 1, N)` is a
/// nontrivial factor.
fn split_with_order(x: u64, r: u64, modulus: u64) -> Result<Option<u64>, ArithError> {
    if !r.is_multiple_of(2) {
        return Ok(None);
    }
    let half = mod_pow(x, r / 2, modulus)?;
    if half == modulus - 1 {
        return Ok(None);
    }
    for f in [
        gcd(half + 1, modulus)?,
        gcd((half + modulus - 1) % modulus, modulus)?,
    ] {
        if f > 1 && f < modulus {
            return Ok(Some(f));
        }
    }
    Ok(None)
}
