//! Monte Carlo runs of the carries process.
//!
//! Digits are drawn with `rand_chacha::ChaCha20Rng` seeded by
//! `seed_from_u64`, using `gen_range` on `u32` (widening-multiply rejection,
//! no modulo bias). A run is a pure function of its configuration.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::carries::{ChainSpec, DigitSet};
use crate::error::{Error, Result};
use crate::eulerian::stationary;
use crate::numeration::NumerationSystem;

pub const GENERATOR_ID: &str = "chacha20/rand_chacha-0.3/seed_from_u64";
pub const DEFAULT_BURN_IN: u64 = 1_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    pub digits: DigitSet,
    pub n: usize,
    pub steps: u64,
    pub seed: u64,
    pub burn_in: u64,
}

impl SimConfig {
    pub fn new(digits: DigitSet, n: usize, steps: u64, seed: u64, burn_in: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("number of summands must be at least 1".into()));
        }
        if steps <= burn_in {
            return Err(Error::InvalidArgument(format!(
                "steps ({steps}) must exceed burn-in ({burn_in})"
            )));
        }
        Ok(SimConfig {
            digits,
            n,
            steps,
            seed,
            burn_in,
        })
    }

    pub fn for_chain(spec: &ChainSpec, steps: u64, seed: u64) -> Result<Self> {
        Self::new(spec.digit_set(), spec.n(), steps, seed, DEFAULT_BURN_IN)
    }

    /// The consecutive-digit chain this configuration describes, if any.
    pub fn chain_spec(&self) -> Option<ChainSpec> {
        if !self.digits.is_consecutive() {
            return None;
        }
        let b = self.digits.base();
        let sys = NumerationSystem::new(b.abs(), self.digits.digits()[0], sign_of(b)).ok()?;
        ChainSpec::new(sys, self.n).ok()
    }

    /// Carries never leave `±bound` when started at 0, where
    /// `bound = ⌈(n+1)·max|digit| / (|base|−1)⌉`.
    fn carry_bound(&self) -> i64 {
        let b = self.digits.base().abs();
        let top = (self.n as i64 + 1) * self.digits.max_abs();
        Integer::div_ceil(&top, &(b - 1))
    }
}

fn sign_of(base: i64) -> crate::numeration::BaseSign {
    if base < 0 {
        crate::numeration::BaseSign::Negative
    } else {
        crate::numeration::BaseSign::Positive
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Visit {
    pub carry: i64,
    pub count: u64,
    pub frequency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub generator: String,
    pub seed: u64,
    pub steps: u64,
    pub burn_in: u64,
    /// Visited carries in ascending order.
    pub visits: Vec<Visit>,
    /// Total variation distance to the exact stationary law, when known.
    pub tv_distance: Option<f64>,
}

impl SimResult {
    pub fn counts(&self) -> BTreeMap<i64, u64> {
        self.visits.iter().map(|v| (v.carry, v.count)).collect()
    }

    pub fn total(&self) -> u64 {
        self.visits.iter().map(|v| v.count).sum()
    }
}

/// Runs one chain from `C₀ = 0` and tallies carries after the burn-in.
pub fn run_chain(cfg: &SimConfig) -> Result<SimResult> {
    let counts = tally(cfg)?;
    let tallied = cfg.steps - cfg.burn_in;
    let visits: Vec<Visit> = counts
        .iter()
        .map(|(&carry, &count)| Visit {
            carry,
            count,
            frequency: count as f64 / tallied as f64,
        })
        .collect();
    let tv = match cfg.chain_spec() {
        Some(spec) => Some(tv_against_exact(&spec, &counts, tallied)?),
        None => None,
    };
    Ok(SimResult {
        generator: GENERATOR_ID.to_string(),
        seed: cfg.seed,
        steps: cfg.steps,
        burn_in: cfg.burn_in,
        visits,
        tv_distance: tv,
    })
}

fn tally(cfg: &SimConfig) -> Result<BTreeMap<i64, u64>> {
    let base = cfg.digits.base();
    let modulus = base.abs();
    let digits = cfg.digits.digits();
    let mut by_residue = vec![None; modulus as usize];
    for &x in digits {
        by_residue[x.mod_floor(&modulus) as usize] = Some(x);
    }
    let bound = cfg.carry_bound();
    let window = 10 * (2 * bound + 1);
    let k = digits.len() as u32;

    let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
    let mut counts = BTreeMap::new();
    let mut carry = 0i64;
    for step in 0..cfg.steps {
        let mut total = carry;
        for _ in 0..cfg.n {
            total += digits[rng.gen_range(0..k) as usize];
        }
        let out = by_residue[total.mod_floor(&modulus) as usize].ok_or_else(|| {
            Error::InvalidDigitSet(format!(
                "no digit congruent to {} mod {modulus}",
                total.mod_floor(&modulus)
            ))
        })?;
        carry = (total - out) / base;
        if carry.abs() > window {
            return Err(Error::Internal(format!(
                "carry {carry} left the window ±{window} at step {step}"
            )));
        }
        if step >= cfg.burn_in {
            *counts.entry(carry).or_insert(0u64) += 1;
        }
    }
    Ok(counts)
}

fn tv_against_exact(spec: &ChainSpec, counts: &BTreeMap<i64, u64>, tallied: u64) -> Result<f64> {
    let space = spec.state_space();
    if let Some((&c, _)) = counts.iter().find(|(&c, _)| !space.contains(c)) {
        return Err(Error::Internal(format!(
            "visited carry {c} outside the state space {}..={}",
            space.s, space.t
        )));
    }
    let pi = stationary(spec.n(), &spec.p())?;
    let exact: Vec<f64> = pi.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect();
    let empirical: Vec<f64> = space
        .states()
        .iter()
        .map(|c| counts.get(c).copied().unwrap_or(0) as f64 / tallied as f64)
        .collect();
    tv_distance(&empirical, &exact)
}

/// Runs independent chains on separate threads; results keep input order.
pub fn run_chains(cfgs: &[SimConfig]) -> Result<Vec<SimResult>> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = cfgs.iter().map(|cfg| scope.spawn(move || run_chain(cfg))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("simulation thread panicked"))
            .collect()
    })
}

/// Sum of visit counts over several runs.
pub fn aggregate_counts(results: &[SimResult]) -> BTreeMap<i64, u64> {
    let mut out = BTreeMap::new();
    for r in results {
        for v in &r.visits {
            *out.entry(v.carry).or_insert(0) += v.count;
        }
    }
    out
}

/// Half the L1 distance between two probability vectors.
pub fn tv_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "probability vectors of length {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>())
}
