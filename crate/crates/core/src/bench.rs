//! Timing harness comparing the square-root engines on random primes of
//! chosen bit sizes.
//!
//! Quadratic-sum roots are left out: their cost is linear in p.

use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::{reset_ring_mul_count, ring_mul_count};
use crate::field::{is_prime, FieldCtx, MAX_MODULUS};
use crate::sqrt::{cipolla_lehmer, s_function, SqrtOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchMethod {
    Gfp3,
    Cl,
    Shanks,
}

impl BenchMethod {
    pub const ALL: [BenchMethod; 3] = [BenchMethod::Gfp3, BenchMethod::Cl, BenchMethod::Shanks];

    pub fn name(self) -> &'static str {
        match self {
            BenchMethod::Gfp3 => "gfp3",
            BenchMethod::Cl => "cl",
            BenchMethod::Shanks => "shanks",
        }
    }
}

impl FromStr for BenchMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gfp3" => Ok(BenchMethod::Gfp3),
            "cl" => Ok(BenchMethod::Cl),
            "shanks" => Ok(BenchMethod::Shanks),
            _ => Err(Error::OutOfRange(format!("unknown bench method {s:?} (gfp3, cl, shanks)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub bits: Vec<u32>,
    pub iters: usize,
    pub methods: Vec<BenchMethod>,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            bits: vec![32, 48, 60],
            iters: 200,
            methods: BenchMethod::ALL.to_vec(),
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub method: BenchMethod,
    pub bits: u32,
    pub p: u64,
    pub iters: usize,
    pub median_ns: u64,
    pub mean_ns: f64,
    /// Mean of the fastest 90% of calls; growth exponents are fitted to this.
    pub trimmed_mean_ns: f64,
    /// Fraction of calls returning Zero.
    pub zero_rate: f64,
    /// Largest ring-multiplication count seen in one call (0 for shanks).
    pub max_ring_muls: u64,
    /// 2 ceil(log2 p) + 2.
    pub ring_mul_bound: u64,
}

/// Fitted exponent k in time ~ bits^k between two sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Growth {
    pub method: BenchMethod,
    pub from_bits: u32,
    pub to_bits: u32,
    pub exponent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub growth: Vec<Growth>,
}

/// A random prime p = 5 (mod 6) with exactly `bits` bits.
pub fn random_prime_5mod6<R: Rng + ?Sized>(bits: u32, rng: &mut R) -> Result<u64> {
    if !(4..=62).contains(&bits) {
        return Err(Error::OutOfRange(format!("bit size {bits} (expected 4..=62)")));
    }
    let lo = 1u64 << (bits - 1);
    let hi = ((1u128 << bits) - 1).min(MAX_MODULUS as u128 - 1) as u64;
    loop {
        let c = rng.random_range(lo..=hi);
        let c = c - c % 6 + 5;
        if c >= lo && c <= hi && c >= 5 && is_prime(c) {
            return Ok(c);
        }
    }
}

fn ceil_log2(p: u64) -> u64 {
    (64 - (p - 1).leading_zeros()) as u64
}

fn median(v: &mut [u64]) -> u64 {
    v.sort_unstable();
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2
    }
}

fn trimmed_mean(sorted: &[u64]) -> f64 {
    let keep = (sorted.len() * 9).div_ceil(10).max(1);
    sorted[..keep].iter().sum::<u64>() as f64 / keep as f64
}

fn bench_one(method: BenchMethod, bits: u32, p: u64, iters: usize, seed: u64) -> Result<BenchRow> {
    let ctx = FieldCtx::new(p)?;
    // same inputs for every method at a given size
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((bits as u64) << 32));
    let inputs: Vec<(u64, u64)> = (0..iters)
        .map(|_| {
            let r = ctx.elem(rng.random_range(1..p));
            (r.square().value(), rng.random_range(1..p))
        })
        .collect();
    let mut times = Vec::with_capacity(iters);
    let mut zeros = 0usize;
    let mut max_muls = 0u64;
    for &(d, b) in &inputs {
        let (d, b) = (ctx.elem(d), ctx.elem(b));
        reset_ring_mul_count();
        let start = Instant::now();
        let out = match method {
            BenchMethod::Gfp3 => s_function(d, b)?,
            BenchMethod::Cl => cipolla_lehmer(d, b)?,
            BenchMethod::Shanks => d.tonelli_shanks(),
        };
        let ns = start.elapsed().as_nanos() as u64;
        max_muls = max_muls.max(ring_mul_count());
        if let SqrtOutcome::Root(t) = out {
            if t.square() != d {
                return Err(Error::Invariant(format!("{} returned {t}, not a root of {d}", method.name())));
            }
        } else {
            zeros += 1;
        }
        times.push(ns);
    }
    let mean_ns = times.iter().sum::<u64>() as f64 / iters as f64;
    let median_ns = median(&mut times);
    Ok(BenchRow {
        method,
        bits,
        p,
        iters,
        median_ns,
        mean_ns,
        trimmed_mean_ns: trimmed_mean(&times),
        zero_rate: zeros as f64 / iters as f64,
        max_ring_muls: max_muls,
        ring_mul_bound: 2 * ceil_log2(p) + 2,
    })
}

/// k with t1 / t0 = (b1 / b0)^k.
pub fn growth_exponent(b0: u32, t0: f64, b1: u32, t1: f64) -> f64 {
    (t1.max(1.0) / t0.max(1.0)).ln() / (b1 as f64 / b0 as f64).ln()
}

/// Run every method at every size. Primes are drawn from `seed`.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    if cfg.iters == 0 {
        return Err(Error::OutOfRange("iters must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let primes: Vec<(u32, u64)> = cfg
        .bits
        .iter()
        .map(|&b| random_prime_5mod6(b, &mut rng).map(|p| (b, p)))
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut growth = Vec::new();
    for &method in &cfg.methods {
        let mut prev: Option<(u32, f64)> = None;
        for &(bits, p) in &primes {
            let row = bench_one(method, bits, p, cfg.iters, cfg.seed)?;
            if let Some((pb, pt)) = prev {
                if pb != bits {
                    growth.push(Growth {
                        method,
                        from_bits: pb,
                        to_bits: bits,
                        exponent: growth_exponent(pb, pt, bits, row.trimmed_mean_ns),
                    });
                }
            }
            prev = Some((bits, row.trimmed_mean_ns));
            rows.push(row);
        }
    }
    Ok(BenchReport { rows, growth })
}
