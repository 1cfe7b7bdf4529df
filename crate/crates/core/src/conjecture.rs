//! Sweeps testing the six conjectures about S(d, b, p) over ranges of
//! primes p = 5 (mod 6).
//!
//! Each prime is checked independently with its own [`FieldCtx`]; sweeps fan
//! primes out over a rayon pool and merge the results in prime order, so a
//! report depends only on its configuration (apart from `elapsed_ms`).
//!
//! Cases whose preconditions fail (no (x, y, q) under the search cap, the
//! excluded values d = 9 and d = 81, coinciding residue classes) count as
//! skipped. Separately, every sweep checks S(d, b, p) = -S(d, p - b, p) on
//! the values it computes anyway and reports violations on their own list.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::dickson_power;
use crate::field::{is_prime, FieldCtx, Fp};
use crate::sqrt::{disc_depressed, s_function};

/// Conjecture identifiers accepted by [`run_sweep`].
pub const ALL_IDS: [u8; 6] = [1, 2, 3, 4, 5, 6];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub p_min: u64,
    pub p_max: u64,
    /// Candidate pairs tried by [`find_xyq`] before giving up.
    pub xyq_cap: u64,
    /// Upper bound (inclusive) on b for conjecture 2 and on a, b for
    /// conjecture 4. `None` sweeps the whole field.
    pub b_max: Option<u64>,
    /// Upper bound (inclusive) on e for conjectures 5 and 6.
    pub e_max: Option<u64>,
    /// Counterexamples kept per report; the count is always exact.
    pub max_recorded: usize,
    /// Rayon threads; 0 lets rayon decide.
    pub workers: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            p_min: 5,
            p_max: 1000,
            xyq_cap: 10_000,
            b_max: None,
            e_max: None,
            max_recorded: 1000,
            workers: 0,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.p_min < 5 {
            return Err(Error::OutOfRange(format!("p_min = {} must be at least 5", self.p_min)));
        }
        if self.p_max < self.p_min {
            return Err(Error::OutOfRange(format!(
                "p_max = {} is below p_min = {}",
                self.p_max, self.p_min
            )));
        }
        if self.p_max >= crate::field::MAX_MODULUS {
            return Err(Error::ModulusOutOfRange(self.p_max));
        }
        if self.xyq_cap == 0 || self.b_max == Some(0) || self.e_max == Some(0) {
            return Err(Error::OutOfRange("search caps and bounds must be positive".into()));
        }
        Ok(())
    }
}

/// One violating parameter set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub p: u64,
    pub params: BTreeMap<String, u64>,
    pub expected: String,
    pub observed: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub id: u8,
    pub p_min: u64,
    pub p_max: u64,
    /// Number of primes p = 5 (mod 6) in range.
    pub primes: u64,
    pub cases_tested: u64,
    pub cases_skipped: u64,
    pub counterexample_count: u64,
    pub counterexamples: Vec<Counterexample>,
    pub negation_violation_count: u64,
    pub negation_violations: Vec<Counterexample>,
    pub elapsed_ms: u64,
}

impl ConjectureReport {
    /// True when no counterexample and no negation violation turned up.
    pub fn held(&self) -> bool {
        self.counterexample_count == 0 && self.negation_violation_count == 0
    }
}

#[derive(Debug, Default)]
struct Tally {
    tested: u64,
    skipped: u64,
    cx_count: u64,
    cx: Vec<Counterexample>,
    neg_count: u64,
    neg: Vec<Counterexample>,
}

impl Tally {
    fn merge(&mut self, other: Tally, limit: usize) {
        self.tested += other.tested;
        self.skipped += other.skipped;
        self.cx_count += other.cx_count;
        self.neg_count += other.neg_count;
        let room = limit.saturating_sub(self.cx.len());
        self.cx.extend(other.cx.into_iter().take(room));
        let room = limit.saturating_sub(self.neg.len());
        self.neg.extend(other.neg.into_iter().take(room));
    }
}

struct Checker<'a> {
    ctx: &'a FieldCtx,
    cfg: &'a SweepConfig,
    tally: Tally,
}

fn params(pairs: &[(&str, u64)]) -> BTreeMap<String, u64> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

fn show(v: &Result<u64>) -> String {
    match v {
        Ok(v) => v.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

impl<'a> Checker<'a> {
    fn new(ctx: &'a FieldCtx, cfg: &'a SweepConfig) -> Self {
        Checker {
            ctx,
            cfg,
            tally: Tally::default(),
        }
    }

    fn p(&self) -> u64 {
        self.ctx.modulus()
    }

    fn s(&self, d: u64, b: u64) -> Result<u64> {
        Ok(s_function(self.ctx.elem(d), self.ctx.elem(b))?.value())
    }

    fn fail(&mut self, pairs: &[(&str, u64)], expected: String, observed: String) {
        self.tally.cx_count += 1;
        if self.tally.cx.len() < self.cfg.max_recorded {
            self.tally.cx.push(Counterexample {
                p: self.p(),
                params: params(pairs),
                expected,
                observed,
            });
        }
    }

    fn check(&mut self, ok: bool, pairs: &[(&str, u64)], expected: impl FnOnce() -> String, observed: impl FnOnce() -> String) {
        self.tally.tested += 1;
        if !ok {
            self.fail(pairs, expected(), observed());
        }
    }

    /// Record S(d, b) vs S(d, p - b), when both are known.
    fn negation(&mut self, d: u64, b: u64, sb: &Result<u64>, snb: &Result<u64>) {
        let p = self.p();
        let ok = match (sb, snb) {
            (Ok(x), Ok(y)) => (x + y) % p == 0,
            _ => false,
        };
        if !ok {
            self.tally.neg_count += 1;
            if self.tally.neg.len() < self.cfg.max_recorded {
                self.tally.neg.push(Counterexample {
                    p,
                    params: params(&[("d", d), ("b", b)]),
                    expected: format!("S(d, p - b) = -S(d, b) = {}", show(&sb.clone().map(|x| (p - x) % p))),
                    observed: show(snb),
                });
            }
        }
    }

    fn conj1(&mut self) {
        let ctx = self.ctx;
        let p = self.p();
        let c729 = ctx.elem(729);
        let minus27 = (p - 27 % p) % p;
        for d1 in ctx.elements().skip(1).filter(|d| d.legendre() == 1) {
            let d2 = (c729 * d1.inv().expect("nonzero")).value();
            let s1 = self.s(d1.value(), 1);
            let s2 = self.s(d2, 1);
            let sn = self.s(d1.value(), p - 1);
            self.negation(d1.value(), 1, &s1, &sn);
            let pairs = [("d1", d1.value()), ("d2", d2)];
            match (&s1, &s2) {
                (Ok(0), Ok(y)) => self.check(*y == 0, &pairs, || "S(d2, 1) = 0".into(), || format!("S(d2, 1) = {y}")),
                (Ok(x), Ok(y)) => {
                    let prod = (*x as u128 * *y as u128 % p as u128) as u64;
                    self.check(
                        prod == minus27,
                        &pairs,
                        || format!("S(d1, 1) S(d2, 1) = {minus27}"),
                        || format!("S(d1, 1) = {x}, S(d2, 1) = {y}, product {prod}"),
                    )
                }
                _ => self.check(false, &pairs, || "both values defined".into(), || format!("{} / {}", show(&s1), show(&s2))),
            }
        }
    }

    fn conj2(&mut self) {
        let ctx = self.ctx;
        let p = self.p();
        let b_top = self.cfg.b_max.map_or(p - 1, |m| m.min(p - 1));
        for d1 in ctx.elements().skip(1).filter(|d| d.legendre() == 1) {
            let base = self.s(d1.value(), 1);
            let mut row: Vec<Option<Result<u64>>> = vec![None; p as usize];
            for b in 1..=b_top {
                let bf = ctx.elem(b);
                let d2 = (bf.square() * d1).value();
                let got = self.s(d2, b);
                let expected = base.clone().map(|s| (bf * ctx.elem(s)).value());
                let pairs = [("d1", d1.value()), ("b", b), ("d2", d2)];
                let ok = matches!((&expected, &got), (Ok(e), Ok(g)) if e == g);
                self.check(
                    ok,
                    &pairs,
                    || format!("b S(d1, 1) = {}", show(&expected)),
                    || format!("S(d2, b) = {}", show(&got)),
                );
                row[b as usize] = Some(got);
            }
            // b and p - b give the same d2
            for b in 1..=b_top.min((p - 1) / 2) {
                if let (Some(x), Some(y)) = (&row[b as usize], &row[(p - b) as usize]) {
                    let d2 = (ctx.elem(b).square() * d1).value();
                    self.negation(d2, b, x, y);
                }
            }
        }
    }

    fn conj3(&mut self) {
        let p = self.p();
        let m = |v: i64| self.ctx.elem_signed(v).value();
        let (e9, e81) = match p % 9 {
            2 => (m(-3), m(9)),
            5 => (m(3), m(-9)),
            _ => (0, 0),
        };
        for (d, want) in [(9u64, e9), (81u64, e81)] {
            let got = self.s(d, 1);
            let sn = self.s(d, p - 1);
            self.negation(d % p, 1, &got, &sn);
            let ok = matches!(got, Ok(v) if v == want);
            self.check(
                ok,
                &[("d", d), ("p_mod_9", p % 9)],
                || format!("S({d}, 1) = {want}"),
                || format!("S({d}, 1) = {}", show(&got)),
            );
        }
    }

    fn conj4(&mut self) {
        let ctx = self.ctx;
        let p = self.p();
        let top = self.cfg.b_max.map_or(p - 1, |m| m.min(p - 1));
        let half = ctx.elem(2).inv().expect("p odd");
        let target = [-half, -half];
        let mut has_root = vec![false; p as usize];
        for a in 1..=top {
            let af = ctx.elem(a);
            // b such that x^3 + a x + b has a root r: b = -r^3 - a r
            has_root.iter_mut().for_each(|v| *v = false);
            for r in ctx.elements() {
                has_root[(-(r.pow(3) + af * r)).value() as usize] = true;
            }
            let mut row: Vec<Option<Result<u64>>> = vec![None; p as usize];
            for b in 1..p {
                let bf = ctx.elem(b);
                let d = disc_depressed(af, bf);
                // the negation pair (a, p - b) needs every b, so only the
                // conjecture checks respect the bound
                if b > top && p - b > top {
                    continue;
                }
                let t = self.s(d.value(), b);
                if b <= top {
                    let reducible = has_root[b as usize] || d.is_zero();
                    self.conj4_case(a, b, d, reducible, &t, target);
                }
                row[b as usize] = Some(t);
            }
            for b in 1..=(p - 1) / 2 {
                if let (Some(x), Some(y)) = (&row[b as usize], &row[(p - b) as usize]) {
                    let d = disc_depressed(af, ctx.elem(b)).value();
                    self.negation(d, b, x, y);
                }
            }
        }
    }

    fn conj4_case(&mut self, a: u64, b: u64, d: Fp<'_>, reducible: bool, t: &Result<u64>, target: [Fp<'_>; 2]) {
        let ctx = self.ctx;
        let pairs = [("a", a), ("b", b), ("D", d.value())];
        let t = match t {
            Ok(t) => *t,
            Err(e) => {
                let msg = format!("error: {e}");
                return self.check(false, &pairs, || "S(D, b) defined".into(), || msg);
            }
        };
        // part (a)
        self.check(
            (t == 0) == reducible,
            &pairs,
            || format!("S(D, b) {} 0 (cubic {})", if reducible { "=" } else { "!=" }, if reducible { "reducible" } else { "irreducible" }),
            || format!("S(D, b) = {t}"),
        );
        // part (b)
        if !reducible {
            match dickson_power(ctx.elem(a), ctx.elem(b), ctx.elem(t)) {
                Ok(got) => self.check(
                    got == target,
                    &pairs,
                    || format!("(d1 x + d2)^((p^2-1)/3) = {}x + {}", target[1], target[0]),
                    || format!("{}x + {}", got[1], got[0]),
                ),
                Err(e) => self.check(false, &pairs, || "power defined".into(), || format!("error: {e}")),
            }
        }
    }

    /// Conjectures 5 (b = 1) and 6 (b = 2).
    fn conj56(&mut self, variant: XyqVariant) {
        let ctx = self.ctx;
        let p = self.p();
        let b = match variant {
            XyqVariant::Conj5 => 1,
            XyqVariant::Conj6 => 2,
        };
        let e_top = self.cfg.e_max.map_or(p - 1, |m| m.min(p - 1));
        let (d9, d81) = (9 % p, 81 % p);
        for e in 1..=e_top {
            let ef = ctx.elem(e);
            let d = (ctx.elem(81) * ef.square()).value();
            if d == d9 || d == d81 {
                self.tally.skipped += 1;
                continue;
            }
            let s = self.s(d, b);
            let sn = self.s(d, p - b);
            self.negation(d, b, &s, &sn);
            let Some(w) = find_xyq(ef, variant, self.cfg.xyq_cap) else {
                self.tally.skipped += 1;
                continue;
            };
            if w.q == p || (w.x as u128 % w.q as u128) == (w.y as u128 % w.q as u128) {
                self.tally.skipped += 1;
                continue;
            }
            let q = w.q;
            let xm = w.x % q;
            let ym = w.y % q;
            let qf = FieldCtx::new(q).expect("q is prime");
            let (xq, yq) = (qf.elem(xm), qf.elem(ym));
            let r = qf.elem(p).pow((q - 1) / 3);
            let classes = [qf.one(), xq * yq.inv().expect("y < q"), xq.inv().expect("x < q") * yq];
            if classes[0] == classes[1] || classes[0] == classes[2] || classes[1] == classes[2] {
                self.tally.skipped += 1;
                continue;
            }
            let r_class = classes.iter().position(|&c| c == r);
            let nine_e = ctx.elem(9) * ef;
            let pairs = [("e", e), ("d", d), ("x", w.x), ("y", w.y), ("q", q)];
            let s_class = match &s {
                Ok(0) => Some(0),
                Ok(v) if *v == nine_e.value() => Some(1),
                Ok(v) if *v == (-nine_e).value() => Some(2),
                _ => None,
            };
            let names = ["0", "9e", "-9e"];
            let rnames = ["1", "x/y", "y/x"];
            self.check(
                r_class.is_some() && r_class == s_class,
                &pairs,
                || match r_class {
                    Some(i) => format!("S(d, {b}) = {} since p^((q-1)/3) = {}", names[i], rnames[i]),
                    None => format!("p^((q-1)/3) in {{1, x/y, y/x}} mod q"),
                },
                || format!("S(d, {b}) = {}, p^((q-1)/3) = {r} mod {q}", show(&s)),
            );
        }
    }
}

/// Which pair of congruences [`find_xyq`] solves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum XyqVariant {
    /// x = (e - 1) / 2, y = (e + 1) / 2 (mod p).
    Conj5,
    /// x = e - 2, y = e + 2 (mod p).
    Conj6,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Xyq {
    pub x: u64,
    pub y: u64,
    pub q: u64,
}

/// Solve v = r (mod p), v = s (mod 3) with 0 < v < 3p.
fn crt3(r: u64, s: u64, p: u64) -> u64 {
    // p = 2 (mod 3) here in practice, but solve generally
    (0..3).map(|k| r + k * p).find(|v| v % 3 == s).expect("p coprime to 3")
}

/// Smallest positive (x, y) by x + y (then x) meeting the congruences of
/// `variant` with x = 1, y = 2 (mod 3) and q = x^2 + xy + y^2 prime.
///
/// Tries at most `cap` candidate pairs; `None` when none works.
pub fn find_xyq(e: Fp<'_>, variant: XyqVariant, cap: u64) -> Option<Xyq> {
    let ctx = e.ctx();
    let p = ctx.modulus();
    let (x0, y0) = match variant {
        XyqVariant::Conj5 => {
            let half = ctx.elem(2).inv().ok()?;
            ((e - ctx.one()) * half, (e + ctx.one()) * half)
        }
        XyqVariant::Conj6 => (e - ctx.elem(2), e + ctx.elem(2)),
    };
    let bx = crt3(x0.value(), 1, p) as u128;
    let by = crt3(y0.value(), 2, p) as u128;
    let step = 3 * p as u128;
    let mut tried = 0u64;
    for sum in 0u128.. {
        for i in 0..=sum {
            if tried >= cap {
                return None;
            }
            tried += 1;
            let x = bx + i * step;
            let y = by + (sum - i) * step;
            let q = x * x + x * y + y * y;
            if q <= u64::MAX as u128 && is_prime(q as u64) && q < crate::field::MAX_MODULUS as u128 {
                return Some(Xyq {
                    x: x as u64,
                    y: y as u64,
                    q: q as u64,
                });
            }
        }
    }
    None
}

fn check_one(id: u8, ctx: &FieldCtx, cfg: &SweepConfig) -> Tally {
    let mut c = Checker::new(ctx, cfg);
    match id {
        1 => c.conj1(),
        2 => c.conj2(),
        3 => c.conj3(),
        4 => c.conj4(),
        5 => c.conj56(XyqVariant::Conj5),
        6 => c.conj56(XyqVariant::Conj6),
        _ => unreachable!("ids validated by caller"),
    }
    c.tally
}

fn check_id(id: u8) -> Result<()> {
    if ALL_IDS.contains(&id) {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("conjecture id {id} (expected 1..=6)")))
    }
}

/// Check conjecture `id` at the single prime `p`.
pub fn check_prime(id: u8, p: u64, cfg: &SweepConfig) -> Result<ConjectureReport> {
    check_id(id)?;
    let ctx = FieldCtx::new(p)?;
    if p % 6 != 5 {
        return Err(Error::WrongResidueClass { p, expected: "5 mod 6" });
    }
    let start = Instant::now();
    let t = check_one(id, &ctx, cfg);
    Ok(report(id, p, p, 1, t, start))
}

pub fn check_conj1(p: u64) -> Result<ConjectureReport> {
    check_prime(1, p, &SweepConfig::default())
}

pub fn check_conj2(p: u64) -> Result<ConjectureReport> {
    check_prime(2, p, &SweepConfig::default())
}

pub fn check_conj3(p: u64) -> Result<ConjectureReport> {
    check_prime(3, p, &SweepConfig::default())
}

pub fn check_conj4(p: u64) -> Result<ConjectureReport> {
    check_prime(4, p, &SweepConfig::default())
}

pub fn check_conj5(p: u64) -> Result<ConjectureReport> {
    check_prime(5, p, &SweepConfig::default())
}

pub fn check_conj6(p: u64) -> Result<ConjectureReport> {
    check_prime(6, p, &SweepConfig::default())
}

fn report(id: u8, p_min: u64, p_max: u64, primes: u64, t: Tally, start: Instant) -> ConjectureReport {
    ConjectureReport {
        id,
        p_min,
        p_max,
        primes,
        cases_tested: t.tested,
        cases_skipped: t.skipped,
        counterexample_count: t.cx_count,
        counterexamples: t.cx,
        negation_violation_count: t.neg_count,
        negation_violations: t.neg,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

/// Primes p = 5 (mod 6) in `[lo, hi]`.
pub fn sweep_primes(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&p| p % 6 == 5 && is_prime(p)).collect()
}

/// Run every requested conjecture over the configured prime range.
///
/// Reports come back in the order of `ids` (duplicates dropped).
pub fn run_sweep(cfg: &SweepConfig, ids: &[u8]) -> Result<Vec<ConjectureReport>> {
    cfg.validate()?;
    let mut wanted: Vec<u8> = Vec::new();
    for &id in ids {
        check_id(id)?;
        if !wanted.contains(&id) {
            wanted.push(id);
        }
    }
    if wanted.is_empty() {
        return Ok(Vec::new());
    }
    let primes = sweep_primes(cfg.p_min, cfg.p_max);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    let mut out = Vec::with_capacity(wanted.len());
    for id in wanted {
        let start = Instant::now();
        let tallies: Vec<Tally> = pool.install(|| {
            primes
                .par_iter()
                .map(|&p| {
                    let ctx = FieldCtx::new(p).expect("sweep primes are valid moduli");
                    check_one(id, &ctx, cfg)
                })
                .collect()
        });
        let mut total = Tally::default();
        for t in tallies {
            total.merge(t, cfg.max_recorded);
        }
        out.push(report(id, cfg.p_min, cfg.p_max, primes.len() as u64, total, start));
    }
    Ok(out)
}
