//! Quadratic sums Q(g, p) and Q(g, h, p), the square-root method built on
//! them, and the reduction from Diffie-Hellman to computing Q(g, h, p).
//!
//! Every sum here is computed term by term, so cost is linear in the number
//! of terms. Caps keep accidental large inputs from running for hours.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Fp;
use crate::sqrt::SqrtOutcome;

/// Default cap on the order n for [`qsum`].
pub const DEFAULT_ORDER_CAP: u64 = 1 << 24;
/// Default cap on p for [`qsum_general`] (p - 1 terms).
pub const DEFAULT_GENERAL_CAP: u64 = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QSumCaps {
    pub order_cap: u64,
    pub general_cap: u64,
}

impl Default for QSumCaps {
    fn default() -> Self {
        QSumCaps {
            order_cap: DEFAULT_ORDER_CAP,
            general_cap: DEFAULT_GENERAL_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QSumResult<'a> {
    pub g: Fp<'a>,
    /// Multiplicative order of g.
    pub n: u64,
    pub value: Fp<'a>,
    /// n mod 4.
    pub case_tag: u8,
}

/// sum_{k=1}^{terms} g^(k^2) h^k, stepping g^(k^2) by g^(2k-1).
fn stepped_sum<'a>(g: Fp<'a>, h: Fp<'a>, terms: u64) -> Fp<'a> {
    let g2 = g.square();
    let mut step = g; // g^(2k-1)
    let mut gk = g.ctx().one(); // g^((k-1)^2)
    let mut hk = g.ctx().one();
    let mut acc = g.ctx().zero();
    for _ in 0..terms {
        gk *= step;
        step *= g2;
        hk *= h;
        acc += gk * hk;
    }
    acc
}

/// Q(g, p) = sum_{k=1}^{n} g^(k^2) with n = ord(g).
pub fn qsum(g: Fp<'_>) -> Result<QSumResult<'_>> {
    qsum_capped(g, DEFAULT_ORDER_CAP)
}

pub fn qsum_capped(g: Fp<'_>, cap: u64) -> Result<QSumResult<'_>> {
    let n = g.mult_order()?;
    if n > cap {
        return Err(Error::SumCapExceeded { terms: n, cap });
    }
    let value = stepped_sum(g, g.ctx().one(), n);
    Ok(QSumResult {
        g,
        n,
        value,
        case_tag: (n % 4) as u8,
    })
}

/// Check `r.value` against the closed form for its case n mod 4.
pub fn verify_qsum_case(r: &QSumResult<'_>) -> bool {
    let ctx = r.g.ctx();
    let n = ctx.elem(r.n);
    match r.case_tag {
        0 => {
            let (Some(s1), Some(s2)) = (n.tonelli_shanks().root(), (-n).tonelli_shanks().root()) else {
                return false;
            };
            [s1 + s2, s1 - s2, -s1 + s2, -s1 - s2].contains(&r.value)
        }
        1 => r.value.square() == n,
        2 => r.value.is_zero(),
        _ => r.value.square() == -n,
    }
}

/// Square root of n mod p from a quadratic sum over an element of order n.
///
/// Requires n | p - 1 and n = 1 (mod 4). The order-n element is found by
/// raising random elements to (p - 1) / n.
pub fn sqrt_via_qsum<'a, R: Rng + ?Sized>(
    ctx: &'a crate::field::FieldCtx,
    n: u64,
    rng: &mut R,
) -> Result<SqrtOutcome<'a>> {
    sqrt_via_qsum_capped(ctx, n, DEFAULT_ORDER_CAP, rng)
}

pub fn sqrt_via_qsum_capped<'a, R: Rng + ?Sized>(
    ctx: &'a crate::field::FieldCtx,
    n: u64,
    cap: u64,
    rng: &mut R,
) -> Result<SqrtOutcome<'a>> {
    let p = ctx.modulus();
    if n == 0 || (p - 1) % n != 0 {
        return Err(Error::Precondition(format!("n = {n} must divide p - 1 = {}", p - 1)));
    }
    if n % 4 != 1 {
        return Err(Error::Precondition(format!("n = {n} must be 1 mod 4")));
    }
    if n > cap {
        return Err(Error::SumCapExceeded { terms: n, cap });
    }
    let g = loop {
        let h = ctx.elem(rng.random_range(1..p));
        let g = h.pow((p - 1) / n);
        if g.mult_order()? == n {
            break g;
        }
    };
    let r = qsum_capped(g, cap)?;
    if r.value.square() != ctx.elem(n) {
        return Err(Error::Invariant(format!(
            "Q(g, p) = {} does not square to n = {n} (p = {p})",
            r.value
        )));
    }
    Ok(SqrtOutcome::Root(r.value))
}

/// Q(g, h, p) = sum_{k=1}^{p-1} g^(k^2) h^k.
pub fn qsum_general<'a>(g: Fp<'a>, h: Fp<'a>) -> Result<Fp<'a>> {
    qsum_general_capped(g, h, DEFAULT_GENERAL_CAP)
}

pub fn qsum_general_capped<'a>(g: Fp<'a>, h: Fp<'a>, cap: u64) -> Result<Fp<'a>> {
    let p = g.ctx().modulus();
    if g.is_zero() {
        return Err(Error::OutOfRange("g must be nonzero".into()));
    }
    if h.is_zero() {
        return Err(Error::OutOfRange("h must be nonzero".into()));
    }
    if p > cap {
        return Err(Error::SumCapExceeded { terms: p - 1, cap });
    }
    Ok(stepped_sum(g, h, p - 1))
}

/// g^(a^2) from h = g^a via Q(g, 1, p) / Q(g, h^2, p).
pub fn theorem1_gsq<'a>(g: Fp<'a>, h: Fp<'a>) -> Result<Fp<'a>> {
    theorem1_gsq_capped(g, h, DEFAULT_GENERAL_CAP)
}

pub fn theorem1_gsq_capped<'a>(g: Fp<'a>, h: Fp<'a>, cap: u64) -> Result<Fp<'a>> {
    let n = g.mult_order()?;
    if n % 4 == 2 {
        return Err(Error::Precondition(format!("ord(g) = {n} is 2 mod 4")));
    }
    if h.is_zero() || h.pow(n).value() != 1 {
        return Err(Error::Precondition(format!("h = {h} is not a power of g = {g}")));
    }
    let ctx = g.ctx();
    let q1 = qsum_general_capped(g, ctx.one(), cap)?;
    let q2 = qsum_general_capped(g, h.square(), cap)?;
    if q2.is_zero() {
        return Err(Error::NonInvertibleQSum);
    }
    Ok(q1 * q2.inv()?)
}

/// g^(2ab) = g^((a+b)^2) / (g^(a^2) g^(b^2)).
pub fn dh_combine<'a>(gaa: Fp<'a>, gbb: Fp<'a>, gab2: Fp<'a>) -> Result<Fp<'a>> {
    if gaa.is_zero() || gbb.is_zero() || gab2.is_zero() {
        return Err(Error::OutOfRange("inputs to dh_combine must be nonzero".into()));
    }
    Ok(gab2 * (gaa * gbb).inv()?)
}

/// Public Diffie-Hellman data (g, g^a, g^b).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DhInstance<'a> {
    pub g: Fp<'a>,
    pub ga: Fp<'a>,
    pub gb: Fp<'a>,
}

impl<'a> DhInstance<'a> {
    pub fn new(g: Fp<'a>, ga: Fp<'a>, gb: Fp<'a>) -> Result<Self> {
        if g.is_zero() || ga.is_zero() || gb.is_zero() {
            return Err(Error::OutOfRange("g, g^a and g^b must be nonzero".into()));
        }
        Ok(DhInstance { g, ga, gb })
    }
}

/// Intermediate values of [`dh_solve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DhSolution<'a> {
    pub gaa: Fp<'a>,
    pub gbb: Fp<'a>,
    pub gab2: Fp<'a>,
    pub g2ab: Fp<'a>,
    /// The two square roots of g^(2ab); g^(ab) is one of them.
    pub candidates: [Fp<'a>; 2],
}

pub fn dh_solve<'a>(inst: &DhInstance<'a>) -> Result<DhSolution<'a>> {
    dh_solve_capped(inst, DEFAULT_GENERAL_CAP)
}

pub fn dh_solve_capped<'a>(inst: &DhInstance<'a>, cap: u64) -> Result<DhSolution<'a>> {
    let gaa = theorem1_gsq_capped(inst.g, inst.ga, cap)?;
    let gbb = theorem1_gsq_capped(inst.g, inst.gb, cap)?;
    let gab2 = theorem1_gsq_capped(inst.g, inst.ga * inst.gb, cap)?;
    let g2ab = dh_combine(gaa, gbb, gab2)?;
    let r = g2ab
        .tonelli_shanks()
        .root()
        .ok_or_else(|| Error::Invariant(format!("g^(2ab) = {g2ab} is not a square")))?;
    Ok(DhSolution {
        gaa,
        gbb,
        gab2,
        g2ab,
        candidates: [r, -r],
    })
}
