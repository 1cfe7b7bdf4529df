//! Prime-field arithmetic.
//!
//! A [`FieldCtx`] validates the modulus once and carries the constants
//! needed for reduction; every [`Fp`] borrows the context it lives in.
//! Residues are always stored canonically in `[0, p)`.

mod prime;
mod roots;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub use prime::{factor_trial, is_prime, DEFAULT_FACTOR_BOUND};
pub use roots::{sqrt_oracle, ORACLE_BOUND};

/// Largest supported modulus (exclusive).
pub const MAX_MODULUS: u64 = 1 << 62;

/// Moduli below this bound reduce 64-bit numerators with a single-word
/// Barrett step; in the ring code, sums of three products stay below 2^64.
const SMALL_MODULUS: u64 = 1 << 31;

/// Largest modulus for which a quadratic-residue table may be cached.
const QR_TABLE_LIMIT: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldOptions {
    /// Memoize the Legendre symbol of every residue (only honored for
    /// p < 2^24).
    pub cache_legendre: bool,
    /// Trial-division bound used when factoring p - 1.
    pub factor_bound: u64,
}

impl Default for FieldOptions {
    fn default() -> Self {
        FieldOptions {
            cache_legendre: false,
            factor_bound: DEFAULT_FACTOR_BOUND,
        }
    }
}

/// A validated odd prime modulus together with precomputed constants.
///
/// The context is immutable once built. Lazily computed data (the
/// factorization of p - 1, cached non-residues, the optional Legendre table)
/// sits behind [`OnceLock`], so a context can be shared freely across threads.
pub struct FieldCtx {
    p: u64,
    half_exp: u64,
    small: bool,
    mu64: u64,
    mu128: u128,
    options: FieldOptions,
    factors: OnceLock<Result<Vec<(u64, u32)>>>,
    qr_table: OnceLock<Vec<bool>>,
    quad_nonresidue: OnceLock<u64>,
    cubic_nonresidue: OnceLock<Option<u64>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx").field("p", &self.p).finish()
    }
}

impl FieldCtx {
    pub fn new(p: u64) -> Result<Self> {
        Self::with_options(p, FieldOptions::default())
    }

    pub fn with_options(p: u64, options: FieldOptions) -> Result<Self> {
        if !(5..MAX_MODULUS).contains(&p) {
            return Err(Error::ModulusOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldCtx {
            p,
            half_exp: (p - 1) / 2,
            small: p < SMALL_MODULUS,
            mu64: u64::MAX / p,
            mu128: u128::MAX / p as u128,
            options,
            factors: OnceLock::new(),
            qr_table: OnceLock::new(),
            quad_nonresidue: OnceLock::new(),
            cubic_nonresidue: OnceLock::new(),
        })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// (p - 1) / 2, the Euler-criterion exponent.
    #[inline]
    pub fn half_exp(&self) -> u64 {
        self.half_exp
    }

    pub fn options(&self) -> FieldOptions {
        self.options
    }

    /// Residue of `v` modulo p.
    #[inline]
    pub fn elem(&self, v: u64) -> Fp<'_> {
        Fp {
            value: if v < self.p { v } else { v % self.p },
            ctx: self,
        }
    }

    pub fn elem_signed(&self, v: i64) -> Fp<'_> {
        let r = v.rem_euclid(self.p as i64) as u64;
        Fp { value: r, ctx: self }
    }

    #[inline]
    pub fn zero(&self) -> Fp<'_> {
        Fp { value: 0, ctx: self }
    }

    #[inline]
    pub fn one(&self) -> Fp<'_> {
        Fp { value: 1, ctx: self }
    }

    /// Iterator over every residue 0, 1, ..., p - 1.
    pub fn elements(&self) -> impl Iterator<Item = Fp<'_>> + '_ {
        (0..self.p).map(move |v| Fp { value: v, ctx: self })
    }

    // Raw canonical-residue arithmetic used by the ring code.

    #[inline]
    pub(crate) fn add_raw(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn sub_raw(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub(crate) fn neg_raw(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub(crate) fn mul_raw(&self, a: u64, b: u64) -> u64 {
        self.reduce(a as u128 * b as u128)
    }

    /// Barrett reduction of an arbitrary 128-bit value.
    #[inline]
    pub(crate) fn reduce(&self, x: u128) -> u64 {
        if self.small && (x >> 64) == 0 {
            self.reduce64(x as u64)
        } else {
            self.reduce128(x)
        }
    }

    #[inline]
    pub(crate) fn reduce64(&self, x: u64) -> u64 {
        let q = ((x as u128 * self.mu64 as u128) >> 64) as u64;
        let r = x - q * self.p;
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }

    #[inline]
    fn reduce128(&self, x: u128) -> u64 {
        let q = mulhi_u128(x, self.mu128);
        let r = x - q * self.p as u128;
        let r = r as u64;
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }

    pub(crate) fn pow_raw(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        acc
    }

    pub(crate) fn inv_raw(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::NotInvertible);
        }
        // |s| stays below p < 2^62 throughout, so i64 cannot overflow
        let (mut r0, mut r1) = (self.p, a);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q as i64 * s1);
        }
        debug_assert_eq!(r0, 1);
        Ok(s0.rem_euclid(self.p as i64) as u64)
    }

    /// Legendre symbol of a raw residue, via the optional cache.
    pub(crate) fn legendre_raw(&self, a: u64) -> i8 {
        if a == 0 {
            return 0;
        }
        if self.options.cache_legendre && self.p < QR_TABLE_LIMIT {
            let table = self.qr_table.get_or_init(|| {
                let mut t = vec![false; self.p as usize];
                for x in 1..=self.half_exp {
                    t[self.mul_raw(x, x) as usize] = true;
                }
                t
            });
            return if table[a as usize] { 1 } else { -1 };
        }
        match self.pow_raw(a, self.half_exp) {
            1 => 1,
            _ => -1,
        }
    }

    /// Factorization of p - 1 by trial division, computed on first use.
    pub fn group_order_factors(&self) -> Result<&[(u64, u32)]> {
        self.factors
            .get_or_init(|| factor_trial(self.p - 1, self.options.factor_bound))
            .as_ref()
            .map(Vec::as_slice)
            .map_err(Clone::clone)
    }

    /// Smallest quadratic non-residue.
    pub(crate) fn quadratic_nonresidue(&self) -> u64 {
        *self.quad_nonresidue.get_or_init(|| {
            (2..self.p)
                .find(|&z| self.pow_raw(z, self.half_exp) == self.p - 1)
                .expect("odd prime field has a non-residue")
        })
    }

    /// Smallest cubic non-residue, or `None` when cubing is a bijection
    /// (p = 2 mod 3).
    pub(crate) fn cubic_nonresidue(&self) -> Option<u64> {
        *self.cubic_nonresidue.get_or_init(|| {
            if (self.p - 1) % 3 != 0 {
                return None;
            }
            let e = (self.p - 1) / 3;
            (2..self.p).find(|&z| self.pow_raw(z, e) != 1)
        })
    }

    /// The three cube roots of unity, starting with 1. Only meaningful for
    /// p = 1 mod 3; otherwise 1 is the only one and is returned three times.
    pub fn cube_roots_of_unity(&self) -> [Fp<'_>; 3] {
        match self.cubic_nonresidue() {
            Some(z) => {
                let w = self.pow_raw(z, (self.p - 1) / 3);
                let w2 = self.mul_raw(w, w);
                [self.one(), self.elem(w), self.elem(w2)]
            }
            None => [self.one(); 3],
        }
    }
}

/// High 128 bits of the 256-bit product `a * b`.
#[inline]
fn mulhi_u128(a: u128, b: u128) -> u128 {
    let (a0, a1) = (a as u64 as u128, a >> 64);
    let (b0, b1) = (b as u64 as u128, b >> 64);
    let lo = a0 * b0;
    let mid = a1 * b0 + (lo >> 64);
    let mid2 = a0 * b1 + (mid as u64 as u128);
    a1 * b1 + (mid >> 64) + (mid2 >> 64)
}

/// A canonical residue modulo the prime of its [`FieldCtx`].
///
/// Arithmetic operators panic when the operands come from different fields;
/// the `try_*` methods report that case as [`Error::ContextMismatch`].
#[derive(Clone, Copy)]
pub struct Fp<'a> {
    value: u64,
    ctx: &'a FieldCtx,
}

impl<'a> Fp<'a> {
    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn ctx(self) -> &'a FieldCtx {
        self.ctx
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    #[inline]
    fn with(self, value: u64) -> Self {
        Fp { value, ctx: self.ctx }
    }

    fn check(self, other: Fp<'_>) -> Result<()> {
        if std::ptr::eq(self.ctx, other.ctx) || self.ctx.p == other.ctx.p {
            Ok(())
        } else {
            Err(Error::ContextMismatch {
                left: self.ctx.p,
                right: other.ctx.p,
            })
        }
    }

    pub fn try_add(self, rhs: Fp<'_>) -> Result<Self> {
        self.check(rhs)?;
        Ok(self.with(self.ctx.add_raw(self.value, rhs.value)))
    }

    pub fn try_sub(self, rhs: Fp<'_>) -> Result<Self> {
        self.check(rhs)?;
        Ok(self.with(self.ctx.sub_raw(self.value, rhs.value)))
    }

    pub fn try_mul(self, rhs: Fp<'_>) -> Result<Self> {
        self.check(rhs)?;
        Ok(self.with(self.ctx.mul_raw(self.value, rhs.value)))
    }

    #[inline]
    pub fn square(self) -> Self {
        self.with(self.ctx.mul_raw(self.value, self.value))
    }

    /// `self^e`, with `0^0 = 1`.
    pub fn pow(self, e: u64) -> Self {
        self.with(self.ctx.pow_raw(self.value, e))
    }

    pub fn inv(self) -> Result<Self> {
        Ok(self.with(self.ctx.inv_raw(self.value)?))
    }

    /// Legendre symbol: 0 for zero, +1 for a non-zero square, -1 otherwise.
    pub fn legendre(self) -> i8 {
        self.ctx.legendre_raw(self.value)
    }

    /// Multiplicative order of a non-zero element.
    pub fn mult_order(self) -> Result<u64> {
        if self.value == 0 {
            return Err(Error::NotInvertible);
        }
        let factors = self.ctx.group_order_factors()?;
        let mut n = self.ctx.p - 1;
        for &(q, k) in factors {
            for _ in 0..k {
                if self.ctx.pow_raw(self.value, n / q) == 1 {
                    n /= q;
                } else {
                    break;
                }
            }
        }
        Ok(n)
    }

    /// The representative `min(v, p - v)`.
    pub fn canonical_sign(self) -> Self {
        let neg = self.ctx.neg_raw(self.value);
        self.with(self.value.min(neg))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $assign_tr:ident, $assign:ident, $raw:ident) => {
        impl<'a> $tr for Fp<'a> {
            type Output = Fp<'a>;
            #[inline]
            fn $method(self, rhs: Fp<'a>) -> Fp<'a> {
                if !std::ptr::eq(self.ctx, rhs.ctx) && self.ctx.p != rhs.ctx.p {
                    panic!("mixed field contexts: p = {} vs p = {}", self.ctx.p, rhs.ctx.p);
                }
                self.with(self.ctx.$raw(self.value, rhs.value))
            }
        }

        impl<'a> $assign_tr for Fp<'a> {
            #[inline]
            fn $assign(&mut self, rhs: Fp<'a>) {
                *self = $tr::$method(*self, rhs);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign, add_raw);
binop!(Sub, sub, SubAssign, sub_assign, sub_raw);
binop!(Mul, mul, MulAssign, mul_assign, mul_raw);

impl<'a> Neg for Fp<'a> {
    type Output = Fp<'a>;
    #[inline]
    fn neg(self) -> Fp<'a> {
        self.with(self.ctx.neg_raw(self.value))
    }
}

impl PartialEq for Fp<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && self.ctx.p == other.ctx.p
    }
}

impl Eq for Fp<'_> {}

impl PartialOrd for Fp<'_> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fp<'_> {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.ctx.p, self.value).cmp(&(other.ctx.p, other.value))
    }
}

impl Hash for Fp<'_> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ctx.p.hash(state);
        self.value.hash(state);
    }
}

impl fmt::Debug for Fp<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.ctx.p)
    }
}

impl fmt::Display for Fp<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}
