//! Residue rings GF(p)[x] / <f> for monic quadratic and cubic `f`.
//!
//! Elements are coefficient arrays, low degree first. Products are formed
//! schoolbook-style with 128-bit accumulation and folded back with
//! precomputed residues of x^N, ..., x^(2N-2).

use std::cell::Cell;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::field::{FieldCtx, Fp, ORACLE_BOUND};

thread_local! {
    static RING_MULS: Cell<u64> = const { Cell::new(0) };
}

/// Ring multiplications (including multiplications by x) performed on the
/// current thread since the last [`reset_ring_mul_count`].
pub fn ring_mul_count() -> u64 {
    RING_MULS.with(Cell::get)
}

pub fn reset_ring_mul_count() {
    RING_MULS.with(|c| c.set(0));
}

#[inline]
fn count_mul() {
    RING_MULS.with(|c| c.set(c.get() + 1));
}

/// Monic modulus `x^N + c[N-1] x^(N-1) + ... + c[0]`.
#[derive(Clone)]
pub struct PolyModulus<'a, const N: usize> {
    ctx: &'a FieldCtx,
    coeffs: [u64; N],
    /// fold[k] = x^(N + k) mod f for k < N - 1
    fold: [[u64; N]; N],
}

pub type QuadModulus<'a> = PolyModulus<'a, 2>;
pub type CubicModulus<'a> = PolyModulus<'a, 3>;

impl<'a, const N: usize> PolyModulus<'a, N> {
    /// Build from the non-leading coefficients, low degree first.
    pub fn from_coeffs(ctx: &'a FieldCtx, coeffs: [Fp<'a>; N]) -> Self {
        assert!(N >= 1);
        let raw = coeffs.map(|c| {
            assert_eq!(c.ctx().modulus(), ctx.modulus(), "mixed field contexts");
            c.value()
        });
        let mut fold = [[0u64; N]; N];
        // x^N = -(c[0] + c[1] x + ... )
        for i in 0..N {
            fold[0][i] = ctx.neg_raw(raw[i]);
        }
        for k in 1..N.saturating_sub(1) {
            // x^(N+k) = x * x^(N+k-1)
            let prev = fold[k - 1];
            let top = prev[N - 1];
            for i in (1..N).rev() {
                fold[k][i] = ctx.add_raw(prev[i - 1], ctx.mul_raw(top, fold[0][i]));
            }
            fold[k][0] = ctx.mul_raw(top, fold[0][0]);
        }
        PolyModulus {
            ctx,
            coeffs: raw,
            fold,
        }
    }

    pub fn ctx(&self) -> &'a FieldCtx {
        self.ctx
    }

    /// Non-leading coefficients, low degree first.
    pub fn coeffs(&self) -> [Fp<'a>; N] {
        self.coeffs.map(|c| self.ctx.elem(c))
    }

    pub fn degree(&self) -> usize {
        N
    }

    fn same_as(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
            || (self.ctx.modulus() == other.ctx.modulus() && self.coeffs == other.coeffs)
    }

    pub fn element(&self, coeffs: [Fp<'a>; N]) -> ExtElement<'_, N> {
        ExtElement {
            modulus: self,
            coeffs: coeffs.map(|c| c.value()),
        }
    }

    pub(crate) fn element_raw(&self, coeffs: [u64; N]) -> ExtElement<'_, N> {
        ExtElement {
            modulus: self,
            coeffs,
        }
    }

    pub fn one(&self) -> ExtElement<'_, N> {
        let mut c = [0u64; N];
        c[0] = 1;
        self.element_raw(c)
    }

    /// The class of x (for N = 1 this is -c[0]).
    pub fn x(&self) -> ExtElement<'_, N> {
        let mut c = [0u64; N];
        if N == 1 {
            c[0] = self.fold[0][0];
        } else {
            c[1] = 1;
        }
        self.element_raw(c)
    }

    /// x^p mod f.
    pub fn frobenius(&self) -> ExtElement<'_, N> {
        self.x().pow(self.ctx.modulus() as u128)
    }

    /// The full polynomial including its leading 1, low degree first.
    pub fn full_poly(&self) -> Vec<u64> {
        let mut v = self.coeffs.to_vec();
        v.push(1);
        v
    }

    /// Evaluate f at a field element.
    pub fn eval(&self, x: Fp<'a>) -> Fp<'a> {
        let ctx = self.ctx;
        let mut acc = 1u64;
        for &c in self.coeffs.iter().rev() {
            acc = ctx.add_raw(ctx.mul_raw(acc, x.value()), c);
        }
        ctx.elem(acc)
    }

    /// Roots of f in GF(p) found by exhaustive scan. Ground truth for tests.
    pub fn roots_by_scan(&self) -> Result<Vec<Fp<'a>>> {
        let p = self.ctx.modulus();
        if p >= ORACLE_BOUND {
            return Err(Error::OracleBoundExceeded {
                p,
                bound: ORACLE_BOUND,
            });
        }
        Ok(self
            .ctx
            .elements()
            .filter(|&x| self.eval(x).is_zero())
            .collect())
    }
}

impl<const N: usize> fmt::Debug for PolyModulus<'_, N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}> (mod {})", format_poly(&self.full_poly()), self.ctx.modulus())
    }
}

impl<'a> QuadModulus<'a> {
    /// x^2 + c1 x + c0.
    pub fn new(c1: Fp<'a>, c0: Fp<'a>) -> Self {
        Self::from_coeffs(c1.ctx(), [c0, c1])
    }
}

impl<'a> CubicModulus<'a> {
    /// x^3 + c2 x^2 + c1 x + c0.
    pub fn new(c2: Fp<'a>, c1: Fp<'a>, c0: Fp<'a>) -> Self {
        Self::from_coeffs(c2.ctx(), [c0, c1, c2])
    }

    /// The depressed cubic x^3 + a x + b.
    pub fn depressed(a: Fp<'a>, b: Fp<'a>) -> Self {
        Self::new(a.ctx().zero(), a, b)
    }

    /// Irreducibility over GF(p): for a cubic, no root in GF(p), i.e.
    /// gcd(x^p - x, f) = 1.
    pub fn is_irreducible(&self) -> bool {
        let frob = self.frobenius();
        self.is_irreducible_with(&frob)
    }

    /// Irreducibility test reusing an already computed x^p mod f.
    pub fn is_irreducible_with(&self, frob: &ExtElement<'_, 3>) -> bool {
        assert!(self.same_as(frob.modulus), "Frobenius image from another modulus");
        let ctx = self.ctx;
        let c = frob.coeffs;
        let g = SmallPoly::new(&[c[0], ctx.sub_raw(c[1], 1), c[2]]);
        let f = SmallPoly::new(&self.full_poly());
        SmallPoly::gcd(ctx, f, g).len == 1
    }
}

/// A residue class modulo a [`PolyModulus`].
#[derive(Clone, Copy)]
pub struct ExtElement<'m, const N: usize> {
    modulus: &'m PolyModulus<'m, N>,
    coeffs: [u64; N],
}

pub type QuadElement<'m> = ExtElement<'m, 2>;
pub type CubicElement<'m> = ExtElement<'m, 3>;

impl<'m, const N: usize> ExtElement<'m, N> {
    pub fn modulus(&self) -> &'m PolyModulus<'m, N> {
        self.modulus
    }

    /// Coefficients, low degree first.
    pub fn coeffs(&self) -> [Fp<'m>; N] {
        let ctx = self.modulus.ctx;
        self.coeffs.map(|c| ctx.elem(c))
    }

    pub fn coeff(&self, i: usize) -> Fp<'m> {
        self.modulus.ctx.elem(self.coeffs[i])
    }

    pub fn raw_coeffs(&self) -> [u64; N] {
        self.coeffs
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.modulus.same_as(other.modulus) {
            Ok(())
        } else {
            Err(Error::ModulusMismatch)
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        count_mul();
        let m = self.modulus;
        let ctx = m.ctx;
        // product coefficients of degree 0 ..= 2N - 2
        let mut prod = [[0u64; N]; 2];
        for k in 0..(2 * N - 1) {
            let lo = k.saturating_sub(N - 1);
            let hi = k.min(N - 1);
            let mut acc = 0u128;
            for i in lo..=hi {
                acc += self.coeffs[i] as u128 * other.coeffs[k - i] as u128;
            }
            prod[k / N][k % N] = ctx.reduce(acc);
        }
        self.fold(prod)
    }

    /// Fold a product of degree <= 2N - 2 back into the residue range.
    #[inline]
    fn fold(&self, prod: [[u64; N]; 2]) -> Self {
        let m = self.modulus;
        let ctx = m.ctx;
        let mut out = [0u64; N];
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = prod[0][i] as u128;
            for k in 0..N - 1 {
                acc += prod[1][k] as u128 * m.fold[k][i] as u128;
            }
            *o = ctx.reduce(acc);
        }
        ExtElement {
            modulus: m,
            coeffs: out,
        }
    }

    pub fn square(&self) -> Self {
        self.mul_unchecked(self)
    }

    /// Multiply by the class of x.
    pub fn mul_x(&self) -> Self {
        count_mul();
        let m = self.modulus;
        let ctx = m.ctx;
        let top = self.coeffs[N - 1];
        let mut out = [0u64; N];
        for i in (1..N).rev() {
            out[i] = ctx.add_raw(self.coeffs[i - 1], ctx.mul_raw(top, m.fold[0][i]));
        }
        out[0] = ctx.mul_raw(top, m.fold[0][0]);
        ExtElement {
            modulus: m,
            coeffs: out,
        }
    }

    fn is_x(&self) -> bool {
        N >= 2 && self.coeffs[1] == 1 && self.coeffs.iter().enumerate().all(|(i, &c)| i == 1 || c == 0)
    }

    /// `self^e` by left-to-right square-and-multiply; multiplying by x uses
    /// the cheap shift.
    pub fn pow(&self, e: u128) -> Self {
        if e == 0 {
            return self.modulus.one();
        }
        let by_x = self.is_x();
        let bits = 128 - e.leading_zeros();
        let mut acc = *self;
        for i in (0..bits - 1).rev() {
            acc = acc.square();
            if (e >> i) & 1 == 1 {
                acc = if by_x { acc.mul_x() } else { acc.mul_unchecked(self) };
            }
        }
        acc
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let ctx = self.modulus.ctx;
        let mut c = self.coeffs;
        for (a, &b) in c.iter_mut().zip(&other.coeffs) {
            *a = ctx.add_raw(*a, b);
        }
        Ok(ExtElement { coeffs: c, ..*self })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let ctx = self.modulus.ctx;
        let mut c = self.coeffs;
        for (a, &b) in c.iter_mut().zip(&other.coeffs) {
            *a = ctx.sub_raw(*a, b);
        }
        Ok(ExtElement { coeffs: c, ..*self })
    }

    pub fn scale(&self, s: Fp<'_>) -> Self {
        let ctx = self.modulus.ctx;
        ExtElement {
            coeffs: self.coeffs.map(|c| ctx.mul_raw(c, s.value())),
            ..*self
        }
    }
}

impl<'m, const N: usize> Mul for ExtElement<'m, N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.try_mul(&rhs).expect("operands reduced modulo different polynomials")
    }
}

impl<'m, const N: usize> Add for ExtElement<'m, N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.try_add(&rhs).expect("operands reduced modulo different polynomials")
    }
}

impl<'m, const N: usize> Sub for ExtElement<'m, N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.try_sub(&rhs).expect("operands reduced modulo different polynomials")
    }
}

impl<const N: usize> PartialEq for ExtElement<'_, N> {
    fn eq(&self, other: &Self) -> bool {
        self.modulus.same_as(other.modulus) && self.coeffs == other.coeffs
    }
}

impl<const N: usize> Eq for ExtElement<'_, N> {}

impl<const N: usize> fmt::Debug for ExtElement<'_, N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self, self.modulus.ctx.modulus())
    }
}

impl<const N: usize> fmt::Display for ExtElement<'_, N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(&self.coeffs))
    }
}

/// Render low-to-high coefficients as `68x^2 + 22x + 95`.
pub fn format_poly(coeffs: &[u64]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| match i {
            0 => format!("{c}"),
            1 if c == 1 => "x".to_string(),
            1 => format!("{c}x"),
            _ if c == 1 => format!("x^{i}"),
            _ => format!("{c}x^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

/// Polynomial of degree < 4 on the stack, low degree first.
#[derive(Clone, Copy, Debug)]
struct SmallPoly {
    c: [u64; 4],
    len: usize,
}

impl SmallPoly {
    fn new(coeffs: &[u64]) -> Self {
        let mut c = [0u64; 4];
        c[..coeffs.len()].copy_from_slice(coeffs);
        let mut p = SmallPoly {
            c,
            len: coeffs.len(),
        };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.len > 0 && self.c[self.len - 1] == 0 {
            self.len -= 1;
        }
    }

    fn make_monic(&mut self, ctx: &FieldCtx) {
        if self.len == 0 {
            return;
        }
        let inv = ctx.inv_raw(self.c[self.len - 1]).expect("leading coefficient is non-zero");
        for i in 0..self.len {
            self.c[i] = ctx.mul_raw(self.c[i], inv);
        }
    }

    /// self mod b, for monic non-zero b.
    fn rem_monic(&mut self, ctx: &FieldCtx, b: &SmallPoly) {
        let db = b.len - 1;
        while self.len > db {
            let top = self.c[self.len - 1];
            let shift = self.len - 1 - db;
            for j in 0..=db {
                let t = ctx.mul_raw(top, b.c[j]);
                self.c[shift + j] = ctx.sub_raw(self.c[shift + j], t);
            }
            debug_assert_eq!(self.c[self.len - 1], 0);
            self.len -= 1;
            self.trim();
        }
    }

    /// Monic gcd by the Euclidean algorithm, normalizing every remainder.
    fn gcd(ctx: &FieldCtx, mut a: SmallPoly, mut b: SmallPoly) -> SmallPoly {
        a.make_monic(ctx);
        while b.len > 0 {
            b.make_monic(ctx);
            a.rem_monic(ctx, &b);
            std::mem::swap(&mut a, &mut b);
        }
        a
    }
}

/// Monic gcd of two polynomials of degree at most 3 (low degree first).
pub fn poly_gcd(ctx: &FieldCtx, a: &[Fp<'_>], b: &[Fp<'_>]) -> Vec<u64> {
    assert!(a.len() <= 4 && b.len() <= 4, "poly_gcd handles degree <= 3");
    let raw = |v: &[Fp<'_>]| v.iter().map(|c| c.value()).collect::<Vec<_>>();
    let g = SmallPoly::gcd(ctx, SmallPoly::new(&raw(a)), SmallPoly::new(&raw(b)));
    g.c[..g.len].to_vec()
}

/// `(d1 x + d2)^((p^2 - 1) / 3)` in GF(p)[x] / <x^2 + 3>, with
/// `d1 = t / 18` and `d2 = -b / 2`, returned as `[constant, x]` coefficients.
///
/// Requires p = 2 (mod 3), so that x^2 + 3 is irreducible, and a non-zero
/// `t` with `t^2 = -(4a^3 + 27b^2)`.
pub fn dickson_power<'a>(a: Fp<'a>, b: Fp<'a>, t: Fp<'a>) -> Result<[Fp<'a>; 2]> {
    let ctx = a.ctx();
    let p = ctx.modulus();
    if p % 3 != 2 {
        return Err(Error::WrongResidueClass {
            p,
            expected: "2 mod 3",
        });
    }
    let disc = crate::sqrt::disc_depressed(a, b);
    if t.is_zero() || t.square() != disc {
        return Err(Error::InvalidWitness);
    }
    let d1 = t * ctx.elem(18).inv()?;
    let d2 = -(b * ctx.elem(2).inv()?);
    let modulus = QuadModulus::new(ctx.zero(), ctx.elem(3));
    let base = modulus.element([d2, d1]);
    let e = (p as u128 * p as u128 - 1) / 3;
    Ok(base.pow(e).raw_coeffs().map(|c| ctx.elem(c)))
}

/// Dickson's irreducibility verdict for x^3 + a x + b, p = 2 (mod 3).
///
/// A valid witness `t` already certifies that the discriminant is a non-zero
/// square; the cubic is then irreducible iff the power computed by
/// [`dickson_power`] differs from 1.
pub fn dickson_test<'a>(a: Fp<'a>, b: Fp<'a>, t: Fp<'a>) -> Result<bool> {
    let [c0, c1] = dickson_power(a, b, t)?;
    Ok(!(c0.value() == 1 && c1.is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::is_prime;
    use proptest::prelude::*;

    fn cubic<'a>(ctx: &'a FieldCtx, c2: u64, c1: u64, c0: u64) -> CubicModulus<'a> {
        CubicModulus::new(ctx.elem(c2), ctx.elem(c1), ctx.elem(c0))
    }

    #[test]
    fn mul_reduces_by_modulus() {
        let f7 = FieldCtx::new(7).unwrap();
        let m = QuadModulus::new(f7.zero(), f7.elem(3));
        let x = m.x();
        assert_eq!((x * x).raw_coeffs(), [4, 0]);

        let f41 = FieldCtx::new(41).unwrap();
        let m = cubic(&f41, 0, 3, 10);
        let x = m.x();
        let x2 = x * x;
        assert_eq!((x * x2).raw_coeffs(), [31, 38, 0]);
        assert_eq!(x.mul_x().mul_x(), x * x2);
        let u = m.element([f41.elem(5), f41.elem(7), f41.elem(40)]);
        assert_eq!(u * m.one(), u);
    }

    #[test]
    fn pow_examples() {
        let f31 = FieldCtx::new(31).unwrap();
        let m = QuadModulus::new(f31.elem(29), f31.elem(20));
        assert_eq!(m.x().pow(16).raw_coeffs(), [19, 0]);

        let f101 = FieldCtx::new(101).unwrap();
        let m = cubic(&f101, 0, 37, 26);
        assert_eq!(m.x().pow(101).raw_coeffs(), [95, 22, 68]);

        let f47 = FieldCtx::new(47).unwrap();
        let m = cubic(&f47, 5, 7, 19);
        assert_eq!(m.x().pow(47).raw_coeffs(), [13, 2, 14]);
        assert!(m.x().pow(0).is_one());
    }

    #[test]
    fn generic_pow_agrees_with_shift_path() {
        let f = FieldCtx::new(1013).unwrap();
        let m = cubic(&f, 4, 0, 9);
        let x = m.x();
        // x + 0 forces the generic multiply
        let x_generic = m.element([f.zero(), f.one(), f.zero()]);
        let y = m.element([f.elem(3), f.elem(1), f.zero()]);
        for e in [1u128, 2, 3, 1012, 1013, 99_999] {
            let naive = (0..e.min(2000)).fold(m.one(), |acc, _| acc * x);
            if e <= 2000 {
                assert_eq!(x.pow(e), naive);
            }
            assert_eq!(x.pow(e), x_generic.pow(e));
            let naive_y = (0..e.min(2000)).fold(m.one(), |acc, _| acc * y);
            if e <= 2000 {
                assert_eq!(y.pow(e), naive_y);
            }
        }
    }

    #[test]
    fn frobenius_examples() {
        let f41 = FieldCtx::new(41).unwrap();
        assert_eq!(cubic(&f41, 0, 3, 10).frobenius().raw_coeffs(), [19, 34, 30]);
        let f101 = FieldCtx::new(101).unwrap();
        assert_eq!(cubic(&f101, 0, 37, 26).frobenius().raw_coeffs(), [95, 22, 68]);
        // (x - 1)(x - 2)(x - 3) = x^3 - 6x^2 + 11x - 6
        let f13 = FieldCtx::new(13).unwrap();
        let split = CubicModulus::new(f13.elem_signed(-6), f13.elem(11), f13.elem_signed(-6));
        assert_eq!(split.frobenius(), split.x());
    }

    #[test]
    fn irreducibility_examples() {
        let f41 = FieldCtx::new(41).unwrap();
        assert!(cubic(&f41, 0, 3, 10).is_irreducible());
        let f5 = FieldCtx::new(5).unwrap();
        assert!(!cubic(&f5, 0, 1, 0).is_irreducible());
        let f101 = FieldCtx::new(101).unwrap();
        assert!(cubic(&f101, 0, 37, 26).is_irreducible());
    }

    #[test]
    fn irreducibility_matches_root_scan() {
        for p in [5u64, 7, 11, 13] {
            let f = FieldCtx::new(p).unwrap();
            for c2 in 0..p {
                for c1 in 0..p {
                    for c0 in 0..p {
                        let m = cubic(&f, c2, c1, c0);
                        let no_roots = m.roots_by_scan().unwrap().is_empty();
                        assert_eq!(m.is_irreducible(), no_roots, "p={p} ({c2},{c1},{c0})");
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_fixes_x_exactly_for_split_depressed_cubics() {
        for p in (5..=31u64).filter(|&p| is_prime(p)) {
            let f = FieldCtx::new(p).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    let disc = crate::sqrt::disc_depressed(a, b);
                    if disc.is_zero() {
                        continue;
                    }
                    let m = CubicModulus::depressed(a, b);
                    let roots = m.roots_by_scan().unwrap().len();
                    let frob = m.frobenius();
                    assert_eq!(frob == m.x(), roots == 3, "p={p} a={a} b={b}");
                    if roots == 0 {
                        assert_ne!(frob, m.x());
                        if !a.is_zero() {
                            assert!(!frob.coeff(2).is_zero(), "c2 vanished: p={p} a={a} b={b}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn units_have_order_dividing_p3_minus_1() {
        for p in (5..200u64).filter(|&p| is_prime(p)) {
            let f = FieldCtx::new(p).unwrap();
            let mut found = 0;
            for (a, b) in (1..p).flat_map(|a| (1..p).map(move |b| (a, b))) {
                let m = cubic(&f, 0, a, b);
                if !m.is_irreducible() {
                    continue;
                }
                let e = (p as u128).pow(3) - 1;
                for coeffs in [[1u64, 1, 0], [2, 0, 1], [p - 1, 3 % p, 5 % p]] {
                    let u = m.element_raw(coeffs);
                    assert!(u.pow(e).is_one(), "p={p} a={a} b={b}");
                }
                found += 1;
                if found == 3 {
                    break;
                }
            }
            assert_eq!(found, 3);
        }
    }

    #[test]
    fn poly_gcd_basics() {
        let f = FieldCtx::new(7).unwrap();
        let e = |v: &[u64]| v.iter().map(|&c| f.elem(c)).collect::<Vec<_>>();
        // (x - 1)(x - 2) and (x - 1)(x - 3)
        let g = poly_gcd(&f, &e(&[2, 4, 1]), &e(&[3, 3, 1]));
        assert_eq!(g, vec![6, 1]);
        assert_eq!(poly_gcd(&f, &e(&[1, 1]), &e(&[])), vec![1, 1]);
        assert_eq!(poly_gcd(&f, &e(&[2, 0, 0, 2]), &e(&[1, 1])), vec![1, 1]);
    }

    #[test]
    fn modulus_mismatch_is_reported() {
        let f = FieldCtx::new(11).unwrap();
        let m1 = cubic(&f, 0, 1, 1);
        let m2 = cubic(&f, 0, 1, 2);
        assert_eq!(m1.x().try_mul(&m2.x()).unwrap_err(), Error::ModulusMismatch);
        let m1_copy = cubic(&f, 0, 1, 1);
        assert!(m1.x().try_mul(&m1_copy.x()).is_ok());
    }

    #[test]
    fn ring_mul_counter() {
        let f = FieldCtx::new(41).unwrap();
        let m = cubic(&f, 0, 3, 10);
        reset_ring_mul_count();
        let _ = m.frobenius();
        // 41 = 0b101001: 5 squarings + 2 shifts
        assert_eq!(ring_mul_count(), 7);
    }

    #[test]
    fn dickson_examples() {
        let f41 = FieldCtx::new(41).unwrap();
        assert!(dickson_test(f41.elem(3), f41.elem(10), f41.elem(29)).unwrap());
        // wrong or zero witness
        assert_eq!(
            dickson_test(f41.elem(3), f41.elem(10), f41.elem(28)).unwrap_err(),
            Error::InvalidWitness
        );
        assert_eq!(
            dickson_test(f41.elem(3), f41.elem(10), f41.zero()).unwrap_err(),
            Error::InvalidWitness
        );
        let f7 = FieldCtx::new(7).unwrap();
        assert!(matches!(
            dickson_test(f7.elem(1), f7.elem(1), f7.elem(1)),
            Err(Error::WrongResidueClass { .. })
        ));
    }

    #[test]
    fn dickson_split_cubic_is_reducible() {
        // roots 1, 2, 38 sum to 0 mod 41: (x - 1)(x - 2)(x - 38) = x^3 + a x + b
        let f = FieldCtx::new(41).unwrap();
        let (r1, r2, r3) = (f.elem(1), f.elem(2), f.elem(38));
        let a = r1 * r2 + r1 * r3 + r2 * r3;
        let b = -(r1 * r2 * r3);
        let m = CubicModulus::depressed(a, b);
        assert_eq!(m.roots_by_scan().unwrap().len(), 3);
        let disc = crate::sqrt::disc_depressed(a, b);
        let t = disc.tonelli_shanks().root().unwrap();
        assert!(!dickson_test(a, b, t).unwrap());

        // the undepressed (x - 1)(x - 2)(x - 39), shifted by its root mean
        let roots = [1u64, 2, 39].map(|r| f.elem(r));
        let shift = (roots[0] + roots[1] + roots[2]) * f.elem(3).inv().unwrap();
        let [s1, s2, s3] = roots.map(|r| r - shift);
        let a = s1 * s2 + s1 * s3 + s2 * s3;
        let b = -(s1 * s2 * s3);
        let t = crate::sqrt::disc_depressed(a, b).tonelli_shanks().root().unwrap();
        assert!(!dickson_test(a, b, t).unwrap());
    }

    #[test]
    fn dickson_matches_frobenius_p11() {
        let f = FieldCtx::new(11).unwrap();
        let (a, b) = (f.one(), f.one());
        let disc = crate::sqrt::disc_depressed(a, b);
        assert_eq!(disc.value(), 2);
        let irreducible = CubicModulus::depressed(a, b).is_irreducible();
        match disc.tonelli_shanks().root() {
            Some(t) => assert_eq!(dickson_test(a, b, t).unwrap(), irreducible),
            // a non-square discriminant forces a single root
            None => assert!(!irreducible),
        }
    }

    #[test]
    fn dickson_matches_frobenius_exhaustive() {
        for p in (5..=101u64).filter(|&p| is_prime(p) && p % 6 == 5) {
            let f = FieldCtx::new(p).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    let disc = crate::sqrt::disc_depressed(a, b);
                    if disc.legendre() != 1 {
                        continue;
                    }
                    let t = disc.tonelli_shanks().root().unwrap();
                    let m = CubicModulus::depressed(a, b);
                    assert_eq!(dickson_test(a, b, t).unwrap(), m.is_irreducible(), "p={p} a={a} b={b}");
                    assert_eq!(dickson_test(a, b, -t).unwrap(), m.is_irreducible());
                }
            }
        }
    }

    #[test]
    fn format_poly_rendering() {
        assert_eq!(format_poly(&[95, 22, 68]), "68x^2 + 22x + 95");
        assert_eq!(format_poly(&[19, 0]), "19");
        assert_eq!(format_poly(&[0, 1, 1]), "x^2 + x");
        assert_eq!(format_poly(&[0, 0]), "0");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn ring_axioms(
            p_idx in 0usize..4,
            m in proptest::array::uniform3(any::<u64>()),
            triples in proptest::collection::vec(proptest::array::uniform9(any::<u64>()), 16)
        ) {
            const PRIMES: [u64; 4] = [5, 1_000_003, 4_294_967_311, 4_611_686_018_427_387_847];
            let f = FieldCtx::new(PRIMES[p_idx]).unwrap();
            let modulus = cubic(&f, m[0], m[1], m[2]);
            for t in &triples {
                let e = |i: usize| modulus.element([f.elem(t[i]), f.elem(t[i + 1]), f.elem(t[i + 2])]);
                let (u, v, w) = (e(0), e(3), e(6));
                prop_assert_eq!((u * v) * w, u * (v * w));
                prop_assert_eq!(u * v, v * u);
                prop_assert_eq!(u * (v + w), u * v + u * w);
                prop_assert_eq!(u.square(), u * u);
            }
        }
    }
}
