use super::Fp;
use crate::error::{Error, Result};
use crate::sqrt::SqrtOutcome;

/// Largest modulus (exclusive) the exhaustive oracle will scan.
pub const ORACLE_BOUND: u64 = 1 << 20;

/// Every `x` with `x^2 = d`, found by scanning the whole field.
pub fn sqrt_oracle(d: Fp<'_>) -> Result<Vec<Fp<'_>>> {
    let ctx = d.ctx();
    let p = ctx.modulus();
    if p >= ORACLE_BOUND {
        return Err(Error::OracleBoundExceeded {
            p,
            bound: ORACLE_BOUND,
        });
    }
    Ok(ctx.elements().filter(|x| x.square() == d).collect())
}

impl<'a> Fp<'a> {
    /// Tonelli-Shanks square root.
    ///
    /// Returns the smaller representative `min(t, p - t)`; zero and
    /// non-residues give [`SqrtOutcome::Zero`].
    pub fn tonelli_shanks(self) -> SqrtOutcome<'a> {
        let ctx = self.ctx();
        if self.legendre() != 1 {
            return SqrtOutcome::Zero;
        }
        let p = ctx.modulus();
        let s = (p - 1).trailing_zeros();
        let q = (p - 1) >> s;
        let mut m = s;
        let mut c = ctx.elem(ctx.quadratic_nonresidue()).pow(q);
        let mut t = self.pow(q);
        let mut r = self.pow(q.div_ceil(2));
        while t.value() != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2.value() != 1 {
                t2 = t2.square();
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = b.square();
            }
            m = i;
            c = b.square();
            t *= c;
            r *= b;
        }
        assert_eq!(r.square(), self, "Tonelli-Shanks produced a non-root");
        SqrtOutcome::Root(r.canonical_sign())
    }

    /// The unique cube root when p = 5 (mod 6), as `j^((2p - 1) / 3)`.
    pub fn cube_root_5mod6(self) -> Result<Fp<'a>> {
        let p = self.ctx().modulus();
        if p % 6 != 5 {
            return Err(Error::WrongResidueClass {
                p,
                expected: "5 mod 6",
            });
        }
        Ok(self.pow((2 * p - 1) / 3))
    }

    /// A cube root for p = 1 (mod 6), or `None` for a cubic non-residue.
    ///
    /// Splits the exponent into its 3-power part and runs a discrete log in
    /// the 3-Sylow subgroup, so the root returned is fixed for each input.
    pub fn cube_root_1mod6(self) -> Result<Option<Fp<'a>>> {
        let ctx = self.ctx();
        let p = ctx.modulus();
        if p % 6 != 1 {
            return Err(Error::WrongResidueClass {
                p,
                expected: "1 mod 6",
            });
        }
        if self.is_zero() {
            return Ok(Some(self));
        }
        if self.pow((p - 1) / 3).value() != 1 {
            return Ok(None);
        }

        let mut s = 0u32;
        let mut m = p - 1;
        while m % 3 == 0 {
            m /= 3;
            s += 1;
        }
        // 3e = 1 + k*m
        let (e, k) = if m % 3 == 1 { ((2 * m + 1) / 3, 2) } else { ((m + 1) / 3, 1) };
        let x0 = self.pow(e);
        // x0^3 = j * w with w = (j^m)^k in the 3-Sylow subgroup
        let target = self.pow(m).pow(k).inv()?;

        let z = ctx
            .cubic_nonresidue()
            .ok_or_else(|| Error::Invariant("no cubic non-residue for p = 1 mod 3".into()))?;
        let gen = ctx.elem(z).pow(m);
        let log = sylow3_log(gen, target, s)?;
        if log % 3 != 0 {
            return Err(Error::Invariant("3-Sylow component is not a cube".into()));
        }
        let root = x0 * gen.pow(log / 3);
        if root.pow(3) != self {
            return Err(Error::Invariant("cube root check failed".into()));
        }
        Ok(Some(root))
    }
}

/// Discrete log of `target` to base `gen`, where `gen` has order 3^s.
fn sylow3_log(gen: Fp<'_>, target: Fp<'_>, s: u32) -> Result<u64> {
    let gen_inv = gen.inv()?;
    let mut pow3 = vec![1u64; s as usize + 1];
    for i in 1..=s as usize {
        pow3[i] = pow3[i - 1] * 3;
    }
    let gamma = gen.pow(pow3[s as usize - 1]);
    let gamma2 = gamma.square();
    let mut log = 0u64;
    for i in 0..s as usize {
        let h = (target * gen_inv.pow(log)).pow(pow3[s as usize - 1 - i]);
        let digit = if h.value() == 1 {
            0
        } else if h == gamma {
            1
        } else if h == gamma2 {
            2
        } else {
            return Err(Error::Invariant("element outside the 3-Sylow subgroup".into()));
        };
        log += digit * pow3[i];
    }
    Ok(log)
}
