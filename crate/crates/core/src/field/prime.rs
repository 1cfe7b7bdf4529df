use crate::error::{Error, Result};

/// Default trial-division bound for [`factor_trial`].
pub const DEFAULT_FACTOR_BOUND: u64 = 1 << 20;

// Deterministic for every n < 3.3 * 10^24, which covers u64.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin primality test for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &w in &MR_WITNESSES {
        if n == w {
            return true;
        }
        if n % w == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Factor `n` by trial division with primes up to `bound`.
///
/// Fails with [`Error::FactorBoundExceeded`] when a prime factor larger than
/// `bound` remains.
pub fn factor_trial(n: u64, bound: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::OutOfRange("cannot factor 0".into()));
    }
    let mut out = Vec::new();
    let mut m = n;
    let mut push = |q: u64, m: &mut u64| {
        let mut k = 0;
        while *m % q == 0 {
            *m /= q;
            k += 1;
        }
        if k > 0 {
            out.push((q, k));
        }
    };
    push(2, &mut m);
    let mut q = 3u64;
    while q <= bound && q.saturating_mul(q) <= m {
        push(q, &mut m);
        q += 2;
    }
    if m > 1 {
        // m is prime (q^2 > m) or all its factors exceed the bound
        if m > bound {
            return Err(Error::FactorBoundExceeded { n, bound });
        }
        out.push((m, 1));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_matches_sieve() {
        let limit = 20_000usize;
        let mut sieve = vec![true; limit];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..limit {
            if sieve[i] {
                for j in (i * i..limit).step_by(i) {
                    sieve[j] = false;
                }
            }
        }
        for (n, &expected) in sieve.iter().enumerate() {
            assert_eq!(is_prime(n as u64), expected, "n = {n}");
        }
    }

    #[test]
    fn primality_large_values() {
        assert!(is_prime(4_611_686_018_427_387_847));
        assert!(is_prime(18_446_744_073_709_551_557)); // largest 64-bit prime
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
        assert!(!is_prime(3_825_123_056_546_413_051));
        assert!(!is_prime(4_294_967_297)); // F5
    }

    #[test]
    fn factor_examples() {
        assert_eq!(factor_trial(40, DEFAULT_FACTOR_BOUND).unwrap(), vec![(2, 3), (5, 1)]);
        assert_eq!(factor_trial(1, DEFAULT_FACTOR_BOUND).unwrap(), vec![]);
        assert_eq!(factor_trial(100, DEFAULT_FACTOR_BOUND).unwrap(), vec![(2, 2), (5, 2)]);
        assert_eq!(factor_trial(2 * 1013, 2000).unwrap(), vec![(2, 1), (1013, 1)]);
    }

    #[test]
    fn factor_bound_enforced() {
        assert_eq!(
            factor_trial(2 * 1013, 1000).unwrap_err(),
            Error::FactorBoundExceeded { n: 2026, bound: 1000 }
        );
        assert!(is_prime(1_000_003));
        assert!(factor_trial(6 * 1_000_003, 1000).is_err());
    }

    #[test]
    fn factor_roundtrip() {
        for n in 1..5000u64 {
            let f = factor_trial(n, DEFAULT_FACTOR_BOUND).unwrap();
            let prod: u64 = f.iter().map(|&(q, k)| q.pow(k)).product();
            assert_eq!(prod, n);
            assert!(f.iter().all(|&(q, _)| is_prime(q)));
        }
    }
}
