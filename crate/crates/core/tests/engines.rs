use gfsqrt::bench::random_prime_5mod6;
use gfsqrt::field::is_prime;
use gfsqrt::sqrt::{cipolla_lehmer, s_function, s_function_any};
use gfsqrt::{FieldCtx, SqrtOutcome};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn prime_5mod6() -> impl Strategy<Value = u64> {
    (8u32..=62, any::<u64>()).prop_map(|(bits, seed)| {
        random_prime_5mod6(bits, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn engines_return_true_roots(p in prime_5mod6(), r in any::<u64>(), b in any::<u64>()) {
        let f = FieldCtx::new(p).unwrap();
        let r = f.elem(r % (p - 1) + 1);
        let d = r.square();
        let b = f.elem(b % (p - 1) + 1);
        for out in [s_function(d, b).unwrap(), cipolla_lehmer(d, b).unwrap(), d.tonelli_shanks()] {
            if let SqrtOutcome::Root(t) = out {
                prop_assert!(t == r || t == -r);
            }
        }
        prop_assert_eq!(d.tonelli_shanks().root().map(|t| t.square()), Some(d));
    }

    #[test]
    fn negation_identity(p in prime_5mod6(), r in any::<u64>(), b in any::<u64>()) {
        let f = FieldCtx::new(p).unwrap();
        let d = f.elem(r % (p - 1) + 1).square();
        let b = f.elem(b % (p - 1) + 1);
        prop_assert_eq!(s_function(d, b).unwrap(), s_function(d, -b).unwrap().negate());
    }

    #[test]
    fn scaling_in_b(p in prime_5mod6(), r in any::<u64>(), b in any::<u64>()) {
        let f = FieldCtx::new(p).unwrap();
        let d1 = f.elem(r % (p - 1) + 1).square();
        let b = f.elem(b % (p - 1) + 1);
        let lhs = s_function(d1, f.one()).unwrap().root().map(|t| t * b);
        let rhs = s_function(b.square() * d1, b).unwrap().root();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn non_residues_never_get_roots(p in prime_5mod6(), v in any::<u64>(), b in any::<u64>()) {
        let f = FieldCtx::new(p).unwrap();
        let d = f.elem(v % p);
        prop_assume!(d.legendre() == -1);
        let b = f.elem(b % (p - 1) + 1);
        prop_assert!(s_function(d, b).unwrap().is_zero());
        prop_assert!(d.tonelli_shanks().is_zero());
        prop_assert!(cipolla_lehmer(d, b).map_or(true, |o| o.is_zero()));
    }
}

#[test]
fn first_residue_class_agrees_with_scan() {
    for p in (7..400u64).filter(|&p| is_prime(p) && p % 6 == 1) {
        let f = FieldCtx::new(p).unwrap();
        for d in f.elements() {
            for b in [1u64, 2, p - 1] {
                if let SqrtOutcome::Root(t) = s_function_any(d, f.elem(b)).unwrap() {
                    assert_eq!(t.square(), d, "p={p} d={d} b={b}");
                }
            }
        }
    }
}
