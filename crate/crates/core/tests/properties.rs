use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

use longreid_core::exact::{canonicalize, prime_factors, valuation, BigRational, ProjectiveMatrix};
use longreid_core::family::RepFamily;
use longreid_core::tree::{
    displacement, is_vertex_stabilizer, vertex_key, vertex_pair, PrimeContext,
};
use longreid_core::witness::{classify_order, OrderClass};
use longreid_core::words::{format_word, parse_word, Letter, Word, WordStyle};

fn letter() -> impl Strategy<Value = Letter> {
    prop::sample::select(Letter::ALL.to_vec())
}

fn word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(letter(), 0..=max).prop_map(Word::from_letters)
}

fn matrix() -> impl Strategy<Value = ProjectiveMatrix> {
    (-60i64..60, -60i64..60, -60i64..60, -60i64..60).prop_filter_map("singular", |(a, b, c, d)| {
        ProjectiveMatrix::from_integers(a, b, c, d).ok()
    })
}

fn nonzero_rational() -> impl Strategy<Value = BigRational> {
    (-40i64..40, 1i64..40)
        .prop_filter("zero", |(n, _)| *n != 0)
        .prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn long_reid() -> RepFamily {
    RepFamily::long_reid()
}

proptest! {
    #[test]
    fn canonicalize_ignores_scalars(g in matrix(), lambda in nonzero_rational()) {
        let e = g.entries();
        let raw = [
            [BigRational::from_integer(e[0].clone()) * &lambda, BigRational::from_integer(e[1].clone()) * &lambda],
            [BigRational::from_integer(e[2].clone()) * &lambda, BigRational::from_integer(e[3].clone()) * &lambda],
        ];
        prop_assert_eq!(canonicalize(&raw).unwrap(), g);
    }

    #[test]
    fn group_laws(x in matrix(), y in matrix(), z in matrix()) {
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.inverse().inverse(), x.clone());
        prop_assert!(x.mul(&x.inverse()).is_identity());
        prop_assert_eq!(ProjectiveMatrix::identity().mul(&x), x.clone());
    }

    #[test]
    fn determinant_valuation_parity(x in matrix(), y in matrix()) {
        let product = x.mul(&y).det();
        for p in prime_factors(&(&product * x.det() * y.det())) {
            let lhs = valuation(&product, p).unwrap();
            let rhs = valuation(&x.det(), p).unwrap() + valuation(&y.det(), p).unwrap();
            prop_assert_eq!(lhs % 2, rhs % 2);
        }
    }

    #[test]
    fn valuation_is_additive(a in 1i64..100_000, b in 1i64..100_000, p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let (a, b) = (BigInt::from(a), BigInt::from(b));
        prop_assert_eq!(
            valuation(&(&a * &b), p).unwrap(),
            valuation(&a, p).unwrap() + valuation(&b, p).unwrap()
        );
    }

    #[test]
    fn free_reduction_laws(w in word(60)) {
        let r = w.free_reduce();
        prop_assert_eq!(r.free_reduce(), r.clone());
        prop_assert!(r.len() <= w.len());
        prop_assert!(r.is_freely_reduced());
        prop_assert_eq!(w.inverse().inverse(), w.clone());
        prop_assert!(w.concat(&w.inverse()).free_reduce().is_empty());
    }

    #[test]
    fn parse_format_round_trip(w in word(200)) {
        for style in [WordStyle::Flat, WordStyle::Exponent] {
            prop_assert_eq!(parse_word(&format_word(&w, style)).unwrap(), w.clone());
        }
    }

    #[test]
    fn evaluation_is_a_homomorphism(u in word(12), v in word(12)) {
        let fam = long_reid();
        let eu = fam.evaluate_word(&u);
        prop_assert_eq!(fam.evaluate_word(&u.concat(&v)), eu.mul(&fam.evaluate_word(&v)));
        prop_assert_eq!(fam.evaluate_word(&u.inverse()), eu.inverse());
        prop_assert_eq!(fam.evaluate_word(&u.free_reduce()), eu.clone());
        // Entries live in Z[1/6], so the primitive determinant is ±2^i·3^j.
        prop_assert!(prime_factors(&eu.det()).iter().all(|&p| p == 2 || p == 3));
        prop_assert!(is_vertex_stabilizer(&eu).is_ok());
    }

    #[test]
    fn tree_metric_laws(u in word(10), v in word(10)) {
        let fam = long_reid();
        let g = fam.evaluate_word(&u);
        let h = fam.evaluate_word(&v);
        for ctx in [PrimeContext::TWO, PrimeContext::THREE] {
            let p = ctx.p();
            let d = displacement(&g, ctx);
            prop_assert_eq!(d, displacement(&g.inverse(), ctx));
            prop_assert!(displacement(&g.mul(&h), ctx) <= d + displacement(&h, ctx));
            prop_assert_eq!(d % 2, valuation(&g.det(), p).unwrap() % 2);
            let key = vertex_key(&g, ctx);
            prop_assert_eq!(key.n, d);
            prop_assert!(key.is_valid());
        }
    }

    #[test]
    fn stabilizer_coherence(u in word(6), v in word(6)) {
        let fam = long_reid();
        let same = vertex_pair(&fam.evaluate_word(&u)).unwrap() == vertex_pair(&fam.evaluate_word(&v)).unwrap();
        let quotient = fam.evaluate_word(&u.inverse().concat(&v));
        prop_assert_eq!(same, is_vertex_stabilizer(&quotient).unwrap());
    }

    #[test]
    fn vertex_keys_separate_cosets(g in matrix(), h in matrix(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let ctx = PrimeContext::new(p).unwrap();
        let quotient = g.inverse().mul(&h);
        prop_assert_eq!(
            vertex_key(&g, ctx) == vertex_key(&h, ctx),
            displacement(&quotient, ctx) == 0
        );
    }

    #[test]
    fn order_is_a_conjugacy_invariant(g in matrix(), h in matrix()) {
        let order = classify_order(&g);
        prop_assert_eq!(order, classify_order(&g.inverse()));
        prop_assert_eq!(order, classify_order(&h.mul(&g).mul(&h.inverse())));
    }

    #[test]
    fn finite_orders_match_powers(g in matrix()) {
        if let OrderClass::Finite(n) = classify_order(&g) {
            prop_assert!(g.pow(n as u32).is_identity());
            for k in 1..n as u32 {
                prop_assert!(!g.pow(k).is_identity());
            }
        } else {
            for k in 1..=12 {
                prop_assert!(!g.pow(k).is_identity());
            }
        }
    }

    #[test]
    fn family_relators_hold(n in -50i64..50, d in 1i64..50) {
        let t = BigRational::new(n.into(), d.into());
        prop_assume!(!(t == BigRational::from_integer(0.into()) || t.abs() == BigRational::from_integer(1.into())));
        let fam = RepFamily::new(t).unwrap();
        prop_assert!(fam.check_constraint());
        let rel = fam.check_relator();
        prop_assert!(rel.trace_zero && rel.square_trivial);
    }
}

#[test]
fn finite_orders_are_hit() {
    // every finite class occurs in the small-entry matrix space
    let mut seen = std::collections::BTreeSet::new();
    for a in -3i64..=3 {
        for b in -3i64..=3 {
            for c in -3i64..=3 {
                for d in -3i64..=3 {
                    if let Ok(g) = ProjectiveMatrix::from_integers(a, b, c, d) {
                        if let OrderClass::Finite(n) = classify_order(&g) {
                            assert!(g.pow(n as u32).is_identity());
                            seen.insert(n);
                        }
                    }
                }
            }
        }
    }
    assert_eq!(seen.into_iter().collect::<Vec<_>>(), [1, 2, 3, 4, 6]);
}

#[test]
fn negative_determinants_are_supported() {
    let g = ProjectiveMatrix::from_integers(1, 1, 1, 0).unwrap();
    assert!(g.det().is_negative());
    assert_eq!(classify_order(&g), OrderClass::Infinite);
}
