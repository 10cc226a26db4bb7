//! Property tests for the algebraic core: ring axioms, conjugation,
//! square roots, slope canonicalization, and the even-quartic factorizer.

use dehnkit::exactnum::{
    fmt_rat, parse_quad, parse_rational, rat_sqrt, QuadNum, Rat,
};
use dehnkit::fillings::Slope;
use dehnkit::linalg::{factor_even_quartic, Mat4, Poly};
use num::{BigInt, One, Zero};
use proptest::prelude::*;

fn arb_rat() -> impl Strategy<Value = Rat> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| Rat::new(BigInt::from(n), BigInt::from(d)))
}

fn arb_quad(d: i64) -> impl Strategy<Value = QuadNum> {
    (arb_rat(), arb_rat()).prop_map(move |(a, b)| QuadNum::new(a, b, d))
}

proptest! {
    #[test]
    fn field_axioms_hold(x in arb_quad(-3), y in arb_quad(-3), z in arb_quad(-3)) {
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        if !x.is_zero() {
            prop_assert_eq!(&x * &x.inv(), QuadNum::from_int(1));
        }
    }

    #[test]
    fn conj_is_a_ring_automorphism(x in arb_quad(-2), y in arb_quad(-2)) {
        prop_assert_eq!((&x + &y).conj(), &x.conj() + &y.conj());
        prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
        prop_assert_eq!(x.conj().conj(), x.clone());
        prop_assert_eq!(x.norm().is_zero(), x.is_zero());
    }

    #[test]
    fn field_sqrt_squares_back(x in arb_quad(-1)) {
        if let Some(y) = x.sqrt_in_field(-1) {
            prop_assert_eq!(&y * &y, x);
        }
    }

    #[test]
    fn squares_always_have_roots(x in arb_quad(-2)) {
        let sq = &x * &x;
        let y = sq.sqrt_in_field(-2).expect("a square has a root");
        prop_assert_eq!(&y * &y, sq);
    }

    #[test]
    fn rational_display_roundtrip(r in arb_rat()) {
        prop_assert_eq!(parse_rational(&fmt_rat(&r)).unwrap(), r);
    }

    #[test]
    fn quad_display_roundtrip(x in arb_quad(-7)) {
        prop_assert_eq!(parse_quad(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn slope_canonical_form(p in -60i64..=60, q in -60i64..=60) {
        prop_assume!(p != 0 || q != 0);
        let s = Slope::new(BigInt::from(p), BigInt::from(q)).unwrap();
        // canonical: coprime, q > 0 or (q = 0 and p > 0), sign-stable
        prop_assert!(num::Integer::gcd(&s.p, &s.q).is_one());
        prop_assert!(s.q > BigInt::zero() || (s.q.is_zero() && s.p > BigInt::zero()));
        let neg = Slope::new(BigInt::from(-p), BigInt::from(-q)).unwrap();
        prop_assert_eq!(s, neg);
    }

    #[test]
    fn even_quartic_factorization_reconstructs(a in arb_rat(), b in arb_rat()) {
        let f = factor_even_quartic(&a, &b);
        if let Some(product) = f.expand() {
            let expect = Poly::new(vec![b, Rat::zero(), a, Rat::zero(), Rat::one()]);
            prop_assert_eq!(product, expect);
        }
    }

    #[test]
    fn min_poly_divides_char_poly(entries in proptest::collection::vec((-6i64..=6, 1i64..=3), 16)) {
        let mut m = Mat4::identity();
        for (k, (n, d)) in entries.iter().enumerate() {
            m.e[k / 4][k % 4] = Rat::new(BigInt::from(*n), BigInt::from(*d));
        }
        let mp = m.min_poly();
        let cp = m.char_poly();
        prop_assert!(mp.divides(&cp));
        // the minimal polynomial annihilates the matrix exactly
        let zero = Mat4::identity().scale(&Rat::zero());
        prop_assert_eq!(mp.eval_mat4(&m), zero);
    }

    #[test]
    fn rat_sqrt_is_exact(n in 0i64..=500, d in 1i64..=30) {
        let r = Rat::new(BigInt::from(n), BigInt::from(d));
        if let Some(s) = rat_sqrt(&r) {
            prop_assert_eq!(&s * &s, r.clone());
        }
        let sq = &r * &r;
        prop_assert_eq!(rat_sqrt(&sq), Some(r));
    }
}
