//! Randomized algebraic properties via proptest. These complement the
//! seeded suites in the acceptance tests with shrinking on failure.

use proptest::prelude::*;

use pencils::field::FieldSpec;
use pencils::homog::{dehomogenize, homogenize, HomogPoly};
use pencils::poly::Poly;

fn gf(p: u64) -> FieldSpec {
    FieldSpec::prime_field(p).unwrap()
}

fn poly_strategy(p: u64, max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(0..p as i64, 0..=max_deg + 1)
        .prop_map(move |coeffs| Poly::from_i64(gf(p), &coeffs))
}

fn nonzero_poly(p: u64, max_deg: usize) -> impl Strategy<Value = Poly> {
    poly_strategy(p, max_deg).prop_filter("nonzero", |f| !f.is_zero())
}

proptest! {
    #[test]
    fn gcd_divides_both_and_is_maximal(
        a in nonzero_poly(5, 4),
        b in nonzero_poly(5, 4),
        c in nonzero_poly(5, 2),
    ) {
        let g = Poly::gcd(&a, &b).unwrap();
        prop_assert!(g.divides(&a));
        prop_assert!(g.divides(&b));
        prop_assert!(g.is_monic());
        // any common divisor divides the gcd: c divides both ac and bc,
        // and gcd(ac, bc) = c * gcd(a, b) up to scalars
        let big = Poly::gcd(&(&a * &c), &(&b * &c)).unwrap();
        prop_assert!(c.monic().1.divides(&big));
        prop_assert_eq!(big, (&g * &c).monic().1);
    }

    #[test]
    fn gcd_commutes(a in nonzero_poly(3, 5), b in nonzero_poly(3, 5)) {
        prop_assert_eq!(Poly::gcd(&a, &b).unwrap(), Poly::gcd(&b, &a).unwrap());
    }

    #[test]
    fn divrem_reconstructs(a in poly_strategy(7, 6), b in nonzero_poly(7, 3)) {
        let (q, r) = a.divrem(&b);
        prop_assert_eq!(&(&q * &b) + &r, a);
        prop_assert!(r.degree() < b.degree() || r.is_zero());
    }

    #[test]
    fn homog_divides_iff_exact_multiple(
        m1 in 0usize..3,
        f1 in nonzero_poly(3, 2),
        m2 in 0usize..3,
        f2 in nonzero_poly(3, 2),
    ) {
        let a = HomogPoly::from_parts(m1, f1).1;
        let b = HomogPoly::from_parts(m2, f2).1;
        let divides = a.divides(&b);
        let quotient = a.exact_div_into(&b);
        prop_assert_eq!(divides, quotient.is_some());
        if let Some(c) = quotient {
            prop_assert_eq!(a.mul(&c), b);
        }
    }

    #[test]
    fn homogenize_inverts_dehomogenize(
        m in 0usize..3,
        f in nonzero_poly(5, 3),
    ) {
        let h = HomogPoly::from_parts(m, f).1;
        let total = h.total_degree().unwrap();
        let (k, back) = homogenize(&dehomogenize(&h), total).unwrap();
        prop_assert!(k.is_one()); // the stored finite part is monic
        prop_assert_eq!(back, h);
    }
}
