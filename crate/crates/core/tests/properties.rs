//! Property tests for the exact-algebra invariants: graded commutativity,
//! associativity, grading additivity, parser/printer round-trips, and
//! division-certificate soundness on arbitrary inputs.

use bvperiod_core::groebner::GroebnerBasisWithCofactors;
use bvperiod_core::monomial::{Grading, Monomial, MonomialOrder, Vars};
use bvperiod_core::parse::parse_polynomial;
use bvperiod_core::poly::SuperPolynomial;
use bvperiod_core::scalar::int;
use proptest::prelude::*;

fn vars() -> Vars {
    Vars::hypersurface(2, 3)
}

prop_compose! {
    fn arb_monomial()(exps in proptest::collection::vec(0u32..3, 4), mask in 0u32..16) -> Monomial {
        Monomial { even: exps, odd_mask: mask }
    }
}

prop_compose! {
    fn arb_poly()(terms in proptest::collection::vec((arb_monomial(), -5i64..=5), 0..6)) -> SuperPolynomial {
        let mut p = SuperPolynomial::zero();
        for (m, c) in terms {
            p.add_term(m, int(c));
        }
        p
    }
}

// Single-grading polynomials so the Koszul sign of commutativity is
// well-defined.
prop_compose! {
    fn arb_homogeneous()(seed in arb_poly()) -> SuperPolynomial {
        let target = seed.terms().next().map(|(pivot, _)| Grading::of_monomial(pivot, 3));
        match target {
            None => seed,
            Some(target) => {
                let mut p = SuperPolynomial::zero();
                for (m, c) in seed.terms() {
                    if Grading::of_monomial(m, 3) == target {
                        p.add_term(m.clone(), c.clone());
                    }
                }
                p
            }
        }
    }
}

proptest! {
    #[test]
    fn multiply_associative(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn multiply_graded_commutative(a in arb_homogeneous(), b in arb_homogeneous()) {
        let ab = &a * &b;
        let ba = &b * &a;
        let (ga, gb) = (a.ghost().unwrap_or(0), b.ghost().unwrap_or(0));
        if (ga * gb) % 2 == 0 {
            prop_assert_eq!(ab, ba);
        } else {
            prop_assert_eq!(ab, -&ba);
        }
    }

    #[test]
    fn grading_additive(a in arb_homogeneous(), b in arb_homogeneous()) {
        let v = vars();
        let ab = &a * &b;
        if let (Some(ga), Some(gb), Some(gab)) =
            (a.grading_of(&v), b.grading_of(&v), (!ab.is_zero()).then(|| ab.grading_of(&v)).flatten())
        {
            prop_assert_eq!(gab, ga.add(&gb));
        }
    }

    #[test]
    fn print_parse_round_trip(a in arb_poly()) {
        let v = vars();
        let printed = a.display(&v);
        let reparsed = parse_polynomial(&printed, &v);
        prop_assert_eq!(reparsed.as_ref().ok(), Some(&a), "printed form: {}", printed);
    }

    #[test]
    fn homogeneous_components_sum(a in arb_poly()) {
        let v = vars();
        let mut sum = SuperPolynomial::zero();
        for (_, comp) in a.homogeneous_components(&v) {
            prop_assert!(comp.grading_of(&v).is_some());
            sum = &sum + &comp;
        }
        prop_assert_eq!(sum, a);
    }

    #[test]
    fn division_certificate_sound(coeffs in proptest::collection::vec(-4i64..=4, 10)) {
        // divide a random even cubic form against the Hesse-pencil Jacobian
        let v = vars();
        let order = MonomialOrder::default_for(&v);
        let g = parse_polynomial("x0^3+x1^3+x2^3-6*x0*x1*x2", &v).unwrap();
        let gens: Vec<SuperPolynomial> = (1..=3).map(|i| g.even_derivative(i)).collect();
        let gb = GroebnerBasisWithCofactors::buchberger(&gens, order).unwrap();
        let monos = bvperiod_core::monomial::monomials_of_degree(v.num_even(), &[1, 2, 3], 3);
        let mut f = SuperPolynomial::zero();
        for (m, c) in monos.into_iter().zip(coeffs) {
            f.add_term(m, int(c));
        }
        let div = gb.normal_form_with_quotients(&f);
        let mut acc = div.remainder.clone();
        for (i, q) in div.quotients.iter().enumerate() {
            acc = &acc + &(q * &gb.generators[i]);
        }
        prop_assert_eq!(acc, f);
        // idempotence
        prop_assert_eq!(gb.normal_form(&div.remainder), div.remainder);
    }
}
