//! The exponential identities of the descendant calculus, verified term by
//! term on truncated families:
//!
//! * K(λ·e^Γ) = (K(λ) + ℓ₂(Γ, λ))·e^Γ for ghost-0 families Γ and ghost −1
//!   elements λ (the content of the e^Γ-conjugation identity at even
//!   deformation parameters; higher ℓ_n vanish here).
//! * f(e^Γ − 1) = e^{Φ^f(Γ)} − 1 for a linear functional f, with
//!   Φ^f(Γ) = Σ (1/n!) φ^f_n(Γ, …, Γ) — the cumulant/moment exponential
//!   formula.

use bvperiod_core::bv::BVComplex;
use bvperiod_core::descendant::phi_n;
use bvperiod_core::monomial::{Monomial, Vars};
use bvperiod_core::parse::parse_polynomial;
use bvperiod_core::poly::SuperPolynomial;
use bvperiod_core::scalar::{double_factorial, factorial, int, Scalar};
use bvperiod_core::series::{multidegrees_up_to, total_degree, DeformationSeries, TruncatedSeries};
use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fermat_cubic() -> BVComplex {
    let vars = Vars::hypersurface(2, 3);
    let g = parse_polynomial("x0^3+x1^3+x2^3", &vars).unwrap();
    BVComplex::hypersurface(g, 2, 3).unwrap()
}

#[test]
fn k_conjugation_identity() {
    let bv = fermat_cubic();
    let ne = bv.num_even();
    let mut rng = ChaCha8Rng::seed_from_u64(5150);
    let order = 4u32;
    for _ in 0..6 {
        // random ghost-0 two-direction family of t-order ≥ 1
        let mut gamma = DeformationSeries::zero(2, order, ne);
        for mu in multidegrees_up_to(2, order) {
            if total_degree(&mu) == 0 || rng.gen_bool(0.4) {
                continue;
            }
            let mut p = SuperPolynomial::zero();
            for _ in 0..2 {
                let mut m = Monomial::one(ne);
                for v in 0..ne {
                    m.even[v] = rng.gen_range(0..2);
                }
                p.add_term(m, int(rng.gen_range(-3..=3)));
            }
            gamma.add_term(mu, p);
        }
        // random ghost −1 element
        let mut lambda = SuperPolynomial::zero();
        for _ in 0..3 {
            let mut m = Monomial::odd_var(ne, rng.gen_range(0..bv.vars.num_odd()));
            for v in 0..ne {
                m.even[v] = rng.gen_range(0..2);
            }
            lambda.add_term(m, int(rng.gen_range(-3..=3)));
        }
        let exp = gamma.exp_minus_one().add(&DeformationSeries::from_constant(
            2,
            order,
            SuperPolynomial::one(ne),
            ne,
        ));
        // LHS: K(λ·e^Γ)
        let lhs = exp.mul_poly(&lambda).map_coefficients(|p| bv.apply_k(p));
        // RHS: (Kλ)·e^Γ + ℓ₂(Γ, λ)·e^Γ, the bracket expanded per t-order
        let mut k_gamma_lambda =
            DeformationSeries::from_constant(2, order, bv.apply_k(&lambda), ne);
        for (mu, p) in gamma.terms() {
            k_gamma_lambda.add_term(mu.clone(), bv.bracket_l2(p, &lambda));
        }
        let rhs = exp.mul(&k_gamma_lambda);
        assert_eq!(lhs, rhs, "K(λe^Γ) = K_Γ(λ)e^Γ failed");
    }
}

#[test]
fn functional_exponential_identity() {
    // f = Gaussian moments on Q[x]: f(e^Γ − 1) = e^{Φ^f(Γ)} − 1 with the
    // φ-tables evaluated by multilinear expansion over the coefficients
    let ne = 1;
    let moments = |p: &SuperPolynomial| -> Scalar {
        let mut acc = Scalar::zero();
        for (m, c) in p.terms() {
            let k = m.even[0];
            if k % 2 == 0 {
                acc += c.clone() * double_factorial(k.saturating_sub(1) as u64);
            }
        }
        acc
    };
    let order = 5u32;
    let x = SuperPolynomial::even_var(ne, 0);
    let x2 = x.pow(2);
    // Γ = t₀·x + t₁·(x² − 1)
    let mut centered = x2.clone();
    centered.add_term(Monomial::one(ne), int(-1));
    let coeffs = [x.clone(), centered];
    let mut gamma = DeformationSeries::zero(2, order, ne);
    for (i, c) in coeffs.iter().enumerate() {
        let mut mu = vec![0u32; 2];
        mu[i] = 1;
        gamma.add_term(mu, c.clone());
    }
    // LHS
    let mut lhs = TruncatedSeries::zero(2, order);
    for (mu, p) in gamma.exp_minus_one().terms() {
        lhs.add_term(mu.clone(), moments(p));
    }
    // RHS: exp(Σ_n 1/n! φ_n(Γ..Γ)) − 1 expanded over index tuples
    let mut phi_series = TruncatedSeries::zero(2, order);
    for n in 1..=order {
        for mu in multidegrees_up_to(2, order) {
            if total_degree(&mu) != n {
                continue;
            }
            let mut args: Vec<SuperPolynomial> = Vec::new();
            for (i, &e) in mu.iter().enumerate() {
                for _ in 0..e {
                    args.push(coeffs[i].clone());
                }
            }
            // (1/n!)·(multinomial count) = 1/∏μ!
            let norm = Scalar::one()
                / mu.iter().map(|&e| factorial(e as u64)).fold(Scalar::one(), |a, b| a * b);
            phi_series.add_term(mu.clone(), phi_n(&moments, &args, ne) * norm);
        }
    }
    // e^s − 1 for a scalar series with no constant term
    let mut rhs = TruncatedSeries::zero(2, order);
    let mut pow = TruncatedSeries::one(2, order);
    for k in 1..=order as u64 {
        pow = pow.mul(&phi_series);
        if pow.is_zero() {
            break;
        }
        rhs = rhs.add(&pow.scale(&(Scalar::one() / factorial(k))));
    }
    assert_eq!(lhs, rhs, "f(e^Γ−1) must equal e^{{Φ^f(Γ)}}−1");
    // sanity: the second cumulant direction is visible
    assert_eq!(phi_series.coefficient(&vec![0, 1]), Scalar::zero()); // E[x²−1] = 0
    assert_eq!(phi_series.coefficient(&vec![2, 0]), int(1) / int(2)); // φ₂(x,x)/2
}

#[test]
fn quartic_curve_gram_blocks() {
    use bvperiod_core::cohomology::{invert_matrix, GriffithsBasis, ResiduePairing};
    let vars = Vars::hypersurface(2, 4);
    let g = parse_polynomial("x0^4+x1^4+x2^4", &vars).unwrap();
    let bv = BVComplex::hypersurface(g, 2, 4).unwrap();
    let basis = GriffithsBasis::new(&bv).unwrap();
    let pairing = ResiduePairing::new(&bv, &basis).unwrap();
    let gram = pairing.gram(&bv, &basis);
    assert!(invert_matrix(&gram).is_some(), "Gram must be nondegenerate");
    // ∮ pairs block k with block n−1−k only: the two diagonal 3×3 blocks vanish
    for (bi, block_i) in basis.blocks.iter().enumerate() {
        for (bj, block_j) in basis.blocks.iter().enumerate() {
            for &i in block_i {
                for &j in block_j {
                    if bi + bj != basis.blocks.len() - 1 {
                        assert!(gram[i][j].is_zero(), "off-antidiagonal entry ({i},{j})");
                    }
                }
            }
        }
    }
}
