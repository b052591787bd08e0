//! The BV complex (𝒜, ·, K = Q + Δ) of a quantum Jacobian potential S.
//!
//! In hypersurface mode S = y·G(x) (the Dwork potential) and the algebra
//! carries the tri-grading; in generic mode S is arbitrary and only the
//! ghost grading exists. Operator conventions: odd derivatives act from the
//! left, and Δ(f·η_i) = ∂f/∂y_i for even f. All other signs follow from
//! the canonical odd order η₋₁ < η₀ < … < η_n.

use crate::groebner::{smoothness_check, GroebnerError};
use crate::monomial::{MonomialOrder, Vars};
use crate::poly::SuperPolynomial;
use crate::scalar::{self, Scalar};
use num::One;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BVError {
    #[error("potential must be an even polynomial of ghost number 0")]
    OddPotential,
    #[error("G is not homogeneous of degree d in x0..xn")]
    NotHomogeneous,
    #[error("hypersurface G = 0 is singular; witness exponents {witness:?}")]
    Singular { witness: Vec<Option<u32>> },
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

#[derive(Debug, Clone)]
pub struct BVComplex {
    pub vars: Vars,
    pub order: MonomialOrder,
    /// The potential S (equals y·G in hypersurface mode).
    pub potential: SuperPolynomial,
    /// ∂S/∂y_i for each even variable, cached.
    jacobian: Vec<SuperPolynomial>,
    /// Hypersurface data: (n, d, G, c_X) with c_X = d−(n+1).
    pub hypersurface: Option<HypersurfaceData>,
}

#[derive(Debug, Clone)]
pub struct HypersurfaceData {
    pub n: usize,
    pub d: u32,
    pub g: SuperPolynomial,
    pub background_charge: i64,
}

impl BVComplex {
    /// Dwork potential S = y·G(x) for a smooth degree-d hypersurface in P^n.
    pub fn hypersurface(g: SuperPolynomial, n: usize, d: u32) -> Result<Self, BVError> {
        let vars = Vars::hypersurface(n, d);
        let order = MonomialOrder::default_for(&vars);
        if !g.is_even() {
            return Err(BVError::OddPotential);
        }
        if !g.terms().all(|(m, _)| m.even[0] == 0 && m.even_degree() == d) || g.is_zero() {
            return Err(BVError::NotHomogeneous);
        }
        let (smooth, witness) = smoothness_check(&g, &vars, &order)?;
        if !smooth {
            return Err(BVError::Singular { witness });
        }
        let y = SuperPolynomial::even_var(vars.num_even(), 0);
        let potential = &y * &g;
        let jacobian = (0..vars.num_even()).map(|i| potential.even_derivative(i)).collect();
        let background_charge = d as i64 - (n as i64 + 1);
        Ok(BVComplex {
            vars,
            order,
            potential,
            jacobian,
            hypersurface: Some(HypersurfaceData { n, d, g, background_charge }),
        })
    }

    /// Generic mode: arbitrary even potential over declared variables.
    pub fn generic(potential: SuperPolynomial, vars: Vars) -> Result<Self, BVError> {
        if !potential.is_even() {
            return Err(BVError::OddPotential);
        }
        let order = MonomialOrder::default_for(&vars);
        let jacobian = (0..vars.num_even()).map(|i| potential.even_derivative(i)).collect();
        Ok(BVComplex { vars, order, potential, jacobian, hypersurface: None })
    }

    pub fn num_even(&self) -> usize {
        self.vars.num_even()
    }

    pub fn background_charge(&self) -> i64 {
        self.hypersurface.as_ref().map(|h| h.background_charge).unwrap_or(0)
    }

    /// The Jacobian generators ∂S/∂y_i (so Q(η_i) = jacobian[i]).
    pub fn jacobian_generators(&self) -> &[SuperPolynomial] {
        &self.jacobian
    }

    /// Q = Σ_i (∂S/∂y_i)·∂/∂η_i — the classical, derivation part of K.
    pub fn apply_q(&self, u: &SuperPolynomial) -> SuperPolynomial {
        let mut out = SuperPolynomial::zero();
        for (i, js) in self.jacobian.iter().enumerate() {
            if !js.is_zero() {
                out = &out + &(js * &u.odd_derivative(i));
            }
        }
        out
    }

    /// Δ = Σ_i ∂/∂y_i ∂/∂η_i — the second-order, quantum part of K.
    pub fn apply_delta(&self, u: &SuperPolynomial) -> SuperPolynomial {
        let mut out = SuperPolynomial::zero();
        for i in 0..self.num_even() {
            out = &out + &u.odd_derivative(i).even_derivative(i);
        }
        out
    }

    /// K = Q + Δ.
    pub fn apply_k(&self, u: &SuperPolynomial) -> SuperPolynomial {
        &self.apply_q(u) + &self.apply_delta(u)
    }

    /// ℓ₂(a, b) = K(ab) − K(a)·b − (−1)^{gh a} a·K(b), computed from the
    /// defining formula on ghost-homogeneous components of `a`.
    pub fn bracket_l2(&self, a: &SuperPolynomial, b: &SuperPolynomial) -> SuperPolynomial {
        let mut out = SuperPolynomial::zero();
        for gh in (-(self.vars.num_odd() as i64))..=0 {
            let ac = a.ghost_component(gh);
            if ac.is_zero() {
                continue;
            }
            let kab = self.apply_k(&(&ac * b));
            let ka_b = &self.apply_k(&ac) * b;
            let a_kb = &ac * &self.apply_k(b);
            let signed = if gh % 2 == 0 { a_kb } else { -&a_kb };
            out = &out + &(&(&kab - &ka_b) - &signed);
        }
        out
    }

    /// The distinguished degree −1 element R = −d·yη₋₁ + Σ x_iη_i.
    pub fn r_element(&self) -> SuperPolynomial {
        let h = self.hypersurface.as_ref().expect("R needs hypersurface mode");
        let ne = self.num_even();
        let mut r = SuperPolynomial::zero();
        let y_eta = SuperPolynomial::from_term(
            {
                let mut m = crate::monomial::Monomial::odd_var(ne, 0);
                m.even[0] = 1;
                m
            },
            scalar::int(-(h.d as i64)),
        );
        r = &r + &y_eta;
        for i in 1..ne {
            let mut m = crate::monomial::Monomial::odd_var(ne, i);
            m.even[i] = 1;
            r = &r + &SuperPolynomial::from_term(m, Scalar::one());
        }
        r
    }

    /// K(R) = n+1−d as a scalar.
    pub fn kr_scalar(&self) -> Scalar {
        let h = self.hypersurface.as_ref().expect("KR needs hypersurface mode");
        scalar::int(h.n as i64 + 1 - h.d as i64)
    }

    /// δ_R(u) = ℓ₂(R, u) + K(R)·u. On a charge-c tri-homogeneous element
    /// this is (c − c_X)·u; its kernel is the background-charge slice.
    pub fn delta_r(&self, u: &SuperPolynomial) -> SuperPolynomial {
        let r = self.r_element();
        let kr = self.kr_scalar();
        &self.bracket_l2(&r, u) + &u.scale(&kr)
    }

    /// Seeded random element whose terms share a single tri-degree (so it
    /// is tri-homogeneous). Drives the identity suites.
    pub fn random_tri_homogeneous(&self, rng: &mut rand_chacha::ChaCha8Rng) -> SuperPolynomial {
        use rand::Rng;
        let ne = self.num_even();
        let no = self.vars.num_odd();
        let d = self.hypersurface.as_ref().map(|h| h.d).unwrap_or(0);
        let sample = |rng: &mut rand_chacha::ChaCha8Rng| {
            let mut m = crate::monomial::Monomial::one(ne);
            for v in 0..ne {
                m.even[v] = rng.gen_range(0..3);
            }
            m.odd_mask = rng.gen_range(0..(1u32 << no));
            m
        };
        let pivot = sample(rng);
        let target = crate::monomial::Grading::of_monomial(&pivot, d);
        let mut p = SuperPolynomial::from_term(pivot, scalar::int(rng.gen_range(1..=4)));
        let mut attempts = 0;
        while p.num_terms() < 3 && attempts < 200 {
            attempts += 1;
            let m = sample(rng);
            if crate::monomial::Grading::of_monomial(&m, d) == target {
                p.add_term(m, scalar::int(rng.gen_range(-4..=4)));
            }
        }
        p
    }

    /// The charge Euler operator Ê_ch (hypersurface mode).
    pub fn euler_charge(&self, u: &SuperPolynomial) -> SuperPolynomial {
        let h = self.hypersurface.as_ref().expect("charge needs hypersurface mode");
        let d = h.d;
        let mut out = SuperPolynomial::zero();
        for (m, c) in u.terms() {
            let g = crate::monomial::Grading::of_monomial(m, d);
            out.add_term(m.clone(), c.clone() * scalar::int(g.charge));
        }
        out
    }
}
