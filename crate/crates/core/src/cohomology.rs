//! Cohomology bases and reductions.
//!
//! * [`GriffithsBasis`] — representatives y^k·F_{[k]a}(x) built from standard
//!   monomials of the x-Jacobian ideal in degrees d(k+1)−(n+1), partitioned
//!   into Hodge blocks (generic mode: all standard monomials of the full
//!   Jacobian ideal).
//! * [`k_reduce`] — the quantum-corrected reduction: Groebner division by
//!   the Jacobian generators interleaved with the second-order part Δ,
//!   producing exact certificates u = Σ c_α·rep_α + K(Λ).
//! * [`gd_reduce_oracle`] — the classical pole-order-lowering reduction on
//!   rational-form data, coded independently of `k_reduce` so that their
//!   agreement is meaningful evidence.
//! * [`ResiduePairing`] — ∮ via the Grothendieck residue on the Jacobian
//!   ring, normalized so the Hessian determinant has residue equal to the
//!   Milnor number.

use crate::bv::BVComplex;
use crate::groebner::{GroebnerBasisWithCofactors, GroebnerError};
use crate::monomial::Monomial;
use crate::poly::SuperPolynomial;
use crate::scalar::{self, Scalar};
use num::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CohomologyError {
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("input must have ghost number 0")]
    NotGhostZero,
    #[error("degree mismatch: deg F + n + 1 must equal k·d (got deg F = {deg_f}, k = {k})")]
    DegreeMismatch { deg_f: u32, k: u32 },
    #[error("reduction failed to make progress (weight/degree did not decrease)")]
    NoProgress,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Basis of H⁰_K with block structure. In hypersurface mode block k holds
/// the weight-k representatives and the block dimensions are the primitive
/// Hodge numbers; in generic mode there is a single block.
#[derive(Debug, Clone)]
pub struct GriffithsBasis {
    pub reps: Vec<SuperPolynomial>,
    pub rep_monomials: Vec<Monomial>,
    pub blocks: Vec<Vec<usize>>,
    /// Division basis: x-Jacobian ideal (hypersurface) or the full Jacobian
    /// ideal of S (generic mode).
    pub gb: GroebnerBasisWithCofactors,
    index: BTreeMap<Monomial, usize>,
}

impl GriffithsBasis {
    pub fn new(bv: &BVComplex) -> Result<Self, CohomologyError> {
        match &bv.hypersurface {
            Some(h) => {
                let ne = bv.num_even();
                let gens: Vec<SuperPolynomial> =
                    (1..ne).map(|i| h.g.even_derivative(i)).collect();
                let gb = GroebnerBasisWithCofactors::buchberger(&gens, bv.order.clone())?;
                let x_vars: Vec<usize> = (1..ne).collect();
                let mut reps = Vec::new();
                let mut rep_monomials = Vec::new();
                let mut blocks = Vec::new();
                for k in 0..h.n as u32 {
                    let deg = (h.d as i64) * (k as i64 + 1) - (h.n as i64 + 1);
                    let mut block = Vec::new();
                    if deg >= 0 {
                        for m in gb.standard_monomials_of_degree(ne, &x_vars, deg as u32) {
                            let mut full = m.clone();
                            full.even[0] = k;
                            block.push(reps.len());
                            reps.push(SuperPolynomial::from_term(full.clone(), Scalar::one()));
                            rep_monomials.push(full);
                        }
                    }
                    blocks.push(block);
                }
                let index = rep_monomials
                    .iter()
                    .enumerate()
                    .map(|(i, m)| (m.clone(), i))
                    .collect();
                Ok(GriffithsBasis { reps, rep_monomials, blocks, gb, index })
            }
            None => {
                let ne = bv.num_even();
                let gens = bv.jacobian_generators().to_vec();
                let gb = GroebnerBasisWithCofactors::buchberger(&gens, bv.order.clone())?;
                let all_vars: Vec<usize> = (0..ne).collect();
                let monos = gb.all_standard_monomials(ne, &all_vars)?;
                let mut reps = Vec::new();
                let mut rep_monomials = Vec::new();
                let mut block = Vec::new();
                for m in monos {
                    block.push(reps.len());
                    reps.push(SuperPolynomial::from_term(m.clone(), Scalar::one()));
                    rep_monomials.push(m);
                }
                let index = rep_monomials
                    .iter()
                    .enumerate()
                    .map(|(i, m)| (m.clone(), i))
                    .collect();
                Ok(GriffithsBasis { reps, rep_monomials, blocks: vec![block], gb, index })
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn block_dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.len()).collect()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Block (weight) of a representative.
    pub fn block_of(&self, idx: usize) -> usize {
        self.blocks.iter().position(|b| b.contains(&idx)).unwrap()
    }
}

/// Output of `k_reduce`: coefficients on the basis plus the ghost −1
/// certificate Λ with u = Σ c_α·rep_α + K(Λ), exactly.
#[derive(Debug, Clone)]
pub struct ReductionCertificate {
    pub coefficients: Vec<Scalar>,
    pub certificate: SuperPolynomial,
}

/// One division round of the quantum-corrected reduction: writes `r` as
/// Q(Λ_step) + (standard-monomial part), returning (Λ_step, remainder
/// readoff). Shared by `k_reduce` and the deformation divider.
pub(crate) fn division_round(
    bv: &BVComplex,
    basis: &GriffithsBasis,
    r: &SuperPolynomial,
) -> Result<(SuperPolynomial, SuperPolynomial), CohomologyError> {
    let ne = bv.num_even();
    let div = basis.gb.normal_form_with_quotients(r);
    let mut lambda = SuperPolynomial::zero();
    if bv.hypersurface.is_some() {
        // generators are ∂G/∂x_i; Q(η_i) = y·∂G/∂x_i, so each quotient must
        // carry a factor of y
        for (j, q) in div.quotients.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let lam = q.div_even_var(0).ok_or_else(|| {
                CohomologyError::Internal(format!(
                    "quotient against ∂G/∂x_{j} not divisible by y"
                ))
            })?;
            lambda = &lambda + &(&lam * &SuperPolynomial::odd_var(ne, j + 1));
        }
    } else {
        for (j, q) in div.quotients.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            lambda = &lambda + &(q * &SuperPolynomial::odd_var(ne, j));
        }
    }
    Ok((lambda, div.remainder))
}

/// Reads a standard-monomial combination off onto basis coefficients.
pub(crate) fn readoff(
    basis: &GriffithsBasis,
    rho: &SuperPolynomial,
    coefficients: &mut [Scalar],
) -> Result<(), CohomologyError> {
    for (m, c) in rho.terms() {
        match basis.index_of(m) {
            Some(idx) => coefficients[idx] += c.clone(),
            None => {
                return Err(CohomologyError::Internal(format!(
                    "normal form contains non-basis monomial {m:?}"
                )))
            }
        }
    }
    Ok(())
}

/// Quantum-corrected reduction of a ghost-0 element to the Griffiths basis,
/// with an exact certificate. Charge components away from the background
/// charge are K-exact and handled by the δ_R shortcut.
pub fn k_reduce(
    bv: &BVComplex,
    basis: &GriffithsBasis,
    u: &SuperPolynomial,
) -> Result<ReductionCertificate, CohomologyError> {
    if u.ghost() != Some(0) && !u.is_zero() {
        return Err(CohomologyError::NotGhostZero);
    }
    let mut coefficients = vec![Scalar::zero(); basis.dim()];
    let mut certificate = SuperPolynomial::zero();

    let mut main_part = u.clone();
    if let Some(h) = &bv.hypersurface {
        let c_x = h.background_charge;
        let mut slice = SuperPolynomial::zero();
        for (charge, component) in u.charge_components(&bv.vars) {
            if charge == c_x {
                slice = &slice + &component;
            } else {
                // ghost-0 components are K-closed, so K(R·u_c) = (c−c_X)·u_c
                let factor = Scalar::one() / scalar::int(charge - c_x);
                certificate = &certificate + &(&bv.r_element() * &component).scale(&factor);
            }
        }
        main_part = slice;
    }

    let mut r = main_part;
    let mut rounds = 0usize;
    let mut measure = progress_measure(bv, &r);
    while !r.is_zero() {
        let (lambda, rho) = division_round(bv, basis, &r)?;
        readoff(basis, &rho, &mut coefficients)?;
        certificate = &certificate + &lambda;
        r = -&bv.apply_delta(&lambda);
        if !r.is_zero() {
            let next = progress_measure(bv, &r);
            if next >= measure {
                return Err(CohomologyError::NoProgress);
            }
            measure = next;
        }
        rounds += 1;
        if rounds > 10_000 {
            return Err(CohomologyError::NoProgress);
        }
    }
    Ok(ReductionCertificate { coefficients, certificate })
}

fn progress_measure(bv: &BVComplex, r: &SuperPolynomial) -> i64 {
    if bv.hypersurface.is_some() {
        r.max_weight(&bv.vars)
    } else {
        r.max_even_degree() as i64
    }
}

/// Classical Griffiths–Dwork reduction of F·Ω/G^k on rational-form data (no
/// y, no η): divide F by the x-Jacobian ideal, lower the pole order with the
/// divergence of the cofactors, iterate, then apply the J′ normalization
/// (−1)^{k−1}(k−1)! so the output is expressed on the same basis classes as
/// `k_reduce`.
pub fn gd_reduce_oracle(
    bv: &BVComplex,
    basis: &GriffithsBasis,
    f: &SuperPolynomial,
    k: u32,
) -> Result<Vec<Scalar>, CohomologyError> {
    let h = bv
        .hypersurface
        .as_ref()
        .ok_or_else(|| CohomologyError::Internal("oracle needs hypersurface mode".into()))?;
    let ne = bv.num_even();
    if !f.is_zero() {
        let deg = f.max_even_degree();
        let homogeneous = f.is_even()
            && f.terms().all(|(m, _)| m.even[0] == 0 && m.even_degree() == deg);
        if !homogeneous || deg as i64 + h.n as i64 + 1 != (k as i64) * (h.d as i64) {
            return Err(CohomologyError::DegreeMismatch { deg_f: f.max_even_degree(), k });
        }
    }
    let mut coefficients = vec![Scalar::zero(); basis.dim()];
    // layers[j] is the numerator at pole order j+1
    let mut current = f.clone();
    let mut pole = k;
    while pole >= 1 && !current.is_zero() {
        if pole == 1 {
            // degree d−(n+1) < d−1: nothing divides; read off directly
            for (m, c) in current.terms() {
                let idx = basis.index_of(m).ok_or_else(|| {
                    CohomologyError::Internal("pole-1 layer is not standard".into())
                })?;
                // layer at pole order 1 is block 0 with J' factor (−1)^0·0! = 1
                coefficients[idx] += c.clone() * j_prime_ratio(k, 0);
            }
            break;
        }
        let div = basis.gb.normal_form_with_quotients(&current);
        // remainder layer stays at this pole order: block (pole−1) classes
        for (m, c) in div.remainder.terms() {
            let mut full = m.clone();
            full.even[0] = pole - 1;
            let idx = basis.index_of(&full).ok_or_else(|| {
                CohomologyError::Internal("remainder layer is not standard".into())
            })?;
            coefficients[idx] += c.clone() * j_prime_ratio(k, pole - 1);
        }
        // F/G^k ~ (Σ_i ∂A_i/∂x_i)/((k−1)·G^{k−1}) modulo exact forms
        let mut divergence = SuperPolynomial::zero();
        for (j, a) in div.quotients.iter().enumerate() {
            divergence = &divergence + &a.even_derivative(j + 1);
        }
        current = divergence.scale(&(Scalar::one() / scalar::int((pole - 1) as i64)));
        pole -= 1;
        let _ = ne;
    }
    Ok(coefficients)
}

/// (−1)^{k−1}(k−1)! / ((−1)^j j!) — the factor translating a raw pole-layer
/// coefficient at pole order j+1 into the coefficient on the class of
/// y^j·F_{[j]a} under J′.
fn j_prime_ratio(k: u32, j: u32) -> Scalar {
    let sign = if (k as i64 - 1 - j as i64) % 2 == 0 { 1 } else { -1 };
    scalar::int(sign) * scalar::factorial((k - 1) as u64) / scalar::factorial(j as u64)
}

/// The residue pairing ∮(u·v): extract the ghost-0, y^{n−1}, charge-2c_X
/// component of the product and take its Grothendieck residue against the
/// x-Jacobian ideal. Normalization: Res(Hessian of G) = Milnor number
/// (Scheja–Storch convention); the constants relating ∮ to the geometric
/// cup product are absorbed here and not separately asserted.
#[derive(Debug, Clone)]
pub struct ResiduePairing {
    socle: Monomial,
    socle_scale: Scalar,
    required_x_degree: i64,
}

impl ResiduePairing {
    pub fn new(bv: &BVComplex, basis: &GriffithsBasis) -> Result<Self, CohomologyError> {
        let h = bv
            .hypersurface
            .as_ref()
            .ok_or_else(|| CohomologyError::Internal("∮ needs hypersurface mode".into()))?;
        let ne = bv.num_even();
        let x_vars: Vec<usize> = (1..ne).collect();
        let socle_degree = (h.n as i64 + 1) * (h.d as i64 - 2);
        if socle_degree < 0 {
            return Err(CohomologyError::Internal("degree too small for a socle".into()));
        }
        let socle_monos =
            basis.gb.standard_monomials_of_degree(ne, &x_vars, socle_degree as u32);
        if socle_monos.len() != 1 {
            return Err(CohomologyError::Internal(format!(
                "socle dimension {} ≠ 1",
                socle_monos.len()
            )));
        }
        let socle = socle_monos.into_iter().next().unwrap();
        let milnor = scalar::int(basis.gb.all_standard_monomials(ne, &x_vars)?.len() as i64);
        // det of the Hessian matrix ∂²G/∂x_i∂x_j
        let size = h.n + 1;
        let mut hess = vec![vec![SuperPolynomial::zero(); size]; size];
        for i in 0..size {
            for j in 0..size {
                hess[i][j] = h.g.even_derivative(i + 1).even_derivative(j + 1);
            }
        }
        let det = determinant(&hess);
        let det_nf = basis.gb.normal_form(&det);
        let socle_coeff = det_nf.coefficient(&socle);
        if socle_coeff.is_zero() {
            return Err(CohomologyError::Internal(
                "Hessian residue vanished; cannot normalize".into(),
            ));
        }
        let required_x_degree = 2 * h.background_charge + (h.d as i64) * (h.n as i64 - 1);
        Ok(ResiduePairing {
            socle,
            socle_scale: milnor / socle_coeff,
            required_x_degree,
        })
    }

    /// Grothendieck residue of an x-polynomial against the Jacobian ideal.
    pub fn residue(&self, basis: &GriffithsBasis, hx: &SuperPolynomial) -> Scalar {
        let nf = basis.gb.normal_form(hx);
        nf.coefficient(&self.socle) * self.socle_scale.clone()
    }

    /// ∮(u·v).
    pub fn pair(
        &self,
        bv: &BVComplex,
        basis: &GriffithsBasis,
        u: &SuperPolynomial,
        v: &SuperPolynomial,
    ) -> Scalar {
        let h = bv.hypersurface.as_ref().expect("∮ needs hypersurface mode");
        let product = u * v;
        let ghost0 = product.ghost_component(0);
        let layer = ghost0.y_coefficient(h.n as u32 - 1);
        // keep only the charge-2c_X slice (weight already fixed to n−1)
        let mut filtered = SuperPolynomial::zero();
        for (m, c) in layer.terms() {
            if m.even_degree() as i64 == self.required_x_degree {
                filtered.add_term(m.clone(), c.clone());
            }
        }
        if filtered.is_zero() {
            return Scalar::zero();
        }
        self.residue(basis, &filtered)
    }

    /// Gram matrix of ∮ on the basis.
    pub fn gram(&self, bv: &BVComplex, basis: &GriffithsBasis) -> Vec<Vec<Scalar>> {
        (0..basis.dim())
            .map(|i| {
                (0..basis.dim())
                    .map(|j| self.pair(bv, basis, &basis.reps[i], &basis.reps[j]))
                    .collect()
            })
            .collect()
    }
}

fn determinant(m: &[Vec<SuperPolynomial>]) -> SuperPolynomial {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = SuperPolynomial::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<SuperPolynomial>> = (1..n)
            .map(|i| {
                (0..n)
                    .filter(|&c| c != j)
                    .map(|c| m[i][c].clone())
                    .collect()
            })
            .collect();
        let term = &m[0][j] * &determinant(&minor);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Exact rational Gaussian elimination; returns the inverse if square and
/// nonsingular. Used for Gram nondegeneracy and frame solves.
pub fn invert_matrix(m: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = m.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let mut a: Vec<Vec<Scalar>> = m.to_vec();
    let mut inv: Vec<Vec<Scalar>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = a[col][j].clone() / p.clone();
            inv[col][j] = inv[col][j].clone() / p.clone();
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let av = a[col][j].clone();
                    let iv = inv[col][j].clone();
                    a[r][j] = a[r][j].clone() - f.clone() * av;
                    inv[r][j] = inv[r][j].clone() - f.clone() * iv;
                }
            }
        }
    }
    Some(inv)
}

/// Solves M·x = b exactly (square M). `None` when singular/inconsistent.
pub fn solve_linear(m: &[Vec<Scalar>], b: &[Scalar]) -> Option<Vec<Scalar>> {
    let inv = invert_matrix(m)?;
    Some(
        (0..m.len())
            .map(|i| {
                (0..m.len())
                    .map(|j| inv[i][j].clone() * b[j].clone())
                    .fold(Scalar::zero(), |acc, x| acc + x)
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::Vars;
    use crate::parse::parse_polynomial;
    use crate::scalar::{int, ratio};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fermat(n: usize, d: u32) -> BVComplex {
        let vars = Vars::hypersurface(n, d);
        let text: Vec<String> = (0..=n).map(|i| format!("x{i}^{d}")).collect();
        let g = parse_polynomial(&text.join("+"), &vars).unwrap();
        BVComplex::hypersurface(g, n, d).unwrap()
    }

    fn toy(potential: &str) -> BVComplex {
        let vars = Vars::generic(&["x"]);
        let s = parse_polynomial(potential, &vars).unwrap();
        BVComplex::generic(s, vars).unwrap()
    }

    #[test]
    fn fermat_cubic_basis() {
        let bv = fermat(2, 3);
        let basis = GriffithsBasis::new(&bv).unwrap();
        assert_eq!(basis.block_dims(), vec![1, 1]);
        assert_eq!(basis.reps[0].display(&bv.vars), "1");
        assert_eq!(basis.reps[1].display(&bv.vars), "y*x0*x1*x2");
    }

    #[test]
    fn fermat_quartic_curve_basis() {
        let bv = fermat(2, 4);
        let basis = GriffithsBasis::new(&bv).unwrap();
        assert_eq!(basis.block_dims(), vec![3, 3]); // genus 3 curve
    }

    #[test]
    fn toy_basis_etoy() {
        let bv = toy("-x^4");
        let basis = GriffithsBasis::new(&bv).unwrap();
        let names: Vec<String> = basis.reps.iter().map(|r| r.display(&bv.vars)).collect();
        assert_eq!(names, vec!["1", "x", "x^2"]);
    }

    #[test]
    fn toy_reductions() {
        let bv = toy("-x^4");
        let basis = GriffithsBasis::new(&bv).unwrap();
        let x4 = parse_polynomial("x^4", &bv.vars).unwrap();
        let red = k_reduce(&bv, &basis, &x4).unwrap();
        assert_eq!(red.coefficients, vec![ratio(1, 4), int(0), int(0)]);
        assert_eq!(red.certificate, parse_polynomial("-1/4*x*eta", &bv.vars).unwrap());
        // x^6 ↦ (3/4)·x²
        let x6 = parse_polynomial("x^6", &bv.vars).unwrap();
        let red = k_reduce(&bv, &basis, &x6).unwrap();
        assert_eq!(red.coefficients, vec![int(0), int(0), ratio(3, 4)]);
        // certificate soundness
        let recon = &basis.reps[2].scale(&ratio(3, 4)) + &bv.apply_k(&red.certificate);
        assert_eq!(recon, x6);
    }

    #[test]
    fn gaussian_reduction_double_factorial() {
        let bv = toy("-1/2*x^2");
        let basis = GriffithsBasis::new(&bv).unwrap();
        assert_eq!(basis.dim(), 1);
        for k in 1..=8u32 {
            let p = parse_polynomial(&format!("x^{}", 2 * k), &bv.vars).unwrap();
            let red = k_reduce(&bv, &basis, &p).unwrap();
            assert_eq!(red.coefficients[0], crate::scalar::double_factorial(2 * k as u64 - 1));
            let odd = parse_polynomial(&format!("x^{}", 2 * k - 1), &bv.vars).unwrap();
            let red = k_reduce(&bv, &basis, &odd).unwrap();
            assert!(red.coefficients[0].is_zero());
        }
    }

    #[test]
    fn fermat_cubic_two_step_reduction() {
        let bv = fermat(2, 3);
        let basis = GriffithsBasis::new(&bv).unwrap();
        let u = parse_polynomial("y^2*x0^3*x1^3", &bv.vars).unwrap();
        let red = k_reduce(&bv, &basis, &u).unwrap();
        assert_eq!(red.coefficients, vec![ratio(1, 9), int(0)]);
        let recon = &basis.reps[0].scale(&ratio(1, 9)) + &bv.apply_k(&red.certificate);
        assert_eq!(recon, u);
    }

    #[test]
    fn charge_mismatch_is_exact() {
        let bv = fermat(2, 3);
        let basis = GriffithsBasis::new(&bv).unwrap();
        // x0 has charge 1 ≠ c_X = 0: reduces to zero with explicit certificate
        let x0 = SuperPolynomial::even_var(bv.num_even(), 1);
        let red = k_reduce(&bv, &basis, &x0).unwrap();
        assert!(red.coefficients.iter().all(|c| c.is_zero()));
        assert_eq!(bv.apply_k(&red.certificate), x0);
    }

    #[test]
    fn oracle_examples() {
        let bv = fermat(2, 3);
        let basis = GriffithsBasis::new(&bv).unwrap();
        // F = x0²x1²x2², k = 3: exact form, reduces to 0
        let f = parse_polynomial("x0^2*x1^2*x2^2", &bv.vars).unwrap();
        let c = gd_reduce_oracle(&bv, &basis, &f, 3).unwrap();
        assert!(c.iter().all(|x| x.is_zero()), "{c:?}");
        // F = x0x1x2, k = 2: already standard, coefficient 1 on block 1
        let f = parse_polynomial("x0*x1*x2", &bv.vars).unwrap();
        let c = gd_reduce_oracle(&bv, &basis, &f, 2).unwrap();
        assert_eq!(c, vec![int(0), int(1)]);
        // F = x0³x1³, k = 3 matches k_reduce(y²x0³x1³) = 1/9 on block 0
        let f = parse_polynomial("x0^3*x1^3", &bv.vars).unwrap();
        let c = gd_reduce_oracle(&bv, &basis, &f, 3).unwrap();
        assert_eq!(c, vec![ratio(1, 9), int(0)]);
    }

    #[test]
    fn oracle_agrees_with_k_reduce_randomized() {
        let bv = fermat(2, 3);
        let basis = GriffithsBasis::new(&bv).unwrap();
        let ne = bv.num_even();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..30 {
            let k = rng.gen_range(1..=3u32);
            let deg = (k * 3) as i64 - 3;
            let monos = crate::monomial::monomials_of_degree(ne, &[1, 2, 3], deg as u32);
            let mut f = SuperPolynomial::zero();
            for m in &monos {
                f.add_term(m.clone(), int(rng.gen_range(-3..=3)));
            }
            if f.is_zero() {
                continue;
            }
            let oracle = gd_reduce_oracle(&bv, &basis, &f, k).unwrap();
            let mut y_pow = Monomial::one(ne);
            y_pow.even[0] = k - 1;
            let u = f.mul_scalar_term(&y_pow, &Scalar::one());
            let primary = k_reduce(&bv, &basis, &u).unwrap();
            assert_eq!(oracle, primary.coefficients, "k={k} f={}", f.display(&bv.vars));
        }
    }

    #[test]
    fn residue_pairing_values() {
        let bv = fermat(2, 3);
        let basis = GriffithsBasis::new(&bv).unwrap();
        let pairing = ResiduePairing::new(&bv, &basis).unwrap();
        let one = SuperPolynomial::one(bv.num_even());
        // ⟨1,1⟩ = 0 by weight concentration
        assert!(pairing.pair(&bv, &basis, &one, &one).is_zero());
        // ⟨1, y·x0x1x2⟩ = 1/27
        assert_eq!(pairing.pair(&bv, &basis, &one, &basis.reps[1]), ratio(1, 27));
        // Gram matrix is antidiagonal and invertible
        let gram = pairing.gram(&bv, &basis);
        assert!(gram[0][0].is_zero() && gram[1][1].is_zero());
        assert_eq!(gram[0][1], gram[1][0]);
        assert!(invert_matrix(&gram).is_some());
    }

    #[test]
    fn residue_vanishes_on_k_images() {
        let bv = fermat(2, 3);
        let basis = GriffithsBasis::new(&bv).unwrap();
        let pairing = ResiduePairing::new(&bv, &basis).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..40 {
            let lam = bv.random_tri_homogeneous(&mut rng);
            let v = bv.random_tri_homogeneous(&mut rng);
            let ku = bv.apply_k(&lam);
            assert!(pairing.pair(&bv, &basis, &ku, &v).is_zero(), "∮K(u)·v = 0");
            let l2 = bv.bracket_l2(&lam, &v);
            let one = SuperPolynomial::one(bv.num_even());
            assert!(pairing.pair(&bv, &basis, &l2, &one).is_zero(), "∮ℓ₂(u,v) = 0");
        }
    }
}
