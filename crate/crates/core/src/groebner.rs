//! Groebner bases over the even subring with cofactor tracking.
//!
//! Everything here runs on even polynomials with exact rational
//! coefficients. Cofactor rows are mandatory: the reduction algorithms
//! downstream consume the certificate `g_j = Σ_i c_{j,i}·gen_i`, not just
//! ideal membership.

use crate::monomial::{monomials_of_degree, Monomial, MonomialOrder, Vars};
use crate::poly::SuperPolynomial;
use crate::scalar::Scalar;
use num::One;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GroebnerError {
    #[error("generator {index} is not an even polynomial")]
    OddGenerator { index: usize },
    #[error("generator {index} is zero")]
    ZeroGenerator { index: usize },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("ideal is not zero-dimensional in the variables {vars:?}")]
    NotZeroDimensional { vars: Vec<usize> },
}

/// A reduced Groebner basis together with, for each basis element, its
/// expression in the original generators.
#[derive(Debug, Clone)]
pub struct GroebnerBasisWithCofactors {
    pub generators: Vec<SuperPolynomial>,
    pub basis: Vec<SuperPolynomial>,
    /// `cofactors[j][i]` multiplies `generators[i]` in the expansion of
    /// `basis[j]`.
    pub cofactors: Vec<Vec<SuperPolynomial>>,
    pub order: MonomialOrder,
}

/// Result of dividing `f` by a basis: `f = Σ quotients[i]·generators[i] +
/// remainder`, with no remainder monomial divisible by a basis leading term.
#[derive(Debug, Clone)]
pub struct DivisionResult {
    pub quotients: Vec<SuperPolynomial>,
    pub remainder: SuperPolynomial,
}

fn leading<'a>(p: &'a SuperPolynomial, order: &MonomialOrder) -> (&'a Monomial, &'a Scalar) {
    p.leading_term(order).expect("leading term of zero polynomial")
}

/// Divides `f` by the polynomials `divisors` (in order), tracking quotients
/// per divisor. Standard multivariate division: the leading reducible
/// monomial is always eliminated first.
fn divide_tracking(
    f: &SuperPolynomial,
    divisors: &[SuperPolynomial],
    order: &MonomialOrder,
) -> (Vec<SuperPolynomial>, SuperPolynomial) {
    let mut quotients = vec![SuperPolynomial::zero(); divisors.len()];
    let mut remainder = SuperPolynomial::zero();
    let mut work = f.clone();
    'outer: while !work.is_zero() {
        let (lm, lc) = {
            let (m, c) = leading(&work, order);
            (m.clone(), c.clone())
        };
        for (j, g) in divisors.iter().enumerate() {
            let (gm, gc) = leading(g, order);
            if gm.even_divides(&lm) {
                let qm = lm.even_quotient(gm);
                let qc = lc.clone() / gc.clone();
                quotients[j].add_term(qm.clone(), qc.clone());
                work = &work - &g.mul_scalar_term(&qm, &qc);
                continue 'outer;
            }
        }
        remainder.add_term(lm.clone(), lc.clone());
        work = &work - &SuperPolynomial::from_term(lm, lc);
    }
    (quotients, remainder)
}

impl GroebnerBasisWithCofactors {
    /// Buchberger's algorithm with the normal selection strategy (minimal
    /// lcm degree, ties by pair index) and the coprime-leading-term
    /// criterion, followed by interreduction to the reduced basis.
    pub fn buchberger(
        generators: &[SuperPolynomial],
        order: MonomialOrder,
    ) -> Result<Self, GroebnerError> {
        for (i, g) in generators.iter().enumerate() {
            if !g.is_even() {
                return Err(GroebnerError::OddGenerator { index: i });
            }
            if g.is_zero() {
                return Err(GroebnerError::ZeroGenerator { index: i });
            }
        }
        let m = generators.len();
        // working basis, each with a cofactor row over the generators
        let mut basis: Vec<SuperPolynomial> = Vec::new();
        let mut rows: Vec<Vec<SuperPolynomial>> = Vec::new();
        for (i, g) in generators.iter().enumerate() {
            let mut row = vec![SuperPolynomial::zero(); m];
            let n = g.terms().next().map(|(mm, _)| mm.even.len()).unwrap_or(0);
            row[i] = SuperPolynomial::one(n);
            // normalize monic
            let (_, lc) = leading(g, &order);
            let inv = Scalar::one() / lc.clone();
            basis.push(g.scale(&inv));
            rows.push(row.into_iter().map(|r| r.scale(&inv)).collect());
        }

        let mut pairs: Vec<(usize, usize)> =
            (0..basis.len()).flat_map(|i| (0..i).map(move |j| (j, i))).collect();

        while !pairs.is_empty() {
            // normal strategy: minimal lcm total degree, ties by index
            let (pos, &(i, j)) = pairs
                .iter()
                .enumerate()
                .min_by_key(|(_, &(i, j))| {
                    let lcm = leading(&basis[i], &order).0.even_lcm(leading(&basis[j], &order).0);
                    (lcm.even_degree(), i, j)
                })
                .unwrap();
            pairs.swap_remove(pos);

            let (lmi, _) = leading(&basis[i], &order);
            let (lmj, _) = leading(&basis[j], &order);
            let lcm = lmi.even_lcm(lmj);
            // product criterion
            if lcm.even_degree() == lmi.even_degree() + lmj.even_degree() {
                continue;
            }
            let qi = lcm.even_quotient(lmi);
            let qj = lcm.even_quotient(lmj);
            let spoly = &basis[i].mul_scalar_term(&qi, &Scalar::one())
                - &basis[j].mul_scalar_term(&qj, &Scalar::one());
            let mut srow: Vec<SuperPolynomial> = (0..m)
                .map(|k| {
                    &rows[i][k].mul_scalar_term(&qi, &Scalar::one())
                        - &rows[j][k].mul_scalar_term(&qj, &Scalar::one())
                })
                .collect();

            let (quots, rem) = divide_tracking(&spoly, &basis, &order);
            if rem.is_zero() {
                continue;
            }
            for (k, q) in quots.iter().enumerate() {
                if !q.is_zero() {
                    for t in 0..m {
                        srow[t] = &srow[t] - &(q * &rows[k][t]);
                    }
                }
            }
            let (_, lc) = leading(&rem, &order);
            let inv = Scalar::one() / lc.clone();
            let new_poly = rem.scale(&inv);
            let new_row: Vec<SuperPolynomial> = srow.iter().map(|r| r.scale(&inv)).collect();
            basis.push(new_poly);
            rows.push(new_row);
            let new_idx = basis.len() - 1;
            pairs.extend((0..new_idx).map(|k| (k, new_idx)));
        }

        // minimal basis: process by ascending leading term, keeping an
        // element only when no kept element's LT divides its LT
        let mut by_lt: Vec<usize> = (0..basis.len()).collect();
        by_lt.sort_by(|&a, &b| order.cmp(leading(&basis[a], &order).0, leading(&basis[b], &order).0));
        let mut kept: Vec<usize> = Vec::new();
        for &i in &by_lt {
            let lmi = leading(&basis[i], &order).0;
            if kept.iter().all(|&k| !leading(&basis[k], &order).0.even_divides(lmi)) {
                kept.push(i);
            }
        }
        let mut min_basis: Vec<SuperPolynomial> = kept.iter().map(|&i| basis[i].clone()).collect();
        let mut min_rows: Vec<Vec<SuperPolynomial>> = kept.iter().map(|&i| rows[i].clone()).collect();

        // tail reduction: reduce each element modulo the others
        for i in 0..min_basis.len() {
            let others: Vec<SuperPolynomial> = min_basis
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, p)| p.clone())
                .collect();
            let other_rows: Vec<Vec<SuperPolynomial>> = min_rows
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, r)| r.clone())
                .collect();
            let (quots, rem) = divide_tracking(&min_basis[i], &others, &order);
            if rem == min_basis[i] {
                continue;
            }
            let mut row = min_rows[i].clone();
            for (k, q) in quots.iter().enumerate() {
                if !q.is_zero() {
                    for t in 0..m {
                        row[t] = &row[t] - &(q * &other_rows[k][t]);
                    }
                }
            }
            let (_, lc) = leading(&rem, &order);
            let inv = Scalar::one() / lc.clone();
            min_basis[i] = rem.scale(&inv);
            min_rows[i] = row.into_iter().map(|r| r.scale(&inv)).collect();
        }

        // deterministic output order: by leading monomial, descending
        let mut idx: Vec<usize> = (0..min_basis.len()).collect();
        idx.sort_by(|&a, &b| order.cmp(leading(&min_basis[b], &order).0, leading(&min_basis[a], &order).0));
        let basis = idx.iter().map(|&i| min_basis[i].clone()).collect();
        let cofactors = idx.iter().map(|&i| min_rows[i].clone()).collect();

        Ok(GroebnerBasisWithCofactors { generators: generators.to_vec(), basis, cofactors, order })
    }

    /// Division with quotient certificates against the ORIGINAL generators.
    pub fn normal_form_with_quotients(&self, f: &SuperPolynomial) -> DivisionResult {
        let (basis_quots, remainder) = divide_tracking(f, &self.basis, &self.order);
        let m = self.generators.len();
        let mut quotients = vec![SuperPolynomial::zero(); m];
        for (j, q) in basis_quots.iter().enumerate() {
            if !q.is_zero() {
                for i in 0..m {
                    quotients[i] = &quotients[i] + &(q * &self.cofactors[j][i]);
                }
            }
        }
        DivisionResult { quotients, remainder }
    }

    /// Normal form only (no certificate).
    pub fn normal_form(&self, f: &SuperPolynomial) -> SuperPolynomial {
        divide_tracking(f, &self.basis, &self.order).1
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.basis.iter().map(|b| leading(b, &self.order).0.clone()).collect()
    }

    fn is_standard(&self, m: &Monomial) -> bool {
        self.basis.iter().all(|b| !leading(b, &self.order).0.even_divides(m))
    }

    /// Degree-homogeneous standard monomials in the given variables,
    /// descending in the structural order.
    pub fn standard_monomials_of_degree(
        &self,
        num_even: usize,
        var_indices: &[usize],
        degree: u32,
    ) -> Vec<Monomial> {
        monomials_of_degree(num_even, var_indices, degree)
            .into_iter()
            .filter(|m| self.is_standard(m))
            .collect()
    }

    /// All standard monomials in the given variables. Errors unless every
    /// variable has a pure power among the leading terms (the
    /// zero-dimensionality witness), which bounds the staircase.
    pub fn all_standard_monomials(
        &self,
        num_even: usize,
        var_indices: &[usize],
    ) -> Result<Vec<Monomial>, GroebnerError> {
        let lts = self.leading_monomials();
        let mut cap = 0u32;
        for &v in var_indices {
            let pure = lts
                .iter()
                .filter(|m| m.even_degree() == m.even[v])
                .map(|m| m.even[v])
                .min();
            match pure {
                Some(e) => cap = cap.max(e),
                None => {
                    return Err(GroebnerError::NotZeroDimensional { vars: var_indices.to_vec() })
                }
            }
        }
        let max_total = cap.saturating_mul(var_indices.len() as u32);
        let mut out = Vec::new();
        for deg in 0..=max_total {
            out.extend(self.standard_monomials_of_degree(num_even, var_indices, deg));
        }
        Ok(out)
    }
}

/// Smoothness of the projective hypersurface G = 0: true iff the ideal
/// (∂G/∂x_0, …, ∂G/∂x_n) contains a power of every coordinate. The witness
/// carries the exponents found.
pub fn smoothness_check(
    g: &SuperPolynomial,
    vars: &Vars,
    order: &MonomialOrder,
) -> Result<(bool, Vec<Option<u32>>), GroebnerError> {
    let (n, d) = vars.hypersurface.expect("smoothness check needs hypersurface mode");
    if !g.is_even() || g.is_zero() {
        return Err(GroebnerError::NotHomogeneous);
    }
    let homogeneous = g.terms().all(|(m, _)| m.even[0] == 0 && m.even_degree() == d);
    if !homogeneous {
        return Err(GroebnerError::NotHomogeneous);
    }
    let jac: Vec<SuperPolynomial> = (1..=n + 1).map(|i| g.even_derivative(i)).collect();
    if jac.iter().any(|p| p.is_zero()) {
        return Ok((false, vec![None; n + 1]));
    }
    let gb = GroebnerBasisWithCofactors::buchberger(&jac, order.clone())?;
    let lts = gb.leading_monomials();
    let mut witness = Vec::with_capacity(n + 1);
    for v in vars.x_indices() {
        let pure = lts
            .iter()
            .filter(|m| m.even_degree() == m.even[v])
            .map(|m| m.even[v])
            .min();
        witness.push(pure);
    }
    let smooth = witness.iter().all(|w| w.is_some());
    Ok((smooth, witness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use crate::scalar::{int, ratio};
    use num::Zero;

    fn setup(n: usize, d: u32) -> (Vars, MonomialOrder) {
        let vars = Vars::hypersurface(n, d);
        let order = MonomialOrder::default_for(&vars);
        (vars, order)
    }

    #[test]
    fn fermat_cubic_jacobian_monomial_ideal() {
        let (vars, order) = setup(2, 3);
        let gens: Vec<SuperPolynomial> = (1..=3)
            .map(|i| parse_polynomial(&format!("3*x{}^2", i - 1), &vars).unwrap())
            .collect();
        let gb = GroebnerBasisWithCofactors::buchberger(&gens, order).unwrap();
        assert_eq!(gb.basis.len(), 3);
        for (j, b) in gb.basis.iter().enumerate() {
            assert_eq!(b.num_terms(), 1);
            // cofactor row reproduces the basis element: 1/3 · 3x_i^2
            let mut acc = SuperPolynomial::zero();
            for (i, c) in gb.cofactors[j].iter().enumerate() {
                acc = &acc + &(c * &gb.generators[i]);
            }
            assert_eq!(&acc, b);
            let nonzero: Vec<_> = gb.cofactors[j].iter().filter(|c| !c.is_zero()).collect();
            assert_eq!(nonzero.len(), 1);
            assert_eq!(nonzero[0], &SuperPolynomial::constant(vars.num_even(), ratio(1, 3)));
        }
    }

    #[test]
    fn one_variable_euclidean() {
        let vars = Vars::generic(&["x"]);
        let order = MonomialOrder::default_for(&vars);
        let g1 = parse_polynomial("x^2-1", &vars).unwrap();
        let g2 = parse_polynomial("x^3-x", &vars).unwrap();
        let gb = GroebnerBasisWithCofactors::buchberger(&[g1.clone(), g2], order).unwrap();
        assert_eq!(gb.basis.len(), 1);
        assert_eq!(gb.basis[0], g1);
    }

    #[test]
    fn division_examples() {
        let (vars, order) = setup(2, 3);
        let gens: Vec<SuperPolynomial> = (0..3)
            .map(|i| parse_polynomial(&format!("3*x{i}^2"), &vars).unwrap())
            .collect();
        let gb = GroebnerBasisWithCofactors::buchberger(&gens, order).unwrap();

        // x0^2 x1 reduces to 0 with quotient row (x1/3, 0, 0)
        let f = parse_polynomial("x0^2*x1", &vars).unwrap();
        let div = gb.normal_form_with_quotients(&f);
        assert!(div.remainder.is_zero());
        assert_eq!(div.quotients[0], parse_polynomial("1/3*x1", &vars).unwrap());
        assert!(div.quotients[1].is_zero() && div.quotients[2].is_zero());

        // x0x1x2 is a standard monomial
        let f = parse_polynomial("x0*x1*x2", &vars).unwrap();
        let div = gb.normal_form_with_quotients(&f);
        assert_eq!(div.remainder, f);
        assert!(div.quotients.iter().all(|q| q.is_zero()));
    }

    #[test]
    fn certificate_soundness_randomized() {
        use rand::{Rng, SeedableRng};
        let (vars, order) = setup(2, 3);
        // a non-monomial ideal: Jacobian of the Hesse cubic at psi=2
        let g = parse_polynomial("x0^3+x1^3+x2^3-6*x0*x1*x2", &vars).unwrap();
        let gens: Vec<SuperPolynomial> = (1..=3).map(|i| g.even_derivative(i)).collect();
        let gb = GroebnerBasisWithCofactors::buchberger(&gens, order).unwrap();
        // each basis element reproduced by its cofactor row
        for (j, b) in gb.basis.iter().enumerate() {
            let mut acc = SuperPolynomial::zero();
            for (i, c) in gb.cofactors[j].iter().enumerate() {
                acc = &acc + &(c * &gb.generators[i]);
            }
            assert_eq!(&acc, b, "cofactor row {j}");
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..25 {
            let mut f = SuperPolynomial::zero();
            for _ in 0..4 {
                let mut m = Monomial::one(vars.num_even());
                for v in 1..4 {
                    m.even[v] = rng.gen_range(0..4);
                }
                f.add_term(m, int(rng.gen_range(-5..=5)));
            }
            let div = gb.normal_form_with_quotients(&f);
            let mut acc = div.remainder.clone();
            for (i, q) in div.quotients.iter().enumerate() {
                acc = &acc + &(q * &gb.generators[i]);
            }
            assert_eq!(acc, f, "division certificate must re-expand");
            // idempotence of the normal form
            assert_eq!(gb.normal_form(&div.remainder), div.remainder);
        }
    }

    /// Brute-force oracle: dimension of the degree-k slice of the quotient
    /// by exact Gaussian elimination on the coefficient space, independent
    /// of any Groebner machinery.
    fn quotient_slice_dim(
        gens: &[SuperPolynomial],
        vars: &Vars,
        x_vars: &[usize],
        degree: u32,
    ) -> usize {
        let monos = crate::monomial::monomials_of_degree(vars.num_even(), x_vars, degree);
        let index: std::collections::BTreeMap<&Monomial, usize> =
            monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
        // rows: m·gen for every monomial m with deg(m) + deg(gen) = degree
        let mut rows: Vec<Vec<crate::scalar::Scalar>> = Vec::new();
        for g in gens {
            let gdeg = g.max_even_degree();
            if gdeg > degree {
                continue;
            }
            for m in crate::monomial::monomials_of_degree(vars.num_even(), x_vars, degree - gdeg)
            {
                let prod = g.mul_scalar_term(&m, &crate::scalar::int(1));
                let mut row = vec![crate::scalar::int(0); monos.len()];
                for (pm, c) in prod.terms() {
                    row[index[pm]] = c.clone();
                }
                rows.push(row);
            }
        }
        // exact row reduction
        let mut rank = 0usize;
        let cols = monos.len();
        let mut pivot_row = 0usize;
        for col in 0..cols {
            if let Some(r) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) {
                rows.swap(pivot_row, r);
                let inv = crate::scalar::int(1) / rows[pivot_row][col].clone();
                for c in col..cols {
                    rows[pivot_row][c] = rows[pivot_row][c].clone() * inv.clone();
                }
                for r in 0..rows.len() {
                    if r != pivot_row && !rows[r][col].is_zero() {
                        let f = rows[r][col].clone();
                        for c in col..cols {
                            let v = rows[pivot_row][c].clone();
                            rows[r][c] = rows[r][c].clone() - f.clone() * v;
                        }
                    }
                }
                pivot_row += 1;
                rank += 1;
            }
        }
        cols - rank
    }

    #[test]
    fn hesse_standard_monomials_vs_brute_force() {
        let (vars, order) = setup(2, 3);
        // ψ = 1 member (singular: three nodes): the degree-3 quotient slice
        // has dimension 3, frozen from the brute-force oracle below
        let g = parse_polynomial("x0^3+x1^3+x2^3-3*x0*x1*x2", &vars).unwrap();
        let gens: Vec<SuperPolynomial> = (1..=3).map(|i| g.even_derivative(i)).collect();
        let gb = GroebnerBasisWithCofactors::buchberger(&gens, order.clone()).unwrap();
        let std3 = gb.standard_monomials_of_degree(vars.num_even(), &[1, 2, 3], 3);
        assert_eq!(std3.len(), 3);
        assert_eq!(quotient_slice_dim(&gens, &vars, &[1, 2, 3], 3), 3);
        // a smooth member (ψ = 2): Milnor algebra dimensions 1,3,3,1, so the
        // degree-3 slice is one-dimensional (the representative monomial is
        // a normalization of the fixed order)
        let g = parse_polynomial("x0^3+x1^3+x2^3-6*x0*x1*x2", &vars).unwrap();
        let gens: Vec<SuperPolynomial> = (1..=3).map(|i| g.even_derivative(i)).collect();
        let gb = GroebnerBasisWithCofactors::buchberger(&gens, order).unwrap();
        let std3 = gb.standard_monomials_of_degree(vars.num_even(), &[1, 2, 3], 3);
        assert_eq!(std3.len(), 1);
        assert_eq!(quotient_slice_dim(&gens, &vars, &[1, 2, 3], 3), 1);
        // and on the Fermat cubic across all block degrees
        let fermat = parse_polynomial("x0^3+x1^3+x2^3", &vars).unwrap();
        let fgens: Vec<SuperPolynomial> = (1..=3).map(|i| fermat.even_derivative(i)).collect();
        let fgb =
            GroebnerBasisWithCofactors::buchberger(&fgens, MonomialOrder::default_for(&vars))
                .unwrap();
        for deg in 0..=6u32 {
            assert_eq!(
                fgb.standard_monomials_of_degree(vars.num_even(), &[1, 2, 3], deg).len(),
                quotient_slice_dim(&fgens, &vars, &[1, 2, 3], deg),
                "degree {deg}"
            );
        }
    }

    #[test]
    fn euclidean_quotient_certificate() {
        // f = x³ against the single generator G' = −4x³
        let vars = Vars::generic(&["x"]);
        let order = MonomialOrder::default_for(&vars);
        let gen = parse_polynomial("-4*x^3", &vars).unwrap();
        let gb = GroebnerBasisWithCofactors::buchberger(&[gen], order).unwrap();
        let f = parse_polynomial("x^3", &vars).unwrap();
        let div = gb.normal_form_with_quotients(&f);
        assert!(div.remainder.is_zero());
        assert_eq!(div.quotients[0], SuperPolynomial::constant(1, ratio(-1, 4)));
    }

    #[test]
    fn membership_order_independent() {
        let (vars, _) = setup(2, 3);
        let g = parse_polynomial("x0^3+x1^3+x2^3-6*x0*x1*x2", &vars).unwrap();
        let gens: Vec<SuperPolynomial> = (1..=3).map(|i| g.even_derivative(i)).collect();
        let gb1 =
            GroebnerBasisWithCofactors::buchberger(&gens, MonomialOrder::default_for(&vars)).unwrap();
        let gb2 = GroebnerBasisWithCofactors::buchberger(&gens, MonomialOrder::lex_for(&vars)).unwrap();
        // an element of the ideal reduces to zero under both orders
        let member = &(&gens[0] * &gens[1]) + &gens[2].mul_scalar_term(
            &Monomial::even_var(vars.num_even(), 2, 2),
            &int(5),
        );
        assert!(gb1.normal_form(&member).is_zero());
        assert!(gb2.normal_form(&member).is_zero());
    }

    #[test]
    fn smoothness_examples() {
        let (vars, order) = setup(2, 3);
        let fermat = parse_polynomial("x0^3+x1^3+x2^3", &vars).unwrap();
        let (ok, witness) = smoothness_check(&fermat, &vars, &order).unwrap();
        assert!(ok);
        assert_eq!(witness, vec![Some(2), Some(2), Some(2)]);

        let triangle = parse_polynomial("x0*x1*x2", &vars).unwrap();
        let (ok, _) = smoothness_check(&triangle, &vars, &order).unwrap();
        assert!(!ok);

        // Hesse pencil at psi = 1 is singular
        let hesse1 = parse_polynomial("x0^3+x1^3+x2^3-3*x0*x1*x2", &vars).unwrap();
        let (ok, _) = smoothness_check(&hesse1, &vars, &order).unwrap();
        assert!(!ok);
    }
}
