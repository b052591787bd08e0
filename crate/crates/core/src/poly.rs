//! Sparse super-commutative polynomials with exact rational coefficients.
//!
//! Terms are kept in a `BTreeMap` keyed by the structural monomial order, so
//! iteration (and therefore printing, hashing, serialization) is
//! deterministic. No zero coefficient is ever stored.

use crate::monomial::{Grading, Monomial, MonomialOrder, Vars};
use crate::scalar::{self, Scalar};
use num::{One, Zero};
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SuperPolynomial {
    terms: BTreeMap<Monomial, Scalar>,
}

/// Koszul sign of multiplying the odd parts `a`·`b` into canonical
/// ascending order: (−1)^{#{(i,j) : i ∈ a, j ∈ b, i > j}}. Returns `None`
/// when the masks overlap (η² = 0).
fn odd_mul_sign(a: u32, b: u32) -> Option<i32> {
    if a & b != 0 {
        return None;
    }
    let mut inversions = 0u32;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        // bits of `a` strictly above j must move past η_j
        inversions += (a >> (j + 1)).count_ones();
        bb &= bb - 1;
    }
    Some(if inversions % 2 == 0 { 1 } else { -1 })
}

impl SuperPolynomial {
    pub fn zero() -> Self {
        SuperPolynomial { terms: BTreeMap::new() }
    }

    pub fn one(num_even: usize) -> Self {
        Self::from_term(Monomial::one(num_even), Scalar::one())
    }

    pub fn constant(num_even: usize, c: Scalar) -> Self {
        Self::from_term(Monomial::one(num_even), c)
    }

    pub fn from_term(m: Monomial, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        SuperPolynomial { terms }
    }

    pub fn even_var(num_even: usize, idx: usize) -> Self {
        Self::from_term(Monomial::even_var(num_even, idx, 1), Scalar::one())
    }

    pub fn odd_var(num_even: usize, idx: usize) -> Self {
        Self::from_term(Monomial::odd_var(num_even, idx), Scalar::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        SuperPolynomial {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a.clone() * c)).collect(),
        }
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|m| m.is_even())
    }

    /// Common ghost number, if ghost-homogeneous.
    pub fn ghost(&self) -> Option<i64> {
        let mut it = self.terms.keys();
        let g = it.next()?.ghost();
        it.all(|m| m.ghost() == g).then_some(g)
    }

    /// Common tri-grading in the hypersurface layout, if tri-homogeneous.
    pub fn grading_of(&self, vars: &Vars) -> Option<Grading> {
        let (_, d) = vars.hypersurface?;
        let mut it = self.terms.keys();
        let g = Grading::of_monomial(it.next()?, d);
        it.all(|m| Grading::of_monomial(m, d) == g).then_some(g)
    }

    /// Decomposition into tri-homogeneous components, ordered by grading.
    pub fn homogeneous_components(&self, vars: &Vars) -> Vec<(Grading, SuperPolynomial)> {
        let d = vars.hypersurface.map(|(_, d)| d).unwrap_or(0);
        let mut by_grading: BTreeMap<(i64, i64, i64), SuperPolynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let g = Grading::of_monomial(m, d);
            by_grading
                .entry((g.ghost, g.charge, g.weight))
                .or_insert_with(SuperPolynomial::zero)
                .add_term(m.clone(), c.clone());
        }
        by_grading
            .into_iter()
            .map(|((ghost, charge, weight), p)| (Grading { ghost, charge, weight }, p))
            .collect()
    }

    /// Component of fixed ghost number (by odd-factor count).
    pub fn ghost_component(&self, ghost: i64) -> SuperPolynomial {
        SuperPolynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.ghost() == ghost)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Splits by charge (hypersurface layout).
    pub fn charge_components(&self, vars: &Vars) -> Vec<(i64, SuperPolynomial)> {
        let (_, d) = vars.hypersurface.expect("charge needs hypersurface mode");
        let mut by_charge: BTreeMap<i64, SuperPolynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let ch = Grading::of_monomial(m, d).charge;
            by_charge.entry(ch).or_insert_with(SuperPolynomial::zero).add_term(m.clone(), c.clone());
        }
        by_charge.into_iter().collect()
    }

    /// Coefficient of y^k as a polynomial in the remaining even variables
    /// (hypersurface layout; only even terms contribute).
    pub fn y_coefficient(&self, k: u32) -> SuperPolynomial {
        let mut out = SuperPolynomial::zero();
        for (m, c) in &self.terms {
            if m.is_even() && m.even[0] == k {
                let mut m2 = m.clone();
                m2.even[0] = 0;
                out.add_term(m2, c.clone());
            }
        }
        out
    }

    pub fn max_even_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.even_degree()).max().unwrap_or(0)
    }

    /// Maximal weight over the terms (hypersurface layout).
    pub fn max_weight(&self, vars: &Vars) -> i64 {
        let d = vars.hypersurface.map(|(_, d)| d).unwrap_or(0);
        self.terms.keys().map(|m| Grading::of_monomial(m, d).weight).max().unwrap_or(0)
    }

    pub fn leading_term<'a>(&'a self, order: &MonomialOrder) -> Option<(&'a Monomial, &'a Scalar)> {
        self.terms.iter().max_by(|(a, _), (b, _)| order.cmp(a, b))
    }

    /// ∂/∂(even variable `idx`).
    pub fn even_derivative(&self, idx: usize) -> SuperPolynomial {
        let mut out = SuperPolynomial::zero();
        for (m, c) in &self.terms {
            let e = m.even[idx];
            if e > 0 {
                let mut m2 = m.clone();
                m2.even[idx] = e - 1;
                out.add_term(m2, c.clone() * scalar::int(e as i64));
            }
        }
        out
    }

    /// Left derivative ∂/∂(odd variable `idx`): η_idx is moved to the front
    /// past the lower-indexed odd factors and removed.
    pub fn odd_derivative(&self, idx: usize) -> SuperPolynomial {
        let bit = 1u32 << idx;
        let mut out = SuperPolynomial::zero();
        for (m, c) in &self.terms {
            if m.odd_mask & bit != 0 {
                let below = (m.odd_mask & (bit - 1)).count_ones();
                let sign = if below % 2 == 0 { Scalar::one() } else { -Scalar::one() };
                let mut m2 = m.clone();
                m2.odd_mask &= !bit;
                out.add_term(m2, c.clone() * sign);
            }
        }
        out
    }

    pub fn mul_scalar_term(&self, m: &Monomial, c: &Scalar) -> SuperPolynomial {
        let mut out = SuperPolynomial::zero();
        for (m1, c1) in &self.terms {
            if let Some(sign) = odd_mul_sign(m1.odd_mask, m.odd_mask) {
                let prod = Monomial { even: m1.even_mul(m), odd_mask: m1.odd_mask | m.odd_mask };
                out.add_term(prod, c1.clone() * c * scalar::int(sign as i64));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> SuperPolynomial {
        let n = self.terms.keys().next().map(|m| m.even.len()).unwrap_or(0);
        let mut acc = SuperPolynomial::one(n);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact division by the even variable `idx`; `None` if not divisible.
    pub fn div_even_var(&self, idx: usize) -> Option<SuperPolynomial> {
        let mut out = SuperPolynomial::zero();
        for (m, c) in &self.terms {
            if m.even[idx] == 0 {
                return None;
            }
            let mut m2 = m.clone();
            m2.even[idx] -= 1;
            out.add_term(m2, c.clone());
        }
        Some(out)
    }

    /// Exact division by an even polynomial; `None` when not exact.
    /// Used by the non-CY twist, where divisibility is structural.
    pub fn div_exact(&self, divisor: &SuperPolynomial, order: &MonomialOrder) -> Option<SuperPolynomial> {
        if divisor.is_zero() {
            return None;
        }
        let (dm, dc) = divisor.leading_term(order)?;
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut rem = self.clone();
        let mut quot = SuperPolynomial::zero();
        while !rem.is_zero() {
            let (lm, lc) = rem.leading_term(order).map(|(m, c)| (m.clone(), c.clone()))?;
            if !(dm.even_divides(&lm) && dm.odd_mask & lm.odd_mask == dm.odd_mask) {
                return None;
            }
            let qm = lm.even_quotient(&dm);
            let qm = Monomial { even: qm.even, odd_mask: lm.odd_mask & !dm.odd_mask };
            let qc = lc / dc.clone();
            quot.add_term(qm.clone(), qc.clone());
            rem = &rem - &divisor.mul_scalar_term(&qm, &qc);
        }
        Some(quot)
    }

    /// Canonical printer: terms in descending structural order, explicit
    /// `*`, `^` only for exponents ≥ 2.
    pub fn display(&self, vars: &Vars) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = scalar::is_negative(c);
            let abs = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            for (idx, &e) in m.even.iter().enumerate() {
                if e == 1 {
                    factors.push(vars.even_names[idx].clone());
                } else if e >= 2 {
                    factors.push(format!("{}^{}", vars.even_names[idx], e));
                }
            }
            for idx in 0..vars.num_odd() {
                if m.odd_mask & (1 << idx) != 0 {
                    factors.push(vars.odd_names[idx].clone());
                }
            }
            if factors.is_empty() {
                out.push_str(&scalar::to_string(&abs));
            } else {
                if !abs.is_one() {
                    out.push_str(&scalar::to_string(&abs));
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

impl Add for &SuperPolynomial {
    type Output = SuperPolynomial;
    fn add(self, rhs: &SuperPolynomial) -> SuperPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &SuperPolynomial {
    type Output = SuperPolynomial;
    fn sub(self, rhs: &SuperPolynomial) -> SuperPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &SuperPolynomial {
    type Output = SuperPolynomial;
    fn neg(self) -> SuperPolynomial {
        SuperPolynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Mul for &SuperPolynomial {
    type Output = SuperPolynomial;
    fn mul(self, rhs: &SuperPolynomial) -> SuperPolynomial {
        let mut out = SuperPolynomial::zero();
        for (m2, c2) in &rhs.terms {
            for (m1, c1) in &self.terms {
                if let Some(sign) = odd_mul_sign(m1.odd_mask, m2.odd_mask) {
                    let prod = Monomial { even: m1.even_mul(m2), odd_mask: m1.odd_mask | m2.odd_mask };
                    out.add_term(prod, c1.clone() * c2.clone() * scalar::int(sign as i64));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn vars() -> Vars {
        Vars::hypersurface(2, 3)
    }

    #[test]
    fn odd_anticommute_and_square() {
        let v = vars();
        let n = v.num_even();
        let e0 = SuperPolynomial::odd_var(n, 1); // eta0
        let e1 = SuperPolynomial::odd_var(n, 2); // eta1
        assert_eq!(&e0 * &e1, -&(&e1 * &e0));
        assert!((&e0 * &e0).is_zero());
    }

    #[test]
    fn even_part_commutative() {
        let v = vars();
        let n = v.num_even();
        let x0 = SuperPolynomial::even_var(n, 1);
        let y = SuperPolynomial::even_var(n, 0);
        let p = &(&x0 + &y) * &(&x0 - &y);
        let expected = &(&x0 * &x0) - &(&y * &y);
        assert_eq!(p, expected);
    }

    #[test]
    fn koszul_sign_three_factors() {
        // η1·(η0η2) = −η0η1η2 : η1 passes one lower factor
        let v = vars();
        let n = v.num_even();
        let e0 = SuperPolynomial::odd_var(n, 1);
        let e1 = SuperPolynomial::odd_var(n, 2);
        let e2 = SuperPolynomial::odd_var(n, 3);
        let lhs = &e1 * &(&e0 * &e2);
        let rhs = -&(&(&e0 * &e1) * &e2);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn display_forms() {
        let v = vars();
        let n = v.num_even();
        let x0 = SuperPolynomial::even_var(n, 1);
        let p = &(&x0 * &x0) - &SuperPolynomial::constant(n, int(2));
        assert_eq!(p.display(&v), "x0^2 - 2");
        assert_eq!(SuperPolynomial::zero().display(&v), "0");
    }

    #[test]
    fn odd_derivative_signs() {
        let v = vars();
        let n = v.num_even();
        let e0 = SuperPolynomial::odd_var(n, 1);
        let e1 = SuperPolynomial::odd_var(n, 2);
        let p = &e0 * &e1;
        // ∂/∂η0 (η0η1) = η1 ; ∂/∂η1 (η0η1) = −η0
        assert_eq!(p.odd_derivative(1), e1);
        assert_eq!(p.odd_derivative(2), -&e0);
    }
}
