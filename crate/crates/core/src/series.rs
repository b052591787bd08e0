//! Truncated formal power series in the deformation parameters t^α.
//!
//! Everything lives in k[t]/(t)^{N+1} with N the truncation order.
//! [`TruncatedSeries`] is scalar-valued (tensor entries); a
//! [`DeformationSeries`] carries a `SuperPolynomial` per t-multidegree
//! (elements of k[[t]] ⊗ 𝒜). All t-variables commute: deformation
//! directions here are even.

use crate::poly::SuperPolynomial;
use crate::scalar::{self, Scalar};
use num::{One, Zero};
use std::collections::BTreeMap;

/// Exponent vector over the t-variables.
pub type TMulti = Vec<u32>;

pub fn total_degree(mu: &TMulti) -> u32 {
    mu.iter().sum()
}

/// μ + ν componentwise.
pub fn multi_add(a: &TMulti, b: &TMulti) -> TMulti {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// All multidegrees over `nvars` variables of total degree ≤ order,
/// ascending (degree, then lexicographic).
pub fn multidegrees_up_to(nvars: usize, order: u32) -> Vec<TMulti> {
    let mut out = Vec::new();
    for deg in 0..=order {
        let mut current = vec![0u32; nvars];
        fn rec(pos: usize, remaining: u32, current: &mut TMulti, out: &mut Vec<TMulti>) {
            if pos + 1 == current.len() {
                current[pos] = remaining;
                out.push(current.clone());
                current[pos] = 0;
                return;
            }
            for e in (0..=remaining).rev() {
                current[pos] = e;
                rec(pos + 1, remaining - e, current, out);
            }
            current[pos] = 0;
        }
        if nvars == 0 {
            if deg == 0 {
                out.push(Vec::new());
            }
            continue;
        }
        rec(0, deg, &mut current, &mut out);
    }
    out.sort_by_key(|m| (total_degree(m), m.clone()));
    out
}

/// ∏ μ_i! — the multinomial normalizer between symmetric-tensor tables and
/// monomial coefficients.
pub fn multi_factorial(mu: &TMulti) -> Scalar {
    mu.iter().map(|&e| scalar::factorial(e as u64)).fold(Scalar::one(), |a, b| a * b)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    pub nvars: usize,
    pub order: u32,
    terms: BTreeMap<TMulti, Scalar>,
}

impl TruncatedSeries {
    pub fn zero(nvars: usize, order: u32) -> Self {
        TruncatedSeries { nvars, order, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, order: u32, c: Scalar) -> Self {
        let mut s = Self::zero(nvars, order);
        s.add_term(vec![0; nvars], c);
        s
    }

    pub fn one(nvars: usize, order: u32) -> Self {
        Self::constant(nvars, order, Scalar::one())
    }

    pub fn variable(nvars: usize, order: u32, idx: usize) -> Self {
        let mut s = Self::zero(nvars, order);
        let mut mu = vec![0; nvars];
        mu[idx] = 1;
        s.add_term(mu, Scalar::one());
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mu: TMulti, c: Scalar) {
        if c.is_zero() || total_degree(&mu) > self.order {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mu) {
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

    pub fn coefficient(&self, mu: &TMulti) -> Scalar {
        self.terms.get(mu).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TMulti, &Scalar)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (mu, c) in &other.terms {
            out.add_term(mu.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (mu, c) in &other.terms {
            out.add_term(mu.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars, self.order);
        }
        TruncatedSeries {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a.clone() * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars, self.order.min(other.order));
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(multi_add(m1, m2), c1.clone() * c2.clone());
            }
        }
        out
    }

    /// ∂/∂t^idx.
    pub fn derivative(&self, idx: usize) -> Self {
        let mut out = Self::zero(self.nvars, self.order);
        for (mu, c) in &self.terms {
            if mu[idx] > 0 {
                let mut nu = mu.clone();
                nu[idx] -= 1;
                out.add_term(nu, c.clone() * scalar::int(mu[idx] as i64));
            }
        }
        out
    }

    /// Sets t^idx = 0 for every idx in `zeroed`.
    pub fn restrict(&self, zeroed: &[usize]) -> Self {
        let mut out = Self::zero(self.nvars, self.order);
        for (mu, c) in &self.terms {
            if zeroed.iter().all(|&i| mu[i] == 0) {
                out.add_term(mu.clone(), c.clone());
            }
        }
        out
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inverse(&self) -> Option<Self> {
        let c0 = self.coefficient(&vec![0; self.nvars]);
        if c0.is_zero() {
            return None;
        }
        // write self = c0(1 + N); inverse = (1/c0)·Σ (−N)^k
        let inv_c0 = Scalar::one() / c0.clone();
        let normalized = self.scale(&inv_c0);
        let mut n = normalized.clone();
        n.add_term(vec![0; self.nvars], -Scalar::one());
        let mut acc = Self::one(self.nvars, self.order);
        let mut pow = Self::one(self.nvars, self.order);
        for _ in 0..self.order {
            pow = pow.mul(&n.neg());
            if pow.is_zero() {
                break;
            }
            acc = acc.add(&pow);
        }
        Some(acc.scale(&inv_c0))
    }

    /// Truncate further to `order`.
    pub fn truncated(&self, order: u32) -> Self {
        let mut out = Self::zero(self.nvars, order);
        for (mu, c) in &self.terms {
            out.add_term(mu.clone(), c.clone());
        }
        out
    }
}

/// An element of k[[t]] ⊗ 𝒜 truncated at total t-degree `order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeformationSeries {
    pub nvars: usize,
    pub order: u32,
    pub num_even: usize,
    terms: BTreeMap<TMulti, SuperPolynomial>,
}

impl DeformationSeries {
    pub fn zero(nvars: usize, order: u32, num_even: usize) -> Self {
        DeformationSeries { nvars, order, num_even, terms: BTreeMap::new() }
    }

    pub fn from_constant(nvars: usize, order: u32, p: SuperPolynomial, num_even: usize) -> Self {
        let mut s = Self::zero(nvars, order, num_even);
        s.add_term(vec![0; nvars], p);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mu: TMulti, p: SuperPolynomial) {
        if p.is_zero() || total_degree(&mu) > self.order {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mu) {
            Entry::Vacant(e) => {
                e.insert(p);
            }
            Entry::Occupied(mut e) => {
                let sum = &*e.get() + &p;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn coefficient(&self, mu: &TMulti) -> SuperPolynomial {
        self.terms.get(mu).cloned().unwrap_or_else(SuperPolynomial::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TMulti, &SuperPolynomial)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (mu, p) in &other.terms {
            out.add_term(mu.clone(), p.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (mu, p) in &other.terms {
            out.add_term(mu.clone(), -p);
        }
        out
    }

    pub fn neg(&self) -> Self {
        DeformationSeries {
            nvars: self.nvars,
            order: self.order,
            num_even: self.num_even,
            terms: self.terms.iter().map(|(m, p)| (m.clone(), -p)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars, self.order.min(other.order), self.num_even);
        for (m1, p1) in &self.terms {
            for (m2, p2) in &other.terms {
                if total_degree(m1) + total_degree(m2) <= out.order {
                    out.add_term(multi_add(m1, m2), p1 * p2);
                }
            }
        }
        out
    }

    pub fn scale_scalar(&self, c: &Scalar) -> Self {
        DeformationSeries {
            nvars: self.nvars,
            order: self.order,
            num_even: self.num_even,
            terms: self.terms.iter().map(|(m, p)| (m.clone(), p.scale(c))).collect(),
        }
    }

    pub fn scale_series(&self, s: &TruncatedSeries) -> Self {
        let mut out = Self::zero(self.nvars, self.order, self.num_even);
        for (m1, p) in &self.terms {
            for (m2, c) in s.terms() {
                out.add_term(multi_add(m1, m2), p.scale(c));
            }
        }
        out
    }

    pub fn mul_poly(&self, p: &SuperPolynomial) -> Self {
        DeformationSeries {
            nvars: self.nvars,
            order: self.order,
            num_even: self.num_even,
            terms: self.terms.iter().map(|(m, q)| (m.clone(), q * p)).collect(),
        }
    }

    /// Applies a linear operator on 𝒜 to every t-coefficient.
    pub fn map_coefficients<F>(&self, f: F) -> Self
    where
        F: Fn(&SuperPolynomial) -> SuperPolynomial,
    {
        let mut out = Self::zero(self.nvars, self.order, self.num_even);
        for (mu, p) in &self.terms {
            out.add_term(mu.clone(), f(p));
        }
        out
    }

    /// ∂/∂t^idx.
    pub fn derivative(&self, idx: usize) -> Self {
        let mut out = Self::zero(self.nvars, self.order, self.num_even);
        for (mu, p) in &self.terms {
            if mu[idx] > 0 {
                let mut nu = mu.clone();
                nu[idx] -= 1;
                out.add_term(nu, p.scale(&scalar::int(mu[idx] as i64)));
            }
        }
        out
    }

    /// e^Γ − 1 = Σ_{k≥1} Γ^k/k! (finite: Γ has t-order ≥ 1).
    pub fn exp_minus_one(&self) -> Self {
        debug_assert!(self.coefficient(&vec![0; self.nvars]).is_zero());
        let mut acc = Self::zero(self.nvars, self.order, self.num_even);
        let mut pow = Self::from_constant(
            self.nvars,
            self.order,
            SuperPolynomial::one(self.num_even),
            self.num_even,
        );
        for k in 1..=self.order as u64 {
            pow = pow.mul(self);
            if pow.is_zero() {
                break;
            }
            acc = acc.add(&pow.scale_scalar(&(Scalar::one() / scalar::factorial(k))));
        }
        acc
    }

    /// Projects each coefficient onto a scalar series against a single
    /// monomial (used when the series is known to be scalar-valued).
    pub fn scalar_part(&self) -> Option<TruncatedSeries> {
        let one = crate::monomial::Monomial::one(self.num_even);
        let mut out = TruncatedSeries::zero(self.nvars, self.order);
        for (mu, p) in &self.terms {
            if p.num_terms() > 1 || p.terms().any(|(m, _)| m != &one) {
                return None;
            }
            out.add_term(mu.clone(), p.coefficient(&one));
        }
        Some(out)
    }

    /// Sets t^idx = 0 for every idx in `zeroed`.
    pub fn restrict(&self, zeroed: &[usize]) -> Self {
        let mut out = Self::zero(self.nvars, self.order, self.num_even);
        for (mu, p) in &self.terms {
            if zeroed.iter().all(|&i| mu[i] == 0) {
                out.add_term(mu.clone(), p.clone());
            }
        }
        out
    }
}
