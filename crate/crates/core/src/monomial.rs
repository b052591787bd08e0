//! Monomials of the super-commutative algebra k[y, x₀…x_n][η₋₁…η_n] (or a
//! generic k[q¹…q^m][η₁…η_m]), together with variable tables, monomial
//! orders on the even subring, and the tri-grading.

use serde::Serialize;
use std::cmp::Ordering;
use std::fmt;

/// Variable table. Even variables are polynomial generators of degree 0;
/// each odd variable squares to zero and has ghost number −1. In
/// hypersurface mode the layout is fixed: even = [y, x0, …, xn],
/// odd = [eta-1, eta0, …, etan], so even index i pairs with odd index i
/// under the operators Δ and K.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vars {
    pub even_names: Vec<String>,
    pub odd_names: Vec<String>,
    /// Hypersurface data (n, d) when this table is the Dwork layout.
    pub hypersurface: Option<(usize, u32)>,
}

impl Vars {
    /// The Dwork layout for a degree-d hypersurface in P^n.
    pub fn hypersurface(n: usize, d: u32) -> Self {
        let mut even_names = vec!["y".to_string()];
        let mut odd_names = vec!["eta-1".to_string()];
        for i in 0..=n {
            even_names.push(format!("x{i}"));
            odd_names.push(format!("eta{i}"));
        }
        Vars { even_names, odd_names, hypersurface: Some((n, d)) }
    }

    /// Generic layout over user-declared even variables; odd partners are
    /// named `eta` (single variable) or `eta_<name>`.
    pub fn generic(names: &[&str]) -> Self {
        let even_names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let odd_names = if names.len() == 1 {
            vec!["eta".to_string()]
        } else {
            names.iter().map(|s| format!("eta_{s}")).collect()
        };
        Vars { even_names, odd_names, hypersurface: None }
    }

    pub fn num_even(&self) -> usize {
        self.even_names.len()
    }

    pub fn num_odd(&self) -> usize {
        self.odd_names.len()
    }

    pub fn even_index(&self, name: &str) -> Option<usize> {
        self.even_names.iter().position(|v| v == name)
    }

    pub fn odd_index(&self, name: &str) -> Option<usize> {
        self.odd_names.iter().position(|v| v == name)
    }

    /// Indices of the projective coordinates x0..xn (hypersurface mode).
    pub fn x_indices(&self) -> std::ops::Range<usize> {
        debug_assert!(self.hypersurface.is_some());
        1..self.num_even()
    }
}

/// A single super-commutative monomial: even exponents plus a set of odd
/// generators. The odd mask is a bitset; bit i is the i-th odd variable in
/// the canonical order η₋₁ < η₀ < … < η_n, and all Koszul signs in the
/// crate are computed relative to that order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub even: Vec<u32>,
    pub odd_mask: u32,
}

impl Monomial {
    pub fn one(num_even: usize) -> Self {
        Monomial { even: vec![0; num_even], odd_mask: 0 }
    }

    pub fn even_var(num_even: usize, idx: usize, exp: u32) -> Self {
        let mut even = vec![0; num_even];
        even[idx] = exp;
        Monomial { even, odd_mask: 0 }
    }

    pub fn odd_var(num_even: usize, idx: usize) -> Self {
        Monomial { even: vec![0; num_even], odd_mask: 1 << idx }
    }

    pub fn is_one(&self) -> bool {
        self.odd_mask == 0 && self.even.iter().all(|&e| e == 0)
    }

    pub fn is_even(&self) -> bool {
        self.odd_mask == 0
    }

    pub fn even_degree(&self) -> u32 {
        self.even.iter().sum()
    }

    pub fn odd_count(&self) -> u32 {
        self.odd_mask.count_ones()
    }

    /// Ghost number: −(number of odd factors).
    pub fn ghost(&self) -> i64 {
        -(self.odd_count() as i64)
    }

    /// Even-part product (odd parts handled by the polynomial layer, which
    /// owns the Koszul sign).
    pub fn even_mul(&self, other: &Monomial) -> Vec<u32> {
        self.even.iter().zip(&other.even).map(|(a, b)| a + b).collect()
    }

    /// Whether `self`'s even part divides `other`'s even part.
    pub fn even_divides(&self, other: &Monomial) -> bool {
        self.even.iter().zip(&other.even).all(|(a, b)| a <= b)
    }

    pub fn even_quotient(&self, divisor: &Monomial) -> Monomial {
        debug_assert!(divisor.even_divides(self));
        Monomial {
            even: self.even.iter().zip(&divisor.even).map(|(a, b)| a - b).collect(),
            odd_mask: self.odd_mask,
        }
    }

    pub fn even_lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            even: self.even.iter().zip(&other.even).map(|(a, b)| *a.max(b)).collect(),
            odd_mask: 0,
        }
    }
}

/// Structural order used for deterministic sparse storage and printing:
/// graded, then lexicographic on the even exponents, then on the odd mask.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.even_degree()
            .cmp(&other.even_degree())
            .then_with(|| self.even.cmp(&other.even))
            .then_with(|| self.odd_mask.cmp(&other.odd_mask))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Monomial order on the even subring, with an explicit variable priority
/// sequence (highest first).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    /// Permutation of the even variable indices, highest priority first.
    pub priority: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OrderKind {
    GrevLex,
    Lex,
    /// Compares the total degree in the listed block (the weight-carrying
    /// variables placed first in `priority`) before falling back to grevlex.
    BlockWeightFirst,
}

impl MonomialOrder {
    /// The crate default: grevlex with x0 > x1 > … > xn > y. The Griffiths
    /// basis representatives are normalized to this choice.
    pub fn default_for(vars: &Vars) -> Self {
        let mut priority: Vec<usize> = Vec::with_capacity(vars.num_even());
        if vars.hypersurface.is_some() {
            priority.extend(1..vars.num_even());
            priority.push(0);
        } else {
            priority.extend(0..vars.num_even());
        }
        MonomialOrder { kind: OrderKind::GrevLex, priority }
    }

    pub fn lex_for(vars: &Vars) -> Self {
        let MonomialOrder { priority, .. } = Self::default_for(vars);
        MonomialOrder { kind: OrderKind::Lex, priority }
    }

    /// Compares even parts of two monomials. Odd parts are ignored; the
    /// Groebner layer only ever sees even polynomials.
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.kind {
            OrderKind::GrevLex => self.cmp_grevlex(&a.even, &b.even),
            OrderKind::Lex => self.cmp_lex(&a.even, &b.even),
            OrderKind::BlockWeightFirst => {
                let block = self.priority.first().copied().unwrap_or(0);
                a.even[block]
                    .cmp(&b.even[block])
                    .then_with(|| self.cmp_grevlex(&a.even, &b.even))
            }
        }
    }

    fn cmp_grevlex(&self, a: &[u32], b: &[u32]) -> Ordering {
        let da: u32 = a.iter().sum();
        let db: u32 = b.iter().sum();
        match da.cmp(&db) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for &v in self.priority.iter().rev() {
            match a[v].cmp(&b[v]) {
                Ordering::Equal => {}
                // grevlex: smaller exponent in the least significant
                // position wins
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
            }
        }
        Ordering::Equal
    }

    fn cmp_lex(&self, a: &[u32], b: &[u32]) -> Ordering {
        for &v in &self.priority {
            match a[v].cmp(&b[v]) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

/// The tri-grading (ghost, charge, weight) of a tri-homogeneous element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Grading {
    pub ghost: i64,
    pub charge: i64,
    pub weight: i64,
}

impl Grading {
    pub fn add(&self, other: &Grading) -> Grading {
        Grading {
            ghost: self.ghost + other.ghost,
            charge: self.charge + other.charge,
            weight: self.weight + other.weight,
        }
    }

    /// Grading of a monomial in the hypersurface layout: ch(y) = −d,
    /// ch(x_j) = 1, ch(η₋₁) = d, ch(η_j) = −1; wt(y) = 1, wt(η_j) = 1,
    /// everything else weight 0.
    pub fn of_monomial(m: &Monomial, d: u32) -> Grading {
        let d = d as i64;
        let y_exp = m.even[0] as i64;
        let x_deg: i64 = m.even[1..].iter().map(|&e| e as i64).sum();
        let eta_minus1 = (m.odd_mask & 1) as i64;
        let eta_rest = (m.odd_mask >> 1).count_ones() as i64;
        Grading {
            ghost: m.ghost(),
            charge: -d * y_exp + x_deg + d * eta_minus1 - eta_rest,
            weight: y_exp + eta_rest,
        }
    }
}

impl fmt::Display for Grading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(gh {}, ch {}, wt {})", self.ghost, self.charge, self.weight)
    }
}

/// All even monomials of the given total degree in the variables listed in
/// `var_indices`, descending in the structural order. Used for standard
/// monomial enumeration and brute-force test oracles.
pub fn monomials_of_degree(num_even: usize, var_indices: &[usize], degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = vec![0u32; num_even];
    fn rec(
        vars: &[usize],
        pos: usize,
        remaining: u32,
        current: &mut Vec<u32>,
        out: &mut Vec<Monomial>,
    ) {
        if pos + 1 == vars.len() {
            current[vars[pos]] = remaining;
            out.push(Monomial { even: current.clone(), odd_mask: 0 });
            current[vars[pos]] = 0;
            return;
        }
        for e in (0..=remaining).rev() {
            current[vars[pos]] = e;
            rec(vars, pos + 1, remaining - e, current, out);
        }
        current[vars[pos]] = 0;
    }
    if var_indices.is_empty() {
        if degree == 0 {
            out.push(Monomial::one(num_even));
        }
        return out;
    }
    rec(var_indices, 0, degree, &mut current, &mut out);
    out.sort();
    out.reverse();
    out
}
