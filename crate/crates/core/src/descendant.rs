//! Descendant machinery: ℓ_n of an operator, φ_n of a linear map, and
//! finite-order L∞ relation/morphism/composition checks over partitions of
//! {1..n} with Koszul signs.
//!
//! Two layers coexist. Closure-based `ell_n`/`phi_n` evaluate descendants of
//! a concrete operator on concrete algebra elements; the table layer
//! ([`MlMap`] over a [`GradedSpace`]) stores multilinear maps on a finite
//! basis and implements the partition identities verbatim, which is what the
//! property suites exercise.

use crate::poly::SuperPolynomial;
use crate::scalar::{self, Scalar};
use num::{One, Zero};
use std::collections::BTreeMap;

/// Ordered set partition of {0..n−1}: blocks ordered by minimum, elements
/// ascending.
pub type Partition = Vec<Vec<usize>>;

/// All set partitions of {0..n−1}.
pub fn partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current: Partition = Vec::new();
    fn rec(k: usize, n: usize, current: &mut Partition, out: &mut Vec<Partition>) {
        if k == n {
            out.push(current.clone());
            return;
        }
        for b in 0..current.len() {
            current[b].push(k);
            rec(k + 1, n, current, out);
            current[b].pop();
        }
        current.push(vec![k]);
        rec(k + 1, n, current, out);
        current.pop();
    }
    rec(0, n, &mut current, &mut out);
    out
}

/// Koszul sign of reordering x_0 ⊗ … ⊗ x_{n−1} into block order
/// x_{B_1} ⊗ x_{B_2} ⊗ …, given the degrees of the arguments.
pub fn partition_sign(pi: &Partition, degrees: &[i64]) -> i64 {
    let mut perm: Vec<usize> = Vec::with_capacity(degrees.len());
    for block in pi {
        perm.extend(block.iter().copied());
    }
    permutation_sign(&perm, degrees)
}

/// Koszul sign of the permutation placing original index perm[k] at
/// position k.
pub fn permutation_sign(perm: &[usize], degrees: &[i64]) -> i64 {
    let mut sign = 1i64;
    for a in 0..perm.len() {
        for b in (a + 1)..perm.len() {
            if perm[a] > perm[b] && degrees[perm[a]] % 2 != 0 && degrees[perm[b]] % 2 != 0 {
                sign = -sign;
            }
        }
    }
    sign
}

fn ghost_of(p: &SuperPolynomial) -> i64 {
    if p.is_zero() {
        return 0;
    }
    p.ghost().expect("descendant arguments must be ghost-homogeneous")
}

/// ℓ_n of a degree-1 operator with K(1) = 0, via the nested commutator
/// formula ℓ_n(x_1,…,x_n) = [[…[K, L_{x_1}],…], L_{x_n}](1).
pub fn ell_n<K>(op: &K, args: &[SuperPolynomial], num_even: usize) -> SuperPolynomial
where
    K: Fn(&SuperPolynomial) -> SuperPolynomial,
{
    fn nested<K>(op: &K, args: &[SuperPolynomial], v: &SuperPolynomial) -> SuperPolynomial
    where
        K: Fn(&SuperPolynomial) -> SuperPolynomial,
    {
        match args.split_last() {
            None => op(v),
            Some((last, rest)) => {
                let op_degree: i64 = 1 + rest.iter().map(|x| ghost_of(x)).sum::<i64>();
                let first = nested(op, rest, &(last * v));
                let second = last * &nested(op, rest, v);
                if (op_degree * ghost_of(last)) % 2 == 0 {
                    &first - &second
                } else {
                    &first + &second
                }
            }
        }
    }
    nested(op, args, &SuperPolynomial::one(num_even))
}

/// ℓ_n by the partition recursion: the unique solution of
/// K(x_1⋯x_n) = Σ ε(π,i)·x_{B_1}⋯ℓ(x_{B_i})⋯x_{B_{|π|}}, where all blocks
/// except B_i are singletons. Exponential; used as a cross-check oracle.
pub fn ell_n_partition<K>(op: &K, args: &[SuperPolynomial], num_even: usize) -> SuperPolynomial
where
    K: Fn(&SuperPolynomial) -> SuperPolynomial,
{
    let n = args.len();
    assert!(n >= 1);
    if n == 1 {
        return op(&args[0]);
    }
    let degrees: Vec<i64> = args.iter().map(ghost_of).collect();
    let mut product = SuperPolynomial::one(num_even);
    for a in args {
        product = &product * a;
    }
    let mut acc = op(&product);
    // subtract every term whose distinguished block is proper
    for pi in partitions(n) {
        for i in distinguished_blocks(&pi, n) {
            if pi[i].len() == n {
                continue; // the full block is the unknown being solved for
            }
            let eps = partition_sign(&pi, &degrees);
            let prefix_degree: i64 =
                pi[..i].iter().flat_map(|b| b.iter()).map(|&j| degrees[j]).sum();
            let sign = if prefix_degree % 2 == 0 { eps } else { -eps };
            let block_args: Vec<SuperPolynomial> =
                pi[i].iter().map(|&j| args[j].clone()).collect();
            let ell_val = ell_n_partition(op, &block_args, num_even);
            let mut term = SuperPolynomial::one(num_even);
            for (b, block) in pi.iter().enumerate() {
                if b == i {
                    term = &term * &ell_val;
                } else {
                    term = &term * &args[block[0]];
                }
            }
            acc = &acc - &term.scale(&scalar::int(sign));
        }
    }
    acc
}

/// φ_n of a linear map f into the ground field, by the partition recursion
/// f(x_1⋯x_n) = Σ_π ε(π)·φ(x_{B_1})⋯φ(x_{B_|π|}).
pub fn phi_n<F>(f: &F, args: &[SuperPolynomial], num_even: usize) -> Scalar
where
    F: Fn(&SuperPolynomial) -> Scalar,
{
    let n = args.len();
    assert!(n >= 1);
    if n == 1 {
        return f(&args[0]);
    }
    let degrees: Vec<i64> = args.iter().map(ghost_of).collect();
    let mut product = SuperPolynomial::one(num_even);
    for a in args {
        product = &product * a;
    }
    let mut acc = f(&product);
    for pi in partitions(n) {
        if pi.len() == 1 {
            continue;
        }
        let eps = partition_sign(&pi, &degrees);
        let mut term = Scalar::one();
        for block in &pi {
            let block_args: Vec<SuperPolynomial> =
                block.iter().map(|&j| args[j].clone()).collect();
            term *= phi_n(f, &block_args, num_even);
        }
        acc -= term * scalar::int(eps);
    }
    acc
}

/// A finite-dimensional graded vector space: basis degrees only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSpace {
    pub degrees: Vec<i64>,
}

impl GradedSpace {
    pub fn even(dim: usize) -> Self {
        GradedSpace { degrees: vec![0; dim] }
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn zero_vec(&self) -> Vec<Scalar> {
        vec![Scalar::zero(); self.dim()]
    }

    pub fn basis_vec(&self, i: usize) -> Vec<Scalar> {
        let mut v = self.zero_vec();
        v[i] = Scalar::one();
        v
    }

    /// Canonical (sorted) key plus Koszul sign; `None` when an odd basis
    /// element repeats (the symmetric power kills it).
    pub fn canonical_key(&self, key: &[usize]) -> Option<(Vec<usize>, i64)> {
        let mut idx: Vec<usize> = (0..key.len()).collect();
        idx.sort_by_key(|&p| key[p]);
        let perm_degrees: Vec<i64> = key.iter().map(|&i| self.degrees[i]).collect();
        let sign = permutation_sign(&idx, &perm_degrees);
        let sorted: Vec<usize> = idx.iter().map(|&p| key[p]).collect();
        for w in sorted.windows(2) {
            if w[0] == w[1] && self.degrees[w[0]] % 2 != 0 {
                return None;
            }
        }
        Some((sorted, sign))
    }
}

/// A family of graded-symmetric multilinear maps S^n(V) → W, n ≤ max_arity,
/// stored on sorted basis tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MlMap {
    pub source: GradedSpace,
    pub target: GradedSpace,
    pub max_arity: usize,
    /// degree shift of every component map (1 for ℓ-tables, 0 for φ-tables)
    pub degree: i64,
    entries: BTreeMap<Vec<usize>, Vec<Scalar>>,
}

impl MlMap {
    pub fn new(source: GradedSpace, target: GradedSpace, max_arity: usize, degree: i64) -> Self {
        MlMap { source, target, max_arity, degree, entries: BTreeMap::new() }
    }

    pub fn set(&mut self, key: &[usize], value: Vec<Scalar>) {
        assert!(key.len() <= self.max_arity);
        assert_eq!(value.len(), self.target.dim());
        let (sorted, sign) = self.source.canonical_key(key).expect("odd repeat in key");
        let value: Vec<Scalar> = if sign == 1 {
            value
        } else {
            value.iter().map(|c| -c.clone()).collect()
        };
        if value.iter().all(|c| c.is_zero()) {
            self.entries.remove(&sorted);
        } else {
            self.entries.insert(sorted, value);
        }
    }

    pub fn get(&self, key: &[usize]) -> Vec<Scalar> {
        match self.source.canonical_key(key) {
            None => self.target.zero_vec(),
            Some((sorted, sign)) => match self.entries.get(&sorted) {
                None => self.target.zero_vec(),
                Some(v) => {
                    if sign == 1 {
                        v.clone()
                    } else {
                        v.iter().map(|c| -c.clone()).collect()
                    }
                }
            },
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Vec<Scalar>)> {
        self.entries.iter()
    }

    /// Multilinear evaluation on coordinate vectors. Exponential in arity;
    /// arities here are ≤ 6 by construction.
    pub fn eval(&self, args: &[Vec<Scalar>]) -> Vec<Scalar> {
        let n = args.len();
        if n == 0 || n > self.max_arity {
            return self.target.zero_vec();
        }
        let dim = self.source.dim();
        let mut acc = self.target.zero_vec();
        let mut tuple = vec![0usize; n];
        loop {
            let mut coeff = Scalar::one();
            for (a, &i) in args.iter().zip(&tuple) {
                coeff *= a[i].clone();
            }
            if !coeff.is_zero() {
                let v = self.get(&tuple);
                for (t, x) in acc.iter_mut().zip(v) {
                    *t += x * coeff.clone();
                }
            }
            // odometer
            let mut pos = 0;
            loop {
                if pos == n {
                    return acc;
                }
                tuple[pos] += 1;
                if tuple[pos] < dim {
                    break;
                }
                tuple[pos] = 0;
                pos += 1;
            }
        }
    }
}

/// One violated identity, with the witness arguments.
#[derive(Debug, Clone)]
pub struct Violation {
    pub arity: usize,
    pub args: Vec<usize>,
    pub residual: Vec<Scalar>,
}

/// Checks the L∞ relations (partition form) of an ℓ-table up to arity N on
/// all basis tuples. Returns the first violation, if any.
pub fn linf_relation_check(ell: &MlMap, max_arity: usize) -> Option<Violation> {
    let space = ell.source.clone();
    assert_eq!(ell.source, ell.target, "an ℓ-table is an endomorphism family");
    for n in 1..=max_arity {
        for key in tuples_ascending(space.dim(), n) {
            let args: Vec<Vec<Scalar>> = key.iter().map(|&i| space.basis_vec(i)).collect();
            let degrees: Vec<i64> = key.iter().map(|&i| space.degrees[i]).collect();
            let mut acc = space.zero_vec();
            for pi in partitions(n) {
                for i in distinguished_blocks(&pi, n) {
                    let eps = partition_sign(&pi, &degrees);
                    let prefix: i64 =
                        pi[..i].iter().flat_map(|b| b.iter()).map(|&j| degrees[j]).sum();
                    let sign = if prefix % 2 == 0 { eps } else { -eps };
                    let inner_args: Vec<Vec<Scalar>> =
                        pi[i].iter().map(|&j| args[j].clone()).collect();
                    let inner = ell.eval(&inner_args);
                    let mut outer_args: Vec<Vec<Scalar>> = Vec::with_capacity(pi.len());
                    for (b, block) in pi.iter().enumerate() {
                        if b == i {
                            outer_args.push(inner.clone());
                        } else {
                            outer_args.push(args[block[0]].clone());
                        }
                    }
                    let term = ell.eval(&outer_args);
                    for (t, x) in acc.iter_mut().zip(term) {
                        *t += x * scalar::int(sign);
                    }
                }
            }
            if acc.iter().any(|c| !c.is_zero()) {
                return Some(Violation { arity: n, args: key, residual: acc });
            }
        }
    }
    None
}

/// Checks the L∞-morphism relations of a φ-table between two ℓ-tables up to
/// arity N on all basis tuples.
pub fn linf_morphism_check(
    ell: &MlMap,
    ell_prime: &MlMap,
    phi: &MlMap,
    max_arity: usize,
) -> Option<Violation> {
    let source = &ell.source;
    for n in 1..=max_arity {
        for key in tuples_ascending(source.dim(), n) {
            let args: Vec<Vec<Scalar>> = key.iter().map(|&i| source.basis_vec(i)).collect();
            let degrees: Vec<i64> = key.iter().map(|&i| source.degrees[i]).collect();
            // LHS: Σ_π ε(π) ℓ'(φ(x_{B_1}), …, φ(x_{B_|π|}))
            let mut lhs = ell_prime.target.zero_vec();
            for pi in partitions(n) {
                let eps = partition_sign(&pi, &degrees);
                let mapped: Vec<Vec<Scalar>> = pi
                    .iter()
                    .map(|block| {
                        let block_args: Vec<Vec<Scalar>> =
                            block.iter().map(|&j| args[j].clone()).collect();
                        phi.eval(&block_args)
                    })
                    .collect();
                let term = ell_prime.eval(&mapped);
                for (t, x) in lhs.iter_mut().zip(term) {
                    *t += x * scalar::int(eps);
                }
            }
            // RHS: Σ ε(π,i) φ(x_{B_1}, …, ℓ(x_{B_i}), …)
            let mut rhs = ell_prime.target.zero_vec();
            for pi in partitions(n) {
                for i in distinguished_blocks(&pi, n) {
                    let eps = partition_sign(&pi, &degrees);
                    let prefix: i64 =
                        pi[..i].iter().flat_map(|b| b.iter()).map(|&j| degrees[j]).sum();
                    let sign = if prefix % 2 == 0 { eps } else { -eps };
                    let inner_args: Vec<Vec<Scalar>> =
                        pi[i].iter().map(|&j| args[j].clone()).collect();
                    let inner = ell.eval(&inner_args);
                    let mut outer_args: Vec<Vec<Scalar>> = Vec::with_capacity(pi.len());
                    for (b, block) in pi.iter().enumerate() {
                        if b == i {
                            outer_args.push(inner.clone());
                        } else {
                            outer_args.push(args[block[0]].clone());
                        }
                    }
                    let term = phi.eval(&outer_args);
                    for (t, x) in rhs.iter_mut().zip(term) {
                        *t += x * scalar::int(sign);
                    }
                }
            }
            let residual: Vec<Scalar> =
                lhs.iter().zip(&rhs).map(|(a, b)| a.clone() - b.clone()).collect();
            if residual.iter().any(|c| !c.is_zero()) {
                return Some(Violation { arity: n, args: key, residual });
            }
        }
    }
    None
}

/// Composition of morphism tables: (φ'•φ)_n = Σ_π ε(π) φ'(φ(x_{B_1}), …).
pub fn compose(phi_prime: &MlMap, phi: &MlMap, max_arity: usize) -> MlMap {
    let mut out = MlMap::new(phi.source.clone(), phi_prime.target.clone(), max_arity, 0);
    for n in 1..=max_arity {
        for key in tuples_ascending(phi.source.dim(), n) {
            if phi.source.canonical_key(&key).is_none() {
                continue;
            }
            let args: Vec<Vec<Scalar>> = key.iter().map(|&i| phi.source.basis_vec(i)).collect();
            let degrees: Vec<i64> = key.iter().map(|&i| phi.source.degrees[i]).collect();
            let mut acc = phi_prime.target.zero_vec();
            for pi in partitions(n) {
                let eps = partition_sign(&pi, &degrees);
                let mapped: Vec<Vec<Scalar>> = pi
                    .iter()
                    .map(|block| {
                        let block_args: Vec<Vec<Scalar>> =
                            block.iter().map(|&j| args[j].clone()).collect();
                        phi.eval(&block_args)
                    })
                    .collect();
                let term = phi_prime.eval(&mapped);
                for (t, x) in acc.iter_mut().zip(term) {
                    *t += x * scalar::int(eps);
                }
            }
            out.set(&key, acc);
        }
    }
    out
}

/// Blocks that may carry the ℓ-insertion: all other blocks must be
/// singletons.
fn distinguished_blocks(pi: &Partition, n: usize) -> Vec<usize> {
    let non_singletons: Vec<usize> = (0..pi.len()).filter(|&b| pi[b].len() > 1).collect();
    match non_singletons.len() {
        0 => (0..pi.len()).collect(),
        1 => {
            let b = non_singletons[0];
            if pi[b].len() == n - pi.len() + 1 {
                vec![b]
            } else {
                vec![]
            }
        }
        _ => vec![],
    }
}

/// Ascending index tuples of length n over 0..dim (multisets).
pub fn tuples_ascending(dim: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut t = vec![0usize; n];
    fn rec(dim: usize, pos: usize, start: usize, t: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos == t.len() {
            out.push(t.clone());
            return;
        }
        for i in start..dim {
            t[pos] = i;
            rec(dim, pos + 1, i, t, out);
        }
    }
    rec(dim, 0, 0, &mut t, &mut out);
    out
}
