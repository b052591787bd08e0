//! Deterministic JSON reporting: rationals as "num/den" strings, sorted
//! keys (serde_json's default map), series as [multidegree, coefficient]
//! pairs, and SHA-256 ledger hashes over canonical certificate bytes.

use crate::cohomology::{GriffithsBasis, ReductionCertificate};
use crate::deformation::{ConnectionTensor, OneTensor};
use crate::monomial::Vars;
use crate::scalar::{self, Scalar};
use crate::series::{DeformationSeries, TruncatedSeries};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub fn scalar_json(s: &Scalar) -> Value {
    Value::String(scalar::to_string(s))
}

pub fn series_json(s: &TruncatedSeries) -> Value {
    let entries: Vec<Value> = s
        .terms()
        .map(|(mu, c)| json!([mu, scalar::to_string(c)]))
        .collect();
    Value::Array(entries)
}

pub fn deformation_series_json(s: &DeformationSeries, vars: &Vars) -> Value {
    let entries: Vec<Value> = s
        .terms()
        .map(|(mu, p)| json!([mu, p.display(vars)]))
        .collect();
    Value::Array(entries)
}

/// Canonical bytes of a ghost −1 certificate family, for hashing.
fn ledger_bytes(ledger: &[Vec<DeformationSeries>], vars: &Vars) -> Vec<u8> {
    let mut out = Vec::new();
    for (a, row) in ledger.iter().enumerate() {
        for (b, lam) in row.iter().enumerate() {
            out.extend_from_slice(format!("L[{a}][{b}]=").as_bytes());
            for (mu, p) in lam.terms() {
                out.extend_from_slice(format!("{mu:?}:{};", p.display(vars)).as_bytes());
            }
            out.push(b'\n');
        }
    }
    out
}

pub fn ledger_hash(ledger: &[Vec<DeformationSeries>], vars: &Vars) -> String {
    let mut hasher = Sha256::new();
    hasher.update(ledger_bytes(ledger, vars));
    hex_string(&hasher.finalize())
}

pub fn certificate_hash(cert: &ReductionCertificate, vars: &Vars) -> String {
    let mut hasher = Sha256::new();
    hasher.update(cert.certificate.display(vars).as_bytes());
    for c in &cert.coefficients {
        hasher.update(scalar::to_string(c).as_bytes());
        hasher.update(b",");
    }
    hex_string(&hasher.finalize())
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn basis_json(basis: &GriffithsBasis, vars: &Vars) -> Value {
    json!({
        "dims": basis.block_dims(),
        "blocks": basis
            .blocks
            .iter()
            .map(|block| block
                .iter()
                .map(|&i| basis.reps[i].display(vars))
                .collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "total_dim": basis.dim(),
        "groebner_basis": basis
            .gb
            .basis
            .iter()
            .map(|b| b.display(vars))
            .collect::<Vec<_>>(),
        "groebner_cofactors": basis
            .gb
            .cofactors
            .iter()
            .map(|row| row.iter().map(|c| c.display(vars)).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

/// The tensor output schema: order, index labels, A-entries, T-entries,
/// and the ledger hash.
pub fn tensor_json(
    tensor: &ConnectionTensor,
    one_tensor: Option<&OneTensor>,
    basis: &GriffithsBasis,
    vars: &Vars,
) -> Value {
    let labels: Vec<String> = basis.reps.iter().map(|r| r.display(vars)).collect();
    let mut a_entries = Vec::new();
    for a in 0..tensor.dim {
        for b in 0..tensor.dim {
            for g in 0..tensor.dim {
                if !tensor.a[a][b][g].is_zero() {
                    a_entries.push(json!({
                        "a": a,
                        "b": b,
                        "c": g,
                        "series": series_json(&tensor.a[a][b][g]),
                    }));
                }
            }
        }
    }
    let t_entries: Value = match one_tensor {
        Some(t) => Value::Array(
            t.series
                .iter()
                .enumerate()
                .map(|(g, s)| json!({ "c": g, "series": series_json(s) }))
                .collect(),
        ),
        None => Value::Null,
    };
    json!({
        "order": tensor.order,
        "index": labels,
        "A": a_entries,
        "T": t_entries,
        "ledger_hash": ledger_hash(&tensor.ledger, vars),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn scalar_and_series_forms() {
        assert_eq!(scalar_json(&ratio(-3, 6)), Value::String("-1/2".into()));
        let mut s = TruncatedSeries::zero(2, 2);
        s.add_term(vec![1, 0], ratio(1, 3));
        let v = series_json(&s);
        assert_eq!(v, json!([[[1, 0], "1/3"]]));
    }
}
