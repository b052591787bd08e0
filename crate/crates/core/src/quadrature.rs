//! Floating-point moment oracle for one-variable toy potentials:
//! ∫ x^m e^{G(x)} dx by adaptive Gauss–Kronrod (G7/K15) over a window
//! (−L, L) chosen so the tails are negligible.

use crate::poly::SuperPolynomial;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum QuadratureError {
    #[error("potential is not integrable on the real line (needs even degree and negative leading coefficient)")]
    NonIntegrable,
    #[error("potential must be a one-variable even polynomial")]
    BadPotential,
}

/// 15-point Kronrod nodes (symmetric; positive half) and weights, with the
/// embedded 7-point Gauss weights.
const KRONROD_NODES: [f64; 8] = [
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
];
const KRONROD_WEIGHTS: [f64; 8] = [
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
];
/// Gauss-7 weights aligned with the even-indexed Kronrod nodes.
const GAUSS_WEIGHTS: [f64; 4] = [
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
];

fn polynomial_to_coeffs(g: &SuperPolynomial) -> Result<Vec<f64>, QuadratureError> {
    let mut coeffs: Vec<f64> = Vec::new();
    for (m, c) in g.terms() {
        if !m.is_even() || m.even.len() != 1 {
            return Err(QuadratureError::BadPotential);
        }
        let deg = m.even[0] as usize;
        if coeffs.len() <= deg {
            coeffs.resize(deg + 1, 0.0);
        }
        let num: f64 = c.numer().to_string().parse().unwrap_or(f64::NAN);
        let den: f64 = c.denom().to_string().parse().unwrap_or(f64::NAN);
        coeffs[deg] = num / den;
    }
    Ok(coeffs)
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut kronrod = 0.0;
    let mut gauss = 0.0;
    for (i, (&node, &kw)) in KRONROD_NODES.iter().zip(&KRONROD_WEIGHTS).enumerate() {
        let (fp, fm) = (f(mid + half * node), f(mid - half * node));
        let pair = if i == 0 { fp } else { fp + fm };
        kronrod += kw * pair;
        if i % 2 == 0 {
            gauss += GAUSS_WEIGHTS[i / 2] * pair;
        }
    }
    (kronrod * half, (kronrod - gauss).abs() * half)
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (value, err) = gk15(f, a, b);
    if err <= tol || depth >= 48 {
        return value;
    }
    let mid = 0.5 * (a + b);
    adaptive(f, a, mid, tol * 0.5, depth + 1) + adaptive(f, mid, b, tol * 0.5, depth + 1)
}

/// ∫_{−∞}^{∞} x^m e^{G(x)} dx to relative accuracy ~1e−10.
pub fn numeric_moment_oracle(g: &SuperPolynomial, m: u32) -> Result<f64, QuadratureError> {
    let coeffs = polynomial_to_coeffs(g)?;
    let deg = coeffs.len().saturating_sub(1);
    if deg < 2 || deg % 2 != 0 || coeffs[deg] >= 0.0 {
        return Err(QuadratureError::NonIntegrable);
    }
    // window: grow L until the integrand is far below the interior scale
    let integrand = |x: f64| x.powi(m as i32) * horner(&coeffs, x).exp();
    let mut l = 1.0f64;
    let interior = integrand(0.0).abs().max(integrand(0.5).abs()).max(1e-300);
    while integrand(l).abs() > interior * 1e-18 || integrand(-l).abs() > interior * 1e-18 {
        l *= 1.5;
        if l > 1e6 {
            return Err(QuadratureError::NonIntegrable);
        }
    }
    // scale the absolute tolerance by a cheap first pass
    let rough = gk15(&integrand, -l, l).0.abs().max(interior);
    Ok(adaptive(&integrand, -l, l, rough * 1e-13, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::Vars;
    use crate::parse::parse_polynomial;

    #[test]
    fn gaussian_moments() {
        let vars = Vars::generic(&["x"]);
        let g = parse_polynomial("-1/2*x^2", &vars).unwrap();
        let sqrt_2pi = (2.0 * std::f64::consts::PI).sqrt();
        let m0 = numeric_moment_oracle(&g, 0).unwrap();
        assert!((m0 - sqrt_2pi).abs() < 1e-9 * sqrt_2pi);
        let m4 = numeric_moment_oracle(&g, 4).unwrap();
        assert!((m4 - 3.0 * sqrt_2pi).abs() < 1e-9 * sqrt_2pi, "m4 = {m4}");
        let m3 = numeric_moment_oracle(&g, 3).unwrap();
        assert!(m3.abs() < 1e-12);
    }

    #[test]
    fn quartic_ratios() {
        let vars = Vars::generic(&["x"]);
        let g = parse_polynomial("-x^4", &vars).unwrap();
        let m0 = numeric_moment_oracle(&g, 0).unwrap();
        let m4 = numeric_moment_oracle(&g, 4).unwrap();
        assert!((m4 / m0 - 0.25).abs() < 1e-9, "Γ(5/4)/Γ(1/4) = 1/4, got {}", m4 / m0);
        let m2 = numeric_moment_oracle(&g, 2).unwrap();
        let m6 = numeric_moment_oracle(&g, 6).unwrap();
        assert!((m6 / m2 - 0.75).abs() < 1e-9);
    }

    #[test]
    fn rejects_non_integrable() {
        let vars = Vars::generic(&["x"]);
        let g = parse_polynomial("x^3", &vars).unwrap();
        assert_eq!(numeric_moment_oracle(&g, 0), Err(QuadratureError::NonIntegrable));
        let g2 = parse_polynomial("x^2", &vars).unwrap();
        assert_eq!(numeric_moment_oracle(&g2, 0), Err(QuadratureError::NonIntegrable));
    }
}
