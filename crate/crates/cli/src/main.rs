//! bvperiod — exact-arithmetic period computations for projective
//! hypersurfaces through the BV quantization of the Jacobian ring.
//!
//! Subcommands: `basis`, `reduce`, `connection`, `frobenius`, `toy`,
//! `check`. Reports are deterministic JSON (sorted keys, rationals as
//! "num/den"); timings go to stderr so identical configs produce identical
//! report bytes. Exit codes: 0 all assertions pass, 1 assertion failure
//! (report still emitted), 2 configuration or parse error.

use bvperiod_core::bv::BVComplex;
use bvperiod_core::cohomology::{
    gd_reduce_oracle, invert_matrix, k_reduce, GriffithsBasis, ResiduePairing,
};
use bvperiod_core::deformation::{
    a_tensor, build_geometric_gamma, build_linear_gamma, flatness_check, gauge_matrix,
    non_cy_twist, onediff_residual, restrict_one_parameter, t_tensor_direct, t_tensor_from_a,
    GammaFamily,
};
use bvperiod_core::descendant::{
    compose, ell_n, linf_morphism_check, linf_relation_check, tuples_ascending, GradedSpace,
    MlMap,
};
use bvperiod_core::frobenius::{metric_and_axioms, special_quantum_solution};
use bvperiod_core::monomial::{monomials_of_degree, Monomial, MonomialOrder, Vars};
use bvperiod_core::parse::parse_polynomial;
use bvperiod_core::poly::SuperPolynomial;
use bvperiod_core::quadrature::numeric_moment_oracle;
use bvperiod_core::report;
use bvperiod_core::scalar::{self, Scalar};
use bvperiod_core::series::TMulti;
use clap::{Args, Parser, Subcommand};
use num::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "bvperiod", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct HypersurfaceArgs {
    /// Defining polynomial G(x0..xn), homogeneous of degree d
    #[arg(long, allow_hyphen_values = true)]
    poly: Option<String>,
    /// Read the polynomial from a file instead
    #[arg(long)]
    poly_file: Option<String>,
    /// Projective dimension n (hypersurface in P^n)
    #[arg(long)]
    n: usize,
    /// Degree d of G
    #[arg(long)]
    d: u32,
    /// Monomial order for the Groebner kernel
    #[arg(long, default_value = "grevlex")]
    monomial_order: String,
}

#[derive(Subcommand)]
enum Command {
    /// Griffiths basis and Hodge block dimensions
    Basis {
        #[command(flatten)]
        hs: HypersurfaceArgs,
        #[arg(long)]
        out: Option<String>,
    },
    /// Reduce a ghost-0 element to the basis with an exact certificate
    Reduce {
        #[command(flatten)]
        hs: HypersurfaceArgs,
        /// Element of ghost number 0 to reduce (e.g. "y^2*x0^3*x1^3")
        #[arg(long, allow_hyphen_values = true)]
        element: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Connection tensor A, one-tensor T, generating-series multipliers,
    /// flatness report, and one-parameter restrictions
    Connection {
        #[command(flatten)]
        hs: HypersurfaceArgs,
        /// Truncation order N
        #[arg(long, default_value_t = 4)]
        order: u32,
        /// Deformation directions: "all" or comma-separated basis indices
        /// (used for the one-parameter Gauss–Manin restrictions)
        #[arg(long, default_value = "all")]
        directions: String,
        /// Geometric family F(T) over symbols T<k> (k a weight-1 basis
        /// index), e.g. "-3*T1*x0*x1*x2"; omitted = linear family
        #[arg(long, allow_hyphen_values = true)]
        family: Option<String>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Special quantum solution and the Frobenius-manifold axioms (CY case)
    Frobenius {
        #[command(flatten)]
        hs: HypersurfaceArgs,
        #[arg(long, default_value_t = 3)]
        order: u32,
        #[arg(long)]
        out: Option<String>,
    },
    /// One-variable toy pipeline with the quadrature comparison table
    Toy {
        /// Potential S(x) with negative even leading term, e.g. "-x^4"
        #[arg(long, allow_hyphen_values = true)]
        potential: String,
        /// Largest moment to tabulate
        #[arg(long, default_value_t = 8)]
        max_moment: u32,
        #[arg(long)]
        out: Option<String>,
    },
    /// Property suites: bv | linf | oracle | wdvv
    Check {
        /// Suite selector
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let result = run(&cli.command);
    match result {
        Ok((mut report, ok)) => {
            report["tool"] = json!({ "name": "bvperiod", "version": env!("CARGO_PKG_VERSION") });
            let out_path = out_path(&cli.command);
            let text = serde_json::to_string_pretty(&report).expect("serializable report");
            match out_path {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, &text) {
                        eprintln!("error: cannot write {path}: {e}");
                        return ExitCode::from(2);
                    }
                }
                None => println!("{text}"),
            }
            eprintln!("elapsed: {} ms", started.elapsed().as_millis());
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn out_path(cmd: &Command) -> Option<String> {
    match cmd {
        Command::Basis { out, .. }
        | Command::Reduce { out, .. }
        | Command::Connection { out, .. }
        | Command::Frobenius { out, .. }
        | Command::Toy { out, .. }
        | Command::Check { out, .. } => out.clone(),
    }
}

fn build_hypersurface(hs: &HypersurfaceArgs) -> Result<(BVComplex, GriffithsBasis), String> {
    let text = match (&hs.poly, &hs.poly_file) {
        (Some(t), None) => t.clone(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {path}: {e}"))?
            .trim()
            .to_string(),
        _ => return Err("exactly one of --poly / --poly-file is required".into()),
    };
    let vars = Vars::hypersurface(hs.n, hs.d);
    let g = parse_polynomial(&text, &vars).map_err(|e| e.to_string())?;
    let mut bv = BVComplex::hypersurface(g, hs.n, hs.d).map_err(|e| e.to_string())?;
    match hs.monomial_order.as_str() {
        "grevlex" => {}
        "lex" => bv.order = MonomialOrder::lex_for(&bv.vars),
        other => return Err(format!("unknown monomial order `{other}`")),
    }
    let basis = GriffithsBasis::new(&bv).map_err(|e| e.to_string())?;
    Ok((bv, basis))
}

/// Parses a geometric family text over symbols T<k> into
/// (t-multidegree, degree-d x-coefficient) pairs.
fn parse_family(
    text: &str,
    bv: &BVComplex,
    basis: &GriffithsBasis,
) -> Result<Vec<(TMulti, SuperPolynomial)>, String> {
    let dim = basis.dim();
    let mut ext = bv.vars.clone();
    for k in 0..dim {
        ext.even_names.push(format!("T{k}"));
    }
    let ne = bv.num_even();
    let parsed = parse_polynomial(text, &ext).map_err(|e| e.to_string())?;
    let mut by_multi: std::collections::BTreeMap<TMulti, SuperPolynomial> =
        std::collections::BTreeMap::new();
    for (m, c) in parsed.terms() {
        if !m.is_even() {
            return Err("family must be even".into());
        }
        let mu: TMulti = (0..dim).map(|k| m.even[ne + k]).collect();
        let mut xm = Monomial::one(ne);
        xm.even.copy_from_slice(&m.even[..ne]);
        by_multi
            .entry(mu)
            .or_insert_with(SuperPolynomial::zero)
            .add_term(xm, c.clone());
    }
    Ok(by_multi.into_iter().collect())
}

type RunResult = Result<(Value, bool), String>;

fn run(cmd: &Command) -> RunResult {
    match cmd {
        Command::Basis { hs, .. } => run_basis(hs),
        Command::Reduce { hs, element, .. } => run_reduce(hs, element),
        Command::Connection { hs, order, directions, family, .. } => {
            run_connection(hs, *order, directions, family.as_deref())
        }
        Command::Frobenius { hs, order, .. } => run_frobenius(hs, *order),
        Command::Toy { potential, max_moment, .. } => run_toy(potential, *max_moment),
        Command::Check { suite, seed, .. } => run_check(suite, *seed),
    }
}

fn run_basis(hs: &HypersurfaceArgs) -> RunResult {
    let (bv, basis) = build_hypersurface(hs)?;
    let report = json!({
        "config": { "n": hs.n, "d": hs.d, "monomial_order": hs.monomial_order },
        "results": report::basis_json(&basis, &bv.vars),
        "assertions": [],
    });
    Ok((report, true))
}

fn run_reduce(hs: &HypersurfaceArgs, element: &str) -> RunResult {
    let (bv, basis) = build_hypersurface(hs)?;
    let u = parse_polynomial(element, &bv.vars).map_err(|e| e.to_string())?;
    let red = k_reduce(&bv, &basis, &u).map_err(|e| e.to_string())?;
    // re-expansion check
    let mut recon = bv.apply_k(&red.certificate);
    for (i, c) in red.coefficients.iter().enumerate() {
        recon = &recon + &basis.reps[i].scale(c);
    }
    let sound = recon == u;
    let report = json!({
        "config": { "n": hs.n, "d": hs.d, "element": element },
        "results": {
            "coefficients": red.coefficients.iter().map(report::scalar_json).collect::<Vec<_>>(),
            "basis": basis.reps.iter().map(|r| r.display(&bv.vars)).collect::<Vec<_>>(),
            "certificate": red.certificate.display(&bv.vars),
            "certificate_hash": report::certificate_hash(&red, &bv.vars),
        },
        "assertions": [ { "name": "certificate re-expands", "pass": sound } ],
    });
    Ok((report, sound))
}

fn run_connection(
    hs: &HypersurfaceArgs,
    order: u32,
    directions: &str,
    family: Option<&str>,
) -> RunResult {
    let (bv, basis) = build_hypersurface(hs)?;
    if bv.background_charge() != 0 {
        // non-CY: the meaningful deformed object is the twisted one-tensor
        let Some(text) = family else {
            return Err("non-Calabi–Yau connection needs --family (twisted path)".into());
        };
        let terms = parse_family(text, &bv, &basis)?;
        let tw = non_cy_twist(&bv, &basis, &terms, order).map_err(|e| e.to_string())?;
        // certificate soundness of the twisted expansion
        let cert = tw.one_tensor.certificate.as_ref().unwrap();
        let mut res = tw.twisted_exponential.clone();
        for (g_idx, p) in tw.frame_polys.iter().enumerate() {
            res = res.sub(
                &bvperiod_core::series::DeformationSeries::from_constant(
                    basis.dim(),
                    order,
                    p.clone(),
                    bv.num_even(),
                )
                .scale_series(&tw.one_tensor.series[g_idx]),
            );
        }
        res = res.sub(&cert.map_coefficients(|p| bv.apply_k(p)));
        let sound = res.is_zero();
        let gauge = gauge_matrix(&tw.one_tensor, basis.dim());
        let report = json!({
            "config": { "n": hs.n, "d": hs.d, "order": order, "family": text, "twisted": true },
            "results": {
                "twist_g": tw.twist_g.display(&bv.vars),
                "twist_i": tw.twist_i,
                "frame": tw.frame_polys.iter().map(|p| p.display(&bv.vars)).collect::<Vec<_>>(),
                "T": tw.one_tensor.series.iter().enumerate()
                    .map(|(g, s)| json!({ "c": g, "series": report::series_json(s) }))
                    .collect::<Vec<_>>(),
                "period_matrix_gauge": gauge
                    .iter()
                    .map(|row| row.iter().map(report::series_json).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            },
            "assertions": [ { "name": "twisted certificate re-expands", "pass": sound } ],
        });
        return Ok((report, sound));
    }
    let fam: GammaFamily = match family {
        None => build_linear_gamma(&bv, &basis, order + 2).map_err(|e| e.to_string())?,
        Some(text) => {
            let terms = parse_family(text, &bv, &basis)?;
            build_geometric_gamma(&bv, &basis, &terms, order + 2).map_err(|e| e.to_string())?
        }
    };
    let tensor = a_tensor(&bv, &basis, &fam, order).map_err(|e| e.to_string())?;
    let one = t_tensor_direct(&bv, &basis, &fam, order + 2).map_err(|e| e.to_string())?;
    let one_at_order = t_tensor_from_a(&tensor, order);
    let routes_agree = one
        .series
        .iter()
        .zip(&one_at_order.series)
        .all(|(a, b)| &a.truncated(order) == b);
    let flat = flatness_check(&tensor);
    let onediff = onediff_residual(&tensor, &one, order).map(|v| v.is_empty());
    let dirs: Vec<usize> = if directions == "all" {
        (0..basis.dim()).collect()
    } else {
        directions
            .split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?
    };
    let restrictions: Vec<Value> = dirs
        .iter()
        .filter(|&&d| d < basis.dim())
        .map(|&d| {
            let ode = restrict_one_parameter(&tensor, d);
            json!({
                "direction": d,
                "rhs_matrix": ode
                    .matrix
                    .iter()
                    .map(|row| row.iter().map(report::series_json).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            })
        })
        .collect();
    let gauge = gauge_matrix(&one, basis.dim());
    let assertions = vec![
        json!({ "name": "A symmetric", "pass": flat.symmetric }),
        json!({ "name": "flat (dA + A² = 0)", "pass": flat.flat }),
        json!({ "name": "T routes agree", "pass": routes_agree }),
        json!({ "name": "onediff identity A = (∂𝒢)·𝒢⁻¹", "pass": onediff == Some(true) }),
    ];
    let ok = assertions.iter().all(|a| a["pass"].as_bool().unwrap_or(false));
    let report = json!({
        "config": {
            "n": hs.n, "d": hs.d, "order": order,
            "family": family.unwrap_or("linear"), "directions": directions,
        },
        "results": {
            "tensor": report::tensor_json(&tensor, Some(&one_at_order), &basis, &bv.vars),
            "generating_series": one
                .series
                .iter()
                .enumerate()
                .map(|(g, s)| json!({
                    "period_symbol": format!("P{g}"),
                    "multiplier": report::series_json(&s.truncated(order)),
                }))
                .collect::<Vec<_>>(),
            "period_matrix_gauge": gauge
                .iter()
                .map(|row| row.iter().map(|e| report::series_json(&e.truncated(order))).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "gauss_manin_restrictions": restrictions,
        },
        "assertions": assertions,
    });
    Ok((report, ok))
}

fn run_frobenius(hs: &HypersurfaceArgs, order: u32) -> RunResult {
    let (bv, basis) = build_hypersurface(hs)?;
    let pairing = ResiduePairing::new(&bv, &basis).map_err(|e| e.to_string())?;
    let sol = special_quantum_solution(&bv, &basis, &pairing, order).map_err(|e| e.to_string())?;
    let axioms = metric_and_axioms(&bv, &basis, &sol);
    let assertion_list = [
        ("master equations", axioms.master_equations),
        ("Λ-chain weight bound", axioms.chain_lengths_within_weight_bound),
        ("metric flat", axioms.metric_flat),
        ("metric nondegenerate", axioms.metric_nondegenerate),
        ("metric block-antidiagonal", axioms.metric_block_antidiagonal),
        ("identity row", axioms.identity_row),
        ("commutativity", axioms.commutativity),
        ("invariance", axioms.invariance),
        ("potentiality", axioms.potentiality),
        ("associativity (WDVV)", axioms.associativity),
        ("potential integrable", axioms.potential_integrable),
    ];
    let assertions: Vec<Value> = assertion_list
        .iter()
        .map(|(n, p)| json!({ "name": n, "pass": p }))
        .collect();
    let report = json!({
        "config": { "n": hs.n, "d": hs.d, "order": order },
        "results": {
            "tensor": report::tensor_json(&sol.tensor, None, &basis, &bv.vars),
            "metric": sol
                .metric
                .iter()
                .map(|row| row.iter().map(report::scalar_json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "potential": sol_potential_json(&axioms.potential),
            "failures": axioms.failures,
        },
        "assertions": assertions,
    });
    let ok = axioms.all_pass();
    Ok((report, ok))
}

fn sol_potential_json(potential: &[(TMulti, Scalar)]) -> Value {
    Value::Array(
        potential
            .iter()
            .map(|(mu, c)| json!([mu, scalar::to_string(c)]))
            .collect(),
    )
}

fn run_toy(potential: &str, max_moment: u32) -> RunResult {
    let vars = Vars::generic(&["x"]);
    let s = parse_polynomial(potential, &vars).map_err(|e| e.to_string())?;
    let bv = BVComplex::generic(s.clone(), vars).map_err(|e| e.to_string())?;
    let basis = GriffithsBasis::new(&bv).map_err(|e| e.to_string())?;
    let base_moments: Vec<f64> = (0..basis.dim() as u32)
        .map(|m| numeric_moment_oracle(&s, m).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    let mut ok = true;
    for m in 0..=max_moment {
        let xm = SuperPolynomial::from_term(
            Monomial::even_var(bv.num_even(), 0, m),
            Scalar::one(),
        );
        let red = k_reduce(&bv, &basis, &xm).map_err(|e| e.to_string())?;
        // exact prediction: ∫x^m e^S = Σ c_k ∫x^k e^S over the basis
        let predicted: f64 = red
            .coefficients
            .iter()
            .zip(&base_moments)
            .map(|(c, b)| c.to_f64().unwrap_or(f64::NAN) * b)
            .sum();
        let measured = numeric_moment_oracle(&s, m).map_err(|e| e.to_string())?;
        let scale = measured.abs().max(base_moments[0].abs());
        let agree = (predicted - measured).abs() <= 1e-8 * scale.max(1.0);
        ok &= agree;
        rows.push(json!({
            "moment": m,
            "coefficients": red.coefficients.iter().map(report::scalar_json).collect::<Vec<_>>(),
            "predicted": format!("{predicted:.12e}"),
            "quadrature": format!("{measured:.12e}"),
            "agree": agree,
        }));
    }
    let report = json!({
        "config": { "potential": potential, "max_moment": max_moment },
        "results": {
            "basis": basis.reps.iter().map(|r| r.display(&bv.vars)).collect::<Vec<_>>(),
            "table": rows,
        },
        "assertions": [ { "name": "exact reductions match quadrature to 1e-8", "pass": ok } ],
    });
    Ok((report, ok))
}

fn fermat(n: usize, d: u32) -> (BVComplex, GriffithsBasis) {
    let vars = Vars::hypersurface(n, d);
    let text: Vec<String> = (0..=n).map(|i| format!("x{i}^{d}")).collect();
    let g = parse_polynomial(&text.join("+"), &vars).unwrap();
    let bv = BVComplex::hypersurface(g, n, d).unwrap();
    let basis = GriffithsBasis::new(&bv).unwrap();
    (bv, basis)
}

fn run_check(suite: &str, seed: u64) -> RunResult {
    let mut assertions: Vec<(String, bool)> = Vec::new();
    match suite {
        "bv" => check_bv(seed, &mut assertions),
        "linf" => check_linf(seed, &mut assertions),
        "oracle" => check_oracle(seed, &mut assertions),
        "wdvv" => check_wdvv(&mut assertions),
        other => return Err(format!("unknown suite `{other}` (bv | linf | oracle | wdvv)")),
    }
    let ok = assertions.iter().all(|(_, p)| *p);
    let report = json!({
        "config": { "suite": suite, "seed": seed },
        "results": {},
        "assertions": assertions
            .iter()
            .map(|(n, p)| json!({ "name": n, "pass": p }))
            .collect::<Vec<_>>(),
    });
    Ok((report, ok))
}

fn check_bv(seed: u64, assertions: &mut Vec<(String, bool)>) {
    for (label, n, d) in [("fermat cubic", 2usize, 3u32), ("fermat quartic", 2, 4)] {
        let (bv, _) = fermat(n, d);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ne = bv.num_even();
        let mut nilpotent = true;
        let mut bi_derivation = true;
        let mut jacobi = true;
        let mut ell3 = true;
        let mut symmetry = true;
        for _ in 0..100 {
            let a = bv.random_tri_homogeneous(&mut rng);
            let b = bv.random_tri_homogeneous(&mut rng);
            let c = bv.random_tri_homogeneous(&mut rng);
            nilpotent &= bv.apply_k(&bv.apply_k(&a)).is_zero()
                && bv.apply_q(&bv.apply_q(&a)).is_zero()
                && bv.apply_delta(&bv.apply_delta(&a)).is_zero()
                && (&bv.apply_q(&bv.apply_delta(&a)) + &bv.apply_delta(&bv.apply_q(&a)))
                    .is_zero();
            // graded symmetry ℓ₂(a,b) = (−1)^{|a||b|} ℓ₂(b,a)
            let gh_a = a.ghost().unwrap_or(0);
            let gh_b = b.ghost().unwrap_or(0);
            let swapped = bv.bracket_l2(&b, &a);
            let expected = if (gh_a * gh_b) % 2 == 0 {
                swapped.clone()
            } else {
                -&swapped
            };
            symmetry &= bv.bracket_l2(&a, &b) == expected;
            // Gerstenhaber/Leibniz: ℓ₂(ab, c) = (−1)^{|a|} a·ℓ₂(b,c) + (−1)^{|b||c|} ℓ₂(a,c)·b
            let lhs = bv.bracket_l2(&(&a * &b), &c);
            let term1 = {
                let v = &a * &bv.bracket_l2(&b, &c);
                if gh_a % 2 == 0 {
                    v
                } else {
                    -&v
                }
            };
            let gh_c = c.ghost().unwrap_or(0);
            let term2 = {
                let v = &bv.bracket_l2(&a, &c) * &b;
                if (gh_b * gh_c) % 2 == 0 {
                    v
                } else {
                    -&v
                }
            };
            bi_derivation &= lhs == &term1 + &term2;
            // K-Jacobi: Kℓ₂(a,b) + ℓ₂(Ka,b) + (−1)^{|a|}ℓ₂(a,Kb) = 0
            let j = {
                let t1 = bv.apply_k(&bv.bracket_l2(&a, &b));
                let t2 = bv.bracket_l2(&bv.apply_k(&a), &b);
                let t3 = {
                    let v = bv.bracket_l2(&a, &bv.apply_k(&b));
                    if gh_a % 2 == 0 {
                        v
                    } else {
                        -&v
                    }
                };
                &(&t1 + &t2) + &t3
            };
            jacobi &= j.is_zero();
            ell3 &= ell_n(&|u: &SuperPolynomial| bv.apply_k(u), &[a, b, c], ne).is_zero();
        }
        assertions.push((format!("{label}: K² = Q² = Δ² = QΔ+ΔQ = 0"), nilpotent));
        assertions.push((format!("{label}: ℓ₂ graded symmetry"), symmetry));
        assertions.push((format!("{label}: ℓ₂ bi-derivation"), bi_derivation));
        assertions.push((format!("{label}: K-Jacobi"), jacobi));
        assertions.push((format!("{label}: ℓ₃ = 0"), ell3));
    }
}

fn check_linf(seed: u64, assertions: &mut Vec<(String, bool)>) {
    // descendant of the Fermat cubic passes the relation check at N = 4
    let (bv, _) = fermat(2, 3);
    let ne = bv.num_even();
    let elements = [
        SuperPolynomial::one(ne),
        SuperPolynomial::even_var(ne, 1),
        SuperPolynomial::odd_var(ne, 1),
        {
            let y = SuperPolynomial::even_var(ne, 0);
            let e = SuperPolynomial::odd_var(ne, 2);
            &y * &e
        },
    ];
    // build ℓ-tables on the span of `elements` closed under K and products
    // is impractical; instead check the defining recursion directly
    let k = |u: &SuperPolynomial| bv.apply_k(u);
    let mut relation_ok = true;
    for ai in 0..elements.len() {
        for bi in ai..elements.len() {
            for ci in bi..elements.len() {
                let (a, b, c) = (&elements[ai], &elements[bi], &elements[ci]);
                relation_ok &= ell_n(&k, &[a.clone(), b.clone(), c.clone()], ne).is_zero();
                relation_ok &= ell_n(&k, &[a.clone(), b.clone()], ne)
                    == bvperiod_core::descendant::ell_n_partition(&k, &[a.clone(), b.clone()], ne);
            }
        }
    }
    assertions.push(("descendant ℓ-tower matches partition recursion; ℓ₃ = 0".into(), relation_ok));

    // table layer: random φ-tables compose associatively; a random DGLA-free
    // ℓ-table with ℓ₁² = 0 passes the relation check
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = GradedSpace::even(2);
    let v = GradedSpace::even(3);
    let w = GradedSpace::even(2);
    let z = GradedSpace::even(2);
    let mut assoc = true;
    for _ in 0..3 {
        let phi = random_table(&u, &v, 3, &mut rng);
        let psi = random_table(&v, &w, 3, &mut rng);
        let chi = random_table(&w, &z, 3, &mut rng);
        let left = compose(&chi, &compose(&psi, &phi, 3), 3);
        let right = compose(&compose(&chi, &psi, 3), &phi, 3);
        assoc &= left == right;
    }
    assertions.push(("L∞-morphism composition associativity (N = 3)".into(), assoc));

    let space = GradedSpace { degrees: vec![-1, 0] };
    let mut ell = MlMap::new(space.clone(), space.clone(), 4, 1);
    ell.set(&[0], space.basis_vec(1));
    assertions.push((
        "two-step complex passes L∞ relations (N = 4)".into(),
        linf_relation_check(&ell, 4).is_none(),
    ));
    // identity morphism between equal tables passes the morphism check
    let mut id = MlMap::new(space.clone(), space.clone(), 4, 0);
    id.set(&[0], space.basis_vec(0));
    id.set(&[1], space.basis_vec(1));
    assertions.push((
        "identity is an L∞-morphism (N = 4)".into(),
        linf_morphism_check(&ell, &ell, &id, 4).is_none(),
    ));
}

fn random_table(
    source: &GradedSpace,
    target: &GradedSpace,
    max_arity: usize,
    rng: &mut ChaCha8Rng,
) -> MlMap {
    let mut t = MlMap::new(source.clone(), target.clone(), max_arity, 0);
    for n in 1..=max_arity {
        for key in tuples_ascending(source.dim(), n) {
            if source.canonical_key(&key).is_none() {
                continue;
            }
            let v: Vec<Scalar> = (0..target.dim())
                .map(|_| scalar::int(rng.gen_range(-3..=3)))
                .collect();
            t.set(&key, v);
        }
    }
    t
}

fn check_oracle(seed: u64, assertions: &mut Vec<(String, bool)>) {
    let (bv, basis) = fermat(2, 3);
    let ne = bv.num_even();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all = true;
    let mut count = 0;
    while count < 50 {
        let k = rng.gen_range(1..=3u32);
        let deg = (k * 3) as i64 - 3;
        let monos = monomials_of_degree(ne, &[1, 2, 3], deg as u32);
        let mut f = SuperPolynomial::zero();
        for m in &monos {
            f.add_term(m.clone(), scalar::int(rng.gen_range(-3..=3)));
        }
        if f.is_zero() {
            continue;
        }
        count += 1;
        let oracle = gd_reduce_oracle(&bv, &basis, &f, k).unwrap();
        let mut y_pow = Monomial::one(ne);
        y_pow.even[0] = k - 1;
        let u = f.mul_scalar_term(&y_pow, &Scalar::one());
        let primary = k_reduce(&bv, &basis, &u).unwrap();
        all &= oracle == primary.coefficients;
        // certificate soundness of the primary reduction
        let mut recon = bv.apply_k(&primary.certificate);
        for (i, c) in primary.coefficients.iter().enumerate() {
            recon = &recon + &basis.reps[i].scale(c);
        }
        all &= recon == u;
    }
    assertions.push(("k_reduce ≡ Griffiths–Dwork oracle on 50 seeded forms".into(), all));
}

fn check_wdvv(assertions: &mut Vec<(String, bool)>) {
    let (bv, basis) = fermat(2, 3);
    let pairing = ResiduePairing::new(&bv, &basis).unwrap();
    match special_quantum_solution(&bv, &basis, &pairing, 3) {
        Ok(sol) => {
            let axioms = metric_and_axioms(&bv, &basis, &sol);
            assertions.push(("special solution axioms (N = 3)".into(), axioms.all_pass()));
            assertions.push((
                "metric Gram invertible".into(),
                invert_matrix(&sol.metric).is_some(),
            ));
        }
        Err(e) => {
            assertions.push((format!("special solution construction: {e}"), false));
        }
    }
}
