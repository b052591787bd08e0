//! Exact-arithmetic computer algebra for the BV quantization of Jacobian rings.
//!
//! The crate is organized bottom-up:
//!
//! * [`scalar`], [`monomial`], [`poly`], [`parse`] — sparse super-commutative
//!   polynomial arithmetic over exact big rationals, tri-graded by
//!   (ghost, charge, weight).
//! * [`groebner`] — Buchberger with cofactor tracking, division with quotient
//!   certificates, standard monomials, smoothness checks.
//! * [`bv`] — the BV complex (𝒜, ·, K = Q + Δ) of a quantum Jacobian
//!   potential, specialized to Dwork potentials y·G(x) for hypersurfaces.
//! * [`descendant`] — the descendant operations ℓ_n and φ_n, finite-order
//!   L∞ relation/morphism checkers, and composition.
//! * [`cohomology`] — Griffiths bases, the quantum-corrected reduction with
//!   certificates, the classical pole-order-lowering oracle, and the residue
//!   pairing.
//! * [`quadrature`] — adaptive Gauss–Kronrod moments for one-variable toys.
//! * [`series`], [`deformation`] — truncated formal families Γ(t), the
//!   connection tensor A_{αβ}^γ(t), the one-tensor T^γ(t) by two routes,
//!   generating series, flatness, and the non-Calabi–Yau twist.
//! * [`frobenius`] — the special quantum Maurer–Cartan solution and the
//!   formal Frobenius manifold axioms.
//! * [`report`] — deterministic JSON reporting shared with the CLI.

pub mod scalar;
pub mod monomial;
pub mod poly;
pub mod parse;
pub mod groebner;
pub mod bv;
pub mod descendant;
pub mod quadrature;
pub mod cohomology;
pub mod series;
pub mod deformation;
pub mod frobenius;
pub mod report;

pub use bv::BVComplex;
pub use monomial::{Monomial, MonomialOrder, Vars};
pub use poly::SuperPolynomial;
pub use scalar::Scalar;
