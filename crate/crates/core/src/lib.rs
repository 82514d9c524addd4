//! Uniform determinantal representations of generic polynomials.
//!
//! A uniform representation of the generic polynomial
//! `p_{n,d} = Σ_{|α|≤d} c_α x^α` is a square matrix `M = M₀ + Σ c_α M_α`
//! whose entries are affine in `x` and in `c` with `det(M) = p_{n,d}`.
//! This crate builds such matrices from connected monomial sets, verifies
//! them exactly or by randomized identity testing, transforms them under
//! affine changes of coordinates, and uses the bivariate ones to solve
//! systems `p(x,y) = q(x,y) = 0` as a two-parameter eigenvalue problem.

pub mod biaffine;
pub mod connected;
pub mod constructions;
pub mod error;
pub mod linalg;
pub mod matpoly;
pub mod matrix;
pub mod oracle;
pub mod polycore;
pub mod scalar;
pub mod symmetry;
pub mod twopareig;

pub use biaffine::{
    generic_poly, minor_span_check, rank_profile_m0, symbolic_det, verify, verify_auto, Provenance,
    UniformRep, VerificationReport, VerifyMode, VerifyOptions,
};
pub use constructions::{construct, Method};
pub use error::{Error, Result};
pub use matrix::Mat;
pub use polycore::{enumerate_fd, AffineForm, Degree, ExponentVector, MultiPoly, Tolerance};
pub use scalar::{Rational, Scalar, ScalarKind};

pub use num_complex::Complex64;

/// Polynomial with exact rational coefficients.
pub type QPoly = MultiPoly<Rational>;
/// Polynomial with real double coefficients.
pub type RPoly = MultiPoly<f64>;
/// Polynomial with complex double coefficients.
pub type CPoly = MultiPoly<Complex64>;
/// Representation with exact rational coefficients.
pub type QRep = UniformRep<Rational>;
/// Representation with complex double coefficients.
pub type CRep = UniformRep<Complex64>;
