//! Numerical laboratory for intertwining relations XT_φ = T_ψX between
//! analytic Toeplitz operators on a truncated Hardy space H², and for the
//! extended-eigenvalue geometry of T_φ.
//!
//! Everything is built on one discretization: analytic functions on the unit
//! disc 𝕌 are truncated Taylor series in the monomial basis {1, z, z², …},
//! and operators are N×N complex matrices acting on the first N coefficients.
//! Exactness is tracked explicitly (see [`series::ExactDegree`] and the
//! `valid_block` field of [`operators::OperatorMatrix`]) so polynomial
//! identities can be asserted to machine epsilon while truncation-limited
//! statements carry computed tail bounds.
//!
//! Module map:
//! - [`series`] — truncated power-series algebra (multiply, compose,
//!   reversion, sup-norm estimates).
//! - [`symbol`] — closed-form symbol specifications φ, ψ, ω, h with exact
//!   evaluators and a JSON schema.
//! - [`operators`] — Toeplitz and weighted composition matrices, reproducing
//!   kernels, Wold-shift data.
//! - [`geometry`] — image boundary curves, winding-number valence,
//!   containment scans, the z²+z cardioid.
//! - [`intertwine`] — residual verification, the Deddens inner-symbol
//!   intertwiner, weighted-composition recovery, finite-dimensional partners,
//!   Vandermonde system checks.
//! - [`spectra`] — subordination solving (lifts ω with φ∘ω = ψ) and
//!   extended-eigenvalue membership and scans.
//! - [`cli`] — command-line front end emitting JSON/CSV reports and SVG plots.

pub mod cli;
pub mod geometry;
pub mod intertwine;
pub mod linalg;
pub mod operators;
pub mod report;
pub mod series;
pub mod spectra;
pub mod svg;
pub mod symbol;

pub use num_complex::Complex64;

use thiserror::Error;

/// Errors shared across the crate. Typed *mathematical* outcomes that the
/// caller is expected to branch on (e.g. a subordination lift failing to be a
/// self-map) live in their own result enums instead; `Error` is for rejected
/// preconditions and malformed input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("truncation mismatch: {left} vs {right}")]
    TruncationMismatch { left: usize, right: usize },

    #[error("evaluation point |z| = {modulus} is outside the open unit disc")]
    OutsideDisc { modulus: f64 },

    #[error("composition requires inner(0) = 0 or a closed-form recentring; inner(0) = {value}")]
    NotFormal { value: Complex64 },

    #[error("no closed-form recentring available for this symbol (raw series at a noncentered point)")]
    NoRecentring,

    #[error("critical point: series has s'(0) = 0, no single-valued local inverse")]
    CriticalPoint,

    #[error("not certified as a self-map of the disc: sup-norm estimate {estimate} >= 1")]
    NotSelfMap { estimate: f64 },

    #[error("weight h is identically zero; the operator would be 0")]
    ZeroWeight,

    #[error("symbol not certified inner at this truncation: isometry defect {defect} > tolerance {tolerance}")]
    NotInner { defect: f64, tolerance: f64 },

    #[error("empty valid block: {hint}")]
    EmptyValidBlock { hint: String },

    #[error("{0}")]
    Invalid(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
