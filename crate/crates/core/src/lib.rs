//! Exact computer algebra for partial-slice Clifford analysis.
//!
//! The crate works over the real Clifford algebra `R_{p+q}` with arbitrary
//! precision rational coefficients throughout, so every identity it verifies
//! is decided exactly, never numerically. The main pieces are:
//!
//! * [`clifford`] — blades, geometric product, conjugation, norms;
//! * [`mvpoly`] — multivariate polynomials with multivector coefficients,
//!   exact differentiation/substitution and rational Gaussian elimination;
//! * [`slice`] — stem pairs `(F1, F2)` and the slice functions
//!   `f = F1 + ω F2` they induce, spherical value/derivative, symmetry tests
//!   and the representation formula;
//! * [`diffops`] — the split Dirac operators, Laplacians and radial
//!   operators as exact maps on polynomials;
//! * [`regular`] — generalized Cauchy-Riemann residuals, polynomial and jet
//!   solvers (GCR, Helmholtz, Vekua) and the identity theorems built on
//!   them (spherical theorem, Fueter-Sce map and its enhancements);
//! * [`almansi`] — the A/B and star-like decompositions for regular
//!   functions plus the classical harmonic and monogenic Almansi
//!   decompositions for polynomials;
//! * [`cli`] — the `pslice` command line front end.

pub mod almansi;
pub mod cli;
pub mod clifford;
pub mod diffops;
pub mod mvpoly;
pub mod rational;
pub mod regular;
pub mod slice;

pub use clifford::{blade_product, BladeMask, Multivector, Signature};
pub use rational::Rational;
// TODO: restore re-exports as modules land
// pub use mvpoly::{LinearSystem, MVPolynomial, Monomial};
// pub use slice::{SliceFunction, StemPair, UnitVector};

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid signature (p={p}, q={q}): {reason}")]
    InvalidSignature { p: u32, q: u32, reason: String },
    #[error("blade mask {mask:#x} does not fit the algebra R_{n}")]
    MaskOutOfRange { mask: u16, n: u32 },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("arity mismatch: expected {expected} values, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("variable set mismatch: expected {expected:?}, got {got:?}")]
    VariableMismatch { expected: Vec<String>, got: Vec<String> },
    #[error("parity violation in {slot}: offending term {term}")]
    ParityViolation { slot: &'static str, term: String },
    #[error("not a unit vector: component square sum is {0}")]
    NotUnit(String),
    #[error("q = {q} is not supported here: {reason}")]
    BadQ { q: u32, reason: String },
    #[error("k = {k} outside the valid range 1..={max}")]
    PowerOutOfRange { k: u32, max: u32 },
    #[error("input is not regular; first GCR residual term: {0}")]
    NotRegular(String),
    #[error("function is not symmetric with respect to the slice axis: {0}")]
    NotSymmetric(String),
    #[error("not polyharmonic of degree {levels}; residual term: {term}")]
    NotPolyharmonic { levels: usize, term: String },
    #[error("not polymonogenic of degree {levels}; residual term: {term}")]
    NotPolymonogenic { levels: usize, term: String },
    #[error("Helmholtz precondition violated; residual term: {0}")]
    HelmholtzPrecondition(String),
    #[error("truncation order {order} too short for q = {q}")]
    TruncationTooShort { order: u32, q: u32 },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Parse(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
