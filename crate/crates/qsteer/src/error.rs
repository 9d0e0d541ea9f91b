//! Error type shared by every module of the crate.
//!
//! Each variant's display form starts with its machine-readable name so that
//! callers (and the CLI) can grep for the violated invariant.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("ZeroVector: norm {norm:.3e} below 1e-14, nothing to normalize")]
    ZeroVector { norm: f64 },

    #[error("NotNormalized: |sum of squared moduli - 1| = {residual:.3e} exceeds tolerance {tol:.1e}")]
    NotNormalized { residual: f64, tol: f64 },

    #[error("NonFinite: {context} contains a NaN or infinite component")]
    NonFinite { context: &'static str },

    #[error("EmptyInput: {context} must be nonempty")]
    EmptyInput { context: &'static str },

    #[error("NotHermitian: max |M - M^dagger| = {residual:.3e} exceeds tolerance {tol:.1e}")]
    NotHermitian { residual: f64, tol: f64 },

    #[error("NotPositive: minimum eigenvalue {min_eigenvalue:.3e} below -{tol:.1e}")]
    NotPositive { min_eigenvalue: f64, tol: f64 },

    #[error("TraceNotOne: |trace - 1| = {residual:.3e} exceeds tolerance {tol:.1e}")]
    TraceNotOne { residual: f64, tol: f64 },

    #[error("WindowOverflow: window of length {needed} exceeds cap {cap}")]
    WindowOverflow { needed: usize, cap: usize },

    #[error("ProgramOverflow: program of length {needed} exceeds cap {cap}")]
    ProgramOverflow { needed: usize, cap: usize },

    #[error("ShiftLeak: support at absolute index {index} falls outside the materialization window")]
    ShiftLeak { index: i64 },

    #[error("NotTracePreserving: max |sum K^dagger K - I| = {residual:.3e} exceeds tolerance {tol:.1e}")]
    NotTracePreserving { residual: f64, tol: f64 },

    #[error("KrausOnState: a Kraus stage cannot act on a pure state vector")]
    KrausOnState,

    #[error("NotInvertible: program contains a Kraus stage or projection")]
    NotInvertible,

    #[error("NotUnitary: max |U^dagger U - I| = {residual:.3e} exceeds tolerance {tol:.1e}")]
    NotUnitary { residual: f64, tol: f64 },

    #[error("BadWeights: {detail}")]
    BadWeights { detail: String },

    #[error("BudgetExceeded: enumeration visited {nodes} nodes, cap is {cap}")]
    BudgetExceeded { nodes: usize, cap: usize },

    #[error("BadArgument: {detail}")]
    BadArgument { detail: String },

    #[error("Schema: at {path}: {message}")]
    Schema { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
