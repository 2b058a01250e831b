//! Error type shared by all modules.

use core::fmt;

/// Failure modes of model construction, propagation and analysis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Error {
    /// The raw trace fell below the floor `EPS_TR`; normalization would only
    /// amplify noise.
    TraceCollapse { trace: f64 },
    /// The state drifted away from Hermiticity beyond `TOL_HERM` before the
    /// per-step projection.
    HermiticityDrift { deviation: f64 },
    /// Parameters violate a model constraint, e.g. the reality condition
    /// `(1+γ²)(1-β²) ≥ a₂²` or a scenario-pinned value.
    ConstraintViolation(&'static str),
    /// Parameters sit on a singular subvariety of a closed-form expression.
    DegenerateParameters(&'static str),
    /// The raw trace exceeded the growth ceiling in linear propagation.
    Overflow { trace: f64 },
    /// The trajectory or state does not carry the data a routine needs.
    FormMismatch(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::TraceCollapse { trace } => {
                write!(
                    f,
                    "trace collapsed to {trace:e} (below the normalization floor)"
                )
            }
            Error::HermiticityDrift { deviation } => {
                write!(f, "hermiticity deviation {deviation:e} exceeds tolerance")
            }
            Error::ConstraintViolation(what) => write!(f, "constraint violation: {what}"),
            Error::DegenerateParameters(what) => write!(f, "degenerate parameters: {what}"),
            Error::Overflow { trace } => write!(
                f,
                "raw trace {trace:e} exceeded the growth ceiling; use the normalized form"
            ),
            Error::FormMismatch(what) => write!(f, "form mismatch: {what}"),
        }
    }
}

impl core::error::Error for Error {}
