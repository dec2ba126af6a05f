//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failures reported by the library.
///
/// Variants that point at a surface carry the parameter location `(u, v)`.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("the form Phi vanishes at the requested tolerance")]
    PhiZero,

    #[error("inconsistent invariants: {0}")]
    InconsistentInvariants(String),

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("induced metric is not Lorentzian at ({u}, {v}) (det = {det:e})")]
    NotLorentzian { u: f64, v: f64, det: f64 },

    #[error("immersion is degenerate (rank < 2) at ({u}, {v})")]
    DegenerateImmersion { u: f64, v: f64 },

    #[error("Gauss map is discontinuous across the difference stencil at ({u}, {v})")]
    DiscontinuousGaussMap { u: f64, v: f64 },

    #[error("normal frame is degenerate at ({u}, {v})")]
    DegenerateFrame { u: f64, v: f64 },

    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("causal table cross-check failed: {0}")]
    InconsistentTable(String),

    #[error("mean curvature vector vanishes; mean directions are undefined")]
    HUndefined,

    #[error("direction is not asymptotic (|delta(d)| = {residual:e})")]
    NotAsymptotic { residual: f64 },

    #[error("not lightlike: {0}")]
    NotLightlike(String),

    #[error("not linearly independent: {0}")]
    NotIndependent(String),

    #[error("condition `{condition}` violated at s = {s}")]
    ConditionViolated { condition: String, s: f64 },

    #[error("surface leaves the anti-de Sitter space at ({u}, {v}): <psi,psi> = {norm}")]
    NotInAds { u: f64, v: f64, norm: f64 },

    #[error("invalid input: {0}")]
    Input(String),
}

impl Error {
    /// Input errors (malformed definitions) as opposed to numerical failures.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::UnknownIdentifier { .. }
                | Error::Input(_)
                | Error::InconsistentInvariants(_)
                | Error::NotLightlike(_)
                | Error::NotIndependent(_)
                | Error::ConditionViolated { .. }
                | Error::TooFewPoints { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
