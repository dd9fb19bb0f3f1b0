use thiserror::Error;

use crate::frame::IsometryDegeneracy;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("structure constants must be finite")]
    NonFinite,

    #[error("not classifiable: {0}")]
    NotClassifiable(IsometryDegeneracy),

    #[error("basis vectors span a degenerate plane (|A x B| = {wedge:e})")]
    DegenerateSpan { wedge: f64 },

    #[error("plane is not closed under the bracket (normal residual {residual:e})")]
    NotASubalgebra { residual: f64 },

    #[error("initial velocity must have unit length (got |v| = {norm})")]
    InvalidInitialSpeed { norm: f64 },

    #[error("integration step must be positive and finite (got {0})")]
    InvalidStep(f64),

    #[error("bad signature for closed form: {0}")]
    BadSignature(String),

    #[error("closed-form branch does not apply: {0}")]
    BranchMismatch(String),

    #[error("case `{case}` is not among the classified subalgebras of this group")]
    CaseMismatch { case: String },

    #[error("unknown case label `{0}`")]
    UnknownCase(String),

    #[error("tangent frame degenerates (x^2 + z^2 = {0:e})")]
    FrameDegenerate(f64),

    #[error("velocity is not normal to the orbit of case `{case}` (residual {residual:e})")]
    FrameMismatch { case: String, residual: f64 },

    #[error("no closed-form curvature available for case `{0}`")]
    NoClosedForm(String),

    #[error("grid resolution must be at least {min} (got {n})")]
    InvalidGrid { n: usize, min: usize },
}
