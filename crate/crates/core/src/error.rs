use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// Scalar payloads are carried as `f64` regardless of the working type.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("trajectory left the domain of the curvature law at s = {s} (tau = {tau}, nu = {nu})")]
    DomainExit { s: f64, tau: f64, nu: f64 },

    #[error("adaptive step fell below {min_step} at s = {s}")]
    StepUnderflow { s: f64, min_step: f64 },

    #[error("step budget of {max_steps} exhausted at s = {s}")]
    TooManySteps { s: f64, max_steps: usize },

    #[error("curve covers s in [{s_min}, {s_max}] but needs at least |s| >= {required} on both sides")]
    CurveTooShort { s_min: f64, s_max: f64, required: f64 },

    #[error("ratio p/q = {ratio} is outside the admissible interval (1, {upper})")]
    RatioOutOfRange { ratio: f64, upper: f64 },

    #[error("p = {p} and q = {q} must be positive and relatively prime")]
    NotCoprime { p: u64, q: u64 },

    #[error("root bracket could not be established: {0}")]
    BracketFailure(String),

    #[error("p/q = {ratio} is within {gap:e} of alpha_h = {alpha}; winding number is ill-conditioned")]
    NearOriginAmbiguity { ratio: f64, alpha: f64, gap: f64 },

    #[error("matrix is not skew-symmetric (max |A + A^T| = {deviation:e})")]
    NonSkew { deviation: f64 },

    #[error("translation is not orthogonal to the rotation: |A c| = {norm:e}")]
    OrthogonalityViolated { norm: f64 },

    #[error("pitch must be finite (mu > 0) for this operation")]
    InfinitePitch,

    #[error("curve has no samples")]
    EmptyCurve,

    #[error("vertex {0} lies on the mesh boundary")]
    BoundaryVertex(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for violations of a documented precondition (bad user input), as
    /// opposed to numerical or I/O failures.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::RatioOutOfRange { .. }
                | Error::NotCoprime { .. }
                | Error::NearOriginAmbiguity { .. }
                | Error::NonSkew { .. }
                | Error::OrthogonalityViolated { .. }
                | Error::InfinitePitch
                | Error::CurveTooShort { .. }
                | Error::EmptyCurve
                | Error::InvalidInput(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
