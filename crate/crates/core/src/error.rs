use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("path passes within the guard radius of branch point {point}")]
    PathHitsBranchPoint { point: Complex64 },
    #[error("adaptive quadrature could not reach tolerance {tol:e} (error estimate {estimate:e})")]
    ToleranceNotMet { tol: f64, estimate: f64 },
    #[error("power series did not converge: {0}")]
    NoConvergence(String),
    #[error("series argument {0} is outside the usable radius")]
    SeriesOutOfRange(Complex64),
    #[error("lambda = {0} must differ from 0 and 1")]
    InvalidLambda(Complex64),
    #[error("tau = {0} is not in the upper half plane")]
    NotUpperHalfPlane(Complex64),
    #[error("{0} lies on a lattice point")]
    PoleAtLatticePoint(Complex64),
    #[error("xi = {0} lies on a slit; an approach side (north or south) is required")]
    OnSlitWithoutSide(Complex64),
    #[error("xi = {0} is outside the admissible domain: {1}")]
    OutOfDomain(Complex64, String),
    #[error("graph search failed for z = {z}: {reason}")]
    SearchFailed { z: Complex64, reason: String },
    #[error("loop does not wind exactly once around a single puncture (winding numbers {0:?})")]
    AmbiguousLoop([i64; 3]),
    #[error("polynomial degree {0} is below the admissible minimum 20")]
    DegreeTooSmall(u64),
    #[error("tracing budget exceeded: {0}")]
    TracingBudgetExceeded(String),
    #[error("unimodular matrix rejected: {0}")]
    InvalidUnimodular(String),
    #[error("integer overflow while composing formats")]
    OverflowGuard,
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable code, used by the CLI output records.
    pub fn code(&self) -> &'static str {
        match self {
            Error::PathHitsBranchPoint { .. } => "path_hits_branch_point",
            Error::ToleranceNotMet { .. } => "tolerance_not_met",
            Error::NoConvergence(_) => "no_convergence",
            Error::SeriesOutOfRange(_) => "series_out_of_range",
            Error::InvalidLambda(_) => "invalid_lambda",
            Error::NotUpperHalfPlane(_) => "not_upper_half_plane",
            Error::PoleAtLatticePoint(_) => "pole_at_lattice_point",
            Error::OnSlitWithoutSide(_) => "on_slit_without_side",
            Error::OutOfDomain(..) => "out_of_domain",
            Error::SearchFailed { .. } => "search_failed",
            Error::AmbiguousLoop(_) => "ambiguous_loop",
            Error::DegreeTooSmall(_) => "degree_too_small",
            Error::TracingBudgetExceeded(_) => "tracing_budget_exceeded",
            Error::InvalidUnimodular(_) => "invalid_unimodular",
            Error::OverflowGuard => "overflow_guard",
            Error::Parse(_) => "parse_error",
        }
    }

    /// True for failures of the numerical engine rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ToleranceNotMet { .. }
                | Error::NoConvergence(_)
                | Error::TracingBudgetExceeded(_)
                | Error::SearchFailed { .. }
        )
    }
}
