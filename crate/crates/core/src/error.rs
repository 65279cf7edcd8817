use thiserror::Error;

/// Errors raised by the trajectory engines and their helpers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("InvalidConfig: {0}")]
    InvalidConfig(String),
    #[error("InvalidState: {0}")]
    InvalidState(String),
    #[error("InvalidArgument: {0}")]
    InvalidArgument(String),
    #[error("DegeneratePhase: x0 = {x0} is an integer, cot(pi*x0) is undefined; perturb x0")]
    DegeneratePhase { x0: f64 },
    #[error("DegenerateConstant: the first-integral constant vanishes")]
    DegenerateConstant,
    #[error("DegenerateBranch: y'(0) = 0 and y''(0) = 0, branch sign undetermined")]
    DegenerateBranch,
    #[error("BranchBoundary: |cot(pi*x0)| = {cot} lies on the separatrix K0 = {k0}")]
    BranchBoundary { cot: f64, k0: f64 },
    #[error("ModulusOutOfRange: k^2 = {0}")]
    ModulusOutOfRange(f64),
    #[error("ConditionViolated: C = {c} <= pi^2 c0^2 = {bound}")]
    ConditionViolated { c: f64, bound: f64 },
    #[error("WrongCase: {0}")]
    WrongCase(String),
    #[error("QuadratureFailure: no convergence on [{a}, {b}] (error estimate {err:e})")]
    QuadratureFailure { a: f64, b: f64, err: f64 },
    #[error("StepTooLarge: first-integral residual {residual:e} exceeds {limit:e} at dt = {dt:e}")]
    StepTooLarge { residual: f64, limit: f64, dt: f64 },
    #[error("ToleranceNotMet: step size underflow at t = {t}")]
    ToleranceNotMet { t: f64 },
    #[error("MethodsDisagree: {what}: {a} vs {b}")]
    MethodsDisagree { what: String, a: f64, b: f64 },
    #[error("SpanTooShort: {0}")]
    SpanTooShort(String),
    #[error("PeriodNotFound: z bounded = {z_bounded}, net drift = {drift}")]
    PeriodNotFound { z_bounded: bool, drift: f64 },
    #[error("BatchFailures: {0} grid cells could not be classified")]
    BatchFailures(usize),
    #[error("EmptyTrajectory")]
    EmptyTrajectory,
}

impl Error {
    /// True for errors caused by the caller's input rather than by a numerical method.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidConfig(_)
                | Error::InvalidState(_)
                | Error::InvalidArgument(_)
                | Error::DegeneratePhase { .. }
                | Error::BranchBoundary { .. }
                | Error::ModulusOutOfRange(_)
                | Error::WrongCase(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
