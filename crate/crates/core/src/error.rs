use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("non-removable singularity: nu = {nu} does not cancel the pole for the {family} family")]
    NonRemovableSingularity { nu: f64, family: &'static str },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("point ({x}, {y}) is within the guard radius of a singular point (+-pi, 0)")]
    SingularPoint { x: f64, y: f64 },
    #[error("point ({x}, {y}) is outside the admissible range")]
    OutOfRange { x: f64, y: f64 },
    #[error("quadrature did not reach tolerance (estimate {estimate:e}, error {error:e})")]
    QuadratureFailure { estimate: f64, error: f64 },
    #[error("operation requires the {expected} family")]
    WrongFamily { expected: &'static str },
    #[error("no convergence after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("critical point is not a saddle (hessian determinant {det:e})")]
    NotASaddle { det: f64 },
    #[error("level curve stalled at a stagnation point ({x}, {y}) of non-matching level")]
    StallAtStagnation { x: f64, y: f64 },
    #[error("arc-length budget exceeded after {length} units")]
    BudgetExceeded { length: f64 },
    #[error("no sign change on [{a}, {b}]")]
    NoSignChange { a: f64, b: f64 },
    #[error("domain assembly failed: {0}")]
    AssemblyFailure(String),
    #[error("the potential trace does not change sign on the free surface")]
    NoSurfaceZero,
    #[error("no interior minimum of the stream trace")]
    NoInteriorMinimum,
    #[error("degenerate gradient at x = {x}")]
    DegenerateGradient { x: f64 },
    #[error("level {c} outside the admissible range (0, {max})")]
    LevelOutOfRange { c: f64, max: f64 },
    #[error("case {case} is not available for nu = {nu}")]
    CaseMismatch { case: &'static str, nu: f64 },
    #[error("start point residual {residual:e} exceeds the level tolerance")]
    InvalidStart { residual: f64 },
}
