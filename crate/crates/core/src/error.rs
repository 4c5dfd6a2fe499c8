use thiserror::Error;

/// Every failure mode of the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("omega must be positive, got {0}")]
    RejectsNonpositiveOmega(f64),
    #[error("lambda must be non-positive, got {0} (use the mirror symmetry for lambda > 0)")]
    RejectsPositiveLambda(f64),
    #[error("magnetic field must be non-negative, got {0}")]
    RejectsNegativeField(f64),
    #[error("regular model requires a potential")]
    MissingPotential,
    #[error("invalid potential: {0}")]
    InvalidPotential(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid too coarse: h = {h} exceeds {limit}")]
    GridTooCoarse { h: f64, limit: f64 },
    #[error("grid does not place a node on the interaction line x = 0")]
    GridMisaligned,
    #[error("unsupported combination: {0}")]
    UnsupportedCombination(String),
    #[error("no sign change of the ground energy for |lambda| up to {max_abs_lambda}")]
    BracketFailure { max_abs_lambda: f64 },
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("vector has zero norm")]
    ZeroVector,
    #[error("dimension {n} too small for {k} eigenpairs")]
    DimensionTooSmall { n: usize, k: usize },
    #[error("Lanczos breakdown could not be recovered")]
    BreakdownUnrecoverable,
    #[error("supercritical input (lambda = {lambda} < -2 omega) has no lower bound")]
    SupercriticalInput { lambda: f64 },
    #[error("comparison operator is not normalized to inf = -1 (inf = {inf})")]
    NotNormalized { inf: f64 },
    #[error("parameters are not supercritical (inf of the comparison operator = {inf})")]
    NotSupercritical { inf: f64 },
    #[error("comparison operator is not positive (inf = {inf})")]
    NotSubcritical { inf: f64 },
    #[error("frequency window is empty (mu - threshold = {mu_tilde} <= eps = {eps})")]
    WindowEmpty { mu_tilde: f64, eps: f64 },
    #[error("packet norm bound not reached after doubling m up to {m}")]
    QuadratureUnderResolved { m: usize },
    #[error("cutoff target {target} unreachable at k = {k}; smallest achievable is {achievable}")]
    TargetUnreachable { k: f64, target: f64, achievable: f64 },
    #[error("solvability integral {value} exceeds tolerance")]
    OrthogonalityViolated { value: f64 },
    #[error("linear solve failed: {0}")]
    SolveFailed(String),
    #[error("quasimode support up to y = {needed} exceeds the window (y <= {available})")]
    SupportOverflow { needed: f64, available: f64 },
    #[error("parameters are not critical (lambda + 2 omega = {offset})")]
    NotCritical { offset: f64 },
    #[error("quasimode grid ({grid}) does not match operator dimension ({dim})")]
    GridMismatch { grid: usize, dim: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
