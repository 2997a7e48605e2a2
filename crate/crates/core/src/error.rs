use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),

    #[error("polyline needs at least 2 points, got {0}")]
    TooFewPoints(usize),

    #[error("integrator failure: {0}")]
    Integrator(String),

    #[error("coincident endpoints")]
    CoincidentEndpoints,

    /// Root-finding could not bracket the target; `table` holds sampled (parameter, value) pairs.
    #[error("root bracket failure for target {target}: sampled {table:?}")]
    Bracket { target: f64, table: Vec<(f64, f64)> },

    #[error("width is not monotone near r0 = {r0}")]
    NonMonotoneWidth { r0: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("relaxation did not converge after {iterations} iterations (max balance defect {defect:e})")]
    NonConvergence { iterations: usize, defect: f64 },

    #[error("interior vertices {a} and {b} collided (distance {distance:e})")]
    VertexCollision { a: usize, b: usize, distance: f64 },

    #[error("time step {dt:e} violates stability limit {limit:e} at t = {t}")]
    CflViolation { dt: f64, limit: f64, t: f64 },

    #[error("document error: {0}")]
    Document(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
