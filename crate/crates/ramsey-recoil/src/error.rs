use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate distribution: {0}")]
    DegenerateDistribution(String),

    #[error("invalid aperture: {0}")]
    InvalidAperture(String),

    #[error("momentum cutoff {cutoff} too small: boundary population {population:.3e} exceeds {limit:.1e}")]
    CutoffTooSmall {
        cutoff: usize,
        population: f64,
        limit: f64,
    },

    #[error("ODE tolerance not met: {0}")]
    ToleranceNotMet(String),

    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),

    #[error("fringe extremum search did not converge after {iterations} iterations (last update {last_update:.3e} rad/s)")]
    NoConvergence { iterations: usize, last_update: f64 },

    #[error("degenerate fringe curvature at detuning {detuning:.6e} rad/s")]
    DegenerateCurvature { detuning: f64 },

    #[error("degenerate envelopes: {0}")]
    DegenerateEnvelopes(String),

    #[error("config parse error: {0}")]
    Parse(String),

    #[error("config validation error: {0}")]
    Validation(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
