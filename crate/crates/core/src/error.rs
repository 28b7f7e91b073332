use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice state: {0}")]
    InvalidState(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("sup|q| = {sup} reached 1 at t = {t} (step too large or invalid input)")]
    Blowup { t: f64, sup: f64 },

    #[error("sup|q| = {sup} exceeds the conserved bound rho0 = {rho0} at t = {t}")]
    BoundViolation { t: f64, sup: f64, rho0: f64 },

    #[error("boundary spill {spill:e} exceeds tolerance {tol:e} at t = {t}; widen the window")]
    Spill { t: f64, spill: f64, tol: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular transfer step at site {site}")]
    SingularStep { site: i64 },

    #[error("reflection coefficient |r| = {0} is not below 1")]
    ReflectionTooLarge(f64),

    #[error("stationary points merge: |n/t| = {v} is within {margin} of 2")]
    MergingPoints { v: f64, margin: f64 },

    #[error("quadrature did not reach tolerance {tol:e} (estimate {estimate:e})")]
    Quadrature { tol: f64, estimate: f64 },

    #[error("Gamma has a pole at {0}")]
    Pole(f64),

    #[error("imaginary residual {residual:e} exceeds {threshold:e}; inconsistent branch or sign convention")]
    Convention { residual: f64, threshold: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
