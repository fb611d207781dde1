use thiserror::Error;

/// Errors raised by the beamforming library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("angle {angle_deg}° is outside [-90°, 90°]")]
    AngleOutOfRange { angle_deg: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("angle {angle_deg}° is not a grid point (nearest grid angle is {nearest_deg}°)")]
    OffGrid { angle_deg: f64, nearest_deg: f64 },

    #[error("mainlobe window [{lo}, {hi}] exceeds grid index range [0, {last}]")]
    WindowOutOfBounds { lo: i64, hi: i64, last: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max |A - A^H| = {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is singular to working precision{}", iteration_suffix(.iteration))]
    Singular { iteration: Option<usize> },

    #[error("quadratic form has non-negligible imaginary part {imag:e} (real part {real:e})")]
    ComplexQuadraticForm { real: f64, imag: f64 },

    #[error("weights violate the distortionless constraint (|w^H a - 1| = {residual:e})")]
    ConstraintViolated { residual: f64 },

    #[error("SINR denominator is not positive ({value:e})")]
    ZeroDenominator { value: f64 },
}

fn iteration_suffix(iteration: &Option<usize>) -> String {
    match iteration {
        Some(i) => format!(" at iteration {i}"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
