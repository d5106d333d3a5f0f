//! Failure cases that are data-dependent rather than programming errors.
//!
//! Contract violations (dimension or grade mismatches, non-skew matrices,
//! out-of-range indices) panic; everything a well-formed program can still
//! run into on bad input surfaces as [`Error`].

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("linear map is singular")]
    SingularMap,

    #[error("frame is linearly dependent")]
    DependentFrame,

    #[error("plane is not calibrated: squared defect {defect}")]
    NotCalibrated { defect: f64 },

    #[error("calibration form restricts to zero on the frame; orientation undetermined")]
    OrientationUndetermined,

    #[error("1-form has a component along the distinguished axis e0")]
    E0Component,

    #[error("form is not of type (1,1) for the chosen complex pairing: defect {defect}")]
    NotType11 { defect: f64 },

    #[error("unsupported grade {0} for this operation")]
    UnsupportedGrade(usize),

    #[error("coefficient cannot be represented in this scalar mode: {0}")]
    CoefficientMode(String),

    #[error("input mixes exact (rational string) and float coefficients")]
    MixedModes,

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("polynomial degree {0} exceeds the supported cap {1}")]
    DegreeCap(usize, usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
