use thiserror::Error;

/// Errors raised by the simulator and the discrimination pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Bell weights are not normalized (sum of squares = {0})")]
    NotNormalized(f64),

    #[error("matrix is not a valid density operator")]
    NotDensity,

    #[error("matrix is not unitary")]
    NotUnitary,

    #[error("{0} is not a measurement axis")]
    NotMeasurementAxis(usize),

    #[error("mixture weight {0} is negative")]
    NegativeWeight(f64),

    #[error("mixture weights sum to {0}, expected 1")]
    WeightsNotNormalized(f64),

    #[error("mixture has no components")]
    EmptyMixture,

    #[error("shot count must be at least 1")]
    ZeroShots,

    #[error("non-finite parameter")]
    NonFinite,

    #[error("closed form requires w4 = 0 (got {0})")]
    NonZeroW4(f64),

    #[error("{basis} coordinates {coords:?} lie outside the tetrahedron beyond tolerance {tol}")]
    OutsideTetrahedron { basis: &'static str, coords: [f64; 4], tol: f64 },

    #[error("frame gap {0} is outside the open interval (0, pi/2)")]
    InvalidGap(f64),

    #[error("tolerance {0} is outside the open interval (0, 1)")]
    InvalidTolerance(f64),

    #[error("designed rotation misses its target by {0:e}")]
    DesignCheck(f64),

    #[error("sample count must be at least 1")]
    NoSamples,

    #[error("unknown claim `{0}`")]
    UnknownClaim(String),

    #[error("measurement failed: {0}")]
    Measurement(String),
}

pub type Result<T> = std::result::Result<T, Error>;
