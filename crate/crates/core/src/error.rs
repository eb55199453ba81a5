use alloc::string::String;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the formula.
    #[error("domain error: {what} (got {value})")]
    Domain { what: &'static str, value: f64 },

    /// A run specification violates one of its invariants.
    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    /// Explicit time step too large for the drift rate.
    #[error("unstable time step: rate*dt = {rate_dt} (must be < {limit})")]
    UnstableStep { rate_dt: f64, limit: f64 },

    /// All samples are equal, so no histogram width can be formed.
    #[error("degenerate sample: all {0} values are equal")]
    DegenerateSample(usize),

    /// Not enough samples for the requested statistic.
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    /// Spectral weight near the grid Nyquist frequency.
    #[error("aliasing risk: fraction {weight:e} of the norm sits near the Nyquist wavenumber")]
    Aliasing { weight: f64 },

    /// Wave function has reached the edge of the periodic grid.
    #[error("boundary contamination: fraction {weight:e} of the norm sits at the grid edge")]
    BoundaryContamination { weight: f64 },

    /// Time series too short or too coarse for frequency analysis.
    #[error("under-resolved series: {0}")]
    UnderResolved(String),

    #[error("unknown particle `{0}`")]
    UnknownParticle(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

pub(crate) fn positive(what: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain { what, value })
    }
}

pub(crate) fn non_negative(what: &'static str, value: f64) -> Result<f64> {
    if value >= 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain { what, value })
    }
}
