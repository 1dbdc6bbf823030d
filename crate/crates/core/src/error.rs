use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the analytic and simulation layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at {0}")]
    Pole(Complex64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid Fox H specification: {0}")]
    InvalidSpec(String),

    #[error("contour integral did not converge: {0}")]
    Convergence(String),

    #[error("contour abscissa {0} coincides with a pole")]
    PoleOnContour(f64),

    #[error("frequency {freq_ghz} GHz outside absorption table range [{lo_ghz}, {hi_ghz}] GHz")]
    Range { freq_ghz: f64, lo_ghz: f64, hi_ghz: f64 },

    #[error("topology term index {index} out of range (terms: {len})")]
    Index { index: usize, len: usize },

    #[error("CDF evaluated to {value}, outside the tolerance band [-1e-6, 1 + 1e-6]")]
    Consistency { value: f64 },

    #[error("degenerate residue: {0}")]
    Degenerate(String),

    #[error("empty sample batch")]
    EmptyBatch,

    #[error("absorption table: {0}")]
    Table(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
