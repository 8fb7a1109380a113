//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("input {0} is a pole of the correspondence")]
    PoleInput(crate::corr::Cx),

    #[error("root finding did not converge (max residual {residual:.3e})")]
    RootFindingFailure { residual: f64 },

    #[error("Newton continuation diverged at path node {node} after {halvings} step halvings")]
    NewtonDivergence { node: usize, halvings: u32 },

    #[error("cycle points collided (min distance {min_dist:.3e}) at path node {node}")]
    ContinuationCollision { node: usize, min_dist: f64 },

    #[error("backward-orbit seed has multiplier modulus {modulus}, not repelling")]
    SeedNotRepelling { modulus: f64 },

    #[error("raster has {fraction:.4} Unknown fraction, above the classification limit")]
    TooManyUnknown { fraction: f64 },

    #[error("parameter a = {0} lies outside the Klein disk |a-4| <= 3 (or a = 1)")]
    OutsideDisk(crate::corr::Cx),

    #[error("continued fraction is not canonical: {0}")]
    BadContinuedFraction(String),

    #[error("requested precision {0} bits exceeds the 4096-bit cap")]
    PrecisionOverflow(u32),

    #[error("bad fraction p/q = {p}/{q}: {reason}")]
    BadFraction { p: u64, q: u64, reason: String },

    #[error("no disk radius satisfies the CIFS constraints for |c| = {c_abs}")]
    NoValidRadius { c_abs: f64 },

    #[error("Hutchinson image left D1 (CIFS data invalid)")]
    EscapedD1,

    #[error("usage error: {0}")]
    Usage(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
