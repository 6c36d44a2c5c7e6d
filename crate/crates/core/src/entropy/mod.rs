//! Entropy computations, all in nats.
//!
//! Topological entropy of a general 2D SFT is not computable, so this module
//! only produces certified brackets: upper bounds from finite-size and strip
//! counts of locally admissible patterns, lower bounds from explicit
//! families of admissible patterns.

mod bounds;
mod distribution;
mod empirical;
mod transfer;

use std::io::Write;

use thiserror::Error;

use crate::sft::SftError;

pub use bounds::{
    finite_size_upper_bound, finite_size_with, ln_biguint, placement_lower_bound, wr_grid_witnesses,
    PlacementStyle,
};
pub use distribution::{marginal, shannon_entropy, FiniteDistribution, MASS_TOLERANCE};
pub use empirical::{block_entropy_rate, EmpiricalMeasure};
pub use transfer::{
    cyclic_components, spectral_radius, strip_bound_with, strip_entropy_upper_bound, SpectralBracket,
    StripBound, TransferMatrix, DEFAULT_ITERATION_CAP, DEFAULT_STATE_CAP,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EntropyError {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("transfer matrix has more than {cap} states")]
    StateExplosion { cap: usize },
    #[error("power iteration did not converge after {iterations} steps; bracket [{lower}, {upper}]")]
    NonConvergence {
        lower: f64,
        upper: f64,
        iterations: usize,
    },
    #[error("empirical measure has no windows")]
    EmptyMeasure,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Sft(#[from] SftError),
}

/// Writes `(x, value)` rows as CSV with the given header.
pub fn write_series_csv<W: Write>(
    out: W,
    header: [&str; 2],
    rows: &[(usize, f64)],
) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for (x, v) in rows {
        w.write_record([x.to_string(), format!("{v:.12}")])?;
    }
    w.flush()?;
    Ok(())
}
