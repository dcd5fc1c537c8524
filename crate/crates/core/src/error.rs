use thiserror::Error;

use crate::bigseries::SeriesError;
use crate::models::{ModelError, RatioKind};

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("model `{model}` is {kind}; a 1/n series needs RATIONAL_IN_N, use the term list instead")]
    Classification { model: String, kind: RatioKind },
    #[error("n = {n} is off the lattice of period {period}: there are no objects of that size")]
    OffLattice { n: usize, period: usize },
    #[error("n = {n} is too small for a truncation at r = {r} (need n > {min})")]
    TooSmall { n: usize, r: usize, min: usize },
    #[error("truncation order r must be at least {min}")]
    BadTruncation { min: usize },
    #[error("diagnostic window {start}..={end} is too short: need at least 4 points")]
    WindowTooShort { start: usize, end: usize },
    #[error("sequences live on different lattices (periods {left} and {right})")]
    LatticeMismatch { left: usize, right: usize },
    #[error("diagnostic needs a positive value at index {index}")]
    NonPositive { index: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
