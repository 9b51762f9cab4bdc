//! Exact computations for conditionally free random variables.

pub mod condexp;
pub mod cumulants;
pub mod denoise;
pub mod engine;
pub mod error;
pub mod linearize;
pub mod matrix;
pub mod multiplicative;
pub mod ncpoly;
pub mod oracle;
pub mod partitions;
pub mod ring;
pub mod scalar;
pub mod series;
pub mod suites;

pub use error::{Error, Result};
pub use matrix::{ScalarMatrix, SquareMatrix};
pub use ncpoly::{Letter, NCPolynomial, Word};
pub use ring::Ring;
pub use scalar::{GaussianRational, GQ};
pub use series::{ScalarSeries, TruncSeries};
