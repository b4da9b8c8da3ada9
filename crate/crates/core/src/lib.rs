//! Exact computation of cosine sign correlations.
//!
//! For a strictly increasing set of positive integers a_1 < ... < a_n, the
//! sign correlation P(a_1,...,a_n) is the fraction of x in [0, 2*pi] where
//! cos(a_1 x), ..., cos(a_n x) are all strictly positive or all strictly
//! negative. Everything here is exact: probabilities are reduced rationals,
//! interval endpoints are rational multiples of pi, and sign evaluation is
//! pure integer arithmetic.
//!
//! The crate provides two independent exact engines (a cell-counting oracle
//! and a sweep line over cosine zeros), pairwise-correlation laws, prefix
//! sandwich bounds, seeded Monte-Carlo estimation, and pruned searches for
//! extremal configurations.

pub mod arith;
pub mod bounds;
pub mod config;
pub mod error;
pub mod exact;
pub mod fourier;
pub mod montecarlo;
pub mod rational;
pub mod search;
pub mod trig;

pub use config::Configuration;
pub use error::{Error, Result};
pub use exact::{
    exact_probability, exact_probability_cells, exact_probability_sweep, is_tight, sign_spectrum,
    SignSpectrum,
};
pub use rational::ExactRational;
pub use trig::{cos_sign_at, CosSign, PiFraction};
