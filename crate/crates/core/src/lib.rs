//! Bivariate gamma / generalized Laplace (BGGL) distribution toolkit.
//!
//! The BGGL law is the joint distribution of (X, Y) where X is gamma and
//! Y = delta + mu X + sigma sqrt(X) Z with Z standard normal independent of X.
//! This crate provides exact densities and transforms, random generation,
//! closed-form maximum-likelihood estimation with its nonstandard rate
//! regimes, a replication-study harness, and a returns/volatility fitting
//! pipeline for index data.

pub mod asympt;
pub mod dist;
pub mod error;
pub mod estimate;
pub mod finance;
pub mod montecarlo;
pub mod sample;
pub mod special;

pub use dist::BgglParams;
pub use error::{Error, Result};
pub use estimate::PairedSample;
pub use sample::RngStream;
