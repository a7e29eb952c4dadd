//! Scalar special functions: gamma-family functions, modified Bessel K,
//! normal CDF/quantile, the gamma-shape likelihood link, and adaptive
//! quadrature. All functions here are pure and thread-safe.

mod bessel;
mod gamma_fn;
mod normal;
pub mod quad;
mod solver;

pub use bessel::{bessel_k, f_alpha, ln_bessel_k};
pub use gamma_fn::{digamma, gamma_cdf, gamma_quantile, log_gamma, trigamma, EULER_GAMMA};
pub use normal::{normal_cdf, normal_pdf, normal_quantile};
pub use solver::{solve_w_inverse, w};

pub(crate) use bessel::ln_bessel_k_raw;
pub(crate) use gamma_fn::{digamma_raw, gamma_raw, ln_gamma_raw, trigamma_raw};
