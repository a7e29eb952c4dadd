//! Closed-form maximum-likelihood estimation from a paired sample.
//!
//! The log-likelihood separates into a gamma part h(alpha, beta) driven by
//! the x's alone and a location/scale part g(delta, mu, upsilon) that is a
//! weighted least squares problem with weights 1/x, so every estimator is
//! explicit: alpha solves w(alpha) = ln xbar - mean ln x, beta = alpha/xbar,
//! and (delta, mu, upsilon) come from the normal equations.

use serde::{Deserialize, Serialize};

use crate::asympt::{self, LimitLawSpec, Regime};
use crate::dist::BgglParams;
use crate::error::{Error, Result};
use crate::special::{ln_gamma_raw, solve_w_inverse};

/// Estimates classify as boundary when |alpha_hat - 1| is within this tolerance.
pub const DEFAULT_BOUNDARY_TOL: f64 = 0.02;

/// Paired observations (x_i, y_i) with x_i > 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedSample {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl PairedSample {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::InvalidData(format!(
                "x and y lengths differ: {} vs {}",
                x.len(),
                y.len()
            )));
        }
        if x.is_empty() {
            return Err(Error::InvalidData("empty sample".into()));
        }
        if x.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidData("all x must be finite and > 0".into()));
        }
        if y.iter().any(|&v| !v.is_finite()) {
            return Err(Error::InvalidData("all y must be finite".into()));
        }
        Ok(Self { x, y })
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }
    pub fn y(&self) -> &[f64] {
        &self.y
    }
    pub fn len(&self) -> usize {
        self.x.len()
    }
    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

/// Degenerate sample configurations detected during fitting.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegenerateFlags {
    /// All x_i identical: delta is not uniquely estimable.
    pub all_x_equal: bool,
    /// n <= 2: upsilon_hat is forced to zero by the geometry.
    pub n_le_2: bool,
    /// The points lie exactly on a line y = delta + mu x (upsilon_hat = 0, n >= 3).
    pub collinear: bool,
}

impl DegenerateFlags {
    pub fn any(&self) -> bool {
        self.all_x_equal || self.n_le_2 || self.collinear
    }
}

/// Point estimates of the five parameters. Unlike [`BgglParams`] this carries
/// no positivity invariant: sigma may be exactly zero on degenerate samples
/// and delta is NaN when all x are equal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaEstimate {
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub mu: f64,
    pub sigma: f64,
}

impl ThetaEstimate {
    pub fn upsilon(&self) -> f64 {
        self.sigma * self.sigma
    }

    /// Validated parameter vector, when the estimate is inside the parameter space.
    pub fn params(&self) -> Result<BgglParams> {
        BgglParams::new(self.alpha, self.beta, self.delta, self.mu, self.sigma)
    }
}

/// Result of [`fit_location_scale`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocationScaleFit {
    pub delta: f64,
    pub mu: f64,
    pub upsilon: f64,
    pub flags: DegenerateFlags,
}

/// Full fit: point estimates, rate regime, scaling diagonal and limit law.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitResult {
    pub theta: ThetaEstimate,
    /// Unbiased variance estimate n/(n-2) upsilon_hat (0 when n = 2).
    pub s2: f64,
    pub regime: Regime,
    /// Diagonal of the scaling matrix D_n at the sample size.
    pub d_n: [f64; 5],
    /// Asymptotic law of D_n (theta_hat - theta), when the estimate admits one.
    pub limit_law: Option<LimitLawSpec>,
    pub flags: DegenerateFlags,
    pub n: usize,
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn all_equal(v: &[f64]) -> bool {
    v.iter().all(|&x| x == v[0])
}

/// MLE (alpha_hat, beta_hat) of the gamma law of the x's.
pub fn fit_gamma(x: &[f64]) -> Result<(f64, f64)> {
    if x.len() < 2 {
        return Err(Error::Degenerate(format!(
            "gamma fit requires n >= 2, got {}",
            x.len()
        )));
    }
    if x.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::InvalidData("all x must be > 0".into()));
    }
    if all_equal(x) {
        return Err(Error::Degenerate(
            "all x equal: gamma shape is not estimable".into(),
        ));
    }
    let xbar = mean(x);
    let mean_ln = x.iter().map(|&v| v.ln()).sum::<f64>() / x.len() as f64;
    let rhs = xbar.ln() - mean_ln;
    if !(rhs > 0.0) {
        return Err(Error::Degenerate(format!(
            "nonpositive likelihood gap ln(xbar) - mean(ln x) = {rhs}"
        )));
    }
    let alpha = solve_w_inverse(rhs)?;
    Ok((alpha, alpha / xbar))
}

/// MLE (delta_hat, mu_hat, upsilon_hat) of the location/scale block.
///
/// When all x are equal, delta is not uniquely estimable: any real delta
/// paired with mu = (ybar - delta)/xbar attains the maximum. The returned
/// value uses the delta = 0 selection (mu = ybar/xbar), reports delta as NaN
/// and sets the `all_x_equal` flag; upsilon is the common maximizer
/// sum (y - ybar)^2 / (n x).
pub fn fit_location_scale(sample: &PairedSample) -> Result<LocationScaleFit> {
    let n = sample.len();
    if n == 1 {
        return Err(Error::Degenerate(
            "n = 1: likelihood is unbounded as upsilon -> 0".into(),
        ));
    }
    let x = sample.x();
    let y = sample.y();
    let xbar = mean(x);
    let ybar = mean(y);
    let mut flags = DegenerateFlags {
        n_le_2: n <= 2,
        ..Default::default()
    };

    if all_equal(x) {
        flags.all_x_equal = true;
        let upsilon =
            y.iter().map(|&v| (v - ybar) * (v - ybar)).sum::<f64>() / (x[0] * n as f64);
        return Ok(LocationScaleFit {
            delta: f64::NAN,
            mu: ybar / xbar,
            upsilon,
            flags,
        });
    }

    // centered form: delta = sum c_i y_i / sum c_i with c_i = xbar/x_i - 1,
    // algebraically identical to the ratio of uncentered averages but immune
    // to cancellation when the x's are nearly equal
    let mut c_sum = 0.0;
    let mut cy_sum = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        let c = xbar / xi - 1.0;
        c_sum += c;
        cy_sum += c * yi;
    }
    let delta = cy_sum / c_sum;
    let mu = (ybar - delta) / xbar;
    let mut upsilon = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| {
            let r = yi - delta - mu * xi;
            r * r / xi
        })
        .sum::<f64>()
        / n as f64;

    // exact-fit detection: residual magnitude at rounding level
    let scale = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| yi * yi / xi)
        .sum::<f64>()
        / n as f64;
    if upsilon <= 1e-24 * scale.max(f64::MIN_POSITIVE) {
        upsilon = 0.0;
        if n >= 3 {
            flags.collinear = true;
        }
    }
    if n == 2 {
        // w(delta_hat) = 0 identically for two points
        upsilon = 0.0;
    }
    Ok(LocationScaleFit { delta, mu, upsilon, flags })
}

/// Exact conditional covariance of (delta_hat, mu_hat) given the x's:
/// sigma^2 [[sum 1/x, n], [n, sum x]]^{-1}.
pub fn conditional_sampling_law(x: &[f64], theta: &BgglParams) -> Result<[[f64; 2]; 2]> {
    if x.is_empty() || x.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::InvalidData("x must be nonempty and positive".into()));
    }
    let n = x.len() as f64;
    let s_inv: f64 = x.iter().map(|&v| 1.0 / v).sum();
    let s: f64 = x.iter().sum();
    let det = s_inv * s - n * n;
    if det <= 0.0 {
        return Err(Error::Degenerate(
            "all x equal: conditional covariance is singular".into(),
        ));
    }
    let s2 = theta.sigma() * theta.sigma();
    Ok([
        [s2 * s / det, -s2 * n / det],
        [-s2 * n / det, s2 * s_inv / det],
    ])
}

/// Full five-parameter fit with regime classification and limit-law blocks.
pub fn fit_bggl(sample: &PairedSample) -> Result<FitResult> {
    fit_bggl_with_tol(sample, DEFAULT_BOUNDARY_TOL)
}

/// As [`fit_bggl`] with an explicit boundary-classification tolerance on |alpha_hat - 1|.
pub fn fit_bggl_with_tol(sample: &PairedSample, boundary_tol: f64) -> Result<FitResult> {
    let n = sample.len();
    let (alpha, beta) = fit_gamma(sample.x())?;
    let ls = fit_location_scale(sample)?;
    let sigma = ls.upsilon.sqrt();
    let theta = ThetaEstimate {
        alpha,
        beta,
        delta: ls.delta,
        mu: ls.mu,
        sigma,
    };
    let s2 = if n >= 3 {
        n as f64 / (n as f64 - 2.0) * ls.upsilon
    } else {
        0.0
    };
    let regime = if (alpha - 1.0).abs() <= boundary_tol {
        Regime::Boundary
    } else if alpha > 1.0 {
        Regime::Regular
    } else {
        Regime::Heavy
    };
    let d_n = asympt::scaling_vector(regime, alpha, n)?;
    let limit_law = theta
        .params()
        .ok()
        .and_then(|p| asympt::limit_law(&p, regime).ok());
    Ok(FitResult {
        theta,
        s2,
        regime,
        d_n,
        limit_law,
        flags: ls.flags,
        n,
    })
}

/// OLS fit of ln v_t on (1, ln v_{t-1}): the AR(1) model of log volatility.
/// Returns (a_hat, b_hat, residuals); residuals have mean exactly zero.
pub fn fit_ar1_log(v: &[f64]) -> Result<(f64, f64, Vec<f64>)> {
    if v.len() < 3 {
        return Err(Error::InvalidData(format!(
            "AR(1) fit requires length >= 3, got {}",
            v.len()
        )));
    }
    if v.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::InvalidData("AR(1) fit requires positive series".into()));
    }
    let ln_v: Vec<f64> = v.iter().map(|&x| x.ln()).collect();
    let resp = &ln_v[1..];
    let pred = &ln_v[..ln_v.len() - 1];
    let m = resp.len() as f64;
    let xbar = pred.iter().sum::<f64>() / m;
    let ybar = resp.iter().sum::<f64>() / m;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&xi, &yi) in pred.iter().zip(resp) {
        sxx += (xi - xbar) * (xi - xbar);
        sxy += (xi - xbar) * (yi - ybar);
    }
    if sxx == 0.0 {
        return Err(Error::Degenerate(
            "constant log-volatility series: AR slope not identifiable".into(),
        ));
    }
    let b = sxy / sxx;
    let a = ybar - b * xbar;
    let residuals: Vec<f64> = pred
        .iter()
        .zip(resp)
        .map(|(&xi, &yi)| yi - a - b * xi)
        .collect();
    Ok((a, b, residuals))
}

/// The location/scale part g(delta, mu, upsilon) of the per-observation
/// log-likelihood; the MLE of (delta, mu, upsilon) maximizes it.
pub fn loglik_location_scale(sample: &PairedSample, delta: f64, mu: f64, upsilon: f64) -> f64 {
    let n = sample.len() as f64;
    let xbar = mean(sample.x());
    let ybar = mean(sample.y());
    let quad: f64 = sample
        .x()
        .iter()
        .zip(sample.y())
        .map(|(&xi, &yi)| (yi - delta) * (yi - delta) / xi)
        .sum::<f64>()
        / n;
    -0.5 * upsilon.ln() - quad / (2.0 * upsilon) - mu * mu * xbar / (2.0 * upsilon)
        + mu * (ybar - delta) / upsilon
}

/// The gamma part h(alpha, beta) of the per-observation log-likelihood.
pub fn loglik_gamma(x: &[f64], alpha: f64, beta: f64) -> f64 {
    let xbar = mean(x);
    let mean_ln = x.iter().map(|&v| v.ln()).sum::<f64>() / x.len() as f64;
    alpha * beta.ln() - ln_gamma_raw(alpha) + alpha * mean_ln - beta * xbar
}
