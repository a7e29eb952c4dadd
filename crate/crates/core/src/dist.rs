//! The BGGL distribution object: joint and marginal densities, integral
//! transforms, moments, entropy, Fisher information, the curved
//! exponential-family representation, and the GIG conditional law.
//!
//! Everything is evaluated in log space first; raw densities are exp of the
//! log forms, so large shape or tiny scale parameters do not overflow.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::quad;
use crate::special::{
    digamma_raw, ln_bessel_k_raw, ln_gamma_raw, normal_cdf, trigamma_raw,
};

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Parameter vector theta = (alpha, beta, delta, mu, sigma) of the BGGL law:
/// X ~ GAM(alpha, beta) (rate convention) and Y = delta + mu X + sigma sqrt(X) Z.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BgglParams {
    alpha: f64,
    beta: f64,
    delta: f64,
    mu: f64,
    sigma: f64,
}

impl BgglParams {
    pub fn new(alpha: f64, beta: f64, delta: f64, mu: f64, sigma: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParams(format!("alpha must be > 0, got {alpha}")));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParams(format!("beta must be > 0, got {beta}")));
        }
        if !delta.is_finite() || !mu.is_finite() {
            return Err(Error::InvalidParams(format!(
                "delta and mu must be finite, got {delta}, {mu}"
            )));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParams(format!("sigma must be > 0, got {sigma}")));
        }
        Ok(Self { alpha, beta, delta, mu, sigma })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn sigma(&self) -> f64 {
        self.sigma
    }
    /// upsilon = sigma^2, the scale parameter of the exponential-family form.
    pub fn upsilon(&self) -> f64 {
        self.sigma * self.sigma
    }
}

/// Parameters (a, b, p) of the generalized inverse Gaussian conditional law of X given Y = y.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GigParams {
    pub a: f64,
    pub b: f64,
    pub p: f64,
}

impl GigParams {
    /// Log density of GIG(a, b, p) at x > 0. For b = 0 the law degenerates to
    /// GAM(p, a/2), which requires p > 0.
    pub fn log_pdf(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::Domain(format!("GIG log_pdf requires x > 0, got {x}")));
        }
        let (a, b, p) = (self.a, self.b, self.p);
        if b == 0.0 {
            if p <= 0.0 {
                return Err(Error::Domain(
                    "GIG with b = 0 requires p > 0 to normalize".into(),
                ));
            }
            return Ok(p * (a / 2.0).ln() - ln_gamma_raw(p) + (p - 1.0) * x.ln() - 0.5 * a * x);
        }
        let z = (a * b).sqrt();
        Ok(0.5 * p * (a.ln() - b.ln()) - std::f64::consts::LN_2 - ln_bessel_k_raw(p, z)
            + (p - 1.0) * x.ln()
            - 0.5 * (a * x + b / x))
    }
}

/// First and second moments of (X, Y).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSummary {
    pub mean_x: f64,
    pub mean_y: f64,
    pub cov: [[f64; 2]; 2],
    pub rho: f64,
}

/// Gamma(alpha, rate beta) log density at x > 0.
pub fn gamma_log_pdf(alpha: f64, beta: f64, x: f64) -> Result<f64> {
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(Error::InvalidParams(format!(
            "gamma_log_pdf requires alpha, beta > 0, got {alpha}, {beta}"
        )));
    }
    if !(x > 0.0) {
        return Err(Error::Domain(format!("gamma_log_pdf requires x > 0, got {x}")));
    }
    Ok(alpha * beta.ln() - ln_gamma_raw(alpha) + (alpha - 1.0) * x.ln() - beta * x)
}

/// Log of the joint BGGL density at (x, y), x > 0.
pub fn joint_log_pdf(theta: &BgglParams, x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("joint_log_pdf requires x > 0, got {x}")));
    }
    Ok(joint_log_pdf_raw(theta, x, y))
}

pub(crate) fn joint_log_pdf_raw(theta: &BgglParams, x: f64, y: f64) -> f64 {
    let r = y - theta.delta - theta.mu * x;
    -0.5 * LN_2PI - theta.sigma.ln() + theta.alpha * theta.beta.ln() - ln_gamma_raw(theta.alpha)
        + (theta.alpha - 1.5) * x.ln()
        - theta.beta * x
        - r * r / (2.0 * theta.sigma * theta.sigma * x)
}

/// Log of the GAL (variance-gamma) marginal density of Y.
///
/// At y = delta the density has a finite limit only for alpha > 1/2; for
/// alpha <= 1/2 it diverges and `Error::InfiniteDensity` is returned.
pub fn gal_marginal_log_pdf(theta: &BgglParams, y: f64) -> Result<f64> {
    let m = y - theta.delta;
    let s2 = theta.sigma * theta.sigma;
    let p = theta.alpha - 0.5;
    let a = 2.0 * theta.beta + theta.mu * theta.mu / s2;
    let base = theta.alpha * theta.beta.ln() - ln_gamma_raw(theta.alpha) - theta.sigma.ln()
        - 0.5 * LN_2PI;
    if m == 0.0 {
        if theta.alpha <= 0.5 {
            return Err(Error::InfiniteDensity);
        }
        // limit of 2 (b/a)^{p/2} K_p(sqrt(ab)) as b -> 0 is Gamma(p) (2/a)^p
        return Ok(base + ln_gamma_raw(p) + p * (std::f64::consts::LN_2 - a.ln()));
    }
    let b = m * m / s2;
    let z = (a * b).sqrt();
    Ok(base + theta.mu * m / s2 + std::f64::consts::LN_2 + 0.5 * p * (b.ln() - a.ln())
        + ln_bessel_k_raw(p, z))
}

/// The GAL marginal density of Y (exp of [`gal_marginal_log_pdf`]).
pub fn gal_marginal_pdf(theta: &BgglParams, y: f64) -> Result<f64> {
    Ok(gal_marginal_log_pdf(theta, y)?.exp())
}

/// Parameters of the GIG conditional law of X given Y = y.
pub fn gig_conditional(theta: &BgglParams, y: f64) -> GigParams {
    let s2 = theta.sigma * theta.sigma;
    let m = y - theta.delta;
    GigParams {
        a: 2.0 * theta.beta + theta.mu * theta.mu / s2,
        b: m * m / s2,
        p: theta.alpha - 0.5,
    }
}

/// Joint moment generating function E[exp(sX + tY)] on its natural domain
/// {s + mu t + sigma^2 t^2 / 2 < beta}.
pub fn mgf(theta: &BgglParams, s: f64, t: f64) -> Result<f64> {
    let u = s + theta.mu * t + 0.5 * theta.sigma * theta.sigma * t * t;
    if !(u < theta.beta) {
        return Err(Error::Domain(format!(
            "mgf undefined: s + mu t + sigma^2 t^2/2 = {u} >= beta = {}",
            theta.beta
        )));
    }
    Ok((theta.delta * t + theta.alpha * (theta.beta.ln() - (theta.beta - u).ln())).exp())
}

/// Joint characteristic function E[exp(i(sX + tY))], principal branch.
pub fn char_fn(theta: &BgglParams, s: f64, t: f64) -> Complex64 {
    let w = Complex64::new(
        theta.beta + 0.5 * theta.sigma * theta.sigma * t * t,
        -(s + theta.mu * t),
    );
    let ratio = Complex64::new(theta.beta, 0.0) / w;
    Complex64::new(0.0, theta.delta * t).exp() * ratio.powf(theta.alpha)
}

/// Mean vector, covariance matrix and correlation of (X, Y).
pub fn moments(theta: &BgglParams) -> MomentSummary {
    let (a, b, d, m, s) = (theta.alpha, theta.beta, theta.delta, theta.mu, theta.sigma);
    let var_x = a / (b * b);
    let cov_xy = m * a / (b * b);
    let var_y = m * m * a / (b * b) + s * s * a / b;
    MomentSummary {
        mean_x: a / b,
        mean_y: d + m * a / b,
        cov: [[var_x, cov_xy], [cov_xy, var_y]],
        rho: m / (m * m + s * s * b).sqrt(),
    }
}

/// Shannon entropy of (X, Y).
pub fn shannon_entropy(theta: &BgglParams) -> f64 {
    let (a, b, s) = (theta.alpha, theta.beta, theta.sigma);
    a - 1.5 * b.ln() + ln_gamma_raw(a) + (1.5 - a) * digamma_raw(a)
        + 0.5 * (LN_2PI + 1.0 + (s * s).ln())
}

/// Fisher information matrix in the (alpha, beta, delta, mu, upsilon)
/// parameterization; defined (finite) only for alpha > 1.
pub fn fisher_information(theta: &BgglParams) -> Result<[[f64; 5]; 5]> {
    if theta.alpha <= 1.0 {
        return Err(Error::InfiniteInformation);
    }
    let (a, b) = (theta.alpha, theta.beta);
    let u = theta.sigma * theta.sigma;
    let mut m = [[0.0; 5]; 5];
    m[0][0] = trigamma_raw(a);
    m[0][1] = -1.0 / b;
    m[1][0] = m[0][1];
    m[1][1] = a / (b * b);
    m[2][2] = b / ((a - 1.0) * u);
    m[2][3] = 1.0 / u;
    m[3][2] = m[2][3];
    m[3][3] = a / (b * u);
    m[4][4] = 0.5 / (u * u);
    Ok(m)
}

/// Fisher information with sigma in place of upsilon: the Jacobian of
/// (.., upsilon) -> (.., sigma) is diag(1, 1, 1, 1, 2 sigma), so only the
/// last row/column rescales.
pub fn fisher_information_sigma(theta: &BgglParams) -> Result<[[f64; 5]; 5]> {
    let mut m = fisher_information(theta)?;
    let j = 2.0 * theta.sigma;
    for k in 0..5 {
        m[4][k] *= j;
        m[k][4] *= j;
    }
    Ok(m)
}

/// The six sufficient statistics (ln x, x, y^2/x, y/x, 1/x, y) of the curved
/// exponential family.
pub fn sufficient_statistics(x: f64, y: f64) -> Result<[f64; 6]> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!(
            "sufficient_statistics requires x > 0, got {x}"
        )));
    }
    Ok([x.ln(), x, y * y / x, y / x, 1.0 / x, y])
}

/// The natural parameters eta(theta) pairing with [`sufficient_statistics`].
pub fn natural_parameters(theta: &BgglParams) -> [f64; 6] {
    let u = theta.sigma * theta.sigma;
    [
        theta.alpha,
        -theta.beta - theta.mu * theta.mu / (2.0 * u),
        -1.0 / (2.0 * u),
        theta.delta / u,
        -theta.delta * theta.delta / (2.0 * u),
        theta.mu / u,
    ]
}

/// Log partition A(theta) of the exponential-family form.
pub fn log_partition(theta: &BgglParams) -> f64 {
    let u = theta.sigma * theta.sigma;
    -(theta.alpha * theta.beta.ln() - ln_gamma_raw(theta.alpha)) + theta.mu * theta.delta / u
        + 0.5 * u.ln()
}

/// Log of the base measure h(x, y) = (2 pi)^{-1/2} x^{-3/2}.
pub fn log_base_measure(x: f64) -> f64 {
    -0.5 * LN_2PI - 1.5 * x.ln()
}

/// Laplace transform E[exp(-t / X)] of 1/X for X ~ GAM(alpha, beta):
/// 2 (t beta)^{alpha/2} K_alpha(2 sqrt(t beta)) / Gamma(alpha).
pub fn laplace_transform_inv_x(alpha: f64, beta: f64, t: f64) -> Result<f64> {
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(Error::InvalidParams(format!(
            "laplace_transform_inv_x requires alpha, beta > 0, got {alpha}, {beta}"
        )));
    }
    if !(t >= 0.0) {
        return Err(Error::Domain(format!(
            "laplace_transform_inv_x requires t >= 0, got {t}"
        )));
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    let tb = t * beta;
    Ok((std::f64::consts::LN_2 + 0.5 * alpha * tb.ln() - ln_gamma_raw(alpha)
        + ln_bessel_k_raw(alpha, 2.0 * tb.sqrt()))
    .exp())
}

/// CDF of the GAL marginal of Y, as the gamma-mixture of conditional normal
/// CDFs. Identical to integrating the marginal density but free of the
/// Bessel singularity at y = delta.
pub fn gal_cdf(theta: &BgglParams, y: f64) -> f64 {
    let (a, b) = (theta.alpha, theta.beta);
    let ln_norm = a * b.ln() - ln_gamma_raw(a);
    let f = |x: f64| {
        let z = (y - theta.delta - theta.mu * x) / (theta.sigma * x.sqrt());
        let phi = normal_cdf(z);
        if phi == 0.0 {
            0.0
        } else {
            phi * (ln_norm + (a - 1.0) * x.ln() - b * x).exp()
        }
    };
    // split at the gamma mean and a tail point before mapping the upper range
    let mean = a / b;
    let sd = a.sqrt() / b;
    let split = mean + 5.0 * sd;
    let head = quad::integrate_segments(&f, &[0.0, mean.min(split), split], 5e-11);
    let tail = quad::integrate_upper(f, split, 5e-11);
    (head + tail).clamp(0.0, 1.0)
}

/// Quantile of the GAL marginal: the y with gal_cdf(y) = p, to 1e-8 in
/// probability. Newton steps on the density with a maintained bracket.
pub fn gal_quantile(theta: &BgglParams, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!(
            "gal_quantile requires p in (0, 1), got {p}"
        )));
    }
    const P_TOL: f64 = 1e-8;
    let mm = moments(theta);
    let sd = mm.cov[1][1].sqrt();
    let (mut lo, mut hi) = (mm.mean_y - 2.0 * sd, mm.mean_y + 2.0 * sd);
    let mut k = 0;
    while gal_cdf(theta, lo) > p {
        lo -= 4.0 * sd * (1 << k) as f64;
        k += 1;
        if k > 60 {
            return Err(Error::NoConvergence("gal_quantile: lower bracket".into()));
        }
    }
    k = 0;
    while gal_cdf(theta, hi) < p {
        hi += 4.0 * sd * (1 << k) as f64;
        k += 1;
        if k > 60 {
            return Err(Error::NoConvergence("gal_quantile: upper bracket".into()));
        }
    }
    let mut y = 0.5 * (lo + hi);
    for _ in 0..200 {
        let c = gal_cdf(theta, y);
        if (c - p).abs() <= P_TOL {
            return Ok(y);
        }
        if c < p {
            lo = y;
        } else {
            hi = y;
        }
        // Newton when the density is usable, bisection otherwise
        let pdf = gal_marginal_pdf(theta, y).unwrap_or(f64::INFINITY);
        let mut next = y - (c - p) / pdf;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - y).abs() < 1e-15 * y.abs().max(1.0) {
            return Ok(next);
        }
        y = next;
    }
    Err(Error::NoConvergence(format!("gal_quantile at p={p}")))
}

/// E[X^r] for X ~ GAM(alpha, beta); infinite for r <= -alpha.
pub fn gamma_moment(alpha: f64, beta: f64, r: f64) -> f64 {
    if r <= -alpha {
        return f64::INFINITY;
    }
    (ln_gamma_raw(alpha + r) - r * beta.ln() - ln_gamma_raw(alpha)).exp()
}
