//! Asymptotic laws of the MLEs: the scaling matrices D_n, the limiting
//! covariance blocks, samplers for the limit vector W, and an empirical
//! convergence-rate probe.
//!
//! Three regimes by the gamma shape: for alpha > 1 everything is sqrt(n)
//! with Gaussian limit N_5(0, I^{-1}); for alpha = 1 the delta slot scales
//! as sqrt(n ln n); for alpha < 1 it scales as n^{1/(2 alpha)} and the limit
//! of delta_hat involves a stable subordinator.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::BgglParams;
use crate::error::{Error, Result};
use crate::estimate::fit_location_scale;
use crate::sample::{sample_bggl, sample_stable_subordinator, RngStream};
use crate::special::{gamma_raw, trigamma_raw};

/// Convergence-rate regime of delta_hat, classified by the gamma shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// alpha > 1: sqrt(n) everywhere, jointly Gaussian limit.
    Regular,
    /// alpha = 1: sqrt(n ln n) for delta.
    Boundary,
    /// alpha < 1: n^{1/(2 alpha)} for delta, stable-mixture limit.
    Heavy,
}

/// Law of the limiting delta component when it is independent of W_mu.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DeltaLaw {
    /// W_delta ~ N(0, variance) (boundary regime: variance = sigma^2/beta).
    Gaussian { variance: f64 },
    /// W_delta = coeff * xi_alpha^{-1/2} * Z with xi the stable subordinator;
    /// coeff = sigma beta^{-1/2} Gamma(alpha+1)^{1/(2 alpha)}.
    StableMixture { coeff: f64, alpha: f64 },
}

/// Joint or product-form law of (W_delta, W_mu).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DeltaMuLaw {
    /// Regular regime: bivariate Gaussian with covariance Sigma_{delta,mu}.
    Joint { cov: [[f64; 2]; 2] },
    /// alpha <= 1: independent components; var_mu = sigma^2 beta / alpha.
    Independent { delta: DeltaLaw, var_mu: f64 },
}

/// Description of the limiting vector W = (W_alpha, W_beta, W_delta, W_mu, W_upsilon).
///
/// The (alpha, beta) block, the (delta, mu) part and the upsilon component
/// are independent in every regime; (delta, mu) splits further into
/// independent scalars exactly when alpha <= 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitLawSpec {
    pub regime: Regime,
    pub sigma_alpha_beta: [[f64; 2]; 2],
    pub delta_mu: DeltaMuLaw,
    /// Var W_upsilon = 2 sigma^4 in every regime.
    pub var_upsilon: f64,
}

impl LimitLawSpec {
    /// Var W_mu = sigma^2 beta / min(alpha, 1), uniform across regimes.
    pub fn var_mu(&self) -> f64 {
        match self.delta_mu {
            DeltaMuLaw::Joint { cov } => cov[1][1],
            DeltaMuLaw::Independent { var_mu, .. } => var_mu,
        }
    }
}

/// Limiting covariance of sqrt(n) (alpha_hat - alpha, beta_hat - beta):
/// [alpha psi'(alpha) - 1]^{-1} [[alpha, beta], [beta, beta^2 psi'(alpha)]],
/// the inverse of the gamma Fisher block.
pub fn sigma_alpha_beta(alpha: f64, beta: f64) -> [[f64; 2]; 2] {
    let t = trigamma_raw(alpha);
    let den = alpha * t - 1.0;
    [
        [alpha / den, beta / den],
        [beta / den, beta * beta * t / den],
    ]
}

/// Limiting covariance of sqrt(n) (delta_hat - delta, mu_hat - mu) for alpha > 1:
/// (sigma^2/beta) [[alpha(alpha-1), -beta(alpha-1)], [-beta(alpha-1), beta^2]].
pub fn sigma_delta_mu(theta: &BgglParams) -> Result<[[f64; 2]; 2]> {
    let a = theta.alpha();
    if a <= 1.0 {
        return Err(Error::Domain(format!(
            "sigma_delta_mu requires alpha > 1, got {a}"
        )));
    }
    let b = theta.beta();
    let s2 = theta.sigma() * theta.sigma();
    let f = s2 / b;
    Ok([
        [f * a * (a - 1.0), -f * b * (a - 1.0)],
        [-f * b * (a - 1.0), f * b * b],
    ])
}

/// Diagonal of the scaling matrix D_n for the given regime.
pub fn scaling_vector(regime: Regime, alpha: f64, n: usize) -> Result<[f64; 5]> {
    if n < 2 {
        return Err(Error::InvalidData(format!("scaling_vector requires n >= 2, got {n}")));
    }
    let nf = n as f64;
    let rn = nf.sqrt();
    let delta_slot = match regime {
        Regime::Regular => rn,
        Regime::Boundary => (nf * nf.ln()).sqrt(),
        Regime::Heavy => {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(Error::Domain(format!(
                    "heavy regime requires alpha in (0, 1), got {alpha}"
                )));
            }
            nf.powf(1.0 / (2.0 * alpha))
        }
    };
    Ok([rn, rn, delta_slot, rn, rn])
}

/// Limit-law description for theta in the given regime.
pub fn limit_law(theta: &BgglParams, regime: Regime) -> Result<LimitLawSpec> {
    let (a, b, s) = (theta.alpha(), theta.beta(), theta.sigma());
    let s2 = s * s;
    let delta_mu = match regime {
        Regime::Regular => DeltaMuLaw::Joint { cov: sigma_delta_mu(theta)? },
        Regime::Boundary => DeltaMuLaw::Independent {
            delta: DeltaLaw::Gaussian { variance: s2 / b },
            var_mu: s2 * b,
        },
        Regime::Heavy => {
            if !(a < 1.0) {
                return Err(Error::Domain(format!(
                    "heavy regime requires alpha < 1, got {a}"
                )));
            }
            DeltaMuLaw::Independent {
                delta: DeltaLaw::StableMixture {
                    coeff: s / b.sqrt() * gamma_raw(a + 1.0).powf(1.0 / (2.0 * a)),
                    alpha: a,
                },
                var_mu: s2 * b / a,
            }
        }
    };
    Ok(LimitLawSpec {
        regime,
        sigma_alpha_beta: sigma_alpha_beta(a, b),
        delta_mu,
        var_upsilon: 2.0 * s2 * s2,
    })
}

fn chol2(m: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let l11 = m[0][0].sqrt();
    let l21 = m[0][1] / l11;
    let l22 = (m[1][1] - l21 * l21).max(0.0).sqrt();
    [[l11, 0.0], [l21, l22]]
}

/// One draw of the limiting vector W.
pub fn sample_limit_vector(spec: &LimitLawSpec, rng: &mut RngStream) -> Result<[f64; 5]> {
    let l_ab = chol2(&spec.sigma_alpha_beta);
    let (z1, z2) = (rng.standard_normal(), rng.standard_normal());
    let w_alpha = l_ab[0][0] * z1;
    let w_beta = l_ab[1][0] * z1 + l_ab[1][1] * z2;

    let (w_delta, w_mu) = match spec.delta_mu {
        DeltaMuLaw::Joint { cov } => {
            let l = chol2(&cov);
            let (z3, z4) = (rng.standard_normal(), rng.standard_normal());
            (l[0][0] * z3, l[1][0] * z3 + l[1][1] * z4)
        }
        DeltaMuLaw::Independent { delta, var_mu } => {
            let wd = match delta {
                DeltaLaw::Gaussian { variance } => variance.sqrt() * rng.standard_normal(),
                DeltaLaw::StableMixture { coeff, alpha } => {
                    let xi = sample_stable_subordinator(alpha, rng)?;
                    coeff / xi.sqrt() * rng.standard_normal()
                }
            };
            (wd, var_mu.sqrt() * rng.standard_normal())
        }
    };
    let w_upsilon = spec.var_upsilon.sqrt() * rng.standard_normal();
    Ok([w_alpha, w_beta, w_delta, w_mu, w_upsilon])
}

/// OLS slope of ln RMSE(delta_hat) against ln n over a grid of sample sizes;
/// approximately -1/(2 alpha) for alpha < 1 and -1/2 for alpha > 1.
pub fn rate_slope(
    theta: &BgglParams,
    n_grid: &[usize],
    replications: usize,
    seed: u64,
) -> Result<f64> {
    if n_grid.len() < 3 {
        return Err(Error::InvalidData(
            "rate_slope requires at least 3 grid sizes".into(),
        ));
    }
    if replications == 0 {
        return Err(Error::InvalidData("rate_slope requires replications >= 1".into()));
    }
    let mut pts = Vec::with_capacity(n_grid.len());
    for (gi, &n) in n_grid.iter().enumerate() {
        if n < 3 {
            return Err(Error::InvalidData("rate_slope grid sizes must be >= 3".into()));
        }
        let sse: f64 = (0..replications)
            .into_par_iter()
            .map(|rep| {
                let sid = ((gi as u64) << 48) | rep as u64;
                let mut rng = RngStream::new(seed, sid);
                let s = sample_bggl(theta, n, &mut rng).expect("valid theta");
                let f = fit_location_scale(&s).expect("n >= 3");
                let e = f.delta - theta.delta();
                e * e
            })
            .sum();
        let rmse = (sse / replications as f64).sqrt();
        pts.push(((n as f64).ln(), rmse.ln()));
    }
    Ok(ols_slope(&pts))
}

fn ols_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let xb = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let yb = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - xb) * (p.1 - yb)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - xb) * (p.0 - xb)).sum();
    sxy / sxx
}
