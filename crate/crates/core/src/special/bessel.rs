//! Modified Bessel function of the second kind K_nu for real order.
//!
//! Temme's series for x <= 2 and a Steed continued fraction for x > 2 seed
//! (K_mu, K_{mu+1}) with |mu| <= 1/2; stable forward recurrence raises the
//! order, rescaling on the way so that only the log of the result is ever
//! required to be representable.

use super::gamma_fn::{ln_gamma_raw, EULER_GAMMA};
use crate::error::{Error, Result};

const RESCALE: f64 = 1e280;
const MAX_ITER: usize = 20_000;

/// Coefficient of z^3 in the Maclaurin series of 1/Gamma(1+z).
const INV_GAMMA_A3: f64 = -0.042_002_635_034_095_24;

/// g1 = [1/Gamma(1-mu) - 1/Gamma(1+mu)]/(2 mu), g2 = [1/Gamma(1-mu) + 1/Gamma(1+mu)]/2,
/// plus Gamma(1 +/- mu) themselves, for |mu| <= 1/2.
fn temme_gamma(mu: f64) -> (f64, f64, f64, f64) {
    if mu == 0.0 {
        return (-EULER_GAMMA, 1.0, 1.0, 1.0);
    }
    let lg_p = ln_gamma_raw(1.0 + mu);
    let lg_m = ln_gamma_raw(1.0 - mu);
    let gamma_plus = lg_p.exp();
    let gamma_minus = lg_m.exp();
    let g2 = 0.5 * (1.0 / gamma_minus + 1.0 / gamma_plus);
    let g1 = if mu.abs() < 1e-3 {
        // series of the odd part; avoids cancellation for tiny mu
        -(EULER_GAMMA + INV_GAMMA_A3 * mu * mu)
    } else {
        // 1/G(1-mu) - 1/G(1+mu) = expm1(lgp - lgm)/G(1+mu)
        (lg_p - lg_m).exp_m1() / gamma_plus / (2.0 * mu)
    };
    (g1, g2, gamma_plus, gamma_minus)
}

/// Temme series: (K_mu(x), K_{mu+1}(x)) unscaled, for x <= 2, |mu| <= 1/2.
fn k_temme(mu: f64, x: f64) -> (f64, f64) {
    let x2 = 0.5 * x;
    let ln_x2 = x2.ln();
    let d = -ln_x2;
    let sigma = mu * d;
    let pimu = std::f64::consts::PI * mu;
    let sinrat = if pimu.abs() < 1e-290 { 1.0 } else { pimu / pimu.sin() };
    let sinhrat = if sigma.abs() < 1e-290 { 1.0 } else { sigma.sinh() / sigma };
    let (g1, g2, gamma_plus, gamma_minus) = temme_gamma(mu);

    let x2_mu = (mu * ln_x2).exp(); // (x/2)^mu
    let mut fk = sinrat * (sigma.cosh() * g1 + sinhrat * d * g2);
    let mut pk = 0.5 / x2_mu * gamma_plus;
    let mut qk = 0.5 * x2_mu * gamma_minus;
    let mut hk = pk;
    let mut ck = 1.0;
    let mut sum0 = fk;
    let mut sum1 = hk;
    let x2_sq = x2 * x2;
    for i in 1..=MAX_ITER {
        let k = i as f64;
        fk = (k * fk + pk + qk) / (k * k - mu * mu);
        ck *= x2_sq / k;
        pk /= k - mu;
        qk /= k + mu;
        hk = -k * fk + pk;
        let del0 = ck * fk;
        let del1 = ck * hk;
        sum0 += del0;
        sum1 += del1;
        if del0.abs() < 0.5e-16 * sum0.abs() && del1.abs() < 0.5e-16 * sum1.abs() {
            break;
        }
    }
    (sum0, sum1 * 2.0 / x)
}

/// Steed CF2: (e^x K_mu(x), e^x K_{mu+1}(x)) for x > 2, |mu| <= 1/2.
fn k_steed_cf2(mu: f64, x: f64) -> (f64, f64) {
    let mut bi = 2.0 * (1.0 + x);
    let mut di = 1.0 / bi;
    let mut delhi = di;
    let mut hi = di;

    let mut qi = 0.0;
    let mut qip1 = 1.0;

    let a1 = -(0.25 - mu * mu);
    let mut ai = a1;
    let mut ci = -a1;
    let mut qsum = -a1;

    let mut s = 1.0 + qsum * delhi;
    for i in 2..=MAX_ITER {
        ai -= 2.0 * (i as f64 - 1.0);
        ci = -ai * ci / i as f64;
        let qnext = (qi - bi * qip1) / ai;
        qi = qip1;
        qip1 = qnext;
        qsum += ci * qip1;
        bi += 2.0;
        di = 1.0 / (bi + ai * di);
        delhi = (bi * di - 1.0) * delhi;
        hi += delhi;
        let dels = qsum * delhi;
        s += dels;
        if (dels / s).abs() < 1e-16 {
            break;
        }
    }
    let hi = -a1 * hi;
    let k_mu = (std::f64::consts::PI / (2.0 * x)).sqrt() / s;
    let k_mup1 = k_mu * (mu + x + 0.5 - hi) / x;
    (k_mu, k_mup1)
}

/// K_|nu|(x) as (mantissa, ln_scale) with K = mantissa * exp(ln_scale).
fn bessel_k_scaled(nu_abs: f64, x: f64) -> (f64, f64) {
    debug_assert!(nu_abs >= 0.0 && x > 0.0);
    let n = (nu_abs + 0.5).floor() as i64;
    let mu = nu_abs - n as f64; // in [-1/2, 1/2)
    let (mut k_lo, mut k_hi, mut ln_scale) = if x <= 2.0 {
        let (a, b) = k_temme(mu, x);
        (a, b, 0.0)
    } else {
        let (a, b) = k_steed_cf2(mu, x);
        (a, b, -x)
    };
    let ln_rescale = RESCALE.ln();
    for j in 0..n {
        let k_next = 2.0 * (mu + j as f64 + 1.0) / x * k_hi + k_lo;
        k_lo = k_hi;
        k_hi = k_next;
        if k_hi > RESCALE {
            k_lo /= RESCALE;
            k_hi /= RESCALE;
            ln_scale += ln_rescale;
        }
    }
    (k_lo, ln_scale)
}

pub(crate) fn ln_bessel_k_raw(nu: f64, x: f64) -> f64 {
    let (mant, ln_scale) = bessel_k_scaled(nu.abs(), x);
    mant.ln() + ln_scale
}

/// Modified Bessel function of the second kind, K_nu(x) for real nu, x > 0.
pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("bessel_k requires x > 0, got {x}")));
    }
    if !nu.is_finite() {
        return Err(Error::Domain(format!("bessel_k requires finite nu, got {nu}")));
    }
    let (mant, ln_scale) = bessel_k_scaled(nu.abs(), x);
    if ln_scale == 0.0 {
        return Ok(mant);
    }
    let ln_k = mant.ln() + ln_scale;
    if ln_k > 709.0 {
        return Err(Error::Domain(format!(
            "bessel_k overflows f64 at nu={nu}, x={x}; use ln_bessel_k"
        )));
    }
    Ok(if ln_scale.abs() < 600.0 {
        mant * ln_scale.exp()
    } else {
        ln_k.exp()
    })
}

/// ln K_nu(x); usable where K itself over- or underflows.
pub fn ln_bessel_k(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("ln_bessel_k requires x > 0, got {x}")));
    }
    if !nu.is_finite() {
        return Err(Error::Domain(format!("ln_bessel_k requires finite nu, got {nu}")));
    }
    Ok(ln_bessel_k_raw(nu, x))
}

/// F_alpha(x) = x^alpha K_alpha(x) for alpha in (0, 1], extended by continuity
/// to F_alpha(0+) = Gamma(alpha) 2^{alpha-1}.
pub fn f_alpha(alpha: f64, x: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Domain(format!(
            "f_alpha requires alpha in (0, 1], got {alpha}"
        )));
    }
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("f_alpha requires x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok((ln_gamma_raw(alpha) + (alpha - 1.0) * std::f64::consts::LN_2).exp());
    }
    Ok((alpha * x.ln() + ln_bessel_k_raw(alpha, x)).exp())
}
