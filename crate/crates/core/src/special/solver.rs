//! The gamma-shape likelihood link w(alpha) = ln(alpha) - psi(alpha) and its inverse.

use super::gamma_fn::{digamma_raw, trigamma_raw};
use crate::error::{Error, Result};

/// w(alpha) = ln(alpha) - psi(alpha); continuous and strictly decreasing on (0, inf),
/// with limits +inf at 0 and 0 at infinity.
pub fn w(alpha: f64) -> f64 {
    debug_assert!(alpha > 0.0);
    alpha.ln() - digamma_raw(alpha)
}

/// Solves w(alpha) = rhs for the unique alpha > 0, for rhs > 0.
///
/// Newton from the classical shape starter, with a maintained bracket and a
/// bisection fallback; terminates when |w(alpha) - rhs| <= 1e-12.
pub fn solve_w_inverse(rhs: f64) -> Result<f64> {
    if !(rhs > 0.0) {
        return Err(Error::Domain(format!(
            "solve_w_inverse requires rhs > 0, got {rhs}"
        )));
    }
    const TOL: f64 = 1e-12;

    let s = rhs;
    let mut alpha = (3.0 - s + ((s - 3.0) * (s - 3.0) + 24.0 * s).sqrt()) / (12.0 * s);
    if !alpha.is_finite() || alpha <= 0.0 {
        alpha = 1.0;
    }

    // w is decreasing: bracket so that w(lo) > rhs > w(hi).
    let mut lo = 1e-8_f64;
    let mut hi = 1e8_f64.max(1.0 / rhs);
    while w(hi) > rhs {
        hi *= 16.0;
        if hi > 1e300 {
            return Err(Error::NoConvergence(format!(
                "solve_w_inverse: cannot bracket rhs={rhs}"
            )));
        }
    }
    while w(lo) < rhs {
        lo /= 16.0;
        if lo < 1e-300 {
            return Err(Error::NoConvergence(format!(
                "solve_w_inverse: cannot bracket rhs={rhs}"
            )));
        }
    }
    alpha = alpha.clamp(lo, hi);

    for _ in 0..200 {
        let f = w(alpha) - rhs;
        if f.abs() <= TOL {
            return Ok(alpha);
        }
        if f > 0.0 {
            lo = alpha; // w too large -> alpha too small
        } else {
            hi = alpha;
        }
        let fp = 1.0 / alpha - trigamma_raw(alpha); // negative on (0, inf)
        let mut next = alpha - f / fp;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        alpha = next;
    }
    Err(Error::NoConvergence(format!(
        "solve_w_inverse did not converge for rhs={rhs}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma_fn::EULER_GAMMA;

    #[test]
    fn round_trips() {
        // w(1) = gamma (Euler-Mascheroni)
        assert!((w(1.0) - EULER_GAMMA).abs() < 1e-14);
        assert!((solve_w_inverse(EULER_GAMMA).unwrap() - 1.0).abs() < 1e-10);
        // forward-evaluate then invert across the working range
        let mut a = 0.05;
        while a <= 50.0 {
            let back = solve_w_inverse(w(a)).unwrap();
            assert!((back - a).abs() <= 1e-10 * a.max(1.0), "a={a}, back={back}");
            a *= 1.7;
        }
    }

    #[test]
    fn small_rhs_gives_large_alpha() {
        // bisection oracle on a wide bracket
        let rhs = 0.01;
        let (mut lo, mut hi) = (1e-6_f64, 1e6_f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if w(mid) > rhs {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        let got = solve_w_inverse(rhs).unwrap();
        assert!(((got - oracle) / oracle).abs() < 1e-8, "{got} vs {oracle}");
        assert!(got > 45.0); // w ~ 1/(2 alpha) so alpha ~ 50
    }

    #[test]
    fn domain_errors() {
        assert!(solve_w_inverse(0.0).is_err());
        assert!(solve_w_inverse(-1.0).is_err());
    }
}
