//! Shared helpers for the integration suites: KS tests, simple statistics,
//! a Nelder-Mead simplex for oracle maximization, and quadrature oracles
//! built on the crate's integrator.

#![allow(dead_code)]

use bggl_core::dist::{joint_log_pdf, BgglParams};
use bggl_core::special::quad;

/// Mean and standard error of the mean.
pub fn mean_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|&x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn variance(v: &[f64]) -> f64 {
    let m = mean(v);
    v.iter().map(|&x| (x - m) * (x - m)).sum::<f64>() / (v.len() as f64 - 1.0)
}

/// Asymptotic Kolmogorov distribution tail Q(lambda) = 2 sum (-1)^{j-1} e^{-2 j^2 lambda^2}.
fn kolmogorov_tail(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for j in 1..=100 {
        let term = (-2.0 * (j as f64) * (j as f64) * lambda * lambda).exp();
        sum += sign * term;
        sign = -sign;
        if term < 1e-12 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// One-sample KS test against a CDF; returns (statistic, p_value).
pub fn ks_test<F: Fn(f64) -> f64>(data: &[f64], cdf: F) -> (f64, f64) {
    let mut sorted = data.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let c = cdf(x);
        let hi = (i as f64 + 1.0) / n - c;
        let lo = c - i as f64 / n;
        d = d.max(hi.max(lo));
    }
    let lambda = (n.sqrt() + 0.12 + 0.11 / n.sqrt()) * d;
    (d, kolmogorov_tail(lambda))
}

/// Two-sample KS test; returns (statistic, p_value).
pub fn ks2_test(a: &[f64], b: &[f64]) -> (f64, f64) {
    let mut sa = a.to_vec();
    let mut sb = b.to_vec();
    sa.sort_by(|u, v| u.total_cmp(v));
    sb.sort_by(|u, v| u.total_cmp(v));
    let (na, nb) = (sa.len(), sb.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < na && j < nb {
        let xa = sa[i];
        let xb = sb[j];
        if xa <= xb {
            i += 1;
        }
        if xb <= xa {
            j += 1;
        }
        let diff = (i as f64 / na as f64 - j as f64 / nb as f64).abs();
        d = d.max(diff);
    }
    let ne = (na as f64 * nb as f64) / (na as f64 + nb as f64);
    let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    (d, kolmogorov_tail(lambda))
}

/// Nelder-Mead minimization, good enough for smooth low-dimensional oracles.
pub fn nelder_mead<F: Fn(&[f64]) -> f64>(
    f: F,
    x0: &[f64],
    step: f64,
    iters: usize,
) -> (Vec<f64>, f64) {
    let dim = x0.len();
    let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..dim {
        let mut p = x0.to_vec();
        p[i] += step * p[i].abs().max(1.0);
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| f(p)).collect();

    for _ in 0..iters {
        // order
        let mut idx: Vec<usize> = (0..=dim).collect();
        idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let best = idx[0];
        let worst = idx[dim];
        let second_worst = idx[dim - 1];

        if (values[worst] - values[best]).abs()
            <= 1e-13 * (values[best].abs() + values[worst].abs()).max(1e-8)
        {
            break;
        }

        // centroid of all but worst
        let mut centroid = vec![0.0; dim];
        for &k in idx.iter().take(dim) {
            for d in 0..dim {
                centroid[d] += simplex[k][d] / dim as f64;
            }
        }
        let reflect: Vec<f64> = (0..dim)
            .map(|d| centroid[d] + (centroid[d] - simplex[worst][d]))
            .collect();
        let fr = f(&reflect);
        if fr < values[best] {
            let expand: Vec<f64> = (0..dim)
                .map(|d| centroid[d] + 2.0 * (centroid[d] - simplex[worst][d]))
                .collect();
            let fe = f(&expand);
            if fe < fr {
                simplex[worst] = expand;
                values[worst] = fe;
            } else {
                simplex[worst] = reflect;
                values[worst] = fr;
            }
        } else if fr < values[second_worst] {
            simplex[worst] = reflect;
            values[worst] = fr;
        } else {
            let contract: Vec<f64> = (0..dim)
                .map(|d| centroid[d] + 0.5 * (simplex[worst][d] - centroid[d]))
                .collect();
            let fc = f(&contract);
            if fc < values[worst] {
                simplex[worst] = contract;
                values[worst] = fc;
            } else {
                // shrink toward best
                let best_pt = simplex[best].clone();
                for k in 0..=dim {
                    if k == best {
                        continue;
                    }
                    for d in 0..dim {
                        simplex[k][d] = best_pt[d] + 0.5 * (simplex[k][d] - best_pt[d]);
                    }
                    values[k] = f(&simplex[k]);
                }
            }
        }
    }
    let mut best = 0;
    for k in 1..=dim {
        if values[k] < values[best] {
            best = k;
        }
    }
    (simplex[best].clone(), values[best])
}

/// Quadrature oracle: integral over x in (0, inf) of exp(joint_log_pdf) at fixed y.
/// The x^{alpha - 3/2} endpoint behavior is regularized by u = x^{alpha - 1/2}
/// on (0, 1] when alpha > 1/2; the tail is integrated on the raw scale.
pub fn marginal_by_quadrature(theta: &BgglParams, y: f64, tol: f64) -> f64 {
    let f = |x: f64| {
        if x <= 0.0 {
            0.0
        } else {
            joint_log_pdf(theta, x, y).unwrap().exp()
        }
    };
    let a = theta.alpha();
    let head = if a > 0.5 {
        let p = a - 0.5;
        // x = u^{1/p}, x^{p-1} dx = du / p
        let g = |u: f64| {
            if u <= 0.0 {
                return 0.0;
            }
            let x = u.powf(1.0 / p);
            let v = f(x);
            if v == 0.0 {
                0.0
            } else {
                v * x.powf(1.0 - p) / p
            }
        };
        quad::integrate_segments(&g, &[0.0, 0.5, 1.0], 0.5 * tol)
    } else {
        quad::integrate_segments(&f, &[0.0, 0.25, 1.0], 0.5 * tol)
    };
    let tail = quad::integrate_upper(f, 1.0, 0.5 * tol);
    head + tail
}

/// Quadrature oracle: double integral of exp(joint_log_pdf) over (0, inf) x R.
pub fn normalization_by_quadrature(theta: &BgglParams, tol: f64) -> f64 {
    let inner = |x: f64| {
        let g = |y: f64| joint_log_pdf(theta, x, y).unwrap().exp();
        let c = theta.delta() + theta.mu() * x;
        let sd = theta.sigma() * x.sqrt();
        quad::integrate_segments(&g, &[c - 14.0 * sd, c, c + 14.0 * sd], 1e-12)
    };
    let a = theta.alpha();
    // substitute x = u^{1/alpha} so that the gamma-weight singularity vanishes
    let g_u = |u: f64| {
        if u <= 0.0 {
            return 0.0;
        }
        let x = u.powf(1.0 / a);
        inner(x) * x.powf(1.0 - a) / a
    };
    let mode_u = (a / theta.beta()).powf(a); // image of the gamma mean
    quad::integrate_segments(&g_u, &[0.0, 0.5 * mode_u, mode_u], 0.5 * tol)
        + quad::integrate_upper(g_u, mode_u, 0.5 * tol)
}
