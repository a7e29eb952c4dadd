//! Random generation: reproducible split streams, gamma and BGGL draws,
//! one-sided stable subordinator variates, and 2-D Levy process paths.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Gamma, StandardNormal};

use crate::dist::BgglParams;
use crate::error::{Error, Result};
use crate::estimate::PairedSample;
use crate::special::gamma_raw;

/// Counter-based random stream. Identical (seed, stream_id) pairs reproduce
/// identical draw sequences bit for bit; distinct stream ids give
/// statistically independent streams, so replication loops parallelize
/// deterministically.
#[derive(Debug, Clone)]
pub struct RngStream {
    rng: ChaCha8Rng,
    seed: u64,
    stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self { rng, seed, stream_id }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    /// Uniform draw in the open interval (0, 1).
    fn open_unit(&mut self) -> f64 {
        loop {
            let u: f64 = rand::Rng::random(&mut self.rng);
            if u > 0.0 {
                return u;
            }
        }
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }
    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }
}

/// One draw from GAM(alpha, beta), rate convention (mean alpha/beta).
pub fn sample_gamma(alpha: f64, beta: f64, rng: &mut RngStream) -> Result<f64> {
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(Error::InvalidParams(format!(
            "sample_gamma requires alpha, beta > 0, got {alpha}, {beta}"
        )));
    }
    let g = Gamma::new(alpha, 1.0 / beta)
        .map_err(|e| Error::InvalidParams(format!("gamma sampler: {e}")))?;
    Ok(g.sample(rng))
}

/// n IID pairs from BGGL(theta): X ~ GAM(alpha, beta) and
/// Y = delta + mu X + sigma sqrt(X) Z.
pub fn sample_bggl(theta: &BgglParams, n: usize, rng: &mut RngStream) -> Result<PairedSample> {
    if n == 0 {
        return Err(Error::InvalidParams("sample_bggl requires n >= 1".into()));
    }
    let g = Gamma::new(theta.alpha(), 1.0 / theta.beta())
        .map_err(|e| Error::InvalidParams(format!("gamma sampler: {e}")))?;
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for _ in 0..n {
        let xi: f64 = g.sample(rng).max(f64::MIN_POSITIVE);
        let z = rng.standard_normal();
        x.push(xi);
        y.push(theta.delta() + theta.mu() * xi + theta.sigma() * xi.sqrt() * z);
    }
    PairedSample::new(x, y)
}

/// One draw of the stable subordinator xi_alpha with Laplace transform
/// E exp(-u xi) = exp(-Gamma(1-alpha) u^alpha), alpha in (0, 1).
///
/// Kanter's representation generates a standard one-sided stable S with
/// E exp(-u S) = exp(-u^alpha); the deterministic factor Gamma(1-alpha)^{1/alpha}
/// then rescales it to the target transform.
pub fn sample_stable_subordinator(alpha: f64, rng: &mut RngStream) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParams(format!(
            "stable subordinator requires alpha in (0, 1), got {alpha}"
        )));
    }
    let u = std::f64::consts::PI * rng.open_unit();
    let e: f64 = Exp1.sample(rng);
    let ratio = (1.0 - alpha) / alpha;
    let s = (alpha * u).sin() * ((1.0 - alpha) * u).sin().powf(ratio)
        / (u.sin().powf(1.0 / alpha) * e.powf(ratio));
    Ok(gamma_raw(1.0 - alpha).powf(1.0 / alpha) * s)
}

/// A sampled path of the 2-D Levy process (G(t), W(G(t))).
#[derive(Debug, Clone, PartialEq)]
pub struct LevyPath {
    pub times: Vec<f64>,
    /// Gamma subordinator values; nondecreasing, g[0] = 0.
    pub g: Vec<f64>,
    /// Time-changed Brownian values; w[0] = 0.
    pub w: Vec<f64>,
}

/// Samples the process on the given grid: increments over [s, t] are
/// BGGL(alpha (t-s), beta, 0, mu, sigma).
pub fn sample_levy_path(theta: &BgglParams, times: &[f64], rng: &mut RngStream) -> Result<LevyPath> {
    if times.is_empty() || times[0] != 0.0 {
        return Err(Error::InvalidData("time grid must start at 0".into()));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidData("time grid must be nondecreasing".into()));
    }
    let mut g = Vec::with_capacity(times.len());
    let mut w = Vec::with_capacity(times.len());
    g.push(0.0);
    w.push(0.0);
    for step in times.windows(2) {
        let dt = step[1] - step[0];
        let (dg, dw) = if dt == 0.0 {
            (0.0, 0.0)
        } else {
            let dg = sample_gamma(theta.alpha() * dt, theta.beta(), rng)?;
            let z = rng.standard_normal();
            (dg, theta.mu() * dg + theta.sigma() * dg.sqrt() * z)
        };
        g.push(g.last().unwrap() + dg);
        w.push(w.last().unwrap() + dw);
    }
    Ok(LevyPath { times: times.to_vec(), g, w })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducibility_and_stream_independence() {
        let theta = BgglParams::new(2.0, 1.0, 0.0, 3.0, 1.0).unwrap();
        let a = sample_bggl(&theta, 100, &mut RngStream::new(7, 3)).unwrap();
        let b = sample_bggl(&theta, 100, &mut RngStream::new(7, 3)).unwrap();
        assert_eq!(a, b); // bitwise identical
        let c = sample_bggl(&theta, 100, &mut RngStream::new(7, 4)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn gamma_moments() {
        let mut rng = RngStream::new(42, 0);
        let n = 200_000;
        let draws: Vec<f64> = (0..n)
            .map(|_| sample_gamma(2.0, 1.0, &mut rng).unwrap())
            .collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|&v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
        // E X = 2, Var X = 2; 4-SE bands
        let se_mean = (2.0_f64 / n as f64).sqrt();
        assert!((mean - 2.0).abs() < 4.0 * se_mean, "mean {mean}");
        assert!((var - 2.0).abs() < 0.1, "var {var}");
        assert!(sample_gamma(-1.0, 1.0, &mut rng).is_err());
    }

    #[test]
    fn bggl_sample_mean_and_correlation() {
        let mut rng = RngStream::new(11, 0);
        let theta = BgglParams::new(2.0, 1.0, 0.0, 3.0, 1.0).unwrap();
        let n = 200_000;
        let s = sample_bggl(&theta, n, &mut rng).unwrap();
        let ybar = s.y().iter().sum::<f64>() / n as f64;
        // E Y = delta + mu alpha / beta = 6, Var Y = 20
        assert!((ybar - 6.0).abs() < 4.0 * (20.0_f64 / n as f64).sqrt());

        let theta0 = BgglParams::new(2.0, 1.0, 0.0, 0.0, 1.0).unwrap();
        let s0 = sample_bggl(&theta0, n, &mut rng).unwrap();
        let xb = s0.x().iter().sum::<f64>() / n as f64;
        let yb = s0.y().iter().sum::<f64>() / n as f64;
        let mut cxy = 0.0;
        let mut cxx = 0.0;
        let mut cyy = 0.0;
        for (&x, &y) in s0.x().iter().zip(s0.y()) {
            cxy += (x - xb) * (y - yb);
            cxx += (x - xb) * (x - xb);
            cyy += (y - yb) * (y - yb);
        }
        let corr = cxy / (cxx * cyy).sqrt();
        assert!(corr.abs() < 4.0 / (n as f64).sqrt(), "corr {corr}");
    }

    #[test]
    fn stable_subordinator_laplace_transform() {
        // E e^{-u xi} = exp(-Gamma(1-alpha) u^alpha) at u = 1, alpha = 0.5
        let mut rng = RngStream::new(5, 0);
        let n = 400_000;
        let mut acc = 0.0;
        let mut acc2 = 0.0;
        for _ in 0..n {
            let xi = sample_stable_subordinator(0.5, &mut rng).unwrap();
            let v = (-xi).exp();
            acc += v;
            acc2 += v * v;
        }
        let mean = acc / n as f64;
        let var = acc2 / n as f64 - mean * mean;
        let expect = (-gamma_raw(0.5)).exp(); // exp(-sqrt(pi))
        let se = (var / n as f64).sqrt();
        assert!(
            (mean - expect).abs() < 4.0 * se,
            "mean {mean} expect {expect} se {se}"
        );
        assert!(sample_stable_subordinator(1.0, &mut rng).is_err());
        assert!(sample_stable_subordinator(0.0, &mut rng).is_err());
    }

    #[test]
    fn levy_path_invariants() {
        let mut rng = RngStream::new(3, 9);
        let theta = BgglParams::new(1.5, 2.0, 0.0, -1.0, 0.7).unwrap();
        let times: Vec<f64> = (0..=50).map(|i| i as f64 * 0.1).collect();
        let p = sample_levy_path(&theta, &times, &mut rng).unwrap();
        assert_eq!(p.g.len(), times.len());
        assert_eq!(p.g[0], 0.0);
        assert_eq!(p.w[0], 0.0);
        assert!(p.g.windows(2).all(|w| w[1] >= w[0]), "subordinator monotone");

        assert!(sample_levy_path(&theta, &[0.0], &mut rng).is_ok());
        assert!(sample_levy_path(&theta, &[0.0, 1.0, 0.5], &mut rng).is_err());
        assert!(sample_levy_path(&theta, &[0.5, 1.0], &mut rng).is_err());
    }
}
