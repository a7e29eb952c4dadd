//! Generates the bundled synthetic weekly index/volatility fixture used by
//! the finance regression tests and the CLI examples.
//!
//! The series follows the model the pipeline assumes: log volatility is an
//! AR(1) whose innovations are ln X with X gamma, and weekly log returns are
//! delta + mu X + sigma sqrt(X) Z. The gamma rate is set to exp(psi(alpha))
//! so the innovations have mean exactly zero and the generating parameters
//! coincide with what the pipeline identifies.
//!
//! Usage: cargo run --example make_fixture -- [out.csv]

use bggl_core::dist::BgglParams;
use bggl_core::sample::{sample_gamma, RngStream};
use bggl_core::special::digamma;

fn main() {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "crates/core/tests/data/synthetic_spx_weekly.csv".to_string());

    let alpha = 1.2;
    let beta = digamma(alpha).unwrap().exp(); // E[ln X] = 0
    let (delta, mu, sigma) = (0.02, -0.001, 0.005);
    let (a, b) = (0.867, 0.7);
    let theta = BgglParams::new(alpha, beta, delta, mu, sigma).unwrap();

    let n = 261; // five years of weeks
    let mut rng = RngStream::new(20190906, 0);
    let mut ln_v = a / (1.0 - b);
    let mut ln_s = 1000.0_f64.ln();
    let mut rows = String::from("date,close,vol\n");
    let mut date = chrono::NaiveDate::from_ymd_opt(2019, 9, 6).unwrap();
    for _ in 0..n {
        let x = sample_gamma(theta.alpha(), theta.beta(), &mut rng).unwrap();
        let z = rng.standard_normal();
        let y = theta.delta() + theta.mu() * x + theta.sigma() * x.sqrt() * z;
        ln_v = a + b * ln_v + x.ln();
        ln_s += y;
        rows.push_str(&format!("{},{:.6},{:.6}\n", date, ln_s.exp(), ln_v.exp()));
        date += chrono::Duration::weeks(1);
    }
    std::fs::write(&out, rows).expect("write fixture");
    eprintln!("wrote {n} weekly rows to {out}");
}
