//! Standard normal density, CDF and quantile.

use super::gamma_fn::{reg_gamma_lower, reg_gamma_upper};
use crate::error::{Error, Result};

const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

/// Standard normal density.
pub fn normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / SQRT_2PI
}

/// Standard normal CDF, via the regularized incomplete gamma (Phi(z) = Q(1/2, z^2/2)/2 for z < 0).
pub fn normal_cdf(z: f64) -> f64 {
    let h = 0.5 * z * z;
    if z < 0.0 {
        0.5 * reg_gamma_upper(0.5, h)
    } else if z > 0.0 {
        0.5 + 0.5 * reg_gamma_lower(0.5, h)
    } else {
        0.5
    }
}

/// Wichura's AS 241 (PPND16) inverse normal CDF, relative error ~1e-15.
pub(crate) fn normal_quantile_raw(p: f64) -> f64 {
    debug_assert!(p > 0.0 && p < 1.0);
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        return q * poly_a(r) / poly_b(r);
    }
    let r = if q < 0.0 { p } else { 1.0 - p };
    let r = (-r.ln()).sqrt();
    let val = if r <= 5.0 {
        let r = r - 1.6;
        poly_c(r) / poly_d(r)
    } else {
        let r = r - 5.0;
        poly_e(r) / poly_f(r)
    };
    if q < 0.0 {
        -val
    } else {
        val
    }
}

/// Standard normal quantile for p in (0, 1).
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!(
            "normal_quantile requires p in (0, 1), got {p}"
        )));
    }
    Ok(normal_quantile_raw(p))
}

fn poly_a(r: f64) -> f64 {
    ((((((2.509_080_928_730_122_7e3 * r + 3.343_057_558_358_813e4) * r
        + 6.726_577_092_700_87e4)
        * r
        + 4.592_195_393_154_987e4)
        * r
        + 1.373_169_376_550_946e4)
        * r
        + 1.971_590_950_306_551_3e3)
        * r
        + 1.331_416_678_917_843_8e2)
        * r
        + 3.387_132_872_796_366_5
}

fn poly_b(r: f64) -> f64 {
    ((((((5.226_495_278_852_545_4e3 * r + 2.872_908_573_572_194_3e4) * r
        + 3.930_789_580_009_271e4)
        * r
        + 2.121_379_430_158_659_7e4)
        * r
        + 5.394_196_021_424_751e3)
        * r
        + 6.871_870_074_920_579e2)
        * r
        + 4.231_333_070_160_091e1)
        * r
        + 1.0
}

fn poly_c(r: f64) -> f64 {
    ((((((7.745_450_142_783_414e-4 * r + 2.272_384_498_926_918_4e-2) * r
        + 2.417_807_251_774_506e-1)
        * r
        + 1.270_458_252_452_368_4)
        * r
        + 3.647_848_324_763_204_5)
        * r
        + 5.769_497_221_460_691)
        * r
        + 4.630_337_846_156_546)
        * r
        + 1.423_437_110_749_683_5
}

fn poly_d(r: f64) -> f64 {
    ((((((1.050_750_071_644_416_9e-9 * r + 5.475_938_084_995_345e-4) * r
        + 1.519_866_656_361_645_7e-2)
        * r
        + 1.481_039_764_274_800_8e-1)
        * r
        + 6.897_673_349_851e-1)
        * r
        + 1.676_384_830_183_803_8)
        * r
        + 2.053_191_626_637_759)
        * r
        + 1.0
}

fn poly_e(r: f64) -> f64 {
    ((((((2.010_334_399_292_288_1e-7 * r + 2.711_555_568_743_487_6e-5) * r
        + 1.242_660_947_388_078_4e-3)
        * r
        + 2.653_218_952_657_612_4e-2)
        * r
        + 2.965_605_718_285_048_7e-1)
        * r
        + 1.784_826_539_917_291_3)
        * r
        + 5.463_784_911_164_114)
        * r
        + 6.657_904_643_501_103
}

fn poly_f(r: f64) -> f64 {
    ((((((2.044_263_103_389_939_7e-15 * r + 1.421_511_758_316_446e-7) * r
        + 1.846_318_317_510_054_8e-5)
        * r
        + 7.868_691_311_456_133e-4)
        * r
        + 1.487_536_129_085_061_5e-2)
        * r
        + 1.369_298_809_227_358)
        * r
        + 5.998_322_065_558_88e-1)
        * r
        + 1.0
}
