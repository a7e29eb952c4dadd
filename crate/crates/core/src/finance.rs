//! Returns/volatility pipeline: ingests a dated (close, vol) series, fits the
//! AR(1) model of log volatility, builds the surprise-volatility covariate
//! X(t) = exp(zeta(t)), pairs it with log returns Y(t), fits BGGL, and emits
//! QQ diagnostics against the three fitted laws.
//!
//! Input CSV schema: header `date,close,vol`, ISO-8601 dates, positive values.

use std::io::Read;
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::dist::{gal_quantile, BgglParams};
use crate::error::{Error, Result};
use crate::estimate::{fit_ar1_log, fit_bggl, FitResult, PairedSample};
use crate::special::{gamma_quantile, normal_quantile};

/// Dated index closes and volatility levels (weekly resolution for the model).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolSeries {
    dates: Vec<NaiveDate>,
    close: Vec<f64>,
    vol: Vec<f64>,
}

impl VolSeries {
    pub fn new(dates: Vec<NaiveDate>, close: Vec<f64>, vol: Vec<f64>) -> Result<Self> {
        if dates.len() != close.len() || dates.len() != vol.len() {
            return Err(Error::InvalidData("dates/close/vol lengths differ".into()));
        }
        if dates.is_empty() {
            return Err(Error::InvalidData("empty series".into()));
        }
        if dates.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidData("dates must be strictly increasing".into()));
        }
        if close.iter().chain(vol.iter()).any(|&v| !(v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidData("close and vol must be positive".into()));
        }
        Ok(Self { dates, close, vol })
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }
    pub fn close(&self) -> &[f64] {
        &self.close
    }
    pub fn vol(&self) -> &[f64] {
        &self.vol
    }
    pub fn len(&self) -> usize {
        self.dates.len()
    }
    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    /// Reads `date,close,vol` rows from a CSV reader.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        #[derive(Deserialize)]
        struct Row {
            date: NaiveDate,
            close: f64,
            vol: f64,
        }
        let mut rdr = csv::Reader::from_reader(reader);
        let mut dates = Vec::new();
        let mut close = Vec::new();
        let mut vol = Vec::new();
        for rec in rdr.deserialize() {
            let row: Row = rec?;
            dates.push(row.date);
            close.push(row.close);
            vol.push(row.vol);
        }
        Self::new(dates, close, vol)
    }

    pub fn from_csv_path<P: AsRef<Path>>(path: P) -> Result<Self> {
        Self::from_csv(std::fs::File::open(path)?)
    }

    pub fn to_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["date", "close", "vol"])?;
        for i in 0..self.len() {
            w.write_record(&[
                self.dates[i].to_string(),
                format!("{}", self.close[i]),
                format!("{}", self.vol[i]),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Aggregates a daily series to ISO weeks: the close is the last value of
    /// the week, the volatility is the weekly average of daily closes, and
    /// the date is the week's last observed day. Weeks with no observations
    /// are simply absent.
    pub fn aggregate_daily(&self) -> Result<VolSeries> {
        use chrono::Datelike;
        let mut dates = Vec::new();
        let mut close = Vec::new();
        let mut vol = Vec::new();
        let mut cur_week: Option<(i32, u32)> = None;
        let mut week_vol_sum = 0.0;
        let mut week_count = 0usize;
        for i in 0..self.len() {
            let d = self.dates[i];
            let wk = (d.iso_week().year(), d.iso_week().week());
            if cur_week != Some(wk) {
                if let Some(_) = cur_week {
                    let last = vol.len();
                    vol[last - 1] = week_vol_sum / week_count as f64;
                }
                cur_week = Some(wk);
                week_vol_sum = 0.0;
                week_count = 0;
                dates.push(d);
                close.push(self.close[i]);
                vol.push(0.0);
            }
            *dates.last_mut().unwrap() = d;
            *close.last_mut().unwrap() = self.close[i];
            week_vol_sum += self.vol[i];
            week_count += 1;
        }
        if week_count > 0 {
            let last = vol.len();
            vol[last - 1] = week_vol_sum / week_count as f64;
        }
        VolSeries::new(dates, close, vol)
    }
}

/// One point of a quantile-quantile dataset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QqPoint {
    pub theoretical: f64,
    pub empirical: f64,
}

/// Reference law for [`qq_data`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QqLaw {
    Gamma { alpha: f64, beta: f64 },
    Gal(BgglParams),
    StandardNormal,
}

/// Sorted order statistics paired with theoretical quantiles at plotting
/// positions (i - 1/2)/n.
pub fn qq_data(values: &[f64], law: &QqLaw) -> Result<Vec<QqPoint>> {
    if values.len() < 2 {
        return Err(Error::InvalidData("qq_data requires at least 2 values".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let n = sorted.len();
    let mut out = Vec::with_capacity(n);
    for (i, &emp) in sorted.iter().enumerate() {
        let p = (i as f64 + 0.5) / n as f64;
        let q = match law {
            QqLaw::Gamma { alpha, beta } => gamma_quantile(*alpha, *beta, p)?,
            QqLaw::Gal(theta) => gal_quantile(theta, p)?,
            QqLaw::StandardNormal => normal_quantile(p)?,
        };
        out.push(QqPoint { theoretical: q, empirical: emp });
    }
    Ok(out)
}

/// Writes a QQ dataset as `theoretical,empirical` CSV.
pub fn qq_to_csv<W: std::io::Write>(points: &[QqPoint], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["theoretical", "empirical"])?;
    for p in points {
        w.write_record(&[format!("{}", p.theoretical), format!("{}", p.empirical)])?;
    }
    w.flush()?;
    Ok(())
}

/// Log returns Y(t) = ln S(t) - ln S(t-1); length is len - 1.
pub fn compute_returns(series: &VolSeries) -> Result<Vec<f64>> {
    if series.len() < 2 {
        return Err(Error::InvalidData("returns require length >= 2".into()));
    }
    Ok(series
        .close
        .windows(2)
        .map(|w| w[1].ln() - w[0].ln())
        .collect())
}

/// Surprise volatility X(t) = exp(zeta(t)) = e^{-a} V(t) V(t-1)^{-b};
/// length is len - 1, aligned with the returns.
pub fn compute_surprise_vol(series: &VolSeries, a: f64, b: f64) -> Result<Vec<f64>> {
    if series.len() < 2 {
        return Err(Error::InvalidData("surprise vol requires length >= 2".into()));
    }
    Ok(series
        .vol
        .windows(2)
        .map(|w| (w[1].ln() - a - b * w[0].ln()).exp())
        .collect())
}

/// Full pipeline output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineResult {
    pub ar1_a: f64,
    pub ar1_b: f64,
    pub sample: PairedSample,
    pub fit: FitResult,
    /// Standardized residuals Z_i = (Y_i - delta - mu X_i)/(sigma sqrt(X_i));
    /// empty when the fitted upsilon is zero.
    pub residuals: Vec<f64>,
    pub qq_x_gamma: Vec<QqPoint>,
    pub qq_y_gal: Vec<QqPoint>,
    pub qq_z_normal: Vec<QqPoint>,
}

/// Runs the pipeline: AR(1) on log volatility, surprise-volatility covariate,
/// BGGL fit on (X, Y), residuals, and the three QQ datasets.
pub fn run_pipeline(series: &VolSeries) -> Result<PipelineResult> {
    if series.len() < 10 {
        return Err(Error::InvalidData(format!(
            "pipeline requires at least 10 observations, got {}",
            series.len()
        )));
    }
    let y = compute_returns(series)?;
    let (a, b, _resid) = fit_ar1_log(series.vol())?;
    let x = compute_surprise_vol(series, a, b)?;
    let sample = PairedSample::new(x, y)?;
    let fit = fit_bggl(&sample)?;
    let th = &fit.theta;

    let residuals: Vec<f64> = if th.sigma > 0.0 {
        sample
            .x()
            .iter()
            .zip(sample.y())
            .map(|(&xi, &yi)| (yi - th.delta - th.mu * xi) / (th.sigma * xi.sqrt()))
            .collect()
    } else {
        Vec::new()
    };

    let qq_x_gamma = qq_data(sample.x(), &QqLaw::Gamma { alpha: th.alpha, beta: th.beta })?;
    let qq_y_gal = match th.params() {
        Ok(p) => qq_data(sample.y(), &QqLaw::Gal(p))?,
        Err(_) => Vec::new(),
    };
    let qq_z_normal = if residuals.is_empty() {
        Vec::new()
    } else {
        qq_data(&residuals, &QqLaw::StandardNormal)?
    };

    Ok(PipelineResult {
        ar1_a: a,
        ar1_b: b,
        sample,
        fit,
        residuals,
        qq_x_gamma,
        qq_y_gal,
        qq_z_normal,
    })
}
