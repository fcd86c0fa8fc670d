//! PSNR and mean/std aggregation.

use std::fmt;

use crate::error::{Error, Result};
use crate::image::Image;
use crate::scalar::Real;

/// Below this mean squared error the images are considered identical.
pub const SATURATION_MSE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Psnr {
    Db(f64),
    /// The images are (numerically) identical.
    Saturated,
}

impl Psnr {
    pub fn db(self) -> Option<f64> {
        match self {
            Psnr::Db(v) => Some(v),
            Psnr::Saturated => None,
        }
    }
}

impl fmt::Display for Psnr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Psnr::Db(v) => write!(f, "{v:.6} dB"),
            Psnr::Saturated => f.write_str("saturated"),
        }
    }
}

pub fn mse<T: Real>(x: &Image<T>, x_hat: &Image<T>) -> Result<f64> {
    x.ensure_same_shape(x_hat)?;
    let sum: f64 = x
        .data()
        .iter()
        .zip(x_hat.data())
        .map(|(&a, &b)| {
            let d = a.as_f64() - b.as_f64();
            d * d
        })
        .sum();
    Ok(sum / x.len() as f64)
}

/// `20 log10(255) - 10 log10(MSE)`.
pub fn psnr<T: Real>(x: &Image<T>, x_hat: &Image<T>) -> Result<Psnr> {
    let m = mse(x, x_hat)?;
    if m < SATURATION_MSE {
        return Ok(Psnr::Saturated);
    }
    Ok(Psnr::Db(20.0 * 255f64.log10() - 10.0 * m.log10()))
}

/// One PSNR measurement of the benchmark grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PsnrRecord {
    pub image_id: String,
    pub sigma: f64,
    pub patch_radius: usize,
    pub scheme: String,
    pub h: f64,
    pub psnr: Psnr,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStat {
    pub mean_db: f64,
    /// Sample standard deviation (divisor `count - 1`).
    pub std_db: f64,
    pub count: usize,
}

pub fn summarize(values: &[Psnr]) -> Result<SummaryStat> {
    let finite: Vec<f64> = values
        .iter()
        .map(|p| p.db().ok_or_else(|| Error::param("psnr", "saturated values cannot be summarized")))
        .collect::<Result<_>>()?;
    summarize_db(&finite)
}

pub fn summarize_db(values: &[f64]) -> Result<SummaryStat> {
    if values.len() < 2 {
        return Err(Error::param("psnr", format!("need at least 2 values, got {}", values.len())));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::param("psnr", "non-finite value"));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(SummaryStat { mean_db: mean, std_db: var.sqrt(), count: values.len() })
}
