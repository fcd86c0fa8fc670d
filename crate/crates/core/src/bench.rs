//! Temperature sweeps over images, noise levels, patch sizes and CPW schemes.
//!
//! For each image and noise level one noisy realization is drawn and shared
//! by every (patch, scheme, h) cell. Each cell yields one PSNR record;
//! records for a (image, sigma, patch, scheme) cell are then reduced to a
//! mean/std summary.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::fs;
use std::hash::{Hash, Hasher};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::cpw::{CpwKind, CpwScheme};
use crate::error::{Error, Result};
use crate::image::Image;
use crate::metrics::{psnr, summarize, Psnr, PsnrRecord, SummaryStat};
use crate::nlm::{self, KernelSpec, NlmParams};
use crate::noise::{add_gaussian_noise, derive_seed, NoiseSpec};
use crate::pgm::load_pgm;

/// Temperatures processed together in one distance pass.
const H_BATCH: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HSpacing {
    #[default]
    Linear,
    Log,
}

impl FromStr for HSpacing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(HSpacing::Linear),
            "log" => Ok(HSpacing::Log),
            _ => Err(Error::param("h_spacing", format!("`{s}` is not linear | log"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub images: Vec<PathBuf>,
    pub sigmas: Vec<f64>,
    pub patch_radii: Vec<usize>,
    pub search_radius: usize,
    pub schemes: Vec<CpwScheme>,
    pub h_steps: usize,
    /// Grid bounds as fractions of `sigma^2 |P|`.
    pub h_lo_frac: f64,
    pub h_hi_frac: f64,
    pub h_spacing: HSpacing,
    pub seed: u64,
    pub kernel: KernelSpec,
    /// Largest PSNR spread (dB) accepted by the large-h convergence check.
    pub trend_bound_db: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            images: Vec::new(),
            sigmas: vec![10.0, 20.0, 40.0],
            patch_radii: vec![2, 3],
            search_radius: 15,
            schemes: CpwScheme::all(),
            h_steps: 200,
            h_lo_frac: 0.01,
            h_hi_frac: 2.0,
            h_spacing: HSpacing::Linear,
            seed: 0,
            kernel: KernelSpec::Flat,
            trend_bound_db: 0.3,
        }
    }
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse().map_err(|_| Error::Config { key: key.into(), reason: format!("cannot parse `{s}`") })
        })
        .collect()
}

fn parse_one<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config { key: key.into(), reason: format!("cannot parse `{value}`") })
}

impl SweepConfig {
    /// Parse flat `key = value` lines (`#` starts a comment) on top of the
    /// defaults. Relative image paths are resolved against `base_dir`.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut cfg = SweepConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config {
                    key: line.to_string(),
                    reason: format!("line {} is not `key = value`", lineno + 1),
                });
            };
            cfg.set(key.trim(), value.trim(), base_dir)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str, base_dir: &Path) -> Result<()> {
        let wrap = |e: Error| Error::Config { key: key.into(), reason: e.to_string() };
        match key {
            "images" => {
                self.images = parse_list::<String>(key, value)?
                    .into_iter()
                    .map(|p| base_dir.join(p))
                    .collect()
            }
            "sigmas" => self.sigmas = parse_list(key, value)?,
            "patch_radii" => self.patch_radii = parse_list(key, value)?,
            "search_radius" => self.search_radius = parse_one(key, value)?,
            "schemes" => {
                self.schemes = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse().map_err(wrap))
                    .collect::<Result<_>>()?
            }
            "h_steps" => self.h_steps = parse_one(key, value)?,
            "h_lo_frac" => self.h_lo_frac = parse_one(key, value)?,
            "h_hi_frac" => self.h_hi_frac = parse_one(key, value)?,
            "h_spacing" => self.h_spacing = value.parse().map_err(wrap)?,
            "seed" => self.seed = parse_one(key, value)?,
            "kernel" => self.kernel = value.parse().map_err(wrap)?,
            "trend_bound" => self.trend_bound_db = parse_one(key, value)?,
            _ => return Err(Error::Config { key: key.into(), reason: "unknown key".into() }),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |key: &str, reason: String| Err(Error::Config { key: key.into(), reason });
        if !(self.h_lo_frac > 0.0 && self.h_lo_frac <= self.h_hi_frac && self.h_hi_frac.is_finite()) {
            return bad("h_lo_frac", format!("need 0 < {} <= {}", self.h_lo_frac, self.h_hi_frac));
        }
        if self.h_steps == 0 {
            return bad("h_steps", "must be >= 1".into());
        }
        if let Some(s) = self.sigmas.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
            return bad("sigmas", format!("noise level {s} must be > 0"));
        }
        if let Some(&p) = self.patch_radii.iter().find(|&&p| p == 0 || p > self.search_radius) {
            return bad("patch_radii", format!("radius {p} not in 1..={}", self.search_radius));
        }
        Ok(())
    }
}

/// Temperatures `f_i sigma^2 |P|` for the configured fraction grid.
pub fn h_grid(sigma: f64, patch_size: usize, cfg: &SweepConfig) -> Vec<f64> {
    let base = sigma * sigma * patch_size as f64;
    let (lo, hi, n) = (cfg.h_lo_frac, cfg.h_hi_frac, cfg.h_steps);
    if n == 1 {
        return vec![lo * base];
    }
    (0..n)
        .map(|i| {
            let t = i as f64 / (n - 1) as f64;
            let f = match cfg.h_spacing {
                HSpacing::Linear => lo + i as f64 * (hi - lo) / (n - 1) as f64,
                HSpacing::Log => lo * (hi / lo).powf(t),
            };
            f * base
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellKey {
    pub image_id: String,
    pub sigma: f64,
    pub patch_radius: usize,
    pub scheme: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Ordered by image, sigma, patch, scheme, h.
    pub records: Vec<PsnrRecord>,
    /// One entry per (image, sigma, patch, scheme), same order as `records`.
    pub summaries: Vec<(CellKey, SummaryStat)>,
    /// Digest of the noisy image used for each (image, sigma).
    pub noisy_digests: Vec<(String, f64, u64)>,
}

impl SweepResult {
    pub fn summary(&self, image_id: &str, sigma: f64, patch_radius: usize, scheme: &str) -> Option<&SummaryStat> {
        self.summaries
            .iter()
            .find(|(k, _)| {
                k.image_id == image_id && k.sigma == sigma && k.patch_radius == patch_radius && k.scheme == scheme
            })
            .map(|(_, s)| s)
    }
}

pub fn image_digest(img: &Image<f64>) -> u64 {
    let mut hasher = DefaultHasher::new();
    (img.width(), img.height()).hash(&mut hasher);
    for v in img.data() {
        v.to_bits().hash(&mut hasher);
    }
    hasher.finish()
}

/// The noisy observation shared by every cell of (image `index`, `sigma`).
pub fn noisy_for_cell(clean: &Image<f64>, base_seed: u64, index: usize, sigma: f64) -> Result<Image<f64>> {
    let seed = derive_seed(base_seed, &[index as u64, sigma.to_bits()]);
    Ok(add_gaussian_noise(clean, NoiseSpec::new(sigma, seed)?))
}

fn image_id(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}

/// Load every configured image and run the sweep.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let images = cfg
        .images
        .iter()
        .map(|p| Ok((image_id(p), load_pgm::<f64>(p)?)))
        .collect::<Result<Vec<_>>>()?;
    run_sweep_on(&images, cfg)
}

/// Run the sweep over already loaded `(id, clean image)` pairs.
pub fn run_sweep_on(images: &[(String, Image<f64>)], cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    for s in &cfg.schemes {
        for &sigma in &cfg.sigmas {
            s.validate(sigma)?;
        }
    }
    let mut records = Vec::new();
    let mut summaries = Vec::new();
    let mut noisy_digests = Vec::new();

    for (index, (id, clean)) in images.iter().enumerate() {
        for &sigma in &cfg.sigmas {
            let noisy = noisy_for_cell(clean, cfg.seed, index, sigma)?;
            noisy_digests.push((id.clone(), sigma, image_digest(&noisy)));
            for &patch_radius in &cfg.patch_radii {
                let params = NlmParams::new(cfg.search_radius, patch_radius, 1.0).with_kernel(cfg.kernel);
                let hs = h_grid(sigma, params.patch_size(), cfg);
                // psnr[scheme][h]
                let mut cell: Vec<Vec<Psnr>> = vec![Vec::with_capacity(hs.len()); cfg.schemes.len()];

                for chunk in hs.chunks(H_BATCH) {
                    let fields = if cfg.kernel == KernelSpec::Flat {
                        nlm::noncenter_aggregate_batch(&noisy, cfg.search_radius, patch_radius, chunk)?
                    } else {
                        chunk
                            .iter()
                            .map(|&h| nlm::noncenter_aggregate(&noisy, &NlmParams { h, ..params }))
                            .collect::<Result<Vec<_>>>()?
                    };
                    let scores: Vec<Vec<Psnr>> = chunk
                        .par_iter()
                        .zip(fields.par_iter())
                        .map(|(&h, field)| {
                            let p = NlmParams { h, ..params };
                            cfg.schemes
                                .iter()
                                .map(|s| psnr(clean, &nlm::denoise_from_field(&noisy, field, &p, s, sigma)?))
                                .collect::<Result<Vec<_>>>()
                        })
                        .collect::<Result<_>>()?;
                    for per_h in scores {
                        for (slot, v) in cell.iter_mut().zip(per_h) {
                            slot.push(v);
                        }
                    }
                }

                for (scheme, values) in cfg.schemes.iter().zip(cell) {
                    let name = scheme.to_string();
                    if let Some(bad) = values.iter().find(|v| matches!(v, Psnr::Db(x) if !x.is_finite())) {
                        return Err(Error::NonFinite(format!(
                            "{id} sigma={sigma} patch={patch_radius} scheme={name}: {bad:?}"
                        )));
                    }
                    if values.len() >= 2 {
                        let key = CellKey { image_id: id.clone(), sigma, patch_radius, scheme: name.clone() };
                        summaries.push((key, summarize(&values)?));
                    }
                    records.extend(hs.iter().zip(values).map(|(&h, v)| PsnrRecord {
                        image_id: id.clone(),
                        sigma,
                        patch_radius,
                        scheme: name.clone(),
                        h,
                        psnr: v,
                    }));
                }
            }
        }
    }
    Ok(SweepResult { records, summaries, noisy_digests })
}

fn fmt_db(p: Psnr) -> String {
    match p {
        Psnr::Db(v) => format!("{v:.6}"),
        Psnr::Saturated => "inf".into(),
    }
}

pub fn records_csv(result: &SweepResult) -> String {
    let mut out = String::from("image,sigma,patch,scheme,h,psnr_db\n");
    for r in &result.records {
        out.push_str(&format!(
            "{},{:.6},{},{},{:.6},{}\n",
            r.image_id,
            r.sigma,
            r.patch_radius,
            r.scheme,
            r.h,
            fmt_db(r.psnr)
        ));
    }
    out
}

pub fn summary_csv(result: &SweepResult) -> String {
    let mut out = String::from("image,sigma,patch,scheme,mean_db,std_db,count\n");
    for (k, s) in &result.summaries {
        out.push_str(&format!(
            "{},{:.6},{},{},{:.6},{:.6},{}\n",
            k.image_id, k.sigma, k.patch_radius, k.scheme, s.mean_db, s.std_db, s.count
        ));
    }
    out
}

/// Path of the summary file written next to `path`.
pub fn summary_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".summary.csv");
    PathBuf::from(s)
}

/// Write the record CSV to `path` and the summary CSV to `<path>.summary.csv`.
pub fn emit_csv(result: &SweepResult, path: &Path) -> Result<()> {
    let write = |p: &Path, body: String| -> Result<()> {
        let mut f = fs::File::create(p).map_err(|e| Error::io(p, e))?;
        f.write_all(body.as_bytes()).map_err(|e| Error::io(p, e))
    };
    write(path, records_csv(result))?;
    write(&summary_path(path), summary_csv(result))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrendStatus {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for TrendStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TrendStatus::Pass => "PASS",
            TrendStatus::Fail => "FAIL",
            TrendStatus::Skip => "SKIP",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrendCheck {
    pub name: String,
    pub status: TrendStatus,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrendReport {
    pub checks: Vec<TrendCheck>,
}

impl TrendReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != TrendStatus::Fail)
    }
}

impl fmt::Display for TrendReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{}: {} ({})", c.name, c.status, c.detail)?;
        }
        Ok(())
    }
}

fn kind_of(name: &str) -> Option<CpwKind> {
    name.parse::<CpwScheme>().ok().map(|s| s.kind)
}

fn is_converging_kind(kind: CpwKind) -> Option<usize> {
    match kind {
        CpwKind::One => Some(0),
        CpwKind::Stein => Some(1),
        CpwKind::Max => Some(2),
        CpwKind::Heuristic { .. } => Some(3),
        _ => None,
    }
}

fn spread(values: impl IntoIterator<Item = f64>) -> f64 {
    let (lo, hi) = values.into_iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(v), h.max(v)));
    hi - lo
}

/// Check the two qualitative trends of a sweep:
///
/// * `large-h-convergence`: at the largest temperature, the one, stein, max
///   and heuristic schemes agree to within `bound_db`.
/// * `noise-level-spread`: the across-scheme spread of best-h PSNR shrinks
///   as the noise level grows.
pub fn check_trends(result: &SweepResult, bound_db: f64) -> TrendReport {
    let mut report = TrendReport::default();
    let mut groups: Vec<(String, usize)> = Vec::new();
    let mut sigmas_of: Vec<Vec<f64>> = Vec::new();
    for r in &result.records {
        let g = (r.image_id.clone(), r.patch_radius);
        let gi = match groups.iter().position(|x| *x == g) {
            Some(i) => i,
            None => {
                groups.push(g);
                sigmas_of.push(Vec::new());
                groups.len() - 1
            }
        };
        if !sigmas_of[gi].contains(&r.sigma) {
            sigmas_of[gi].push(r.sigma);
        }
    }

    for ((image, patch), sigmas) in groups.iter().zip(&sigmas_of) {
        let mut best_spreads = Vec::new();
        for &sigma in sigmas {
            let cell: Vec<&PsnrRecord> = result
                .records
                .iter()
                .filter(|r| &r.image_id == image && r.patch_radius == *patch && r.sigma == sigma)
                .collect();
            let name = format!("large-h-convergence[{image},sigma={sigma},patch={patch}]");
            let h_top = cell.iter().map(|r| r.h).fold(f64::NEG_INFINITY, f64::max);
            let mut at_top: [Option<f64>; 4] = [None; 4];
            for r in cell.iter().filter(|r| r.h == h_top) {
                if let Some(slot) = kind_of(&r.scheme).and_then(is_converging_kind) {
                    at_top[slot] = r.psnr.db();
                }
            }
            report.checks.push(if at_top.iter().all(Option::is_some) {
                let s = spread(at_top.iter().flatten().copied());
                TrendCheck {
                    name,
                    status: if s < bound_db { TrendStatus::Pass } else { TrendStatus::Fail },
                    detail: format!("h={h_top:.6} spread={s:.6} dB bound={bound_db} dB"),
                }
            } else {
                TrendCheck {
                    name,
                    status: TrendStatus::Skip,
                    detail: "needs one, stein, max and heur schemes".into(),
                }
            });

            let mut best: Vec<(String, f64)> = Vec::new();
            for r in &cell {
                let Some(v) = r.psnr.db() else { continue };
                match best.iter_mut().find(|(s, _)| *s == r.scheme) {
                    Some(slot) => slot.1 = slot.1.max(v),
                    None => best.push((r.scheme.clone(), v)),
                }
            }
            if best.len() >= 2 {
                best_spreads.push((sigma, spread(best.iter().map(|b| b.1))));
            }
        }

        let name = format!("noise-level-spread[{image},patch={patch}]");
        best_spreads.sort_by(|a, b| a.0.total_cmp(&b.0));
        let detail = best_spreads
            .iter()
            .map(|(s, d)| format!("sigma={s}:{d:.6}"))
            .collect::<Vec<_>>()
            .join(" ");
        report.checks.push(if best_spreads.len() < 2 {
            TrendCheck { name, status: TrendStatus::Skip, detail: "needs at least two noise levels and two schemes".into() }
        } else {
            let decreasing = best_spreads.windows(2).all(|w| w[1].1 < w[0].1);
            TrendCheck {
                name,
                status: if decreasing { TrendStatus::Pass } else { TrendStatus::Fail },
                detail: format!("best-h spread dB {detail}"),
            }
        });
    }
    report
}
