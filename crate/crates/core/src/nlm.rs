//! Non-local means: patch distances, weights, non-center aggregation and the
//! full denoiser in a brute-force reference form and a summed-area-table form.
//!
//! Every search offset `o != 0` in the `(2r+1)^2` window contributes one
//! non-center neighbor. Neighbor and patch reads go through mirror reflection,
//! so the window is never clipped at the border. Offsets are visited in
//! row-major order (`dy` outer, `dx` inner) by both implementations; this
//! fixes the per-pixel summation order and makes results independent of how
//! rows are spread over worker threads.

use rayon::prelude::*;

use crate::cpw::{self, CpwScheme, SchemeContext};
use crate::error::{Error, Result};
use crate::image::{Image, PixelIndex};
use crate::integral::IntegralImage;
use crate::scalar::Real;

/// `W_l` below this (zero or subnormal) is treated as "no usable neighbors".
/// Tiny but normal sums still give a well-conditioned ratio `sum w y / W`.
pub fn degenerate_weight<T: Real>() -> T {
    T::min_positive_value()
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum KernelSpec {
    #[default]
    Flat,
    /// Gaussian taper with standard deviation `alpha` pixels; `None` uses
    /// half the patch radius.
    Gaussian { alpha: Option<f64> },
}

impl std::str::FromStr for KernelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        match (name.trim(), arg) {
            ("flat", None) => Ok(KernelSpec::Flat),
            ("gaussian", None) => Ok(KernelSpec::Gaussian { alpha: None }),
            ("gaussian", Some(a)) => {
                let alpha: f64 = a
                    .trim()
                    .parse()
                    .map_err(|_| Error::param("kernel", format!("bad alpha `{a}`")))?;
                Ok(KernelSpec::Gaussian { alpha: Some(alpha) })
            }
            _ => Err(Error::param("kernel", format!("`{s}` is not flat | gaussian[:alpha]"))),
        }
    }
}

impl std::fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KernelSpec::Flat => f.write_str("flat"),
            KernelSpec::Gaussian { alpha: None } => f.write_str("gaussian"),
            KernelSpec::Gaussian { alpha: Some(a) } => write!(f, "gaussian:{a}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NlmParams {
    pub search_radius: usize,
    pub patch_radius: usize,
    /// Temperature, in squared intensity units.
    pub h: f64,
    pub kernel: KernelSpec,
}

impl NlmParams {
    pub fn new(search_radius: usize, patch_radius: usize, h: f64) -> Self {
        Self { search_radius, patch_radius, h, kernel: KernelSpec::Flat }
    }

    pub fn with_kernel(mut self, kernel: KernelSpec) -> Self {
        self.kernel = kernel;
        self
    }

    /// Pixel count of the patch, `|P| = (2p+1)^2`.
    pub fn patch_size(&self) -> usize {
        (2 * self.patch_radius + 1).pow(2)
    }

    pub fn validate(&self) -> Result<()> {
        if self.patch_radius < 1 {
            return Err(Error::param("patch_radius", "must be >= 1"));
        }
        if self.search_radius < self.patch_radius {
            return Err(Error::param(
                "search_radius",
                format!("{} is smaller than patch radius {}", self.search_radius, self.patch_radius),
            ));
        }
        check_h(self.h)
    }
}

fn check_h(h: f64) -> Result<()> {
    if h.is_finite() && h > 0.0 {
        Ok(())
    } else {
        Err(Error::param("h", format!("must be finite and > 0, got {h}")))
    }
}

/// Patch kernel `G_alpha` sampled on the `(2p+1)^2` grid, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelTaps<T> {
    radius: usize,
    taps: Vec<T>,
}

impl<T: Real> KernelTaps<T> {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn taps(&self) -> &[T] {
        &self.taps
    }

    pub fn tap(&self, d_row: isize, d_col: isize) -> T {
        let side = 2 * self.radius + 1;
        let r = (d_row + self.radius as isize) as usize;
        let c = (d_col + self.radius as isize) as usize;
        self.taps[r * side + c]
    }

    pub fn is_flat(&self) -> bool {
        self.taps.iter().all(|&t| t == T::one())
    }
}

/// Kernel taps, normalized so they sum to `|P|`. Flat taps are all exactly 1.
pub fn kernel_taps<T: Real>(patch_radius: usize, kernel: KernelSpec) -> Result<KernelTaps<T>> {
    if patch_radius < 1 {
        return Err(Error::param("patch_radius", "must be >= 1"));
    }
    let side = 2 * patch_radius + 1;
    let taps = match kernel {
        KernelSpec::Flat => vec![T::one(); side * side],
        KernelSpec::Gaussian { alpha } => {
            let alpha = alpha.unwrap_or(patch_radius as f64 / 2.0);
            if !(alpha.is_finite() && alpha > 0.0) {
                return Err(Error::param("alpha", format!("must be > 0, got {alpha}")));
            }
            let p = patch_radius as isize;
            let raw: Vec<f64> = (-p..=p)
                .flat_map(|r| (-p..=p).map(move |c| (r * r + c * c) as f64))
                .map(|d2| (-d2 / (2.0 * alpha * alpha)).exp())
                .collect();
            let scale = (side * side) as f64 / raw.iter().sum::<f64>();
            raw.into_iter().map(|t| T::lit(t * scale)).collect()
        }
    };
    Ok(KernelTaps { radius: patch_radius, taps })
}

/// Weighted squared distance between the patches centered at `l` and `k`.
pub fn patch_distance<T: Real>(
    y: &Image<T>,
    l: PixelIndex,
    k: PixelIndex,
    taps: &KernelTaps<T>,
) -> T {
    let p = taps.radius as isize;
    let mut acc = T::zero();
    let mut t = taps.taps.iter();
    for dr in -p..=p {
        for dc in -p..=p {
            let diff = y.at(l.offset(dr, dc)) - y.at(k.offset(dr, dc));
            acc = acc + *t.next().unwrap() * diff * diff;
        }
    }
    acc
}

#[inline]
pub fn nlm_weight<T: Real>(dist: T, h: T) -> T {
    (-dist / h).exp()
}

/// Aggregates over the non-center part of each search window.
#[derive(Debug, Clone, PartialEq)]
pub struct NonCenterField<T> {
    /// `W_l`, sum of non-center weights.
    pub w_sum: Image<T>,
    /// `z_l`, the estimate from non-center weights alone (`y_l` where
    /// `W_l` is degenerate).
    pub z_hat: Image<T>,
    /// Largest non-center weight.
    pub w_max: Image<T>,
}

fn window_offsets(r: usize) -> Vec<(isize, isize)> {
    let r = r as isize;
    (-r..=r)
        .flat_map(|dy| (-r..=r).map(move |dx| (dy, dx)))
        .filter(|&o| o != (0, 0))
        .collect()
}

fn finish_field<T: Real>(y: &Image<T>, w_sum: Vec<T>, wy_sum: Vec<T>, w_max: Vec<T>) -> NonCenterField<T> {
    let eps = degenerate_weight::<T>();
    let z: Vec<T> = w_sum
        .iter()
        .zip(&wy_sum)
        .zip(y.data())
        .map(|((&w, &wy), &yl)| if w < eps { yl } else { wy / w })
        .collect();
    let (wd, ht) = (y.width(), y.height());
    NonCenterField {
        w_sum: Image::from_raw(wd, ht, w_sum),
        z_hat: Image::from_raw(wd, ht, z),
        w_max: Image::from_raw(wd, ht, w_max),
    }
}

/// Brute-force non-center aggregation, `O(|S| |P|)` per pixel.
pub fn noncenter_aggregate<T: Real>(y: &Image<T>, params: &NlmParams) -> Result<NonCenterField<T>> {
    params.validate()?;
    let taps = kernel_taps::<T>(params.patch_radius, params.kernel)?;
    let h = T::lit(params.h);
    let offsets = window_offsets(params.search_radius);
    let w = y.width();

    let per_pixel: Vec<(T, T, T)> = (0..y.len())
        .into_par_iter()
        .map(|i| {
            let l = PixelIndex::new((i / w) as isize, (i % w) as isize);
            let mut w_sum = T::zero();
            let mut wy_sum = T::zero();
            let mut w_max = T::zero();
            for &(dy, dx) in &offsets {
                let k = l.offset(dy, dx);
                let wt = nlm_weight(patch_distance(y, l, k, &taps), h);
                w_sum = w_sum + wt;
                wy_sum = wy_sum + wt * y.at(k);
                w_max = w_max.max(wt);
            }
            (w_sum, wy_sum, w_max)
        })
        .collect();

    let mut ws = Vec::with_capacity(y.len());
    let mut wys = Vec::with_capacity(y.len());
    let mut wm = Vec::with_capacity(y.len());
    for (a, b, c) in per_pixel {
        ws.push(a);
        wys.push(b);
        wm.push(c);
    }
    Ok(finish_field(y, ws, wys, wm))
}

/// Summed-area-table aggregation (flat kernel), one field per entry of `hs`.
///
/// For each search offset the squared-difference image between `y` and its
/// shifted copy is integrated once; every patch distance for that offset is
/// then a four-corner lookup. All temperatures share the distance pass.
pub fn noncenter_aggregate_batch<T: Real>(
    y: &Image<T>,
    search_radius: usize,
    patch_radius: usize,
    hs: &[f64],
) -> Result<Vec<NonCenterField<T>>> {
    for &h in hs {
        NlmParams::new(search_radius, patch_radius, h).validate()?;
    }
    if hs.is_empty() {
        return Ok(Vec::new());
    }
    let (w, ht) = (y.width(), y.height());
    let (r, p) = (search_radius, patch_radius);
    let pad = r + p;
    let (ypad, pw) = y.padded(pad);
    let hs_t: Vec<T> = hs.iter().map(|&h| T::lit(h)).collect();
    let nh = hs.len();

    // diff domain covers every patch footprint: rows/cols [-p, n+p)
    let (dw, dh) = (w + 2 * p, ht + 2 * p);
    let mut diff = vec![T::zero(); dw * dh];
    let mut sat = IntegralImage::new(&diff, dw);

    // per pixel, per temperature: (sum w, sum w*y)
    let mut acc = vec![(T::zero(), T::zero()); w * ht * nh];
    let mut d_min = vec![T::infinity(); w * ht];
    let side = 2 * p;

    for (dy, dx) in window_offsets(r) {
        for a in 0..dh {
            let base = (a + r) * pw + r;
            let shifted = ((a + r) as isize + dy) as usize * pw;
            for b in 0..dw {
                let d = ypad[base + b] - ypad[shifted + ((b + r) as isize + dx) as usize];
                diff[a * dw + b] = d * d;
            }
        }
        sat.rebuild(&diff, dw);

        let sat = &sat;
        let ypad = &ypad;
        acc.par_chunks_mut(w * nh)
            .zip(d_min.par_chunks_mut(w))
            .enumerate()
            .for_each(|(i, (acc_row, dmin_row))| {
                let nb_row = ((i + pad) as isize + dy) as usize * pw;
                for j in 0..w {
                    let d = sat.rect_sum(i, j, i + side, j + side);
                    let yk = ypad[nb_row + ((j + pad) as isize + dx) as usize];
                    if d < dmin_row[j] {
                        dmin_row[j] = d;
                    }
                    for (slot, &h) in acc_row[j * nh..(j + 1) * nh].iter_mut().zip(&hs_t) {
                        let wt = nlm_weight(d, h);
                        slot.0 = slot.0 + wt;
                        slot.1 = slot.1 + wt * yk;
                    }
                }
            });
    }

    Ok((0..nh)
        .map(|t| {
            let ws: Vec<T> = (0..w * ht).map(|i| acc[i * nh + t].0).collect();
            let wys: Vec<T> = (0..w * ht).map(|i| acc[i * nh + t].1).collect();
            let wm: Vec<T> = d_min.iter().map(|&d| nlm_weight(d, hs_t[t])).collect();
            finish_field(y, ws, wys, wm)
        })
        .collect())
}

/// Fast aggregation for a single temperature; falls back to the reference
/// path for non-flat kernels.
pub fn noncenter_aggregate_fast<T: Real>(y: &Image<T>, params: &NlmParams) -> Result<NonCenterField<T>> {
    params.validate()?;
    if params.kernel != KernelSpec::Flat {
        log::info!("summed-area path needs a flat kernel; using reference path for {}", params.kernel);
        return noncenter_aggregate(y, params);
    }
    Ok(noncenter_aggregate_batch(y, params.search_radius, params.patch_radius, &[params.h])?
        .pop()
        .expect("one temperature in, one field out"))
}

/// Turn a non-center field into the denoised image for one CPW scheme.
pub fn denoise_from_field<T: Real>(
    y: &Image<T>,
    field: &NonCenterField<T>,
    params: &NlmParams,
    scheme: &CpwScheme,
    sigma: f64,
) -> Result<Image<T>> {
    let ctx = SchemeContext { sigma, h: params.h, patch_radius: params.patch_radius };
    let p = cpw::shrink_field(y, field, scheme, &ctx)?;
    cpw::combine(&field.z_hat, y, &p, scheme.clamp_upper)
}

/// Reference NLM denoiser.
pub fn nlm_denoise<T: Real>(
    y: &Image<T>,
    params: &NlmParams,
    scheme: &CpwScheme,
    sigma: f64,
) -> Result<Image<T>> {
    scheme.validate(sigma)?;
    let field = noncenter_aggregate(y, params)?;
    denoise_from_field(y, &field, params, scheme, sigma)
}

/// Same contract as [`nlm_denoise`], with summed-area-table patch distances.
pub fn nlm_denoise_fast<T: Real>(
    y: &Image<T>,
    params: &NlmParams,
    scheme: &CpwScheme,
    sigma: f64,
) -> Result<Image<T>> {
    scheme.validate(sigma)?;
    let field = noncenter_aggregate_fast(y, params)?;
    denoise_from_field(y, &field, params, scheme, sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cpw::CpwKind;
    use crate::noise::gaussian_stream;

    fn random_image(w: usize, h: usize, seed: u64, scale: f64) -> Image<f64> {
        let v = gaussian_stream(seed, w * h);
        Image::new(w, h, v.into_iter().map(|x| 128.0 + scale * x).collect()).unwrap()
    }

    fn max_abs_diff(a: &Image<f64>, b: &Image<f64>) -> f64 {
        a.data().iter().zip(b.data()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn flat_taps() {
        let t = kernel_taps::<f64>(1, KernelSpec::Flat).unwrap();
        assert_eq!(t.taps(), &[1.0; 9]);
        assert!(t.is_flat());
    }

    #[test]
    fn gaussian_taps_shape_and_normalization() {
        let t = kernel_taps::<f64>(1, KernelSpec::Gaussian { alpha: Some(1.0) }).unwrap();
        let (center, edge, corner) = (t.tap(0, 0), t.tap(0, 1), t.tap(1, 1));
        assert!(center > edge && edge > corner);
        assert!((t.taps().iter().sum::<f64>() - 9.0).abs() < 1e-12);
        // direct evaluation: ratios follow exp(-|j|^2 / 2)
        assert!((edge / center - (-0.5f64).exp()).abs() < 1e-14);
        assert!((corner / center - (-1.0f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn gaussian_taps_flatten_for_huge_alpha() {
        let t = kernel_taps::<f64>(1, KernelSpec::Gaussian { alpha: Some(1e8) }).unwrap();
        assert!(t.taps().iter().all(|&x| (x - 1.0).abs() < 1e-12));
    }

    #[test]
    fn gaussian_taps_reject_bad_alpha() {
        assert!(kernel_taps::<f64>(1, KernelSpec::Gaussian { alpha: Some(0.0) }).is_err());
        assert!(kernel_taps::<f64>(1, KernelSpec::Gaussian { alpha: Some(-2.0) }).is_err());
        assert!(kernel_taps::<f64>(0, KernelSpec::Flat).is_err());
    }

    #[test]
    fn kernel_spec_parsing() {
        assert_eq!("flat".parse::<KernelSpec>().unwrap(), KernelSpec::Flat);
        assert_eq!("gaussian".parse::<KernelSpec>().unwrap(), KernelSpec::Gaussian { alpha: None });
        assert_eq!(
            "gaussian:1.5".parse::<KernelSpec>().unwrap(),
            KernelSpec::Gaussian { alpha: Some(1.5) }
        );
        assert!("box".parse::<KernelSpec>().is_err());
    }

    #[test]
    fn patch_distance_cases() {
        let taps = kernel_taps::<f64>(1, KernelSpec::Flat).unwrap();
        let y = random_image(6, 6, 3, 30.0);
        let l = PixelIndex::new(2, 3);
        assert_eq!(patch_distance(&y, l, l, &taps), 0.0);

        let c = Image::filled(6, 6, 42.0).unwrap();
        assert_eq!(patch_distance(&c, l, PixelIndex::new(4, 0), &taps), 0.0);

        // left half all 1s, right half all 2s; patches at col 1 and col 4
        let y = Image::from_fn(6, 3, |_, col| if col < 3 { 1.0 } else { 2.0 }).unwrap();
        let d = patch_distance(&y, PixelIndex::new(1, 1), PixelIndex::new(1, 4), &taps);
        assert_eq!(d, 9.0);
    }

    #[test]
    fn weight_cases() {
        assert_eq!(nlm_weight(0.0, 5.0), 1.0);
        assert!((nlm_weight(5.0, 5.0) - (-1.0f64).exp()).abs() < 1e-15);
        let tiny = nlm_weight(5000.0, 5.0);
        assert!(tiny <= 1e-300 && tiny >= 0.0);
    }

    #[test]
    fn weights_are_symmetric() {
        let taps = kernel_taps::<f64>(2, KernelSpec::Gaussian { alpha: None }).unwrap();
        let y = random_image(9, 9, 11, 40.0);
        for (a, b) in [((0, 0), (8, 8)), ((3, 4), (5, 1)), ((-1, 2), (7, 10))] {
            let l = PixelIndex::new(a.0, a.1);
            let k = PixelIndex::new(b.0, b.1);
            assert_eq!(
                nlm_weight(patch_distance(&y, l, k, &taps), 100.0),
                nlm_weight(patch_distance(&y, k, l, &taps), 100.0)
            );
        }
    }

    #[test]
    fn constant_image_field() {
        let y = Image::filled(7, 6, 77.0).unwrap();
        let params = NlmParams::new(2, 1, 10.0);
        for field in [noncenter_aggregate(&y, &params).unwrap(), noncenter_aggregate_fast(&y, &params).unwrap()] {
            assert!(field.z_hat.data().iter().all(|&z| z == 77.0));
            assert!(field.w_sum.data().iter().all(|&w| w == 24.0));
            assert!(field.w_max.data().iter().all(|&w| w == 1.0));
        }
    }

    #[test]
    fn vanishing_h_gives_degenerate_field() {
        let y = random_image(8, 8, 5, 50.0);
        let params = NlmParams::new(2, 1, 1e-9);
        let field = noncenter_aggregate(&y, &params).unwrap();
        assert!(field.w_sum.data().iter().all(|&w| w < degenerate_weight::<f64>()));
        assert_eq!(field.z_hat, y);
    }

    #[test]
    fn zero_scheme_returns_z_hat() {
        let y = random_image(10, 9, 8, 25.0);
        let params = NlmParams::new(3, 1, 400.0);
        let field = noncenter_aggregate(&y, &params).unwrap();
        let out = nlm_denoise(&y, &params, &CpwScheme::new(CpwKind::Zero), 0.0).unwrap();
        assert_eq!(out, field.z_hat);
    }

    #[test]
    fn one_scheme_preserves_constant() {
        let y = Image::filled(9, 9, 12.5).unwrap();
        let params = NlmParams::new(2, 1, 3.0);
        let out = nlm_denoise_fast(&y, &params, &CpwScheme::new(CpwKind::One), 0.0).unwrap();
        assert!(out.data().iter().all(|&v| v == 12.5));
    }

    #[test]
    fn fast_matches_reference_on_small_images() {
        let y = random_image(32, 32, 1234, 30.0);
        let params = NlmParams::new(5, 2, 20.0 * 20.0 * 25.0);
        let a = noncenter_aggregate(&y, &params).unwrap();
        let b = noncenter_aggregate_fast(&y, &params).unwrap();
        assert!(max_abs_diff(&a.z_hat, &b.z_hat) <= 1e-9);
        assert!(max_abs_diff(&a.w_sum, &b.w_sum) <= 1e-9);
        assert!(max_abs_diff(&a.w_max, &b.w_max) <= 1e-12);
    }

    #[test]
    fn fast_path_tolerates_non_square_and_tiny_images() {
        for (w, h) in [(1, 1), (1, 5), (7, 2), (3, 11)] {
            let y = random_image(w, h, (w * 100 + h) as u64, 20.0);
            let params = NlmParams::new(3, 2, 500.0);
            let a = noncenter_aggregate(&y, &params).unwrap();
            let b = noncenter_aggregate_fast(&y, &params).unwrap();
            assert!(max_abs_diff(&a.z_hat, &b.z_hat) <= 1e-9, "{w}x{h}");
        }
    }

    #[test]
    fn batch_equals_single_runs_bitwise() {
        let y = random_image(20, 17, 99, 20.0);
        let hs = [50.0, 400.0, 3000.0];
        let batch = noncenter_aggregate_batch(&y, 4, 2, &hs).unwrap();
        for (h, field) in hs.iter().zip(&batch) {
            let single = noncenter_aggregate_fast(&y, &NlmParams::new(4, 2, *h)).unwrap();
            assert_eq!(&single, field);
        }
    }

    #[test]
    fn gaussian_kernel_falls_back_to_reference() {
        let y = random_image(12, 12, 4, 20.0);
        let params = NlmParams::new(3, 1, 300.0).with_kernel(KernelSpec::Gaussian { alpha: None });
        let a = nlm_denoise(&y, &params, &CpwScheme::new(CpwKind::One), 20.0).unwrap();
        let b = nlm_denoise_fast(&y, &params, &CpwScheme::new(CpwKind::One), 20.0).unwrap();
        assert_eq!(a, b);
    }

    fn window_mean_deviation(y: &Image<f64>, h: f64) -> f64 {
        let field = noncenter_aggregate_fast(y, &NlmParams::new(2, 1, h)).unwrap();
        let mut worst = 0.0f64;
        for row in 0..y.height() as isize {
            for col in 0..y.width() as isize {
                let mut s = 0.0;
                for dy in -2..=2 {
                    for dx in -2..=2 {
                        if (dy, dx) != (0, 0) {
                            s += y.get_reflected(row + dy, col + dx);
                        }
                    }
                }
                worst = worst.max((field.z_hat.get(row as usize, col as usize) - s / 24.0).abs());
            }
        }
        worst
    }

    #[test]
    fn large_h_approaches_window_mean() {
        // sigma = 20, |P| = 9; the deviation from the plain window mean is first
        // order in 1/h
        let y = random_image(10, 10, 17, 20.0);
        let unit = 400.0 * 9.0;
        let d4 = window_mean_deviation(&y, 1e4 * unit);
        let d6 = window_mean_deviation(&y, 1e6 * unit);
        let d8 = window_mean_deviation(&y, 1e8 * unit);
        assert!(d4 < 1e-2, "{d4}");
        assert!(d6 < d4 / 50.0, "{d6} vs {d4}");
        assert!(d8 <= 1e-6, "{d8}");
    }

    #[test]
    fn rejects_invalid_params() {
        let y = random_image(5, 5, 1, 1.0);
        assert!(noncenter_aggregate(&y, &NlmParams::new(1, 2, 1.0)).is_err());
        assert!(noncenter_aggregate(&y, &NlmParams::new(2, 0, 1.0)).is_err());
        assert!(noncenter_aggregate_fast(&y, &NlmParams::new(2, 1, 0.0)).is_err());
        assert!(noncenter_aggregate_fast(&y, &NlmParams::new(2, 1, f64::NAN)).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let y: Image<f32> = random_image(16, 16, 2, 20.0).cast();
        let params = NlmParams::new(3, 1, 3600.0);
        let a = nlm_denoise(&y, &params, &CpwScheme::new(CpwKind::LocalJamesStein { block_radius: None }), 20.0).unwrap();
        let b = nlm_denoise_fast(&y, &params, &CpwScheme::new(CpwKind::LocalJamesStein { block_radius: None }), 20.0).unwrap();
        let err = a.data().iter().zip(b.data()).map(|(x, y)| (x - y).abs()).fold(0.0f32, f32::max);
        assert!(err < 1e-2, "{err}");
    }
}
