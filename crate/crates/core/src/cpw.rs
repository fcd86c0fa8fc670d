//! Center pixel weights and the shrinkage combiner.
//!
//! Writing the NLM estimate as `x_l = (1 - p_l) z_l + p_l y_l`, every CPW
//! scheme reduces to a shrink fraction `p_l` in `[0, 1]`. The baseline
//! schemes produce a raw weight `v_l` that is normalized against the
//! non-center mass `W_l`; the James-Stein schemes set `p` directly from the
//! residual energy `||y - z||^2`, globally or over a local block.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::image::{Image, PixelIndex};
use crate::integral::IntegralImage;
use crate::nlm::{degenerate_weight, NonCenterField};
use crate::scalar::Real;

/// Residual energy below this is treated as zero.
pub const ZERO_RESIDUAL: f64 = 1e-12;

pub const DEFAULT_HEURISTIC_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CpwKind {
    One,
    Zero,
    Stein,
    Max,
    Heuristic { threshold: f64 },
    JamesStein,
    /// `block_radius: None` uses the patch radius.
    LocalJamesStein { block_radius: Option<usize> },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CpwScheme {
    pub kind: CpwKind,
    /// Upper cap applied to every shrink fraction before combining.
    pub clamp_upper: f64,
}

impl CpwScheme {
    pub fn new(kind: CpwKind) -> Self {
        Self { kind, clamp_upper: 1.0 }
    }

    pub fn with_clamp_upper(mut self, cap: f64) -> Self {
        self.clamp_upper = cap;
        self
    }

    /// The seven schemes compared by the benchmark, with default parameters.
    pub fn all() -> Vec<CpwScheme> {
        [
            CpwKind::Zero,
            CpwKind::One,
            CpwKind::Stein,
            CpwKind::Max,
            CpwKind::Heuristic { threshold: DEFAULT_HEURISTIC_THRESHOLD },
            CpwKind::JamesStein,
            CpwKind::LocalJamesStein { block_radius: None },
        ]
        .into_iter()
        .map(CpwScheme::new)
        .collect()
    }

    pub fn needs_sigma(&self) -> bool {
        matches!(self.kind, CpwKind::Stein | CpwKind::JamesStein | CpwKind::LocalJamesStein { .. })
    }

    pub fn validate(&self, sigma: f64) -> Result<()> {
        if !(self.clamp_upper > 0.0 && self.clamp_upper <= 1.0) {
            return Err(Error::param("clamp_upper", format!("{} not in (0, 1]", self.clamp_upper)));
        }
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(Error::param("sigma", format!("must be finite and >= 0, got {sigma}")));
        }
        match self.kind {
            CpwKind::Heuristic { threshold } if !(0.0..=1.0).contains(&threshold) => {
                Err(Error::param("threshold", format!("{threshold} not in [0, 1]")))
            }
            CpwKind::LocalJamesStein { block_radius: Some(0) } => {
                Err(Error::param("block_radius", "ljs block must hold at least 3 pixels"))
            }
            CpwKind::JamesStein | CpwKind::LocalJamesStein { .. } if sigma <= 0.0 => {
                Err(Error::param("sigma", format!("scheme {self} needs a noise level > 0")))
            }
            _ => Ok(()),
        }
    }
}

const GRAMMAR: &str = "one | zero | stein | max | heur[:tau] | js | ljs[:block_radius]";

impl FromStr for CpwScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: String| Error::param("cpw", format!("{why}; valid schemes: {GRAMMAR}"));
        let (name, arg) = match s.trim().split_once(':') {
            Some((n, a)) => (n, Some(a.trim())),
            None => (s.trim(), None),
        };
        let kind = match (name, arg) {
            ("one", None) => CpwKind::One,
            ("zero", None) => CpwKind::Zero,
            ("stein", None) => CpwKind::Stein,
            ("max", None) => CpwKind::Max,
            ("heur", None) => CpwKind::Heuristic { threshold: DEFAULT_HEURISTIC_THRESHOLD },
            ("heur", Some(a)) => {
                let threshold: f64 = a.parse().map_err(|_| bad(format!("bad threshold `{a}`")))?;
                if !(0.0..=1.0).contains(&threshold) {
                    return Err(bad(format!("threshold {threshold} not in [0, 1]")));
                }
                CpwKind::Heuristic { threshold }
            }
            ("js", None) => CpwKind::JamesStein,
            ("ljs", None) => CpwKind::LocalJamesStein { block_radius: None },
            ("ljs", Some(a)) => {
                let b: usize = a.parse().map_err(|_| bad(format!("bad block radius `{a}`")))?;
                if b == 0 {
                    return Err(bad("block radius must be >= 1".into()));
                }
                CpwKind::LocalJamesStein { block_radius: Some(b) }
            }
            _ => return Err(bad(format!("unknown scheme `{s}`"))),
        };
        Ok(CpwScheme::new(kind))
    }
}

impl fmt::Display for CpwScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            CpwKind::One => f.write_str("one"),
            CpwKind::Zero => f.write_str("zero"),
            CpwKind::Stein => f.write_str("stein"),
            CpwKind::Max => f.write_str("max"),
            CpwKind::Heuristic { threshold } => write!(f, "heur:{threshold}"),
            CpwKind::JamesStein => f.write_str("js"),
            CpwKind::LocalJamesStein { block_radius: None } => f.write_str("ljs"),
            CpwKind::LocalJamesStein { block_radius: Some(b) } => write!(f, "ljs:{b}"),
        }
    }
}

/// A raw center weight; `Infinite` means "keep the noisy pixel".
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CpwValue<T> {
    Finite(T),
    Infinite,
}

pub fn cpw_one<T: Real>() -> CpwValue<T> {
    CpwValue::Finite(T::one())
}

pub fn cpw_zero<T: Real>() -> CpwValue<T> {
    CpwValue::Finite(T::zero())
}

/// `exp(-sigma^2 |P| / h)`, the expected self-weight under pure noise.
pub fn cpw_stein<T: Real>(sigma: f64, patch_size: usize, h: f64) -> CpwValue<T> {
    CpwValue::Finite(T::lit((-sigma * sigma * patch_size as f64 / h).exp()))
}

pub fn cpw_max<T: Real>(weights_excluding_center: &[T]) -> Result<CpwValue<T>> {
    weights_excluding_center
        .iter()
        .copied()
        .reduce(T::max)
        .map(CpwValue::Finite)
        .ok_or_else(|| Error::param("weights", "no non-center weights"))
}

/// Max weight, or infinite when even the best neighbor is no better than `threshold`.
pub fn cpw_heuristic<T: Real>(v_max: T, threshold: f64) -> CpwValue<T> {
    if v_max <= T::lit(threshold) {
        CpwValue::Infinite
    } else {
        CpwValue::Finite(v_max)
    }
}

/// `p = v / (v + W)`.
pub fn shrink_fraction<T: Real>(v: CpwValue<T>, w_sum: T) -> T {
    let eps = degenerate_weight::<T>();
    match v {
        CpwValue::Infinite => T::one(),
        CpwValue::Finite(v) if v < eps && w_sum < eps => T::one(),
        CpwValue::Finite(v) => v / (v + w_sum),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ShrinkField<T> {
    Global(T),
    PerPixel(Image<T>),
}

impl<T: Real> ShrinkField<T> {
    #[inline]
    pub fn at(&self, i: usize) -> T {
        match self {
            ShrinkField::Global(p) => *p,
            ShrinkField::PerPixel(map) => map.data()[i],
        }
    }

    pub fn iter_values(&self, len: usize) -> impl Iterator<Item = T> + '_ {
        (0..len).map(move |i| self.at(i))
    }
}

/// Per-pixel convex combination `(1 - p) z + p y`, with `p` capped at `clamp_upper`.
pub fn combine<T: Real>(
    z_hat: &Image<T>,
    y: &Image<T>,
    p: &ShrinkField<T>,
    clamp_upper: f64,
) -> Result<Image<T>> {
    z_hat.ensure_same_shape(y)?;
    if let ShrinkField::PerPixel(map) = p {
        map.ensure_same_shape(y)?;
    }
    let cap = T::lit(clamp_upper);
    let data = z_hat
        .data()
        .iter()
        .zip(y.data())
        .enumerate()
        .map(|(i, (&z, &yl))| {
            let p = p.at(i).min(cap);
            (T::one() - p) * z + p * yl
        })
        .collect();
    Ok(Image::from_raw(y.width(), y.height(), data))
}

fn positive_part_fraction<T: Real>(count: usize, sigma: f64, energy: T) -> T {
    if energy < T::lit(ZERO_RESIDUAL) {
        return T::zero();
    }
    let dof = T::lit(count as f64 - 2.0);
    let raw = T::one() - dof * T::lit(sigma * sigma) / energy;
    raw.max(T::zero()).min(T::one())
}

/// Global James-Stein fraction `1 - (m - 2) sigma^2 / ||y - z||^2`, clamped to `[0, 1]`.
pub fn js_fraction<T: Real>(y: &Image<T>, z_hat: &Image<T>, sigma: f64) -> Result<ShrinkField<T>> {
    y.ensure_same_shape(z_hat)?;
    if y.len() < 3 {
        return Err(Error::param("image", format!("needs at least 3 pixels, has {}", y.len())));
    }
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::param("sigma", format!("must be > 0, got {sigma}")));
    }
    let energy: T = y.data().iter().zip(z_hat.data()).map(|(&a, &b)| (a - b) * (a - b)).sum();
    Ok(ShrinkField::Global(positive_part_fraction(y.len(), sigma, energy)))
}

/// Integral image of the squared residual `(y - z)^2`.
#[derive(Debug, Clone)]
pub struct ResidualIntegral<T>(IntegralImage<T>);

impl<T: Real> ResidualIntegral<T> {
    pub fn width(&self) -> usize {
        self.0.width()
    }

    pub fn height(&self) -> usize {
        self.0.height()
    }

    /// Inclusive prefix sum up to `(row, col)`.
    pub fn value(&self, row: usize, col: usize) -> T {
        self.0.value(row, col)
    }

    pub fn total(&self) -> T {
        self.0.total()
    }

    /// Inclusive row/column bounds of the block of radius `b` around `l`,
    /// clipped to the image.
    pub fn block_bounds(&self, l: PixelIndex, b: usize) -> (usize, usize, usize, usize) {
        let b = b as isize;
        let clip = |v: isize, n: usize| v.clamp(0, n as isize - 1) as usize;
        (
            clip(l.row - b, self.height()),
            clip(l.col - b, self.width()),
            clip(l.row + b, self.height()),
            clip(l.col + b, self.width()),
        )
    }

    /// Number of real pixels inside the clipped block.
    pub fn block_area(&self, l: PixelIndex, b: usize) -> usize {
        let (r0, c0, r1, c1) = self.block_bounds(l, b);
        (r1 - r0 + 1) * (c1 - c0 + 1)
    }
}

pub fn residual_integral<T: Real>(y: &Image<T>, z_hat: &Image<T>) -> Result<ResidualIntegral<T>> {
    y.ensure_same_shape(z_hat)?;
    let sq: Vec<T> = y.data().iter().zip(z_hat.data()).map(|(&a, &b)| (a - b) * (a - b)).collect();
    Ok(ResidualIntegral(IntegralImage::new(&sq, y.width())))
}

/// Residual energy over the `(2b+1)^2` block at `l`, clipped to the image.
pub fn block_sq_norm<T: Real>(table: &ResidualIntegral<T>, l: PixelIndex, block_radius: usize) -> T {
    let (r0, c0, r1, c1) = table.block_bounds(l, block_radius);
    table.0.rect_sum(r0, c0, r1, c1)
}

/// Locally adapted James-Stein fractions, positive part.
pub fn ljs_fractions<T: Real>(
    y: &Image<T>,
    z_hat: &Image<T>,
    sigma: f64,
    block_radius: usize,
) -> Result<ShrinkField<T>> {
    if block_radius < 1 {
        return Err(Error::param("block_radius", "ljs block must hold at least 3 pixels"));
    }
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::param("sigma", format!("must be > 0, got {sigma}")));
    }
    let table = residual_integral(y, z_hat)?;
    let w = y.width();
    let data = (0..y.len())
        .map(|i| {
            let l = PixelIndex::new((i / w) as isize, (i % w) as isize);
            positive_part_fraction(table.block_area(l, block_radius), sigma, block_sq_norm(&table, l, block_radius))
        })
        .collect();
    Ok(ShrinkField::PerPixel(Image::from_raw(w, y.height(), data)))
}

/// Inputs a scheme may draw on besides the non-center field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeContext {
    pub sigma: f64,
    pub h: f64,
    pub patch_radius: usize,
}

/// Shrink fractions for `scheme` given the non-center aggregates of `y`.
pub fn shrink_field<T: Real>(
    y: &Image<T>,
    field: &NonCenterField<T>,
    scheme: &CpwScheme,
    ctx: &SchemeContext,
) -> Result<ShrinkField<T>> {
    scheme.validate(ctx.sigma)?;
    let per_pixel = |v: &dyn Fn(usize) -> CpwValue<T>| {
        let data = field
            .w_sum
            .data()
            .iter()
            .enumerate()
            .map(|(i, &w)| shrink_fraction(v(i), w))
            .collect();
        ShrinkField::PerPixel(Image::from_raw(y.width(), y.height(), data))
    };
    let w_max = field.w_max.data();
    Ok(match scheme.kind {
        CpwKind::One => per_pixel(&|_| cpw_one()),
        CpwKind::Zero => per_pixel(&|_| cpw_zero()),
        CpwKind::Stein => {
            let v = cpw_stein(ctx.sigma, (2 * ctx.patch_radius + 1).pow(2), ctx.h);
            per_pixel(&|_| v)
        }
        CpwKind::Max => per_pixel(&|i| CpwValue::Finite(w_max[i])),
        CpwKind::Heuristic { threshold } => per_pixel(&|i| cpw_heuristic(w_max[i], threshold)),
        CpwKind::JamesStein => js_fraction(y, &field.z_hat, ctx.sigma)?,
        CpwKind::LocalJamesStein { block_radius } => {
            ljs_fractions(y, &field.z_hat, ctx.sigma, block_radius.unwrap_or(ctx.patch_radius))?
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::gaussian_stream;
    use proptest::prelude::*;

    fn img(w: usize, h: usize, v: Vec<f64>) -> Image<f64> {
        Image::new(w, h, v).unwrap()
    }

    fn finite(v: CpwValue<f64>) -> f64 {
        match v {
            CpwValue::Finite(x) => x,
            CpwValue::Infinite => panic!("expected finite"),
        }
    }

    #[test]
    fn one_and_zero() {
        assert_eq!(finite(cpw_one()), 1.0);
        assert_eq!(shrink_fraction(cpw_one(), 3.0), 0.25);
        assert_eq!(shrink_fraction(cpw_one(), 0.0), 1.0);
        assert_eq!(finite(cpw_zero()), 0.0);
        assert_eq!(shrink_fraction(cpw_zero(), 3.0), 0.0);
        assert_eq!(shrink_fraction(cpw_zero(), 1e-320), 1.0);
        assert_eq!(shrink_fraction(cpw_zero(), 1e-80), 0.0);
        assert!((shrink_fraction(CpwValue::Finite(1e-80f64), 3e-80) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn stein_values() {
        let v: f64 = finite(cpw_stein(20.0, 49, 400.0 * 49.0));
        assert!((v - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(finite(cpw_stein::<f64>(0.0, 49, 10.0)), 1.0);
        assert!((finite(cpw_stein::<f64>(20.0, 49, 1e300)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn max_and_heuristic() {
        assert_eq!(finite(cpw_max(&[0.1, 0.7, 0.3]).unwrap()), 0.7);
        assert_eq!(finite(cpw_max(&[0.0, 0.0]).unwrap()), 0.0);
        assert!(cpw_max::<f64>(&[]).is_err());
        assert_eq!(cpw_heuristic(0.05, 0.5), CpwValue::Infinite);
        assert_eq!(cpw_heuristic(0.9, 0.5), CpwValue::Finite(0.9));
        assert_eq!(cpw_heuristic(0.5, 0.5), CpwValue::Infinite);
    }

    #[test]
    fn shrink_fraction_cases() {
        assert_eq!(shrink_fraction(CpwValue::Finite(1.0), 3.0), 0.25);
        assert_eq!(shrink_fraction(CpwValue::<f64>::Infinite, 100.0), 1.0);
        assert_eq!(shrink_fraction(CpwValue::Finite(0.0), 0.0), 1.0);
    }

    #[test]
    fn combine_cases() {
        let z = img(2, 1, vec![10.0, 3.0]);
        let y = img(2, 1, vec![20.0, 5.0]);
        assert_eq!(combine(&z, &y, &ShrinkField::Global(0.0), 1.0).unwrap(), z);
        assert_eq!(combine(&z, &y, &ShrinkField::Global(1.0), 1.0).unwrap(), y);
        assert_eq!(combine(&z, &y, &ShrinkField::Global(0.5), 1.0).unwrap().get(0, 0), 15.0);
        // cap at 0.5 turns p = 1 into a midpoint
        assert_eq!(combine(&z, &y, &ShrinkField::Global(1.0), 0.5).unwrap().get(0, 1), 4.0);
        let other = img(1, 2, vec![0.0, 0.0]);
        assert!(combine(&z, &other, &ShrinkField::Global(0.5), 1.0).is_err());
    }

    #[test]
    fn js_fraction_cases() {
        let z = img(2, 2, vec![0.0; 4]);
        let y = img(2, 2, vec![1.0, -1.0, 1.0, -1.0]);
        assert_eq!(js_fraction(&y, &z, 1.0).unwrap(), ShrinkField::Global(0.5));
        let y1 = img(2, 2, vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(js_fraction(&y1, &z, 1.0).unwrap(), ShrinkField::Global(0.0));
        assert_eq!(js_fraction(&y, &y, 1.0).unwrap(), ShrinkField::Global(0.0));
        let tiny = img(2, 1, vec![1.0, 2.0]);
        assert!(js_fraction(&tiny, &tiny, 1.0).is_err());
    }

    #[test]
    fn residual_table_small() {
        let z = img(2, 2, vec![0.0; 4]);
        let y = img(2, 2, vec![1.0, 2f64.sqrt(), 3f64.sqrt(), 2.0]);
        let t = residual_integral(&y, &z).unwrap();
        let expect = [[1.0, 3.0], [4.0, 10.0]];
        for r in 0..2 {
            for c in 0..2 {
                assert!((t.value(r, c) - expect[r][c]).abs() < 1e-12);
            }
        }
        let whole = block_sq_norm(&t, PixelIndex::new(0, 0), 1);
        assert!((whole - 10.0).abs() < 1e-12);
        assert_eq!(t.block_area(PixelIndex::new(0, 0), 1), 4);

        let t0 = residual_integral(&z, &z).unwrap();
        assert_eq!(t0.total(), 0.0);
        assert_eq!(block_sq_norm(&t0, PixelIndex::new(1, 1), 1), 0.0);
    }

    #[test]
    fn ljs_uniform_residual_interior_is_two_ninths() {
        let sigma = 7.0;
        let z = img(5, 5, vec![50.0; 25]);
        let y = Image::from_fn(5, 5, |r, c| if (r + c) % 2 == 0 { 57.0 } else { 43.0 }).unwrap();
        let ShrinkField::PerPixel(p) = ljs_fractions(&y, &z, sigma, 1).unwrap() else { panic!() };
        for r in 1..4 {
            for c in 1..4 {
                assert!((p.get(r, c) - 2.0 / 9.0).abs() < 1e-12);
            }
        }
        // corner block clips to 2x2: 1 - 2/4
        assert!((p.get(0, 0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn ljs_small_residual_trusts_estimate() {
        let z = img(4, 4, vec![10.0; 16]);
        let y = img(4, 4, vec![10.5; 16]);
        let ShrinkField::PerPixel(p) = ljs_fractions(&y, &z, 20.0, 1).unwrap() else { panic!() };
        assert!(p.data().iter().all(|&v| v == 0.0));
        assert!(ljs_fractions(&y, &z, 20.0, 0).is_err());
        assert!(ljs_fractions(&y, &z, 0.0, 1).is_err());
    }

    #[test]
    fn grammar_round_trip() {
        for s in ["one", "zero", "stein", "max", "heur:0.25", "js", "ljs", "ljs:2"] {
            let parsed: CpwScheme = s.parse().unwrap();
            assert_eq!(parsed.to_string(), s);
        }
        let heur: CpwScheme = "heur".parse().unwrap();
        assert_eq!(heur.kind, CpwKind::Heuristic { threshold: 0.5 });
        let err = "median".parse::<CpwScheme>().unwrap_err().to_string();
        assert!(err.contains("heur[:tau]") && err.contains("ljs[:block_radius]"), "{err}");
        assert!("heur:1.5".parse::<CpwScheme>().is_err());
        assert!("ljs:0".parse::<CpwScheme>().is_err());
        assert!("one:3".parse::<CpwScheme>().is_err());
    }

    #[test]
    fn scheme_validation() {
        assert!(CpwScheme::new(CpwKind::JamesStein).validate(0.0).is_err());
        assert!(CpwScheme::new(CpwKind::JamesStein).validate(10.0).is_ok());
        assert!(CpwScheme::new(CpwKind::One).validate(0.0).is_ok());
        assert!(CpwScheme::new(CpwKind::One).with_clamp_upper(0.0).validate(0.0).is_err());
        assert!(CpwScheme::new(CpwKind::Heuristic { threshold: -0.1 }).validate(0.0).is_err());
    }

    fn random(w: usize, h: usize, seed: u64, scale: f64) -> Image<f64> {
        img(w, h, gaussian_stream(seed, w * h).into_iter().map(|x| 100.0 + scale * x).collect())
    }

    #[test]
    fn ljs_matches_direct_block_sums() {
        let y = random(16, 16, 1, 20.0);
        let z = random(16, 16, 2, 10.0);
        let sigma = 9.0;
        for b in [1, 2, 3] {
            let ShrinkField::PerPixel(p) = ljs_fractions(&y, &z, sigma, b).unwrap() else { panic!() };
            for r in 0..16isize {
                for c in 0..16isize {
                    let (mut e, mut n) = (0.0, 0usize);
                    for rr in (r - b as isize).max(0)..=(r + b as isize).min(15) {
                        for cc in (c - b as isize).max(0)..=(c + b as isize).min(15) {
                            let d = y.get(rr as usize, cc as usize) - z.get(rr as usize, cc as usize);
                            e += d * d;
                            n += 1;
                        }
                    }
                    let expect = (1.0 - (n as f64 - 2.0) * sigma * sigma / e).clamp(0.0, 1.0);
                    assert!((p.get(r as usize, c as usize) - expect).abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn ljs_with_whole_image_block_equals_js() {
        let y = random(9, 7, 3, 25.0);
        let z = random(9, 7, 4, 5.0);
        for sigma in [5.0, 20.0, 40.0] {
            let ShrinkField::Global(g) = js_fraction(&y, &z, sigma).unwrap() else { panic!() };
            let ShrinkField::PerPixel(p) = ljs_fractions(&y, &z, sigma, 9).unwrap() else { panic!() };
            assert!(p.data().iter().all(|&v| (v - g).abs() <= 1e-12));
        }
    }

    proptest! {
        #[test]
        fn shrink_fraction_monotone(v1 in 1e-6f64..10.0, dv in 1e-3f64..10.0, w in 1e-6f64..500.0, dw in 1e-3f64..50.0) {
            let f = |v, w| shrink_fraction(CpwValue::Finite(v), w);
            prop_assert!(f(v1 + dv, w) > f(v1, w));
            prop_assert!(f(v1, w + dw) < f(v1, w));
        }

        #[test]
        fn fractions_stay_in_unit_interval(
            w in 3usize..10, h in 3usize..10, seed in any::<u64>(),
            sigma in 0.1f64..60.0, scale in 0.0f64..80.0, b in 1usize..4,
        ) {
            let y = random(w, h, seed, 40.0);
            let z = random(w, h, seed ^ 1, scale);
            let ShrinkField::Global(g) = js_fraction(&y, &z, sigma).unwrap() else { unreachable!() };
            prop_assert!((0.0..=1.0).contains(&g));
            let ShrinkField::PerPixel(p) = ljs_fractions(&y, &z, sigma, b).unwrap() else { unreachable!() };
            prop_assert!(p.data().iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }
}
