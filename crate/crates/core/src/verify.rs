//! Built-in oracle suite: fast vs reference NLM, integral image vs direct
//! sums, and the center/non-center decomposition vs the direct weighted sum.

use std::fmt;

use crate::cpw::{self, CpwKind, CpwScheme, CpwValue};
use crate::error::Result;
use crate::image::Image;
use crate::nlm::{self, NlmParams};
use crate::noise::{derive_seed, gaussian_stream};

pub const FAST_TOLERANCE: f64 = 1e-9;
pub const INTEGRAL_TOLERANCE: f64 = 1e-12;
pub const IDENTITY_TOLERANCE: f64 = 1e-12;

/// Signature shared by both denoiser implementations.
pub type DenoiseFn<'a> = dyn Fn(&Image<f64>, &NlmParams, &CpwScheme, f64) -> Result<Image<f64>> + Sync + 'a;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub max_error: f64,
    pub tolerance: f64,
    pub cases: usize,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.max_error <= self.tolerance
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} (max error {:.3e}, tolerance {:.0e}, {} cases)",
            self.name,
            if self.passed() { "PASS" } else { "FAIL" },
            self.max_error,
            self.tolerance,
            self.cases
        )
    }
}

/// Flat gray plus white Gaussian noise of standard deviation `sigma`.
pub fn random_image(width: usize, height: usize, seed: u64, sigma: f64) -> Image<f64> {
    let v = gaussian_stream(seed, width * height);
    Image::new(width, height, v.into_iter().map(|x| 128.0 + sigma * x).collect()).expect("finite samples")
}

fn max_abs_diff(a: &Image<f64>, b: &Image<f64>) -> f64 {
    a.data().iter().zip(b.data()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Fast path against the reference on `images` random 32x32 inputs, every
/// scheme, noise levels 10/20/40.
pub fn check_fast_vs_reference(seed: u64, images: usize, fast: &DenoiseFn<'_>) -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for i in 0..images {
        for sigma in [10.0, 20.0, 40.0] {
            let y = random_image(32, 32, derive_seed(seed, &[1, i as u64, sigma as u64]), sigma);
            let params = NlmParams::new(5, 2, sigma * sigma * 25.0);
            for scheme in CpwScheme::all() {
                let reference = nlm::nlm_denoise(&y, &params, &scheme, sigma)?;
                let candidate = fast(&y, &params, &scheme, sigma)?;
                worst = worst.max(max_abs_diff(&reference, &candidate));
                cases += 1;
            }
        }
    }
    Ok(CheckOutcome { name: "fast-vs-reference", max_error: worst, tolerance: FAST_TOLERANCE, cases })
}

/// Residual prefix table and every block norm against double-loop sums
/// (relative error).
pub fn check_integral_vs_direct(seed: u64) -> Result<CheckOutcome> {
    let (w, h) = (64usize, 64usize);
    let y = random_image(w, h, derive_seed(seed, &[2, 0]), 40.0);
    let z = random_image(w, h, derive_seed(seed, &[2, 1]), 40.0);
    let sq: Vec<f64> = y.data().iter().zip(z.data()).map(|(a, b)| (a - b) * (a - b)).collect();
    let table = cpw::residual_integral(&y, &z)?;
    let rel = |got: f64, want: f64| (got - want).abs() / want.abs().max(f64::MIN_POSITIVE);

    let mut worst = 0.0f64;
    let mut cases = 0;
    for r in 0..h {
        let mut row_acc = vec![0.0; w];
        for c in 0..w {
            let mut s = 0.0;
            for rr in 0..=r {
                for cc in 0..=c {
                    s += sq[rr * w + cc];
                }
            }
            row_acc[c] = s;
            worst = worst.max(rel(table.value(r, c), s));
            cases += 1;
        }
    }
    for b in [1usize, 2, 3] {
        for r in 0..h as isize {
            for c in 0..w as isize {
                let b = b as isize;
                let mut s = 0.0;
                for rr in (r - b).max(0)..=(r + b).min(h as isize - 1) {
                    for cc in (c - b).max(0)..=(c + b).min(w as isize - 1) {
                        s += sq[rr as usize * w + cc as usize];
                    }
                }
                let got = cpw::block_sq_norm(&table, crate::image::PixelIndex::new(r, c), b as usize);
                worst = worst.max(rel(got, s));
                cases += 1;
            }
        }
    }
    Ok(CheckOutcome { name: "integral-vs-direct", max_error: worst, tolerance: INTEGRAL_TOLERANCE, cases })
}

/// Direct center-included weighted average with an explicit center weight.
fn direct_weighted_average(y: &Image<f64>, params: &NlmParams, scheme: &CpwScheme, sigma: f64) -> Image<f64> {
    let r = params.search_radius as isize;
    let p = params.patch_radius as isize;
    let dist = |l: (isize, isize), k: (isize, isize)| {
        let mut d = 0.0;
        for a in -p..=p {
            for b in -p..=p {
                let t = y.get_reflected(l.0 + a, l.1 + b) - y.get_reflected(k.0 + a, k.1 + b);
                d += t * t;
            }
        }
        d
    };
    Image::from_fn(y.width(), y.height(), |row, col| {
        let l = (row as isize, col as isize);
        let mut num = 0.0;
        let mut den = 0.0;
        let mut best = 0.0f64;
        for dy in -r..=r {
            for dx in -r..=r {
                if (dy, dx) == (0, 0) {
                    continue;
                }
                let k = (l.0 + dy, l.1 + dx);
                let w = (-dist(l, k) / params.h).exp();
                best = best.max(w);
                num += w * y.get_reflected(k.0, k.1);
                den += w;
            }
        }
        let v = match scheme.kind {
            CpwKind::One => CpwValue::Finite(1.0),
            CpwKind::Zero => CpwValue::Finite(0.0),
            CpwKind::Stein => CpwValue::Finite((-sigma * sigma * params.patch_size() as f64 / params.h).exp()),
            CpwKind::Max => CpwValue::Finite(best),
            CpwKind::Heuristic { threshold } if best <= threshold => CpwValue::Infinite,
            CpwKind::Heuristic { .. } => CpwValue::Finite(best),
            _ => unreachable!("only baseline schemes carry an explicit center weight"),
        };
        match v {
            CpwValue::Finite(v) => (num + v * y.get(row, col)) / (den + v),
            CpwValue::Infinite => y.get(row, col),
        }
    })
    .expect("finite output")
}

/// Decomposed pipeline against the direct weighted sum for the baseline schemes.
pub fn check_shrinkage_identity(seed: u64, images: usize) -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for i in 0..images {
        for sigma in [10.0, 20.0, 40.0] {
            let y = random_image(8, 8, derive_seed(seed, &[3, i as u64, sigma as u64]), sigma);
            let params = NlmParams::new(2, 1, sigma * sigma * 9.0);
            for scheme in CpwScheme::all().into_iter().filter(|s| !s.needs_sigma() || s.kind == CpwKind::Stein) {
                let direct = direct_weighted_average(&y, &params, &scheme, sigma);
                let pipeline = nlm::nlm_denoise(&y, &params, &scheme, sigma)?;
                for (a, b) in direct.data().iter().zip(pipeline.data()) {
                    worst = worst.max((a - b).abs() / a.abs().max(f64::MIN_POSITIVE));
                }
                cases += 1;
            }
        }
    }
    Ok(CheckOutcome { name: "shrinkage-identity", max_error: worst, tolerance: IDENTITY_TOLERANCE, cases })
}

/// Run all checks with the given fast-path implementation.
pub fn run_verification_with(seed: u64, fast: &DenoiseFn<'_>) -> Result<Vec<CheckOutcome>> {
    Ok(vec![
        check_fast_vs_reference(seed, 3, fast)?,
        check_integral_vs_direct(seed)?,
        check_shrinkage_identity(seed, 4)?,
    ])
}

pub fn run_verification(seed: u64) -> Result<Vec<CheckOutcome>> {
    run_verification_with(seed, &nlm::nlm_denoise_fast)
}
