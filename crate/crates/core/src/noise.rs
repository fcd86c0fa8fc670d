//! Seeded additive white Gaussian noise.
//!
//! The generator is SplitMix64 (Steele, Lea & Flood): a 64-bit Weyl
//! sequence `x += 0x9e3779b97f4a7c15` followed by a bijective mixing
//! function, period exactly 2^64. The seed becomes the initial state
//! verbatim. Each pair of 64-bit outputs `(a, b)` is turned into uniforms
//! `u1 = ((a >> 11) + 1) / 2^53` in `(0, 1]` and `u2 = (b >> 11) / 2^53` in
//! `[0, 1)`, then into two standard normals by Box-Muller:
//! `sqrt(-2 ln u1) * cos(2 pi u2)` followed by `sqrt(-2 ln u1) * sin(2 pi u2)`.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::image::Image;
use crate::scalar::Real;

const INV_2_53: f64 = 1.0 / (1u64 << 53) as f64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    sigma: f64,
    seed: u64,
}

impl NoiseSpec {
    pub fn new(sigma: f64, seed: u64) -> Result<Self> {
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(Error::param("sigma", format!("must be finite and >= 0, got {sigma}")));
        }
        Ok(Self { sigma, seed })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Infinite stream of standard normal variates for a given seed.
#[derive(Debug, Clone)]
pub struct GaussianStream {
    rng: SplitMix64,
    spare: Option<f64>,
}

impl GaussianStream {
    pub fn new(seed: u64) -> Self {
        Self { rng: SplitMix64::seed_from_u64(seed), spare: None }
    }
}

impl Iterator for GaussianStream {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        if let Some(v) = self.spare.take() {
            return Some(v);
        }
        let u1 = ((self.rng.next_u64() >> 11) + 1) as f64 * INV_2_53;
        let u2 = (self.rng.next_u64() >> 11) as f64 * INV_2_53;
        let radius = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
        self.spare = Some(radius * s);
        Some(radius * c)
    }
}

/// First `count` standard normal variates of the stream seeded with `seed`.
pub fn gaussian_stream(seed: u64, count: usize) -> Vec<f64> {
    GaussianStream::new(seed).take(count).collect()
}

/// Derive an independent seed from `base` and a path of task indices.
///
/// Each step XORs the index into the running seed and passes it through one
/// SplitMix64 output, so distinct paths give unrelated streams.
pub fn derive_seed(base: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(base, |acc, &k| SplitMix64::seed_from_u64(acc ^ k).next_u64())
}

/// `y = x + n`, `n ~ N(0, sigma^2)` i.i.d.; no clamping.
pub fn add_gaussian_noise<T: Real>(clean: &Image<T>, spec: NoiseSpec) -> Image<T> {
    if spec.sigma == 0.0 {
        return clean.clone();
    }
    let data = clean
        .data()
        .iter()
        .zip(GaussianStream::new(spec.seed))
        .map(|(&x, n)| T::lit(x.as_f64() + spec.sigma * n))
        .collect();
    Image::from_raw(clean.width(), clean.height(), data)
}
