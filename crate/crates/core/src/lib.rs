//! Non-local means denoising with shrinkage-based center pixel weights.
//!
//! The denoised pixel is written as a shrinkage estimate
//! `x_l = (1 - p_l) z_l + p_l y_l`, where `z_l` is the NLM average over the
//! non-center neighbors and `p_l` is the share of the noisy center pixel.
//! Classic center weights (one, zero, Stein, max, heuristic) map onto `p_l`
//! through the non-center weight mass; the James-Stein schemes choose `p_l`
//! from the residual energy `||y - z||^2`, either over the whole image or
//! over a local block around each pixel.
//!
//! All numerics are generic over [`Real`] (`f32`/`f64`); the `*64` aliases
//! below are what the CLI and the benchmark harness use.

pub mod bench;
pub mod cpw;
mod error;
pub mod image;
pub mod integral;
pub mod metrics;
pub mod nlm;
pub mod noise;
pub mod pgm;
mod scalar;
pub mod verify;

pub use cpw::{CpwKind, CpwScheme, CpwValue, ShrinkField};
pub use error::{Error, Result};
pub use image::{reflect_index, Image, PixelIndex};
pub use metrics::{psnr, Psnr};
pub use nlm::{nlm_denoise, nlm_denoise_fast, KernelSpec, NlmParams, NonCenterField};
pub use noise::{add_gaussian_noise, NoiseSpec};
pub use pgm::{load_pgm, save_pgm};
pub use scalar::Real;

pub type Image64 = Image<f64>;
pub type Image32 = Image<f32>;
pub type NonCenterField64 = NonCenterField<f64>;
pub type ShrinkField64 = ShrinkField<f64>;
