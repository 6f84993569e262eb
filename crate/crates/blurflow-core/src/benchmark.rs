//! Synthetic ground-truth blur benchmark and AEE/AAE evaluation.
//!
//! Latent sequences are generated from an analytic texture (soft-edged disks
//! over broad bumps) so frames can be sampled at arbitrary sub-pixel
//! translations with no interpolation error; the ground-truth flow of the
//! middle pair is known exactly. Blur is synthesized per frame with known
//! streak kernels, and multiple-correspondence pixels are filtered out of
//! the ground truth before scoring.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::convolve::convolve_frequency;
use crate::error::{Error, Result};
use crate::flow::FlowField;
use crate::image::Image;
use crate::kernel::BlurKernel;
use crate::warp::warp_bilinear;

/// An analytic test scene: evaluable at any real coordinate, so translated
/// frames are exact.
#[derive(Debug, Clone)]
pub struct Scene {
    disks: Vec<(f64, f64, f64, f64)>, // (cx, cy, radius, amplitude)
    bumps: Vec<(f64, f64, f64, f64)>, // (cx, cy, sigma, amplitude)
    edge_softness: f64,
}

impl Scene {
    /// Randomized scene with sharp-ish disks (broadband spectrum, the food
    /// of kernel estimation) over smooth bumps (large-scale structure that
    /// anchors the flow solver).
    pub fn generate(width: usize, height: usize, seed: u64) -> Scene {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (w, h) = (width as f64, height as f64);
        let n_disks = ((width * height) as f64 / 450.0).ceil() as usize;
        let disks = (0..n_disks.max(12))
            .map(|_| {
                (
                    rng.random_range(0.0..w),
                    rng.random_range(0.0..h),
                    rng.random_range(2.0..6.5),
                    rng.random_range(0.12..0.38) * if rng.random_bool(0.5) { 1.0 } else { -1.0 },
                )
            })
            .collect();
        let bumps = (0..10)
            .map(|_| {
                (
                    rng.random_range(0.0..w),
                    rng.random_range(0.0..h),
                    rng.random_range(8.0..22.0),
                    rng.random_range(0.05..0.16) * if rng.random_bool(0.5) { 1.0 } else { -1.0 },
                )
            })
            .collect();
        Scene {
            disks,
            bumps,
            edge_softness: 0.8,
        }
    }

    /// Scene value at a real-valued position.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let mut v = 0.5;
        for &(cx, cy, r, a) in &self.disks {
            let d = ((x - cx).powi(2) + (y - cy).powi(2)).sqrt();
            v += a / (1.0 + ((d - r) / self.edge_softness).exp());
        }
        for &(cx, cy, s, a) in &self.bumps {
            let d2 = (x - cx).powi(2) + (y - cy).powi(2);
            v += a * (-d2 / (2.0 * s * s)).exp();
        }
        v.clamp(0.02, 0.98)
    }

    /// Renders the scene translated by `offset` (frame content moves by
    /// +offset, i.e. the flow from the untranslated frame is +offset).
    pub fn render(&self, width: usize, height: usize, offset: (f64, f64)) -> Image {
        Image::from_fn(width, height, |x, y| {
            self.eval(x as f64 - offset.0, y as f64 - offset.1)
        })
    }
}

/// A synthetic benchmark case: four latent frames under constant translation,
/// per-frame blur kernels, and the exact flow of the middle pair.
#[derive(Debug, Clone)]
pub struct BenchCase {
    pub name: String,
    pub latents: Vec<Image>,
    pub kernels: Vec<BlurKernel>,
    pub gt_flow: FlowField,
    /// Per-frame blur directions (axial radians).
    pub motion_dirs: Vec<f64>,
    /// Intensity threshold for ground-truth filtering.
    pub epsilon_gt: f64,
}

/// Settings for [`make_translation_case`].
#[derive(Debug, Clone)]
pub struct CaseSpec {
    pub name: String,
    pub width: usize,
    pub height: usize,
    pub seed: u64,
    /// Per-frame translation step (the GT flow of the middle pair).
    pub translation: (f64, f64),
    /// Blur streak direction per frame, radians.
    pub blur_theta: f64,
    /// Blur streak length in pixels.
    pub blur_length: f64,
    /// Kernel grid size.
    pub kernel_size: usize,
}

/// Builds a four-frame translation case with identical streak blur per frame.
pub fn make_translation_case(spec: &CaseSpec) -> BenchCase {
    let scene = Scene::generate(spec.width, spec.height, spec.seed);
    let latents: Vec<Image> = (0..4)
        .map(|t| {
            let off = (
                spec.translation.0 * t as f64,
                spec.translation.1 * t as f64,
            );
            scene.render(spec.width, spec.height, off)
        })
        .collect();
    let kernels: Vec<BlurKernel> = (0..4)
        .map(|_| BlurKernel::streak(spec.kernel_size, spec.blur_length, spec.blur_theta))
        .collect();
    let gt_flow = FlowField::constant(spec.width, spec.height, spec.translation.0, spec.translation.1);
    BenchCase {
        name: spec.name.clone(),
        latents,
        kernels,
        gt_flow,
        motion_dirs: vec![crate::motion::fold_axial(spec.blur_theta); 4],
        epsilon_gt: 0.04,
    }
}

/// Applies each frame's kernel to its latent (frequency-domain path).
pub fn synthesize_blur_case(latents: &[Image], kernels: &[BlurKernel]) -> Result<Vec<Image>> {
    if latents.len() != kernels.len() {
        return Err(Error::DimensionMismatch(
            "one kernel per latent frame required".into(),
        ));
    }
    latents
        .iter()
        .zip(kernels)
        .map(|(l, k)| convolve_frequency(l, k))
        .collect()
}

/// Ground-truth support mask: pixels whose blurred intensities still match
/// through the ground-truth flow (within eps) and stay in bounds. Blur can
/// map one point onto several; those ambiguous correspondences are dropped.
pub fn filter_ground_truth(
    blurred1: &Image,
    blurred2: &Image,
    gt_flow: &FlowField,
    eps: f64,
) -> Result<Vec<bool>> {
    let l1 = blurred1.to_luminance();
    let l2 = blurred2.to_luminance();
    if !l1.same_shape(&l2) {
        return Err(Error::DimensionMismatch("frame sizes differ".into()));
    }
    let (warped, in_bounds) = warp_bilinear(&l2, gt_flow)?;
    Ok(warped
        .data()
        .iter()
        .zip(l1.data())
        .zip(&in_bounds)
        .map(|((w2, i1), &ok)| ok && (w2 - i1).abs() < eps)
        .collect())
}

/// Average endpoint error in pixels over masked pixels.
pub fn compute_aee(flow: &FlowField, gt: &FlowField, mask: &[bool]) -> Result<f64> {
    check_metric_inputs(flow, gt, mask)?;
    let mut acc = 0.0;
    let mut n = 0usize;
    for i in 0..flow.len() {
        if mask[i] {
            let du = flow.u()[i] - gt.u()[i];
            let dv = flow.v()[i] - gt.v()[i];
            acc += (du * du + dv * dv).sqrt();
            n += 1;
        }
    }
    if n == 0 {
        return Err(Error::EmptyMask);
    }
    Ok(acc / n as f64)
}

/// Average angular error in degrees over masked pixels, using the
/// homogeneous (u, v, 1) vectors.
pub fn compute_aae(flow: &FlowField, gt: &FlowField, mask: &[bool]) -> Result<f64> {
    check_metric_inputs(flow, gt, mask)?;
    let mut acc = 0.0;
    let mut n = 0usize;
    for i in 0..flow.len() {
        if mask[i] {
            let (u, v) = (flow.u()[i], flow.v()[i]);
            let (gu, gv) = (gt.u()[i], gt.v()[i]);
            let num = 1.0 + u * gu + v * gv;
            let den = ((1.0 + u * u + v * v) * (1.0 + gu * gu + gv * gv)).sqrt();
            acc += (num / den).clamp(-1.0, 1.0).acos();
            n += 1;
        }
    }
    if n == 0 {
        return Err(Error::EmptyMask);
    }
    Ok(acc / n as f64 * 180.0 / std::f64::consts::PI)
}

fn check_metric_inputs(flow: &FlowField, gt: &FlowField, mask: &[bool]) -> Result<()> {
    if flow.width() != gt.width() || flow.height() != gt.height() || mask.len() != flow.len() {
        return Err(Error::DimensionMismatch(
            "flow, ground truth and mask must share dimensions".into(),
        ));
    }
    Ok(())
}

/// Salt-and-pepper corruption: round(density * n) pixels chosen without
/// replacement (seeded) are set to 0 or 1 with equal probability. For color
/// images the whole pixel is set.
pub fn add_salt_pepper(img: &Image, density: f64, seed: u64) -> Image {
    assert!((0.0..=1.0).contains(&density), "density must be in [0,1]");
    let n = img.width() * img.height();
    let count = (density * n as f64).round() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Partial Fisher-Yates over pixel indices.
    let mut indices: Vec<usize> = (0..n).collect();
    for i in 0..count.min(n) {
        let j = rng.random_range(i..n);
        indices.swap(i, j);
    }

    let channels = img.channels();
    let mut data = img.data().to_vec();
    for &px in indices.iter().take(count) {
        let value = if rng.random_bool(0.5) { 1.0 } else { 0.0 };
        for c in 0..channels {
            data[px * channels + c] = value;
        }
    }
    Image::new(img.width(), img.height(), channels, data).expect("same shape")
}
