//! Blur kernels (point-spread functions).
//!
//! A kernel is a small odd-sided grid of non-negative weights summing to one,
//! so convolving with it preserves mean intensity.

use crate::error::{Error, Result};
use crate::util::pairwise_sum;

pub const KERNEL_SUM_TOL: f64 = 1e-6;

/// Non-negative, unit-sum point-spread function on an odd-sided square grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BlurKernel {
    size: usize,
    weights: Vec<f64>,
}

impl BlurKernel {
    /// Validates invariants: odd size, non-negative weights, unit sum.
    pub fn new(size: usize, weights: Vec<f64>) -> Result<Self> {
        if size == 0 || size % 2 == 0 {
            return Err(Error::InvalidKernel(format!("size must be odd, got {size}")));
        }
        if weights.len() != size * size {
            return Err(Error::InvalidKernel(format!(
                "expected {} weights for size {size}, got {}",
                size * size,
                weights.len()
            )));
        }
        if !weights.iter().all(|w| w.is_finite()) {
            return Err(Error::InvalidKernel("non-finite weight".into()));
        }
        if weights.iter().any(|&w| w < 0.0) {
            return Err(Error::InvalidKernel("negative weight".into()));
        }
        let sum = pairwise_sum(&weights);
        if (sum - 1.0).abs() > KERNEL_SUM_TOL {
            return Err(Error::InvalidKernel(format!("weights sum to {sum}, not 1")));
        }
        Ok(Self { size, weights })
    }

    /// Identity kernel: a single unit weight at the center.
    pub fn delta(size: usize) -> Self {
        assert!(size % 2 == 1, "delta kernel size must be odd");
        let mut weights = vec![0.0; size * size];
        weights[(size / 2) * size + size / 2] = 1.0;
        Self { size, weights }
    }

    /// Uniform box kernel.
    pub fn uniform(size: usize) -> Self {
        assert!(size % 2 == 1);
        let w = 1.0 / (size * size) as f64;
        Self {
            size,
            weights: vec![w; size * size],
        }
    }

    /// Isotropic Gaussian kernel.
    pub fn gaussian(size: usize, sigma: f64) -> Self {
        assert!(size % 2 == 1 && sigma > 0.0);
        let c = (size / 2) as f64;
        let mut weights = vec![0.0; size * size];
        for r in 0..size {
            for col in 0..size {
                let dy = r as f64 - c;
                let dx = col as f64 - c;
                weights[r * size + col] = (-(dx * dx + dy * dy) / (2.0 * sigma * sigma)).exp();
            }
        }
        Self::normalized_from_raw(size, weights)
    }

    /// Anti-aliased linear streak through the center along direction `theta`
    /// (radians), of the given length in pixels. Models near-linear camera
    /// shake blur.
    pub fn streak(size: usize, length: f64, theta: f64) -> Self {
        assert!(size % 2 == 1);
        assert!(length >= 0.0);
        let c = (size / 2) as f64;
        let mut weights = vec![0.0; size * size];
        let (dx, dy) = (theta.cos(), theta.sin());
        // Splat samples bilinearly along the segment [-length/2, length/2].
        let steps = (length.ceil() as usize * 8).max(1);
        for i in 0..=steps {
            let t = (i as f64 / steps as f64 - 0.5) * length;
            let x = c + t * dx;
            let y = c + t * dy;
            let x0 = x.floor();
            let y0 = y.floor();
            let fx = x - x0;
            let fy = y - y0;
            for (ox, oy, w) in [
                (0.0, 0.0, (1.0 - fx) * (1.0 - fy)),
                (1.0, 0.0, fx * (1.0 - fy)),
                (0.0, 1.0, (1.0 - fx) * fy),
                (1.0, 1.0, fx * fy),
            ] {
                let xi = x0 + ox;
                let yi = y0 + oy;
                if xi >= 0.0 && yi >= 0.0 && (xi as usize) < size && (yi as usize) < size {
                    weights[yi as usize * size + xi as usize] += w;
                }
            }
        }
        Self::normalized_from_raw(size, weights)
    }

    /// Clips negatives and rescales to unit sum; a degenerate (all-zero)
    /// input collapses to the centered delta.
    pub fn normalized_from_raw(size: usize, mut weights: Vec<f64>) -> Self {
        assert!(size % 2 == 1 && weights.len() == size * size);
        for w in weights.iter_mut() {
            if !w.is_finite() || *w < 0.0 {
                *w = 0.0;
            }
        }
        let sum = pairwise_sum(&weights);
        if sum <= 1e-12 {
            return Self::delta(size);
        }
        for w in weights.iter_mut() {
            *w /= sum;
        }
        Self { size, weights }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn radius(&self) -> usize {
        self.size / 2
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    #[inline]
    pub fn at(&self, col: usize, row: usize) -> f64 {
        self.weights[row * self.size + col]
    }

    /// Resamples the kernel grid to a new odd size (bilinear) and
    /// renormalizes. Used when moving between pyramid levels.
    pub fn resized(&self, new_size: usize) -> Self {
        assert!(new_size % 2 == 1);
        if new_size == self.size {
            return self.clone();
        }
        let img = crate::image::Image::new(self.size, self.size, 1, self.weights.clone())
            .expect("kernel grid is a valid image");
        let scaled = crate::resample::resample(&img, new_size, new_size);
        Self::normalized_from_raw(new_size, scaled.into_data())
    }

    /// Normalized cross-correlation between two kernels, computed on the
    /// union grid with both kernels centered. 1.0 means identical shape.
    pub fn ncc(&self, other: &BlurKernel) -> f64 {
        let size = self.size.max(other.size);
        let a = self.centered_embed(size);
        let b = other.centered_embed(size);
        let ma = pairwise_sum(&a) / a.len() as f64;
        let mb = pairwise_sum(&b) / b.len() as f64;
        let mut num = 0.0;
        let mut da = 0.0;
        let mut db = 0.0;
        for i in 0..a.len() {
            let x = a[i] - ma;
            let y = b[i] - mb;
            num += x * y;
            da += x * x;
            db += y * y;
        }
        if da <= 0.0 || db <= 0.0 {
            return 0.0;
        }
        num / (da * db).sqrt()
    }

    /// Embeds the kernel centered in a larger odd grid.
    pub fn centered_embed(&self, size: usize) -> Vec<f64> {
        assert!(size % 2 == 1 && size >= self.size);
        let off = (size - self.size) / 2;
        let mut out = vec![0.0; size * size];
        for r in 0..self.size {
            for c in 0..self.size {
                out[(r + off) * size + (c + off)] = self.at(c, r);
            }
        }
        out
    }
}

/// `normalizeKernel`: clip negatives, rescale to unit sum, fall back to a
/// centered delta when everything cancels.
pub fn normalize_kernel(size: usize, raw: Vec<f64>) -> BlurKernel {
    BlurKernel::normalized_from_raw(size, raw)
}
