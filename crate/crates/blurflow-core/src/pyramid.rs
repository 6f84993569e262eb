//! Coarse-to-fine image pyramids.

use crate::image::Image;
use crate::resample::resample;

/// Image pyramid ordered coarsest to finest. Level dimensions follow
/// round(finest * factor^(n-1-i)) so every stage sees the same geometry.
#[derive(Debug, Clone)]
pub struct Pyramid {
    levels: Vec<Image>,
    factor: f64,
}

impl Pyramid {
    /// Number of levels for a (width, height) image under `factor`, keeping
    /// every side at least `min_side`. Always at least 1.
    pub fn level_count(width: usize, height: usize, factor: f64, min_side: usize) -> usize {
        assert!(factor > 0.0 && factor < 1.0, "factor must be in (0,1)");
        let mut n = 1usize;
        loop {
            let scale = factor.powi(n as i32);
            let w = (width as f64 * scale).round();
            let h = (height as f64 * scale).round();
            if w >= min_side as f64 && h >= min_side as f64 {
                n += 1;
            } else {
                return n;
            }
        }
    }

    /// Per-level dimensions, coarsest first.
    pub fn level_dims(width: usize, height: usize, factor: f64, min_side: usize) -> Vec<(usize, usize)> {
        let n = Self::level_count(width, height, factor, min_side);
        (0..n)
            .map(|i| {
                let scale = factor.powi((n - 1 - i) as i32);
                let w = ((width as f64 * scale).round() as usize).max(1);
                let h = ((height as f64 * scale).round() as usize).max(1);
                (w, h)
            })
            .collect()
    }

    /// Builds the pyramid by repeated downsampling, finest level first, so
    /// each coarser level is produced from its immediate finer neighbour.
    pub fn build(img: &Image, factor: f64, min_side: usize) -> Pyramid {
        let dims = Self::level_dims(img.width(), img.height(), factor, min_side);
        let mut levels: Vec<Image> = Vec::with_capacity(dims.len());
        let mut current = img.clone();
        for &(w, h) in dims.iter().rev() {
            if (w, h) != (current.width(), current.height()) {
                current = resample(&current, w, h);
            }
            levels.push(current.clone());
        }
        levels.reverse();
        Pyramid {
            levels,
            factor,
        }
    }

    pub fn levels(&self) -> &[Image] {
        &self.levels
    }

    pub fn level(&self, i: usize) -> &Image {
        &self.levels[i]
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn factor(&self) -> f64 {
        self.factor
    }

    pub fn finest(&self) -> &Image {
        self.levels.last().expect("pyramid has at least one level")
    }

    pub fn coarsest(&self) -> &Image {
        self.levels.first().expect("pyramid has at least one level")
    }
}
