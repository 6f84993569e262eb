//! Dense raster type shared by every stage of the pipeline.
//!
//! Samples are `f64` in a nominal `[0, 1]` range, stored row-major with
//! interleaved channels. All numeric operators in this crate work on
//! single-channel images; color inputs are collapsed to luminance first.

use crate::error::{Error, Result};

/// A single- or three-channel floating-point raster.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<f64>,
}

impl Image {
    /// Builds an image from row-major interleaved samples.
    pub fn new(width: usize, height: usize, channels: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be >= 1, got {width}x{height}"
            )));
        }
        if channels != 1 && channels != 3 {
            return Err(Error::InvalidImage(format!(
                "channels must be 1 or 3, got {channels}"
            )));
        }
        if data.len() != width * height * channels {
            return Err(Error::InvalidImage(format!(
                "data length {} does not match {width}x{height}x{channels}",
                data.len()
            )));
        }
        if !data.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidImage("non-finite sample".into()));
        }
        Ok(Self {
            width,
            height,
            channels,
            data,
        })
    }

    /// Single-channel image filled with a constant.
    pub fn constant(width: usize, height: usize, value: f64) -> Self {
        Self::new(width, height, 1, vec![value; width * height]).expect("valid constant image")
    }

    /// Single-channel image computed from a pixel-coordinate closure.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, 1, data).expect("valid generated image")
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    /// Sample accessor for single-channel images.
    #[inline]
    pub fn at(&self, x: usize, y: usize) -> f64 {
        debug_assert_eq!(self.channels, 1);
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: f64) {
        debug_assert_eq!(self.channels, 1);
        self.data[y * self.width + x] = value;
    }

    #[inline]
    pub fn at_channel(&self, x: usize, y: usize, c: usize) -> f64 {
        self.data[(y * self.width + x) * self.channels + c]
    }

    /// Clamped accessor: coordinates outside the raster replicate the edge.
    #[inline]
    pub fn at_clamped(&self, x: isize, y: isize) -> f64 {
        debug_assert_eq!(self.channels, 1);
        let xc = x.clamp(0, self.width as isize - 1) as usize;
        let yc = y.clamp(0, self.height as isize - 1) as usize;
        self.data[yc * self.width + xc]
    }

    /// Bilinear sample at a fractional position, edge-clamped.
    pub fn sample_bilinear(&self, x: f64, y: f64) -> f64 {
        debug_assert_eq!(self.channels, 1);
        let xc = x.clamp(0.0, (self.width - 1) as f64);
        let yc = y.clamp(0.0, (self.height - 1) as f64);
        let x0 = xc.floor() as usize;
        let y0 = yc.floor() as usize;
        let x1 = (x0 + 1).min(self.width - 1);
        let y1 = (y0 + 1).min(self.height - 1);
        let fx = xc - x0 as f64;
        let fy = yc - y0 as f64;
        let top = self.at(x0, y0) * (1.0 - fx) + self.at(x1, y0) * fx;
        let bot = self.at(x0, y1) * (1.0 - fx) + self.at(x1, y1) * fx;
        top * (1.0 - fy) + bot * fy
    }

    /// Collapses RGB to luminance (0.299 R + 0.587 G + 0.114 B).
    /// Single-channel images pass through unchanged.
    pub fn to_luminance(&self) -> Image {
        if self.channels == 1 {
            return self.clone();
        }
        let mut data = Vec::with_capacity(self.width * self.height);
        for px in self.data.chunks_exact(3) {
            data.push(0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2]);
        }
        Image {
            width: self.width,
            height: self.height,
            channels: 1,
            data,
        }
    }

    /// Splits a color image into channel planes.
    pub fn channel_planes(&self) -> Vec<Image> {
        (0..self.channels)
            .map(|c| {
                let data = self
                    .data
                    .chunks_exact(self.channels)
                    .map(|px| px[c])
                    .collect();
                Image {
                    width: self.width,
                    height: self.height,
                    channels: 1,
                    data,
                }
            })
            .collect()
    }

    /// Reassembles channel planes into an interleaved image.
    pub fn from_planes(planes: &[Image]) -> Result<Image> {
        let channels = planes.len();
        if channels != 1 && channels != 3 {
            return Err(Error::InvalidImage(format!(
                "expected 1 or 3 planes, got {channels}"
            )));
        }
        let (w, h) = (planes[0].width, planes[0].height);
        if planes.iter().any(|p| p.width != w || p.height != h) {
            return Err(Error::DimensionMismatch("channel planes differ in size".into()));
        }
        let mut data = Vec::with_capacity(w * h * channels);
        for i in 0..w * h {
            for p in planes {
                data.push(p.data[i]);
            }
        }
        Image::new(w, h, channels, data)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Image {
        Image {
            width: self.width,
            height: self.height,
            channels: self.channels,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Per-sample clamp into [lo, hi].
    pub fn clamped(&self, lo: f64, hi: f64) -> Image {
        self.map(|v| v.clamp(lo, hi))
    }

    pub fn same_shape(&self, other: &Image) -> bool {
        self.width == other.width && self.height == other.height && self.channels == other.channels
    }

    /// Maximum absolute per-sample difference; images must match in shape.
    pub fn max_abs_diff(&self, other: &Image) -> f64 {
        assert!(self.same_shape(other), "shape mismatch in max_abs_diff");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn mean(&self) -> f64 {
        crate::util::pairwise_sum(&self.data) / self.data.len() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_dimensions() {
        assert!(Image::new(0, 4, 1, vec![]).is_err());
        assert!(Image::new(2, 2, 2, vec![0.0; 8]).is_err());
        assert!(Image::new(2, 2, 1, vec![0.0; 3]).is_err());
        assert!(Image::new(2, 1, 1, vec![f64::NAN, 0.0]).is_err());
    }

    #[test]
    fn luminance_weights() {
        let img = Image::new(1, 1, 3, vec![1.0, 0.5, 0.25]).unwrap();
        let lum = img.to_luminance();
        assert!((lum.at(0, 0) - (0.299 + 0.587 * 0.5 + 0.114 * 0.25)).abs() < 1e-12);
    }

    #[test]
    fn bilinear_midpoint() {
        // 1D pattern [0, 1]: half a pixel right of the left sample reads 0.5.
        let img = Image::new(2, 1, 1, vec![0.0, 1.0]).unwrap();
        assert!((img.sample_bilinear(0.5, 0.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn planes_round_trip() {
        let img = Image::new(2, 1, 3, vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6]).unwrap();
        let planes = img.channel_planes();
        let back = Image::from_planes(&planes).unwrap();
        assert_eq!(img, back);
    }
}
