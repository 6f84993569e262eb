//! Dense displacement fields.

use crate::error::{Error, Result};
use crate::image::Image;

/// Per-pixel 2-vector displacement field w = (u, v), in pixels.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowField {
    width: usize,
    height: usize,
    u: Vec<f64>,
    v: Vec<f64>,
}

impl FlowField {
    pub fn zeros(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            u: vec![0.0; width * height],
            v: vec![0.0; width * height],
        }
    }

    pub fn from_components(width: usize, height: usize, u: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if u.len() != width * height || v.len() != width * height {
            return Err(Error::DimensionMismatch(format!(
                "flow components must be {width}x{height}"
            )));
        }
        if !u.iter().chain(v.iter()).all(|x| x.is_finite()) {
            return Err(Error::NonFinite("flow field".into()));
        }
        Ok(Self {
            width,
            height,
            u,
            v,
        })
    }

    /// Constant displacement everywhere.
    pub fn constant(width: usize, height: usize, du: f64, dv: f64) -> Self {
        Self {
            width,
            height,
            u: vec![du; width * height],
            v: vec![dv; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn u_mut(&mut self) -> &mut [f64] {
        &mut self.u
    }

    pub fn v_mut(&mut self) -> &mut [f64] {
        &mut self.v
    }

    #[inline]
    pub fn at(&self, x: usize, y: usize) -> (f64, f64) {
        let i = y * self.width + x;
        (self.u[i], self.v[i])
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, du: f64, dv: f64) {
        let i = y * self.width + x;
        self.u[i] = du;
        self.v[i] = dv;
    }

    /// Adds another field of the same shape (w <- w + dw).
    pub fn add_assign(&mut self, other: &FlowField) {
        assert!(
            self.width == other.width && self.height == other.height,
            "flow shape mismatch"
        );
        for (a, b) in self.u.iter_mut().zip(&other.u) {
            *a += b;
        }
        for (a, b) in self.v.iter_mut().zip(&other.v) {
            *a += b;
        }
    }

    pub fn is_finite(&self) -> bool {
        self.u.iter().chain(self.v.iter()).all(|x| x.is_finite())
    }

    /// Resizes the field to new dimensions, rescaling displacement values by
    /// the per-axis size ratio so they stay in units of destination pixels.
    pub fn resampled(&self, new_w: usize, new_h: usize) -> FlowField {
        let su = new_w as f64 / self.width as f64;
        let sv = new_h as f64 / self.height as f64;
        let ui = Image::new(self.width, self.height, 1, self.u.clone()).expect("u plane");
        let vi = Image::new(self.width, self.height, 1, self.v.clone()).expect("v plane");
        let ur = crate::resample::resample(&ui, new_w, new_h);
        let vr = crate::resample::resample(&vi, new_w, new_h);
        FlowField {
            width: new_w,
            height: new_h,
            u: ur.into_data().iter().map(|x| x * su).collect(),
            v: vr.into_data().iter().map(|x| x * sv).collect(),
        }
    }

    /// Largest displacement magnitude in the field.
    pub fn max_magnitude(&self) -> f64 {
        self.u
            .iter()
            .zip(&self.v)
            .map(|(u, v)| (u * u + v * v).sqrt())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resample_scales_values() {
        // Constant (2, 1) flow on a 10x10 grid doubled to 20x20 becomes (4, 2).
        let f = FlowField::constant(10, 10, 2.0, 1.0);
        let r = f.resampled(20, 20);
        assert!(r.u().iter().all(|&u| (u - 4.0).abs() < 1e-9));
        assert!(r.v().iter().all(|&v| (v - 2.0).abs() < 1e-9));
    }

    #[test]
    fn rejects_non_finite() {
        assert!(FlowField::from_components(1, 1, vec![f64::INFINITY], vec![0.0]).is_err());
    }
}
