//! Camera-motion channel: projecting tracked pose deltas into image-space
//! motion vectors and combining neighbouring intervals.
//!
//! Blur direction is axial — a streak along theta and theta+pi is the same
//! streak — so every angle is folded into [0, pi). Cartesian lifts use the
//! representative (r cos theta, r sin theta).

use std::path::Path;

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

/// Polar image-space motion for one frame interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraMotionSample {
    pub frame_index: i64,
    /// Magnitude in pixels; carried through but only the direction is
    /// consumed by the directional filters.
    pub r: f64,
    /// Direction in radians, folded into [0, pi).
    pub theta: f64,
}

impl CameraMotionSample {
    pub fn new(frame_index: i64, r: f64, theta: f64) -> Result<Self> {
        if !(r.is_finite() && theta.is_finite()) {
            return Err(Error::InvalidParameter("non-finite motion sample".into()));
        }
        if r < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "motion magnitude must be >= 0, got {r}"
            )));
        }
        Ok(Self {
            frame_index,
            r,
            theta: fold_axial(theta),
        })
    }

    /// Cartesian representative of the axial vector.
    pub fn to_cartesian(&self) -> (f64, f64) {
        (self.r * self.theta.cos(), self.r * self.theta.sin())
    }
}

/// Tracked camera pose change over one frame interval, plus the projection
/// used to push it into image space.
#[derive(Debug, Clone)]
pub struct PoseDelta {
    pub projection: Matrix3<f64>,
    pub rotation: Matrix3<f64>,
    pub translation: Vector3<f64>,
    pub position: Vector3<f64>,
    pub position_next: Vector3<f64>,
    pub pixel_count: usize,
}

impl PoseDelta {
    pub fn validate(&self) -> Result<()> {
        if self.pixel_count == 0 {
            return Err(Error::InvalidParameter("pixel count must be >= 1".into()));
        }
        if self.projection.determinant().abs() < 1e-12 {
            return Err(Error::InvalidParameter("projection matrix not invertible".into()));
        }
        let rtr = self.rotation.transpose() * self.rotation;
        if (rtr - Matrix3::identity()).abs().max() > 1e-6 {
            return Err(Error::InvalidParameter("rotation not orthonormal".into()));
        }
        Ok(())
    }
}

/// Folds an angle into [0, pi). Exact multiples of pi map to 0.
pub fn fold_axial(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(std::f64::consts::PI);
    // rem_euclid can return pi itself through rounding.
    if t >= std::f64::consts::PI {
        t -= std::f64::consts::PI;
    }
    t
}

/// Polar form of a Cartesian vector with the axial convention; a zero vector
/// maps to (r=0, theta=0).
pub fn cartesian_to_axial(x: f64, y: f64) -> (f64, f64) {
    let r = (x * x + y * y).sqrt();
    if r == 0.0 {
        return (0.0, 0.0);
    }
    (r, fold_axial(y.atan2(x)))
}

/// Projects a tracked pose delta to the mean image-space motion vector
/// (1/n) sum K([R|T] X_next - X), expressed in polar axial form.
pub fn project_motion(pose: &PoseDelta, frame_index: i64) -> Result<CameraMotionSample> {
    pose.validate()?;
    let moved = pose.rotation * pose.position_next + pose.translation;
    let d = pose.projection * (moved - pose.position);
    // The sum runs over n identical per-pixel vectors, so the average is the
    // vector itself; only the image-plane components matter.
    let (r, theta) = cartesian_to_axial(d.x, d.y);
    CameraMotionSample::new(frame_index, r, theta)
}

/// Vector sum of two interval motions on their Cartesian representatives
/// (M_12 = M_1 + M_2), folded back to axial polar form.
pub fn combine_motions(m1: &CameraMotionSample, m2: &CameraMotionSample) -> CameraMotionSample {
    let (x1, y1) = m1.to_cartesian();
    let (x2, y2) = m2.to_cartesian();
    let (r, theta) = cartesian_to_axial(x1 + x2, y1 + y2);
    CameraMotionSample {
        frame_index: m1.frame_index,
        r,
        theta,
    }
}

/// Parses a motion channel CSV: `frameIndex,r,theta` per line, radians,
/// `#` comments ignored. Rows are validated and sorted by frame index.
pub fn load_motion_channel(path: impl AsRef<Path>) -> Result<Vec<CameraMotionSample>> {
    let text = std::fs::read_to_string(path.as_ref())?;
    parse_motion_channel(&text)
}

pub fn parse_motion_channel(text: &str) -> Result<Vec<CameraMotionSample>> {
    let mut samples: Vec<CameraMotionSample> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::MotionParse {
                line: line_no,
                message: format!("expected 3 comma-separated fields, got {}", fields.len()),
            });
        }
        let frame_index: i64 = fields[0].parse().map_err(|e| Error::MotionParse {
            line: line_no,
            message: format!("bad frame index '{}': {e}", fields[0]),
        })?;
        let r: f64 = fields[1].parse().map_err(|e| Error::MotionParse {
            line: line_no,
            message: format!("bad magnitude '{}': {e}", fields[1]),
        })?;
        let theta: f64 = fields[2].parse().map_err(|e| Error::MotionParse {
            line: line_no,
            message: format!("bad direction '{}': {e}", fields[2]),
        })?;
        let sample = CameraMotionSample::new(frame_index, r, theta).map_err(|e| {
            Error::MotionParse {
                line: line_no,
                message: e.to_string(),
            }
        })?;
        if samples.iter().any(|s| s.frame_index == frame_index) {
            return Err(Error::MotionParse {
                line: line_no,
                message: format!("duplicate frame index {frame_index}"),
            });
        }
        samples.push(sample);
    }
    samples.sort_by_key(|s| s.frame_index);
    Ok(samples)
}
