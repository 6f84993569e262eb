//! Blur-robust dense optical flow for camera-shake footage.
//!
//! The library interleaves blind deconvolution, camera-motion-guided
//! directional kernel filtering, and a warping-based variational flow solver
//! over a coarse-to-fine pyramid. A synthetic-blur benchmark with AEE/AAE
//! metrics ships alongside the pipeline.

pub mod automotion;
pub mod benchmark;
pub mod convolve;
pub mod deconv;
pub mod derive;
pub mod dirfilter;
pub mod error;
pub mod fft;
pub mod flo;
pub mod flow;
pub mod image;
pub mod io;
pub mod kernel;
pub mod motion;
pub mod pipeline;
pub mod pyramid;
pub mod render;
pub mod resample;
pub mod solver;
pub mod util;
pub mod warp;

pub use error::{Error, Result};
pub use flow::FlowField;
pub use image::Image;
pub use kernel::BlurKernel;
pub use pyramid::Pyramid;
