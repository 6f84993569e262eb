//! 2D FFT helpers on row-major complex buffers.

use num_complex::Complex;
use rustfft::FftPlanner;

/// Forward 2D FFT of a row-major complex buffer, in place.
pub fn fft2d_forward(width: usize, height: usize, data: &mut [Complex<f64>]) {
    fft2d(width, height, data, rustfft::FftDirection::Forward);
}

/// Inverse 2D FFT, in place, normalized by 1/(width*height).
pub fn fft2d_inverse(width: usize, height: usize, data: &mut [Complex<f64>]) {
    fft2d(width, height, data, rustfft::FftDirection::Inverse);
    let scale = 1.0 / (width * height) as f64;
    for v in data.iter_mut() {
        *v *= scale;
    }
}

fn fft2d(width: usize, height: usize, data: &mut [Complex<f64>], dir: rustfft::FftDirection) {
    assert_eq!(data.len(), width * height);
    let mut planner = FftPlanner::new();
    let row_fft = planner.plan_fft(width, dir);
    let col_fft = planner.plan_fft(height, dir);

    for row in data.chunks_exact_mut(width) {
        row_fft.process(row);
    }

    let mut column = vec![Complex::default(); height];
    for x in 0..width {
        for y in 0..height {
            column[y] = data[y * width + x];
        }
        col_fft.process(&mut column);
        for y in 0..height {
            data[y * width + x] = column[y];
        }
    }
}

/// Real buffer lifted to complex.
pub fn to_complex(data: &[f64]) -> Vec<Complex<f64>> {
    data.iter().map(|&v| Complex::new(v, 0.0)).collect()
}

/// Real parts of a complex buffer.
pub fn to_real(data: &[Complex<f64>]) -> Vec<f64> {
    data.iter().map(|c| c.re).collect()
}

/// Embeds a centered kernel grid into a width x height frequency-transform
/// buffer with the kernel center at index (0, 0), wrapping the quadrants.
/// Convolving with the result introduces no spatial shift.
pub fn embed_kernel_wrapped(
    weights: &[f64],
    size: usize,
    width: usize,
    height: usize,
) -> Vec<Complex<f64>> {
    assert!(size <= width && size <= height, "kernel larger than buffer");
    let radius = (size / 2) as isize;
    let mut out = vec![Complex::default(); width * height];
    for r in 0..size {
        for c in 0..size {
            let dy = r as isize - radius;
            let dx = c as isize - radius;
            let y = dy.rem_euclid(height as isize) as usize;
            let x = dx.rem_euclid(width as isize) as usize;
            out[y * width + x] = Complex::new(weights[r * size + c], 0.0);
        }
    }
    out
}
