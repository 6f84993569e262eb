//! Directional high-pass filtering of blur kernels.
//!
//! Camera-shake streaks concentrate their spectrum near the line
//! u cos(theta) + v sin(theta) = 0 running orthogonal to the blur direction;
//! isotropic low-frequency noise sits near the origin. Suppressing a narrow
//! band around that line (in the direction theta + pi/2) removes the noise
//! while keeping the streak, which is the kernel-enhancement step between
//! blind deconvolution passes.
//!
//! The production path works on the kernel spectrum; the spatial tap form is
//! provided for image filtering and cross-checks.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::fft;
use crate::image::Image;
use crate::kernel::BlurKernel;
use crate::motion::fold_axial;

/// Parameters of the directional filter.
#[derive(Debug, Clone, Copy)]
pub struct DirectionalFilterParams {
    /// Standard deviation of the frequency-domain Gaussian stop band, in
    /// cycles per sample (Nyquist is 0.5).
    pub sigma: f64,
    /// Tap count of the spatial form; odd.
    pub support_length: usize,
}

impl Default for DirectionalFilterParams {
    fn default() -> Self {
        Self {
            // 0.08 x Nyquist: narrow relative to kernel spectra.
            sigma: 0.08 * 0.5,
            support_length: 25,
        }
    }
}

/// Gain of the frequency-domain filter at frequency (u, v) cycles/sample:
/// 1 - exp(-L^2 / 2 sigma^2) with L = u cos(theta) + v sin(theta).
pub fn frequency_response(u: f64, v: f64, theta: f64, sigma: f64) -> f64 {
    debug_assert!(sigma > 0.0);
    let line = u * theta.cos() + v * theta.sin();
    1.0 - (-line * line / (2.0 * sigma * sigma)).exp()
}

/// Spatial-domain std corresponding to a frequency-domain std in
/// cycles/sample (Fourier pair of Gaussians).
pub fn spatial_sigma(sigma: f64) -> f64 {
    1.0 / (2.0 * std::f64::consts::PI * sigma)
}

/// 1D filtering along the direction (cos theta, sin theta) with taps
/// g(t) = 1 - exp(-t^2 / 2 sigma_s^2) at integer offsets, normalized to unit
/// sum. Off-grid samples are fetched bilinearly, edges replicated. The tap
/// normalization passes flat signals through unchanged.
pub fn directional_highpass_spatial(
    img: &Image,
    theta: f64,
    p: &DirectionalFilterParams,
) -> Image {
    assert_eq!(img.channels(), 1);
    assert!(p.support_length % 2 == 1 && p.support_length >= 3);
    let taps = spatial_taps(p);
    let radius = (p.support_length / 2) as isize;
    let (dx, dy) = (theta.cos(), theta.sin());
    Image::from_fn(img.width(), img.height(), |x, y| {
        let mut acc = 0.0;
        for (i, &g) in taps.iter().enumerate() {
            let t = (i as isize - radius) as f64;
            acc += g * img.sample_bilinear(x as f64 + t * dx, y as f64 + t * dy);
        }
        acc
    })
}

/// Normalized taps of the spatial form.
pub fn spatial_taps(p: &DirectionalFilterParams) -> Vec<f64> {
    let sigma_s = spatial_sigma(p.sigma);
    let radius = (p.support_length / 2) as isize;
    let mut taps: Vec<f64> = (-radius..=radius)
        .map(|t| {
            let t = t as f64;
            1.0 - (-t * t / (2.0 * sigma_s * sigma_s)).exp()
        })
        .collect();
    let sum: f64 = taps.iter().sum();
    for t in taps.iter_mut() {
        *t /= sum;
    }
    taps
}

/// Multiplies the DFT of a width x height grid by the directional response
/// and transforms back. Periodic; no padding. Frequencies are the signed DFT
/// bins in cycles per sample.
pub fn directional_highpass_grid(
    width: usize,
    height: usize,
    data: &[f64],
    theta: f64,
    sigma: f64,
) -> Vec<f64> {
    assert_eq!(data.len(), width * height);
    let mut buf = fft::to_complex(data);
    fft::fft2d_forward(width, height, &mut buf);
    apply_response(width, height, &mut buf, theta, sigma);
    fft::fft2d_inverse(width, height, &mut buf);
    // Taking the real part symmetrizes the response across Nyquist bins.
    fft::to_real(&buf)
}

fn apply_response(
    width: usize,
    height: usize,
    spectrum: &mut [Complex<f64>],
    theta: f64,
    sigma: f64,
) {
    for j in 0..height {
        let v = signed_freq(j, height);
        for i in 0..width {
            let u = signed_freq(i, width);
            spectrum[j * width + i] *= frequency_response(u, v, theta, sigma);
        }
    }
}

/// Signed frequency of DFT bin i out of n, in cycles per sample.
pub fn signed_freq(i: usize, n: usize) -> f64 {
    if i <= n / 2 {
        i as f64 / n as f64
    } else {
        (i as f64 - n as f64) / n as f64
    }
}

/// Directionally filtered kernel grid before renormalization. The kernel is
/// zero-padded to twice its side (wrap-around guard), filtered spectrally,
/// and cropped back to its support.
fn directional_highpass_raw(k: &BlurKernel, theta: f64, sigma: f64) -> Vec<f64> {
    let size = k.size();
    let padded = 2 * size;
    let off = (padded - size) / 2;
    let mut grid = vec![0.0; padded * padded];
    for r in 0..size {
        for c in 0..size {
            grid[(r + off) * padded + (c + off)] = k.at(c, r);
        }
    }
    let filtered = directional_highpass_grid(padded, padded, &grid, theta, sigma);
    let mut out = vec![0.0; size * size];
    for r in 0..size {
        for c in 0..size {
            out[r * size + c] = filtered[(r + off) * padded + (c + off)];
        }
    }
    out
}

/// Frequency-domain directional high-pass of a blur kernel (the fast
/// equivalent of the spatial form), renormalized to a valid kernel.
pub fn directional_highpass_frequency(k: &BlurKernel, theta: f64, sigma: f64) -> BlurKernel {
    let raw = directional_highpass_raw(k, theta, sigma);
    BlurKernel::normalized_from_raw(k.size(), raw)
}

/// Multi-direction kernel enhancement: the weighted sum of directional
/// high-pass responses along each blur direction's orthogonal, renormalized
/// once at the end. Weights must sum to 1.
pub fn enhance_kernel(
    k: &BlurKernel,
    thetas: &[f64],
    weights: &[f64],
    sigma: f64,
) -> Result<BlurKernel> {
    if thetas.len() != weights.len() || thetas.is_empty() {
        return Err(Error::InvalidParameter(
            "enhance_kernel needs matching, non-empty direction and weight lists".into(),
        ));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidParameter(format!(
            "direction weights sum to {sum}, expected 1"
        )));
    }
    let size = k.size();
    let mut acc = vec![0.0; size * size];
    for (&theta, &beta) in thetas.iter().zip(weights) {
        // Filter orthogonally to the blur direction.
        let filter_dir = fold_axial(theta + std::f64::consts::FRAC_PI_2);
        let raw = directional_highpass_raw(k, filter_dir, sigma);
        for (a, r) in acc.iter_mut().zip(&raw) {
            *a += beta * r;
        }
    }
    Ok(BlurKernel::normalized_from_raw(size, acc))
}

/// Per-frame direction weight sets for a tracked pair: the first frame leans
/// on its own interval, the second on the following interval, and both keep
/// a smaller stake in the combined direction.
pub fn frame_weight_sets(theta1: f64, theta2: f64, theta12: f64) -> [(Vec<f64>, Vec<f64>); 2] {
    [
        (vec![theta1, theta2, theta12], vec![0.5, 1.0 / 3.0, 1.0 / 6.0]),
        (vec![theta1, theta2, theta12], vec![1.0 / 3.0, 0.5, 1.0 / 6.0]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    // Naive O(n^4) DFT-based reference of the kernel filtering path.
    fn dft_oracle_filter(k: &BlurKernel, theta: f64, sigma: f64) -> Vec<f64> {
        let size = k.size();
        let n = 2 * size;
        let off = (n - size) / 2;
        let mut grid = vec![0.0; n * n];
        for r in 0..size {
            for c in 0..size {
                grid[(r + off) * n + (c + off)] = k.at(c, r);
            }
        }
        // forward DFT
        let mut spec = vec![Complex::new(0.0, 0.0); n * n];
        for bv in 0..n {
            for bu in 0..n {
                let mut acc = Complex::new(0.0, 0.0);
                for y in 0..n {
                    for x in 0..n {
                        let ph = -2.0 * PI * (bu * x + bv * y) as f64 / n as f64;
                        acc += grid[y * n + x] * Complex::new(ph.cos(), ph.sin());
                    }
                }
                let u = signed_freq(bu, n);
                let v = signed_freq(bv, n);
                spec[bv * n + bu] = acc * frequency_response(u, v, theta, sigma);
            }
        }
        // inverse DFT, real part, crop
        let mut out = vec![0.0; size * size];
        for r in 0..size {
            for c in 0..size {
                let (x, y) = (c + off, r + off);
                let mut acc = Complex::new(0.0, 0.0);
                for bv in 0..n {
                    for bu in 0..n {
                        let ph = 2.0 * PI * (bu * x + bv * y) as f64 / n as f64;
                        acc += spec[bv * n + bu] * Complex::new(ph.cos(), ph.sin());
                    }
                }
                out[r * size + c] = acc.re / (n * n) as f64;
            }
        }
        out
    }

    #[test]
    fn response_trivial_values() {
        assert_eq!(frequency_response(0.0, 0.0, 0.7, 0.04), 0.0);
        // orthogonal to theta: L = 0
        let th = 0.3f64;
        let (u, v) = (-th.sin(), th.cos());
        assert!(frequency_response(u, v, th, 0.04).abs() < 1e-15);
        // |L| = 10 sigma: gain within 1e-21 of 1 (exp(-50) underflows the
        // f64 gap below 1, so equality is possible)
        let sigma = 0.04;
        let g = frequency_response(10.0 * sigma, 0.0, 0.0, sigma);
        assert!(g >= 1.0 - 1e-21, "gain {g}");
    }

    #[test]
    fn response_increases_with_line_distance() {
        // Strict growth is resolvable up to about 8 sigma; beyond that the
        // gain saturates to 1 in f64.
        let sigma = 0.05;
        let mut prev = -1.0;
        for i in 0..=40 {
            let l = i as f64 * 0.01;
            let g = frequency_response(l, 0.0, 0.0, sigma);
            assert!(g > prev, "not increasing at |L|={l}");
            prev = g;
        }
    }

    #[test]
    fn spatial_constant_passes_through() {
        let img = Image::constant(16, 16, 0.42);
        let out = directional_highpass_spatial(&img, 0.9, &DirectionalFilterParams::default());
        assert!(out.data().iter().all(|&x| (x - 0.42).abs() < 1e-12));
    }

    #[test]
    fn spatial_orthogonal_variation_untouched() {
        // theta = 0 filters along x; an image varying only in y never changes.
        let img = Image::from_fn(20, 20, |_, y| (y as f64 * 0.7).sin() * 0.3 + 0.5);
        let out = directional_highpass_spatial(&img, 0.0, &DirectionalFilterParams::default());
        assert!(img.max_abs_diff(&out) < 1e-12);
    }

    #[test]
    fn spatial_matches_1d_row_oracle() {
        // Horizontal sinusoid filtered along x equals the 1D tap filter
        // applied to one row (on-grid samples, no interpolation error).
        let p = DirectionalFilterParams::default();
        let freq = 0.25; // cycles/sample
        let img = Image::from_fn(64, 8, |x, _| 0.5 + 0.4 * (2.0 * PI * freq * x as f64).sin());
        let out = directional_highpass_spatial(&img, 0.0, &p);

        let taps = spatial_taps(&p);
        let radius = taps.len() as isize / 2;
        let row: Vec<f64> = (0..64).map(|x| img.at(x, 4)).collect();
        let clamp = |i: isize| row[i.clamp(0, 63) as usize];
        for x in 20..44isize {
            let oracle: f64 = taps
                .iter()
                .enumerate()
                .map(|(i, &g)| g * clamp(x + i as isize - radius))
                .sum();
            let got = out.at(x as usize, 4);
            assert!(
                (got - oracle).abs() <= 0.05 * oracle.abs().max(1e-9),
                "x={x}: {got} vs oracle {oracle}"
            );
        }
    }

    #[test]
    fn frequency_filter_matches_dft_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        let raw: Vec<f64> = (0..81).map(|_| rng.random::<f64>()).collect();
        let k = BlurKernel::normalized_from_raw(9, raw);
        for theta in [0.0, 0.4, 1.3] {
            let fast = directional_highpass_frequency(&k, theta, 0.04);
            let oracle = BlurKernel::normalized_from_raw(9, dft_oracle_filter(&k, theta, 0.04));
            let diff: f64 = fast
                .weights()
                .iter()
                .zip(oracle.weights())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(diff < 1e-9, "theta={theta}: max diff {diff}");
        }
    }

    #[test]
    fn delta_kernel_keeps_center_maximum() {
        let k = BlurKernel::delta(9);
        let out = directional_highpass_frequency(&k, 0.5, 0.04);
        let center = out.at(4, 4);
        assert!(out.weights().iter().all(|&w| w <= center + 1e-15));
        assert!(center > 0.5, "center weight {center}");
    }

    #[test]
    fn vanishing_sigma_barely_changes_kernel() {
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        let raw: Vec<f64> = (0..81).map(|_| rng.random::<f64>()).collect();
        let k = BlurKernel::normalized_from_raw(9, raw);
        // 1e-3 of the Nyquist band; a generic angle keeps the discrete L=0
        // set down to the DC bin.
        let out = directional_highpass_frequency(&k, 0.3, 1e-3 * 0.5);
        let diff: f64 = k
            .weights()
            .iter()
            .zip(out.weights())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(diff < 0.05, "max change {diff}");
    }

    #[test]
    fn double_application_never_grows_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let n = 16;
        let grid: Vec<f64> = (0..n * n).map(|_| rng.random::<f64>()).collect();
        let once = directional_highpass_grid(n, n, &grid, 0.8, 0.05);
        let twice = directional_highpass_grid(n, n, &once, 0.8, 0.05);
        let spec = |g: &[f64]| {
            let mut b = fft::to_complex(g);
            fft::fft2d_forward(n, n, &mut b);
            b
        };
        for (a, b) in spec(&twice).iter().zip(spec(&once).iter()) {
            assert!(a.norm() <= b.norm() + 1e-12);
        }
    }

    #[test]
    fn annihilates_line_supported_component() {
        // Constant along x <=> spectrum on the u = 0 line; filtering along
        // theta = 0 (L = u) wipes it out.
        let n = 16;
        let grid: Vec<f64> = (0..n * n)
            .map(|i| ((i / n) as f64 * 1.1).sin() * 0.3 + 0.4)
            .collect();
        let out = directional_highpass_grid(n, n, &grid, 0.0, 0.04);
        let energy: f64 = out.iter().map(|x| x * x).sum();
        assert!(energy < 1e-20, "residual energy {energy}");
    }

    #[test]
    fn passband_component_preserved() {
        // Spectrum at |L| >= 10 sigma passes within 1e-6 before
        // renormalization.
        let n = 16;
        let sigma = 0.02;
        let cyc = 5.0 / n as f64; // |L| = 5/16 >= 10*0.02
        let grid: Vec<f64> = (0..n * n)
            .map(|i| (2.0 * PI * cyc * (i % n) as f64).cos())
            .collect();
        let out = directional_highpass_grid(n, n, &grid, 0.0, sigma);
        let diff = grid
            .iter()
            .zip(&out)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(diff < 1e-6, "max deviation {diff}");
    }

    #[test]
    fn enhance_rejects_bad_weights() {
        let k = BlurKernel::delta(9);
        let err = enhance_kernel(&k, &[0.0, 0.5, 1.0], &[0.5, 0.4, 0.2], 0.04);
        assert!(err.is_err());
        assert!(enhance_kernel(&k, &[0.0, 0.5, 1.0], &[0.5, 1.0 / 3.0, 1.0 / 6.0], 0.04).is_ok());
    }

    #[test]
    fn equal_directions_collapse_to_single_filter() {
        let k = BlurKernel::streak(9, 6.0, 0.7);
        let multi = enhance_kernel(&k, &[0.7, 0.7, 0.7], &[0.5, 1.0 / 3.0, 1.0 / 6.0], 0.04)
            .unwrap();
        let single = directional_highpass_frequency(&k, fold_axial(0.7 + PI / 2.0), 0.04);
        let diff: f64 = multi
            .weights()
            .iter()
            .zip(single.weights())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(diff < 1e-12, "max diff {diff}");
    }

    #[test]
    fn enhancement_suppresses_blob_keeps_streak() {
        // Streak along theta plus a broad low-frequency blob: after
        // filtering along theta + pi/2, the blob's stop-band energy drops by
        // at least half while the streak's ridge (its spectrum runs along
        // the filter direction) keeps 90% of its pass-band energy.
        let size = 9;
        let n = 2 * size;
        let theta = 0.0;
        let streak = BlurKernel::streak(size, 7.0, theta);
        let mut blob = vec![0.0; size * size];
        for r in 0..size {
            for c in 0..size {
                let dy = r as f64 - 4.0;
                let dx = c as f64 - 4.0;
                blob[r * size + c] = (-(dx * dx + dy * dy) / 18.0).exp() * 0.05;
            }
        }

        let sigma = 0.04;
        let filter_dir = fold_axial(theta + PI / 2.0);
        let embed = |vals: &[f64]| {
            let mut g = vec![0.0; n * n];
            let off = (n - size) / 2;
            for r in 0..size {
                for c in 0..size {
                    g[(r + off) * n + (c + off)] = vals[r * size + c];
                }
            }
            g
        };
        let line_dist = |i: usize, j: usize| {
            signed_freq(i, n) * filter_dir.cos() + signed_freq(j, n) * filter_dir.sin()
        };
        let spectrum = |g: &[f64]| {
            let mut buf = fft::to_complex(g);
            fft::fft2d_forward(n, n, &mut buf);
            buf
        };

        // Blob: total energy inside the stop band |L| < sigma (DC excluded;
        // renormalization restores it).
        let stop_energy = |g: &[f64]| {
            let buf = spectrum(g);
            let mut acc = 0.0;
            for j in 0..n {
                for i in 0..n {
                    if (i, j) != (0, 0) && line_dist(i, j).abs() < sigma {
                        acc += buf[j * n + i].norm_sqr();
                    }
                }
            }
            acc
        };
        let blob_grid = embed(&blob);
        let blob_filtered = directional_highpass_grid(n, n, &blob_grid, filter_dir, sigma);
        let blob_before = stop_energy(&blob_grid);
        let blob_after = stop_energy(&blob_filtered);
        assert!(
            blob_after <= 0.5 * blob_before,
            "blob stop-band energy {blob_after} vs {blob_before}"
        );

        // Streak: energy on the ridge (the u = 0 column for a streak along
        // x) outside the stop band.
        let ridge_energy = |g: &[f64]| {
            let buf = spectrum(g);
            let mut acc = 0.0;
            for j in 0..n {
                if line_dist(0, j).abs() >= sigma {
                    acc += buf[j * n].norm_sqr();
                }
            }
            acc
        };
        let streak_grid = embed(streak.weights());
        let streak_filtered = directional_highpass_grid(n, n, &streak_grid, filter_dir, sigma);
        let kept = ridge_energy(&streak_filtered) / ridge_energy(&streak_grid);
        assert!(kept >= 0.9, "streak ridge energy retained {kept}");
    }
}
