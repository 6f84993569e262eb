//! Convolution with blur kernels, in spatial and frequency-domain forms.
//!
//! Both forms realize true convolution (kernel flipped) with replicate-edge
//! boundary handling; the frequency path reproduces the spatial result to
//! within FFT round-off, far below the 1e-6 contract.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::fft;
use crate::image::Image;
use crate::kernel::BlurKernel;
use crate::util::next_fast_len;

fn check_fit(img: &Image, k: &BlurKernel) -> Result<()> {
    if k.size() > img.width() || k.size() > img.height() {
        return Err(Error::KernelExceedsImage {
            kernel: k.size(),
            width: img.width(),
            height: img.height(),
        });
    }
    Ok(())
}

/// Direct spatial convolution: out(x) = sum_s k(s) img(x - s), edges
/// replicated. O(N * size^2).
pub fn convolve_spatial(img: &Image, k: &BlurKernel) -> Result<Image> {
    check_fit(img, k)?;
    if img.channels() != 1 {
        let planes: Result<Vec<_>> = img
            .channel_planes()
            .iter()
            .map(|p| convolve_spatial(p, k))
            .collect();
        return Image::from_planes(&planes?);
    }
    let (w, h) = (img.width(), img.height());
    let radius = k.radius() as isize;
    let size = k.size();
    let mut out = vec![0.0; w * h];
    for y in 0..h as isize {
        for x in 0..w as isize {
            let mut acc = 0.0;
            for r in 0..size {
                let dy = r as isize - radius;
                for c in 0..size {
                    let dx = c as isize - radius;
                    acc += k.at(c, r) * img.at_clamped(x - dx, y - dy);
                }
            }
            out[y as usize * w + x as usize] = acc;
        }
    }
    Image::new(w, h, 1, out)
}

/// FFT convolution, equivalent to [`convolve_spatial`]. The image is edge-
/// padded by the kernel radius so the linear convolution sees replicated
/// boundaries, then zero-padded to a fast transform length.
pub fn convolve_frequency(img: &Image, k: &BlurKernel) -> Result<Image> {
    check_fit(img, k)?;
    if img.channels() != 1 {
        let planes: Result<Vec<_>> = img
            .channel_planes()
            .iter()
            .map(|p| convolve_frequency(p, k))
            .collect();
        return Image::from_planes(&planes?);
    }
    let (w, h) = (img.width(), img.height());
    let radius = k.radius();
    if radius == 0 {
        // 1x1 kernel is a plain scale.
        let s = k.weights()[0];
        return Ok(img.map(|v| v * s));
    }

    // Replicate-pad by the radius, then leave room for linear convolution.
    let pw = w + 2 * radius;
    let ph = h + 2 * radius;
    let fw = next_fast_len(pw + k.size() - 1);
    let fh = next_fast_len(ph + k.size() - 1);

    let mut padded = vec![Complex::default(); fw * fh];
    for y in 0..ph {
        let sy = y as isize - radius as isize;
        for x in 0..pw {
            let sx = x as isize - radius as isize;
            padded[y * fw + x] = Complex::new(img.at_clamped(sx, sy), 0.0);
        }
    }

    let mut kbuf = vec![Complex::default(); fw * fh];
    for r in 0..k.size() {
        for c in 0..k.size() {
            kbuf[r * fw + c] = Complex::new(k.at(c, r), 0.0);
        }
    }

    fft::fft2d_forward(fw, fh, &mut padded);
    fft::fft2d_forward(fw, fh, &mut kbuf);
    for (a, b) in padded.iter_mut().zip(&kbuf) {
        *a *= b;
    }
    fft::fft2d_inverse(fw, fh, &mut padded);

    // Full linear convolution index = padded index + kernel index; the
    // original pixel grid starts at offset 2*radius.
    let off = 2 * radius;
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            out[y * w + x] = padded[(y + off) * fw + (x + off)].re;
        }
    }
    Image::new(w, h, 1, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_image(w: usize, h: usize, seed: u64) -> Image {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Image::from_fn(w, h, |_, _| rng.random::<f64>())
    }

    fn random_kernel(size: usize, seed: u64) -> BlurKernel {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw: Vec<f64> = (0..size * size).map(|_| rng.random::<f64>()).collect();
        BlurKernel::normalized_from_raw(size, raw)
    }

    /// Independent double-loop reference: replicate boundary, true convolution.
    fn brute_force(img: &Image, k: &BlurKernel) -> Vec<f64> {
        let (w, h) = (img.width() as isize, img.height() as isize);
        let size = k.size() as isize;
        let radius = size / 2;
        let mut out = vec![0.0; (w * h) as usize];
        for y in 0..h {
            for x in 0..w {
                let mut acc = 0.0;
                for r in 0..size {
                    for c in 0..size {
                        let sx = (x - (c - radius)).clamp(0, w - 1) as usize;
                        let sy = (y - (r - radius)).clamp(0, h - 1) as usize;
                        acc += k.at(c as usize, r as usize) * img.at(sx, sy);
                    }
                }
                out[(y * w + x) as usize] = acc;
            }
        }
        out
    }

    #[test]
    fn identity_kernel_is_identity() {
        let img = random_image(7, 5, 1);
        let k = BlurKernel::new(1, vec![1.0]).unwrap();
        let out = convolve_spatial(&img, &k).unwrap();
        assert!(img.max_abs_diff(&out) < 1e-15);
    }

    #[test]
    fn constant_image_stays_constant() {
        let img = Image::constant(12, 9, 0.37);
        let k = random_kernel(5, 2);
        let out = convolve_spatial(&img, &k).unwrap();
        assert!(out.data().iter().all(|&v| (v - 0.37).abs() < 1e-12));
        let outf = convolve_frequency(&img, &k).unwrap();
        assert!(outf.data().iter().all(|&v| (v - 0.37).abs() < 1e-6));
    }

    #[test]
    fn spatial_matches_brute_force() {
        let img = random_image(5, 5, 3);
        let k = random_kernel(3, 4);
        let out = convolve_spatial(&img, &k).unwrap();
        let expect = brute_force(&img, &k);
        for (a, b) in out.data().iter().zip(&expect) {
            assert!((a - b).abs() < 1e-12, "spatial {a} vs brute {b}");
        }
    }

    #[test]
    fn frequency_matches_spatial_32x32() {
        let img = random_image(32, 32, 5);
        let k = random_kernel(7, 6);
        let a = convolve_spatial(&img, &k).unwrap();
        let b = convolve_frequency(&img, &k).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-6, "deviation {}", a.max_abs_diff(&b));
    }

    #[test]
    fn delta_kernel_frequency_identity() {
        let img = random_image(16, 11, 7);
        let out = convolve_frequency(&img, &BlurKernel::delta(5)).unwrap();
        assert!(img.max_abs_diff(&out) < 1e-6);
    }

    #[test]
    fn oversized_kernel_rejected() {
        let img = random_image(4, 4, 8);
        let k = BlurKernel::delta(5);
        assert!(matches!(
            convolve_spatial(&img, &k),
            Err(Error::KernelExceedsImage { .. })
        ));
        assert!(convolve_frequency(&img, &k).is_err());
    }

    #[test]
    fn convolution_is_linear() {
        let a = random_image(10, 10, 9);
        let b = random_image(10, 10, 10);
        let k = random_kernel(5, 11);
        let combo = Image::new(
            10,
            10,
            1,
            a.data()
                .iter()
                .zip(b.data())
                .map(|(x, y)| 0.6 * x + 0.4 * y)
                .collect(),
        )
        .unwrap();
        let lhs = convolve_spatial(&combo, &k).unwrap();
        let ca = convolve_spatial(&a, &k).unwrap();
        let cb = convolve_spatial(&b, &k).unwrap();
        for i in 0..100 {
            let rhs = 0.6 * ca.data()[i] + 0.4 * cb.data()[i];
            assert!((lhs.data()[i] - rhs).abs() < 1e-9);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn frequency_equals_spatial(
            w in 3usize..40,
            h in 3usize..40,
            ksize in prop::sample::select(vec![1usize, 3, 5, 7]),
            seed in 0u64..1000,
        ) {
            prop_assume!(ksize <= w && ksize <= h);
            let img = random_image(w, h, seed);
            let k = random_kernel(ksize, seed.wrapping_add(1));
            let a = convolve_spatial(&img, &k).unwrap();
            let b = convolve_frequency(&img, &k).unwrap();
            prop_assert!(a.max_abs_diff(&b) < 1e-6);
        }
    }
}
