//! Bilinear resampling with Gaussian pre-smoothing on downscale.

use crate::image::Image;

/// Resizes an image to (new_w, new_h) by bilinear interpolation over pixel
/// centers. When an axis shrinks, a separable Gaussian pre-smooth with
/// std 0.6 * sqrt(1/f^2 - 1) (f the shrink factor) suppresses aliasing.
pub fn resample(img: &Image, new_w: usize, new_h: usize) -> Image {
    assert!(new_w >= 1 && new_h >= 1);
    if img.channels() != 1 {
        let planes: Vec<Image> = img
            .channel_planes()
            .iter()
            .map(|p| resample(p, new_w, new_h))
            .collect();
        return Image::from_planes(&planes).expect("planes share dimensions");
    }
    if new_w == img.width() && new_h == img.height() {
        return img.clone();
    }

    let fx = new_w as f64 / img.width() as f64;
    let fy = new_h as f64 / img.height() as f64;
    let sx = anti_alias_sigma(fx);
    let sy = anti_alias_sigma(fy);
    let smoothed = gaussian_smooth(img, sx, sy);

    let src_w = smoothed.width() as f64;
    let src_h = smoothed.height() as f64;
    Image::from_fn(new_w, new_h, |x, y| {
        // Pixel-center alignment: identity mapping when sizes match.
        let sx = (x as f64 + 0.5) * src_w / new_w as f64 - 0.5;
        let sy = (y as f64 + 0.5) * src_h / new_h as f64 - 0.5;
        smoothed.sample_bilinear(sx, sy)
    })
}

fn anti_alias_sigma(factor: f64) -> f64 {
    if factor >= 1.0 {
        0.0
    } else {
        0.6 * (1.0 / (factor * factor) - 1.0).sqrt()
    }
}

/// Separable Gaussian smoothing with per-axis stds; sigma 0 skips the axis.
pub fn gaussian_smooth(img: &Image, sigma_x: f64, sigma_y: f64) -> Image {
    let mut out = img.clone();
    if sigma_x > 0.0 {
        out = smooth_axis(&out, sigma_x, true);
    }
    if sigma_y > 0.0 {
        out = smooth_axis(&out, sigma_y, false);
    }
    out
}

fn gaussian_taps(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil().max(1.0) as usize;
    let mut taps: Vec<f64> = (0..=2 * radius)
        .map(|i| {
            let t = i as f64 - radius as f64;
            (-t * t / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    let sum: f64 = taps.iter().sum();
    for t in taps.iter_mut() {
        *t /= sum;
    }
    taps
}

fn smooth_axis(img: &Image, sigma: f64, horizontal: bool) -> Image {
    let taps = gaussian_taps(sigma);
    let radius = taps.len() as isize / 2;
    let (w, h) = (img.width(), img.height());
    Image::from_fn(w, h, |x, y| {
        let mut acc = 0.0;
        for (i, &t) in taps.iter().enumerate() {
            let o = i as isize - radius;
            let v = if horizontal {
                img.at_clamped(x as isize + o, y as isize)
            } else {
                img.at_clamped(x as isize, y as isize + o)
            };
            acc += t * v;
        }
        acc
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_resize_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let img = Image::from_fn(13, 9, |_, _| rng.random::<f64>());
        let out = resample(&img, 13, 9);
        assert!(img.max_abs_diff(&out) < 1e-9);
    }

    #[test]
    fn downscale_factor_dimensions() {
        let img = Image::constant(100, 100, 0.5);
        let out = resample(&img, 75, 75);
        assert_eq!((out.width(), out.height()), (75, 75));
    }

    #[test]
    fn constant_stays_constant_at_any_size() {
        let img = Image::constant(20, 14, 0.3);
        for (w, h) in [(5, 5), (20, 14), (41, 3), (1, 1)] {
            let out = resample(&img, w, h);
            assert!(
                out.data().iter().all(|&v| (v - 0.3).abs() < 1e-12),
                "constant broken at {w}x{h}"
            );
        }
    }

    #[test]
    fn upscale_interpolates_between_samples() {
        let img = Image::new(2, 1, 1, vec![0.0, 1.0]).unwrap();
        let out = resample(&img, 4, 1);
        // Centers map to src 0:-0.25(clamp), 1:0.25, 2:0.75, 3:1.25(clamp).
        let expect = [0.0, 0.25, 0.75, 1.0];
        for (a, b) in out.data().iter().zip(expect) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }
}
