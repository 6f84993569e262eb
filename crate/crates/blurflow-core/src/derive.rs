//! Central-difference image derivatives with replicated edges.

use crate::image::Image;

/// First derivative along x: (I(x+1) - I(x-1)) / 2.
pub fn dx(img: &Image) -> Image {
    assert_eq!(img.channels(), 1, "derivatives operate on single-channel images");
    let (w, h) = (img.width(), img.height());
    Image::from_fn(w, h, |x, y| {
        let xi = x as isize;
        let yi = y as isize;
        (img.at_clamped(xi + 1, yi) - img.at_clamped(xi - 1, yi)) / 2.0
    })
}

/// First derivative along y.
pub fn dy(img: &Image) -> Image {
    assert_eq!(img.channels(), 1, "derivatives operate on single-channel images");
    let (w, h) = (img.width(), img.height());
    Image::from_fn(w, h, |x, y| {
        let xi = x as isize;
        let yi = y as isize;
        (img.at_clamped(xi, yi + 1) - img.at_clamped(xi, yi - 1)) / 2.0
    })
}

/// All five derivative maps used by the solver and the kernel estimator:
/// (dx, dy, dxx, dyy, dxy). Second derivatives are repeated applications of
/// the first-order stencils; dx and dy commute exactly under edge clamping.
pub fn derivatives(img: &Image) -> (Image, Image, Image, Image, Image) {
    let gx = dx(img);
    let gy = dy(img);
    let gxx = dx(&gx);
    let gyy = dy(&gy);
    let gxy = dy(&gx);
    (gx, gy, gxx, gyy, gxy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn constant_has_zero_derivatives() {
        let img = Image::constant(9, 7, 0.42);
        let (gx, gy, gxx, gyy, gxy) = derivatives(&img);
        for m in [gx, gy, gxx, gyy, gxy] {
            assert!(m.data().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn ramp_has_unit_slope() {
        let w = 16usize;
        let img = Image::from_fn(w, 8, |x, _| x as f64 / w as f64);
        let gx = dx(&img);
        let gy = dy(&img);
        for y in 0..8 {
            for x in 1..w - 1 {
                assert!((gx.at(x, y) - 1.0 / w as f64).abs() < 1e-15);
                assert!(gy.at(x, y).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn dx_matches_stencil_oracle_on_interior() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let img = Image::from_fn(16, 16, |_, _| rng.random::<f64>());
        let gx = dx(&img);
        for y in 0..16 {
            for x in 1..15 {
                let oracle = (img.at(x + 1, y) - img.at(x - 1, y)) / 2.0;
                assert_eq!(gx.at(x, y), oracle);
            }
        }
    }

    #[test]
    fn derivative_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let a = Image::from_fn(12, 12, |_, _| rng.random::<f64>());
        let b = Image::from_fn(12, 12, |_, _| rng.random::<f64>());
        let combo = Image::new(
            12,
            12,
            1,
            a.data()
                .iter()
                .zip(b.data())
                .map(|(x, y)| 2.0 * x - 0.5 * y)
                .collect(),
        )
        .unwrap();
        let lhs = dx(&combo);
        let da = dx(&a);
        let db = dx(&b);
        for i in 0..lhs.data().len() {
            let rhs = 2.0 * da.data()[i] - 0.5 * db.data()[i];
            assert!((lhs.data()[i] - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn mixed_derivatives_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let img = Image::from_fn(10, 10, |_, _| rng.random::<f64>());
        let a = dy(&dx(&img));
        let b = dx(&dy(&img));
        assert!(a.max_abs_diff(&b) < 1e-15);
    }
}
