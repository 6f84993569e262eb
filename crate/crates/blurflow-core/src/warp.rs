//! Backward warping of images by a flow field.

use crate::error::{Error, Result};
use crate::flow::FlowField;
use crate::image::Image;

/// warped(x) = img(x + w(x)) by bilinear interpolation. The mask is false
/// where x + w(x) leaves the image rectangle; those samples are edge-clamped
/// so the raster stays well defined, but callers should ignore them.
pub fn warp_bilinear(img: &Image, flow: &FlowField) -> Result<(Image, Vec<bool>)> {
    if img.channels() != 1 {
        return Err(Error::InvalidImage("warp expects single-channel input".into()));
    }
    if img.width() != flow.width() || img.height() != flow.height() {
        return Err(Error::DimensionMismatch(format!(
            "image {}x{} vs flow {}x{}",
            img.width(),
            img.height(),
            flow.width(),
            flow.height()
        )));
    }
    let (w, h) = (img.width(), img.height());
    let mut out = vec![0.0; w * h];
    let mut mask = vec![false; w * h];
    for y in 0..h {
        for x in 0..w {
            let (u, v) = flow.at(x, y);
            let sx = x as f64 + u;
            let sy = y as f64 + v;
            let inside =
                sx >= 0.0 && sy >= 0.0 && sx <= (w - 1) as f64 && sy <= (h - 1) as f64;
            mask[y * w + x] = inside;
            out[y * w + x] = img.sample_bilinear(sx, sy);
        }
    }
    Ok((Image::new(w, h, 1, out)?, mask))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_flow_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let img = Image::from_fn(11, 7, |_, _| rng.random::<f64>());
        let flow = FlowField::zeros(11, 7);
        let (warped, mask) = warp_bilinear(&img, &flow).unwrap();
        assert!(img.max_abs_diff(&warped) < 1e-15);
        assert!(mask.iter().all(|&m| m));
    }

    #[test]
    fn integer_shift_reads_neighbour() {
        let img = Image::from_fn(8, 4, |x, _| x as f64 / 8.0);
        let flow = FlowField::constant(8, 4, 1.0, 0.0);
        let (warped, mask) = warp_bilinear(&img, &flow).unwrap();
        for y in 0..4 {
            for x in 0..7 {
                assert!((warped.at(x, y) - img.at(x + 1, y)).abs() < 1e-15);
                assert!(mask[y * 8 + x]);
            }
            // Last column lands outside.
            assert!(!mask[y * 8 + 7]);
        }
    }

    #[test]
    fn half_pixel_interpolates() {
        let img = Image::new(2, 1, 1, vec![0.0, 1.0]).unwrap();
        let flow = FlowField::constant(2, 1, 0.5, 0.0);
        let (warped, mask) = warp_bilinear(&img, &flow).unwrap();
        assert!((warped.at(0, 0) - 0.5).abs() < 1e-15);
        assert!(mask[0]);
        assert!(!mask[1]);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let img = Image::constant(4, 4, 0.0);
        let flow = FlowField::zeros(5, 4);
        assert!(warp_bilinear(&img, &flow).is_err());
    }
}
