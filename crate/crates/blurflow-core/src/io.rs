//! File ingest and export: 8-bit rasters (PGM/PPM/PNG) and the kernel text
//! format.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::image::Image;
use crate::kernel::BlurKernel;

/// Loads an 8-bit grayscale or RGB raster; samples are divided by 255.
pub fn load_image(path: impl AsRef<Path>) -> Result<Image> {
    let dynimg = image::open(path.as_ref())?;
    let (w, h) = (dynimg.width() as usize, dynimg.height() as usize);
    match dynimg {
        image::DynamicImage::ImageLuma8(buf) => {
            let data = buf.as_raw().iter().map(|&v| v as f64 / 255.0).collect();
            Image::new(w, h, 1, data)
        }
        other => {
            let rgb = other.to_rgb8();
            let data = rgb.as_raw().iter().map(|&v| v as f64 / 255.0).collect();
            Image::new(w, h, 3, data)
        }
    }
}

/// Writes an image as 8-bit PNG/PGM/PPM depending on the file extension;
/// samples are clamped to [0,1] and scaled by 255.
pub fn save_image(img: &Image, path: impl AsRef<Path>) -> Result<()> {
    let bytes: Vec<u8> = img
        .data()
        .iter()
        .map(|&v| (v.clamp(0.0, 1.0) * 255.0).round() as u8)
        .collect();
    let (w, h) = (img.width() as u32, img.height() as u32);
    if img.channels() == 1 {
        let buf = image::GrayImage::from_raw(w, h, bytes)
            .ok_or_else(|| Error::InvalidImage("gray buffer size".into()))?;
        buf.save(path.as_ref())?;
    } else {
        let buf = image::RgbImage::from_raw(w, h, bytes)
            .ok_or_else(|| Error::InvalidImage("rgb buffer size".into()))?;
        buf.save(path.as_ref())?;
    }
    Ok(())
}

/// Kernel text format: first line the side length, then that many rows of
/// space-separated weights.
pub fn save_kernel(k: &BlurKernel, path: impl AsRef<Path>) -> Result<()> {
    let mut out = String::new();
    out.push_str(&format!("{}\n", k.size()));
    for r in 0..k.size() {
        let row: Vec<String> = (0..k.size()).map(|c| format!("{:.12e}", k.at(c, r))).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    let mut f = fs::File::create(path.as_ref())?;
    f.write_all(out.as_bytes())?;
    Ok(())
}

/// Reads the kernel text format, renormalizing on load.
pub fn load_kernel(path: impl AsRef<Path>) -> Result<BlurKernel> {
    let text = fs::read_to_string(path.as_ref())?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let size: usize = lines
        .next()
        .ok_or_else(|| Error::InvalidKernel("empty kernel file".into()))?
        .trim()
        .parse()
        .map_err(|e| Error::InvalidKernel(format!("bad size line: {e}")))?;
    if size == 0 || size % 2 == 0 {
        return Err(Error::InvalidKernel(format!("size must be odd, got {size}")));
    }
    let mut weights = Vec::with_capacity(size * size);
    for (i, line) in lines.enumerate() {
        if i >= size {
            return Err(Error::InvalidKernel("too many rows".into()));
        }
        for tok in line.split_whitespace() {
            let v: f64 = tok
                .parse()
                .map_err(|e| Error::InvalidKernel(format!("bad weight '{tok}': {e}")))?;
            weights.push(v);
        }
    }
    if weights.len() != size * size {
        return Err(Error::InvalidKernel(format!(
            "expected {} weights, got {}",
            size * size,
            weights.len()
        )));
    }
    Ok(BlurKernel::normalized_from_raw(size, weights))
}
