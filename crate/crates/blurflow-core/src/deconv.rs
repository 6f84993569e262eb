//! Blind kernel pre-estimation and non-blind deconvolution.
//!
//! Kernel estimation minimizes a Tikhonov-regularized least-squares fit over
//! five derivative-map pairs of the blurred image and a salient-edge
//! prediction of the latent image. The normal equations diagonalize under
//! the DFT (circular convolution), so each conjugate-gradient step costs one
//! forward and one inverse transform.

use num_complex::Complex;

use crate::derive;
use crate::error::{Error, Result};
use crate::fft;
use crate::image::Image;
use crate::kernel::BlurKernel;
use crate::util::pairwise_dot;

/// Parameters of the kernel pre-estimation energy.
#[derive(Debug, Clone, Copy)]
pub struct KernelEstimationParams {
    /// Tikhonov weight on ||k||^2.
    pub delta: f64,
    /// Weight of the first-order derivative pairs.
    pub omega1: f64,
    /// Weight of the second-order derivative pairs.
    pub omega2: f64,
    /// Conjugate-gradient iteration cap.
    pub inner_iterations: usize,
    /// Kernel side length at the finest level; odd.
    pub kernel_size: usize,
    /// Fraction of gradient magnitudes the prediction step keeps.
    pub gradient_quantile: f64,
}

impl Default for KernelEstimationParams {
    fn default() -> Self {
        Self {
            delta: 5.0,
            omega1: 1.0,
            omega2: 0.5,
            inner_iterations: 20,
            kernel_size: 41,
            gradient_quantile: 0.1,
        }
    }
}

impl KernelEstimationParams {
    pub fn validate(&self) -> Result<()> {
        if self.delta <= 0.0 {
            return Err(Error::InvalidParameter("delta must be > 0".into()));
        }
        if self.omega1 <= 0.0 || self.omega2 <= 0.0 {
            return Err(Error::InvalidParameter("omega weights must be > 0".into()));
        }
        if self.kernel_size < 3 || self.kernel_size % 2 == 0 {
            return Err(Error::InvalidParameter(format!(
                "kernel size must be odd >= 3, got {}",
                self.kernel_size
            )));
        }
        if self.inner_iterations == 0 {
            return Err(Error::InvalidParameter("need at least one CG iteration".into()));
        }
        if !(0.0..=1.0).contains(&self.gradient_quantile) {
            return Err(Error::InvalidParameter("gradient quantile must be in [0,1]".into()));
        }
        Ok(())
    }
}

/// Result of a kernel estimation run.
#[derive(Debug, Clone)]
pub struct KernelEstimate {
    pub kernel: BlurKernel,
    /// False when CG hit the iteration cap before the residual tolerance.
    pub converged: bool,
    pub iterations: usize,
    /// Regularized least-squares objective after each CG iteration
    /// (index 0 is the k = 0 starting point).
    pub objective: Vec<f64>,
    /// Solution before clipping and renormalization.
    pub raw_solution: Vec<f64>,
}

/// Salient-edge prediction: first-derivative maps of the latent estimate
/// with everything below the top `quantile` of gradient magnitudes zeroed.
pub fn predict_gradients(latent: &Image, quantile: f64) -> (Image, Image) {
    assert_eq!(latent.channels(), 1);
    let gx = derive::dx(latent);
    let gy = derive::dy(latent);
    let n = gx.data().len();
    let keep = (quantile * n as f64).ceil() as usize;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        let ma = gx.data()[a].hypot(gy.data()[a]);
        let mb = gx.data()[b].hypot(gy.data()[b]);
        mb.partial_cmp(&ma).unwrap().then(a.cmp(&b))
    });

    let mut keep_mask = vec![false; n];
    for &i in order.iter().take(keep) {
        // Zero-magnitude pixels carry no edge regardless of rank.
        if gx.data()[i] != 0.0 || gy.data()[i] != 0.0 {
            keep_mask[i] = true;
        }
    }

    let fx = Image::new(
        latent.width(),
        latent.height(),
        1,
        gx.data()
            .iter()
            .enumerate()
            .map(|(i, &v)| if keep_mask[i] { v } else { 0.0 })
            .collect(),
    )
    .expect("same shape");
    let fy = Image::new(
        latent.width(),
        latent.height(),
        1,
        gy.data()
            .iter()
            .enumerate()
            .map(|(i, &v)| if keep_mask[i] { v } else { 0.0 })
            .collect(),
    )
    .expect("same shape");
    (fx, fy)
}

/// The five (blurred, latent) derivative-map pairs with their weights.
fn derivative_pairs(
    latent: &Image,
    blurred: &Image,
    p: &KernelEstimationParams,
) -> Vec<(Image, Image, f64)> {
    let (gx, gy) = predict_gradients(latent, p.gradient_quantile);
    let gxx = derive::dx(&gx);
    let gyy = derive::dy(&gy);
    // Predicted maps are no longer derivatives of one function; symmetrize.
    let gxy_a = derive::dy(&gx);
    let gxy_b = derive::dx(&gy);
    let gxy = Image::new(
        latent.width(),
        latent.height(),
        1,
        gxy_a
            .data()
            .iter()
            .zip(gxy_b.data())
            .map(|(a, b)| 0.5 * (a + b))
            .collect(),
    )
    .expect("same shape");

    let (ix, iy, ixx, iyy, ixy) = derive::derivatives(blurred);
    vec![
        (ix, gx, p.omega1),
        (iy, gy, p.omega1),
        (ixx, gxx, p.omega2),
        (iyy, gyy, p.omega2),
        (ixy, gxy, p.omega2),
    ]
}

/// Estimates the blur kernel relating `latent` to `blurred` by conjugate
/// gradients on the Tikhonov normal equations over the derivative pairs,
/// then clips and renormalizes the solution.
pub fn estimate_kernel(
    latent: &Image,
    blurred: &Image,
    p: &KernelEstimationParams,
) -> Result<KernelEstimate> {
    estimate_kernel_seeded(latent, blurred, None, p)
}

/// [`estimate_kernel`] with an optional warm-start kernel (resized from the
/// previous pyramid level).
pub fn estimate_kernel_seeded(
    latent: &Image,
    blurred: &Image,
    seed: Option<&BlurKernel>,
    p: &KernelEstimationParams,
) -> Result<KernelEstimate> {
    p.validate()?;
    if latent.channels() != 1 || blurred.channels() != 1 {
        return Err(Error::InvalidImage("kernel estimation expects luminance".into()));
    }
    if !latent.same_shape(blurred) {
        return Err(Error::DimensionMismatch(format!(
            "latent {}x{} vs blurred {}x{}",
            latent.width(),
            latent.height(),
            blurred.width(),
            blurred.height()
        )));
    }
    let (w, h) = (latent.width(), latent.height());
    let size = p.kernel_size;
    if size > w || size > h {
        return Err(Error::KernelExceedsImage {
            kernel: size,
            width: w,
            height: h,
        });
    }

    // Precompute the DFT diagonalization: S = sum_p w_p |G_p|^2 and
    // rhs = restrict(IDFT(sum_p w_p conj(G_p) . DFT(I_p))).
    let pairs = derivative_pairs(latent, blurred, p);
    let n = w * h;
    let mut spectrum_weight = vec![0.0f64; n];
    let mut rhs_spec = vec![Complex::<f64>::default(); n];
    let mut data_energy = 0.0;
    for (blur_map, latent_map, weight) in &pairs {
        let mut g = fft::to_complex(latent_map.data());
        fft::fft2d_forward(w, h, &mut g);
        let mut b = fft::to_complex(blur_map.data());
        fft::fft2d_forward(w, h, &mut b);
        for i in 0..n {
            spectrum_weight[i] += weight * g[i].norm_sqr();
            rhs_spec[i] += weight * g[i].conj() * b[i];
        }
        data_energy += weight * pairwise_dot(blur_map.data(), blur_map.data());
    }
    fft::fft2d_inverse(w, h, &mut rhs_spec);
    let rhs = restrict_support(&fft::to_real(&rhs_spec), w, h, size);

    // Matrix-free normal operator on the kernel support.
    let apply = |x: &[f64]| -> Vec<f64> {
        let mut buf = fft::embed_kernel_wrapped(x, size, w, h);
        fft::fft2d_forward(w, h, &mut buf);
        for i in 0..n {
            buf[i] *= spectrum_weight[i];
        }
        fft::fft2d_inverse(w, h, &mut buf);
        let mut out = restrict_support(&fft::to_real(&buf), w, h, size);
        for (o, xi) in out.iter_mut().zip(x) {
            *o += p.delta * xi;
        }
        out
    };

    let dim = size * size;
    let mut x = match seed {
        Some(k) if k.size() == size => k.weights().to_vec(),
        Some(k) => k.resized(size).weights().to_vec(),
        None => vec![0.0; dim],
    };
    let mut r: Vec<f64> = if x.iter().all(|&v| v == 0.0) {
        rhs.clone()
    } else {
        let ax = apply(&x);
        rhs.iter().zip(&ax).map(|(b, a)| b - a).collect()
    };
    let rhs_norm = pairwise_dot(&rhs, &rhs).sqrt().max(1e-300);
    let tol = 1e-8 * rhs_norm;

    // objective(x) = x'Mx - 2 rhs'x + data_energy, tracked incrementally:
    // each CG step lowers the quadratic by (alpha/2) r'r.
    let mut objective = Vec::with_capacity(p.inner_iterations + 1);
    let obj0 = {
        let ax = apply(&x);
        pairwise_dot(&x, &ax) - 2.0 * pairwise_dot(&rhs, &x) + data_energy
    };
    objective.push(obj0);

    let mut pvec = r.clone();
    let mut rr = pairwise_dot(&r, &r);
    let mut iterations = 0;
    let mut converged = rr.sqrt() <= tol;
    while iterations < p.inner_iterations && !converged {
        let ap = apply(&pvec);
        let pap = pairwise_dot(&pvec, &ap);
        if pap <= 0.0 || !pap.is_finite() {
            break; // numerically exhausted search direction
        }
        let alpha = rr / pap;
        for i in 0..dim {
            x[i] += alpha * pvec[i];
            r[i] -= alpha * ap[i];
        }
        objective.push(objective.last().unwrap() - alpha * rr);
        let rr_new = pairwise_dot(&r, &r);
        let beta = rr_new / rr;
        for i in 0..dim {
            pvec[i] = r[i] + beta * pvec[i];
        }
        rr = rr_new;
        iterations += 1;
        converged = rr.sqrt() <= tol;
    }
    if !converged {
        log::debug!(
            "kernel CG stopped at iteration {iterations} with relative residual {:.3e}",
            rr.sqrt() / rhs_norm
        );
    }

    Ok(KernelEstimate {
        kernel: BlurKernel::normalized_from_raw(size, x.clone()),
        converged,
        iterations,
        objective,
        raw_solution: x,
    })
}

/// Reads the s x s kernel support back out of a wrapped (w, h) grid.
fn restrict_support(grid: &[f64], w: usize, h: usize, size: usize) -> Vec<f64> {
    let radius = (size / 2) as isize;
    let mut out = vec![0.0; size * size];
    for r in 0..size {
        for c in 0..size {
            let dy = r as isize - radius;
            let dx = c as isize - radius;
            let y = dy.rem_euclid(h as isize) as usize;
            let x = dx.rem_euclid(w as isize) as usize;
            out[r * size + c] = grid[y * w + x];
        }
    }
    out
}

/// Non-blind deconvolution: closed-form frequency-domain minimizer of
/// ||blurred - k (x) l||^2 + lambda ||grad l||^2, clamped to [0, 1]. The
/// image is replicate-padded by the kernel size to soften wrap-around.
pub fn non_blind_deconvolve(blurred: &Image, k: &BlurKernel, lambda: f64) -> Result<Image> {
    if blurred.channels() != 1 {
        let planes: Result<Vec<_>> = blurred
            .channel_planes()
            .iter()
            .map(|pl| non_blind_deconvolve(pl, k, lambda))
            .collect();
        return Image::from_planes(&planes?);
    }
    if lambda < 0.0 {
        return Err(Error::InvalidParameter("lambda must be >= 0".into()));
    }
    let (w, h) = (blurred.width(), blurred.height());
    if k.size() > w || k.size() > h {
        return Err(Error::KernelExceedsImage {
            kernel: k.size(),
            width: w,
            height: h,
        });
    }

    let margin = k.size();
    let pw = w + 2 * margin;
    let ph = h + 2 * margin;
    let mut buf = Vec::with_capacity(pw * ph);
    for y in 0..ph {
        for x in 0..pw {
            let sx = x as isize - margin as isize;
            let sy = y as isize - margin as isize;
            buf.push(Complex::new(blurred.at_clamped(sx, sy), 0.0));
        }
    }
    fft::fft2d_forward(pw, ph, &mut buf);

    let mut kbuf = fft::embed_kernel_wrapped(k.weights(), k.size(), pw, ph);
    fft::fft2d_forward(pw, ph, &mut kbuf);

    // |D|^2 of forward differences: 4 sin^2(pi u) + 4 sin^2(pi v).
    for j in 0..ph {
        let sv = (std::f64::consts::PI * j as f64 / ph as f64).sin();
        for i in 0..pw {
            let su = (std::f64::consts::PI * i as f64 / pw as f64).sin();
            let idx = j * pw + i;
            let kk = kbuf[idx];
            let den = (kk.norm_sqr() + lambda * 4.0 * (su * su + sv * sv)).max(1e-15);
            buf[idx] = buf[idx] * kk.conj() / den;
        }
    }
    fft::fft2d_inverse(pw, ph, &mut buf);

    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            out[y * w + x] = buf[(y + margin) * pw + (x + margin)].re.clamp(0.0, 1.0);
        }
    }
    Image::new(w, h, 1, out)
}
