//! Temporal alignment extended to images, which are treated as univariate 2-D
//! stationary signals. Every operation uses the unitary 2-D DFT and circular
//! boundaries.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::fft2_unitary;
use crate::spectral::PSD_FLOOR;

pub type Image = Array2<f64>;

/// Barycenter of the mean 2-D PSDs of several image domains.
#[derive(Debug, Clone, PartialEq)]
pub struct Tma2dModel {
    pub barycenter: Array2<f64>,
    pub max_gain: f64,
}

fn spectrum(img: &Image) -> Vec<Complex64> {
    let (h, w) = img.dim();
    let mut buf: Vec<Complex64> = img.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft2_unitary(&mut buf, h, w, false);
    buf
}

/// Mean over images of `|F₂ x|²`.
pub fn psd2d(images: &[Image]) -> Result<Array2<f64>> {
    let first = images.first().ok_or(Error::EmptyInput)?;
    let shape = first.dim();
    let mut acc = Array2::<f64>::zeros(shape);
    for img in images {
        if img.dim() != shape {
            return Err(Error::ShapeMismatch(format!("image of shape {:?}, expected {shape:?}", img.dim())));
        }
        for (a, s) in acc.iter_mut().zip(spectrum(img)) {
            *a += s.norm_sqr();
        }
    }
    acc.mapv_inplace(|v| v / images.len() as f64);
    Ok(acc)
}

/// Fits the 2-D barycenter `((1/n) Σ_k √PSD_k)²` over domains.
pub fn tma2d_fit(domains: &[Vec<Image>]) -> Result<Tma2dModel> {
    if domains.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut psds = Vec::with_capacity(domains.len());
    for (k, d) in domains.iter().enumerate() {
        if d.is_empty() {
            return Err(Error::EmptyDomain(k));
        }
        psds.push(psd2d(d)?);
    }
    let shape = psds[0].dim();
    if let Some(bad) = psds.iter().find(|p| p.dim() != shape) {
        return Err(Error::ShapeMismatch(format!("domain of shape {:?}, expected {shape:?}", bad.dim())));
    }
    let mut acc = Array2::<f64>::zeros(shape);
    for p in &psds {
        acc.zip_mut_with(p, |a, &q| *a += q.sqrt());
    }
    let inv = 1.0 / psds.len() as f64;
    acc.mapv_inplace(|s| (s * inv).powi(2));
    Ok(Tma2dModel {
        barycenter: acc,
        max_gain: crate::align::DEFAULT_MAX_GAIN,
    })
}

/// Per-frequency gains `√(PSD̄ / PSD_d)`, symmetrized so the kernel is real.
pub fn tma2d_gains(model: &Tma2dModel, domain_psd: &Array2<f64>) -> Result<Array2<f64>> {
    let (h, w) = model.barycenter.dim();
    if domain_psd.dim() != (h, w) {
        return Err(Error::ShapeMismatch(format!(
            "domain PSD of shape {:?}, model {:?}",
            domain_psd.dim(),
            (h, w)
        )));
    }
    let raw = Array2::from_shape_fn((h, w), |ix| {
        (model.barycenter[ix] / domain_psd[ix].max(PSD_FLOOR)).sqrt().min(model.max_gain)
    });
    Ok(Array2::from_shape_fn((h, w), |(y, x)| {
        0.5 * (raw[(y, x)] + raw[((h - y) % h, (w - x) % w)])
    }))
}

/// Aligns one image whose domain has PSD `domain_psd`.
pub fn tma2d_apply(model: &Tma2dModel, domain_psd: &Array2<f64>, image: &Image) -> Result<Image> {
    let gains = tma2d_gains(model, domain_psd)?;
    if image.dim() != gains.dim() {
        return Err(Error::ShapeMismatch(format!(
            "image of shape {:?}, model {:?}",
            image.dim(),
            gains.dim()
        )));
    }
    Ok(filter_with_gains(&gains, image))
}

fn filter_with_gains(gains: &Array2<f64>, image: &Image) -> Image {
    let (h, w) = image.dim();
    let mut buf = spectrum(image);
    for (v, g) in buf.iter_mut().zip(gains.iter()) {
        *v *= g;
    }
    fft2_unitary(&mut buf, h, w, true);
    Array2::from_shape_vec((h, w), buf.into_iter().map(|v| v.re).collect()).expect("shape preserved")
}

/// Estimates the domain PSD from all its images and aligns each of them.
pub fn tma2d_align_domain(model: &Tma2dModel, images: &[Image]) -> Result<Vec<Image>> {
    let psd = psd2d(images)?;
    let gains = tma2d_gains(model, &psd)?;
    Ok(images.iter().map(|img| filter_with_gains(&gains, img)).collect())
}

/// Circular autocorrelation image (unitary inverse DFT of a PSD), centered so
/// that lag zero sits in the middle.
pub fn correlation_image(psd: &Array2<f64>) -> Image {
    let (h, w) = psd.dim();
    let mut buf: Vec<Complex64> = psd.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft2_unitary(&mut buf, h, w, true);
    Array2::from_shape_fn((h, w), |(y, x)| buf[((y + h - h / 2) % h) * w + (x + w - w / 2) % w].re)
}

/// Relative Frobenius gap `‖a - b‖ / ‖b‖`.
pub fn relative_gap(a: &Image, b: &Image) -> f64 {
    let num: f64 = a.iter().zip(b.iter()).map(|(x, y)| (x - y).powi(2)).sum();
    let den: f64 = b.iter().map(|y| y * y).sum();
    (num / den).sqrt()
}
