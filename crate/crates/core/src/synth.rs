//! Synthetic data with known second-order structure.
//!
//! Randomness comes from ChaCha8 seeded with [`rand_chacha::ChaCha8Rng::seed_from_u64`]
//! and standard normals from `rand_distr::StandardNormal`. The FFTs here use the
//! scalar `rustfft` planner so that outputs do not depend on the CPU's SIMD
//! support. Draw order for [`gen_stationary`]: bins `0..=n/2` in order, and for
//! each bin the real parts of all channels, then (for bins that are not their
//! own conjugate) the imaginary parts.

use nalgebra::DMatrix;
use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::FftPlannerScalar;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::herm::{self, CMatrix};
use crate::image2d::Image;
use crate::spectral::{CrossSpectrum, Signal};

/// Population cross-spectrum on the full grid of `n_samples` frequencies.
pub type SpectrumSpec = CrossSpectrum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Seed(pub u64);

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}

impl Seed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    /// Independent seed for the `k`-th sub-stream.
    pub fn derive(self, k: u64) -> Seed {
        // splitmix64 step keeps nearby keys far apart
        let mut z = self.0 ^ k.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        Seed(z ^ (z >> 31))
    }
}

/// Draws one realization of the centered stationary Gaussian process whose
/// cross-spectrum is `spec`; the signal length is `spec.f()`.
pub fn gen_stationary(spec: &SpectrumSpec, seed: Seed) -> Result<Signal> {
    spec.validate()?;
    let n = spec.f();
    let n_c = spec.n_channels();
    let mut rng = seed.rng();
    let mut coeffs = vec![vec![Complex64::new(0.0, 0.0); n]; n_c];
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    for j in 0..=n / 2 {
        let root: CMatrix = herm::herm_sqrt(spec.bin(j))?;
        let self_conj = (n - j) % n == j;
        let u: Vec<f64> = (0..n_c).map(|_| rng.sample(StandardNormal)).collect();
        let z: Vec<Complex64> = if self_conj {
            let re = root.map(|v| v.re);
            (0..n_c)
                .map(|a| Complex64::new((0..n_c).map(|b| re[(a, b)] * u[b]).sum(), 0.0))
                .collect()
        } else {
            let v: Vec<f64> = (0..n_c).map(|_| rng.sample(StandardNormal)).collect();
            (0..n_c)
                .map(|a| {
                    (0..n_c)
                        .map(|b| root[(a, b)] * Complex64::new(u[b], v[b]) * inv_sqrt2)
                        .sum()
                })
                .collect()
        };
        for a in 0..n_c {
            coeffs[a][j] = z[a];
            if !self_conj {
                coeffs[a][n - j] = z[a].conj();
            }
        }
    }
    let fft = FftPlannerScalar::new().plan_fft_forward(n);
    let scale = 1.0 / (n as f64).sqrt();
    let mut data = Array2::zeros((n_c, n));
    for (a, mut buf) in coeffs.into_iter().enumerate() {
        fft.process(&mut buf);
        for (t, v) in buf.iter().enumerate() {
            data[(a, t)] = v.re * scale;
        }
    }
    Signal::new(data)
}

/// Spectrum of independent channels with circular correlation
/// `r(d) = γ ρ^min(d, n-d)`: `q_j = Σ_d r(d) e^{-2iπjd/n}`, clipped at zero.
pub fn expcorr_spec(gamma: f64, rho: f64, n_channels: usize, n_samples: usize) -> Result<SpectrumSpec> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidParameter(format!("gamma must be positive, got {gamma}")));
    }
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::InvalidParameter(format!("rho must lie in [0, 1), got {rho}")));
    }
    if n_channels == 0 || n_samples == 0 {
        return Err(Error::InvalidParameter("need at least one channel and one sample".into()));
    }
    let q = expcorr_psd(gamma, rho, n_samples);
    let bins = q
        .iter()
        .map(|&v| CMatrix::identity(n_channels, n_channels) * Complex64::new(v, 0.0))
        .collect();
    CrossSpectrum::from_raw_bins(bins)
}

/// The scalar PSD behind [`expcorr_spec`].
pub fn expcorr_psd(gamma: f64, rho: f64, n: usize) -> Vec<f64> {
    let r: Vec<f64> = (0..n).map(|d| gamma * rho.powi(d.min(n - d) as i32)).collect();
    let mut buf = crate::fft::to_complex(&r);
    FftPlannerScalar::new().plan_fft_forward(n).process(&mut buf);
    let mut q: Vec<f64> = buf.iter().map(|v| v.re.max(0.0)).collect();
    // r is even, so q is symmetric up to round-off; make it exact
    for j in 1..n {
        let m = 0.5 * (q[j] + q[n - j]);
        q[j] = m;
    }
    for j in n / 2 + 1..n {
        q[j] = q[n - j];
    }
    q
}

/// `count` white-noise textures of shape `h × w`.
pub fn texture_images(count: usize, h: usize, w: usize, seed: Seed) -> Vec<Image> {
    let mut rng = seed.rng();
    (0..count)
        .map(|_| Array2::from_shape_simple_fn((h, w), || rng.sample(StandardNormal)))
        .collect()
}

/// Pixel offsets `(dy, dx)` of a centered line of `len` pixels at `angle_deg`
/// (counter-clockwise from the x axis, y pointing down). The line is stepped
/// along its dominant axis so the pixels are distinct, and it is symmetric
/// about the origin.
pub fn line_kernel(angle_deg: f64, len: usize) -> Result<Vec<(isize, isize)>> {
    if len == 0 || len % 2 == 0 {
        return Err(Error::BadKernel(len));
    }
    let theta = angle_deg.rem_euclid(180.0).to_radians();
    let (s, c) = theta.sin_cos();
    let major = s.abs().max(c.abs());
    let half = (len / 2) as isize;
    let mut out = vec![(0, 0)];
    for t in 1..=half {
        let dx = (t as f64 * c / major).round() as isize;
        let dy = -(t as f64 * s / major).round() as isize;
        out.push((dy, dx));
        out.push((-dy, -dx));
    }
    Ok(out)
}

/// Blurs each image by circular convolution with a uniform line kernel.
pub fn gen_blur_domain(base_images: &[Image], angle_deg: f64, kernel_len: usize) -> Result<Vec<Image>> {
    let offsets = line_kernel(angle_deg, kernel_len)?;
    let weight = 1.0 / offsets.len() as f64;
    Ok(base_images
        .iter()
        .map(|img| {
            let (h, w) = img.dim();
            Array2::from_shape_fn((h, w), |(y, x)| {
                offsets
                    .iter()
                    .map(|&(dy, dx)| {
                        let yy = (y as isize + dy).rem_euclid(h as isize) as usize;
                        let xx = (x as isize + dx).rem_euclid(w as isize) as usize;
                        img[(yy, xx)]
                    })
                    .sum::<f64>()
                    * weight
            })
        })
        .collect())
}

/// Named spectra used for fixtures and examples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Recipe {
    /// Flat spectrum; domain `k` scales channel `c` by `1 + 0.5 (k + c) mod 3`.
    White,
    /// Independent exponentially correlated channels; `ρ` depends on the domain.
    Expcorr,
    /// Exponentially correlated sources mixed across channels and delayed by
    /// domain-dependent lags.
    Mixture,
    /// All-zero spectrum.
    Zero,
}

impl std::str::FromStr for Recipe {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "white" => Ok(Recipe::White),
            "expcorr" => Ok(Recipe::Expcorr),
            "mixture" => Ok(Recipe::Mixture),
            "zero" => Ok(Recipe::Zero),
            other => Err(Error::InvalidParameter(format!("unknown recipe {other:?}"))),
        }
    }
}

/// Population spectrum of fixture `recipe` for domain number `domain`.
pub fn fixture_spectrum(recipe: Recipe, n_channels: usize, n_samples: usize, domain: usize) -> Result<SpectrumSpec> {
    if n_channels == 0 || n_samples == 0 {
        return Err(Error::InvalidParameter("need at least one channel and one sample".into()));
    }
    let n_c = n_channels;
    let k = domain;
    let bins: Vec<CMatrix> = match recipe {
        Recipe::Zero => vec![CMatrix::zeros(n_c, n_c); n_samples],
        Recipe::White => {
            let d = CMatrix::from_diagonal(&nalgebra::DVector::from_fn(n_c, |c, _| {
                Complex64::new(1.0 + 0.5 * ((k + c) % 3) as f64, 0.0)
            }));
            vec![d; n_samples]
        }
        Recipe::Expcorr => {
            let rho = [0.5, 0.8, 0.3, 0.9, 0.65][k % 5];
            let q = expcorr_psd(1.0 + 0.25 * (k % 4) as f64, rho, n_samples);
            q.iter()
                .map(|&v| CMatrix::identity(n_c, n_c) * Complex64::new(v, 0.0))
                .collect()
        }
        Recipe::Mixture => {
            let psds: Vec<Vec<f64>> = (0..n_c)
                .map(|c| expcorr_psd(1.0, [0.2, 0.6, 0.85, 0.4][(c + k) % 4], n_samples))
                .collect();
            let strength = 0.15 + 0.1 * (k % 4) as f64;
            let mix = DMatrix::from_fn(n_c, n_c, |a, b| {
                if a == b {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(strength / (1.0 + (a as f64 - b as f64).abs()), 0.0)
                }
            });
            (0..n_samples)
                .map(|j| {
                    let phase = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(n_c, |c, _| {
                        let lag = ((c * (k + 1)) % 5) as f64;
                        Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * j as f64 * lag / n_samples as f64)
                    }));
                    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(n_c, |c, _| {
                        Complex64::new(psds[c][j], 0.0)
                    }));
                    let m = &phase * &mix;
                    herm::hermitian_part(&(&m * d * m.adjoint()))
                })
                .collect()
        }
    };
    let spec = CrossSpectrum::from_raw_bins(bins)?;
    // exact conjugate symmetry; the formulas above only hold it up to round-off
    Ok(crate::spectral::enforce_hermitian_symmetry(&spec))
}

/// One realization of a fixture.
pub fn fixture_signal(recipe: Recipe, n_channels: usize, n_samples: usize, domain: usize, seed: Seed) -> Result<Signal> {
    gen_stationary(&fixture_spectrum(recipe, n_channels, n_samples, domain)?, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_spec_gives_zero_signal() {
        let sig = fixture_signal(Recipe::Zero, 2, 16, 0, Seed(1)).unwrap();
        assert!(sig.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let a = fixture_signal(Recipe::Mixture, 3, 64, 1, Seed(42)).unwrap();
        let b = fixture_signal(Recipe::Mixture, 3, 64, 1, Seed(42)).unwrap();
        assert_eq!(a, b);
        let c = fixture_signal(Recipe::Mixture, 3, 64, 1, Seed(43)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn expcorr_rho_zero_is_flat() {
        let q = expcorr_psd(2.5, 0.0, 10);
        assert!(q.iter().all(|&v| (v - 2.5).abs() < 1e-14));
    }

    #[test]
    fn expcorr_bin_matches_direct_sum() {
        let (g, rho, n) = (1.3, 0.7, 12);
        let q = expcorr_psd(g, rho, n);
        for j in 0..n {
            let direct: f64 = (0..n)
                .map(|d| {
                    let r = g * rho.powi(d.min(n - d) as i32);
                    r * (2.0 * std::f64::consts::PI * (j * d) as f64 / n as f64).cos()
                })
                .sum();
            assert!((q[j] - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn expcorr_gamma_is_linear() {
        let a = expcorr_psd(1.0, 0.6, 20);
        let b = expcorr_psd(2.0, 0.6, 20);
        for (x, y) in a.iter().zip(&b) {
            assert!((2.0 * x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn blur_examples() {
        let base = texture_images(2, 12, 12, Seed(3));
        assert_eq!(gen_blur_domain(&base, 33.0, 1).unwrap(), base);
        assert_eq!(gen_blur_domain(&base, 0.0, 5).unwrap(), gen_blur_domain(&base, 180.0, 5).unwrap());
        let flat = vec![Array2::from_elem((8, 8), 3.0)];
        for angle in [0.0, 15.0, 45.0, 100.0] {
            let out = gen_blur_domain(&flat, angle, 7).unwrap();
            assert!(out[0].iter().all(|&v| (v - 3.0).abs() < 1e-14));
        }
        assert!(matches!(gen_blur_domain(&base, 0.0, 4), Err(Error::BadKernel(4))));
    }

    #[test]
    fn line_kernel_pixels_are_distinct() {
        for angle in (0..180).step_by(15) {
            let k = line_kernel(angle as f64, 7).unwrap();
            let mut sorted = k.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), 7, "angle {angle}");
        }
    }

    #[test]
    fn fixtures_are_valid_spectra() {
        for recipe in [Recipe::White, Recipe::Expcorr, Recipe::Mixture, Recipe::Zero] {
            for k in 0..3 {
                fixture_spectrum(recipe, 3, 32, k).unwrap().validate().unwrap();
            }
        }
    }
}
