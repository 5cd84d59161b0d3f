//! Gaussian optimal transport: Monge maps and Bures-Wasserstein barycenters,
//! including the structured (per-bin, per-channel) barycenters.

use nalgebra::DMatrix;
use ndarray::Array2;

use crate::error::{Error, Result};
use crate::herm::{self, Field};
use crate::spectral::{ChannelPsd, CrossSpectrum, SpatialCov};

/// Fixed-point iteration settings for barycenters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarycenterConfig {
    /// Applications of the fixed-point map after the Euclidean-mean start.
    pub n_iterations: usize,
    /// Relative Frobenius step below which iteration stops early.
    pub tolerance: f64,
}

impl Default for BarycenterConfig {
    fn default() -> Self {
        BarycenterConfig {
            n_iterations: 1,
            tolerance: 1e-10,
        }
    }
}

impl BarycenterConfig {
    pub fn iterations(n_iterations: usize) -> Self {
        BarycenterConfig {
            n_iterations,
            ..Self::default()
        }
    }
}

fn same_dim<T: Field>(a: &DMatrix<T>, b: &DMatrix<T>) -> Result<()> {
    if a.shape() != b.shape() || !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: b.nrows(),
        });
    }
    Ok(())
}

/// Monge map `A = s^-½ (s^½ t s^½)^½ s^-½` pushing `N(0, s)` onto `N(0, t)`,
/// with `s` shrunk by `eps` first.
pub fn monge_map<T: Field>(sigma_s: &DMatrix<T>, sigma_t: &DMatrix<T>, eps: f64) -> Result<DMatrix<T>> {
    same_dim(sigma_s, sigma_t)?;
    herm::check_hermitian(sigma_t)?;
    let s = herm::shrink(sigma_s, eps);
    let (s_half, s_inv_half) = herm::sqrt_and_invsqrt(&s).map_err(|e| match e {
        Error::SingularMatrix => Error::SingularSource,
        other => other,
    })?;
    let inner = herm::herm_sqrt(&herm::hermitian_part(&(&s_half * sigma_t * &s_half)))?;
    Ok(herm::hermitian_part(&(&s_inv_half * inner * &s_inv_half)))
}

/// One application of the barycenter map `Ψ(a) = (1/n) Σ_k (a^½ b_k a^½)^½`.
pub fn psi<T: Field>(a: &DMatrix<T>, sigmas: &[DMatrix<T>]) -> Result<DMatrix<T>> {
    let a_half = herm::herm_sqrt(a)?;
    let mut acc = DMatrix::<T>::zeros(a.nrows(), a.ncols());
    for b in sigmas {
        acc += herm::herm_sqrt(&herm::hermitian_part(&(&a_half * b * &a_half)))?;
    }
    Ok(acc * T::from_real(1.0 / sigmas.len() as f64))
}

fn euclidean_mean<T: Field>(sigmas: &[DMatrix<T>]) -> DMatrix<T> {
    let mut acc = DMatrix::<T>::zeros(sigmas[0].nrows(), sigmas[0].ncols());
    for s in sigmas {
        acc += s;
    }
    herm::hermitian_part(&(acc * T::from_real(1.0 / sigmas.len() as f64)))
}

/// Bures-Wasserstein barycenter by fixed-point iteration from the Euclidean mean.
///
/// With the default config this is exactly one application of [`psi`]. A list
/// of identical matrices is returned unchanged.
pub fn barycenter_fixed_point<T: Field>(sigmas: &[DMatrix<T>], cfg: &BarycenterConfig) -> Result<DMatrix<T>> {
    let first = sigmas.first().ok_or(Error::EmptyInput)?;
    for s in sigmas {
        same_dim(first, s)?;
        herm::check_hermitian(s)?;
    }
    if sigmas.iter().all(|s| s == first) {
        return Ok(first.clone());
    }
    let mut current = euclidean_mean(sigmas);
    for _ in 0..cfg.n_iterations {
        let next = psi(&current, sigmas)?;
        let step = herm::frobenius(&(&next - &current));
        let scale = herm::frobenius(&current);
        current = next;
        if cfg.n_iterations > 1 && step <= cfg.tolerance * scale {
            break;
        }
    }
    Ok(current)
}

/// Per-bin barycenter of cross-spectra.
///
/// Only the bins `0..=f/2` are solved; the rest are their conjugates, and the
/// self-conjugate bins are made exactly real.
pub fn crossspectrum_barycenter(specs: &[CrossSpectrum], cfg: &BarycenterConfig) -> Result<CrossSpectrum> {
    let first = specs.first().ok_or(Error::EmptyInput)?;
    let (f, n_c) = (first.f(), first.n_channels());
    if let Some(bad) = specs.iter().find(|s| s.f() != f || s.n_channels() != n_c) {
        return Err(Error::ShapeMismatch(format!(
            "cross-spectrum with f={} and {} channels, expected f={f} and {n_c} channels",
            bad.f(),
            bad.n_channels()
        )));
    }
    let mut bins = Vec::with_capacity(f);
    for j in 0..=f / 2 {
        let at_j: Vec<_> = specs.iter().map(|s| s.bin(j).clone()).collect();
        let mut b = barycenter_fixed_point(&at_j, cfg)?;
        if (f - j) % f == j {
            b = b.map(|v| v.re.into());
        }
        bins.push(b);
    }
    for j in f / 2 + 1..f {
        bins.push(bins[f - j].map(|v| v.conj()));
    }
    Ok(CrossSpectrum::from_bins_unchecked(bins))
}

/// Closed-form barycenter of per-channel PSDs: `((1/n) Σ_k √q_k)²` elementwise.
pub fn temporal_barycenter(psds: &[ChannelPsd]) -> Result<ChannelPsd> {
    let first = psds.first().ok_or(Error::EmptyInput)?;
    let shape = first.values().dim();
    if let Some(bad) = psds.iter().find(|p| p.values().dim() != shape) {
        return Err(Error::ShapeMismatch(format!(
            "PSD of shape {:?}, expected {shape:?}",
            bad.values().dim()
        )));
    }
    if psds.iter().all(|p| p == first) {
        return Ok(first.clone());
    }
    let inv_n = 1.0 / psds.len() as f64;
    let mut acc = Array2::<f64>::zeros(shape);
    for p in psds {
        acc.zip_mut_with(p.values(), |a, &q| *a += q.sqrt());
    }
    acc.mapv_inplace(|s| (s * inv_n).powi(2));
    Ok(ChannelPsd::from_values_unchecked(acc))
}

/// Barycenter of spatial covariances; delegates to [`barycenter_fixed_point`].
pub fn spatial_barycenter(covs: &[SpatialCov], cfg: &BarycenterConfig) -> Result<SpatialCov> {
    let mats: Vec<_> = covs.iter().map(|c| c.matrix().clone()).collect();
    Ok(SpatialCov::from_matrix_unchecked(barycenter_fixed_point(&mats, cfg)?))
}
