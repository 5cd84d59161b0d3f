#![allow(dead_code)]

pub mod oracle;

use monge_align::herm::{self, CMatrix, RMatrix};
use monge_align::{CrossSpectrum, Signal};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn random_signal(n_c: usize, n: usize, rng: &mut ChaCha8Rng) -> Signal {
    Signal::new(ndarray::Array2::from_shape_simple_fn((n_c, n), || normal(rng))).unwrap()
}

/// `G Gᵀ / dim + floor·I` with Gaussian `G`.
pub fn random_spd(dim: usize, floor: f64, rng: &mut ChaCha8Rng) -> RMatrix {
    let g = RMatrix::from_fn(dim, dim, |_, _| normal(rng));
    herm::hermitian_part(&(&g * g.transpose() / dim as f64 + RMatrix::identity(dim, dim) * floor))
}

pub fn random_hpd(dim: usize, floor: f64, rng: &mut ChaCha8Rng) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| Complex64::new(normal(rng), normal(rng)));
    herm::hermitian_part(&(&g * g.adjoint() / Complex64::new(dim as f64, 0.0)
        + CMatrix::identity(dim, dim) * Complex64::new(floor, 0.0)))
}

/// Random positive-definite cross-spectrum with exact conjugate symmetry.
pub fn random_spectrum(n_c: usize, n: usize, rng: &mut ChaCha8Rng) -> CrossSpectrum {
    let mut bins = vec![CMatrix::zeros(n_c, n_c); n];
    for j in 0..=n / 2 {
        let mut b = random_hpd(n_c, 0.2, rng);
        if (n - j) % n == j {
            b = b.map(|v| Complex64::new(v.re, 0.0));
        }
        bins[j] = b;
    }
    for j in n / 2 + 1..n {
        bins[j] = bins[n - j].map(|v| v.conj());
    }
    CrossSpectrum::new(bins).unwrap()
}

/// Per-bin positive-definite matrices `B_j` whose blocks are circulants with
/// lags in `-L..=L`, `L = ⌈f/2⌉ - 1`: the spectra of a real filter bank that
/// fits in `f` taps, so `B` is its own band-limited projection.
pub fn banded_map(n_c: usize, n: usize, f: usize, rng: &mut ChaCha8Rng) -> Vec<CMatrix> {
    let l = (f - f / 2) as isize - 1;
    let mut lags: Vec<(isize, RMatrix)> = Vec::new();
    for d in 0..=l {
        let c = RMatrix::from_fn(n_c, n_c, |_, _| 0.3 * normal(rng));
        if d == 0 {
            lags.push((0, herm::hermitian_part(&c)));
        } else {
            lags.push((-d, c.transpose()));
            lags.push((d, c));
        }
    }
    let mut bins: Vec<CMatrix> = (0..n)
        .map(|j| {
            let mut m = CMatrix::zeros(n_c, n_c);
            for (d, c) in &lags {
                let w = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * (*d as f64) * j as f64 / n as f64);
                m += c.map(|v| Complex64::new(v, 0.0)) * w;
            }
            herm::hermitian_part(&m)
        })
        .collect();
    // shift by a multiple of the identity (lag 0) so every bin is positive definite
    let lowest = bins
        .iter()
        .map(|b| herm::herm_eig(b).unwrap().min())
        .fold(f64::INFINITY, f64::min);
    let shift = 0.5 - lowest.min(0.0);
    for b in &mut bins {
        for i in 0..n_c {
            b[(i, i)] += shift;
        }
    }
    bins
}

/// `B_j Q_j B_j` for every bin.
pub fn push_spectrum(q: &CrossSpectrum, b: &[CMatrix]) -> CrossSpectrum {
    let bins = q
        .bins()
        .iter()
        .zip(b)
        .map(|(q, b)| herm::hermitian_part(&(b * q * b)))
        .collect();
    monge_align::spectral::enforce_hermitian_symmetry(&CrossSpectrum::from_raw_bins(bins).unwrap())
}

pub fn rel_l2(a: &Signal, b: &Signal) -> f64 {
    let num: f64 = a.data().iter().zip(b.data()).map(|(x, y)| (x - y).powi(2)).sum();
    let den: f64 = b.data().iter().map(|y| y * y).sum();
    (num / den.max(1e-300)).sqrt()
}

pub fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|f| n % f == 0).collect()
}

/// Spectrum of a random real filter whose lags lie in the support of `f` taps.
pub fn band_limited_spectrum(n: usize, f: usize, r: &mut rand_chacha::ChaCha8Rng) -> Vec<Complex64> {
    let mut a = vec![Complex64::new(0.0, 0.0); n];
    for d in oracle::support(f) {
        a[d.rem_euclid(n as isize) as usize] = Complex64::new(normal(r), 0.0);
    }
    let fm = monge_align::spectral::fourier_matrix(n);
    // q_j = Σ_d a(d) e^{-2iπjd/n}
    (0..n)
        .map(|j| (0..n).map(|d| a[d] * fm[(j, d)] * (n as f64).sqrt()).sum())
        .collect()
}
