//! Spectral and spatial statistics of multichannel signals.
//!
//! Conventions: the unitary Fourier matrix is `(F_n)_{lm} = n^{-1/2} e^{-2iπ(l-1)(m-1)/n}`
//! and a stationary covariance block factors as `Σ_ab = F diag(q_ab) Fᴴ`. A
//! [`CrossSpectrum`] stores the per-frequency matrices `Q_j = [(q_ab)_j]` of that
//! factorization, so `Q_j[a][b]` is the transform of the lagged covariance
//! `E[x_a(t) x_b(t + d)]` at frequency `j`.

use nalgebra::DMatrix;
use ndarray::{Array2, ArrayView1, Axis};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::Plans;
use crate::herm::{self, CMatrix, RMatrix};

/// Floor applied to per-channel PSD values.
pub const PSD_FLOOR: f64 = 1e-300;

/// Tolerance of the conjugate-bin symmetry check in [`CrossSpectrum::new`].
pub const CONJ_SYMMETRY_TOL: f64 = 1e-9;

/// A real multichannel signal, `n_channels × n_samples`.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    data: Array2<f64>,
    sample_rate_hz: Option<f64>,
}

impl Signal {
    pub fn new(data: Array2<f64>) -> Result<Self> {
        if data.nrows() == 0 || data.ncols() == 0 {
            return Err(Error::InvalidSignal(format!(
                "signal must have at least one channel and one sample, got {}x{}",
                data.nrows(),
                data.ncols()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        // row-major storage keeps every channel contiguous
        let data = if data.is_standard_layout() {
            data
        } else {
            data.as_standard_layout().into_owned()
        };
        Ok(Signal {
            data,
            sample_rate_hz: None,
        })
    }

    pub fn with_sample_rate(mut self, hz: Option<f64>) -> Result<Self> {
        if let Some(r) = hz {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::InvalidSignal(format!("sample rate must be positive, got {r}")));
            }
        }
        self.sample_rate_hz = hz;
        Ok(self)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n_c = rows.len();
        let n_l = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_l) {
            return Err(Error::InvalidSignal("ragged channel rows".into()));
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        let data = Array2::from_shape_vec((n_c, n_l), flat)
            .map_err(|e| Error::InvalidSignal(e.to_string()))?;
        Signal::new(data)
    }

    pub fn n_channels(&self) -> usize {
        self.data.nrows()
    }

    pub fn n_samples(&self) -> usize {
        self.data.ncols()
    }

    pub fn sample_rate_hz(&self) -> Option<f64> {
        self.sample_rate_hz
    }

    pub fn data(&self) -> &Array2<f64> {
        &self.data
    }

    pub fn into_data(self) -> Array2<f64> {
        self.data
    }

    pub fn channel(&self, c: usize) -> ArrayView1<'_, f64> {
        self.data.row(c)
    }

    /// Mean of each channel.
    pub fn channel_means(&self) -> Vec<f64> {
        self.data.rows().into_iter().map(|row| row.sum() / row.len() as f64).collect()
    }

    /// Copy with each channel's mean removed.
    pub fn centered(&self) -> Signal {
        let mut data = self.data.clone();
        for (mut row, mean) in data.axis_iter_mut(Axis(0)).zip(self.channel_means()) {
            row.mapv_inplace(|v| v - mean);
        }
        Signal {
            data,
            sample_rate_hz: self.sample_rate_hz,
        }
    }

    /// Copy with each channel scaled to zero mean and unit variance.
    /// Constant channels are only centered.
    pub fn zscored(&self) -> Signal {
        let mut out = self.centered();
        for mut row in out.data.axis_iter_mut(Axis(0)) {
            let sd = (row.iter().map(|v| v * v).sum::<f64>() / row.len() as f64).sqrt();
            if sd > 0.0 {
                row.mapv_inplace(|v| v / sd);
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowKind {
    Hann,
    #[serde(alias = "rect")]
    Rectangular,
}

impl std::str::FromStr for WindowKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hann" => Ok(WindowKind::Hann),
            "rect" | "rectangular" => Ok(WindowKind::Rectangular),
            other => Err(Error::InvalidParameter(format!("unknown window kind {other:?}"))),
        }
    }
}

/// Welch window: shape, length `f` and hop between window starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub kind: WindowKind,
    pub length: usize,
    pub hop: usize,
}

impl WindowSpec {
    pub fn new(kind: WindowKind, length: usize, hop: usize) -> Result<Self> {
        let spec = WindowSpec { kind, length, hop };
        spec.validate()?;
        Ok(spec)
    }

    /// Hann window with half-window overlap.
    pub fn hann(length: usize) -> Result<Self> {
        Self::new(WindowKind::Hann, length, (length / 2).max(1))
    }

    pub fn rectangular(length: usize, hop: usize) -> Result<Self> {
        Self::new(WindowKind::Rectangular, length, hop)
    }

    pub fn validate(&self) -> Result<()> {
        if self.length == 0 {
            return Err(Error::InvalidParameter("window length must be positive".into()));
        }
        if self.hop == 0 || self.hop > self.length {
            return Err(Error::InvalidParameter(format!(
                "hop must lie in [1, {}], got {}",
                self.length, self.hop
            )));
        }
        Ok(())
    }

    /// Window weights with unit Euclidean norm.
    pub fn weights(&self) -> Vec<f64> {
        match self.kind {
            WindowKind::Hann => hann_window(self.length),
            WindowKind::Rectangular => rectangular_window(self.length),
        }
    }

    /// Number of full windows that fit in `n_samples`; trailing samples are dropped.
    pub fn n_windows(&self, n_samples: usize) -> Result<usize> {
        if n_samples < self.length {
            return Err(Error::SignalTooShort {
                window: self.length,
                samples: n_samples,
            });
        }
        Ok((n_samples - self.length) / self.hop + 1)
    }
}

fn unit_norm(mut w: Vec<f64>) -> Vec<f64> {
    let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
    w.iter_mut().for_each(|v| *v /= norm);
    w
}

/// Symmetric Hann window `0.5 (1 - cos(2πk / (f-1)))`, scaled to unit norm.
///
/// For `f = 2` the symmetric Hann window vanishes identically; a flat window is
/// returned instead.
pub fn hann_window(f: usize) -> Vec<f64> {
    assert!(f >= 1, "window length must be positive");
    if f <= 2 {
        return rectangular_window(f);
    }
    let denom = (f - 1) as f64;
    unit_norm(
        (0..f)
            .map(|k| 0.5 * (1.0 - (2.0 * std::f64::consts::PI * k as f64 / denom).cos()))
            .collect(),
    )
}

pub fn rectangular_window(f: usize) -> Vec<f64> {
    vec![1.0 / (f as f64).sqrt(); f]
}

/// The unitary Fourier matrix `F_n`.
pub fn fourier_matrix(n: usize) -> CMatrix {
    let scale = 1.0 / (n as f64).sqrt();
    CMatrix::from_fn(n, n, |l, m| {
        // reduce the exponent mod n before evaluating to keep the phases exact
        let k = (l * m) % n;
        Complex64::from_polar(scale, -2.0 * std::f64::consts::PI * k as f64 / n as f64)
    })
}

/// `f` Hermitian positive semi-definite cross-spectral matrices, one per frequency bin.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossSpectrum {
    n_channels: usize,
    bins: Vec<CMatrix>,
}

impl CrossSpectrum {
    /// Builds a spectrum after checking Hermitian bins, conjugate-bin symmetry
    /// and positive semi-definiteness.
    pub fn new(bins: Vec<CMatrix>) -> Result<Self> {
        let cs = Self::from_raw_bins(bins)?;
        cs.validate()?;
        Ok(cs)
    }

    /// Shape checks only; use [`enforce_hermitian_symmetry`] to repair the rest.
    pub fn from_raw_bins(bins: Vec<CMatrix>) -> Result<Self> {
        let n_channels = bins
            .first()
            .ok_or_else(|| Error::InvalidSpectrum("no frequency bins".into()))?
            .nrows();
        if n_channels == 0 {
            return Err(Error::InvalidSpectrum("zero channels".into()));
        }
        if let Some(bad) = bins.iter().find(|b| b.shape() != (n_channels, n_channels)) {
            return Err(Error::InvalidSpectrum(format!(
                "bin of shape {:?}, expected {n_channels}x{n_channels}",
                bad.shape()
            )));
        }
        Ok(CrossSpectrum { n_channels, bins })
    }

    pub(crate) fn from_bins_unchecked(bins: Vec<CMatrix>) -> Self {
        let n_channels = bins[0].nrows();
        CrossSpectrum { n_channels, bins }
    }

    pub fn validate(&self) -> Result<()> {
        let f = self.f();
        for (j, b) in self.bins.iter().enumerate() {
            herm::check_hermitian(b)
                .map_err(|e| Error::InvalidSpectrum(format!("bin {j}: {e}")))?;
            let mirror = &self.bins[(f - j) % f];
            let scale = herm::frobenius(b).max(1.0);
            let gap = b
                .iter()
                .zip(mirror.iter())
                .map(|(x, y)| (x - y.conj()).norm())
                .fold(0.0, f64::max);
            if gap > CONJ_SYMMETRY_TOL * scale {
                return Err(Error::InvalidSpectrum(format!(
                    "bin {j} is not the conjugate of bin {} (gap {gap:e})",
                    (f - j) % f
                )));
            }
            let e = herm::herm_eig(b)?;
            if e.min() < -herm::NEG_EIG_TOL * e.max().max(0.0) {
                return Err(Error::InvalidSpectrum(format!(
                    "bin {j} has negative eigenvalue {:e}",
                    e.min()
                )));
            }
        }
        Ok(())
    }

    pub fn f(&self) -> usize {
        self.bins.len()
    }

    pub fn n_channels(&self) -> usize {
        self.n_channels
    }

    pub fn bins(&self) -> &[CMatrix] {
        &self.bins
    }

    pub fn bin(&self, j: usize) -> &CMatrix {
        &self.bins[j]
    }

    pub fn into_bins(self) -> Vec<CMatrix> {
        self.bins
    }

    /// Series of entry `(a, b)` across the bins.
    pub fn entry_series(&self, a: usize, b: usize) -> Vec<Complex64> {
        self.bins.iter().map(|m| m[(a, b)]).collect()
    }

    /// Per-channel PSDs (the real diagonal of every bin).
    pub fn diagonal(&self) -> ChannelPsd {
        let values = Array2::from_shape_fn((self.n_channels, self.f()), |(c, j)| {
            self.bins[j][(c, c)].re
        });
        ChannelPsd { values }
    }

    pub fn scaled(&self, s: f64) -> CrossSpectrum {
        CrossSpectrum {
            n_channels: self.n_channels,
            bins: self.bins.iter().map(|b| b * Complex64::new(s, 0.0)).collect(),
        }
    }
}

/// Per-channel power spectral densities, `n_channels × f`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelPsd {
    values: Array2<f64>,
}

impl ChannelPsd {
    pub fn new(values: Array2<f64>) -> Result<Self> {
        if values.nrows() == 0 || values.ncols() == 0 {
            return Err(Error::InvalidSpectrum("empty PSD".into()));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidSpectrum("PSD values must be finite and nonnegative".into()));
        }
        let f = values.ncols();
        for row in values.rows() {
            for j in 0..f {
                let (a, b) = (row[j], row[(f - j) % f]);
                if (a - b).abs() > CONJ_SYMMETRY_TOL * a.abs().max(b.abs()).max(1.0) {
                    return Err(Error::InvalidSpectrum(format!(
                        "PSD is not symmetric between bins {j} and {}",
                        (f - j) % f
                    )));
                }
            }
        }
        Ok(ChannelPsd { values })
    }

    pub(crate) fn from_values_unchecked(values: Array2<f64>) -> Self {
        ChannelPsd { values }
    }

    pub fn n_channels(&self) -> usize {
        self.values.nrows()
    }

    pub fn f(&self) -> usize {
        self.values.ncols()
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn channel(&self, c: usize) -> ArrayView1<'_, f64> {
        self.values.row(c)
    }

    /// Every `(n/f)`-th bin of each channel.
    pub fn subsample(&self, f: usize) -> Result<ChannelPsd> {
        let n = self.f();
        if f == 0 || n % f != 0 {
            return Err(Error::NotDivisible { len: n, f });
        }
        let stride = n / f;
        Ok(ChannelPsd {
            values: Array2::from_shape_fn((self.n_channels(), f), |(c, j)| {
                self.values[(c, j * stride)]
            }),
        })
    }
}

/// Spatial covariance `Ξ = X Xᵀ / n` of a (centered) signal.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialCov {
    matrix: RMatrix,
}

impl SpatialCov {
    pub fn new(matrix: RMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::InvalidSpectrum("spatial covariance must be square".into()));
        }
        herm::check_hermitian(&matrix)?;
        let e = herm::herm_eig(&matrix)?;
        if e.min() < -herm::NEG_EIG_TOL * e.max().max(0.0) {
            return Err(Error::NegativeEigenvalue(e.min()));
        }
        Ok(SpatialCov { matrix })
    }

    pub(crate) fn from_matrix_unchecked(matrix: RMatrix) -> Self {
        SpatialCov { matrix }
    }

    pub fn n_channels(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &RMatrix {
        &self.matrix
    }
}

/// Windowed short-time transforms `x̂_{c,l,j} = Σ_k w_k e^{-2iπjk/f} x_{c,l+k}` for
/// the bins `0..=f/2`, visited window by window. `offsets[c]` is subtracted
/// from channel `c` on the fly, which equals estimating on a centered copy
/// bit for bit without materializing it.
fn for_each_window(
    sig: &Signal,
    win: &WindowSpec,
    offsets: Option<&[f64]>,
    mut visit: impl FnMut(&[Vec<Complex64>]),
) -> Result<usize> {
    win.validate()?;
    let f = win.length;
    let n_w = win.n_windows(sig.n_samples())?;
    let w = win.weights();
    let plans = Plans::new(f);
    let mut coeffs = vec![vec![Complex64::new(0.0, 0.0); f]; sig.n_channels()];
    for t in 0..n_w {
        let start = t * win.hop;
        for (c, buf) in coeffs.iter_mut().enumerate() {
            let row = sig.channel(c);
            let row = &row.as_slice().expect("channels are contiguous")[start..start + f];
            let off = offsets.map_or(0.0, |o| o[c]);
            for ((b, &wk), &x) in buf.iter_mut().zip(&w).zip(row) {
                *b = Complex64::new(wk * (x - off), 0.0);
            }
            plans.forward.process(buf);
        }
        visit(&coeffs);
    }
    Ok(n_w)
}

/// Welch cross-spectral density.
///
/// `bins[j] = (1/n_w) Σ_windows conj(x̂_j) x̂_jᵀ`, followed by
/// [`enforce_hermitian_symmetry`], shrinkage by `eps` and clipping of negative
/// eigenvalues. The conjugate in front keeps the bins in the `F diag(q) Fᴴ`
/// convention of the module docs.
pub fn welch_cross_psd(sig: &Signal, win: &WindowSpec, eps: f64) -> Result<CrossSpectrum> {
    welch_cross_psd_about(sig, win, eps, None)
}

pub(crate) fn welch_cross_psd_about(
    sig: &Signal,
    win: &WindowSpec,
    eps: f64,
    offsets: Option<&[f64]>,
) -> Result<CrossSpectrum> {
    let n_c = sig.n_channels();
    let f = win.length;
    let half = f / 2;
    let mut acc = vec![CMatrix::zeros(n_c, n_c); half + 1];
    let n_w = for_each_window(sig, win, offsets, |coeffs| {
        for (j, m) in acc.iter_mut().enumerate() {
            for a in 0..n_c {
                let xa = coeffs[a][j].conj();
                for b in a..n_c {
                    m[(a, b)] += xa * coeffs[b][j];
                }
            }
        }
    })?;
    let scale = 1.0 / n_w as f64;
    let mut bins = vec![CMatrix::zeros(n_c, n_c); f];
    for (j, m) in acc.into_iter().enumerate() {
        let mut full = CMatrix::zeros(n_c, n_c);
        for a in 0..n_c {
            for b in a..n_c {
                full[(a, b)] = m[(a, b)] * scale;
                full[(b, a)] = full[(a, b)].conj();
            }
        }
        bins[j] = full;
    }
    for j in half + 1..f {
        bins[j] = bins[f - j].map(|v| v.conj());
    }
    regularize_spectrum(CrossSpectrum::from_bins_unchecked(bins), eps)
}

/// Symmetrize, shrink each bin by `eps`, then clip negative eigenvalues.
pub(crate) fn regularize_spectrum(cs: CrossSpectrum, eps: f64) -> Result<CrossSpectrum> {
    let cs = enforce_hermitian_symmetry(&cs);
    let f = cs.f();
    let mut bins = cs.into_bins();
    for j in 0..=f / 2 {
        bins[j] = herm::clip_psd(&herm::shrink(&bins[j], eps))?;
    }
    for j in f / 2 + 1..f {
        bins[j] = bins[f - j].map(|v| v.conj());
    }
    Ok(enforce_hermitian_symmetry(&CrossSpectrum::from_bins_unchecked(bins)))
}

/// Welch PSD of each channel: the diagonal of [`welch_cross_psd`], computed
/// channel by channel and floored at [`PSD_FLOOR`].
pub fn welch_psd(sig: &Signal, win: &WindowSpec) -> Result<ChannelPsd> {
    welch_psd_about(sig, win, None)
}

pub(crate) fn welch_psd_about(sig: &Signal, win: &WindowSpec, offsets: Option<&[f64]>) -> Result<ChannelPsd> {
    let n_c = sig.n_channels();
    let f = win.length;
    let half = f / 2;
    let mut acc = Array2::<f64>::zeros((n_c, f));
    let n_w = for_each_window(sig, win, offsets, |coeffs| {
        for c in 0..n_c {
            for j in 0..=half {
                acc[(c, j)] += coeffs[c][j].norm_sqr();
            }
        }
    })?;
    let scale = 1.0 / n_w as f64;
    for c in 0..n_c {
        for j in 0..=half {
            acc[(c, j)] = (acc[(c, j)] * scale).max(PSD_FLOOR);
        }
        for j in half + 1..f {
            acc[(c, j)] = acc[(c, f - j)];
        }
    }
    Ok(ChannelPsd::from_values_unchecked(acc))
}

/// Empirical spatial covariance `X Xᵀ / n_samples`, shrunk by `eps`.
///
/// The signal is used as given; callers that need centering do it first.
pub fn spatial_cov(sig: &Signal, eps: f64) -> SpatialCov {
    let x = sig.data();
    let n_c = x.nrows();
    let inv_n = 1.0 / x.ncols() as f64;
    let mut m = RMatrix::zeros(n_c, n_c);
    for a in 0..n_c {
        for b in a..n_c {
            let v = x.row(a).dot(&x.row(b)) * inv_n;
            m[(a, b)] = v;
            m[(b, a)] = v;
        }
    }
    SpatialCov::from_matrix_unchecked(herm::shrink(&m, eps))
}

/// Keeps every `(n/f)`-th element starting with the first.
pub fn subsample_gf<T: Clone>(q: &[T], f: usize) -> Result<Vec<T>> {
    let n = q.len();
    if f == 0 || n % f != 0 {
        return Err(Error::NotDivisible { len: n, f });
    }
    Ok(q.iter().step_by(n / f).cloned().collect())
}

/// [`subsample_gf`] applied to the bins of a cross-spectrum.
pub fn subsample_gf_blocks(q: &CrossSpectrum, f: usize) -> Result<CrossSpectrum> {
    Ok(CrossSpectrum::from_bins_unchecked(subsample_gf(q.bins(), f)?))
}

/// Makes every bin exactly Hermitian and every pair of mirrored bins exactly
/// conjugate by averaging.
pub fn enforce_hermitian_symmetry(cs: &CrossSpectrum) -> CrossSpectrum {
    let f = cs.f();
    let herm: Vec<CMatrix> = cs.bins().iter().map(herm::hermitian_part).collect();
    let half = Complex64::new(0.5, 0.0);
    let bins = (0..f)
        .map(|j| {
            let mirror = &herm[(f - j) % f];
            DMatrix::from_fn(cs.n_channels(), cs.n_channels(), |a, b| {
                (herm[j][(a, b)] + mirror[(a, b)].conj()) * half
            })
        })
        .collect();
    CrossSpectrum::from_bins_unchecked(bins)
}

/// Real signal of the given rows, for tests and examples.
pub fn signal_from_fn(n_channels: usize, n_samples: usize, mut g: impl FnMut(usize, usize) -> f64) -> Signal {
    Signal::new(Array2::from_shape_fn((n_channels, n_samples), |(c, t)| g(c, t)))
        .expect("generated signal must be finite")
}
