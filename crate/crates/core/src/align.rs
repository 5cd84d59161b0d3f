//! Monge alignment models and the filter banks that realize them.
//!
//! A model holds only the barycenter statistics and the estimation settings.
//! Aligning a domain estimates that domain's statistics with the same settings,
//! turns the per-bin (or per-channel, or spatial) Monge maps into real
//! convolution filters of length `f`, and applies them by circular convolution.

use std::fmt;

use ndarray::{Array2, Array3, Axis};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::Plans;
use crate::herm::{self, CMatrix, RMatrix};
use crate::monge::{self, BarycenterConfig};
use crate::spectral::{self, ChannelPsd, CrossSpectrum, Signal, SpatialCov, WindowSpec};

/// Version of the persisted model layout.
pub const FORMAT_VERSION: u32 = 1;

/// Default shrinkage applied to estimated statistics.
pub const DEFAULT_EPS: f64 = 1e-10;

/// Default cap on the gain of a single frequency bin.
pub const DEFAULT_MAX_GAIN: f64 = 1e6;

/// Relative imaginary residue above which a filter or output is rejected.
pub const IMAG_RESIDUE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Spatio-temporal: full cross-spectra.
    Stma,
    /// Temporal: per-channel PSDs.
    Tma,
    /// Spatial: covariance across channels only.
    Sma,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Stma => "stma",
            Method::Tma => "tma",
            Method::Sma => "sma",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stma" => Ok(Method::Stma),
            "tma" => Ok(Method::Tma),
            "sma" => Ok(Method::Sma),
            other => Err(Error::InvalidParameter(format!("unknown method {other:?}"))),
        }
    }
}

/// Second-order statistics of one domain (or of the barycenter).
#[derive(Debug, Clone, PartialEq)]
pub enum Statistics {
    CrossSpectrum(CrossSpectrum),
    ChannelPsd(ChannelPsd),
    Spatial(SpatialCov),
}

impl Statistics {
    pub fn method(&self) -> Method {
        match self {
            Statistics::CrossSpectrum(_) => Method::Stma,
            Statistics::ChannelPsd(_) => Method::Tma,
            Statistics::Spatial(_) => Method::Sma,
        }
    }

    pub fn n_channels(&self) -> usize {
        match self {
            Statistics::CrossSpectrum(c) => c.n_channels(),
            Statistics::ChannelPsd(p) => p.n_channels(),
            Statistics::Spatial(s) => s.n_channels(),
        }
    }

    /// Number of frequency bins (1 for spatial statistics).
    pub fn f(&self) -> usize {
        match self {
            Statistics::CrossSpectrum(c) => c.f(),
            Statistics::ChannelPsd(p) => p.f(),
            Statistics::Spatial(_) => 1,
        }
    }
}

/// Estimates the statistics used by `method` from a signal taken as is.
pub fn estimate(method: Method, sig: &Signal, win: &WindowSpec, eps: f64) -> Result<Statistics> {
    Ok(match method {
        Method::Stma => Statistics::CrossSpectrum(spectral::welch_cross_psd(sig, win, eps)?),
        Method::Tma => Statistics::ChannelPsd(spectral::welch_psd(sig, win)?),
        Method::Sma => Statistics::Spatial(spectral::spatial_cov(sig, eps)),
    })
}

/// Same as `estimate` on `sig.centered()`, without copying the signal for the
/// spectral methods.
fn estimate_centered(method: Method, sig: &Signal, win: &WindowSpec, eps: f64) -> Result<Statistics> {
    let means = sig.channel_means();
    Ok(match method {
        Method::Stma => Statistics::CrossSpectrum(spectral::welch_cross_psd_about(sig, win, eps, Some(&means))?),
        Method::Tma => Statistics::ChannelPsd(spectral::welch_psd_about(sig, win, Some(&means))?),
        Method::Sma => Statistics::Spatial(spectral::spatial_cov(&sig.centered(), eps)),
    })
}

/// Barycenter of several domains' statistics, all of the same kind and shape.
pub fn barycenter(stats: &[Statistics], cfg: &BarycenterConfig) -> Result<Statistics> {
    let first = stats.first().ok_or(Error::EmptyInput)?;
    macro_rules! collect {
        ($variant:ident) => {
            stats
                .iter()
                .map(|s| match s {
                    Statistics::$variant(x) => Ok(x.clone()),
                    other => Err(Error::ShapeMismatch(format!(
                        "cannot mix {} and {} statistics",
                        first.method(),
                        other.method()
                    ))),
                })
                .collect::<Result<Vec<_>>>()?
        };
    }
    Ok(match first {
        Statistics::CrossSpectrum(_) => {
            Statistics::CrossSpectrum(monge::crossspectrum_barycenter(&collect!(CrossSpectrum), cfg)?)
        }
        Statistics::ChannelPsd(_) => Statistics::ChannelPsd(monge::temporal_barycenter(&collect!(ChannelPsd))?),
        Statistics::Spatial(_) => Statistics::Spatial(monge::spatial_barycenter(&collect!(Spatial), cfg)?),
    })
}

/// Distance between two statistics of the same kind: the sum over frequency
/// bins of the Bures-Wasserstein distance, or a single distance for spatial
/// covariances. PSDs are treated as diagonal cross-spectra.
pub fn statistics_distance(a: &Statistics, b: &Statistics) -> Result<f64> {
    match (a, b) {
        (Statistics::CrossSpectrum(x), Statistics::CrossSpectrum(y)) => {
            if x.f() != y.f() {
                return Err(Error::ShapeMismatch(format!("f={} vs f={}", x.f(), y.f())));
            }
            x.bins()
                .iter()
                .zip(y.bins())
                .map(|(p, q)| herm::bures_wasserstein_dist(p, q))
                .sum()
        }
        (Statistics::ChannelPsd(x), Statistics::ChannelPsd(y)) => {
            if x.values().dim() != y.values().dim() {
                return Err(Error::ShapeMismatch(format!(
                    "{:?} vs {:?}",
                    x.values().dim(),
                    y.values().dim()
                )));
            }
            Ok(x.values()
                .axis_iter(Axis(1))
                .zip(y.values().axis_iter(Axis(1)))
                .map(|(p, q)| {
                    p.iter()
                        .zip(q.iter())
                        .map(|(u, v)| (u.sqrt() - v.sqrt()).powi(2))
                        .sum::<f64>()
                        .sqrt()
                })
                .sum())
        }
        (Statistics::Spatial(x), Statistics::Spatial(y)) => herm::bures_wasserstein_dist(x.matrix(), y.matrix()),
        _ => Err(Error::ShapeMismatch(format!(
            "cannot compare {} and {} statistics",
            a.method(),
            b.method()
        ))),
    }
}

/// Train-time output: everything needed to align an unseen domain.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentModel {
    pub format_version: u32,
    pub method: Method,
    /// Filter length (1 for spatial alignment).
    pub f: usize,
    pub n_channels: usize,
    pub window: WindowSpec,
    pub eps: f64,
    pub barycenter: Statistics,
}

impl AlignmentModel {
    /// Assembles a model and checks that the pieces agree.
    pub fn new(window: WindowSpec, eps: f64, barycenter: Statistics) -> Result<Self> {
        let model = AlignmentModel {
            format_version: FORMAT_VERSION,
            method: barycenter.method(),
            f: barycenter.f(),
            n_channels: barycenter.n_channels(),
            window,
            eps,
            barycenter,
        };
        model.check()?;
        Ok(model)
    }

    pub fn check(&self) -> Result<()> {
        self.window.validate()?;
        if self.barycenter.method() != self.method {
            return Err(Error::Schema(format!(
                "method {} with {} barycenter",
                self.method,
                self.barycenter.method()
            )));
        }
        if self.barycenter.n_channels() != self.n_channels {
            return Err(Error::Schema(format!(
                "n_channels {} but barycenter has {}",
                self.n_channels,
                self.barycenter.n_channels()
            )));
        }
        if self.barycenter.f() != self.f {
            return Err(Error::Schema(format!("f {} but barycenter has {} bins", self.f, self.barycenter.f())));
        }
        if self.method != Method::Sma && self.window.length != self.f {
            return Err(Error::Schema(format!(
                "window length {} differs from f {}",
                self.window.length, self.f
            )));
        }
        if !(self.eps.is_finite() && (0.0..1.0).contains(&self.eps)) {
            return Err(Error::Schema(format!("eps must lie in [0, 1), got {}", self.eps)));
        }
        Ok(())
    }
}

fn check_channels(signals: &[Signal]) -> Result<usize> {
    let first = signals.first().ok_or(Error::EmptyInput)?;
    let counts: Vec<usize> = signals.iter().map(Signal::n_channels).collect();
    if counts.iter().any(|&c| c != first.n_channels()) {
        return Err(Error::InconsistentChannels(counts));
    }
    Ok(first.n_channels())
}

/// Fits a model on source domains, one signal per domain.
///
/// Each signal is mean-centered per channel before estimation.
pub fn fit(method: Method, signals: &[Signal], win: &WindowSpec, eps: f64, cfg: &BarycenterConfig) -> Result<AlignmentModel> {
    let stats = fit_statistics(method, signals, win, eps)?;
    AlignmentModel::new(*win, eps, barycenter(&stats, cfg)?)
}

/// Per-domain statistics as computed by [`fit`].
pub fn fit_statistics(method: Method, signals: &[Signal], win: &WindowSpec, eps: f64) -> Result<Vec<Statistics>> {
    check_channels(signals)?;
    win.validate()?;
    signals
        .iter()
        .map(|s| estimate_centered(method, s, win, eps))
        .collect()
}

/// How convolution treats the signal edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    /// Periodic extension, matching the circulant model.
    #[default]
    Circular,
    /// Mirror-pad by half a filter on each side, filter, then crop.
    Reflect,
}

impl std::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "circular" => Ok(Boundary::Circular),
            "reflect" => Ok(Boundary::Reflect),
            other => Err(Error::InvalidParameter(format!("unknown boundary mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformOptions {
    /// Largest gain any frequency bin (or spatial direction) may receive.
    pub max_gain: f64,
    pub boundary: Boundary,
}

impl Default for TransformOptions {
    fn default() -> Self {
        TransformOptions {
            max_gain: DEFAULT_MAX_GAIN,
            boundary: Boundary::Circular,
        }
    }
}

/// Real filters realizing a Monge map.
///
/// Tap `k` of a length-`f` filter weights lag `d` with `d ≡ k (mod f)` and
/// `-⌊f/2⌋ ≤ d < ⌈f/2⌉`, i.e. output sample `t` receives `h[k] · x[t + d]`.
#[derive(Debug, Clone, PartialEq)]
pub enum FilterBank {
    /// `taps[[i, j, k]]` feeds input channel `j` into output channel `i`.
    Stma { taps: Array3<f64> },
    /// `taps[[c, k]]` filters channel `c`.
    Tma { taps: Array2<f64> },
    /// Instantaneous mixing matrix.
    Sma { matrix: RMatrix },
}

impl FilterBank {
    pub fn method(&self) -> Method {
        match self {
            FilterBank::Stma { .. } => Method::Stma,
            FilterBank::Tma { .. } => Method::Tma,
            FilterBank::Sma { .. } => Method::Sma,
        }
    }

    pub fn n_channels(&self) -> usize {
        match self {
            FilterBank::Stma { taps } => taps.dim().0,
            FilterBank::Tma { taps } => taps.nrows(),
            FilterBank::Sma { matrix } => matrix.nrows(),
        }
    }

    pub fn f(&self) -> usize {
        match self {
            FilterBank::Stma { taps } => taps.dim().2,
            FilterBank::Tma { taps } => taps.ncols(),
            FilterBank::Sma { .. } => 1,
        }
    }

    /// Bank that leaves every signal unchanged.
    pub fn identity(method: Method, n_channels: usize, f: usize) -> FilterBank {
        match method {
            Method::Stma => {
                let mut taps = Array3::zeros((n_channels, n_channels, f));
                for c in 0..n_channels {
                    taps[[c, c, 0]] = 1.0;
                }
                FilterBank::Stma { taps }
            }
            Method::Tma => {
                let mut taps = Array2::zeros((n_channels, f));
                taps.column_mut(0).fill(1.0);
                FilterBank::Tma { taps }
            }
            Method::Sma => FilterBank::Sma {
                matrix: RMatrix::identity(n_channels, n_channels),
            },
        }
    }

    /// Per-bin transfer matrices on a grid of `n` frequencies: an input with
    /// cross-spectrum `Q_k` leaves the bank with `T_k Q_k T_kᴴ`.
    pub fn transfer(&self, n: usize) -> Result<Vec<CMatrix>> {
        let n_c = self.n_channels();
        if let FilterBank::Sma { matrix } = self {
            let m = matrix.map(|v| Complex64::new(v, 0.0));
            return Ok(vec![m; n]);
        }
        let f = self.f();
        if f > n {
            return Err(Error::FilterLongerThanSignal { filter: f, samples: n });
        }
        let plans = Plans::new(n);
        let mut out = vec![CMatrix::zeros(n_c, n_c); n];
        let mut put = |a: usize, b: usize, h: &[f64]| {
            let spec = embedded_spectrum(h, n, &plans);
            for (k, v) in spec.into_iter().enumerate() {
                out[k][(a, b)] = v;
            }
        };
        match self {
            FilterBank::Stma { taps } => {
                for a in 0..n_c {
                    for b in 0..n_c {
                        put(a, b, taps.slice(ndarray::s![a, b, ..]).as_slice().expect("standard layout"));
                    }
                }
            }
            FilterBank::Tma { taps } => {
                for c in 0..n_c {
                    put(c, c, taps.row(c).as_slice().expect("standard layout"));
                }
            }
            FilterBank::Sma { .. } => unreachable!(),
        }
        Ok(out)
    }
}

/// Unnormalized DFT of the filter embedded on a circle of length `n`.
fn embedded_spectrum(h: &[f64], n: usize, plans: &Plans) -> Vec<Complex64> {
    let f = h.len();
    let mut full = vec![Complex64::new(0.0, 0.0); n];
    let lo = (f / 2) as isize;
    for d in -lo..(f as isize - lo) {
        let k = d.rem_euclid(f as isize) as usize;
        full[d.rem_euclid(n as isize) as usize] = Complex64::new(h[k], 0.0);
    }
    plans.forward.process(&mut full);
    full
}

/// `h = f^-½ F_fᴴ p`, checked to be real.
fn taps_from_spectrum(p: &[Complex64], plans: &Plans) -> Result<Vec<f64>> {
    let f = p.len();
    let mut buf = p.to_vec();
    plans.inverse.process(&mut buf);
    let scale = 1.0 / f as f64;
    let norm = buf.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt() * scale;
    let imag = buf.iter().map(|v| v.im * v.im).sum::<f64>().sqrt() * scale;
    if norm > 0.0 && imag > IMAG_RESIDUE_TOL * norm {
        return Err(Error::ComplexFilter { residue: imag / norm });
    }
    Ok(buf.iter().map(|v| v.re * scale).collect())
}

fn stma_bin_map(domain: &CMatrix, target: &CMatrix, bin: usize, max_gain: f64) -> Result<CMatrix> {
    let map = monge::monge_map(domain, target, 0.0).map_err(|e| match e {
        Error::SingularSource => Error::SingularDomainSpectrum { bin },
        other => other,
    })?;
    let e = herm::herm_eig(&map)?;
    if e.max() > max_gain {
        return Ok(e.map(|l| l.clamp(0.0, max_gain)));
    }
    Ok(map)
}

/// Builds the bank mapping a domain with statistics `domain` onto the
/// barycenter of `model`.
pub fn from_statistics(model: &AlignmentModel, domain: &Statistics, opts: &TransformOptions) -> Result<FilterBank> {
    if domain.n_channels() != model.n_channels {
        return Err(Error::ChannelMismatch {
            expected: model.n_channels,
            found: domain.n_channels(),
        });
    }
    if !(opts.max_gain > 0.0) {
        return Err(Error::InvalidParameter(format!("max_gain must be positive, got {}", opts.max_gain)));
    }
    let n_c = model.n_channels;
    match (&model.barycenter, domain) {
        (Statistics::CrossSpectrum(bary), Statistics::CrossSpectrum(dom)) => {
            let f = bary.f();
            if dom.f() != f {
                return Err(Error::ShapeMismatch(format!("domain has {} bins, model {f}", dom.f())));
            }
            let mut maps: Vec<CMatrix> = Vec::with_capacity(f);
            for j in 0..=f / 2 {
                let mut m = stma_bin_map(dom.bin(j), bary.bin(j), j, opts.max_gain)?;
                if (f - j) % f == j {
                    m = m.map(|v| Complex64::new(v.re, 0.0));
                }
                maps.push(m);
            }
            for j in f / 2 + 1..f {
                maps.push(maps[f - j].map(|v| v.conj()));
            }
            let plans = Plans::new(f);
            let mut taps = Array3::zeros((n_c, n_c, f));
            for a in 0..n_c {
                for b in 0..n_c {
                    let series: Vec<Complex64> = maps.iter().map(|m| m[(a, b)]).collect();
                    let h = taps_from_spectrum(&series, &plans)?;
                    taps.slice_mut(ndarray::s![a, b, ..]).assign(&ndarray::ArrayView1::from(&h));
                }
            }
            Ok(FilterBank::Stma { taps })
        }
        (Statistics::ChannelPsd(bary), Statistics::ChannelPsd(dom)) => {
            let f = bary.f();
            if dom.f() != f {
                return Err(Error::ShapeMismatch(format!("domain has {} bins, model {f}", dom.f())));
            }
            let plans = Plans::new(f);
            let mut taps = Array2::zeros((n_c, f));
            for c in 0..n_c {
                let gains: Vec<Complex64> = (0..f)
                    .map(|j| {
                        let g = (bary.values()[(c, j)] / dom.values()[(c, j)]).sqrt();
                        Complex64::new(if g.is_nan() { 0.0 } else { g.min(opts.max_gain) }, 0.0)
                    })
                    .collect();
                let h = taps_from_spectrum(&gains, &plans)?;
                taps.row_mut(c).assign(&ndarray::ArrayView1::from(&h));
            }
            Ok(FilterBank::Tma { taps })
        }
        (Statistics::Spatial(bary), Statistics::Spatial(dom)) => {
            let map = monge::monge_map(dom.matrix(), bary.matrix(), 0.0).map_err(|e| match e {
                Error::SingularSource => Error::SingularDomainSpectrum { bin: 0 },
                other => other,
            })?;
            let e = herm::herm_eig(&map)?;
            let matrix = if e.max() > opts.max_gain {
                e.map(|l| l.clamp(0.0, opts.max_gain))
            } else {
                map
            };
            Ok(FilterBank::Sma { matrix })
        }
        _ => Err(Error::ShapeMismatch(format!(
            "{} model given {} statistics",
            model.method,
            domain.method()
        ))),
    }
}

fn check_signal(model: &AlignmentModel, sig: &Signal) -> Result<()> {
    if sig.n_channels() != model.n_channels {
        return Err(Error::ChannelMismatch {
            expected: model.n_channels,
            found: sig.n_channels(),
        });
    }
    Ok(())
}

/// Estimates the statistics of `sig` (after centering) with the model's
/// settings and builds the bank mapping them onto the barycenter.
pub fn build_filters(model: &AlignmentModel, sig: &Signal) -> Result<FilterBank> {
    build_filters_with(model, sig, &TransformOptions::default())
}

pub fn build_filters_with(model: &AlignmentModel, sig: &Signal, opts: &TransformOptions) -> Result<FilterBank> {
    check_signal(model, sig)?;
    let stats = estimate_centered(model.method, sig, &model.window, model.eps)?;
    from_statistics(model, &stats, opts)
}

/// Applies a bank with circular boundaries.
pub fn apply(bank: &FilterBank, sig: &Signal) -> Result<Signal> {
    apply_with(bank, sig, Boundary::Circular)
}

pub fn apply_with(bank: &FilterBank, sig: &Signal, boundary: Boundary) -> Result<Signal> {
    if sig.n_channels() != bank.n_channels() {
        return Err(Error::ChannelMismatch {
            expected: bank.n_channels(),
            found: sig.n_channels(),
        });
    }
    let n = sig.n_samples();
    if bank.f() > n {
        return Err(Error::FilterLongerThanSignal {
            filter: bank.f(),
            samples: n,
        });
    }
    let out = match (bank, boundary) {
        (FilterBank::Sma { matrix }, _) => {
            let x = nalgebra::DMatrix::from_row_iterator(sig.n_channels(), n, sig.data().iter().copied());
            let y = matrix * x;
            Array2::from_shape_fn((y.nrows(), n), |(c, t)| y[(c, t)])
        }
        (_, Boundary::Circular) => circular(bank, sig.data())?,
        (_, Boundary::Reflect) => {
            let pad = (bank.f() / 2 + 1).min(n - 1);
            let padded = reflect_pad(sig.data(), pad);
            let y = circular(bank, &padded)?;
            y.slice(ndarray::s![.., pad..pad + n]).to_owned()
        }
    };
    Signal::new(out)?.with_sample_rate(sig.sample_rate_hz())
}

fn reflect_pad(x: &Array2<f64>, pad: usize) -> Array2<f64> {
    let n = x.ncols();
    Array2::from_shape_fn((x.nrows(), n + 2 * pad), |(c, t)| {
        let t = t as isize - pad as isize;
        let src = if t < 0 {
            -t
        } else if t >= n as isize {
            2 * (n as isize - 1) - t
        } else {
            t
        };
        x[(c, src as usize)]
    })
}

/// `y_a = Σ_b h_ab ⊛ x_b` via length-`n` FFTs.
fn circular(bank: &FilterBank, x: &Array2<f64>) -> Result<Array2<f64>> {
    let (n_c, n) = x.dim();
    let plans = Plans::new(n);
    let inputs: Vec<Vec<Complex64>> = x
        .rows()
        .into_iter()
        .map(|r| {
            let mut buf: Vec<Complex64> = r.iter().map(|&v| Complex64::new(v, 0.0)).collect();
            plans.inverse.process(&mut buf);
            buf
        })
        .collect();
    let scale = 1.0 / n as f64;
    let mut out = Array2::zeros((n_c, n));
    let mut acc = vec![Complex64::new(0.0, 0.0); n];
    let (mut re2, mut im2) = (0.0, 0.0);
    for a in 0..n_c {
        acc.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        let mut add = |h: &[f64], b: usize| {
            if h.iter().all(|&v| v == 0.0) {
                return;
            }
            let spec = embedded_spectrum(h, n, &plans);
            for ((o, s), xb) in acc.iter_mut().zip(&spec).zip(&inputs[b]) {
                *o += s * xb;
            }
        };
        match bank {
            FilterBank::Stma { taps } => {
                for b in 0..n_c {
                    add(taps.slice(ndarray::s![a, b, ..]).as_slice().expect("standard layout"), b);
                }
            }
            FilterBank::Tma { taps } => add(taps.row(a).as_slice().expect("standard layout"), a),
            FilterBank::Sma { .. } => unreachable!("spatial banks are applied directly"),
        }
        plans.forward.process(&mut acc);
        for (t, v) in acc.iter().enumerate() {
            out[(a, t)] = v.re * scale;
            re2 += v.re * v.re;
            im2 += v.im * v.im;
        }
    }
    if re2 > 0.0 && im2.sqrt() > IMAG_RESIDUE_TOL * re2.sqrt() {
        return Err(Error::ComplexFilter {
            residue: (im2 / re2).sqrt(),
        });
    }
    Ok(out)
}

/// Aligns a domain with the model: center, estimate, build filters, apply.
pub fn transform(model: &AlignmentModel, sig: &Signal) -> Result<Signal> {
    transform_with(model, sig, &TransformOptions::default())
}

pub fn transform_with(model: &AlignmentModel, sig: &Signal, opts: &TransformOptions) -> Result<Signal> {
    let bank = build_filters_with(model, sig, opts)?;
    apply_with(&bank, &sig.centered(), opts.boundary)
}
