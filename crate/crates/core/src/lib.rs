//! Monge alignment of multivariate stationary signals.
//!
//! Each domain (subject, session, device, ...) is summarized by second-order
//! statistics: full cross-spectra ([`Method::Stma`]), per-channel PSDs
//! ([`Method::Tma`]) or a spatial covariance ([`Method::Sma`]). Training
//! computes the Bures-Wasserstein barycenter of the source domains; aligning a
//! domain, seen or unseen, builds the Monge map from its statistics to the
//! barycenter and applies it as a bank of short real convolution filters.
//!
//! ```no_run
//! use monge_align::{fit, transform, BarycenterConfig, Method, WindowSpec};
//! # fn sources() -> Vec<monge_align::Signal> { unimplemented!() }
//! # fn target() -> monge_align::Signal { unimplemented!() }
//! let win = WindowSpec::hann(64)?;
//! let model = fit(Method::Tma, &sources(), &win, 1e-10, &BarycenterConfig::default())?;
//! let aligned = transform(&model, &target())?;
//! # Ok::<(), monge_align::Error>(())
//! ```

pub mod align;
pub mod commands;
pub mod error;
pub mod experiments;
mod fft;
pub mod herm;
pub mod image2d;
pub mod io;
pub mod monge;
pub mod spectral;
pub mod synth;

pub use align::{
    apply, apply_with, build_filters, build_filters_with, estimate, fit, from_statistics, statistics_distance,
    transform, transform_with, AlignmentModel, Boundary, FilterBank, Method, Statistics, TransformOptions,
};
pub use error::{Error, Result};
pub use monge::{barycenter_fixed_point, monge_map, BarycenterConfig};
pub use spectral::{ChannelPsd, CrossSpectrum, Signal, SpatialCov, WindowKind, WindowSpec};
pub use synth::Seed;
