//! Desk-scale experiments: the bias-variance trade-off of Welch estimates
//! versus the filter size, and alignment of directionally blurred images.

use std::fs;
use std::path::Path;

use ndarray::Array2;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::image2d::{self, Image};
use crate::spectral::{self, WindowSpec};
use crate::synth::{self, Seed};

#[derive(Debug, Clone, PartialEq)]
pub struct BiasVarParams {
    pub gamma: f64,
    pub rho: f64,
    pub n_samples: usize,
    pub filter_sizes: Vec<usize>,
    pub runs: usize,
    pub seed: Seed,
}

/// Error of the Welch PSD against the subsampled true PSD, for one filter size.
///
/// The `sup_*` columns take the worst frequency bin; `mean_bin_std` averages
/// the Monte-Carlo standard deviation over bins `0..=f/2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BiasVarRow {
    pub f: usize,
    pub sup_bin_bias: f64,
    pub sup_bin_std: f64,
    pub sup_bin_rmse: f64,
    pub mean_bin_std: f64,
}

/// Monte-Carlo sweep over filter sizes on exponentially correlated noise.
///
/// Each run draws one signal (seed derived from the run index) and estimates
/// its PSD at every filter size with a Hann window and half overlap.
pub fn biasvar(p: &BiasVarParams) -> Result<Vec<BiasVarRow>> {
    if p.runs < 2 {
        return Err(Error::InvalidParameter("need at least two runs".into()));
    }
    if p.filter_sizes.is_empty() {
        return Err(Error::InvalidParameter("no filter sizes".into()));
    }
    let spec = synth::expcorr_spec(p.gamma, p.rho, 1, p.n_samples)?;
    let truth_full = synth::expcorr_psd(p.gamma, p.rho, p.n_samples);
    let mut truths = Vec::new();
    let mut windows = Vec::new();
    for &f in &p.filter_sizes {
        truths.push(spectral::subsample_gf(&truth_full, f)?);
        windows.push(WindowSpec::hann(f)?);
        if f > p.n_samples {
            return Err(Error::SignalTooShort {
                window: f,
                samples: p.n_samples,
            });
        }
    }
    let mut sums: Vec<Vec<f64>> = p.filter_sizes.iter().map(|&f| vec![0.0; f]).collect();
    let mut sq: Vec<Vec<f64>> = sums.clone();
    for run in 0..p.runs {
        let sig = synth::gen_stationary(&spec, p.seed.derive(run as u64))?;
        for (i, win) in windows.iter().enumerate() {
            let est = spectral::welch_psd(&sig, win)?;
            for (j, &v) in est.channel(0).iter().enumerate() {
                let e = v - truths[i][j];
                sums[i][j] += e;
                sq[i][j] += e * e;
            }
        }
    }
    let r = p.runs as f64;
    Ok(p.filter_sizes
        .iter()
        .enumerate()
        .map(|(i, &f)| {
            let mut row = BiasVarRow {
                f,
                sup_bin_bias: 0.0,
                sup_bin_std: 0.0,
                sup_bin_rmse: 0.0,
                mean_bin_std: 0.0,
            };
            for j in 0..f {
                let mean = sums[i][j] / r;
                let mse = sq[i][j] / r;
                let var = ((mse - mean * mean) * r / (r - 1.0)).max(0.0);
                row.sup_bin_bias = row.sup_bin_bias.max(mean.abs());
                row.sup_bin_std = row.sup_bin_std.max(var.sqrt());
                row.sup_bin_rmse = row.sup_bin_rmse.max(mse.sqrt());
                if j <= f / 2 {
                    row.mean_bin_std += var.sqrt() / (f / 2 + 1) as f64;
                }
            }
            row
        })
        .collect())
}

pub fn biasvar_csv(rows: &[BiasVarRow]) -> String {
    let mut out = String::from("f,sup_bin_bias,sup_bin_std,sup_bin_rmse\n");
    for r in rows {
        out.push_str(&format!("{},{:?},{:?},{:?}\n", r.f, r.sup_bin_bias, r.sup_bin_std, r.sup_bin_rmse));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlurParams {
    pub source_angles: Vec<f64>,
    pub target_angles: Vec<f64>,
    pub kernel_len: usize,
    pub n_images: usize,
    pub size: usize,
    pub seed: Seed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlurDomainReport {
    pub angle_deg: f64,
    pub source: bool,
    pub gap_before: f64,
    pub gap_after: f64,
    /// Gaps on the second half of the images, aligned with a PSD estimated on
    /// the first half only. `None` with fewer than two images.
    pub heldout: Option<(f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct BlurOutcome {
    pub domains: Vec<BlurDomainReport>,
    pub barycenter_corr: Image,
    /// Correlation images before and after alignment, in the order of `domains`.
    pub corr_before: Vec<Image>,
    pub corr_after: Vec<Image>,
}

/// Blurs white-noise textures in several directions, fits the 2-D barycenter
/// on the source directions and aligns every domain (sources and targets).
///
/// Domain `k` (sources first, then targets) blurs its own batch of textures,
/// drawn from `seed.derive(k)`.
pub fn blur2d(p: &BlurParams) -> Result<BlurOutcome> {
    if p.source_angles.is_empty() {
        return Err(Error::InvalidParameter("need at least one source angle".into()));
    }
    if p.n_images == 0 || p.size == 0 {
        return Err(Error::InvalidParameter("need at least one image of positive size".into()));
    }
    let all: Vec<(f64, bool)> = p
        .source_angles
        .iter()
        .map(|&a| (a, true))
        .chain(p.target_angles.iter().map(|&a| (a, false)))
        .collect();
    let mut domains = Vec::with_capacity(all.len());
    for (k, &(angle, _)) in all.iter().enumerate() {
        let base = synth::texture_images(p.n_images, p.size, p.size, p.seed.derive(k as u64));
        domains.push(synth::gen_blur_domain(&base, angle, p.kernel_len)?);
    }
    let n_src = p.source_angles.len();
    let model = image2d::tma2d_fit(&domains[..n_src])?;
    let barycenter_corr = image2d::correlation_image(&model.barycenter);

    let mut reports = Vec::new();
    let mut corr_before = Vec::new();
    let mut corr_after = Vec::new();
    for (images, &(angle, source)) in domains.iter().zip(&all) {
        let before = image2d::correlation_image(&image2d::psd2d(images)?);
        let aligned = image2d::tma2d_align_domain(&model, images)?;
        let after = image2d::correlation_image(&image2d::psd2d(&aligned)?);
        let heldout = if images.len() >= 2 {
            let (fit_half, eval_half) = images.split_at(images.len() / 2);
            let psd = image2d::psd2d(fit_half)?;
            let aligned = eval_half
                .iter()
                .map(|img| image2d::tma2d_apply(&model, &psd, img))
                .collect::<Result<Vec<_>>>()?;
            let b = image2d::correlation_image(&image2d::psd2d(eval_half)?);
            let a = image2d::correlation_image(&image2d::psd2d(&aligned)?);
            Some((
                image2d::relative_gap(&b, &barycenter_corr),
                image2d::relative_gap(&a, &barycenter_corr),
            ))
        } else {
            None
        };
        reports.push(BlurDomainReport {
            angle_deg: angle,
            source,
            gap_before: image2d::relative_gap(&before, &barycenter_corr),
            gap_after: image2d::relative_gap(&after, &barycenter_corr),
            heldout,
        });
        corr_before.push(before);
        corr_after.push(after);
    }
    Ok(BlurOutcome {
        domains: reports,
        barycenter_corr,
        corr_before,
        corr_after,
    })
}

/// Writes an image as binary 8-bit PGM, scaled linearly from its min to its max.
pub fn write_pgm(path: impl AsRef<Path>, img: &Array2<f64>) -> Result<()> {
    let path = path.as_ref();
    let (h, w) = img.dim();
    let lo = img.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = img.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let mut bytes = format!("P5\n{w} {h}\n255\n").into_bytes();
    bytes.extend(img.iter().map(|&v| (255.0 * (v - lo) / span).round() as u8));
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn white_noise_has_no_bias() {
        let rows = biasvar(&BiasVarParams {
            gamma: 1.0,
            rho: 0.0,
            n_samples: 512,
            filter_sizes: vec![4, 16, 64],
            runs: 100,
            seed: Seed(5),
        })
        .unwrap();
        for r in &rows {
            // bias is pure Monte-Carlo noise: a few standard errors at most
            assert!(r.sup_bin_bias < 5.0 * r.sup_bin_std / 10.0, "{r:?}");
        }
    }

    #[test]
    fn same_angle_target_has_no_gap() {
        let out = blur2d(&BlurParams {
            source_angles: vec![30.0],
            target_angles: vec![30.0],
            kernel_len: 5,
            n_images: 20,
            size: 16,
            seed: Seed(1),
        })
        .unwrap();
        for d in &out.domains {
            assert!(d.gap_after < 1e-8, "{d:?}");
        }
    }
}
