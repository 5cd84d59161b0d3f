//! Monge map between two Gaussians and the Bures-Wasserstein barycenter of
//! three covariances.

use monge_align::herm::{bures_wasserstein_dist, frobenius, RMatrix};
use monge_align::{barycenter_fixed_point, monge_map, BarycenterConfig};

fn main() -> monge_align::Result<()> {
    let source = RMatrix::from_row_slice(2, 2, &[2.0, 0.6, 0.6, 1.0]);
    let target = RMatrix::from_row_slice(2, 2, &[1.0, -0.3, -0.3, 3.0]);

    let a = monge_map(&source, &target, 0.0)?;
    let pushed = &a * &source * &a;
    println!("monge map A =\n{a:.4}");
    println!("|A S A - T|_F = {:.2e}", frobenius(&(pushed - &target)));
    println!("BW(S, T) = {:.4}", bures_wasserstein_dist(&source, &target)?);

    let third = RMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.5]);
    let sigmas = [source, target, third];
    for iters in [1, 5, 50] {
        let bar = barycenter_fixed_point(&sigmas, &BarycenterConfig::iterations(iters))?;
        let cost: f64 = sigmas.iter().map(|s| bures_wasserstein_dist(&bar, s).map(|d| d * d)).sum::<monge_align::Result<f64>>()?;
        println!("{iters:>3} iterations: mean squared BW to inputs = {:.6}", cost / 3.0);
    }
    Ok(())
}
