//! Bias-variance trade-off of Welch PSD estimates as the filter size grows.

use monge_align::experiments::{biasvar, biasvar_csv, BiasVarParams};
use monge_align::Seed;

fn main() -> monge_align::Result<()> {
    let rows = biasvar(&BiasVarParams {
        gamma: 1.0,
        rho: 0.9,
        n_samples: 3000,
        // sizes must divide n_samples so the true PSD subsamples exactly
        filter_sizes: vec![4, 10, 20, 40, 100, 200, 500, 1000],
        runs: 50,
        seed: Seed(3),
    })?;
    print!("{}", biasvar_csv(&rows));
    let best = rows.iter().min_by(|a, b| a.sup_bin_rmse.total_cmp(&b.sup_bin_rmse)).unwrap();
    println!("lowest worst-bin rmse at f = {}", best.f);
    Ok(())
}
