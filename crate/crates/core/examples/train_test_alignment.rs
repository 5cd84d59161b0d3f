//! Fit each method on three source domains, then align an unseen target
//! domain and compare its distance to the barycenter before and after.

use monge_align::align::barycenter;
use monge_align::synth::{fixture_signal, Recipe};
use monge_align::{estimate, fit, statistics_distance, transform, BarycenterConfig, Method, Seed, WindowSpec};

fn main() -> monge_align::Result<()> {
    let (n_c, n) = (4, 1 << 14);
    let sources: Vec<_> = (0..3)
        .map(|k| fixture_signal(Recipe::Mixture, n_c, n, k, Seed(100 + k as u64)))
        .collect::<Result<_, _>>()?;
    let target = fixture_signal(Recipe::Mixture, n_c, n, 5, Seed(999))?;
    let win = WindowSpec::hann(64)?;

    for method in [Method::Stma, Method::Tma, Method::Sma] {
        let model = fit(method, &sources, &win, 1e-10, &BarycenterConfig::iterations(10))?;
        let aligned = transform(&model, &target)?;
        let est = |s: &monge_align::Signal| estimate(method, s, &model.window, 1e-10);
        let bar = &model.barycenter;
        let before = statistics_distance(&est(&target.centered())?, bar)?;
        let after = statistics_distance(&est(&aligned)?, bar)?;
        println!("{method}: distance to barycenter {before:.4} -> {after:.4}");
    }

    // the barycenter of the source statistics, computed directly
    let stats: Vec<_> = sources.iter().map(|s| estimate(Method::Tma, &s.centered(), &win, 1e-10)).collect::<Result<_, _>>()?;
    let bar = barycenter(&stats, &BarycenterConfig::default())?;
    println!("tma barycenter over {} bins per channel", bar.f());
    Ok(())
}
