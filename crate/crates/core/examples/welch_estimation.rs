//! Welch cross-spectrum of a synthetic signal against its population spectrum.

use monge_align::spectral::{subsample_gf_blocks, welch_cross_psd, welch_psd};
use monge_align::synth::{fixture_signal, fixture_spectrum, Recipe};
use monge_align::{herm, Seed, WindowSpec};

fn main() -> monge_align::Result<()> {
    let (n_c, n) = (3, 1 << 15);
    let sig = fixture_signal(Recipe::Mixture, n_c, n, 0, Seed(7))?;
    let truth = fixture_spectrum(Recipe::Mixture, n_c, n, 0)?;

    for f in [16, 64, 256] {
        let win = WindowSpec::hann(f)?;
        let est = welch_cross_psd(&sig.centered(), &win, 0.0)?;
        let target = subsample_gf_blocks(&truth, f)?;
        let rel = est
            .bins()
            .iter()
            .zip(target.bins())
            .map(|(e, t)| herm::frobenius(&(e - t)) / herm::frobenius(t))
            .fold(0.0, f64::max);
        println!("f = {f:>3}: {} windows, worst relative bin error {rel:.3}", win.n_windows(n)?);
    }

    let psd = welch_psd(&sig, &WindowSpec::hann(16)?)?;
    println!("channel 0 PSD (f = 16): {:.3}", psd.channel(0));
    Ok(())
}
