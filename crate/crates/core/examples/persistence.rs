//! Signals and models on disk: binary and CSV signals, JSON models.

use monge_align::io;
use monge_align::synth::{fixture_signal, Recipe};
use monge_align::{fit, transform, BarycenterConfig, Method, Seed, WindowSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("monge-align-persistence");
    std::fs::create_dir_all(&dir)?;

    let sig = fixture_signal(Recipe::Expcorr, 2, 4096, 0, Seed(1))?.with_sample_rate(Some(128.0))?;
    let bin = dir.join("signal.bin");
    let csv = dir.join("signal.csv");
    io::write_signal(&bin, &sig)?;
    io::write_signal(&csv, &sig)?;
    println!("binary: {} bytes, csv: {} bytes", std::fs::metadata(&bin)?.len(), std::fs::metadata(&csv)?.len());
    assert_eq!(io::read_signal(&csv)?, io::read_signal(&bin)?.with_sample_rate(None)?);

    let one = monge_align::Signal::new(ndarray::arr2(&[[0.5]]))?;
    let hex: String = io::encode_signal(&one).iter().map(|b| format!("{b:02x}")).collect();
    println!("1x1 signal file: {hex}");

    let model = fit(Method::Tma, &[sig.clone()], &WindowSpec::hann(32)?, 1e-10, &BarycenterConfig::default())?;
    let path = dir.join("model.json");
    io::save_model(&path, &model)?;
    let back = io::load_model(&path)?;
    assert_eq!(transform(&back, &sig)?, transform(&model, &sig)?);
    println!("model saved to {} and reloaded", path.display());
    Ok(())
}
