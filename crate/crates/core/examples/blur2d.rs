//! Directionally blurred textures aligned to a common 2-D barycenter.

use monge_align::experiments::{blur2d, BlurParams};
use monge_align::Seed;

fn main() -> monge_align::Result<()> {
    let outcome = blur2d(&BlurParams {
        source_angles: vec![0.0, 60.0, 120.0],
        target_angles: vec![30.0, 90.0],
        kernel_len: 7,
        n_images: 40,
        size: 32,
        seed: Seed(11),
    })?;
    // held-out: PSD from the first half of the images, gaps on the second half
    println!("angle  role    gap before  gap after  held-out before/after");
    for d in &outcome.domains {
        let heldout = d.heldout.map_or("-".to_string(), |(b, a)| format!("{b:.3} / {a:.3}"));
        let role = if d.source { "source" } else { "target" };
        println!("{:>5}  {role}  {:>10.3}  {:>9.2e}  {heldout:>21}", d.angle_deg, d.gap_before, d.gap_after);
    }
    Ok(())
}
