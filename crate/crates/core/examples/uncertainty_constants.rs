//! Uncertainty constants of a chirped window, the intensity under both
//! product-sign conventions, and its invariance under time-frequency shifts
//! and chirps.
//!
//! `cargo run --release --example uncertainty_constants`

use gwhf::kernel::OmegaConvention;
use gwhf::window::{self, Window};

fn main() -> gwhf::Result<()> {
    let g = Window::hermite(1)?.shifted(0.3, 0.2, 0.1);
    let c = window::uncertainty_constants(&g)?;
    println!("window {}", g.label());
    println!("  c1..c5 = {:.6} {:.6} {:.6} {:.6} {:.6}", c.c1, c.c2, c.c3, c.c4, c.c5);
    for conv in OmegaConvention::ALL {
        let d = window::discriminant(&c, conv);
        match window::rho1_stft_with(&g, conv) {
            Ok(rho) => println!("  {:<10} D = {d:.6}  rho1,g = {rho:.10}", conv.name()),
            Err(e) => println!("  {:<10} D = {d:.6}  {e}", conv.name()),
        }
    }
    for (x0, xi0, xi1) in [(0.5, -0.3, 0.2), (-1.0, 0.7, -0.4)] {
        let (before, after) = window::invariance_check(&g, x0, xi0, xi1)?;
        println!("  shift ({x0}, {xi0}, {xi1}): {before:.12} -> {after:.12}");
    }
    let gauss = Window::generalized_gaussian(1.7, 0.4, 0.2, -0.5, 0.3)?;
    println!("generalized Gaussian {}: rho1,g = {:.12}", gauss.label(), window::rho1_stft(&gauss)?);
    Ok(())
}
