//! Render the charged zeros of one realization as an SVG scatter.
//!
//! `cargo run --release --example plot_zeros -- [out.svg]`

use gwhf::plot;
use gwhf::simulate::{self, Rect, StreamKey};
use gwhf::window::Window;
use gwhf::zeros;

fn main() -> gwhf::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "zeros.svg".into());
    let domain = Rect::new(0.0, 8.0, 0.0, 8.0)?;
    let grid = simulate::stft_field(&Window::hermite(1)?, domain, 0.04, None, StreamKey::new(7, 0))?;
    let zs: Vec<_> = zeros::detect_zeros(&grid)?
        .into_iter()
        .filter(|z| domain.contains(z.position))
        .collect();
    std::fs::write(&out, plot::render_svg(&zs, Some(domain), "hermite:1, seed 7"))?;
    println!("wrote {} zeros to {out}", zs.len());
    Ok(())
}
