//! Sample one realization of three fields and round-trip a grid through the
//! binary format.
//!
//! `cargo run --release --example simulate_field`

use gwhf::simulate::{self, PolyKind, Rect, StreamKey};
use gwhf::window::Window;

fn main() -> gwhf::Result<()> {
    let key = StreamKey::new(simulate::DEFAULT_SEED, 0);
    let stft = simulate::stft_field(&Window::hermite(1)?, Rect::new(0.0, 8.0, 0.0, 8.0)?, 0.04, None, key)?;
    let gef = simulate::gef_series_field(Rect::centered(4.0)?, 0.1, simulate::required_terms(6.0), key)?;
    let poly = simulate::polyentire_field(2, PolyKind::Full, Rect::centered(3.0)?, 0.1, None, key)?;
    for (name, g) in [("stft h1", &stft), ("gef series", &gef), ("poly-entire full q=2", &poly)] {
        println!(
            "{name:<22} {}x{} points, spacing {:.4}, mean |F|^2 in the interior {:.4}",
            g.nx,
            g.ny,
            g.spacing,
            g.interior_power()
        );
    }
    let mut bytes = Vec::new();
    stft.write_binary(&mut bytes)?;
    let back = simulate::FieldGrid::read_binary(bytes.as_slice())?;
    let worst = back
        .values
        .iter()
        .zip(&stft.values)
        .map(|(a, b)| (a - b).norm() / b.norm().max(1e-30))
        .fold(0.0f64, f64::max);
    println!("binary round trip (complex64 body): {} bytes, max relative error {worst:.1e}", bytes.len());
    Ok(())
}
