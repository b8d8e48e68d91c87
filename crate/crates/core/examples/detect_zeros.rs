//! Detect the charged zeros of one spectrogram realization, check the two
//! orientation detectors against each other and count charges in disks.
//!
//! `cargo run --release --example detect_zeros`

use gwhf::simulate::{self, Rect, StreamKey};
use gwhf::window::Window;
use gwhf::zeros;
use num_complex::Complex64 as C64;

fn main() -> gwhf::Result<()> {
    let domain = Rect::new(0.0, 8.0, 0.0, 8.0)?;
    let grid = simulate::stft_field(&Window::hermite(1)?, domain, 0.04, None, StreamKey::new(7, 0))?;
    let zs: Vec<_> = zeros::detect_zeros(&grid)?
        .into_iter()
        .filter(|z| domain.contains(z.position))
        .collect();
    let charge: i32 = zs.iter().map(|z| z.charge).sum();
    let agree = zs.iter().filter(|z| z.jacobian_sign == z.winding).count();
    println!("{} zeros (expected about 106.7), total charge {charge} (expected about 64)", zs.len());
    println!("winding and Jacobian sign agree on {agree} of {}", zs.len());
    let center = C64::new(4.0, 4.0);
    for d in zeros::disk_stats(&zs, center, &[1.0, 2.0, 3.0], domain)? {
        println!("  disk R = {}: {} zeros, charge {}", d.radius, d.count, d.total_charge);
    }
    let mut csv = Vec::new();
    zeros::write_zeros_csv(&zs[..3.min(zs.len())], &mut csv)?;
    print!("{}", String::from_utf8_lossy(&csv));
    Ok(())
}
