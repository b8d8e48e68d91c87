//! First intensities of the built-in kernels and of Hermite windows.
//!
//! `cargo run --release --example intensities`

use gwhf::kernel::{self, RadialKernel};
use gwhf::window::{self, Window};

fn main() -> gwhf::Result<()> {
    println!("radial kernels (zeros per unit area in the GWHF plane)");
    let mut kernels = vec![RadialKernel::gef()];
    kernels.extend((1..=3).map(RadialKernel::laguerre));
    for q in 2..=4 {
        kernels.push(RadialKernel::laguerre_avg(q)?);
    }
    for p in &kernels {
        println!("  {:<16} rho1 = {:.10}", p.label(), kernel::rho1_radial(p)?);
    }

    println!("Hermite windows (zeros per unit area of the spectrogram)");
    for r in 0..=4 {
        let g = Window::hermite(r)?;
        let closed = r as f64 + 0.5 + 1.0 / (4.0 * r as f64 + 2.0);
        println!("  h{r}: rho1,g = {:.10}  (r + 1/2 + 1/(4r+2) = {closed:.10})", window::rho1_stft(&g)?);
    }
    println!("charged intensity: {:.10} = 1/pi for every kernel", kernel::rho1_charged());
    Ok(())
}
