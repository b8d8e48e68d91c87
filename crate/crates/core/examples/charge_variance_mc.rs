//! Charge variance in centred disks for the Gaussian entire function, with
//! the Poisson control whose variance grows like the area.
//!
//! `cargo run --release --example charge_variance_mc`

use gwhf::kernel::KernelSpec;
use gwhf::mc::{self, McConfig};
use gwhf::simulate::Rect;

fn main() -> gwhf::Result<()> {
    let cfg = McConfig::kernel(KernelSpec::parse_short("gef")?, Rect::centered(6.6)?, 200).with_radii(vec![2.0, 3.0, 4.5, 6.0]);
    let report = mc::estimate_charge_variance(&cfg)?;
    for it in report.items.iter().chain(&report.controls) {
        println!(
            "{:<26} {:>8.4} ± {:.4}  theory {:>8.4}  z = {:+.2}",
            it.label, it.empirical, it.se, it.theory, it.z
        );
    }
    for w in &report.warnings {
        println!("warning: {w}");
    }
    Ok(())
}
