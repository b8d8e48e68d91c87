//! Monte Carlo zero density and signed charge density for a Hermite window.
//!
//! `cargo run --release --example monte_carlo`

use gwhf::mc::{self, McConfig};
use gwhf::simulate::Rect;
use gwhf::window::WindowSpec;

fn main() -> gwhf::Result<()> {
    let cfg = McConfig::window(WindowSpec::parse_short("hermite:1")?, Rect::new(0.0, 8.0, 0.0, 8.0)?, 40);
    for report in [mc::estimate_intensity(&cfg)?, mc::estimate_charge_intensity(&cfg)?] {
        for it in &report.items {
            println!(
                "{:<16} {:.4} ± {:.4}  theory {:.4}  z = {:+.2}",
                it.label, it.empirical, it.se, it.theory, it.z
            );
        }
        let d = &report.diagnostics;
        println!(
            "  {} zeros in {} realizations, {} winding/Jacobian mismatches, {:.1} s",
            d.zeros, d.realizations, d.winding_mismatch, report.elapsed_s
        );
    }
    print!("{}", mc::estimate_intensity(&cfg.with_seed(1))?.to_csv());
    Ok(())
}
