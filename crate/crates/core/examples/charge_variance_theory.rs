//! Charge variance in disks: the large-radius limit of `Var/R` and the exact
//! variance at finite radius.
//!
//! `cargo run --release --example charge_variance_theory`

use gwhf::kernel::{self, RadialKernel};

fn main() -> gwhf::Result<()> {
    let p = RadialKernel::gef();
    let limit = kernel::variance_asymptote(&p)?;
    println!("{}: variance_asymptote = {limit:.12}", p.label());
    println!("  slope of Var against R = {:.12}", kernel::charge_variance_slope(&p)?);
    for r in [1.0, 2.0, 4.0, 8.0, 16.0] {
        let v = kernel::charge_variance_disk(&p, r)?;
        println!("  R = {r:<4} Var = {v:.6}  Var/R = {:.6}", v / r);
    }
    match RadialKernel::power(1).and_then(|p| kernel::variance_asymptote(&p)) {
        Ok(v) => println!("power:1 unexpectedly gave {v}"),
        Err(e) => println!("power:1 is rejected: {e}"),
    }
    Ok(())
}
