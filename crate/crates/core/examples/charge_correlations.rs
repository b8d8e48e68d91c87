//! Charged two-point intensity from the Wick oracle and from the closed
//! form `tau2 = (1 + I'(d^2))/pi^2`, plus the screening integral that
//! returns `rho1`.
//!
//! `cargo run --release --example charge_correlations`

use std::f64::consts::PI;

use gwhf::kernel::{self, RadialKernel};
use num_complex::Complex64 as C64;

fn main() -> gwhf::Result<()> {
    for p in [RadialKernel::gef(), RadialKernel::laguerre(2)] {
        println!("{}", p.label());
        for d in [0.25, 0.5, 1.0, 2.0, 4.0] {
            let pv = p.p(d * d);
            let e = kernel::wick_oracle_e(&p, C64::new(0.0, 0.0), C64::new(d, 0.0))?;
            let oracle = e / (1.0 - pv * pv) / (PI * PI);
            println!(
                "  d = {d:<4}  tau2 oracle {oracle:+.12}  closed form {:+.12}",
                kernel::tau2_charged(&p, d)?
            );
        }
        println!(
            "  screening integral {:.12}  rho1 {:.12}",
            kernel::charge_screening_integral(&p)?,
            kernel::rho1_radial(&p)?
        );
    }
    Ok(())
}
