//! Acceptance suite: one PASS/FAIL line per criterion, detail lines indented
//! below it. Exits non-zero when any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use gwhf::kernel::{self, KernelSpec, OmegaConvention, RadialKernel};
use gwhf::mc::{self, McConfig};
use gwhf::simulate::{plan_stft, stft_field, Rect, StreamKey};
use gwhf::window::{self, Window, WindowSpec};
use gwhf::zeros::{self, ChargedZero};
use num_complex::Complex64 as C64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CLOSED_FORM_STFT_TOL: f64 = 1e-8;
const CLOSED_FORM_RADIAL_TOL: f64 = 1e-12;
const ORACLE_TOL: f64 = 1e-8;
const ORACLE_SEPARATIONS: usize = 40;
const INTEGRAL_TOL: f64 = 1e-6;
const MC_Z: f64 = 4.0;
const MC_REALIZATIONS: usize = 200;
const UNCERTAINTY_FLOOR: f64 = 1.0 - 1e-7;
const GAUSSIAN_TOL: f64 = 1e-8;
const INVARIANCE_TOL: f64 = 1e-7;
const INVARIANCE_DRAWS: usize = 50;
const VARIANCE_REALIZATIONS: usize = 1000;
const VARIANCE_REL_TOL: f64 = 0.20;
const SUBLINEAR_GATE: f64 = 2.4;
const POISSON_REJECT_SE: f64 = 5.0;
const DETECTOR_MIN_ZEROS: u64 = 10_000;
const HALVING_COUNT_TOL: f64 = 0.01;
const SEED: u64 = 0xC0FFEE;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    details: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            pass: true,
            details: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, line: String) {
        self.pass &= ok;
        self.details.push(format!("{} {line}", if ok { "ok  " } else { "FAIL" }));
    }

    fn note(&mut self, line: String) {
        self.details.push(format!("     {line}"));
    }
}

fn square8() -> Rect {
    Rect::new(0.0, 8.0, 0.0, 8.0).unwrap()
}

fn closed_forms() -> Outcome {
    let mut o = Outcome::new();
    let mut worst_stft = 0.0f64;
    for r in 0..=5usize {
        let g = Window::hermite(r).unwrap();
        let want = r as f64 + 0.5 + 1.0 / (4.0 * r as f64 + 2.0);
        let constants = window::rho1_stft(&g).unwrap();
        let jet = window::rho1_stft_via_jet(&g, OmegaConvention::default()).unwrap();
        worst_stft = worst_stft.max((constants - want).abs()).max((jet - want).abs());
    }
    o.check(
        worst_stft <= CLOSED_FORM_STFT_TOL,
        format!("hermite r = 0..5, constants and jet paths: max error {worst_stft:.2e} (tol {CLOSED_FORM_STFT_TOL:.0e})"),
    );
    let (mut worst_pure, mut worst_full) = (0.0f64, 0.0f64);
    for q in 1..=6u32 {
        let qf = f64::from(q);
        let pure = kernel::rho1_radial(&RadialKernel::laguerre(q - 1)).unwrap();
        let full = kernel::rho1_radial(&RadialKernel::laguerre_avg(q).unwrap()).unwrap();
        worst_pure = worst_pure.max((pure - (qf - 0.5 + 1.0 / (4.0 * qf - 2.0)) / PI).abs());
        worst_full = worst_full.max((full - (qf + 1.0 / qf) / (2.0 * PI)).abs());
    }
    o.check(
        worst_pure <= CLOSED_FORM_RADIAL_TOL,
        format!("pure-type q = 1..6: max error {worst_pure:.2e} (tol {CLOSED_FORM_RADIAL_TOL:.0e})"),
    );
    o.check(
        worst_full <= CLOSED_FORM_RADIAL_TOL,
        format!("full-type q = 1..6: max error {worst_full:.2e} (tol {CLOSED_FORM_RADIAL_TOL:.0e})"),
    );
    o
}

fn oracle_equivalence() -> Outcome {
    let mut o = Outcome::new();
    let seps: Vec<f64> = (0..ORACLE_SEPARATIONS)
        .map(|k| 0.05 + (8.0 - 0.05) * k as f64 / (ORACLE_SEPARATIONS - 1) as f64)
        .collect();
    for p in [RadialKernel::gef(), RadialKernel::laguerre(1), RadialKernel::laguerre(2)] {
        let mut worst = 0.0f64;
        for &d in &seps {
            let pv = p.p(d * d);
            let e = kernel::wick_oracle_e(&p, C64::new(0.0, 0.0), C64::new(d, 0.0)).unwrap();
            let lhs = e / (1.0 - pv * pv) - 1.0;
            worst = worst.max((lhs - kernel::i_prime(&p, d * d).unwrap()).abs());
        }
        o.check(
            worst <= ORACLE_TOL,
            format!("{}: max |E/(1-P²) - 1 - I'(d²)| = {worst:.2e} over {} separations", p.label(), seps.len()),
        );
    }
    o
}

fn built_in_kernels() -> Vec<RadialKernel> {
    let mut ks = vec![RadialKernel::gef()];
    ks.extend((1..=5).map(RadialKernel::laguerre));
    ks.extend((2..=6).map(|q| RadialKernel::laguerre_avg(q).unwrap()));
    ks
}

fn integral_identity() -> Outcome {
    let mut o = Outcome::new();
    for p in built_in_kernels() {
        let lhs = kernel::charge_screening_integral(&p).unwrap();
        let rho = kernel::rho1_radial(&p).unwrap();
        o.check(
            (lhs - rho).abs() <= INTEGRAL_TOL,
            format!("{}: integral {lhs:.10} vs ρ1 {rho:.10}", p.label()),
        );
    }
    o
}

fn mc_intensity() -> Outcome {
    let mut o = Outcome::new();
    let h0 = McConfig::window(WindowSpec::hermite(0), square8(), MC_REALIZATIONS).with_seed(SEED);
    let h1 = McConfig::window(WindowSpec::hermite(1), square8(), MC_REALIZATIONS).with_seed(SEED);
    let runs = [
        ("h0 density", mc::estimate_intensity(&h0).unwrap()),
        ("h1 density", mc::estimate_intensity(&h1).unwrap()),
        ("h1 charge density", mc::estimate_charge_intensity(&h1).unwrap()),
    ];
    for (name, report) in runs {
        let it = &report.items[0];
        o.check(
            it.z.abs() <= MC_Z,
            format!(
                "{name}: {:.5} ± {:.5} vs {:.5}, z = {:+.2} ({:.1} s)",
                it.empirical, it.se, it.theory, it.z, report.elapsed_s
            ),
        );
    }
    o
}

fn random_mixture(rng: &mut ChaCha8Rng) -> Window {
    let n = rng.random_range(1..=8usize);
    let coeffs: Vec<C64> = (0..n)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    Window::hermite_mixture(&coeffs).unwrap()
}

fn random_shift(rng: &mut ChaCha8Rng) -> [f64; 3] {
    [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-0.5..0.5)]
}

fn uncertainty() -> Outcome {
    let mut o = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let lowest = (0..100)
        .map(|_| window::rho1_stft(&random_mixture(&mut rng)).unwrap())
        .fold(f64::INFINITY, f64::min);
    o.check(
        lowest >= UNCERTAINTY_FLOOR,
        format!("100 Hermite mixtures: min ρ1,g = {lowest:.10}"),
    );
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let g = Window::generalized_gaussian(
            rng.random_range(0.3..3.0),
            rng.random_range(0.0..2.0 * PI),
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
            rng.random_range(-1.0..1.0),
        )
        .unwrap();
        worst = worst.max((window::rho1_stft(&g).unwrap() - 1.0).abs());
    }
    o.check(
        worst <= GAUSSIAN_TOL,
        format!("20 generalized Gaussians: max |ρ1,g - 1| = {worst:.2e}"),
    );
    let mut worst = 0.0f64;
    for _ in 0..INVARIANCE_DRAWS {
        let g = random_mixture(&mut rng);
        let [x0, xi0, xi1] = random_shift(&mut rng);
        let (before, after) = window::invariance_check(&g, x0, xi0, xi1).unwrap();
        worst = worst.max((before - after).abs());
    }
    o.check(
        worst <= INVARIANCE_TOL,
        format!("{INVARIANCE_DRAWS} invariance draws: max difference {worst:.2e}"),
    );
    o
}

fn hyperuniformity() -> Outcome {
    let mut o = Outcome::new();
    let spec = KernelSpec::parse_short("gef").unwrap();
    let cfg = McConfig::kernel(spec, Rect::centered(6.6).unwrap(), VARIANCE_REALIZATIONS).with_seed(SEED);
    let report = mc::estimate_charge_variance(&cfg).unwrap();
    let item = |label: &str| report.item(label).unwrap().clone();
    let control = |label: &str| report.controls.iter().find(|c| c.label == label).unwrap().clone();

    let at6 = item("var_over_r@6");
    let rel = (at6.empirical - at6.theory).abs() / at6.theory;
    o.check(
        rel <= VARIANCE_REL_TOL,
        format!(
            "Var/R at R = 6: {:.4} ± {:.4} vs variance_asymptote {:.4}, relative gap {:.2} (tol {VARIANCE_REL_TOL})",
            at6.empirical, at6.se, at6.theory, rel
        ),
    );
    let ratio = item("var_ratio");
    o.check(
        ratio.empirical <= SUBLINEAR_GATE,
        format!("Var(6)/Var(3) = {:.3} ± {:.3} (gate {SUBLINEAR_GATE})", ratio.empirical, ratio.se),
    );
    let gap = control("poisson_minus_field_ratio");
    o.check(
        gap.z > POISSON_REJECT_SE,
        format!(
            "Poisson control: variance ratio {:.3} vs field {:.3}, separated by {:.1} SE",
            control("poisson_var_ratio").empirical,
            ratio.empirical,
            gap.z
        ),
    );
    for r in [3, 6] {
        let v = item(&format!("var@{r}"));
        o.note(format!(
            "exact disk variance at R = {r}: {:.4} ± {:.4} vs {:.4}, z = {:+.2}",
            v.empirical, v.se, v.theory, v.z
        ));
    }
    let slope = item("fit_slope");
    o.note(format!(
        "fitted Var/R slope {:.4} ± {:.4}, {:.2}x variance_asymptote ({:.1} s)",
        slope.empirical,
        slope.se,
        slope.empirical / slope.theory,
        report.elapsed_s
    ));
    o
}

fn counted(zs: &[ChargedZero], region: Rect) -> Vec<ChargedZero> {
    zs.iter().filter(|z| region.contains(z.position)).cloned().collect()
}

fn detector_integrity() -> Outcome {
    let mut o = Outcome::new();
    let g = Window::hermite(1).unwrap();
    let d = square8();
    let (mut total, mut degenerate, mut mismatched) = (0u64, 0u64, 0u64);
    let mut r = 0u64;
    while total < DETECTOR_MIN_ZEROS + DETECTOR_MIN_ZEROS / 5 {
        let f = stft_field(&g, d, 0.04, None, StreamKey::new(SEED, r)).unwrap();
        for z in counted(&zeros::detect_zeros(&f).unwrap(), d) {
            total += 1;
            if z.is_degenerate() {
                degenerate += 1;
            } else if z.jacobian_sign != z.winding {
                mismatched += 1;
            }
        }
        r += 1;
    }
    o.check(
        total >= DETECTOR_MIN_ZEROS && mismatched == 0,
        format!("{total} zeros over {r} realizations: {mismatched} winding/Jacobian mismatches, {degenerate} degenerate"),
    );

    let dt = plan_stft(&g, d, 0.04, None).unwrap().dt;
    let region = d.shrink(0.1);
    let (mut coarse_n, mut fine_n, mut flips, mut unmatched) = (0usize, 0usize, 0usize, 0usize);
    let mut worst_rel = 0.0f64;
    for r in 0..20u64 {
        let key = StreamKey::new(SEED, r);
        let coarse = counted(&zeros::detect_zeros(&stft_field(&g, d, 0.04, Some(dt), key).unwrap()).unwrap(), region);
        let fine = counted(&zeros::detect_zeros(&stft_field(&g, d, 0.02, Some(dt), key).unwrap()).unwrap(), region);
        coarse_n += coarse.len();
        fine_n += fine.len();
        worst_rel = worst_rel.max((coarse.len() as f64 - fine.len() as f64).abs() / coarse.len() as f64);
        for z in &coarse {
            let nearest = fine
                .iter()
                .min_by(|a, b| (a.position - z.position).norm().total_cmp(&(b.position - z.position).norm()));
            match nearest {
                Some(m) if (m.position - z.position).norm() < 0.01 => flips += usize::from(m.charge != z.charge),
                _ => unmatched += 1,
            }
        }
    }
    let rel = (coarse_n as f64 - fine_n as f64).abs() / coarse_n as f64;
    o.check(
        rel <= HALVING_COUNT_TOL && flips == 0,
        format!(
            "halving 0.04 -> 0.02 on 20 realizations: {coarse_n} -> {fine_n} zeros ({:.2}%, worst realization {:.2}%), {flips} charge flips, {unmatched} unmatched",
            100.0 * rel,
            100.0 * worst_rel
        ),
    );
    o
}

fn sign_arbitration() -> Outcome {
    let mut o = Outcome::new();
    let spec = WindowSpec::parse_short("hermite:1@0.3,0.2,0.1").unwrap();
    let g = spec.build(None).unwrap();
    let c = window::uncertainty_constants(&g).unwrap();
    o.note(format!("window {}: c1 c4 = {:.4}", g.label(), c.c1 * c.c4));
    let cfg = McConfig::window(spec, square8(), MC_REALIZATIONS).with_seed(SEED).with_spacing(0.02);
    let report = mc::estimate_intensity(&cfg).unwrap();
    let it = &report.items[0];
    o.note(format!("MC density {:.5} ± {:.5} ({:.1} s)", it.empirical, it.se, report.elapsed_s));

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let shifts: Vec<[f64; 3]> = (0..INVARIANCE_DRAWS).map(|_| random_shift(&mut rng)).collect();
    let mut winners = Vec::new();
    for conv in OmegaConvention::ALL {
        let Ok(rho) = window::rho1_stft_with(&g, conv) else {
            o.note(format!("{}: no valid intensity", conv.name()));
            continue;
        };
        let z = (it.empirical - rho) / it.se;
        let worst = shifts
            .iter()
            .map(|[x0, xi0, xi1]| {
                window::invariance_check_with(&g, *x0, *xi0, *xi1, conv).map_or(f64::INFINITY, |(b, a)| (a - b).abs())
            })
            .fold(0.0f64, f64::max);
        let matches = z.abs() <= MC_Z;
        let invariant = worst <= INVARIANCE_TOL;
        o.note(format!(
            "{}: ρ1,g = {rho:.6}, z = {z:+.2} ({}), invariance max diff {worst:.2e} ({})",
            conv.name(),
            if matches { "matches" } else { "rejected" },
            if invariant { "invariant" } else { "not invariant" }
        ));
        if matches && invariant {
            winners.push(conv);
        }
    }
    let default = OmegaConvention::default();
    o.check(
        winners == [default],
        format!(
            "winner: {}; default: {}",
            winners.iter().map(|c| c.name()).collect::<Vec<_>>().join(", "),
            default.name()
        ),
    );
    o
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("closed-form cross-path suite", closed_forms),
        ("oracle equivalence", oracle_equivalence),
        ("integral identity", integral_identity),
        ("Monte Carlo intensity", mc_intensity),
        ("uncertainty principle", uncertainty),
        ("hyperuniformity", hyperuniformity),
        ("detector integrity", detector_integrity),
        ("sign-convention arbitration", sign_arbitration),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        println!(
            "{} {name} ({:.1} s)",
            if outcome.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
        for d in &outcome.details {
            println!("    {d}");
        }
        failed += usize::from(!outcome.pass);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
