//! Command-line front end. Every subcommand is deterministic given its
//! inputs and seed; wall-clock time only appears in `elapsed_s` of reports.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64 as C64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::kernel::{self, KernelModel, KernelSpec, OmegaConvention, RadialKernel};
use crate::mc::{self, FieldSource, McConfig, McReport, Z_GATE};
use crate::plot;
use crate::simulate::{self, FieldGrid, Plane, Rect, DEFAULT_SEED};
use crate::window::{self, WindowSpec};
use crate::zeros;
use crate::{Error, Result};

/// Environment variable that overrides `--threads`.
pub const THREADS_ENV: &str = "GWHF_THREADS";

/// Tolerance of the invariance check.
pub const INVARIANCE_TOL: f64 = 1e-7;

/// Tolerance of the two-point oracle check.
pub const TAU2_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(
    name = "gwhf",
    version,
    about = "Zeros of Gaussian Weyl-Heisenberg functions: intensities, simulation, charged zeros, Monte Carlo checks",
    long_about = None
)]
pub struct Cli {
    /// Worker threads for simulation and Monte Carlo (results do not depend
    /// on it). GWHF_THREADS takes precedence.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// First intensities of a kernel or window.
    ///
    /// Kernel jet (b10, b01, h20, h02, h11) gives the conditional covariance
    /// Ω11 = -h20 - b10², Ω22 = -h02 - b01², Ω12 = -h11 - i - b10·b01, then
    /// Δ_H = det Ω - 1 and ρ1 = (Δ_H + 2) / (2π √(Δ_H + 1)). The charged
    /// intensity is 1/π for every kernel. Radial kernels use
    /// ρ1 = -(1/π)(P'(0) + 1/(4 P'(0))). Windows give the uncertainty
    /// constants c1..c5 and, in STFT coordinates,
    /// ρ1,g = (4D + 1) / (4 √D) with
    /// D = (c2 - c1²) c3 - c2 c4² - c5² + 2 c1 c4 c5.
    /// The flipped product sign (+b10·b01 in Ω12, -2 c1 c4 c5 in D) is
    /// reported as well when it differs.
    Intensity(SourceArgs),

    /// Charge-variance constant of a radial kernel,
    /// (1/π) ∫_0^∞ 2 r² P'(r²)² / (1 - P(r²)²) dr, stated as the limit of
    /// Var[charge in B_R]/R, together with the slope of the exact disk
    /// variance, which is twice that integral.
    VarianceAsymptote {
        /// gef, laguerre:r, laguerre-avg:q or power:a.
        #[arg(long)]
        kernel: String,
    },

    /// Simulate one field realization and write `field.grid` (binary
    /// container with a JSON header) and optionally `field.csv` (x,y,re,im).
    ///
    /// Windows give V(x, y) = ∫ N(t) conj(g(t - x)) e^{-2πi y t} dt of
    /// complex white noise N; kernels give GWHF-plane fields: the GEF power
    /// series e^{-|z|²/2} Σ ξ_n zⁿ/√(n!) for gef, and poly-entire fields
    /// for laguerre:r (pure, order r + 1) and laguerre-avg:q (full, order q).
    Simulate(SimulateArgs),

    /// Extract charged zeros of a grid by plaquette phase winding and write
    /// a CSV with header x,y,charge,winding,refined. Charges are the winding
    /// in the GWHF plane and its negative in STFT coordinates.
    Zeros {
        /// Grid written by `simulate`.
        grid: PathBuf,
        /// Output CSV (default: zeros.csv next to the grid).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },

    /// Monte Carlo and closed-form verification suites. Exit code 0 iff
    /// every gated |z| ≤ 5 (or every tolerance holds).
    Verify {
        #[command(subcommand)]
        suite: VerifySuite,
    },

    /// SVG scatter of a zeros CSV: plus marks for positive charges, circles
    /// for negative ones, equal-aspect axes.
    Plot {
        /// Zeros CSV written by `zeros`.
        zeros: PathBuf,
        /// Output SVG (default: same name with .svg).
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// View rectangle x0,x1,y0,y1 (default: bounding box of the zeros).
        #[arg(long)]
        domain: Option<Rect>,
        #[arg(long, default_value = "charged zeros")]
        title: String,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// Kernel: gef, laguerre:r, laguerre-avg:q, power:a
    /// ((1 + t/(2a))^{-a}) or custom:b10,b01,h20,h02,h11.
    #[arg(long, conflicts_with_all = ["window", "config"])]
    pub kernel: Option<String>,
    /// Window: hermite:r, gauss:σ,φ,x0,ξ0,ξ1, mixture:c0,c1,..., or
    /// samples:path,dt; a suffix @x0,ξ0,ξ1 applies
    /// g ↦ e^{2πi(ξ0 t + ξ1 t²)} g(t - x0).
    #[arg(long, conflicts_with = "config")]
    pub window: Option<String>,
    /// JSON file with {"kernel": {...}} or {"window": {...}} records.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Rectangle x0,x1,y0,y1 in the coordinates of the chosen plane.
    #[arg(long, default_value = "0,8,0,8")]
    pub domain: Rect,
    /// Lattice spacing (default 0.04 in STFT coordinates, 0.1 in the GWHF plane).
    #[arg(long)]
    pub spacing: Option<f64>,
    /// Time step of the noise (default: the largest stable one).
    #[arg(long)]
    pub dt: Option<f64>,
    /// stft or gwhf (windows default to stft; kernels are always gwhf).
    #[arg(long)]
    pub plane: Option<String>,
    /// Integer (decimal or 0x hex) or `random`.
    #[arg(long, default_value = "0xC0FFEE")]
    pub seed: String,
    #[arg(long, default_value_t = 0)]
    pub realization: u64,
    /// Output directory.
    #[arg(short, long, default_value = ".")]
    pub out: PathBuf,
    /// Also write field.csv.
    #[arg(long)]
    pub csv: bool,
}

#[derive(Debug, Clone, Args)]
pub struct McArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Counting rectangle x0,x1,y0,y1.
    #[arg(long)]
    pub domain: Option<Rect>,
    #[arg(long)]
    pub spacing: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    /// stft or gwhf.
    #[arg(long)]
    pub plane: Option<String>,
    /// Number of realizations.
    #[arg(short = 'n', long, default_value_t = 200)]
    pub realizations: usize,
    /// Integer (decimal or 0x hex) or `random`.
    #[arg(long, default_value = "0xC0FFEE")]
    pub seed: String,
    /// Distance trimmed from every side of the domain before counting.
    #[arg(long, default_value_t = 0.0)]
    pub margin: f64,
    /// Disk radii for charge-variance, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub radii: Vec<f64>,
    /// Directory for report.json and report.csv.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum VerifySuite {
    /// Empirical zero density against ρ1,g (STFT) or ρ1 (GWHF plane).
    Intensity(McArgs),
    /// Empirical signed charge density against 1 (STFT) or 1/π (GWHF plane).
    Charge(McArgs),
    /// Variance of the charge in centred disks against the Var/R limit and
    /// the exact disk variance ρ1 π R² + (1/π²) ∫∫ I'(|z - w|²), with a
    /// Poisson control whose variance grows like R².
    ChargeVariance(McArgs),
    /// ρ1,g of g against ρ1,g of e^{2πi(ξ0 t + ξ1 t²)} g(t - x0) for random
    /// (x0, ξ0, ξ1), under both product-sign conventions.
    Invariance {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 50)]
        draws: usize,
        #[arg(long, default_value = "0xC0FFEE")]
        seed: String,
    },
    /// Wick oracle E/(1 - P²) - 1 against the derivative of
    /// I(s) = s (2P'² + 3P²/2)/(1 - P²) + 2 s² P P'/(1 - P²)², evaluated at
    /// s = d² for separations d in [0.05, 8] (tolerance 1e-8). Both give the
    /// charge two-point function τ2♯ = (1 + I'(d²))/π².
    Tau2Oracle {
        /// Kernel (default: gef, laguerre:1, laguerre:2).
        #[arg(long)]
        kernel: Option<String>,
        #[arg(long, default_value_t = 40)]
        separations: usize,
    },
}

/// Parses a seed: decimal, `0x` hex, or `random` (time based).
pub fn parse_seed(s: &str) -> Result<u64> {
    let s = s.trim();
    if s == "random" {
        let nanos = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_nanos() as u64)
            .unwrap_or(DEFAULT_SEED);
        return Ok(nanos);
    }
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|_| Error::Config(format!("seed `{s}` is not an integer, 0x hex, or `random`")))
}

fn parse_plane(s: Option<&str>) -> Result<Option<Plane>> {
    match s {
        None => Ok(None),
        Some("stft") => Ok(Some(Plane::Stft)),
        Some("gwhf") => Ok(Some(Plane::Gwhf)),
        Some(o) => Err(Error::Config(format!("plane `{o}` is not stft or gwhf"))),
    }
}

/// Kernel or window named on the command line or in a JSON file.
pub fn resolve_source(a: &SourceArgs) -> Result<(FieldSource, Option<PathBuf>)> {
    if let Some(k) = &a.kernel {
        return Ok((FieldSource::Kernel(KernelSpec::parse_short(k)?), None));
    }
    if let Some(w) = &a.window {
        return Ok((FieldSource::Window(WindowSpec::parse_short(w)?), None));
    }
    if let Some(path) = &a.config {
        let text = fs::read_to_string(path)?;
        let source: FieldSource = serde_json::from_str(&text)?;
        return Ok((source, path.parent().map(Path::to_path_buf)));
    }
    Err(Error::Config("give --kernel, --window or --config".into()))
}

// Prints to stdout; a closed pipe is not an error.
fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}").and_then(|_| out.flush()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn num(v: f64) -> Value {
    json!(v)
}

/// JSON summary of the intensities of a source.
pub fn intensity_json(source: &FieldSource, base: Option<&Path>) -> Result<Value> {
    match source {
        FieldSource::Kernel(spec) => {
            let model = spec.build()?;
            let jet = model.jet()?;
            let mut out = json!({
                "kernel": label_of(&model),
                "jet": jet.as_array(),
                "delta_h": kernel::delta_h(&jet)?,
                "rho1": match &model {
                    KernelModel::Radial(p) => kernel::rho1_radial(p)?,
                    KernelModel::Jet(j) => kernel::rho1(j)?,
                },
                "rho1_charged": kernel::rho1_charged(),
            });
            let flipped = kernel::rho1_with(&jet, OmegaConvention::Flipped);
            let default = kernel::rho1(&jet)?;
            match flipped {
                Ok(f) if (f - default).abs() > 1e-12 => out["rho1_flipped"] = num(f),
                Err(e) => out["rho1_flipped_error"] = json!(e.to_string()),
                _ => {}
            }
            Ok(out)
        }
        FieldSource::Window(spec) => {
            let g = spec.build(base)?;
            let c = window::uncertainty_constants(&g)?;
            let rho = window::rho1_stft(&g)?;
            let jet = window::jet_from_constants(&c)?;
            let mut out = json!({
                "window": g.label(),
                "rho1_stft": rho,
                "rho1_stft_charged": 1.0,
                "rho1": rho / std::f64::consts::PI,
                "rho1_charged": kernel::rho1_charged(),
                "delta_h": kernel::delta_h(&jet)?,
                "discriminant": window::discriminant(&c, OmegaConvention::Regression),
                "constants": {"c1": c.c1, "c2": c.c2, "c3": c.c3, "c4": c.c4, "c5": c.c5},
            });
            match window::rho1_stft_from_constants(&c, OmegaConvention::Flipped) {
                Ok(f) if (f - rho).abs() > 1e-12 => out["rho1_stft_flipped"] = num(f),
                Err(e) => out["rho1_stft_flipped_error"] = json!(e.to_string()),
                _ => {}
            }
            Ok(out)
        }
    }
}

fn label_of(model: &KernelModel) -> String {
    match model {
        KernelModel::Radial(p) => p.label(),
        KernelModel::Jet(j) => format!("jet{:?}", j.as_array()),
    }
}

fn radial_of(spec: &str) -> Result<RadialKernel> {
    KernelSpec::parse_short(spec)?
        .build()?
        .radial()
        .cloned()
        .ok_or_else(|| Error::Config(format!("`{spec}` has no radial profile")))
}

/// JSON of the variance constants of a radial kernel.
pub fn variance_json(spec: &str) -> Result<Value> {
    let p = radial_of(spec)?;
    let limit = kernel::variance_asymptote(&p)?;
    Ok(json!({
        "kernel": p.label(),
        "variance_asymptote": limit,
        "charge_variance_slope": 2.0 * limit,
    }))
}

/// Simulates one realization and writes the grid; returns its path.
pub fn simulate_to(a: &SimulateArgs) -> Result<PathBuf> {
    let (source, base) = resolve_source(&a.source)?;
    let seed = parse_seed(&a.seed)?;
    let key = simulate::StreamKey::new(seed, a.realization);
    let plane = parse_plane(a.plane.as_deref())?;
    let grid = simulate_one(&source, base.as_deref(), a.domain, a.spacing, a.dt, plane, key)?;
    fs::create_dir_all(&a.out)?;
    let path = a.out.join("field.grid");
    grid.write_binary(BufWriter::new(File::create(&path)?))?;
    if a.csv {
        grid.write_csv(BufWriter::new(File::create(a.out.join("field.csv"))?))?;
    }
    Ok(path)
}

/// One realization of a source, following the Monte Carlo conventions.
pub fn simulate_one(
    source: &FieldSource,
    base: Option<&Path>,
    domain: Rect,
    spacing: Option<f64>,
    dt: Option<f64>,
    plane: Option<Plane>,
    key: simulate::StreamKey,
) -> Result<FieldGrid> {
    let mut cfg = McConfig::new(source.clone(), domain, 2);
    cfg.spacing = spacing;
    cfg.dt = dt;
    cfg.plane = plane;
    cfg.seed = key.seed;
    cfg.base_dir = base.map(Path::to_path_buf);
    mc::realize(&cfg, key.realization)
}

/// Detects the zeros of a stored grid and writes the CSV; returns its path.
pub fn zeros_to(grid: &Path, out: Option<&Path>) -> Result<PathBuf> {
    let g = FieldGrid::read_binary(BufReader::new(File::open(grid)?))?;
    let zs = zeros::detect_zeros(&g)?;
    let path = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| grid.with_file_name("zeros.csv"));
    let mut w = BufWriter::new(File::create(&path)?);
    zeros::write_zeros_csv(&zs, &mut w)?;
    w.flush()?;
    Ok(path)
}

/// Renders a zeros CSV as SVG; returns the output path.
pub fn plot_to(csv: &Path, out: Option<&Path>, view: Option<Rect>, title: &str) -> Result<PathBuf> {
    let zs = zeros::read_zeros_csv(BufReader::new(File::open(csv)?))?;
    let path = out.map(Path::to_path_buf).unwrap_or_else(|| csv.with_extension("svg"));
    fs::write(&path, plot::render_svg(&zs, view, title))?;
    Ok(path)
}

fn mc_config(a: &McArgs, default_domain: Rect) -> Result<McConfig> {
    let (source, base) = resolve_source(&a.source)?;
    let domain = a.domain.unwrap_or(default_domain);
    let mut cfg = McConfig::new(source, domain, a.realizations).with_seed(parse_seed(&a.seed)?);
    cfg.spacing = a.spacing;
    cfg.dt = a.dt;
    cfg.plane = parse_plane(a.plane.as_deref())?;
    cfg.margin = a.margin;
    cfg.radii = a.radii.clone();
    cfg.base_dir = base;
    Ok(cfg)
}

fn default_domain(a: &McArgs, variance: bool) -> Result<Rect> {
    let kernel_source = a.source.kernel.is_some();
    Ok(if variance || kernel_source || a.plane.as_deref() == Some("gwhf") {
        let r = a.radii.iter().copied().fold(6.0, f64::max);
        Rect::centered(r + 0.5)?
    } else {
        Rect::new(0.0, 8.0, 0.0, 8.0)?
    })
}

fn write_report(report: &McReport, out: Option<&Path>) -> Result<()> {
    let text = report.to_json()?;
    emit(&text)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("report.json"), format!("{text}\n"))?;
        fs::write(dir.join("report.csv"), report.to_csv())?;
    }
    Ok(())
}

/// Invariance suite: one entry per draw and convention.
pub fn invariance_json(source: &FieldSource, base: Option<&Path>, draws: usize, seed: u64) -> Result<(Value, bool)> {
    let FieldSource::Window(spec) = source else {
        return Err(Error::Config("invariance needs a window".into()));
    };
    let g = spec.build(base)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shifts: Vec<[f64; 3]> = (0..draws)
        .map(|_| {
            [
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-0.5..0.5),
            ]
        })
        .collect();
    let mut conventions = serde_json::Map::new();
    let mut default_ok = false;
    for conv in OmegaConvention::ALL {
        let mut worst = 0.0f64;
        let mut failures = 0usize;
        let base_rho = window::rho1_stft_with(&g, conv);
        for [x0, xi0, xi1] in &shifts {
            let after = window::rho1_stft_with(&g.shifted(*x0, *xi0, *xi1), conv);
            match (&base_rho, after) {
                (Ok(b), Ok(a)) => worst = worst.max((a - b).abs()),
                _ => failures += 1,
            }
        }
        let ok = failures == 0 && worst <= INVARIANCE_TOL;
        if conv == OmegaConvention::default() {
            default_ok = ok;
        }
        conventions.insert(
            conv.name().into(),
            json!({
                "rho1_stft": base_rho.as_ref().ok(),
                "max_abs_diff": worst,
                "invalid_draws": failures,
                "pass": ok,
            }),
        );
    }
    Ok((
        json!({
            "check": "invariance",
            "window": g.label(),
            "draws": draws,
            "tolerance": INVARIANCE_TOL,
            "default": OmegaConvention::default().name(),
            "conventions": conventions,
        }),
        default_ok,
    ))
}

/// Separations `d_k` spread over `[0.05, 8]`.
pub fn oracle_separations(n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.05];
    }
    (0..n).map(|k| 0.05 + (8.0 - 0.05) * k as f64 / (n - 1) as f64).collect()
}

/// Largest `|E/(1 - P²) - 1 - I'(d²)|` of a kernel on the separations.
pub fn tau2_oracle_error(p: &RadialKernel, separations: &[f64]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &d in separations {
        let pv = p.p(d * d);
        let e = kernel::wick_oracle_e(p, C64::new(0.0, 0.0), C64::new(d, 0.0))?;
        let lhs = e / (1.0 - pv * pv) - 1.0;
        worst = worst.max((lhs - kernel::i_prime(p, d * d)?).abs());
    }
    Ok(worst)
}

fn tau2_json(kernels: &[String], n: usize) -> Result<(Value, bool)> {
    let seps = oracle_separations(n);
    let mut rows = Vec::new();
    let mut ok = true;
    for k in kernels {
        let p = radial_of(k)?;
        let err = tau2_oracle_error(&p, &seps)?;
        ok &= err <= TAU2_TOL;
        rows.push(json!({"kernel": p.label(), "max_abs_error": err, "pass": err <= TAU2_TOL}));
    }
    Ok((
        json!({"check": "tau2-oracle", "separations": n, "tolerance": TAU2_TOL, "kernels": rows}),
        ok,
    ))
}

/// Worker count: `GWHF_THREADS` if set, else `--threads`.
pub fn thread_count(flag: Option<usize>) -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Config(format!("{THREADS_ENV}=`{v}` is not a thread count"))),
        _ => Ok(flag),
    }
}

fn execute(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Intensity(src) => {
            let (source, base) = resolve_source(&src)?;
            emit(&serde_json::to_string_pretty(&intensity_json(&source, base.as_deref())?)?)?;
            Ok(true)
        }
        Command::VarianceAsymptote { kernel } => {
            emit(&serde_json::to_string_pretty(&variance_json(&kernel)?)?)?;
            Ok(true)
        }
        Command::Simulate(a) => {
            emit(&format!("{}", simulate_to(&a)?.display()))?;
            Ok(true)
        }
        Command::Zeros { grid, out } => {
            emit(&format!("{}", zeros_to(&grid, out.as_deref())?.display()))?;
            Ok(true)
        }
        Command::Plot {
            zeros,
            out,
            domain,
            title,
        } => {
            emit(&format!("{}", plot_to(&zeros, out.as_deref(), domain, &title)?.display()))?;
            Ok(true)
        }
        Command::Verify { suite } => match suite {
            VerifySuite::Intensity(a) => {
                let cfg = mc_config(&a, default_domain(&a, false)?)?;
                let r = mc::estimate_intensity(&cfg)?;
                write_report(&r, a.out.as_deref())?;
                Ok(r.passes(Z_GATE))
            }
            VerifySuite::Charge(a) => {
                let cfg = mc_config(&a, default_domain(&a, false)?)?;
                let r = mc::estimate_charge_intensity(&cfg)?;
                write_report(&r, a.out.as_deref())?;
                Ok(r.passes(Z_GATE))
            }
            VerifySuite::ChargeVariance(a) => {
                let cfg = mc_config(&a, default_domain(&a, true)?)?;
                let r = mc::estimate_charge_variance(&cfg)?;
                write_report(&r, a.out.as_deref())?;
                Ok(r.passes(Z_GATE))
            }
            VerifySuite::Invariance { source, draws, seed } => {
                let (src, base) = resolve_source(&source)?;
                let (v, ok) = invariance_json(&src, base.as_deref(), draws, parse_seed(&seed)?)?;
                emit(&serde_json::to_string_pretty(&v)?)?;
                Ok(ok)
            }
            VerifySuite::Tau2Oracle { kernel, separations } => {
                let kernels = match kernel {
                    Some(k) => vec![k],
                    None => vec!["gef".into(), "laguerre:1".into(), "laguerre:2".into()],
                };
                let (v, ok) = tau2_json(&kernels, separations)?;
                emit(&serde_json::to_string_pretty(&v)?)?;
                Ok(ok)
            }
        },
    }
}

/// Entry point of the binary.
pub fn run() -> ExitCode {
    let cli = Cli::parse();
    let threads = match thread_count(cli.threads) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| execute(cli)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
