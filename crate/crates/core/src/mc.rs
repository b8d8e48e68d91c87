//! Monte Carlo harness: empirical intensities, charge equilibrium and the
//! growth of the charge variance in disks.
//!
//! Realization `k` of a run always uses the stream `(seed, k)`. Per-realization
//! results are collected in index order and reduced serially with
//! compensated summation, so reports do not depend on the thread count.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use num_complex::Complex64 as C64;
use rand::RngExt;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::kernel::{self, KernelFamily, KernelModel, KernelSpec, RadialKernel};
use crate::simulate::{self, FieldGrid, Plane, PolyKind, Rect, StreamKey, DEFAULT_SEED};
use crate::window::{self, AmbiguityKernel, Window, WindowSpec};
use crate::zeros::{self, ChargedZero};
use crate::{Error, Result};

/// Below this many realizations the standard error of a variance is
/// unreliable.
pub const MIN_VARIANCE_REALIZATIONS: usize = 100;

/// Reports pass when every item has `|z|` at most this.
pub const Z_GATE: f64 = 5.0;

/// Default lattice spacing in STFT coordinates.
pub const DEFAULT_STFT_SPACING: f64 = 0.04;

/// Default lattice spacing in GWHF coordinates.
pub const DEFAULT_GWHF_SPACING: f64 = 0.1;

/// Sub-stream used by the Poisson control.
const POISSON_COMPONENT: u64 = 0xff;

/// Where the random field comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldSource {
    /// STFT of white noise with this window.
    Window(WindowSpec),
    /// GWHF with this twisted kernel: `gef` (power series), `laguerre:r`
    /// (pure poly-entire of order `r + 1`) or `laguerre-avg:q` (full
    /// poly-entire of order `q`).
    Kernel(KernelSpec),
}

/// Monte Carlo run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub source: FieldSource,
    /// Counting region, in the coordinates of `plane`.
    pub domain: Rect,
    /// Coordinates of the simulated grid; defaults to STFT for windows and
    /// GWHF for kernels (and for charge variance).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plane: Option<Plane>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spacing: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    pub n_realizations: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Disk radii for the charge variance, centred on the domain centre.
    #[serde(default)]
    pub radii: Vec<f64>,
    /// Distance trimmed from every side of `domain` before counting.
    #[serde(default)]
    pub margin: f64,
    /// Directory for relative sample paths in window specs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_dir: Option<PathBuf>,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

impl McConfig {
    pub fn new(source: FieldSource, domain: Rect, n_realizations: usize) -> Self {
        Self {
            source,
            domain,
            plane: None,
            spacing: None,
            dt: None,
            n_realizations,
            seed: DEFAULT_SEED,
            radii: Vec::new(),
            margin: 0.0,
            base_dir: None,
        }
    }

    pub fn window(spec: WindowSpec, domain: Rect, n_realizations: usize) -> Self {
        Self::new(FieldSource::Window(spec), domain, n_realizations)
    }

    pub fn kernel(spec: KernelSpec, domain: Rect, n_realizations: usize) -> Self {
        Self::new(FieldSource::Kernel(spec), domain, n_realizations)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_spacing(mut self, spacing: f64) -> Self {
        self.spacing = Some(spacing);
        self
    }

    pub fn with_plane(mut self, plane: Plane) -> Self {
        self.plane = Some(plane);
        self
    }

    pub fn with_radii(mut self, radii: Vec<f64>) -> Self {
        self.radii = radii;
        self
    }

    /// The counting region.
    pub fn region(&self) -> Rect {
        self.domain.shrink(self.margin)
    }

    fn validate(&self) -> Result<()> {
        if self.n_realizations < 2 {
            return Err(Error::Config(format!(
                "need at least 2 realizations, got {}",
                self.n_realizations
            )));
        }
        if !(self.margin >= 0.0) || self.region().width() <= 0.0 || self.region().height() <= 0.0 {
            return Err(Error::Config(format!("margin {} leaves no counting region", self.margin)));
        }
        if self.radii.windows(2).any(|w| !(w[0] < w[1])) || self.radii.iter().any(|r| !(*r > 0.0)) {
            return Err(Error::Config("radii must be positive and strictly ascending".into()));
        }
        Ok(())
    }
}

/// What a report measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Density,
    ChargeDensity,
    ChargeVariance,
}

/// One compared statistic. `z = (empirical - theory) / se`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McItem {
    pub label: String,
    pub empirical: f64,
    pub se: f64,
    pub theory: f64,
    pub z: f64,
}

impl McItem {
    pub fn new(label: impl Into<String>, empirical: f64, se: f64, theory: f64) -> Self {
        let z = if se > 0.0 {
            (empirical - theory) / se
        } else if empirical == theory {
            0.0
        } else {
            f64::INFINITY.copysign(empirical - theory)
        };
        Self {
            label: label.into(),
            empirical,
            se,
            theory,
            z,
        }
    }
}

/// Detector bookkeeping summed over realizations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub realizations: usize,
    /// Zeros inside the counting region (degenerate ones included).
    pub zeros: u64,
    pub degenerate: u64,
    pub unrefined: u64,
    /// Non-degenerate zeros whose Jacobian sign disagrees with the winding.
    pub winding_mismatch: u64,
}

impl Diagnostics {
    fn add(&mut self, other: &Diagnostics) {
        self.realizations += other.realizations;
        self.zeros += other.zeros;
        self.degenerate += other.degenerate;
        self.unrefined += other.unrefined;
        self.winding_mismatch += other.winding_mismatch;
    }
}

/// Aggregated Monte Carlo statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub quantity: Quantity,
    /// Statistics gated by `|z| <= Z_GATE`.
    pub items: Vec<McItem>,
    /// Comparisons that are expected to reject (e.g. the Poisson control).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub controls: Vec<McItem>,
    pub diagnostics: Diagnostics,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    pub config: McConfig,
    pub elapsed_s: f64,
}

impl McReport {
    pub fn item(&self, label: &str) -> Option<&McItem> {
        self.items.iter().chain(&self.controls).find(|i| i.label == label)
    }

    /// True when every gated item has `|z| <= limit`.
    pub fn passes(&self, limit: f64) -> bool {
        self.items.iter().all(|i| i.z.abs() <= limit)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// `label,empirical,se,theory,z`, items then controls.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("label,empirical,se,theory,z\n");
        for i in self.items.iter().chain(&self.controls) {
            let _ = writeln!(s, "{},{},{},{},{}", i.label, i.empirical, i.se, i.theory, i.z);
        }
        s
    }
}

/// Compensated (Neumaier) sum in iteration order.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// Sample mean and standard error of the mean.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = compensated_sum(xs.iter().copied()) / n;
    let var = compensated_sum(xs.iter().map(|x| (x - mean) * (x - mean))) / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Unbiased sample variance with a delta-method standard error, plus the
/// centred squares used for ratio standard errors.
fn variance_se(xs: &[f64]) -> (f64, f64, Vec<f64>) {
    let n = xs.len() as f64;
    let mean = compensated_sum(xs.iter().copied()) / n;
    let sq: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
    let (m, se) = mean_se(&sq);
    let k = n / (n - 1.0);
    (m * k, se * k, sq)
}

/// `a / b` for two sample means of paired data, with its delta-method SE.
fn ratio_se(a: &[f64], b: &[f64]) -> (f64, f64) {
    let n = a.len() as f64;
    let ma = compensated_sum(a.iter().copied()) / n;
    let mb = compensated_sum(b.iter().copied()) / n;
    let r = ma / mb;
    let resid: Vec<f64> = a.iter().zip(b).map(|(x, y)| (x - r * y) / mb).collect();
    (r, mean_se(&resid).1)
}

/// Weighted least squares `y = a + b x`; returns `(b, se_b)`.
fn weighted_slope(x: &[f64], y: &[f64], se: &[f64]) -> (f64, f64) {
    let w: Vec<f64> = se.iter().map(|s| 1.0 / (s * s)).collect();
    let sw = compensated_sum(w.iter().copied());
    let sx = compensated_sum(w.iter().zip(x).map(|(w, x)| w * x));
    let sy = compensated_sum(w.iter().zip(y).map(|(w, y)| w * y));
    let sxx = compensated_sum(w.iter().zip(x).map(|(w, x)| w * x * x));
    let sxy = compensated_sum(w.iter().zip(x).zip(y).map(|((w, x), y)| w * x * y));
    let det = sw * sxx - sx * sx;
    ((sw * sxy - sx * sy) / det, (sw / det).sqrt())
}

/// A prepared field generator.
enum Sampler {
    Stft(Window),
    StftAsGwhf(Window),
    Gef(usize),
    Poly(usize, PolyKind),
}

struct Prepared {
    sampler: Sampler,
    plane: Plane,
    spacing: f64,
    /// Radial kernel of the field, in GWHF coordinates, when known.
    radial: Option<RadialKernel>,
    /// Window when the source is a window.
    window: Option<Window>,
}

fn prepare(cfg: &McConfig, quantity: Quantity) -> Result<Prepared> {
    cfg.validate()?;
    let default_plane = match (&cfg.source, quantity) {
        (_, Quantity::ChargeVariance) | (FieldSource::Kernel(_), _) => Plane::Gwhf,
        (FieldSource::Window(_), _) => Plane::Stft,
    };
    let plane = cfg.plane.unwrap_or(default_plane);
    if quantity == Quantity::ChargeVariance && plane != Plane::Gwhf {
        return Err(Error::Config("charge variance is measured in the GWHF plane".into()));
    }
    let spacing = cfg.spacing.unwrap_or(match plane {
        Plane::Stft => DEFAULT_STFT_SPACING,
        Plane::Gwhf => DEFAULT_GWHF_SPACING,
    });
    match &cfg.source {
        FieldSource::Window(spec) => {
            let g = spec.build(cfg.base_dir.as_deref())?;
            let radial = match window::ambiguity_kernel(&g) {
                AmbiguityKernel::Radial(p) => Some(p),
                AmbiguityKernel::Numeric(_) => None,
            };
            let sampler = match plane {
                Plane::Stft => Sampler::Stft(g.clone()),
                Plane::Gwhf => Sampler::StftAsGwhf(g.clone()),
            };
            Ok(Prepared {
                sampler,
                plane,
                spacing,
                radial,
                window: Some(g),
            })
        }
        FieldSource::Kernel(spec) => {
            if plane != Plane::Gwhf {
                return Err(Error::Config("kernel sources are simulated in the GWHF plane".into()));
            }
            let q = spec.q.unwrap_or(0) as usize;
            let sampler = match spec.family {
                KernelFamily::Gef => {
                    let b = cfg.domain;
                    let reach = [b.x0, b.x1]
                        .iter()
                        .flat_map(|x| [b.y0, b.y1].map(|y| C64::new(*x, y).norm()))
                        .fold(0.0, f64::max);
                    let pad = (simulate::MARGIN_POINTS + 2) as f64 * spacing * std::f64::consts::SQRT_2;
                    Sampler::Gef(simulate::required_terms(reach + pad))
                }
                KernelFamily::Laguerre => Sampler::Poly(q + 1, PolyKind::Pure),
                KernelFamily::LaguerreAvg => Sampler::Poly(q, PolyKind::Full),
                KernelFamily::Power | KernelFamily::Custom => {
                    return Err(Error::Config(format!(
                        "{:?} kernels have no field simulator; use gef, laguerre, laguerre-avg or a window",
                        spec.family
                    )))
                }
            };
            let radial = match spec.build()? {
                KernelModel::Radial(p) => Some(p),
                KernelModel::Jet(_) => None,
            };
            Ok(Prepared {
                sampler,
                plane,
                spacing,
                radial,
                window: None,
            })
        }
    }
}

impl Prepared {
    fn realize(&self, cfg: &McConfig, key: StreamKey) -> Result<FieldGrid> {
        match &self.sampler {
            Sampler::Stft(g) => simulate::stft_field(g, cfg.domain, self.spacing, cfg.dt, key),
            Sampler::StftAsGwhf(g) => {
                let s = simulate::stft_field(
                    g,
                    simulate::stft_preimage(cfg.domain),
                    self.spacing / PI.sqrt(),
                    cfg.dt,
                    key,
                )?;
                simulate::to_gwhf_plane(&s)
            }
            Sampler::Gef(n) => simulate::gef_series_field(cfg.domain, self.spacing, *n, key),
            Sampler::Poly(q, kind) => simulate::polyentire_field(*q, *kind, cfg.domain, self.spacing, cfg.dt, key),
        }
    }

    fn density_theory(&self) -> Result<f64> {
        if let Some(g) = &self.window {
            let rho = window::rho1_stft(g)?;
            return Ok(match self.plane {
                Plane::Stft => rho,
                Plane::Gwhf => rho / PI,
            });
        }
        let p = self
            .radial
            .as_ref()
            .ok_or_else(|| Error::Config("no intensity formula for this source".into()))?;
        kernel::rho1_radial(p)
    }

    fn charge_theory(&self) -> f64 {
        match self.plane {
            Plane::Stft => 1.0,
            Plane::Gwhf => kernel::rho1_charged(),
        }
    }
}

/// Realization `k` of the field described by `cfg`, on the grid the
/// Monte Carlo estimators would use.
pub fn realize(cfg: &McConfig, k: u64) -> Result<FieldGrid> {
    let prep = prepare(cfg, Quantity::Density)?;
    prep.realize(cfg, StreamKey::new(cfg.seed, k))
}

/// What one realization contributes.
struct Sample {
    count: f64,
    charge: f64,
    disks: Vec<(f64, f64)>,
    diag: Diagnostics,
}

fn diagnostics(zs: &[&ChargedZero]) -> Diagnostics {
    let mut d = Diagnostics {
        realizations: 1,
        ..Default::default()
    };
    for z in zs {
        d.zeros += 1;
        if z.is_degenerate() {
            d.degenerate += 1;
        } else if z.jacobian_sign != z.winding {
            d.winding_mismatch += 1;
        }
        if !z.refined {
            d.unrefined += 1;
        }
    }
    d
}

fn run(cfg: &McConfig, prep: &Prepared) -> Result<(Vec<Sample>, Diagnostics)> {
    let region = cfg.region();
    let samples: Vec<Sample> = (0..cfg.n_realizations as u64)
        .into_par_iter()
        .map(|k| -> Result<Sample> {
            let grid = prep.realize(cfg, StreamKey::new(cfg.seed, k))?;
            let all = zeros::detect_zeros(&grid)?;
            let inside: Vec<&ChargedZero> = all
                .iter()
                .filter(|z| region.contains(z.position))
                .collect();
            let diag = diagnostics(&inside);
            let kept = inside.iter().filter(|z| !z.is_degenerate());
            let count = kept.clone().count() as f64;
            let charge = kept.map(|z| z.charge as f64).sum();
            let disks = if cfg.radii.is_empty() {
                Vec::new()
            } else {
                let good: Vec<ChargedZero> = all.iter().filter(|z| !z.is_degenerate()).cloned().collect();
                zeros::disk_stats(&good, region.center(), &cfg.radii, region)?
                    .iter()
                    .map(|d| (d.count as f64, d.total_charge as f64))
                    .collect()
            };
            Ok(Sample {
                count,
                charge,
                disks,
                diag,
            })
        })
        .collect::<Result<_>>()?;
    let mut diag = Diagnostics::default();
    samples.iter().for_each(|s| diag.add(&s.diag));
    Ok((samples, diag))
}

fn config_echo(cfg: &McConfig, prep: &Prepared) -> McConfig {
    let mut c = cfg.clone();
    c.plane = Some(prep.plane);
    c.spacing = Some(prep.spacing);
    c
}

/// Mean number of zeros per unit area of the counting region. Theory is
/// `ρ1,g` for windows (divided by `π` in the GWHF plane) and `ρ1` of the
/// radial kernel otherwise.
pub fn estimate_intensity(cfg: &McConfig) -> Result<McReport> {
    let start = Instant::now();
    let prep = prepare(cfg, Quantity::Density)?;
    let theory = prep.density_theory()?;
    let (samples, diag) = run(cfg, &prep)?;
    let area = cfg.region().area();
    let xs: Vec<f64> = samples.iter().map(|s| s.count / area).collect();
    let (m, se) = mean_se(&xs);
    Ok(McReport {
        quantity: Quantity::Density,
        items: vec![McItem::new("density", m, se, theory)],
        controls: Vec::new(),
        diagnostics: diag,
        warnings: Vec::new(),
        config: config_echo(cfg, &prep),
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}

/// Mean signed charge per unit area; theory is 1 in STFT coordinates and
/// `1/π` in the GWHF plane, whatever the window.
pub fn estimate_charge_intensity(cfg: &McConfig) -> Result<McReport> {
    let start = Instant::now();
    let prep = prepare(cfg, Quantity::ChargeDensity)?;
    let (samples, diag) = run(cfg, &prep)?;
    let area = cfg.region().area();
    let xs: Vec<f64> = samples.iter().map(|s| s.charge / area).collect();
    let (m, se) = mean_se(&xs);
    Ok(McReport {
        quantity: Quantity::ChargeDensity,
        items: vec![McItem::new("charge_density", m, se, prep.charge_theory())],
        controls: Vec::new(),
        diagnostics: diag,
        warnings: Vec::new(),
        config: config_echo(cfg, &prep),
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}

/// Total charge in `B_R` for Poisson points of the given density carrying
/// i.i.d. fair `±1` charges; one row per realization, one column per radius.
pub fn poisson_control(density: f64, radii: &[f64], n: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    let r_max = radii.last().copied().unwrap_or(0.0);
    let mean = density * PI * r_max * r_max;
    let law = Poisson::new(mean).map_err(|e| Error::Config(format!("Poisson control: {e}")))?;
    Ok((0..n as u64)
        .map(|k| {
            let mut rng = StreamKey::new(seed, k).rng(POISSON_COMPONENT);
            let count = law.sample(&mut rng) as usize;
            let mut q = vec![0.0; radii.len()];
            for _ in 0..count {
                let r = r_max * rng.random::<f64>().sqrt();
                let c = if rng.random::<bool>() { 1.0 } else { -1.0 };
                for (qi, radius) in q.iter_mut().zip(radii) {
                    if r <= *radius {
                        *qi += c;
                    }
                }
            }
            q
        })
        .collect())
}

/// Index of the radius closest to half of the largest one.
fn half_index(radii: &[f64]) -> usize {
    let target = radii[radii.len() - 1] / 2.0;
    (0..radii.len() - 1)
        .min_by(|a, b| (radii[*a] - target).abs().total_cmp(&(radii[*b] - target).abs()))
        .unwrap_or(0)
}

/// Across-realization variance of the total charge in `B_R` at the centre
/// of the domain (GWHF plane), for each radius in `cfg.radii`.
///
/// Gated items: `var_over_r@R` against the limit of `Var/R` returned by
/// `variance_asymptote`, `var@R` against the exact disk variance
/// `charge_variance_disk`, `fit_slope` (weighted fit of `Var` against `R` on
/// the upper half of the radii) against the same limit, and `var_ratio`
/// (`Var(R_max)/Var(R_half)`) against its exact value. Controls compare the
/// same ratio for Poisson points with i.i.d. charges, whose variance grows
/// like `R^2`.
pub fn estimate_charge_variance(cfg: &McConfig) -> Result<McReport> {
    let start = Instant::now();
    let mut cfg = cfg.clone();
    if cfg.radii.is_empty() {
        cfg.radii = (1..=6).map(f64::from).collect();
    }
    if cfg.radii.len() < 2 {
        return Err(Error::Config("charge variance needs at least two radii".into()));
    }
    let prep = prepare(&cfg, Quantity::ChargeVariance)?;
    let p = prep
        .radial
        .clone()
        .ok_or_else(|| Error::Config("charge variance needs a radial kernel".into()))?;
    let limit = kernel::variance_asymptote(&p)?;
    let mut warnings = Vec::new();
    if cfg.n_realizations < MIN_VARIANCE_REALIZATIONS {
        warnings.push(format!(
            "only {} realizations: the standard error of a variance is chi-square wide below {}",
            cfg.n_realizations, MIN_VARIANCE_REALIZATIONS
        ));
    }
    let (samples, diag) = run(&cfg, &prep)?;
    let radii = cfg.radii.clone();
    let column = |i: usize| -> Vec<f64> { samples.iter().map(|s| s.disks[i].1).collect() };

    let mut items = Vec::new();
    let mut vars = Vec::new();
    let mut sqs = Vec::new();
    for (i, r) in radii.iter().enumerate() {
        let (v, se, sq) = variance_se(&column(i));
        items.push(McItem::new(format!("var_over_r@{r}"), v / r, se / r, limit));
        items.push(McItem::new(format!("var@{r}"), v, se, kernel::charge_variance_disk(&p, *r)?));
        vars.push((v, se));
        sqs.push(sq);
    }
    let upper = radii.len() / 2;
    let (slope, slope_se) = weighted_slope(
        &radii[upper..],
        &vars[upper..].iter().map(|v| v.0).collect::<Vec<_>>(),
        &vars[upper..].iter().map(|v| v.1).collect::<Vec<_>>(),
    );
    items.push(McItem::new("fit_slope", slope, slope_se, limit));

    let top = radii.len() - 1;
    let half = half_index(&radii);
    let (ratio, ratio_se_field) = ratio_se(&sqs[top], &sqs[half]);
    let exact_ratio = kernel::charge_variance_disk(&p, radii[top])? / kernel::charge_variance_disk(&p, radii[half])?;
    items.push(McItem::new("var_ratio", ratio, ratio_se_field, exact_ratio));

    let density = kernel::rho1_radial(&p)?;
    let poisson = poisson_control(density, &radii, cfg.n_realizations, cfg.seed)?;
    let pcol = |i: usize| -> Vec<f64> {
        let xs: Vec<f64> = poisson.iter().map(|q| q[i]).collect();
        let m = compensated_sum(xs.iter().copied()) / xs.len() as f64;
        xs.iter().map(|x| (x - m) * (x - m)).collect()
    };
    let (pratio, pratio_se) = ratio_se(&pcol(top), &pcol(half));
    let r2 = (radii[top] / radii[half]).powi(2);
    let controls = vec![
        McItem::new("poisson_var_ratio", pratio, pratio_se, r2),
        McItem::new(
            "poisson_minus_field_ratio",
            pratio - ratio,
            (pratio_se * pratio_se + ratio_se_field * ratio_se_field).sqrt(),
            0.0,
        ),
    ];
    Ok(McReport {
        quantity: Quantity::ChargeVariance,
        items,
        controls,
        diagnostics: diag,
        warnings,
        config: config_echo(&cfg, &prep),
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}
