//! Realizations of GWHFs on rectangular grids.
//!
//! The canonical path is the STFT of discretized complex white noise,
//!
//! ```text
//! V(x, y) ≈ Σ_k N_k conj(g(t_k - x)) e^{-2πi t_k y} sqrt(dt),   t_k = k dt,
//! ```
//!
//! with i.i.d. standard circular `N_k`. With `y_m = m / (K dt)` the phase is
//! `e^{-2πi k m / K}`, so each column is one length-`K` FFT of the taps folded
//! modulo `K`. The noise record extends past the x-range by the window
//! support, so the field is exactly stationary on the whole grid.
//!
//! A truncated Gaussian entire function series serves as an independent
//! simulator for the Bargmann-Fock kernel.

use std::f64::consts::{E, PI};
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::window::Window;

type C64 = Complex64;

/// Smallest accepted grid side.
pub const MIN_SIDE: usize = 16;
/// Grid points added beyond the requested domain on every side, for the
/// interpolation stencils of the zero detector.
pub const MARGIN_POINTS: usize = 4;
/// Default seed used whenever none is given.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;

/// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        if !(x0 < x1 && y0 < y1) || ![x0, x1, y0, y1].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "empty or non-finite rectangle [{x0}, {x1}] x [{y0}, {y1}]"
            )));
        }
        Ok(Self { x0, x1, y0, y1 })
    }

    /// Square `[-r, r]^2`.
    pub fn centered(r: f64) -> Result<Self> {
        Self::new(-r, r, -r, r)
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn center(&self) -> C64 {
        C64::new(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))
    }

    pub fn contains(&self, z: C64) -> bool {
        z.re >= self.x0 && z.re <= self.x1 && z.im >= self.y0 && z.im <= self.y1
    }

    pub fn shrink(&self, by: f64) -> Self {
        Self {
            x0: self.x0 + by,
            x1: self.x1 - by,
            y0: self.y0 + by,
            y1: self.y1 - by,
        }
    }
}

impl FromStr for Rect {
    type Err = Error;

    /// `x0,x1,y0,y1`
    fn from_str(s: &str) -> Result<Self> {
        let v: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Config(format!("domain `{s}` is not `x0,x1,y0,y1`")))?;
        match v[..] {
            [x0, x1, y0, y1] => Rect::new(x0, x1, y0, y1),
            _ => Err(Error::Config(format!("domain `{s}` needs four numbers"))),
        }
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.x0, self.x1, self.y0, self.y1)
    }
}

/// Coordinate system of a grid: `(x, y)` of the STFT, or `z` of the GWHF
/// `F(z) = e^{-ixy} V(x/√π, -y/√π)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Plane {
    Stft,
    Gwhf,
}

/// Identifies an independent random stream: realization `r` of a run seeded
/// with `seed`. Components of one realization get sub-streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StreamKey {
    pub seed: u64,
    pub realization: u64,
}

impl StreamKey {
    pub fn new(seed: u64, realization: u64) -> Self {
        Self { seed, realization }
    }

    pub fn rng(&self, component: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream((self.realization << 8) | (component & 0xff));
        rng
    }
}

impl From<u64> for StreamKey {
    fn from(seed: u64) -> Self {
        Self::new(seed, 0)
    }
}

/// Noise samples are drawn in blocks of this many time indices; each block
/// starts at a fixed position of the realization's stream, so the sample at
/// time index `k` does not depend on the grid being computed.
pub const NOISE_BLOCK: i64 = 1024;

// Stream words reserved per block (two normals per sample need ~4 words).
const BLOCK_WORDS: u128 = 1 << 16;
const BLOCK_BIAS: i64 = 1 << 40;

/// Circular normal noise at time indices `k_lo..=k_hi`.
pub fn noise_samples(key: StreamKey, component: u64, k_lo: i64, k_hi: i64) -> Vec<C64> {
    let mut out = Vec::with_capacity((k_hi - k_lo + 1).max(0) as usize);
    let mut rng = key.rng(component);
    let mut k = k_lo;
    while k <= k_hi {
        let block = k.div_euclid(NOISE_BLOCK);
        rng.set_word_pos((block + BLOCK_BIAS) as u128 * BLOCK_WORDS);
        let start = block * NOISE_BLOCK;
        for idx in start..start + NOISE_BLOCK {
            let v = circular_normal(&mut rng);
            if idx >= k && idx <= k_hi {
                out.push(v);
            }
        }
        k = start + NOISE_BLOCK;
    }
    out
}

/// Standard circular complex Gaussian: real and imaginary parts `N(0, 1/2)`.
pub fn circular_normal(rng: &mut ChaCha8Rng) -> C64 {
    let a: f64 = StandardNormal.sample(rng);
    let b: f64 = StandardNormal.sample(rng);
    C64::new(a, b) * std::f64::consts::FRAC_1_SQRT_2
}

/// Field samples on the lattice `origin + spacing (i + j·i)`, stored row
/// by row (`values[j * nx + i]`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldGrid {
    #[serde(skip)]
    pub values: Vec<C64>,
    pub nx: usize,
    pub ny: usize,
    pub origin: C64,
    pub spacing: f64,
    pub plane: Plane,
    pub seed: u64,
    pub realization: u64,
    /// Band along every edge excluded from statistics.
    pub margin: f64,
    /// Label of the window or series that produced the grid.
    pub source: String,
}

impl FieldGrid {
    pub fn new(values: Vec<C64>, nx: usize, ny: usize, origin: C64, spacing: f64, plane: Plane) -> Result<Self> {
        if nx < MIN_SIDE || ny < MIN_SIDE {
            return Err(Error::InvalidGrid(format!("grid {nx} x {ny} is smaller than {MIN_SIDE} x {MIN_SIDE}")));
        }
        if values.len() != nx * ny {
            return Err(Error::InvalidGrid(format!("{} values for a {nx} x {ny} grid", values.len())));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::InvalidGrid(format!("spacing must be positive, got {spacing}")));
        }
        Ok(Self {
            values,
            nx,
            ny,
            origin,
            spacing,
            plane,
            seed: 0,
            realization: 0,
            margin: 0.0,
            source: String::new(),
        })
    }

    /// Samples a function on a grid that covers `domain` plus `MARGIN_POINTS`
    /// on each side.
    pub fn sample(domain: Rect, spacing: f64, plane: Plane, f: impl Fn(C64) -> C64) -> Result<Self> {
        let (origin, nx, ny) = lattice_covering(domain, spacing)?;
        let mut values = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                values.push(f(origin + C64::new(i as f64 * spacing, j as f64 * spacing)));
            }
        }
        let mut g = Self::new(values, nx, ny, origin, spacing, plane)?;
        g.margin = MARGIN_POINTS as f64 * spacing;
        Ok(g)
    }

    pub fn point(&self, i: usize, j: usize) -> C64 {
        self.origin + C64::new(i as f64 * self.spacing, j as f64 * self.spacing)
    }

    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.values[j * self.nx + i]
    }

    pub fn bounds(&self) -> Rect {
        Rect {
            x0: self.origin.re,
            x1: self.origin.re + (self.nx - 1) as f64 * self.spacing,
            y0: self.origin.im,
            y1: self.origin.im + (self.ny - 1) as f64 * self.spacing,
        }
    }

    /// Region outside the margin band.
    pub fn interior(&self) -> Rect {
        self.bounds().shrink(self.margin)
    }

    /// Mean of `|F|^2` over interior points.
    pub fn interior_power(&self) -> f64 {
        let inner = self.interior();
        let (mut sum, mut n) = (0.0, 0usize);
        for j in 0..self.ny {
            for i in 0..self.nx {
                if inner.contains(self.point(i, j)) {
                    sum += self.at(i, j).norm_sqr();
                    n += 1;
                }
            }
        }
        sum / n.max(1) as f64
    }

    /// Mean of `|F|^2` per grid row over the interior.
    pub fn row_power(&self) -> Vec<f64> {
        let inner = self.interior();
        (0..self.ny)
            .filter(|&j| {
                let y = self.point(0, j).im;
                y >= inner.y0 && y <= inner.y1
            })
            .map(|j| {
                let cols: Vec<usize> = (0..self.nx)
                    .filter(|&i| inner.contains(self.point(i, j)))
                    .collect();
                cols.iter().map(|&i| self.at(i, j).norm_sqr()).sum::<f64>() / cols.len().max(1) as f64
            })
            .collect()
    }

    /// Binary container: `GWHFGRID`, a little-endian `u32` header length,
    /// the JSON header, then `nx * ny` little-endian `f32` (re, im) pairs
    /// in row-major order.
    pub fn write_binary(&self, mut w: impl Write) -> Result<()> {
        let header = serde_json::to_vec(self)?;
        w.write_all(MAGIC)?;
        w.write_all(&(header.len() as u32).to_le_bytes())?;
        w.write_all(&header)?;
        let mut buf = Vec::with_capacity(8 * self.values.len());
        for v in &self.values {
            buf.extend_from_slice(&(v.re as f32).to_le_bytes());
            buf.extend_from_slice(&(v.im as f32).to_le_bytes());
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn read_binary(mut r: impl Read) -> Result<Self> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Parse("not a GWHF grid file".into()));
        }
        let mut len = [0u8; 4];
        r.read_exact(&mut len)?;
        let mut header = vec![0u8; u32::from_le_bytes(len) as usize];
        r.read_exact(&mut header)?;
        let mut grid: FieldGrid = serde_json::from_slice(&header)?;
        let n = grid
            .nx
            .checked_mul(grid.ny)
            .filter(|&n| n <= 1 << 28)
            .ok_or_else(|| Error::Parse("grid header has an implausible size".into()))?;
        let mut body = vec![0u8; 8 * n];
        r.read_exact(&mut body)?;
        grid.values = body
            .chunks_exact(8)
            .map(|c| {
                let re = f32::from_le_bytes([c[0], c[1], c[2], c[3]]);
                let im = f32::from_le_bytes([c[4], c[5], c[6], c[7]]);
                C64::new(re as f64, im as f64)
            })
            .collect();
        FieldGrid::new(grid.values.clone(), grid.nx, grid.ny, grid.origin, grid.spacing, grid.plane)?;
        Ok(grid)
    }

    /// CSV with header `x,y,re,im`.
    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "x,y,re,im")?;
        for j in 0..self.ny {
            for i in 0..self.nx {
                let (z, v) = (self.point(i, j), self.at(i, j));
                writeln!(w, "{:.9e},{:.9e},{:.9e},{:.9e}", z.re, z.im, v.re, v.im)?;
            }
        }
        Ok(())
    }
}

const MAGIC: &[u8; 8] = b"GWHFGRID";

fn lattice_covering(domain: Rect, spacing: f64) -> Result<(C64, usize, usize)> {
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(Error::InvalidGrid(format!("spacing must be positive, got {spacing}")));
    }
    let pad = MARGIN_POINTS as f64;
    let i0 = (domain.x0 / spacing).floor() - pad;
    let i1 = (domain.x1 / spacing).ceil() + pad;
    let j0 = (domain.y0 / spacing).floor() - pad;
    let j1 = (domain.y1 / spacing).ceil() + pad;
    let nx = (i1 - i0) as usize + 1;
    let ny = (j1 - j0) as usize + 1;
    if nx < MIN_SIDE || ny < MIN_SIDE {
        return Err(Error::InvalidGrid(format!(
            "spacing {spacing} gives only {nx} x {ny} points, need {MIN_SIDE} per side"
        )));
    }
    Ok((C64::new(i0 * spacing, j0 * spacing), nx, ny))
}

/// Discretization of the white-noise pairing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StftPlan {
    pub dt: f64,
    /// FFT length; the frequency spacing is `1 / (fft_len * dt)`.
    pub fft_len: usize,
    /// Spacing actually used on both axes.
    pub spacing: f64,
    pub requested_spacing: f64,
}

/// Largest `dt` accepted for a window: `1 / (8 W)` with `W` its frequency
/// extent, also keeping `|y| + W` inside the half sampling band `1/(2 dt)`.
pub fn max_dt(g: &Window, domain: Rect) -> Result<f64> {
    let w = g.frequency_extent()?;
    let ymax = domain.y0.abs().max(domain.y1.abs());
    Ok((1.0 / (8.0 * w)).min(1.0 / (2.0 * (ymax + w))))
}

pub fn plan_stft(g: &Window, domain: Rect, spacing: f64, dt: Option<f64>) -> Result<StftPlan> {
    let w = g.frequency_extent()?;
    let limit = max_dt(g, domain)?;
    let dt = dt.unwrap_or(limit);
    if !(dt > 0.0) {
        return Err(Error::Config(format!("dt must be positive, got {dt}")));
    }
    if dt > 1.0 / (8.0 * w) * (1.0 + 1e-12) {
        return Err(Error::Config(format!(
            "dt = {dt} under-resolves the window: need dt <= 1/(8 W) = {} (W = {w:.4})",
            1.0 / (8.0 * w)
        )));
    }
    let ymax = domain.y0.abs().max(domain.y1.abs()) + (MARGIN_POINTS + 1) as f64 * spacing;
    if ymax + w > 0.5 / dt {
        return Err(Error::AliasBand(format!(
            "|y| up to {ymax:.4} plus window band {w:.4} exceeds the alias-free band 1/(2 dt) = {:.4}",
            0.5 / dt
        )));
    }
    let fft_len = (1.0 / (spacing * dt)).round().max(1.0) as usize;
    Ok(StftPlan {
        dt,
        fft_len,
        spacing: 1.0 / (fft_len as f64 * dt),
        requested_spacing: spacing,
    })
}

/// STFT of discretized complex white noise in STFT coordinates. The
/// returned spacing is the FFT-compatible value closest to the request.
pub fn stft_field(
    g: &Window,
    domain: Rect,
    spacing: f64,
    dt: Option<f64>,
    key: impl Into<StreamKey>,
) -> Result<FieldGrid> {
    let plan = plan_stft(g, domain, spacing, dt)?;
    stft_field_planned(g, domain, &plan, key.into(), 0)
}

/// Window samples `conj(g(t_k - x_i))` for every column, shared by all
/// realizations on the same grid.
struct Taps {
    k_lo: i64,
    k_hi: i64,
    columns: Vec<(i64, Vec<C64>)>,
}

fn taps(g: &Window, origin_x: f64, nx: usize, plan: &StftPlan) -> Taps {
    let (lo, hi) = g.support();
    let dt = plan.dt;
    let x_lo = origin_x;
    let x_hi = origin_x + (nx - 1) as f64 * plan.spacing;
    let k_lo = ((x_lo + lo) / dt).floor() as i64;
    let k_hi = ((x_hi + hi) / dt).ceil() as i64;
    let sq = dt.sqrt();
    let columns = (0..nx)
        .map(|i| {
            let x = origin_x + i as f64 * plan.spacing;
            let first = (((x + lo) / dt).floor() as i64).max(k_lo);
            let last = (((x + hi) / dt).ceil() as i64).min(k_hi);
            let w = (first..=last)
                .map(|k| g.eval(k as f64 * dt - x).conj() * sq)
                .collect();
            (first, w)
        })
        .collect();
    Taps { k_lo, k_hi, columns }
}

fn stft_field_planned(g: &Window, domain: Rect, plan: &StftPlan, key: StreamKey, component: u64) -> Result<FieldGrid> {
    let (origin, nx, ny) = lattice_covering(domain, plan.spacing)?;
    let t = taps(g, origin.re, nx, plan);
    let noise = noise_samples(key, component, t.k_lo, t.k_hi);
    let values = stft_columns(&t, &noise, origin.im, nx, ny, plan);
    let mut grid = FieldGrid::new(values, nx, ny, origin, plan.spacing, Plane::Stft)?;
    grid.seed = key.seed;
    grid.realization = key.realization;
    grid.margin = MARGIN_POINTS as f64 * plan.spacing;
    grid.source = g.label().to_string();
    Ok(grid)
}

fn stft_columns(t: &Taps, noise: &[C64], origin_y: f64, nx: usize, ny: usize, plan: &StftPlan) -> Vec<C64> {
    let k_len = plan.fft_len as i64;
    let fft = FftPlanner::new().plan_fft_forward(plan.fft_len);
    let m0 = (origin_y / plan.spacing).round() as i64;
    let mut values = vec![C64::new(0.0, 0.0); nx * ny];
    let mut buf = vec![C64::new(0.0, 0.0); plan.fft_len];
    for (i, (first, w)) in t.columns.iter().enumerate() {
        buf.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
        for (off, wk) in w.iter().enumerate() {
            let k = first + off as i64;
            buf[k.rem_euclid(k_len) as usize] += noise[(k - t.k_lo) as usize] * wk;
        }
        fft.process(&mut buf);
        for j in 0..ny {
            let m = (m0 + j as i64).rem_euclid(k_len) as usize;
            values[j * nx + i] = buf[m];
        }
    }
    values
}

/// `F(z) = e^{-ixy} V(x/√π, -y/√π)`: rows are flipped, the spacing grows by
/// `√π`, and densities shrink by `π`.
pub fn to_gwhf_plane(grid: &FieldGrid) -> Result<FieldGrid> {
    if grid.plane == Plane::Gwhf {
        return Err(Error::AlreadyGwhf);
    }
    let sp = PI.sqrt();
    let (nx, ny) = (grid.nx, grid.ny);
    let top = grid.origin.im + (ny - 1) as f64 * grid.spacing;
    let origin = C64::new(sp * grid.origin.re, -sp * top);
    let spacing = sp * grid.spacing;
    let mut values = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let z = origin + C64::new(i as f64 * spacing, j as f64 * spacing);
            values.push(C64::from_polar(1.0, -z.re * z.im) * grid.at(i, ny - 1 - j));
        }
    }
    let mut out = FieldGrid::new(values, nx, ny, origin, spacing, Plane::Gwhf)?;
    out.seed = grid.seed;
    out.realization = grid.realization;
    out.margin = sp * grid.margin;
    out.source = grid.source.clone();
    Ok(out)
}

/// STFT-plane rectangle whose image under `(a, b) ↦ √π (a - ib)` is `domain`.
pub fn stft_preimage(domain: Rect) -> Rect {
    let sp = PI.sqrt();
    Rect {
        x0: domain.x0 / sp,
        x1: domain.x1 / sp,
        y0: -domain.y1 / sp,
        y1: -domain.y0 / sp,
    }
}

/// Fewest series terms for a grid reaching out to `|z| = r_max`.
pub fn required_terms(r_max: f64) -> usize {
    (E * r_max * r_max + 10.0 * r_max).ceil() as usize
}

/// `e^{-|z|^2/2} Σ_{n<N} ξ_n z^n / sqrt(n!)` on a grid covering `domain`.
pub fn gef_series_field(domain: Rect, spacing: f64, n_terms: usize, key: impl Into<StreamKey>) -> Result<FieldGrid> {
    gef_series(domain, spacing, n_terms, key.into(), true)
}

/// The entire function `Σ_{n<N} ξ_n z^n / sqrt(n!)` without the Gaussian
/// weight, with the same coefficients as `gef_series_field`.
pub fn gef_series_entire_field(domain: Rect, spacing: f64, n_terms: usize, key: impl Into<StreamKey>) -> Result<FieldGrid> {
    gef_series(domain, spacing, n_terms, key.into(), false)
}

fn gef_series(domain: Rect, spacing: f64, n_terms: usize, key: StreamKey, weighted: bool) -> Result<FieldGrid> {
    let (origin, nx, ny) = lattice_covering(domain, spacing)?;
    let far = [
        origin,
        origin + C64::new((nx - 1) as f64 * spacing, 0.0),
        origin + C64::new(0.0, (ny - 1) as f64 * spacing),
        origin + C64::new((nx - 1) as f64 * spacing, (ny - 1) as f64 * spacing),
    ]
    .iter()
    .map(|z| z.norm())
    .fold(0.0, f64::max);
    let required = required_terms(far);
    if n_terms < required {
        return Err(Error::Truncation {
            required,
            given: n_terms,
        });
    }
    let mut rng = key.rng(0);
    let xi: Vec<C64> = (0..n_terms).map(|_| circular_normal(&mut rng)).collect();
    let scale: Vec<f64> = (1..n_terms).map(|n| 1.0 / (n as f64).sqrt()).collect();
    let mut values = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let z = origin + C64::new(i as f64 * spacing, j as f64 * spacing);
            // z^n e^{-|z|^2/2} / sqrt(n!) stays bounded by 1
            let weight = (-0.5 * z.norm_sqr()).exp();
            let mut term = C64::new(weight, 0.0);
            let mut acc = xi[0] * term;
            for n in 1..n_terms {
                term *= z * scale[n - 1];
                acc += xi[n] * term;
            }
            values.push(if weighted { acc } else { acc / weight });
        }
    }
    let mut grid = FieldGrid::new(values, nx, ny, origin, spacing, Plane::Gwhf)?;
    grid.seed = key.seed;
    grid.realization = key.realization;
    grid.margin = MARGIN_POINTS as f64 * spacing;
    grid.source = if weighted { "gef-series" } else { "gef-series-entire" }.into();
    Ok(grid)
}

/// Pure or full poly-entire fields of order `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolyKind {
    Pure,
    Full,
}

impl FromStr for PolyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pure" => Ok(PolyKind::Pure),
            "full" => Ok(PolyKind::Full),
            _ => Err(Error::Config(format!("poly kind `{s}` is not pure or full"))),
        }
    }
}

/// Largest supported poly-entire order.
pub const MAX_POLY_ORDER: usize = 8;

/// Poly-entire GWHF on `domain` (GWHF-plane coordinates). The pure type of
/// order `q` is the STFT field with window `h_{q-1}`; the full type is
/// `q^{-1/2} Σ_{k<q}` of independent pure fields with windows `h_k`, which
/// share the grid and use sub-streams `k` of the realization.
pub fn polyentire_field(
    q: usize,
    kind: PolyKind,
    domain: Rect,
    spacing: f64,
    dt: Option<f64>,
    key: impl Into<StreamKey>,
) -> Result<FieldGrid> {
    if q == 0 || q > MAX_POLY_ORDER {
        return Err(Error::Config(format!("poly-entire order must be in 1..={MAX_POLY_ORDER}, got {q}")));
    }
    let key = key.into();
    let sdomain = stft_preimage(domain);
    let sspacing = spacing / PI.sqrt();
    // the widest window fixes the discretization for every component
    let widest = Window::hermite(q - 1)?;
    let plan = plan_stft(&widest, sdomain, sspacing, dt)?;
    let stft = match kind {
        PolyKind::Pure => stft_field_planned(&widest, sdomain, &plan, key, 0)?,
        PolyKind::Full => {
            let mut sum: Option<FieldGrid> = None;
            for k in 0..q {
                let part = stft_field_planned(&Window::hermite(k)?, sdomain, &plan, key, k as u64)?;
                sum = Some(match sum {
                    None => part,
                    Some(mut acc) => {
                        acc.values.iter_mut().zip(&part.values).for_each(|(a, b)| *a += b);
                        acc
                    }
                });
            }
            let mut grid = sum.expect("q >= 1");
            let s = 1.0 / (q as f64).sqrt();
            grid.values.iter_mut().for_each(|v| *v *= s);
            grid
        }
    };
    let mut grid = to_gwhf_plane(&stft)?;
    grid.source = format!("poly-{}:{q}", if kind == PolyKind::Pure { "pure" } else { "full" });
    Ok(grid)
}
