//! Charged zeros of a sampled field.
//!
//! Every lattice plaquette is scanned for phase winding: the principal-branch
//! phase increments along its four edges sum to `2π · winding`. Flagged cells
//! are refined by Newton iteration on a tensor Lagrange interpolant, and the
//! sign of the Jacobian `jac F = -Im[F_x conj(F_y)]` at the refined position
//! is kept as an independent orientation check.
//!
//! Both planes carry a phase drift that grows with the distance from the
//! coordinate origin: `F(ζ + δ) ~ e^{i Im(δ conj ζ)} F(δ)` for a GWHF and
//! `V(x0 + a, y0 + b) ~ e^{-2πi b x0} V(a, b)` for an STFT. Each cell is
//! demodulated by the matching plane wave centred on the cell before phases
//! are compared or interpolated. The factor is smooth, single-valued and
//! unimodular, so windings and Jacobian signs at zeros are unchanged.
//!
//! Charges follow the plane of the grid. In the GWHF plane the charge is the
//! winding; in the STFT plane it is minus the winding, since the map to the
//! GWHF plane reverses orientation.

use std::f64::consts::PI;
use std::collections::HashMap;
use std::io::{BufRead, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simulate::{FieldGrid, Plane, Rect};

type C64 = Complex64;

/// Newton stops once a step moves less than this (in cell units).
pub const NEWTON_STEP_TOL: f64 = 1e-13;
pub const NEWTON_MAX_STEPS: usize = 20;
/// A refined zero must have `|F| < RESIDUAL_RATIO * local rms |F|`.
pub const RESIDUAL_RATIO: f64 = 1e-3;
/// Jacobians below `DEGENERATE_RATIO * |∇F|^2` get no sign.
pub const DEGENERATE_RATIO: f64 = 1e-12;
/// Subdivision used once for cells with `|winding| >= 2`.
pub const SUBDIVISION: usize = 4;
/// A zero polished inside a sub-square may sit this far (in side lengths)
/// outside it.
pub const CELL_SLACK: f64 = 0.1;
/// Zeros closer than this many spacings to another zero get a finite
/// difference step of a quarter of their separation.
pub const CROWDING: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChargedZero {
    pub position: C64,
    /// ±1 in the convention of the grid's plane.
    pub charge: i32,
    /// Phase winding of the plaquette, counter-clockwise in grid coordinates.
    pub winding: i32,
    /// False when Newton did not converge and the bilinear zero was used.
    pub refined: bool,
    /// Sign of `jac F` at the position; 0 when degenerate.
    pub jacobian_sign: i32,
}

impl ChargedZero {
    pub fn is_degenerate(&self) -> bool {
        self.jacobian_sign == 0
    }
}

/// Charge carried by a zero of the given winding in the given plane.
pub fn charge_for(plane: Plane, winding: i32) -> i32 {
    match plane {
        Plane::Gwhf => winding,
        Plane::Stft => -winding,
    }
}

// An exact zero sample is nudged off the lattice point in a fixed direction,
// so the zero is attributed to exactly one adjacent cell.
fn nonzero(v: C64) -> C64 {
    if v == C64::new(0.0, 0.0) {
        C64::new(1e-300, 1e-300)
    } else {
        v
    }
}

fn winding_of(corners: [C64; 4]) -> i32 {
    let mut total = 0.0;
    for k in 0..4 {
        let (a, b) = (nonzero(corners[k]), nonzero(corners[(k + 1) % 4]));
        total += (b / a).arg();
    }
    (total / (2.0 * PI)).round() as i32
}

/// Unimodular factor removing the local phase drift around `zeta`.
pub fn gauge(plane: Plane, zeta: C64, z: C64) -> C64 {
    let phase = match plane {
        Plane::Gwhf => -(z * zeta.conj()).im,
        Plane::Stft => 2.0 * PI * (z.im - zeta.im) * zeta.re,
    };
    C64::from_polar(1.0, phase)
}

fn cell_center(grid: &FieldGrid, i: usize, j: usize) -> C64 {
    grid.point(i, j) + C64::new(0.5 * grid.spacing, 0.5 * grid.spacing)
}

fn gauged(grid: &FieldGrid, i: usize, j: usize, zeta: C64) -> C64 {
    grid.at(i, j) * gauge(grid.plane, zeta, grid.point(i, j))
}

fn cell_corners(grid: &FieldGrid, i: usize, j: usize) -> [C64; 4] {
    let zeta = cell_center(grid, i, j);
    [
        gauged(grid, i, j, zeta),
        gauged(grid, i + 1, j, zeta),
        gauged(grid, i + 1, j + 1, zeta),
        gauged(grid, i, j + 1, zeta),
    ]
}

// Gauge phase gained from `a` to `b` when demodulating around the edge
// midpoint: the drift the field is expected to show along the edge.
fn edge_drift(plane: Plane, a: C64, b: C64) -> f64 {
    let m = 0.5 * (a + b);
    match plane {
        Plane::Gwhf => -((b - a) * m.conj()).im,
        Plane::Stft => 2.0 * PI * (b.im - a.im) * m.re,
    }
}

// Phase increment of the field along an edge: principal branch of the
// demodulated increment, with the drift added back. Depends only on the
// edge, so neighbouring cells agree on shared edges.
fn edge_increment(plane: Plane, za: C64, fa: C64, zb: C64, fb: C64) -> f64 {
    let drift = edge_drift(plane, za, zb);
    let step = (nonzero(fb) / nonzero(fa)).arg() + drift;
    let wrapped = step - 2.0 * PI * (step / (2.0 * PI)).round();
    wrapped - drift
}

/// Edge increments above this are resampled through the interpolant.
pub const EDGE_REFINE: f64 = PI / 3.0;
/// Bisection depth for resampled edges.
pub const EDGE_DEPTH: usize = 16;

// Phase increment of the field along the edge from node `a` to node `b`.
// Large steps are bisected through the interpolant until every piece turns
// by less than `EDGE_REFINE`.
fn edge_phase(grid: &FieldGrid, a: (usize, usize), b: (usize, usize)) -> f64 {
    let (za, zb) = (grid.point(a.0, a.1), grid.point(b.0, b.1));
    let coarse = edge_increment(grid.plane, za, grid.at(a.0, a.1), zb, grid.at(b.0, b.1));
    if coarse.abs() <= EDGE_REFINE {
        return coarse;
    }
    let m = 0.5 * (za + zb);
    let ga = grid.at(a.0, a.1) * gauge(grid.plane, m, za);
    let gb = grid.at(b.0, b.1) * gauge(grid.plane, m, zb);
    bisect_phase(grid, m, (za, ga), (zb, gb), EDGE_DEPTH) - edge_drift(grid.plane, za, zb)
}

// Phase turned by the field demodulated around `m` from `a` to `b`.
fn bisect_phase(grid: &FieldGrid, m: C64, a: (C64, C64), b: (C64, C64), depth: usize) -> f64 {
    let step = (nonzero(b.1) / nonzero(a.1)).arg();
    if step.abs() <= EDGE_REFINE || depth == 0 {
        return step;
    }
    let zc = 0.5 * (a.0 + b.0);
    let c = (zc, interpolate_gauged(grid, zc, m).0);
    bisect_phase(grid, m, a, c, depth - 1) + bisect_phase(grid, m, c, b, depth - 1)
}

/// Phase winding of the plaquette with lower-left corner `(i, j)`.
pub fn cell_winding(grid: &FieldGrid, i: usize, j: usize) -> i32 {
    let idx = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
    let total: f64 = (0..4).map(|k| edge_phase(grid, idx[k], idx[(k + 1) % 4])).sum();
    (total / (2.0 * PI)).round() as i32
}

/// Zeros whose refined position lies in the grid interior, in lexicographic
/// cell order (row, then column).
pub fn detect_zeros(grid: &FieldGrid) -> Result<Vec<ChargedZero>> {
    let inner = grid.interior();
    if !(inner.x0 < inner.x1 && inner.y0 < inner.y1) {
        return Err(Error::InvalidGrid("grid interior is empty".into()));
    }
    let rows: Vec<Result<Vec<ChargedZero>>> = (0..grid.ny - 1)
        .into_par_iter()
        .map(|j| {
            let mut out = Vec::new();
            for i in 0..grid.nx - 1 {
                let w = cell_winding(grid, i, j);
                if w == 0 {
                    continue;
                }
                if w.abs() == 1 {
                    out.push(zero_in_cell(grid, i, j, w));
                } else {
                    out.extend(subdivide(grid, i, j, w)?);
                }
            }
            Ok(out)
        })
        .collect();
    let mut zeros = Vec::new();
    for r in rows {
        zeros.extend(r?);
    }
    resolve_crowded(grid, &mut zeros);
    zeros.retain(|z| inner.contains(z.position));
    Ok(zeros)
}

// A difference stencil wider than the gap to a neighbouring zero measures
// the pair rather than the zero: shrink it below the separation.
fn resolve_crowded(grid: &FieldGrid, zeros: &mut [ChargedZero]) {
    let reach = CROWDING * grid.spacing;
    let key = |z: C64| ((z.re / reach).floor() as i64, (z.im / reach).floor() as i64);
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (k, z) in zeros.iter().enumerate() {
        buckets.entry(key(z.position)).or_default().push(k);
    }
    let gaps: Vec<f64> = zeros
        .iter()
        .enumerate()
        .map(|(k, z)| {
            let (bx, by) = key(z.position);
            let mut gap = f64::INFINITY;
            for dx in -1..=1 {
                for dy in -1..=1 {
                    for &m in buckets.get(&(bx + dx, by + dy)).map_or(&[][..], |v| v.as_slice()) {
                        if m != k {
                            gap = gap.min((zeros[m].position - z.position).norm());
                        }
                    }
                }
            }
            gap
        })
        .collect();
    for (z, gap) in zeros.iter_mut().zip(gaps) {
        if gap < reach && gap > 0.0 {
            z.jacobian_sign = charge_with_step(grid, z.position, 0.25 * gap).unwrap_or(0);
        }
    }
}

fn zero_in_cell(grid: &FieldGrid, i: usize, j: usize, winding: i32) -> ChargedZero {
    let (position, refined) = refine_zero(grid, i, j);
    ChargedZero {
        position,
        charge: charge_for(grid.plane, winding),
        winding,
        refined,
        jacobian_sign: charge_at(grid, position, cell_center(grid, i, j)).unwrap_or(0),
    }
}

// One pass of 4x subdivision through the interpolant.
fn subdivide(grid: &FieldGrid, i: usize, j: usize, winding: i32) -> Result<Vec<ChargedZero>> {
    let n = SUBDIVISION;
    let h = grid.spacing;
    let base = grid.point(i, j);
    let zeta = cell_center(grid, i, j);
    let sample = |a: usize, b: usize| {
        interpolate_gauged(grid, base + C64::new(a as f64 * h / n as f64, b as f64 * h / n as f64), zeta).0
    };
    let mut out = Vec::new();
    for b in 0..n {
        for a in 0..n {
            let w = winding_of([sample(a, b), sample(a + 1, b), sample(a + 1, b + 1), sample(a, b + 1)]);
            if w == 0 {
                continue;
            }
            if w.abs() > 1 {
                return Err(Error::Resolution { ix: i, iy: j, winding });
            }
            let start = base + C64::new((a as f64 + 0.5) * h / n as f64, (b as f64 + 0.5) * h / n as f64);
            let lo = base + C64::new(a as f64 * h / n as f64, b as f64 * h / n as f64);
            let (position, refined) = match newton(grid, start, zeta, 0.5 / n as f64, lo, h / n as f64, CELL_SLACK) {
                Some(p) => (p, true),
                None => (start, false),
            };
            out.push(ChargedZero {
                position,
                charge: charge_for(grid.plane, w),
                winding: w,
                refined,
                jacobian_sign: charge_at(grid, position, zeta).unwrap_or(0),
            });
        }
    }
    if out.iter().map(|z| z.winding).sum::<i32>() != winding {
        return Err(Error::Resolution { ix: i, iy: j, winding });
    }
    Ok(out)
}

// Lagrange weights and their derivatives at `u` for the nodes
// `1 - M/2, ..., M/2`.
fn lagrange<const M: usize>(u: f64) -> ([f64; M], [f64; M]) {
    let t = |k: usize| k as f64 + 1.0 - (M / 2) as f64;
    let mut v = [0.0; M];
    let mut d = [0.0; M];
    for k in 0..M {
        let mut denom = 1.0;
        let mut prod = 1.0;
        for m in (0..M).filter(|&m| m != k) {
            denom *= t(k) - t(m);
            prod *= u - t(m);
        }
        v[k] = prod / denom;
        let mut sum = 0.0;
        for l in (0..M).filter(|&l| l != k) {
            let mut p = 1.0;
            for m in (0..M).filter(|&m| m != k && m != l) {
                p *= u - t(m);
            }
            sum += p;
        }
        d[k] = sum / denom;
    }
    (v, d)
}

fn cell_of(grid: &FieldGrid, z: C64) -> (usize, usize) {
    let h = grid.spacing;
    let i = (((z.re - grid.origin.re) / h).floor().max(0.0) as usize).min(grid.nx - 2);
    let j = (((z.im - grid.origin.im) / h).floor().max(0.0) as usize).min(grid.ny - 2);
    (i, j)
}

/// Value and partial derivatives `(F, F_x, F_y)` of the local interpolant:
/// an 8x8 Lagrange stencil, shrinking to 4x4 and then bilinear near the grid edge.
pub fn interpolate(grid: &FieldGrid, z: C64) -> (C64, C64, C64) {
    let (i, j) = cell_of(grid, z);
    let zeta = cell_center(grid, i, j);
    let (f, fx, fy) = interpolate_gauged(grid, z, zeta);
    // undo the gauge: F = G / u with u = e^{iφ}, φ linear
    let u = gauge(grid.plane, zeta, z);
    let (px, py) = match grid.plane {
        Plane::Gwhf => (zeta.im, -zeta.re),
        Plane::Stft => (0.0, 2.0 * PI * zeta.re),
    };
    let i_unit = C64::new(0.0, 1.0);
    let g = f / u;
    (g, fx / u - i_unit * px * g, fy / u - i_unit * py * g)
}

/// Interpolant of the field demodulated around `zeta`.
fn interpolate_gauged(grid: &FieldGrid, z: C64, zeta: C64) -> (C64, C64, C64) {
    let (i, j) = cell_of(grid, z);
    let fits = |m: usize| i + 1 >= m / 2 && j + 1 >= m / 2 && i + m / 2 < grid.nx && j + m / 2 < grid.ny;
    if fits(STENCIL) {
        stencil_interpolant::<STENCIL>(grid, z, zeta)
    } else if fits(4) {
        stencil_interpolant::<4>(grid, z, zeta)
    } else {
        bilinear_interpolant(grid, z, zeta)
    }
}

/// Points per axis of the interpolation stencil away from the grid edge.
pub const STENCIL: usize = 8;

// The gauge factor splits into a product of one factor per axis.
fn gauge_axes(plane: Plane, zeta: C64, x: f64, y: f64) -> (C64, C64) {
    match plane {
        Plane::Gwhf => (C64::from_polar(1.0, x * zeta.im), C64::from_polar(1.0, -y * zeta.re)),
        Plane::Stft => (C64::new(1.0, 0.0), C64::from_polar(1.0, 2.0 * PI * (y - zeta.im) * zeta.re)),
    }
}

fn stencil_interpolant<const M: usize>(grid: &FieldGrid, z: C64, zeta: C64) -> (C64, C64, C64) {
    let h = grid.spacing;
    let (i, j) = cell_of(grid, z);
    let u = (z.re - grid.origin.re) / h - i as f64;
    let v = (z.im - grid.origin.im) / h - j as f64;
    let (lu, du) = lagrange::<M>(u);
    let (lv, dv) = lagrange::<M>(v);
    let (i0, j0) = (i + 1 - M / 2, j + 1 - M / 2);
    let gx: Vec<C64> = (0..M).map(|a| gauge_axes(grid.plane, zeta, grid.point(i0 + a, j0).re, 0.0).0).collect();
    let zero = C64::new(0.0, 0.0);
    let (mut f, mut fx, mut fy) = (zero, zero, zero);
    for b in 0..M {
        let gy = gauge_axes(grid.plane, zeta, 0.0, grid.point(i0, j0 + b).im).1;
        let (mut row, mut drow) = (zero, zero);
        for a in 0..M {
            let s = grid.at(i0 + a, j0 + b) * gx[a];
            row += s * lu[a];
            drow += s * du[a];
        }
        f += row * gy * lv[b];
        fx += drow * gy * lv[b];
        fy += row * gy * dv[b];
    }
    (f, fx / h, fy / h)
}

fn bilinear_interpolant(grid: &FieldGrid, z: C64, zeta: C64) -> (C64, C64, C64) {
    let h = grid.spacing;
    let (i, j) = cell_of(grid, z);
    let u = (z.re - grid.origin.re) / h - i as f64;
    let v = (z.im - grid.origin.im) / h - j as f64;
    let [a, b, c, d] = [
        gauged(grid, i, j, zeta),
        gauged(grid, i + 1, j, zeta),
        gauged(grid, i + 1, j + 1, zeta),
        gauged(grid, i, j + 1, zeta),
    ];
    let f = a * (1.0 - u) * (1.0 - v) + b * u * (1.0 - v) + c * u * v + d * (1.0 - u) * v;
    let gx = (b - a) * (1.0 - v) + (c - d) * v;
    let gy = (d - a) * (1.0 - u) + (c - b) * u;
    (f, gx / h, gy / h)
}

fn local_rms(grid: &FieldGrid, i: usize, j: usize) -> f64 {
    let (i0, i1) = (i.saturating_sub(1), (i + 2).min(grid.nx - 1));
    let (j0, j1) = (j.saturating_sub(1), (j + 2).min(grid.ny - 1));
    let mut sum = 0.0;
    let mut n = 0;
    for b in j0..=j1 {
        for a in i0..=i1 {
            sum += grid.at(a, b).norm_sqr();
            n += 1;
        }
    }
    (sum / n as f64).sqrt()
}

// Newton on (Re G, Im G) = 0 for the field G demodulated around `zeta`,
// within `reach` cells of the start.
// The root must lie in the square `lo..lo + side` widened by `slack` sides.
fn newton(grid: &FieldGrid, start: C64, zeta: C64, reach: f64, lo: C64, side: f64, slack: f64) -> Option<C64> {
    let h = grid.spacing;
    let (i, j) = cell_of(grid, start);
    let rms = local_rms(grid, i, j);
    let mut z = start;
    for _ in 0..NEWTON_MAX_STEPS {
        let (f, fx, fy) = interpolate_gauged(grid, z, zeta);
        // [Re fx  Re fy; Im fx  Im fy] [dx; dy] = -[Re f; Im f]
        let det = fx.re * fy.im - fy.re * fx.im;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let dx = -(fy.im * f.re - fy.re * f.im) / det;
        let dy = -(-fx.im * f.re + fx.re * f.im) / det;
        z += C64::new(dx, dy);
        if (z - start).re.abs() > (reach + 0.5) * h || (z - start).im.abs() > (reach + 0.5) * h {
            return None;
        }
        if dx.hypot(dy) < NEWTON_STEP_TOL * h {
            break;
        }
    }
    let slack = slack * side;
    let d = z - lo;
    if d.re < -slack || d.im < -slack || d.re > side + slack || d.im > side + slack {
        return None;
    }
    let residual = interpolate_gauged(grid, z, zeta).0.norm();
    (residual < RESIDUAL_RATIO * rms).then_some(z)
}

// Zero of the bilinear interpolant of the cell, or its center.
fn bilinear_zero(grid: &FieldGrid, i: usize, j: usize) -> C64 {
    let [a, b, c, d] = cell_corners(grid, i, j);
    let (mut u, mut v) = (0.5, 0.5);
    for _ in 0..NEWTON_MAX_STEPS {
        let f = a * (1.0 - u) * (1.0 - v) + b * u * (1.0 - v) + c * u * v + d * (1.0 - u) * v;
        let fu = (b - a) * (1.0 - v) + (c - d) * v;
        let fv = (d - a) * (1.0 - u) + (c - b) * u;
        let det = fu.re * fv.im - fv.re * fu.im;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        u += -(fv.im * f.re - fv.re * f.im) / det;
        v += -(-fu.im * f.re + fu.re * f.im) / det;
    }
    if !(0.0..=1.0).contains(&u) || !(0.0..=1.0).contains(&v) {
        u = 0.5;
        v = 0.5;
    }
    grid.point(i, j) + C64::new(u * grid.spacing, v * grid.spacing)
}

/// Position of the zero flagged in cell `(i, j)` and whether Newton
/// converged. Falls back to the bilinear zero of the cell.
/// Newton from the cell centre, accepted when the root stays inside the
/// cell. Otherwise the zero is located by repeated quartering of the cell,
/// keeping the quarter whose winding under the interpolant matches, and
/// polished by Newton inside that quarter. The last resort is the bilinear
/// zero of the cell.
pub fn refine_zero(grid: &FieldGrid, i: usize, j: usize) -> (C64, bool) {
    let h = grid.spacing;
    let center = cell_center(grid, i, j);
    if let Some(z) = newton(grid, center, center, 0.5, grid.point(i, j), h, 0.0) {
        return (z, true);
    }
    let winding = cell_winding(grid, i, j);
    let (lo, side) = locate(grid, grid.point(i, j), h, center, winding);
    if side < h {
        let start = lo + C64::new(0.5 * side, 0.5 * side);
        let z = newton(grid, start, center, 0.5, lo, side, CELL_SLACK).unwrap_or(start);
        let rms = local_rms(grid, i, j);
        let refined = interpolate_gauged(grid, z, center).0.norm() < RESIDUAL_RATIO * rms;
        return (z, refined);
    }
    (bilinear_zero(grid, i, j), false)
}

/// Quartering depth of `locate`.
pub const LOCATE_DEPTH: usize = 12;
const EDGE_SAMPLES: usize = 4;

// Shrinks the square `lo..lo + side` towards a zero of the given winding.
fn locate(grid: &FieldGrid, mut lo: C64, mut side: f64, zeta: C64, winding: i32) -> (C64, f64) {
    let n = 2 * EDGE_SAMPLES;
    for _ in 0..LOCATE_DEPTH {
        let step = side / n as f64;
        let value = |a: usize, b: usize| {
            nonzero(interpolate_gauged(grid, lo + C64::new(a as f64 * step, b as f64 * step), zeta).0)
        };
        let samples: Vec<Vec<C64>> = (0..=n).map(|b| (0..=n).map(|a| value(a, b)).collect()).collect();
        let quarter_winding = |qa: usize, qb: usize| {
            let (a0, b0) = (qa * EDGE_SAMPLES, qb * EDGE_SAMPLES);
            let m = EDGE_SAMPLES;
            let mut path = Vec::with_capacity(4 * m + 1);
            path.extend((0..m).map(|k| (a0 + k, b0)));
            path.extend((0..m).map(|k| (a0 + m, b0 + k)));
            path.extend((0..m).map(|k| (a0 + m - k, b0 + m)));
            path.extend((0..m).map(|k| (a0, b0 + m - k)));
            path.push((a0, b0));
            let total: f64 = path
                .windows(2)
                .map(|w| (samples[w[1].1][w[1].0] / samples[w[0].1][w[0].0]).arg())
                .sum();
            (total / (2.0 * PI)).round() as i32
        };
        let Some((qa, qb)) = [(0, 0), (1, 0), (1, 1), (0, 1)]
            .into_iter()
            .find(|&(qa, qb)| quarter_winding(qa, qb) == winding)
        else {
            break;
        };
        side *= 0.5;
        lo += C64::new(qa as f64 * side, qb as f64 * side);
    }
    (lo, side)
}



/// Sign of `jac F = -Im[F_x conj(F_y)]` from central differences of the
/// interpolant with step equal to the grid spacing; `None` when degenerate.
pub fn charge_of(grid: &FieldGrid, z: C64) -> Option<i32> {
    charge_with_step(grid, z, grid.spacing)
}

/// As `charge_of` with an explicit difference step.
pub fn charge_with_step(grid: &FieldGrid, z: C64, step: f64) -> Option<i32> {
    let (i, j) = cell_of(grid, z);
    jacobian_sign(grid, z, cell_center(grid, i, j), step)
}

fn charge_at(grid: &FieldGrid, z: C64, zeta: C64) -> Option<i32> {
    jacobian_sign(grid, z, zeta, grid.spacing)
}

// At a zero, the demodulated field has the same Jacobian sign.
fn jacobian_sign(grid: &FieldGrid, z: C64, zeta: C64, h: f64) -> Option<i32> {
    let at = |w: C64| interpolate_gauged(grid, w, zeta).0;
    let fx = (at(z + h) - at(z - h)) / (2.0 * h);
    let fy = (at(z + C64::new(0.0, h)) - at(z - C64::new(0.0, h))) / (2.0 * h);
    let jac = -(fx * fy.conj()).im;
    let scale = fx.norm_sqr() + fy.norm_sqr();
    if jac.abs() <= DEGENERATE_RATIO * scale || !jac.is_finite() {
        None
    } else {
        Some(jac.signum() as i32)
    }
}

/// Zero count and total charge in a closed disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskStat {
    pub center: C64,
    pub radius: f64,
    pub count: usize,
    pub total_charge: i64,
}

/// Counts in concentric disks. Every disk must lie in `region`.
pub fn disk_stats(zeros: &[ChargedZero], center: C64, radii: &[f64], region: Rect) -> Result<Vec<DiskStat>> {
    radii
        .iter()
        .map(|&radius| {
            if !(radius >= 0.0)
                || center.re - radius < region.x0
                || center.re + radius > region.x1
                || center.im - radius < region.y0
                || center.im + radius > region.y1
            {
                return Err(Error::Domain(format!(
                    "disk of radius {radius} at {center} leaves the region {region}"
                )));
            }
            let inside = zeros.iter().filter(|z| (z.position - center).norm() <= radius);
            let (count, total_charge) = inside.fold((0, 0), |(n, q), z| (n + 1, q + z.charge as i64));
            Ok(DiskStat {
                center,
                radius,
                count,
                total_charge,
            })
        })
        .collect()
}

pub const CSV_HEADER: &str = "x,y,charge,winding,refined";

/// Plain decimal with 9 significant digits.
pub fn sig9(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (8 - mag).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn write_zeros_csv(zeros: &[ChargedZero], mut w: impl Write) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for z in zeros {
        writeln!(
            w,
            "{},{},{},{},{}",
            sig9(z.position.re),
            sig9(z.position.im),
            z.charge,
            z.winding,
            z.refined
        )?;
    }
    Ok(())
}

/// Reads a zeros CSV. The Jacobian sign is not stored, so it is set to the
/// winding.
pub fn read_zeros_csv(r: impl BufRead) -> Result<Vec<ChargedZero>> {
    let mut lines = r.lines();
    match lines.next() {
        Some(Ok(h)) if h.trim() == CSV_HEADER => {}
        Some(Ok(h)) => return Err(Error::Parse(format!("expected header `{CSV_HEADER}`, got `{h}`"))),
        Some(Err(e)) => return Err(e.into()),
        None => return Ok(Vec::new()),
    }
    let mut out = Vec::new();
    for (n, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let bad = || Error::Parse(format!("line {}: `{line}`", n + 2));
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != 5 {
            return Err(bad());
        }
        let x: f64 = f[0].parse().map_err(|_| bad())?;
        let y: f64 = f[1].parse().map_err(|_| bad())?;
        let charge: i32 = f[2].parse().map_err(|_| bad())?;
        let winding: i32 = f[3].parse().map_err(|_| bad())?;
        let refined: bool = f[4].parse().map_err(|_| bad())?;
        out.push(ChargedZero {
            position: C64::new(x, y),
            charge,
            winding,
            refined,
            jacobian_sign: winding,
        });
    }
    Ok(out)
}
