//! Gauss-Legendre quadrature: fixed rules, composite panels with doubling,
//! and an adaptive bisection scheme that estimates the local error from a
//! 10-point / 21-point rule pair on each subinterval.

use std::collections::BinaryHeap;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values that can be accumulated by a quadrature rule.
pub trait QuadValue: Copy {
    fn zero() -> Self;
    /// `self + w * x`
    fn axpy(self, w: f64, x: Self) -> Self;
    fn dist(&self, other: &Self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn axpy(self, w: f64, x: Self) -> Self {
        self + w * x
    }
    fn dist(&self, other: &Self) -> f64 {
        (self - other).abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn axpy(self, w: f64, x: Self) -> Self {
        self + x * w
    }
    fn dist(&self, other: &Self) -> f64 {
        (self - other).norm()
    }
}

impl<const N: usize> QuadValue for [f64; N] {
    fn zero() -> Self {
        [0.0; N]
    }
    fn axpy(mut self, w: f64, x: Self) -> Self {
        for (a, b) in self.iter_mut().zip(x) {
            *a += w * b;
        }
        self
    }
    fn dist(&self, other: &Self) -> f64 {
        self.iter()
            .zip(other)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            // Tricomi initial guess, then Newton on P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn integrate<T: QuadValue>(&self, f: &impl Fn(f64) -> T, a: f64, b: f64) -> T {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&x, &w)| acc.axpy(w * half, f(mid + half * x)))
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn rule(n: usize) -> &'static GaussLegendre {
    static G10: OnceLock<GaussLegendre> = OnceLock::new();
    static G16: OnceLock<GaussLegendre> = OnceLock::new();
    static G21: OnceLock<GaussLegendre> = OnceLock::new();
    match n {
        10 => G10.get_or_init(|| GaussLegendre::new(10)),
        16 => G16.get_or_init(|| GaussLegendre::new(16)),
        21 => G21.get_or_init(|| GaussLegendre::new(21)),
        _ => unreachable!("no cached rule of order {n}"),
    }
}

/// Composite 16-point Gauss-Legendre rule on `panels` equal panels.
pub fn composite<T: QuadValue>(f: &impl Fn(f64) -> T, a: f64, b: f64, panels: usize) -> T {
    let g = rule(16);
    let h = (b - a) / panels as f64;
    (0..panels).fold(T::zero(), |acc, k| {
        let lo = a + h * k as f64;
        acc.axpy(1.0, g.integrate(f, lo, lo + h))
    })
}

/// Composite rule with the panel count doubled until two successive results
/// differ by less than `tol`.
pub fn integrate_doubling<T: QuadValue>(
    f: &impl Fn(f64) -> T,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<T> {
    let mut panels = 8;
    let mut prev = composite(f, a, b, panels);
    while panels < 1 << 16 {
        panels *= 2;
        let next = composite(f, a, b, panels);
        if next.dist(&prev) < tol {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Quadrature(format!(
        "panel doubling on [{a}, {b}] did not reach {tol:e}"
    )))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn segment(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> Segment {
    let hi: f64 = rule(21).integrate(f, a, b);
    let lo: f64 = rule(10).integrate(f, a, b);
    Segment {
        a,
        b,
        value: hi,
        error: (hi - lo).abs(),
    }
}

const MAX_SEGMENTS: usize = 4000;

/// Adaptive quadrature on a finite interval. The interval with the largest
/// error estimate is bisected until the summed estimate drops below `abs_tol`.
/// Endpoints are never evaluated, so integrands with removable singularities
/// at the ends are fine as long as they are bounded.
pub fn adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
        });
    }
    let mut heap = BinaryHeap::new();
    heap.push(segment(f, a, b));
    loop {
        let error: f64 = heap.iter().map(|s| s.error).sum();
        if error <= abs_tol {
            break;
        }
        if heap.len() >= MAX_SEGMENTS {
            return Err(Error::Quadrature(format!(
                "adaptive quadrature on [{a}, {b}] stalled at error {error:e} > {abs_tol:e}"
            )));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // cannot split any further; accept the segment as is
            heap.push(Segment { error: 0.0, ..worst });
            continue;
        }
        heap.push(segment(f, worst.a, mid));
        heap.push(segment(f, mid, worst.b));
    }
    // sum in interval order so the result does not depend on heap layout
    let mut segs = heap.into_vec();
    segs.sort_by(|x, y| x.a.total_cmp(&y.a));
    Ok(Estimate {
        value: segs.iter().map(|s| s.value).sum(),
        error: segs.iter().map(|s| s.error).sum(),
    })
}

/// Integral over [a, ∞). The upper limit starts at `a + initial_span` and
/// doubles until the contribution of [R, 2R] (integrated in absolute value)
/// is below `abs_tol / 10`; failing that before `max_upper` is a decay error.
pub fn adaptive_to_infinity(
    f: &impl Fn(f64) -> f64,
    a: f64,
    initial_span: f64,
    abs_tol: f64,
    max_upper: f64,
) -> Result<Estimate> {
    let mut upper = a + initial_span;
    loop {
        let tail = adaptive(&|x| f(x).abs(), upper, 2.0 * upper - a, abs_tol / 100.0)?;
        if tail.value < abs_tol / 10.0 {
            let body = adaptive(f, a, upper, abs_tol)?;
            return Ok(Estimate {
                value: body.value,
                error: body.error + tail.value,
            });
        }
        upper = 2.0 * upper - a;
        if upper > max_upper {
            return Err(Error::DecayViolation(format!(
                "tail beyond {upper} still contributes {:e}",
                tail.value
            )));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn nodes_and_weights_integrate_polynomials_exactly() {
        for n in [1, 2, 5, 10, 16, 21] {
            let g = GaussLegendre::new(n);
            assert_abs_diff_eq!(g.weights.iter().sum::<f64>(), 2.0, epsilon = 1e-13);
            // x^(2n-2) integrates to 2/(2n-1)
            let k = 2 * n as i32 - 2;
            let v: f64 = g.integrate(&|x: f64| x.powi(k), -1.0, 1.0);
            assert_abs_diff_eq!(v, 2.0 / (k as f64 + 1.0), epsilon = 1e-13);
        }
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        let est = adaptive(&|x: f64| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-10).unwrap();
        let exact = 2.0 * (1.0 / 1e-2) * (1.0f64 / 1e-2).atan();
        assert_abs_diff_eq!(est.value, exact, epsilon = 1e-8);
    }

    #[test]
    fn tail_certification() {
        let est = adaptive_to_infinity(&|x: f64| (-x).exp(), 0.0, 4.0, 1e-12, 1e4).unwrap();
        assert_abs_diff_eq!(est.value, 1.0, epsilon = 1e-11);
        let err = adaptive_to_infinity(&|x: f64| 1.0 / (1.0 + x), 0.0, 4.0, 1e-9, 1e4);
        assert!(matches!(err, Err(Error::DecayViolation(_))));
    }

    #[test]
    fn doubling_on_array_values() {
        let v: [f64; 2] =
            integrate_doubling(&|x: f64| [x.sin(), x.cos()], 0.0, std::f64::consts::PI, 1e-12)
                .unwrap();
        assert_abs_diff_eq!(v[0], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v[1], 0.0, epsilon = 1e-12);
    }
}
