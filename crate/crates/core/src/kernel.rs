//! Twisted-kernel calculus.
//!
//! A GWHF `F` has covariance `E[F(z) conj(F(w))] = H(z - w) e^{i Im(z conj(w))}`.
//! Everything about its zero set that is computed here flows from the twisted
//! kernel `H`: the first intensity from the second-order jet of `H` at 0, and
//! the two-point charge statistics from the radial profile `P` with
//! `H(z) = P(|z|^2)`.
//!
//! Two independent routes are kept for the two-point function: the closed-form
//! derivative `I'` and a first-principles oracle that builds the 6x6 covariance
//! of `(F, F_x, F_y)` at two points, conditions on both zeros by Gaussian
//! regression and applies Wick's formula.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad;
use crate::special::generalized_laguerre;

type C64 = Complex64;
type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Tolerance on `P(0) = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-12;
/// `Δ_H` in `[-DELTA_CLAMP, 0)` is treated as roundoff and clamped to 0.
pub const DELTA_CLAMP: f64 = 1e-9;
/// `|1 - P(s)^2|` below this at `s > 0` is a singular kernel.
pub const SINGULAR_TOL: f64 = 1e-14;

#[derive(Clone)]
enum Profile {
    Gef,
    /// `L_r(t) e^{-t/2}`
    Laguerre(u32),
    /// `q^{-1} L^{(1)}_{q-1}(t) e^{-t/2}`
    LaguerreAvg(u32),
    Custom {
        label: String,
        p: ScalarFn,
        dp: ScalarFn,
        ddp: ScalarFn,
    },
}

/// Radial twisted kernel `H(z) = P(|z|^2)` given by analytic rules for
/// `P`, `P'` and `P''`.
#[derive(Clone)]
pub struct RadialKernel {
    profile: Profile,
}

impl fmt::Debug for RadialKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RadialKernel({})", self.label())
    }
}

/// `(P, P', P'')` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileValues {
    pub p: f64,
    pub dp: f64,
    pub ddp: f64,
}

impl RadialKernel {
    /// Gaussian entire function kernel `e^{-t/2}`.
    pub fn gef() -> Self {
        Self {
            profile: Profile::Gef,
        }
    }

    /// Kernel of the STFT with Hermite window `h_r`, equivalently of the pure
    /// poly-entire field of order `q = r + 1`.
    pub fn laguerre(r: u32) -> Self {
        Self {
            profile: Profile::Laguerre(r),
        }
    }

    /// Kernel of the full-type poly-entire field of order `q >= 1`.
    pub fn laguerre_avg(q: u32) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidKernel("laguerre-avg needs q >= 1".into()));
        }
        Ok(Self {
            profile: Profile::LaguerreAvg(q),
        })
    }

    /// Algebraic profile `(1 + t/(2a))^{-a}`, with `P'(0) = -1/2` and a
    /// tail `~ t^{-a}`; the decay bound fails for `a < 2`.
    pub fn power(a: u32) -> Result<Self> {
        if a == 0 {
            return Err(Error::InvalidKernel("power kernel needs a >= 1".into()));
        }
        let a = f64::from(a);
        let base = move |s: f64| 1.0 + s / (2.0 * a);
        Ok(Self::custom(
            format!("power:{a}"),
            move |s| base(s).powf(-a),
            move |s| -0.5 * base(s).powf(-a - 1.0),
            move |s| (a + 1.0) / (4.0 * a) * base(s).powf(-a - 2.0),
        ))
    }

    pub fn custom(
        label: impl Into<String>,
        p: impl Fn(f64) -> f64 + Send + Sync + 'static,
        dp: impl Fn(f64) -> f64 + Send + Sync + 'static,
        ddp: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            profile: Profile::Custom {
                label: label.into(),
                p: Arc::new(p),
                dp: Arc::new(dp),
                ddp: Arc::new(ddp),
            },
        }
    }

    pub fn label(&self) -> String {
        match &self.profile {
            Profile::Gef => "gef".into(),
            Profile::Laguerre(r) => format!("laguerre:{r}"),
            Profile::LaguerreAvg(q) => format!("laguerre-avg:{q}"),
            Profile::Custom { label, .. } => label.clone(),
        }
    }

    pub fn values(&self, s: f64) -> ProfileValues {
        match &self.profile {
            Profile::Gef => {
                let e = (-0.5 * s).exp();
                ProfileValues {
                    p: e,
                    dp: -0.5 * e,
                    ddp: 0.25 * e,
                }
            }
            Profile::Laguerre(r) => laguerre_profile(*r as i64, 0.0, 1.0, s),
            Profile::LaguerreAvg(q) => laguerre_profile(*q as i64 - 1, 1.0, *q as f64, s),
            Profile::Custom { p, dp, ddp, .. } => ProfileValues {
                p: p(s),
                dp: dp(s),
                ddp: ddp(s),
            },
        }
    }

    pub fn p(&self, s: f64) -> f64 {
        self.values(s).p
    }

    pub fn dp(&self, s: f64) -> f64 {
        self.values(s).dp
    }

    pub fn ddp(&self, s: f64) -> f64 {
        self.values(s).ddp
    }

    /// `H(z) = P(|z|^2)` together with its real partial derivatives up to
    /// order two, in the order `[H, H_x, H_y, H_xx, H_xy, H_yy]`.
    fn h_derivatives(&self, d: C64) -> [f64; 6] {
        let (x, y) = (d.re, d.im);
        let v = self.values(d.norm_sqr());
        [
            v.p,
            2.0 * x * v.dp,
            2.0 * y * v.dp,
            2.0 * v.dp + 4.0 * x * x * v.ddp,
            4.0 * x * y * v.ddp,
            2.0 * v.dp + 4.0 * y * y * v.ddp,
        ]
    }
}

// P = L_n^{(a)}(t) e^{-t/2} / c, differentiated through d/dt L_n^{(a)} = -L_{n-1}^{(a+1)}.
fn laguerre_profile(n: i64, alpha: f64, c: f64, t: f64) -> ProfileValues {
    let e = (-0.5 * t).exp() / c;
    let l0 = generalized_laguerre(n, alpha, t);
    let l1 = -generalized_laguerre(n - 1, alpha + 1.0, t);
    let l2 = generalized_laguerre(n - 2, alpha + 2.0, t);
    ProfileValues {
        p: l0 * e,
        dp: (l1 - 0.5 * l0) * e,
        ddp: (l2 - l1 + 0.25 * l0) * e,
    }
}

/// Second-order data of a twisted kernel at 0:
/// `H^{(1,0)}(0) = i b10`, `H^{(0,1)}(0) = i b01`, and the real second
/// derivatives `h20`, `h02`, `h11`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelJet {
    pub b10: f64,
    pub b01: f64,
    pub h20: f64,
    pub h02: f64,
    pub h11: f64,
}

impl KernelJet {
    pub fn new(b10: f64, b01: f64, h20: f64, h02: f64, h11: f64) -> Result<Self> {
        let jet = Self {
            b10,
            b01,
            h20,
            h02,
            h11,
        };
        if jet.as_array().iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidKernel(format!("non-finite jet {jet:?}")));
        }
        Ok(jet)
    }

    pub fn from_array(a: [f64; 5]) -> Result<Self> {
        Self::new(a[0], a[1], a[2], a[3], a[4])
    }

    pub fn as_array(&self) -> [f64; 5] {
        [self.b10, self.b01, self.h20, self.h02, self.h11]
    }
}

/// Sign of the product term in the off-diagonal entry of `Ω`.
///
/// `Regression` is what Gaussian regression of `(F, F_x, F_y)` yields:
/// `Ω₁₂ = -h11 - i + H^{(1,0)}(0) H^{(0,1)}(0) = -h11 - i - b10 b01`.
/// `Flipped` flips the product term, `Ω₁₂ = -h11 - i + b10 b01`, kept for
/// comparison with formulas written in that convention.
/// The two agree whenever `b10 * b01 == 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OmegaConvention {
    #[default]
    Regression,
    Flipped,
}

impl OmegaConvention {
    pub const ALL: [OmegaConvention; 2] = [OmegaConvention::Regression, OmegaConvention::Flipped];

    pub fn name(self) -> &'static str {
        match self {
            OmegaConvention::Regression => "regression",
            OmegaConvention::Flipped => "flipped",
        }
    }

    fn product_sign(self) -> f64 {
        match self {
            OmegaConvention::Regression => -1.0,
            OmegaConvention::Flipped => 1.0,
        }
    }
}

/// Covariance of `(F_x, F_y)` at a point, conditioned on `F = 0` there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalCov2 {
    pub omega: [[C64; 2]; 2],
}

impl ConditionalCov2 {
    pub fn determinant(&self) -> f64 {
        let o = &self.omega;
        (o[0][0] * o[1][1] - o[0][1] * o[1][0]).re
    }

    pub fn is_psd(&self) -> bool {
        self.omega[0][0].re >= -DELTA_CLAMP
            && self.omega[1][1].re >= -DELTA_CLAMP
            && self.determinant() >= -DELTA_CLAMP
    }
}

/// `Ω` from the jet without any validity check.
pub fn conditional_cov_raw(jet: &KernelJet, convention: OmegaConvention) -> ConditionalCov2 {
    let a = -jet.h20 - jet.b10 * jet.b10;
    let b = -jet.h02 - jet.b01 * jet.b01;
    let g = C64::new(-jet.h11 + convention.product_sign() * jet.b10 * jet.b01, -1.0);
    ConditionalCov2 {
        omega: [[C64::new(a, 0.0), g], [g.conj(), C64::new(b, 0.0)]],
    }
}

/// `Ω` under the default (regression) convention; non-PSD is an invalid kernel.
pub fn conditional_cov(jet: &KernelJet) -> Result<ConditionalCov2> {
    conditional_cov_with(jet, OmegaConvention::default())
}

pub fn conditional_cov_with(
    jet: &KernelJet,
    convention: OmegaConvention,
) -> Result<ConditionalCov2> {
    let cov = conditional_cov_raw(jet, convention);
    if !cov.is_psd() {
        return Err(Error::InvalidKernel(format!(
            "conditional covariance is not PSD (diag {:.6}, {:.6}, det {:.6e})",
            cov.omega[0][0].re,
            cov.omega[1][1].re,
            cov.determinant()
        )));
    }
    Ok(cov)
}

/// `Δ_H = det Ω`.
pub fn delta_h(jet: &KernelJet) -> Result<f64> {
    delta_h_with(jet, OmegaConvention::default())
}

pub fn delta_h_with(jet: &KernelJet, convention: OmegaConvention) -> Result<f64> {
    let det = conditional_cov_with(jet, convention)?.determinant();
    Ok(det.max(0.0))
}

/// First intensity from `Δ_H`: `(Δ + 2) / (2π sqrt(Δ + 1))`.
pub fn rho1_from_delta(delta: f64) -> f64 {
    (delta + 2.0) / (2.0 * PI * (delta + 1.0).sqrt())
}

/// Expected zeros per unit area of a GWHF with the given jet.
pub fn rho1(jet: &KernelJet) -> Result<f64> {
    rho1_with(jet, OmegaConvention::default())
}

pub fn rho1_with(jet: &KernelJet, convention: OmegaConvention) -> Result<f64> {
    Ok(rho1_from_delta(delta_h_with(jet, convention)?))
}

/// Charged first intensity; the same for every kernel.
pub fn rho1_charged() -> f64 {
    1.0 / PI
}

pub fn jet_from_radial(p: &RadialKernel) -> Result<KernelJet> {
    let v = p.values(0.0);
    if (v.p - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::InvalidKernel(format!(
            "P(0) = {} is not normalized",
            v.p
        )));
    }
    KernelJet::new(0.0, 0.0, 2.0 * v.dp, 2.0 * v.dp, 0.0)
}

/// `-(1/π)(P'(0) + 1/(4 P'(0)))`
pub fn rho1_radial(p: &RadialKernel) -> Result<f64> {
    let d = p.dp(0.0);
    if d > -0.5 + NORMALIZATION_TOL {
        return Err(Error::InvalidKernel(format!(
            "P'(0) = {d} must be <= -1/2"
        )));
    }
    Ok(-(d + 1.0 / (4.0 * d)) / PI)
}

fn one_minus_p2(p: &RadialKernel, s: f64, v: &ProfileValues) -> Result<f64> {
    let q = 1.0 - v.p * v.p;
    if q.abs() < SINGULAR_TOL {
        let _ = p;
        return Err(Error::SingularKernel { s, value: q });
    }
    Ok(q)
}

/// Below this `1 - P^2` loses too many digits for the closed forms of `I`
/// and `I'`; they are continued from `[SMALL_S, 8 SMALL_S]` instead.
pub const SMALL_S: f64 = 1e-3;

// Degree-7 interpolant through `SMALL_S (1 + k)`, `k = 0..7`, evaluated at `s`.
fn continued(s: f64, f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let nodes: Vec<f64> = (0..8).map(|k| SMALL_S * (1.0 + k as f64)).collect();
    let mut total = 0.0;
    for (k, &xk) in nodes.iter().enumerate() {
        let weight: f64 = nodes
            .iter()
            .enumerate()
            .filter(|(m, _)| *m != k)
            .map(|(_, &xm)| (s - xm) / (xk - xm))
            .product();
        total += weight * f(xk)?;
    }
    Ok(total)
}

/// `I(s) = s (2P'^2 + 3/2 P^2)/(1 - P^2) + 2 s^2 P P'/(1 - P^2)^2`,
/// with the removable singularity at 0 filled by `-P'(0) - 1/(4 P'(0))`.
pub fn i_function(p: &RadialKernel, s: f64) -> Result<f64> {
    if s < 0.0 {
        return Err(Error::Domain(format!("I(s) needs s >= 0, got {s}")));
    }
    if s == 0.0 {
        let d = p.dp(0.0);
        return Ok(-d - 1.0 / (4.0 * d));
    }
    if s < SMALL_S {
        return continued(s, |t| i_function(p, t));
    }
    let v = p.values(s);
    let q = one_minus_p2(p, s, &v)?;
    Ok(s * (2.0 * v.dp * v.dp + 1.5 * v.p * v.p) / q + 2.0 * s * s * v.p * v.dp / (q * q))
}

/// Closed-form `I'(s)`.
pub fn i_prime(p: &RadialKernel, s: f64) -> Result<f64> {
    if s <= 0.0 {
        return Err(Error::Domain(format!("I'(s) needs s > 0, got {s}")));
    }
    if s < SMALL_S {
        return continued(s, |t| i_prime(p, t));
    }
    let ProfileValues { p: pv, dp, ddp } = p.values(s);
    let q = one_minus_p2(p, s, &ProfileValues { p: pv, dp, ddp })?;
    let t1 = 2.0 * s * s * (3.0 * pv * pv * dp * dp + dp * dp + pv * ddp * q) / (q * q * q);
    let t2 = s * dp * (7.0 * pv + 4.0 * pv * dp * dp + 4.0 * ddp * q) / (q * q);
    let t3 = (2.0 * dp * dp + 1.5 * pv * pv) / q;
    Ok(t1 + t2 + t3)
}

/// Semi-charged two-point intensity `τ₂♯(d) = (1 + I'(d^2)) / π^2`.
pub fn tau2_charged(p: &RadialKernel, d: f64) -> Result<f64> {
    if d <= 0.0 {
        return Err(Error::Domain(format!("τ₂♯ needs d > 0, got {d}")));
    }
    Ok((1.0 + i_prime(p, d * d)?) / (PI * PI))
}

/// The 3x3 block `E[D_a F(z) conj(D_b F(w))]` for `D ∈ {id, ∂x, ∂y}`,
/// obtained by differentiating `H(z - w) e^{i(yu - xv)}`.
pub fn covariance_block(p: &RadialKernel, z: C64, w: C64) -> [[C64; 3]; 3] {
    let [h, hx, hy, hxx, hxy, hyy] = p.h_derivatives(z - w);
    let (x, y, u, v) = (z.re, z.im, w.re, w.im);
    let e = C64::from_polar(1.0, y * u - x * v);
    let c = |re: f64, im: f64| C64::new(re, im) * e;
    [
        [
            c(h, 0.0),
            c(-hx, y * h),
            c(-hy, -x * h),
        ],
        [
            c(hx, -v * h),
            c(-hxx + y * v * h, v * hx + y * hx),
            c(-hxy - x * v * h, -h + v * hy - x * hx),
        ],
        [
            c(hy, u * h),
            c(-hxy - y * u * h, h - u * hx + y * hy),
            c(-hyy + x * u * h, -u * hy - x * hy),
        ],
    ]
}

/// Covariance of `(F(z), F_x(z), F_y(z), F(w), F_x(w), F_y(w))`.
pub fn joint_covariance(p: &RadialKernel, z: C64, w: C64) -> Vec<Vec<C64>> {
    let blocks = [
        [covariance_block(p, z, z), covariance_block(p, z, w)],
        [covariance_block(p, w, z), covariance_block(p, w, w)],
    ];
    let mut m = vec![vec![C64::new(0.0, 0.0); 6]; 6];
    for (bi, row) in blocks.iter().enumerate() {
        for (bj, block) in row.iter().enumerate() {
            for i in 0..3 {
                for j in 0..3 {
                    m[3 * bi + i][3 * bj + j] = block[i][j];
                }
            }
        }
    }
    m
}

/// Gaussian regression: covariance of the `keep` coordinates conditioned on
/// the `cond` coordinates vanishing, `A - B C^{-1} B^*`.
pub fn gaussian_regression(
    sigma: &[Vec<C64>],
    keep: &[usize],
    cond: &[usize],
) -> Result<Vec<Vec<C64>>> {
    let m = cond.len();
    let c: Vec<Vec<C64>> = cond
        .iter()
        .map(|&i| cond.iter().map(|&j| sigma[i][j]).collect())
        .collect();
    let c_inv = invert(c).ok_or_else(|| {
        Error::Domain("conditioning covariance is singular".into())
    })?;
    let mut out = vec![vec![C64::new(0.0, 0.0); keep.len()]; keep.len()];
    for (a, &i) in keep.iter().enumerate() {
        for (b, &j) in keep.iter().enumerate() {
            let mut acc = sigma[i][j];
            for k in 0..m {
                for l in 0..m {
                    acc -= sigma[i][cond[k]] * c_inv[k][l] * sigma[cond[l]][j];
                }
            }
            out[a][b] = acc;
        }
    }
    Ok(out)
}

fn invert(mut a: Vec<Vec<C64>>) -> Option<Vec<Vec<C64>>> {
    let n = a.len();
    let scale = a
        .iter()
        .flatten()
        .map(|v| v.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut inv: Vec<Vec<C64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))?;
        if a[pivot][col].norm() < 1e-14 * scale {
            return None;
        }
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let d = a[col][col];
        for j in 0..n {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for row in 0..n {
            if row != col {
                let f = a[row][col];
                if f != C64::new(0.0, 0.0) {
                    for j in 0..n {
                        let (ac, ic) = (a[col][j], inv[col][j]);
                        a[row][j] -= f * ac;
                        inv[row][j] -= f * ic;
                    }
                }
            }
        }
    }
    Some(inv)
}

/// `E[Im(v1 conj v2) Im(v3 conj v4)]` for a circular Gaussian vector with
/// covariance `omega` (Wick/Isserlis).
pub fn wick_im_product(omega: &[Vec<C64>]) -> f64 {
    let o = |i: usize, j: usize| omega[i - 1][j - 1];
    -0.5 * (o(1, 2) * o(3, 4) + o(1, 4) * o(3, 2) - o(2, 1) * o(3, 4) - o(2, 4) * o(3, 1)).re
}

/// `E[jac F(z) jac F(w) | F(z) = F(w) = 0]` from first principles.
pub fn wick_oracle_e(p: &RadialKernel, z: C64, w: C64) -> Result<f64> {
    let separation = (z - w).norm();
    let pv = p.p(separation * separation);
    if (1.0 - pv * pv).abs() < SINGULAR_TOL {
        return Err(Error::DegeneratePair { separation });
    }
    let sigma = joint_covariance(p, z, w);
    let omega = gaussian_regression(&sigma, &[1, 2, 4, 5], &[0, 3])
        .map_err(|_| Error::DegeneratePair { separation })?;
    // jac = -Im(F_x conj F_y); the two minus signs cancel in the product.
    Ok(wick_im_product(&omega))
}

/// Checks of the standing assumptions on a sampling grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "predicate", rename_all = "kebab-case")]
pub enum Violation {
    NotNormalized { p0: f64 },
    NotContractive { s: f64, p: f64 },
    SlopeAtZero { dp0: f64 },
    NegativeDelta { delta: f64 },
    NonFinite { s: f64 },
    Decay { r: f64, tail_max: f64, body_max: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotNormalized { p0 } => write!(f, "P(0) = {p0} != 1"),
            Violation::NotContractive { s, p } => write!(f, "|P({s})| = {} >= 1", p.abs()),
            Violation::SlopeAtZero { dp0 } => write!(f, "P'(0) = {dp0} > -1/2"),
            Violation::NegativeDelta { delta } => write!(f, "Δ_H = {delta} < 0"),
            Violation::NonFinite { s } => write!(f, "non-finite profile at s = {s}"),
            Violation::Decay {
                r,
                tail_max,
                body_max,
            } => write!(
                f,
                "(|P|+|P'|+|P''|) r^4 still growing: {tail_max:e} near r = {r} vs {body_max:e} before"
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has_decay_violation(&self) -> bool {
        self.violations
            .iter()
            .any(|v| matches!(v, Violation::Decay { .. }))
    }
}

/// Contractivity grid: `s = k * 0.005` for `k = 1..=40000`.
pub const CONTRACTIVITY_STEP: f64 = 0.005;
pub const CONTRACTIVITY_POINTS: usize = 40_000;
/// Decay grid: `r` in `[0, 64]`.
pub const DECAY_RADIUS: f64 = 64.0;

pub fn validate_kernel(p: &RadialKernel) -> ValidationReport {
    let mut violations = Vec::new();
    let v0 = p.values(0.0);
    if (v0.p - 1.0).abs() > NORMALIZATION_TOL {
        violations.push(Violation::NotNormalized { p0: v0.p });
    }
    if v0.dp > -0.5 + NORMALIZATION_TOL {
        violations.push(Violation::SlopeAtZero { dp0: v0.dp });
    }
    for k in 1..=CONTRACTIVITY_POINTS {
        let s = k as f64 * CONTRACTIVITY_STEP;
        let v = p.values(s);
        if !(v.p.is_finite() && v.dp.is_finite() && v.ddp.is_finite()) {
            violations.push(Violation::NonFinite { s });
            break;
        }
        if v.p.abs() > 1.0 - 1e-12 {
            violations.push(Violation::NotContractive { s, p: v.p });
            break;
        }
    }
    // sup_r (|P(r^2)| + |P'(r^2)| + |P''(r^2)|) r^4 is taken to be finite when
    // the outer half of the grid does not exceed the inner half.
    let n = 4096;
    let mut body_max: f64 = 0.0;
    let mut tail_max: f64 = 0.0;
    let mut tail_arg = 0.0;
    for k in 0..=n {
        let r = DECAY_RADIUS * k as f64 / n as f64;
        let v = p.values(r * r);
        let g = (v.p.abs() + v.dp.abs() + v.ddp.abs()) * r.powi(4);
        if k <= n / 2 {
            body_max = body_max.max(g);
        } else if g > tail_max {
            tail_max = g;
            tail_arg = r;
        }
    }
    if !(tail_max <= body_max) {
        violations.push(Violation::Decay {
            r: tail_arg,
            tail_max,
            body_max,
        });
    }
    if let Ok(jet) = jet_from_radial(p) {
        violations.extend(validate_jet(&jet).violations);
    }
    ValidationReport { violations }
}

pub fn validate_jet(jet: &KernelJet) -> ValidationReport {
    let det = conditional_cov_raw(jet, OmegaConvention::default()).determinant();
    let mut violations = Vec::new();
    let cov = conditional_cov_raw(jet, OmegaConvention::default());
    if !cov.is_psd() {
        violations.push(Violation::NegativeDelta { delta: det });
    }
    ValidationReport { violations }
}

/// Decay-checked integral of `2 r^2 P'(r^2)^2 / (1 - P(r^2)^2)` over
/// `[0, ∞)`, divided by π. The integrand tends to `-P'(0)` at `r = 0`.
pub fn variance_asymptote(p: &RadialKernel) -> Result<f64> {
    let report = validate_kernel(p);
    if let Some(v) = report
        .violations
        .iter()
        .find(|v| matches!(v, Violation::Decay { .. }))
    {
        return Err(Error::DecayViolation(v.to_string()));
    }
    if let Some(v) = report.violations.first() {
        return Err(Error::InvalidKernel(v.to_string()));
    }
    let dp0 = p.dp(0.0);
    let integrand = |r: f64| {
        let s = r * r;
        if s < 1e-12 {
            return -dp0;
        }
        let v = p.values(s);
        2.0 * s * v.dp * v.dp / (1.0 - v.p * v.p)
    };
    let est = quad::adaptive_to_infinity(&integrand, 0.0, 8.0, 1e-10, 1e4)?;
    Ok(est.value / PI)
}

/// Limit of `Var[charge in B_R] / R` as `R → ∞`, i.e. twice the
/// `variance_asymptote` integral (the area of `B_R ∖ (B_R + h)` is
/// `2 R |h| + O(|h|^2)`).
pub fn charge_variance_slope(p: &RadialKernel) -> Result<f64> {
    Ok(2.0 * variance_asymptote(p)?)
}

/// Area of `B_R ∩ (B_R + h)` for `|h| = d`.
pub fn lens_area(radius: f64, d: f64) -> f64 {
    if d >= 2.0 * radius {
        return 0.0;
    }
    2.0 * radius * radius * (d / (2.0 * radius)).acos()
        - 0.5 * d * (4.0 * radius * radius - d * d).sqrt()
}

/// Exact variance of the total charge in a disk of radius `R`:
/// `ρ₁ π R^2 + ∫∫_{B×B} (τ₂♯(z - w) - 1/π^2)`.
pub fn charge_variance_disk(p: &RadialKernel, radius: f64) -> Result<f64> {
    if radius <= 0.0 {
        return Err(Error::Domain(format!("radius must be positive, got {radius}")));
    }
    let rho = rho1_radial(p)?;
    // τ₂♯ - 1/π² = I'(d²)/π²
    let integrand = |d: f64| {
        if d == 0.0 {
            return 0.0;
        }
        let ip = i_prime(p, d * d).unwrap_or(f64::NAN);
        ip / (PI * PI) * lens_area(radius, d) * 2.0 * PI * d
    };
    let est = quad::adaptive(&integrand, 0.0, 2.0 * radius, 1e-10)?;
    if !est.value.is_finite() {
        return Err(Error::SingularKernel { s: f64::NAN, value: f64::NAN });
    }
    Ok(rho * PI * radius * radius + est.value)
}

/// `(1/π²) ∫_ℂ (1 - π² τ₂♯(|z|)) dA`, which should equal `ρ₁`.
pub fn charge_screening_integral(p: &RadialKernel) -> Result<f64> {
    let integrand = |d: f64| {
        if d == 0.0 {
            return 0.0;
        }
        let ip = i_prime(p, d * d).unwrap_or(f64::NAN);
        -ip * 2.0 * d / PI
    };
    let est = quad::adaptive_to_infinity(&integrand, 0.0, 8.0, 1e-11, 1e4)?;
    Ok(est.value)
}

/// Which family a kernel record names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelFamily {
    Gef,
    Laguerre,
    LaguerreAvg,
    /// `(1 + t/(2q))^{-q}`: slowly decaying profiles for exercising the
    /// decay checks.
    Power,
    Custom,
}

/// Kernel record as read from JSON configs:
/// `{"family": "gef" | "laguerre" | "laguerre-avg" | "power" | "custom", "q": int, "jet": [b10, b01, h20, h02, h11]}`.
/// For `laguerre`, `q` is the Hermite index `r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub family: KernelFamily,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jet: Option<[f64; 5]>,
}

/// A kernel either known by its radial profile or only by its jet.
#[derive(Debug, Clone)]
pub enum KernelModel {
    Radial(RadialKernel),
    Jet(KernelJet),
}

impl KernelModel {
    pub fn jet(&self) -> Result<KernelJet> {
        match self {
            KernelModel::Radial(p) => jet_from_radial(p),
            KernelModel::Jet(j) => Ok(*j),
        }
    }

    pub fn radial(&self) -> Option<&RadialKernel> {
        match self {
            KernelModel::Radial(p) => Some(p),
            KernelModel::Jet(_) => None,
        }
    }
}

impl KernelSpec {
    /// Short form used on the command line: `gef`, `laguerre:2`,
    /// `laguerre-avg:4`, `custom:b10,b01,h20,h02,h11`.
    pub fn parse_short(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let index = |a: Option<&str>| -> Result<u32> {
            a.ok_or_else(|| Error::Config(format!("kernel `{name}` needs an index, e.g. {name}:1")))?
                .parse()
                .map_err(|_| Error::Config(format!("bad kernel index in `{s}`")))
        };
        match name {
            "gef" => Ok(Self {
                family: KernelFamily::Gef,
                q: None,
                jet: None,
            }),
            "laguerre" => Ok(Self {
                family: KernelFamily::Laguerre,
                q: Some(index(arg)?),
                jet: None,
            }),
            "laguerre-avg" => Ok(Self {
                family: KernelFamily::LaguerreAvg,
                q: Some(index(arg)?),
                jet: None,
            }),
            "power" => Ok(Self {
                family: KernelFamily::Power,
                q: Some(index(arg)?),
                jet: None,
            }),
            "custom" => {
                let vals: Vec<f64> = arg
                    .unwrap_or("")
                    .split(',')
                    .map(|v| v.trim().parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::Config(format!("bad jet in `{s}`")))?;
                let jet: [f64; 5] = vals
                    .try_into()
                    .map_err(|_| Error::Config("custom jet needs 5 numbers".into()))?;
                Ok(Self {
                    family: KernelFamily::Custom,
                    q: None,
                    jet: Some(jet),
                })
            }
            other => Err(Error::Config(format!(
                "unknown kernel family `{other}` (expected gef, laguerre, laguerre-avg, power, custom)"
            ))),
        }
    }

    pub fn build(&self) -> Result<KernelModel> {
        let need_q = || {
            self.q
                .ok_or_else(|| Error::Config(format!("kernel family {:?} needs \"q\"", self.family)))
        };
        Ok(match self.family {
            KernelFamily::Gef => KernelModel::Radial(RadialKernel::gef()),
            KernelFamily::Laguerre => KernelModel::Radial(RadialKernel::laguerre(need_q()?)),
            KernelFamily::LaguerreAvg => {
                KernelModel::Radial(RadialKernel::laguerre_avg(need_q()?)?)
            }
            KernelFamily::Power => KernelModel::Radial(RadialKernel::power(need_q()?)?),
            KernelFamily::Custom => {
                let jet = self
                    .jet
                    .ok_or_else(|| Error::Config("custom kernel needs \"jet\"".into()))?;
                KernelModel::Jet(KernelJet::from_array(jet)?)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn built_ins() -> Vec<RadialKernel> {
        let mut v = vec![RadialKernel::gef()];
        v.extend((0..=6).map(RadialKernel::laguerre));
        v.extend((1..=6).map(|q| RadialKernel::laguerre_avg(q).unwrap()));
        v
    }

    #[test]
    fn radial_jets() {
        let j = jet_from_radial(&RadialKernel::gef()).unwrap();
        assert_eq!(j.as_array(), [0.0, 0.0, -1.0, -1.0, 0.0]);
        let j = jet_from_radial(&RadialKernel::laguerre(1)).unwrap();
        assert_abs_diff_eq!(j.h20, -3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(j.h02, -3.0, epsilon = 1e-14);
        let j = jet_from_radial(&RadialKernel::laguerre_avg(3).unwrap()).unwrap();
        assert_abs_diff_eq!(j.h20, -3.0, epsilon = 1e-14);
    }

    #[test]
    fn unnormalized_profile_is_rejected() {
        let p = RadialKernel::custom("half", |s| 0.5 * (-s).exp(), |s| -0.5 * (-s).exp(), |s| 0.5 * (-s).exp());
        assert!(matches!(jet_from_radial(&p), Err(Error::InvalidKernel(_))));
    }

    #[test]
    fn omega_for_radial_jets() {
        let j = jet_from_radial(&RadialKernel::gef()).unwrap();
        let o = conditional_cov(&j).unwrap().omega;
        assert_eq!(o[0][0], C64::new(1.0, 0.0));
        assert_eq!(o[0][1], C64::new(0.0, -1.0));
        assert_eq!(o[1][0], C64::new(0.0, 1.0));
        let j = jet_from_radial(&RadialKernel::laguerre(1)).unwrap();
        let o = conditional_cov(&j).unwrap().omega;
        assert_abs_diff_eq!(o[0][0].re, 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(o[1][1].re, 3.0, epsilon = 1e-14);
    }

    #[test]
    fn perturbed_jet_off_diagonal() {
        let j = KernelJet::new(0.1, 0.2, -1.0, -1.0, 0.0).unwrap();
        let o = conditional_cov_raw(&j, OmegaConvention::Regression).omega;
        assert_abs_diff_eq!(o[0][1].re, -0.02, epsilon = 1e-15);
        assert_eq!(o[0][1].im, -1.0);
        let o = conditional_cov_raw(&j, OmegaConvention::Flipped).omega;
        assert_abs_diff_eq!(o[0][1].re, 0.02, epsilon = 1e-15);
    }

    #[test]
    fn delta_values() {
        let gef = jet_from_radial(&RadialKernel::gef()).unwrap();
        assert_eq!(delta_h(&gef).unwrap(), 0.0);
        let l1 = jet_from_radial(&RadialKernel::laguerre(1)).unwrap();
        assert_abs_diff_eq!(delta_h(&l1).unwrap(), 8.0, epsilon = 1e-12);
        let a4 = jet_from_radial(&RadialKernel::laguerre_avg(4).unwrap()).unwrap();
        assert_abs_diff_eq!(delta_h(&a4).unwrap(), 15.0, epsilon = 1e-12);
    }

    #[test]
    fn delta_clamp_and_rejection() {
        // Ω = [[1, -i], [i, 1 - 1e-10]] has det = -1e-10: clamped
        let j = KernelJet::new(0.0, 0.0, -1.0, -1.0 + 1e-10, 0.0).unwrap();
        assert_eq!(delta_h(&j).unwrap(), 0.0);
        let j = KernelJet::new(0.0, 0.0, -1.0, -0.5, 0.0).unwrap();
        assert!(matches!(delta_h(&j), Err(Error::InvalidKernel(_))));
    }

    #[test]
    fn rho1_values() {
        assert_abs_diff_eq!(rho1_from_delta(0.0), 1.0 / PI, epsilon = 1e-15);
        assert_abs_diff_eq!(rho1_from_delta(8.0), 5.0 / (3.0 * PI), epsilon = 1e-15);
        assert_abs_diff_eq!(rho1_from_delta(15.0), 17.0 / (8.0 * PI), epsilon = 1e-15);
        assert_abs_diff_eq!(rho1_radial(&RadialKernel::gef()).unwrap(), 1.0 / PI, epsilon = 1e-15);
        assert_abs_diff_eq!(
            rho1_radial(&RadialKernel::laguerre(2)).unwrap(),
            13.0 / (5.0 * PI),
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            rho1_radial(&RadialKernel::laguerre_avg(2).unwrap()).unwrap(),
            5.0 / (4.0 * PI),
            epsilon = 1e-14
        );
        let slow = RadialKernel::custom("e^-t/8", |s| (-s / 8.0).exp(), |s| -(-s / 8.0).exp() / 8.0, |s| (-s / 8.0).exp() / 64.0);
        assert!(matches!(rho1_radial(&slow), Err(Error::InvalidKernel(_))));
    }

    #[test]
    fn charged_intensity_is_universal() {
        assert_eq!(rho1_charged(), 1.0 / PI);
        assert_eq!(rho1_charged(), rho1_from_delta(0.0));
        assert!(rho1_charged() < rho1_from_delta(8.0));
    }

    #[test]
    fn rho1_paths_agree_on_built_ins() {
        for p in built_ins() {
            let a = rho1(&jet_from_radial(&p).unwrap()).unwrap();
            let b = rho1_radial(&p).unwrap();
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
            assert!(a >= 1.0 / PI - 1e-15);
        }
    }

    #[test]
    fn i_function_limits() {
        assert_abs_diff_eq!(i_function(&RadialKernel::gef(), 0.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            i_function(&RadialKernel::laguerre(1), 0.0).unwrap(),
            5.0 / 3.0,
            epsilon = 1e-14
        );
        // continuity into the removable point
        for p in built_ins() {
            let at0 = i_function(&p, 0.0).unwrap();
            let near = i_function(&p, 1e-6).unwrap();
            assert_abs_diff_eq!(at0, near, epsilon = 1e-4 * (1.0 + at0));
        }
        for p in built_ins() {
            assert!(i_function(&p, 900.0).unwrap().abs() < 1e-12);
        }
        assert!(matches!(i_function(&RadialKernel::gef(), -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn closed_form_i_prime_matches_finite_differences() {
        let step = 1e-5;
        for p in [RadialKernel::gef(), RadialKernel::laguerre(1), RadialKernel::laguerre(3), RadialKernel::laguerre_avg(3).unwrap()] {
            for s in [0.3, 1.0, 2.0, 5.5] {
                let fd = (i_function(&p, s + step).unwrap() - i_function(&p, s - step).unwrap()) / (2.0 * step);
                assert_abs_diff_eq!(i_prime(&p, s).unwrap(), fd, epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn tau2_far_field() {
        for p in built_ins() {
            let t = tau2_charged(&p, 40.0).unwrap();
            assert_abs_diff_eq!(t, 1.0 / (PI * PI), epsilon = 1e-12);
        }
        assert!(matches!(tau2_charged(&RadialKernel::gef(), 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn singular_kernel_is_reported() {
        // P(s) = cos(s): 1 - P^2 vanishes at s = π
        let p = RadialKernel::custom("cos", f64::cos, |s| -s.sin(), |s| -s.cos());
        assert!(matches!(i_function(&p, PI), Err(Error::SingularKernel { .. })));
        assert!(matches!(
            wick_oracle_e(&p, C64::new(0.0, 0.0), C64::new(PI.sqrt(), 0.0)),
            Err(Error::DegeneratePair { .. })
        ));
    }

    #[test]
    fn wick_formula_matches_sampling() {
        use rand::SeedableRng;
        use rand_distr::{Distribution, StandardNormal};
        // Ω = L L^* for a fixed complex lower-triangular L
        let l = [
            [C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)],
            [C64::new(0.3, -0.4), C64::new(0.9, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)],
            [C64::new(-0.2, 0.1), C64::new(0.5, 0.5), C64::new(0.8, 0.0), C64::new(0.0, 0.0)],
            [C64::new(0.1, 0.6), C64::new(-0.3, 0.2), C64::new(0.4, -0.1), C64::new(0.7, 0.0)],
        ];
        let mut omega = vec![vec![C64::new(0.0, 0.0); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    omega[i][j] += l[i][k] * l[j][k].conj();
                }
            }
        }
        let exact = wick_im_product(&omega);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let n = 400_000;
        let (mut sum, mut sum2) = (0.0, 0.0);
        for _ in 0..n {
            let xi: Vec<C64> = (0..4)
                .map(|_| {
                    let a: f64 = StandardNormal.sample(&mut rng);
                    let b: f64 = StandardNormal.sample(&mut rng);
                    C64::new(a, b) / 2f64.sqrt()
                })
                .collect();
            let v: Vec<C64> = (0..4).map(|i| (0..4).map(|k| l[i][k] * xi[k]).sum()).collect();
            let x = (v[0] * v[1].conj()).im * (v[2] * v[3].conj()).im;
            sum += x;
            sum2 += x * x;
        }
        let mean = sum / n as f64;
        let se = ((sum2 / n as f64 - mean * mean) / n as f64).sqrt();
        assert!((mean - exact).abs() < 4.0 * se, "{mean} vs {exact} (se {se})");
    }

    #[test]
    fn oracle_matches_closed_form() {
        for p in [RadialKernel::gef(), RadialKernel::laguerre(1), RadialKernel::laguerre(2)] {
            for d in [0.2, 1.0, 2.7] {
                let z = C64::new(0.4, -0.3);
                let w = z + C64::from_polar(d, 0.7);
                let e = wick_oracle_e(&p, z, w).unwrap();
                let pv = p.p(d * d);
                let lhs = e / (1.0 - pv * pv) - 1.0;
                assert_abs_diff_eq!(lhs, i_prime(&p, d * d).unwrap(), epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn oracle_is_shift_and_rotation_invariant() {
        let p = RadialKernel::laguerre(1);
        let z = C64::new(0.1, 0.2);
        let w = C64::new(1.0, -0.5);
        let base = wick_oracle_e(&p, z, w).unwrap();
        for zeta in [C64::new(3.0, -1.0), C64::new(-2.5, 4.0)] {
            let e = wick_oracle_e(&p, z + zeta, w + zeta).unwrap();
            assert_abs_diff_eq!(e, base, epsilon = 1e-10);
        }
        let d = (w - z).norm();
        let rotated = wick_oracle_e(&p, z, z + C64::from_polar(d, 2.1)).unwrap();
        assert_abs_diff_eq!(rotated, base, epsilon = 1e-10);
    }

    #[test]
    fn variance_integrand_removable_value() {
        // 2 r^2 P'(r^2)^2 / (1 - P(r^2)^2) -> -P'(0) as r -> 0
        let p = RadialKernel::gef();
        let r: f64 = 1e-4;
        let v = p.values(r * r);
        let val = 2.0 * r * r * v.dp * v.dp / (1.0 - v.p * v.p);
        assert_abs_diff_eq!(val, 0.5, epsilon = 1e-4);
    }

    #[test]
    fn validation_reports() {
        assert!(validate_kernel(&RadialKernel::gef()).is_valid());
        let slow = RadialKernel::custom("e^-t/8", |s| (-s / 8.0).exp(), |s| -(-s / 8.0).exp() / 8.0, |s| (-s / 8.0).exp() / 64.0);
        let report = validate_kernel(&slow);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::SlopeAtZero { .. })));
        let cosine = RadialKernel::custom(
            "cos e^-t/2",
            |s| s.cos() * (-0.5 * s).exp(),
            |s| (-s.sin() - 0.5 * s.cos()) * (-0.5 * s).exp(),
            |s| (-0.75 * s.cos() + s.sin()) * (-0.5 * s).exp(),
        );
        assert!(validate_kernel(&cosine)
            .violations
            .iter()
            .all(|v| !matches!(v, Violation::NotContractive { .. })));
        // a profile touching 1 away from 0 is caught at an exact grid point
        let bump = RadialKernel::custom(
            "bump",
            |s| if (s - 2.0).abs() < 1e-9 { 1.0 } else { (-0.5 * s).exp() },
            |s| -0.5 * (-0.5 * s).exp(),
            |s| 0.25 * (-0.5 * s).exp(),
        );
        let report = validate_kernel(&bump);
        assert!(report
            .violations
            .contains(&Violation::NotContractive { s: 400.0 * CONTRACTIVITY_STEP, p: 1.0 }));
        let heavy = RadialKernel::custom("1/(1+t)", |s| 1.0 / (1.0 + s), |s| -1.0 / (1.0 + s).powi(2), |s| 2.0 / (1.0 + s).powi(3));
        assert!(validate_kernel(&heavy).has_decay_violation());
        assert!(matches!(variance_asymptote(&heavy), Err(Error::DecayViolation(_))));
        let slow = KernelSpec::parse_short("power:1").unwrap().build().unwrap();
        assert!(matches!(variance_asymptote(slow.radial().unwrap()), Err(Error::DecayViolation(_))));
        let fast = RadialKernel::power(4).unwrap();
        assert!(validate_kernel(&fast).is_valid());
        assert_abs_diff_eq!(rho1_radial(&fast).unwrap(), 1.0 / PI, epsilon = 1e-12);
    }

    #[test]
    fn kernel_spec_parsing() {
        let s = KernelSpec::parse_short("laguerre-avg:4").unwrap();
        assert_eq!(s.family, KernelFamily::LaguerreAvg);
        assert_eq!(s.q, Some(4));
        let json: KernelSpec = serde_json::from_str(r#"{"family": "custom", "jet": [0, 0, -1, -1, 0]}"#).unwrap();
        let model = json.build().unwrap();
        assert!(matches!(model, KernelModel::Jet(_)));
        assert!(KernelSpec::parse_short("laguerre").is_err());
        assert!(KernelSpec::parse_short("bogus:1").is_err());
    }

    #[test]
    fn small_separations_stay_accurate() {
        // GEF: I'(s) = -1 + s/2 + O(s^2)
        let p = RadialKernel::gef();
        for s in [1e-12, 1e-8, 1e-5, 0.9 * SMALL_S] {
            assert!((i_prime(&p, s).unwrap() + 1.0 - 0.5 * s).abs() < s * s + 1e-9);
        }
        for p in [RadialKernel::laguerre(3), RadialKernel::laguerre_avg(4).unwrap()] {
            let below = i_prime(&p, SMALL_S * (1.0 - 1e-9)).unwrap();
            let above = i_prime(&p, SMALL_S * (1.0 + 1e-9)).unwrap();
            assert!((below - above).abs() < 1e-8, "{below} vs {above}");
            let i0 = i_function(&p, 0.0).unwrap();
            assert!((i_function(&p, 1e-10).unwrap() - i0).abs() < 1e-8);
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(32))]
        #[test]
        fn wick_oracle_depends_on_distance_only(
            r in 0u32..3,
            zx in -2.0f64..2.0, zy in -2.0f64..2.0,
            d in 0.1f64..3.0, angle in 0.0f64..(2.0 * PI),
            shift_x in -3.0f64..3.0, shift_y in -3.0f64..3.0,
        ) {
            let p = RadialKernel::laguerre(r);
            let z = C64::new(zx, zy);
            let w = z + C64::from_polar(d, angle);
            let shift = C64::new(shift_x, shift_y);
            let e = wick_oracle_e(&p, z, w).unwrap();
            let moved = wick_oracle_e(&p, z + shift, w + shift).unwrap();
            let aligned = wick_oracle_e(&p, C64::new(0.0, 0.0), C64::new(d, 0.0)).unwrap();
            proptest::prop_assert!((e - moved).abs() <= 1e-9 * (1.0 + e.abs()), "{} vs {}", e, moved);
            proptest::prop_assert!((e - aligned).abs() <= 1e-9 * (1.0 + e.abs()), "{} vs {}", e, aligned);
        }
    }
}
