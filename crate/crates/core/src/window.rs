//! STFT windows, their uncertainty constants, and the bridge from a window
//! to the twisted kernel of the associated GWHF.
//!
//! For a unit-norm window `g` the zero intensity of the STFT of complex white
//! noise depends on `g` only through
//!
//! ```text
//! c1 = ∫ t |g|^2        c2 = ∫ t^2 |g|^2      c3 = ∫ |g'|^2
//! c4 = -i ∫ g conj(g')  c5 = Im ∫ t g conj(g')
//! ```

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{self, KernelJet, OmegaConvention, RadialKernel};
use crate::quad;
use crate::special::hermite_functions;

type C64 = Complex64;

/// Largest supported Hermite index.
pub const MAX_HERMITE: usize = 12;
/// Tolerance on `||g||_2 = 1`.
pub const NORM_TOL: f64 = 1e-10;
/// Pointwise level below which a window is treated as zero.
pub const SUPPORT_LEVEL: f64 = 1e-13;
/// Coarsest accepted sample spacing for sampled windows.
pub const MAX_SAMPLE_DT: f64 = 1.0 / 64.0;

#[derive(Debug, Clone)]
enum Rule {
    Hermite(usize),
    Gaussian {
        sigma: f64,
        lambda: C64,
        x0: f64,
        xi0: f64,
        xi1: f64,
    },
    Mixture(Vec<C64>),
    Samples(Arc<Sampled>),
    /// `e^{2πi(ξ0 t + ξ1 t^2)} g(t - x0)`
    Shifted {
        base: Box<Window>,
        x0: f64,
        xi0: f64,
        xi1: f64,
    },
}

#[derive(Debug)]
struct Sampled {
    t0: f64,
    dt: f64,
    values: Vec<C64>,
    derivs: Vec<C64>,
}

/// A unit-norm window on ℝ, evaluated together with its derivative.
#[derive(Debug, Clone)]
pub struct Window {
    rule: Rule,
    lo: f64,
    hi: f64,
    label: String,
}

impl Window {
    /// Hermite function `h_r`, `r <= 12`.
    pub fn hermite(r: usize) -> Result<Self> {
        if r > MAX_HERMITE {
            return Err(Error::InvalidWindow(format!(
                "Hermite index {r} exceeds the supported maximum {MAX_HERMITE}"
            )));
        }
        Ok(Self::analytic(Rule::Hermite(r), format!("hermite:{r}"), 0.0, 1.0))
    }

    /// `λ σ^{-1/2} exp(-(π/σ^2) [(t - x0)^2 + i(ξ0 t + ξ1 t^2)])` with
    /// `λ = 2^{1/4} e^{i phase}`.
    pub fn generalized_gaussian(sigma: f64, phase: f64, x0: f64, xi0: f64, xi1: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidWindow(format!("sigma must be positive, got {sigma}")));
        }
        if ![phase, x0, xi0, xi1].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidWindow("non-finite Gaussian parameter".into()));
        }
        let lambda = C64::from_polar(2f64.powf(0.25), phase);
        Ok(Self::analytic(
            Rule::Gaussian {
                sigma,
                lambda,
                x0,
                xi0,
                xi1,
            },
            format!("gauss:{sigma},{phase},{x0},{xi0},{xi1}"),
            x0,
            sigma,
        ))
    }

    /// `Σ c_k h_k`, rescaled to unit norm.
    pub fn hermite_mixture(coeffs: &[C64]) -> Result<Self> {
        if coeffs.is_empty() || coeffs.len() > MAX_HERMITE + 1 {
            return Err(Error::InvalidWindow(format!(
                "mixture needs 1..={} coefficients, got {}",
                MAX_HERMITE + 1,
                coeffs.len()
            )));
        }
        let norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidWindow("mixture coefficients vanish".into()));
        }
        let coeffs: Vec<C64> = coeffs.iter().map(|c| c / norm).collect();
        let label = format!(
            "mixture:{}",
            coeffs
                .iter()
                .map(|c| format!("{}{:+}i", c.re, c.im))
                .collect::<Vec<_>>()
                .join(",")
        );
        Ok(Self::analytic(Rule::Mixture(coeffs), label, 0.0, 1.0))
    }

    /// Dense samples `g(t0 + k dt)`, rescaled to unit norm. The derivative is
    /// obtained spectrally from the zero-padded samples.
    pub fn from_samples(values: Vec<C64>, t0: f64, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt <= MAX_SAMPLE_DT) {
            return Err(Error::InvalidWindow(format!(
                "sample spacing must be in (0, 1/64], got {dt}"
            )));
        }
        if values.len() < 16 {
            return Err(Error::InvalidWindow("need at least 16 samples".into()));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidWindow("non-finite sample".into()));
        }
        let peak = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let edge = values[0].norm().max(values[values.len() - 1].norm());
        if edge > 1e-8 * peak {
            return Err(Error::DecayViolation(format!(
                "sampled window is {edge:e} at the ends of its record (peak {peak:e})"
            )));
        }
        let norm = (values.iter().map(|v| v.norm_sqr()).sum::<f64>() * dt).sqrt();
        let values: Vec<C64> = values.iter().map(|v| v / norm).collect();
        let derivs = spectral_derivative(&values, dt);
        let n = values.len();
        Ok(Self {
            rule: Rule::Samples(Arc::new(Sampled {
                t0,
                dt,
                values,
                derivs,
            })),
            lo: t0,
            hi: t0 + (n - 1) as f64 * dt,
            label: format!("samples:{n}@{dt}"),
        })
    }

    /// `e^{2πi(ξ0 t + ξ1 t^2)} g(t - x0)`.
    pub fn shifted(&self, x0: f64, xi0: f64, xi1: f64) -> Self {
        Self {
            label: format!("{}>>({x0},{xi0},{xi1})", self.label),
            lo: self.lo + x0,
            hi: self.hi + x0,
            rule: Rule::Shifted {
                base: Box::new(self.clone()),
                x0,
                xi0,
                xi1,
            },
        }
    }

    fn analytic(rule: Rule, label: String, center: f64, scale: f64) -> Self {
        let mut w = Self {
            rule,
            lo: center,
            hi: center,
            label,
        };
        let step = 0.02 * scale;
        let quiet = 50;
        for side in [-1.0, 1.0] {
            let mut t = center;
            let mut run = 0;
            let mut last_loud = center;
            while run < quiet {
                t += side * step;
                let (g, dg) = w.eval_with_derivative(t);
                if g.norm() < SUPPORT_LEVEL && dg.norm() * scale < SUPPORT_LEVEL {
                    run += 1;
                } else {
                    run = 0;
                    last_loud = t;
                }
            }
            if side < 0.0 {
                w.lo = last_loud - step;
            } else {
                w.hi = last_loud + step;
            }
        }
        w
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Interval outside which `|g|` and `|g'|` are below `SUPPORT_LEVEL`.
    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// Half-width of the support interval.
    pub fn support_radius(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }

    pub fn hermite_index(&self) -> Option<usize> {
        match self.rule {
            Rule::Hermite(r) => Some(r),
            _ => None,
        }
    }

    pub fn eval(&self, t: f64) -> C64 {
        self.eval_with_derivative(t).0
    }

    pub fn eval_with_derivative(&self, t: f64) -> (C64, C64) {
        match &self.rule {
            Rule::Hermite(r) => {
                let (h, dh) = hermite_functions(*r, t);
                (C64::new(h[*r], 0.0), C64::new(dh[*r], 0.0))
            }
            Rule::Gaussian {
                sigma,
                lambda,
                x0,
                xi0,
                xi1,
            } => {
                let a = PI / (sigma * sigma);
                let u = t - x0;
                let expo = C64::new(-a * u * u, -a * (xi0 * t + xi1 * t * t));
                let g = lambda / sigma.sqrt() * expo.exp();
                let slope = C64::new(-2.0 * a * u, -a * (xi0 + 2.0 * xi1 * t));
                (g, g * slope)
            }
            Rule::Mixture(c) => {
                let (h, dh) = hermite_functions(c.len() - 1, t);
                c.iter()
                    .zip(h.iter().zip(&dh))
                    .fold((C64::new(0.0, 0.0), C64::new(0.0, 0.0)), |(g, d), (ck, (hk, dk))| {
                        (g + ck * hk, d + ck * dk)
                    })
            }
            Rule::Samples(s) => s.interpolate(t),
            Rule::Shifted { base, x0, xi0, xi1 } => {
                let (g, dg) = base.eval_with_derivative(t - x0);
                let phase = C64::from_polar(1.0, 2.0 * PI * (xi0 * t + xi1 * t * t));
                let chirp = C64::new(0.0, 2.0 * PI * (xi0 + 2.0 * xi1 * t));
                (phase * g, phase * (dg + chirp * g))
            }
        }
    }

    /// Frequency band `[-W, W]` that holds the window's spectrum to within
    /// the simulator's needs: `|mean frequency| + 11 * rms frequency`, with
    /// the mean `-c4 / 2π` and the rms `sqrt(c3) / 2π`.
    pub fn frequency_extent(&self) -> Result<f64> {
        let c = uncertainty_constants(self)?;
        Ok((c.c4.abs() + 11.0 * c.c3.sqrt()) / (2.0 * PI))
    }
}

impl Sampled {
    // cubic Hermite interpolation using the spectral derivatives
    fn interpolate(&self, t: f64) -> (C64, C64) {
        let zero = C64::new(0.0, 0.0);
        let n = self.values.len();
        let x = (t - self.t0) / self.dt;
        if !(x >= 0.0 && x <= (n - 1) as f64) {
            return (zero, zero);
        }
        let k = (x.floor() as usize).min(n - 2);
        let s = x - k as f64;
        let (p0, p1) = (self.values[k], self.values[k + 1]);
        let (m0, m1) = (self.derivs[k] * self.dt, self.derivs[k + 1] * self.dt);
        let h00 = 2.0 * s.powi(3) - 3.0 * s * s + 1.0;
        let h10 = s.powi(3) - 2.0 * s * s + s;
        let h01 = -2.0 * s.powi(3) + 3.0 * s * s;
        let h11 = s.powi(3) - s * s;
        let g = p0 * h00 + m0 * h10 + p1 * h01 + m1 * h11;
        let d00 = 6.0 * s * s - 6.0 * s;
        let d10 = 3.0 * s * s - 4.0 * s + 1.0;
        let d01 = -6.0 * s * s + 6.0 * s;
        let d11 = 3.0 * s * s - 2.0 * s;
        let dg = (p0 * d00 + m0 * d10 + p1 * d01 + m1 * d11) / self.dt;
        (g, dg)
    }
}

fn spectral_derivative(values: &[C64], dt: f64) -> Vec<C64> {
    let n = values.len();
    let m = (2 * n).next_power_of_two();
    let mut buf = vec![C64::new(0.0, 0.0); m];
    buf[..n].copy_from_slice(values);
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(m).process(&mut buf);
    for (k, v) in buf.iter_mut().enumerate() {
        let freq = if k < m / 2 {
            k as f64
        } else if k == m / 2 {
            0.0
        } else {
            k as f64 - m as f64
        };
        *v *= C64::new(0.0, 2.0 * PI * freq / (m as f64 * dt));
    }
    planner.plan_fft_inverse(m).process(&mut buf);
    buf.truncate(n);
    buf.iter().map(|v| v / m as f64).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
}

/// Quadrature tolerance for the moments.
pub const CONSTANTS_TOL: f64 = 1e-12;

pub fn uncertainty_constants(g: &Window) -> Result<UncertaintyConstants> {
    let integrand = |t: f64| -> [f64; 8] {
        let (v, d) = g.eval_with_derivative(t);
        let m = v.norm_sqr();
        let j = v * d.conj();
        [m, t * m, t * t * m, d.norm_sqr(), j.re, j.im, (t * j).im, 0.0]
    };
    let s: [f64; 8] = match &g.rule {
        // trapezoid on the native grid is spectrally accurate for decayed samples
        Rule::Samples(samp) => {
            let mut acc = [0.0; 8];
            for k in 0..samp.values.len() {
                let t = samp.t0 + k as f64 * samp.dt;
                let (v, d) = (samp.values[k], samp.derivs[k]);
                let m = v.norm_sqr();
                let j = v * d.conj();
                let row = [m, t * m, t * t * m, d.norm_sqr(), j.re, j.im, (t * j).im, 0.0];
                for (a, b) in acc.iter_mut().zip(row) {
                    *a += b * samp.dt;
                }
            }
            acc
        }
        _ => {
            let (lo, hi) = g.support();
            quad::integrate_doubling(&integrand, lo, hi, CONSTANTS_TOL)?
        }
    };
    if (s[0] - 1.0).abs() > NORM_TOL {
        return Err(Error::InvalidWindow(format!(
            "window norm^2 is {} (expected 1 within {NORM_TOL:e})",
            s[0]
        )));
    }
    // -i ∫ g conj(g') = Im J - i Re J, and Re J = (1/2) ∫ (|g|^2)' = 0
    Ok(UncertaintyConstants {
        c1: s[1],
        c2: s[2],
        c3: s[3],
        c4: s[5],
        c5: s[6],
    })
}

/// The constants as a twisted-kernel jet of the associated GWHF.
pub fn jet_from_constants(c: &UncertaintyConstants) -> Result<KernelJet> {
    let sp = PI.sqrt();
    KernelJet::new(-c.c4 / sp, 2.0 * sp * c.c1, -c.c3 / PI, -4.0 * PI * c.c2, 2.0 * c.c5)
}

/// `(c2 - c1^2) c3 - c2 c4^2 - c5^2 ± 2 c1 c4 c5`, with `+` under the
/// regression convention.
pub fn discriminant(c: &UncertaintyConstants, convention: OmegaConvention) -> f64 {
    let sign = match convention {
        OmegaConvention::Regression => 1.0,
        OmegaConvention::Flipped => -1.0,
    };
    (c.c2 - c.c1 * c.c1) * c.c3 - c.c2 * c.c4 * c.c4 - c.c5 * c.c5 + sign * 2.0 * c.c1 * c.c4 * c.c5
}

/// Zeros per unit area of the STFT of white noise: `(4D + 1) / (4 sqrt(D))`.
pub fn rho1_stft_from_constants(c: &UncertaintyConstants, convention: OmegaConvention) -> Result<f64> {
    let d = discriminant(c, convention);
    if !(d > 0.0) {
        return Err(Error::InvalidWindow(format!(
            "uncertainty discriminant {d:e} is not positive under the {} convention",
            convention.name()
        )));
    }
    Ok((4.0 * d + 1.0) / (4.0 * d.sqrt()))
}

pub fn rho1_stft(g: &Window) -> Result<f64> {
    rho1_stft_with(g, OmegaConvention::default())
}

pub fn rho1_stft_with(g: &Window, convention: OmegaConvention) -> Result<f64> {
    rho1_stft_from_constants(&uncertainty_constants(g)?, convention)
}

/// Same quantity through the kernel jet: `π ρ1(jet)`.
pub fn rho1_stft_via_jet(g: &Window, convention: OmegaConvention) -> Result<f64> {
    let jet = jet_from_constants(&uncertainty_constants(g)?)?;
    Ok(PI * kernel::rho1_with(&jet, convention)?)
}

/// `V_g g(a, b) = ∫ g(t) conj(g(t - a)) e^{-2πi b t} dt`.
pub fn ambiguity(g: &Window, a: f64, b: f64) -> Result<C64> {
    let (lo, hi) = g.support();
    let (lo, hi) = (lo.max(lo + a), hi.min(hi + a));
    if lo >= hi {
        return Ok(C64::new(0.0, 0.0));
    }
    let f = |t: f64| g.eval(t) * g.eval(t - a).conj() * C64::from_polar(1.0, -2.0 * PI * b * t);
    quad::integrate_doubling(&f, lo, hi, 1e-12)
}

/// Twisted kernel of the GWHF built from a window.
#[derive(Debug, Clone)]
pub enum AmbiguityKernel {
    /// Hermite windows: `L_r(|z|^2) e^{-|z|^2/2}`.
    Radial(RadialKernel),
    /// `H(z) = e^{-ixy} V_g g(x/√π, -y/√π)` by quadrature.
    Numeric(Window),
}

impl AmbiguityKernel {
    pub fn eval(&self, z: C64) -> Result<C64> {
        match self {
            AmbiguityKernel::Radial(p) => Ok(C64::new(p.p(z.norm_sqr()), 0.0)),
            AmbiguityKernel::Numeric(g) => {
                let sp = PI.sqrt();
                let v = ambiguity(g, z.re / sp, -z.im / sp)?;
                Ok(C64::from_polar(1.0, -z.re * z.im) * v)
            }
        }
    }

    pub fn jet(&self) -> Result<KernelJet> {
        match self {
            AmbiguityKernel::Radial(p) => kernel::jet_from_radial(p),
            AmbiguityKernel::Numeric(g) => jet_from_constants(&uncertainty_constants(g)?),
        }
    }
}

pub fn ambiguity_kernel(g: &Window) -> AmbiguityKernel {
    match g.hermite_index() {
        Some(r) => AmbiguityKernel::Radial(RadialKernel::laguerre(r as u32)),
        None => AmbiguityKernel::Numeric(g.clone()),
    }
}

/// `ρ1,g` for `g` and for `e^{2πi(ξ0 t + ξ1 t^2)} g(t - x0)`.
pub fn invariance_check(g: &Window, x0: f64, xi0: f64, xi1: f64) -> Result<(f64, f64)> {
    invariance_check_with(g, x0, xi0, xi1, OmegaConvention::default())
}

pub fn invariance_check_with(
    g: &Window,
    x0: f64,
    xi0: f64,
    xi1: f64,
    convention: OmegaConvention,
) -> Result<(f64, f64)> {
    let before = rho1_stft_with(g, convention)?;
    let after = rho1_stft_with(&g.shifted(x0, xi0, xi1), convention)?;
    Ok((before, after))
}

/// Which window family a record names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowFamily {
    Hermite,
    GeneralizedGaussian,
    HermiteMixture,
    Samples,
}

/// Mixture coefficient: a real number or a `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Real(f64),
    Complex([f64; 2]),
}

impl Coeff {
    fn value(self) -> C64 {
        match self {
            Coeff::Real(r) => C64::new(r, 0.0),
            Coeff::Complex([re, im]) => C64::new(re, im),
        }
    }
}

/// Window record as read from JSON configs:
/// `{"family": "hermite" | "generalized-gaussian" | "hermite-mixture" | "samples",
///   "r": int, "params": [sigma, phase, x0, xi0, xi1], "coeffs": [...],
///   "samples_path": string, "dt": real, "t0": real, "shift": [x0, xi0, xi1]}`.
///
/// `shift` replaces the window by `e^{2πi(ξ0 t + ξ1 t^2)} g(t - x0)`.
/// A samples file holds one `re,im` pair per line (blank lines and lines
/// starting with `#` are skipped). Without `t0` the record is centred at 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub family: WindowFamily,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<Coeff>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples_path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<[f64; 3]>,
}

impl WindowSpec {
    pub fn hermite(r: usize) -> Self {
        Self {
            family: WindowFamily::Hermite,
            r: Some(r),
            params: None,
            coeffs: None,
            samples_path: None,
            dt: None,
            t0: None,
            shift: None,
        }
    }

    /// Short form used on the command line: `hermite:1`,
    /// `gauss:sigma,phase,x0,xi0,xi1`, `mixture:c0,c1,...`,
    /// `samples:path,dt`. A suffix `@x0,xi0,xi1` applies a shift and chirp.
    pub fn parse_short(s: &str) -> Result<Self> {
        let (base, shift) = match s.rsplit_once('@') {
            Some((b, sh)) => (b, Some(sh)),
            None => (s, None),
        };
        let (name, arg) = base.split_once(':').unwrap_or((base, ""));
        let numbers = |a: &str| -> Result<Vec<f64>> {
            a.split(',')
                .filter(|v| !v.trim().is_empty())
                .map(|v| {
                    v.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Config(format!("bad number `{v}` in window `{s}`")))
                })
                .collect()
        };
        let mut spec = Self::hermite(0);
        match name {
            "hermite" => {
                spec.r = Some(arg.parse().map_err(|_| {
                    Error::Config(format!("window `{s}` needs an index, e.g. hermite:1"))
                })?);
            }
            "gauss" | "generalized-gaussian" => {
                spec.family = WindowFamily::GeneralizedGaussian;
                spec.r = None;
                spec.params = Some(numbers(arg)?);
            }
            "mixture" | "hermite-mixture" => {
                spec.family = WindowFamily::HermiteMixture;
                spec.r = None;
                spec.coeffs = Some(numbers(arg)?.into_iter().map(Coeff::Real).collect());
            }
            "samples" => {
                let (path, dt) = arg
                    .rsplit_once(',')
                    .ok_or_else(|| Error::Config("samples window needs `samples:path,dt`".into()))?;
                spec.family = WindowFamily::Samples;
                spec.r = None;
                spec.samples_path = Some(PathBuf::from(path));
                spec.dt = Some(
                    dt.parse()
                        .map_err(|_| Error::Config(format!("bad dt `{dt}` in `{s}`")))?,
                );
            }
            other => {
                return Err(Error::Config(format!(
                    "unknown window family `{other}` (expected hermite, gauss, mixture, samples)"
                )))
            }
        }
        if let Some(sh) = shift {
            let v = numbers(sh)?;
            spec.shift = Some(
                v.try_into()
                    .map_err(|_| Error::Config(format!("shift in `{s}` needs x0,xi0,xi1")))?,
            );
        }
        Ok(spec)
    }

    /// Builds the window. Relative sample paths are resolved against `base`.
    pub fn build(&self, base: Option<&Path>) -> Result<Window> {
        let g = self.build_unshifted(base)?;
        Ok(match self.shift {
            Some([x0, xi0, xi1]) => g.shifted(x0, xi0, xi1),
            None => g,
        })
    }

    fn build_unshifted(&self, base: Option<&Path>) -> Result<Window> {
        match self.family {
            WindowFamily::Hermite => Window::hermite(
                self.r
                    .ok_or_else(|| Error::Config("hermite window needs \"r\"".into()))?,
            ),
            WindowFamily::GeneralizedGaussian => {
                let p = self.params.as_deref().unwrap_or(&[]);
                let get = |i: usize, default: f64| p.get(i).copied().unwrap_or(default);
                if p.len() > 5 {
                    return Err(Error::Config(
                        "generalized-gaussian takes at most [sigma, phase, x0, xi0, xi1]".into(),
                    ));
                }
                Window::generalized_gaussian(get(0, 1.0), get(1, 0.0), get(2, 0.0), get(3, 0.0), get(4, 0.0))
            }
            WindowFamily::HermiteMixture => {
                let c: Vec<C64> = self
                    .coeffs
                    .as_ref()
                    .ok_or_else(|| Error::Config("hermite-mixture needs \"coeffs\"".into()))?
                    .iter()
                    .map(|c| c.value())
                    .collect();
                Window::hermite_mixture(&c)
            }
            WindowFamily::Samples => {
                let path = self
                    .samples_path
                    .as_ref()
                    .ok_or_else(|| Error::Config("samples window needs \"samples_path\"".into()))?;
                let path = match base {
                    Some(b) if path.is_relative() => b.join(path),
                    _ => path.clone(),
                };
                let dt = self
                    .dt
                    .ok_or_else(|| Error::Config("samples window needs \"dt\"".into()))?;
                let values = read_samples(&path)?;
                let t0 = self
                    .t0
                    .unwrap_or(-0.5 * (values.len().saturating_sub(1)) as f64 * dt);
                Window::from_samples(values, t0, dt)
            }
        }
    }
}

fn read_samples(path: &Path) -> Result<Vec<C64>> {
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|p| !p.is_empty());
        let mut next = || -> Result<f64> {
            parts
                .next()
                .unwrap_or("0")
                .parse()
                .map_err(|_| Error::Parse(format!("{}:{}: expected `re,im`", path.display(), i + 1)))
        };
        let re = next()?;
        let im = next()?;
        out.push(C64::new(re, im));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn hermite_rho(r: f64) -> f64 {
        r + 0.5 + 1.0 / (4.0 * r + 2.0)
    }

    #[test]
    fn hermite_zero_is_gaussian() {
        let g = Window::hermite(0).unwrap();
        for t in [-0.7, 0.0, 0.3, 1.2] {
            assert_abs_diff_eq!(g.eval(t).re, 2f64.powf(0.25) * (-PI * t * t).exp(), epsilon = 1e-15);
        }
        assert!(Window::hermite(13).is_err());
    }

    #[test]
    fn hermite_orthonormality() {
        let (lo, hi) = Window::hermite(6).unwrap().support();
        for r in 0..=6 {
            for s in 0..=6 {
                let f = |t: f64| {
                    let (h, _) = hermite_functions(6, t);
                    h[r] * h[s]
                };
                let v = quad::integrate_doubling(&f, lo, hi, 1e-13).unwrap();
                assert_abs_diff_eq!(v, if r == s { 1.0 } else { 0.0 }, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn constants_of_gaussian() {
        let c = uncertainty_constants(&Window::hermite(0).unwrap()).unwrap();
        assert_abs_diff_eq!(c.c1, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.c2, 1.0 / (4.0 * PI), epsilon = 1e-12);
        assert_abs_diff_eq!(c.c3, PI, epsilon = 1e-10);
        assert_eq!(c.c4, 0.0);
        assert_eq!(c.c5, 0.0);
    }

    #[test]
    fn translation_moves_first_moment() {
        let g = Window::hermite(0).unwrap().shifted(1.3, 0.0, 0.0);
        let c = uncertainty_constants(&g).unwrap();
        assert_abs_diff_eq!(c.c1, 1.3, epsilon = 1e-11);
    }

    #[test]
    fn hermite_intensities_both_paths() {
        for r in 0..=5 {
            let g = Window::hermite(r).unwrap();
            let a = rho1_stft(&g).unwrap();
            let b = rho1_stft_via_jet(&g, OmegaConvention::Regression).unwrap();
            assert_abs_diff_eq!(a, hermite_rho(r as f64), epsilon = 1e-9);
            assert_abs_diff_eq!(a, b, epsilon = 1e-9);
        }
    }

    #[test]
    fn hermite_jets_match_laguerre_kernels() {
        for r in 0..=5 {
            let c = uncertainty_constants(&Window::hermite(r).unwrap()).unwrap();
            let a = jet_from_constants(&c).unwrap().as_array();
            let b = kernel::jet_from_radial(&RadialKernel::laguerre(r as u32)).unwrap().as_array();
            for (x, y) in a.iter().zip(b) {
                assert_abs_diff_eq!(*x, y, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn generalized_gaussians_saturate() {
        let g = Window::generalized_gaussian(1.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        let h0 = Window::hermite(0).unwrap();
        for t in [-0.5, 0.2, 0.9] {
            assert_abs_diff_eq!((g.eval(t) - h0.eval(t)).norm(), 0.0, epsilon = 1e-15);
        }
        let g = Window::generalized_gaussian(2.0, 0.0, 1.5, 0.3, 0.7).unwrap();
        let c = uncertainty_constants(&g).unwrap();
        assert_abs_diff_eq!(c.c1, 1.5, epsilon = 1e-10);
        assert_abs_diff_eq!(rho1_stft(&g).unwrap(), 1.0, epsilon = 1e-8);
    }

    #[test]
    fn analytic_constants_of_chirped_gaussian() {
        // c4 = π(ξ0 + 2 ξ1 x0)/σ^2 for the generalized Gaussian
        let (sigma, x0, xi0, xi1) = (1.3, 0.4, -0.6, 0.25);
        let c = uncertainty_constants(&Window::generalized_gaussian(sigma, 0.7, x0, xi0, xi1).unwrap()).unwrap();
        assert_abs_diff_eq!(c.c4, PI * (xi0 + 2.0 * xi1 * x0) / (sigma * sigma), epsilon = 1e-9);
    }

    #[test]
    fn real_windows_have_vanishing_c4_c5() {
        let g = Window::hermite_mixture(&[C64::new(0.6, 0.0), C64::new(-0.3, 0.0), C64::new(0.5, 0.0)]).unwrap();
        let c = uncertainty_constants(&g).unwrap();
        assert!(c.c4.abs() <= 1e-12 && c.c5.abs() <= 1e-12);
    }

    #[test]
    fn mixture_is_above_one() {
        let g = Window::hermite_mixture(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)]).unwrap();
        let rho = rho1_stft(&g).unwrap();
        assert!(rho >= 1.0);
        assert_abs_diff_eq!(rho, rho1_stft_via_jet(&g, OmegaConvention::Regression).unwrap(), epsilon = 1e-9);
    }

    #[test]
    fn laguerre_connection() {
        for r in 0..=3 {
            let g = Window::hermite_mixture(&{
                let mut c = vec![C64::new(0.0, 0.0); r + 1];
                c[r] = C64::new(1.0, 0.0);
                c
            })
            .unwrap();
            let numeric = AmbiguityKernel::Numeric(g);
            let exact = RadialKernel::laguerre(r as u32);
            for z in [C64::new(0.0, 0.0), C64::new(0.5, -0.2), C64::new(-1.1, 0.8), C64::new(2.0, 1.5)] {
                let h = numeric.eval(z).unwrap();
                assert_abs_diff_eq!(h.re, exact.p(z.norm_sqr()), epsilon = 1e-10);
                assert_abs_diff_eq!(h.im, 0.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn numeric_kernel_is_contractive() {
        let g = Window::generalized_gaussian(1.4, 0.0, 0.3, 0.2, 0.5).unwrap();
        let k = ambiguity_kernel(&g);
        assert_abs_diff_eq!(k.eval(C64::new(0.0, 0.0)).unwrap().re, 1.0, epsilon = 1e-10);
        for i in 1..8 {
            let z = C64::from_polar(0.3 * i as f64, 0.9 * i as f64);
            assert!(k.eval(z).unwrap().norm() < 1.0);
        }
    }

    #[test]
    fn shift_invariance() {
        let (a, b) = invariance_check(&Window::hermite(0).unwrap(), 1.0, 0.5, 0.0).unwrap();
        assert_abs_diff_eq!(a, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(b, 1.0, epsilon = 1e-9);
        let (a, b) = invariance_check(&Window::hermite(1).unwrap(), 0.3, -0.2, 0.4).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-7);
    }

    #[test]
    fn sampled_window_matches_analytic() {
        let dt = 1.0 / 128.0;
        let n = 1025;
        let t0 = -4.0;
        let h1 = Window::hermite(1).unwrap();
        let values: Vec<C64> = (0..n).map(|k| h1.eval(t0 + k as f64 * dt)).collect();
        let g = Window::from_samples(values, t0, dt).unwrap();
        let a = uncertainty_constants(&g).unwrap();
        let b = uncertainty_constants(&h1).unwrap();
        assert_abs_diff_eq!(a.c2, b.c2, epsilon = 1e-9);
        assert_abs_diff_eq!(a.c3, b.c3, epsilon = 1e-8);
        let (v, d) = g.eval_with_derivative(0.123);
        let (v0, d0) = h1.eval_with_derivative(0.123);
        assert_abs_diff_eq!((v - v0).norm(), 0.0, epsilon = 1e-7);
        assert_abs_diff_eq!((d - d0).norm(), 0.0, epsilon = 1e-5);
    }

    #[test]
    fn sampled_window_rejects_truncation() {
        let values = vec![C64::new(1.0, 0.0); 64];
        assert!(matches!(Window::from_samples(values, 0.0, 1.0 / 64.0), Err(Error::DecayViolation(_))));
    }

    #[test]
    fn spec_parsing() {
        let s = WindowSpec::parse_short("hermite:3").unwrap();
        assert_eq!(s.build(None).unwrap().hermite_index(), Some(3));
        let s = WindowSpec::parse_short("gauss:2,0,1.5,0.3,0.7").unwrap();
        assert!(s.build(None).is_ok());
        let json: WindowSpec =
            serde_json::from_str(r#"{"family": "hermite-mixture", "coeffs": [1, [0, 1]]}"#).unwrap();
        assert!(json.build(None).is_ok());
        assert!(WindowSpec::parse_short("bogus").is_err());
        let s = WindowSpec::parse_short("hermite:1@0.3,0.2,0.1").unwrap();
        assert_eq!(s.shift, Some([0.3, 0.2, 0.1]));
        let g = s.build(None).unwrap();
        assert_eq!(g.hermite_index(), None);
        assert_abs_diff_eq!(rho1_stft(&g).unwrap(), 5.0 / 3.0, epsilon = 1e-8);
        assert!(WindowSpec::parse_short("hermite:1@0.3,0.2").is_err());
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]
        #[test]
        fn mixtures_obey_the_bound_and_the_symmetries(
            coeffs in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..6),
            x0 in -1.0f64..1.0,
            xi0 in -1.0f64..1.0,
            xi1 in -0.5f64..0.5,
        ) {
            let coeffs: Vec<C64> = coeffs.into_iter().map(|(a, b)| C64::new(a, b)).collect();
            proptest::prop_assume!(coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>() > 1e-3);
            let g = Window::hermite_mixture(&coeffs).unwrap();
            let (before, after) = invariance_check(&g, x0, xi0, xi1).unwrap();
            proptest::prop_assert!(before >= 1.0 - 1e-7, "{}", before);
            proptest::prop_assert!((before - after).abs() <= 1e-7, "{} vs {}", before, after);
        }
    }
}
