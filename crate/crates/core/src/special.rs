//! Laguerre polynomials and Hermite functions.
//!
//! Hermite functions use the time-frequency normalization
//! `h_r(t) = 2^{1/4} / sqrt(r!) * (-1 / (2 sqrt(pi)))^r * e^{pi t^2} d^r/dt^r e^{-2 pi t^2}`,
//! so that `||h_r||_2 = 1` and `h_0(t) = 2^{1/4} e^{-pi t^2}`.

use std::f64::consts::PI;

/// Generalized Laguerre polynomial `L_n^{(alpha)}(t)` by the three-term
/// recurrence. Negative `n` yields 0, which keeps derivative identities such
/// as `d/dt L_n^{(a)} = -L_{n-1}^{(a+1)}` valid at the bottom of the family.
pub fn generalized_laguerre(n: i64, alpha: f64, t: f64) -> f64 {
    if n < 0 {
        return 0.0;
    }
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - t;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + alpha - t) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `L_n(t) = sum_j (-1)^j C(n, j) t^j / j!`
pub fn laguerre(n: u32, t: f64) -> f64 {
    generalized_laguerre(n as i64, 0.0, t)
}

/// `L^{(1)}_n(t) = sum_{k=0}^{n} L_k(t)`, summed directly.
pub fn laguerre_sum(n: u32, t: f64) -> f64 {
    let mut prev = 1.0;
    let mut total = prev;
    if n == 0 {
        return total;
    }
    let mut cur = 1.0 - t;
    total += cur;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 - t) * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
        total += cur;
    }
    total
}

/// Values `h_0(t), ..., h_r(t)` and derivatives `h_0'(t), ..., h_r'(t)`.
pub fn hermite_functions(r: usize, t: f64) -> (Vec<f64>, Vec<f64>) {
    let u = (2.0 * PI).sqrt() * t;
    let mut h = Vec::with_capacity(r + 2);
    h.push(2f64.powf(0.25) * (-PI * t * t).exp());
    h.push(2f64.sqrt() * u * h[0]);
    for k in 1..=r {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * u * h[k] - (kf / (kf + 1.0)).sqrt() * h[k - 1];
        h.push(next);
    }
    // d/du psi_k = sqrt(k/2) psi_{k-1} - sqrt((k+1)/2) psi_{k+1}, and du/dt = sqrt(2 pi)
    let scale = (2.0 * PI).sqrt();
    let dh = (0..=r)
        .map(|k| {
            let kf = k as f64;
            let down = if k > 0 { (kf / 2.0).sqrt() * h[k - 1] } else { 0.0 };
            scale * (down - ((kf + 1.0) / 2.0).sqrt() * h[k + 1])
        })
        .collect();
    h.truncate(r + 1);
    (h, dh)
}

pub fn hermite_function(r: usize, t: f64) -> f64 {
    hermite_functions(r, t).0[r]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn binom(n: u32, k: u32) -> f64 {
        (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
    }

    fn laguerre_by_sum(n: u32, t: f64) -> f64 {
        let mut fact = 1.0;
        let mut total = 0.0;
        for j in 0..=n {
            if j > 0 {
                fact *= j as f64;
            }
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            total += sign * binom(n, j) * t.powi(j as i32) / fact;
        }
        total
    }

    #[test]
    fn low_order_laguerre() {
        for t in [-1.0, 0.0, 0.3, 2.5, 7.0] {
            assert_eq!(laguerre(0, t), 1.0);
            assert_abs_diff_eq!(laguerre(1, t), 1.0 - t, epsilon = 1e-15);
        }
        for q in 1..=6 {
            assert_abs_diff_eq!(laguerre_sum(q - 1, 0.0), q as f64, epsilon = 1e-14);
        }
    }

    #[test]
    fn recurrence_matches_explicit_sum() {
        for n in 0..=12 {
            for t in [0.0, 0.5, 1.0, 3.0, 9.0, 20.0] {
                let a = laguerre(n, t);
                let b = laguerre_by_sum(n, t);
                assert_abs_diff_eq!(a, b, epsilon = 1e-9 * (1.0 + b.abs()));
            }
        }
    }

    #[test]
    fn laguerre_sum_is_alpha_one() {
        for n in 0..=10 {
            for t in [0.0, 0.7, 4.0, 15.0] {
                let a = laguerre_sum(n, t);
                let b = generalized_laguerre(n as i64, 1.0, t);
                assert_abs_diff_eq!(a, b, epsilon = 1e-10 * (1.0 + b.abs()));
            }
        }
    }

    #[test]
    fn hermite_matches_rodrigues_low_orders() {
        // d/dt e^{-2 pi t^2} = -4 pi t e^{-2 pi t^2}
        // d2/dt2 e^{-2 pi t^2} = (16 pi^2 t^2 - 4 pi) e^{-2 pi t^2}
        let c = 2f64.powf(0.25);
        for t in [-1.3, -0.2, 0.0, 0.4, 1.1] {
            let g = (-PI * t * t).exp();
            let h0 = c * g;
            let h1 = c * (-1.0 / (2.0 * PI.sqrt())) * (-4.0 * PI * t) * g;
            let h2 = c / 2f64.sqrt() * (1.0 / (4.0 * PI)) * (16.0 * PI * PI * t * t - 4.0 * PI) * g;
            let (h, _) = hermite_functions(2, t);
            assert_abs_diff_eq!(h[0], h0, epsilon = 1e-14);
            assert_abs_diff_eq!(h[1], h1, epsilon = 1e-14);
            assert_abs_diff_eq!(h[2], h2, epsilon = 1e-14);
        }
    }

    #[test]
    fn hermite_derivatives_match_finite_differences() {
        let step = 1e-5;
        for t in [-0.9, 0.1, 0.6, 1.7] {
            let (_, dh) = hermite_functions(8, t);
            let (hp, _) = hermite_functions(8, t + step);
            let (hm, _) = hermite_functions(8, t - step);
            for k in 0..=8 {
                assert_abs_diff_eq!(dh[k], (hp[k] - hm[k]) / (2.0 * step), epsilon = 1e-6);
            }
        }
    }
}
