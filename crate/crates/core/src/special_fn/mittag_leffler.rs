//! Two-parameter Mittag-Leffler function `E_{p,p̄}(z) = Σ_k z^k / Γ(pk + p̄)` for real `z`.
//!
//! * Power series whenever it can be summed without cancellation (every
//!   term bounded by [`SERIES_TERM_LIMIT`]), which covers `z ≥ 0` and small `|z|`.
//! * For `z < 0` and `0 < p < 1` the real-axis integral representation
//!
//!   ```text
//!   E_{p,p̄}(−x) = 1/(pπ) ∫₀^∞ r^{(1−p̄)/p} e^{−r^{1/p}}
//!                 (r sin π(1−p̄) + x sin π(1−p̄+p)) / (r² + 2rx cos pπ + x²) dr,
//!   ```
//!
//!   valid for `p̄ < 1 + p`; larger `p̄` are reduced with
//!   `E_{p,p̄}(z) = (E_{p,p̄−p}(z) − 1/Γ(p̄−p)) / z`.
//! * For `p = 1`, `E_{1,p̄}(z) = 1/Γ(p̄−1) ∫₀¹ e^{zs} (1−s)^{p̄−2} ds` (`p̄ > 1`),
//!   with `E_{1,1} = exp` and the upward recurrence for `p̄ < 1`.

use std::f64::consts::PI;

use super::gamma::{ln_gamma_positive, rgamma};
use super::quadrature::{integrate_adaptive, jacobi_rule};
use crate::{Error, Result};

/// Arguments of `E_{p,p̄}(z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MLParams {
    pub p: f64,
    pub pbar: f64,
    pub z: f64,
}

impl MLParams {
    pub fn new(p: f64, pbar: f64, z: f64) -> Self {
        Self { p, pbar, z }
    }
}

/// Largest tolerated series term; beyond this the alternating series loses
/// more than one digit to cancellation.
const SERIES_TERM_LIMIT: f64 = 1e1;
const SERIES_MAX_TERMS: usize = 2_000;
const INTEGRAL_ABS_TOL: f64 = 1e-14;

pub fn mittag_leffler(params: MLParams) -> Result<f64> {
    let MLParams { p, pbar, z } = params;
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Domain(format!("Mittag-Leffler parameter p must lie in (0, 1], got {p}")));
    }
    if !pbar.is_finite() || !z.is_finite() {
        return Err(Error::Domain(format!("non-finite Mittag-Leffler argument (p̄ = {pbar}, z = {z})")));
    }
    if z == 0.0 {
        return Ok(rgamma(pbar));
    }
    if z > 0.0 || series_is_safe(p, pbar, -z) {
        return series(p, pbar, z);
    }
    let x = -z;
    if p == 1.0 {
        unit_order_negative(pbar, x)
    } else {
        fractional_order_negative(p, pbar, x)
    }
}

/// Estimates the largest |term| of the series at `|z| = x` without summing it.
fn series_is_safe(p: f64, pbar: f64, x: f64) -> bool {
    if x <= 1.0 {
        return true;
    }
    // terms decay once (pk)^p exceeds x
    let k_peak = x.powf(1.0 / p) / p;
    if k_peak > 400.0 {
        return false;
    }
    let ln_limit = SERIES_TERM_LIMIT.ln();
    let ln_x = x.ln();
    (0..=(k_peak as usize + 4)).all(|k| {
        let arg = p * k as f64 + pbar;
        if arg <= 0.0 {
            // 1/Γ of a non-positive argument is bounded by a modest constant here
            k as f64 * ln_x < ln_limit
        } else {
            k as f64 * ln_x - ln_gamma_positive(arg) < ln_limit
        }
    })
}

fn series(p: f64, pbar: f64, z: f64) -> Result<f64> {
    let mut sum = 0.0;
    let mut zk = 1.0;
    let k_settle = z.abs().powf(1.0 / p) / p + 2.0;
    for k in 0..SERIES_MAX_TERMS {
        let term = zk * rgamma(p * k as f64 + pbar);
        sum += term;
        if k as f64 > k_settle && term.abs() <= 1e-17 * sum.abs().max(1e-300) {
            return Ok(sum);
        }
        zk *= z;
        if !zk.is_finite() {
            break;
        }
    }
    Err(Error::Evaluation(format!(
        "Mittag-Leffler series E_{{{p},{pbar}}}({z}) did not converge in {SERIES_MAX_TERMS} terms"
    )))
}

/// `E_{1,p̄}(−x)` through the finite Laplace-type integral.
fn unit_order_negative(pbar: f64, x: f64) -> Result<f64> {
    if pbar == 1.0 {
        return Ok((-x).exp());
    }
    if pbar < 1.0 {
        return Ok(rgamma(pbar) - x * unit_order_negative(pbar + 1.0, x)?);
    }
    let mut previous = f64::NAN;
    let mut nodes = 32;
    while nodes <= 1024 {
        let rule = jacobi_rule(nodes, 0.0, pbar - 2.0)?;
        let value = rgamma(pbar - 1.0) * rule.integrate(|s| (-x * s).exp());
        if (value - previous).abs() <= 1e-15 * value.abs().max(1e-300) + 1e-16 {
            return Ok(value);
        }
        previous = value;
        nodes *= 2;
    }
    Err(Error::Evaluation(format!(
        "E_{{1,{pbar}}}(-{x}) quadrature did not settle with 1024 nodes"
    )))
}

fn fractional_order_negative(p: f64, pbar: f64, x: f64) -> Result<f64> {
    if pbar >= 1.0 + p {
        let lower = fractional_order_negative(p, pbar - p, x)?;
        return Ok((lower - rgamma(pbar - p)) / -x);
    }
    let gamma_exp = (1.0 - pbar) / p;
    let sin_a = (PI * (1.0 - pbar)).sin();
    let sin_b = (PI * (1.0 - pbar + p)).sin();
    let cos_p = (PI * p).cos();
    let inv_p = 1.0 / p;
    // the part of the integrand that is smooth at r = 0
    let smooth = |r: f64| {
        (-r.powf(inv_p)).exp() * (r * sin_a + x * sin_b) / (r * r + 2.0 * r * x * cos_p + x * x)
    };
    let integrand = |r: f64| r.powf(gamma_exp) * smooth(r);

    // e^{-r^{1/p}} < e^{-80} beyond r_max
    let r_max = 80f64.powf(p);
    let start = r_max.min(1.0);
    let mut breaks: Vec<f64> = (0..=50).map(|k| start * 0.5f64.powi(k)).collect();
    // the denominator is smallest at r = −x cos pπ
    let r_peak = if cos_p < 0.0 { -x * cos_p } else { x };
    if r_peak < r_max {
        breaks.push(r_peak);
    }
    breaks.push(r_max);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    // innermost panel [0, ε] with the algebraic weight r^γ integrated exactly
    let eps = breaks[0];
    let inner = jacobi_rule(8, gamma_exp, 0.0)?;
    let mut total = inner.integrate_on(0.0, eps, smooth);
    for w in breaks.windows(2) {
        total += integrate_adaptive(&integrand, w[0], w[1], INTEGRAL_ABS_TOL)?;
    }
    Ok(total / (p * PI))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn ml(p: f64, pbar: f64, z: f64) -> f64 {
        mittag_leffler(MLParams::new(p, pbar, z)).unwrap()
    }

    #[test]
    fn exponential_and_origin() {
        assert_abs_diff_eq!(ml(1.0, 1.0, 1.0), std::f64::consts::E, epsilon = 1e-13);
        assert_abs_diff_eq!(ml(0.4, 1.0, 0.0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ml(0.7, 2.0, 0.0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ml(0.5, 0.5, 0.0), 1.0 / PI.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn erfc_identity() {
        // E_{1/2,1}(-x) = e^{x²} erfc(x), 20-digit references
        assert_abs_diff_eq!(ml(0.5, 1.0, -1.0), 0.427_583_576_155_807_004_41, epsilon = 1e-14);
        assert_abs_diff_eq!(ml(0.5, 1.0, -5.0), 0.110_704_637_733_068_626_37, epsilon = 1e-14);
    }

    #[test]
    fn unit_order_closed_forms() {
        for &x in &[0.5, 2.0, 9.0, 20.0, 50.0] {
            assert_abs_diff_eq!(ml(1.0, 1.0, -x), (-x).exp(), epsilon = 1e-14);
            assert_abs_diff_eq!(ml(1.0, 2.0, -x), (1.0 - (-x).exp()) / x, epsilon = 1e-13);
            let e13 = (-x).exp();
            let expect3 = (e13 - 1.0 + x) / (x * x);
            assert_abs_diff_eq!(ml(1.0, 3.0, -x), expect3, epsilon = 1e-12);
        }
    }

    #[test]
    fn rejects_bad_order() {
        assert!(matches!(mittag_leffler(MLParams::new(0.0, 1.0, -1.0)), Err(Error::Domain(_))));
        assert!(matches!(mittag_leffler(MLParams::new(1.5, 1.0, -1.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn series_and_integral_agree_on_overlap() {
        let mut compared = 0;
        for &p in &[0.3, 0.5, 0.8, 0.95] {
            for &pbar in &[p, 1.0, 1.3, 2.0] {
                for &x in &[1.5, 2.5, 3.5] {
                    if !series_is_safe(p, pbar, x) {
                        continue;
                    }
                    let s = series(p, pbar, -x).unwrap();
                    let i = fractional_order_negative(p, pbar, x).unwrap();
                    assert_abs_diff_eq!(s, i, epsilon = 1e-13);
                    compared += 1;
                }
            }
        }
        assert!(compared >= 10);
    }
}
