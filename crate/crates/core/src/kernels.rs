//! Variable exponent, generalized identity function `g`, and the discrete
//! kernel sequences used by the time-marching schemes.
//!
//! On the uniform grid `t_n = nτ`:
//!
//! * `b_j = (t_{j+1}^{1−α₀} − t_j^{1−α₀}) / (Γ(2−α₀)τ)`, the L1 coefficients;
//! * `b̂_j = τ b_j`, weights of the discrete fractional integral `I^{1−α₀}`;
//! * `w_j = g(t_j) − g(t_{j−1})`, history weights of `g′ ∗ Δu`;
//! * `P_0 = 1/b_0`, `P_m = (1/b_0) Σ_{i=1}^{m} (b_{i−1} − b_i) P_{m−i}`,
//!   the complementary kernel with `Σ_{j=k}^{n} P_{n−j} b_{j−k} = 1`.

use crate::special_fn::{jacobi_rule, ln_gamma_positive, rgamma, JacobiRule};
use crate::{Error, Result};

/// Affine exponent `α(t) = alpha0 + slope·t` on `[0, horizon]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentSpec {
    pub alpha0: f64,
    pub slope: f64,
    pub horizon: f64,
}

impl ExponentSpec {
    /// Validates `0 < α(t) < 1` on `[0, horizon]`.
    pub fn new(alpha0: f64, slope: f64, horizon: f64) -> Result<Self> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(Error::Domain(format!("horizon must be positive, got {horizon}")));
        }
        if !slope.is_finite() {
            return Err(Error::Domain(format!("exponent slope must be finite, got {slope}")));
        }
        let end = alpha0 + slope * horizon;
        for (label, value) in [("α(0)", alpha0), ("α(T)", end)] {
            if !(value > 0.0 && value < 1.0) {
                return Err(Error::Domain(format!("{label} = {value} must lie in (0, 1)")));
            }
        }
        Ok(Self { alpha0, slope, horizon })
    }

    /// Constant exponent `α ≡ alpha0`.
    pub fn constant(alpha0: f64, horizon: f64) -> Result<Self> {
        Self::new(alpha0, 0.0, horizon)
    }

    pub fn alpha(&self, t: f64) -> f64 {
        self.alpha0 + self.slope * t
    }

    /// Kernel `k(t) = t^{α(t)−1} / Γ(α(t))` for t > 0.
    pub fn kernel(&self, t: f64) -> f64 {
        let a = self.alpha(t);
        t.powf(a - 1.0) * rgamma(a)
    }
}

/// Gauss–Jacobi rule matching [`g_eval`].
///
/// The substitution `z = y⁴` turns the weight `z^{α₀−1}(1−z)^{−α₀}` into
/// `4 y^{4α₀−1}(1−y)^{−α₀}` times a smooth factor and removes the `z ln z`
/// behaviour of the integrand at the origin, so the rule has exponents
/// `(4α₀ − 1, −α₀)`.
pub fn g_rule(alpha0: f64, node_count: usize) -> Result<JacobiRule> {
    jacobi_rule(node_count, 4.0 * alpha0 - 1.0, -alpha0)
}

/// Generalized identity function
/// `g(t) = ∫₀¹ (tz)^{α(tz)−α₀} / (Γ(1−α₀)Γ(α(tz))) (1−z)^{−α₀} z^{α₀−1} dz`.
///
/// `rule` must come from [`g_rule`] for the same `α₀`.
pub fn g_eval(spec: &ExponentSpec, t: f64, rule: &JacobiRule) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("g_eval needs t ≥ 0, got {t}")));
    }
    let a0 = spec.alpha0;
    if (rule.exp_left - (4.0 * a0 - 1.0)).abs() > 1e-14 || (rule.exp_right + a0).abs() > 1e-14 {
        return Err(Error::Precondition(format!(
            "g_eval rule exponents ({}, {}) do not match α₀ = {a0}",
            rule.exp_left, rule.exp_right
        )));
    }
    if t == 0.0 || spec.slope == 0.0 {
        return Ok(1.0);
    }
    let ln_gamma_1m = ln_gamma_positive(1.0 - a0);
    let h = |s: f64| {
        let power = if s > 0.0 { spec.slope * s * s.ln() } else { 0.0 };
        (power - ln_gamma_1m).exp() * rgamma(spec.alpha(s))
    };
    Ok(rule.integrate(|y| {
        let y2 = y * y;
        4.0 * ((1.0 + y) * (1.0 + y2)).powf(-a0) * h(t * y2 * y2)
    }))
}

/// L1 coefficients `b_0, …, b_{n−1}`.
pub fn l1_coefficients(alpha0: f64, n: usize, tau: f64) -> Result<Vec<f64>> {
    if !(alpha0 > 0.0 && alpha0 < 1.0) {
        return Err(Error::Domain(format!("α₀ must lie in (0, 1), got {alpha0}")));
    }
    if !(tau > 0.0) {
        return Err(Error::Domain(format!("time step must be positive, got {tau}")));
    }
    let e = 1.0 - alpha0;
    // b_j = τ^{−α₀}((j+1)^{1−α₀} − j^{1−α₀}) / Γ(2−α₀)
    let scale = tau.powf(-alpha0) * rgamma(2.0 - alpha0);
    Ok((0..n)
        .map(|j| {
            let jf = j as f64;
            scale * ((jf + 1.0).powf(e) - jf.powf(e))
        })
        .collect())
}

/// History weights `w_1, …, w_n` from `g` sampled at `t_0, …, t_n`.
pub fn history_weights(g_vals: &[f64]) -> Vec<f64> {
    g_vals.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Complementary discrete kernel `P_0, …, P_{len(b)−1}`.
pub fn p_kernel(b: &[f64]) -> Result<Vec<f64>> {
    if b.is_empty() {
        return Ok(Vec::new());
    }
    if b[0] <= 0.0 || b.windows(2).any(|w| !(w[1] > 0.0 && w[1] < w[0])) {
        return Err(Error::Precondition(
            "p_kernel needs positive, strictly decreasing coefficients".into(),
        ));
    }
    let inv_b0 = 1.0 / b[0];
    let mut p = Vec::with_capacity(b.len());
    p.push(inv_b0);
    for m in 1..b.len() {
        let acc: f64 = (1..=m).map(|i| (b[i - 1] - b[i]) * p[m - i]).sum();
        p.push(inv_b0 * acc);
    }
    Ok(p)
}

/// Precomputed sequences for one exponent on one uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelTables {
    pub spec: ExponentSpec,
    pub n: usize,
    pub tau: f64,
    /// `g(t_n)`, n = 0..=N.
    pub g_vals: Vec<f64>,
    /// `w_j`, j = 1..=N, stored at index j − 1.
    pub w: Vec<f64>,
    /// `b_j`, j = 0..N.
    pub b: Vec<f64>,
    /// `b̂_j = τ b_j`, j = 0..N.
    pub bhat: Vec<f64>,
    /// `P_j`, j = 0..N.
    pub p: Vec<f64>,
}

impl KernelTables {
    pub fn time(&self, n: usize) -> f64 {
        n as f64 * self.tau
    }

    /// `w_j` for 1 ≤ j ≤ N.
    pub fn weight(&self, j: usize) -> f64 {
        self.w[j - 1]
    }
}

/// Builds all tables for `n` uniform steps on `[0, spec.horizon]`.
pub fn build_tables(spec: &ExponentSpec, n: usize, rule: &JacobiRule) -> Result<KernelTables> {
    if n == 0 {
        return Err(Error::Domain("number of time steps must be at least 1".into()));
    }
    let tau = spec.horizon / n as f64;
    let g_vals = (0..=n)
        .map(|k| g_eval(spec, k as f64 * tau, rule))
        .collect::<Result<Vec<_>>>()?;
    let w = history_weights(&g_vals);
    let b = l1_coefficients(spec.alpha0, n, tau)?;
    let bhat = b.iter().map(|&v| tau * v).collect();
    let p = p_kernel(&b)?;
    Ok(KernelTables { spec: *spec, n, tau, g_vals, w, b, bhat, p })
}
