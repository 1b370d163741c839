//! Manufactured optimality system with `u = t^{0.8} φ(x)` and
//! `z = 2(1 − t)^{0.8} φ(x)` on `(0, 1) × (0, 1)`.
//!
//! With `J(s) = ∫₀ˢ k(r)(s − r)^{−0.2} dr` the memory terms differentiate in
//! closed form, `∂ₜ(k ∗ r^{0.8}) = 0.8 J`, so
//!
//! ```text
//! q   = 0.8 t^{−0.2} φ − 0.8 J(t) Δφ − c,
//! u_d = u − 1.6 (1 − t)^{−0.2} φ + 1.6 J(1 − t) Δφ,
//! c   = 2(1 − t)^{0.8} (∫φ − φ) / κ.
//! ```
//!
//! `J` is evaluated by its own Gauss–Jacobi rule, independent of the kernel tables.

use std::f64::consts::PI;

use crate::fem1d::{interpolate, Mesh1D};
use crate::kernels::ExponentSpec;
use crate::special_fn::{jacobi_rule, rgamma, JacobiRule};
use crate::{Error, Result};

const TIME_POWER: f64 = 0.8;
/// Agreement required between the `n`- and `2n`-node evaluations of `J`.
pub const ORACLE_TOL: f64 = 1e-7;

/// Spatial profile of the manufactured fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    /// `φ = sin πx`.
    Sine,
    /// `φ = x²(1 − x)²`.
    Polynomial,
}

impl Profile {
    pub fn phi(self, x: f64) -> f64 {
        match self {
            Profile::Sine => (PI * x).sin(),
            Profile::Polynomial => x * x * (1.0 - x) * (1.0 - x),
        }
    }

    pub fn laplacian(self, x: f64) -> f64 {
        match self {
            Profile::Sine => -PI * PI * (PI * x).sin(),
            Profile::Polynomial => 2.0 - 12.0 * x + 12.0 * x * x,
        }
    }

    /// `∫₀¹ φ dx`.
    pub fn integral(self) -> f64 {
        match self {
            Profile::Sine => 2.0 / PI,
            Profile::Polynomial => 1.0 / 30.0,
        }
    }
}

/// Memory integral `J(s) = ∫₀ˢ k(r)(s − r)^{−0.2} dr` on a fixed rule.
#[derive(Debug, Clone)]
pub struct MemoryIntegral {
    spec: ExponentSpec,
    rule: JacobiRule,
}

impl MemoryIntegral {
    /// With `r = s v⁴` the weight becomes `v^{4α₀−1}(1 − v)^{−0.2}` times a smooth factor.
    pub fn new(spec: ExponentSpec, node_count: usize) -> Result<Self> {
        let rule = jacobi_rule(node_count, 4.0 * spec.alpha0 - 1.0, TIME_POWER - 1.0)?;
        Ok(Self { spec, rule })
    }

    pub fn eval(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        let a0 = self.spec.alpha0;
        let slope = self.spec.slope;
        let scale = s.powf(a0 + TIME_POWER - 1.0);
        scale
            * self.rule.integrate(|v| {
                let v2 = v * v;
                let r = s * v2 * v2;
                let power = if r > 0.0 { (slope * r * r.ln()).exp() } else { 1.0 };
                4.0 * ((1.0 + v) * (1.0 + v2)).powf(TIME_POWER - 1.0) * power * rgamma(self.spec.alpha(r))
            })
    }
}

/// Forcing, target and exact fields of one manufactured case on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ManufacturedData {
    /// `q(·, t_j)` at interior nodes, `j = 1..N`.
    pub q_samples: Vec<Vec<f64>>,
    /// `u_d(·, t_n)` at interior nodes, `n = 0..N−1` (singular at `t = T`).
    pub ud_samples: Vec<Vec<f64>>,
    /// Exact control at all nodes, `n = 0..N−1`.
    pub c_exact: Vec<Vec<f64>>,
    /// `u(·, T)` at interior nodes.
    pub u_final: Vec<f64>,
    /// `z(·, 0)` at interior nodes.
    pub z_initial: Vec<f64>,
}

/// Builds the manufactured data. `J` is evaluated with `quad_nodes` and
/// `2·quad_nodes` points; disagreement above [`ORACLE_TOL`] is an oracle error.
pub fn manufactured_forcing(
    profile: Profile,
    spec: &ExponentSpec,
    kappa: f64,
    n: usize,
    m: usize,
    quad_nodes: usize,
) -> Result<ManufacturedData> {
    if (spec.horizon - 1.0).abs() > 1e-15 {
        return Err(Error::Precondition(format!("manufactured fields need T = 1, got {}", spec.horizon)));
    }
    if !(kappa > 0.0) || n == 0 {
        return Err(Error::Domain("manufactured forcing needs κ > 0 and N ≥ 1".into()));
    }
    let mesh = Mesh1D::new(m)?;
    let coarse = MemoryIntegral::new(*spec, quad_nodes)?;
    let fine = MemoryIntegral::new(*spec, 2 * quad_nodes)?;
    let memory = |s: f64| -> Result<f64> {
        let (a, b) = (coarse.eval(s), fine.eval(s));
        if (a - b).abs() > ORACLE_TOL * b.abs().max(1.0) {
            return Err(Error::Oracle(format!("J({s}) changes from {a} to {b} under node doubling")));
        }
        Ok(b)
    };

    let tau = 1.0 / n as f64;
    let phi = interpolate(|x| profile.phi(x), &mesh);
    let lap = interpolate(|x| profile.laplacian(x), &mesh);
    let mean = profile.integral();
    let control = |t: f64, x_phi: f64| 2.0 * (1.0 - t).powf(TIME_POWER) * (mean - x_phi) / kappa;

    let mut q_samples = Vec::with_capacity(n);
    for j in 1..=n {
        let t = j as f64 * tau;
        let jt = memory(t)?;
        let dt = TIME_POWER * t.powf(TIME_POWER - 1.0);
        q_samples.push(
            phi.iter()
                .zip(&lap)
                .map(|(&p, &l)| dt * p - TIME_POWER * jt * l - control(t, p))
                .collect(),
        );
    }

    let mut ud_samples = Vec::with_capacity(n);
    for level in 0..n {
        let t = level as f64 * tau;
        let back = 1.0 - t;
        let jb = memory(back)?;
        let u_t = t.powf(TIME_POWER);
        let dz = 2.0 * TIME_POWER * back.powf(TIME_POWER - 1.0);
        ud_samples.push(
            phi.iter()
                .zip(&lap)
                .map(|(&p, &l)| u_t * p - dz * p + 2.0 * TIME_POWER * jb * l)
                .collect(),
        );
    }

    let all: Vec<f64> = mesh.all_nodes().into_iter().map(|x| profile.phi(x)).collect();
    let c_exact = (0..n)
        .map(|level| {
            let t = level as f64 * tau;
            all.iter().map(|&p| control(t, p)).collect()
        })
        .collect();

    Ok(ManufacturedData {
        q_samples,
        ud_samples,
        c_exact,
        u_final: phi.clone(),
        z_initial: phi.iter().map(|p| 2.0 * p).collect(),
    })
}
