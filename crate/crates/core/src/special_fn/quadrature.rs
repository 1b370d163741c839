//! Gauss–Jacobi rules on (0, 1) and a small adaptive Gauss–Legendre integrator.
//!
//! A rule with exponents `(a, b)` integrates `∫₀¹ f(z) z^a (1 − z)^b dz`.
//! Nodes and weights come from the Golub–Welsch eigenproblem of the shifted
//! Jacobi recurrence.

use std::sync::OnceLock;

use nalgebra::DMatrix;

use super::gamma::ln_gamma_positive;
use crate::{Error, Result};

/// Default node count for tables built from the generalized identity function.
pub const DEFAULT_NODE_COUNT: usize = 64;

/// Gauss rule on (0, 1) for the weight `z^exp_left (1 − z)^exp_right`.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiRule {
    pub node_count: usize,
    pub exp_left: f64,
    pub exp_right: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl JacobiRule {
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&z, &w)| w * f(z))
            .sum()
    }

    /// Integral of `f` against `(x − a)^exp_left (b − x)^exp_right` over `[a, b]`.
    pub fn integrate_on<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let len = b - a;
        let scale = len.powf(1.0 + self.exp_left + self.exp_right);
        scale * self.integrate(|z| f(a + len * z))
    }
}

/// Beta function B(x, y) for x, y > 0.
pub fn beta_fn(x: f64, y: f64) -> f64 {
    (ln_gamma_positive(x) + ln_gamma_positive(y) - ln_gamma_positive(x + y)).exp()
}

/// Builds the `node_count`-point Gauss rule for `z^exp_left (1 − z)^exp_right` on (0, 1).
pub fn jacobi_rule(node_count: usize, exp_left: f64, exp_right: f64) -> Result<JacobiRule> {
    if node_count == 0 {
        return Err(Error::Domain("jacobi_rule needs at least one node".into()));
    }
    if !(exp_left > -1.0) || !(exp_right > -1.0) || !exp_left.is_finite() || !exp_right.is_finite() {
        return Err(Error::Domain(format!(
            "Jacobi exponents must be finite and > -1, got ({exp_left}, {exp_right})"
        )));
    }

    // Monic Jacobi recurrence on [-1, 1] for (1-x)^a (1+x)^b, then shifted to (0, 1).
    let a = exp_right;
    let b = exp_left;
    let ab = a + b;
    let n = node_count;

    let mut diag = vec![0.0; n];
    let mut offdiag_sq = vec![0.0; n.saturating_sub(1)];
    diag[0] = (b - a) / (ab + 2.0);
    for (k, d) in diag.iter_mut().enumerate().skip(1) {
        let kf = k as f64;
        *d = (b * b - a * a) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0));
    }
    for (idx, e) in offdiag_sq.iter_mut().enumerate() {
        let k = (idx + 1) as f64;
        *e = if idx == 0 {
            4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
        } else {
            let s = 2.0 * k + ab;
            4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0))
        };
    }

    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        jacobi[(i, i)] = 0.5 * (1.0 + diag[i]);
    }
    for (i, &e) in offdiag_sq.iter().enumerate() {
        let v = 0.5 * e.sqrt();
        jacobi[(i, i + 1)] = v;
        jacobi[(i + 1, i)] = v;
    }

    let mu0 = beta_fn(b + 1.0, a + 1.0);
    let eigen = jacobi.symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = eigen
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, &z)| {
            let v0 = eigen.eigenvectors[(0, i)];
            (z, mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|l, r| l.0.total_cmp(&r.0));

    let (nodes, weights) = pairs.into_iter().unzip();
    Ok(JacobiRule {
        node_count,
        exp_left,
        exp_right,
        nodes,
        weights,
    })
}

fn legendre_pair() -> &'static (JacobiRule, JacobiRule) {
    static PAIR: OnceLock<(JacobiRule, JacobiRule)> = OnceLock::new();
    PAIR.get_or_init(|| {
        (
            jacobi_rule(12, 0.0, 0.0).expect("valid Legendre rule"),
            jacobi_rule(24, 0.0, 0.0).expect("valid Legendre rule"),
        )
    })
}

const MAX_PANELS: usize = 20_000;

/// Adaptive bisection on `[a, b]` comparing 12- and 24-point Gauss–Legendre.
///
/// A panel is accepted when the two rules agree to `abs_tol` scaled by the
/// panel's share of `[a, b]`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64) -> Result<f64> {
    if b <= a {
        return Ok(0.0);
    }
    let (coarse, fine) = legendre_pair();
    let width = b - a;
    let mut stack = vec![(a, b)];
    let mut total = 0.0;
    let mut panels = 0;
    while let Some((lo, hi)) = stack.pop() {
        panels += 1;
        if panels > MAX_PANELS {
            return Err(Error::Evaluation(format!(
                "adaptive quadrature on [{a}, {b}] exceeded {MAX_PANELS} panels"
            )));
        }
        let i1 = coarse.integrate_on(lo, hi, f);
        let i2 = fine.integrate_on(lo, hi, f);
        let local_tol = abs_tol * (hi - lo) / width;
        let mid = 0.5 * (lo + hi);
        if (i1 - i2).abs() <= local_tol.max(64.0 * f64::EPSILON * i2.abs()) || mid <= lo || mid >= hi {
            total += i2;
        } else {
            stack.push((lo, mid));
            stack.push((mid, hi));
        }
    }
    Ok(total)
}
