//! Discrete optimality system: projection onto the admissible set
//! `{c : ∫_Ω c dx ≥ 0}`, the projected fixed-point iteration
//! state → adjoint → control, and the objective
//! `J = ½‖u − u_d‖² + (κ/2)‖c‖²` over `(0, T) × Ω`.
//!
//! Controls are stored at all `M + 1` nodes because the projection does not
//! vanish on the boundary; only the interior values enter the state forcing.

use crate::fem1d::{l2_norm_discrete, FemOperators};
use crate::kernels::{build_tables, g_rule, ExponentSpec, KernelTables};
use crate::marching::{solve_adjoint, solve_state, ForcingPlan, Trajectory};
use crate::special_fn::DEFAULT_NODE_COUNT;
use crate::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_ITERS: usize = 500;

/// Trapezoidal mean of the piecewise-linear function with interior values
/// `z` and zero boundary values.
pub fn mean_with_zero_boundary(z: &[f64], h: f64) -> f64 {
    h * z.iter().sum::<f64>()
}

/// Trapezoidal integral over (0, 1) of nodal values `c_0, …, c_M`.
pub fn trapezoid_full(c: &[f64], h: f64) -> f64 {
    match c.len() {
        0 | 1 => 0.0,
        len => h * (0.5 * (c[0] + c[len - 1]) + c[1..len - 1].iter().sum::<f64>()),
    }
}

/// `C = (max{0, mean z} − z) / κ` at all `M + 1` nodes, `z` given at the
/// interior nodes (zero on the boundary).
pub fn project_control(z_row: &[f64], kappa: f64, h: f64) -> Result<Vec<f64>> {
    if !(kappa > 0.0) {
        return Err(Error::Domain(format!("κ must be positive, got {kappa}")));
    }
    let clamped = mean_with_zero_boundary(z_row, h).max(0.0);
    let mut c = Vec::with_capacity(z_row.len() + 2);
    c.push(clamped / kappa);
    c.extend(z_row.iter().map(|z| (clamped - z) / kappa));
    c.push(clamped / kappa);
    Ok(c)
}

/// Inputs of the discrete optimality system.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlProblem {
    pub spec: ExponentSpec,
    pub n: usize,
    pub m: usize,
    pub kappa: f64,
    /// `q(·, t_j)` at the interior nodes, `j = 1..N` (row `j − 1`).
    pub q_samples: Vec<Vec<f64>>,
    /// `u_d(·, t_n)` at the interior nodes, `n = 0..N−1`, optionally followed
    /// by `n = N`. The adjoint only reads the first `N` rows; the objective
    /// needs all `N + 1`.
    pub ud_samples: Vec<Vec<f64>>,
    pub tol: f64,
    pub max_iters: usize,
    pub quad_nodes: usize,
}

impl ControlProblem {
    /// Problem with the default tolerance, iteration budget and quadrature size.
    pub fn new(
        spec: ExponentSpec,
        n: usize,
        m: usize,
        kappa: f64,
        q_samples: Vec<Vec<f64>>,
        ud_samples: Vec<Vec<f64>>,
    ) -> Self {
        Self {
            spec,
            n,
            m,
            kappa,
            q_samples,
            ud_samples,
            tol: DEFAULT_TOL,
            max_iters: DEFAULT_MAX_ITERS,
            quad_nodes: DEFAULT_NODE_COUNT,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.kappa > 0.0) {
            return Err(Error::Domain(format!("κ must be positive, got {}", self.kappa)));
        }
        if !(self.tol > 0.0) || self.max_iters == 0 {
            return Err(Error::Domain("tol must be positive and max_iters at least 1".into()));
        }
        let width = self.m.saturating_sub(1);
        let shape_ok = |rows: &[Vec<f64>], count: usize| rows.len() == count && rows.iter().all(|r| r.len() == width);
        if !shape_ok(&self.q_samples, self.n) {
            return Err(Error::Dimension(format!("q needs {} rows of {width} values", self.n)));
        }
        if !(shape_ok(&self.ud_samples, self.n) || shape_ok(&self.ud_samples, self.n + 1)) {
            return Err(Error::Dimension(format!(
                "u_d needs {} or {} rows of {width} values",
                self.n,
                self.n + 1
            )));
        }
        Ok(())
    }
}

/// One fixed-point iterate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    /// `max_{n,j} |C_new − C_old|`.
    pub residual: f64,
    /// Objective of the state computed in this iterate with the control that
    /// produced it; absent when `u_d` is not given at `t_N`.
    pub objective: Option<f64>,
}

/// Converged discrete optimality system.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalityResult {
    pub u: Trajectory,
    pub z: Trajectory,
    /// `C^n` at all `M + 1` nodes, `n = 0..N−1`.
    pub c: Vec<Vec<f64>>,
    pub iterations: usize,
    pub residual: f64,
    pub objective: Option<f64>,
    pub history: Vec<IterationRecord>,
}

/// `J ≈ ∫₀ᵀ ½‖U − u_d‖² + (κ/2)‖C‖² dt` with the composite trapezoid rule in time.
///
/// `c` holds levels `0..N−1`; the control at `t_N` is the projection of
/// `Z^N = 0`, which is zero.
pub fn objective_eval(u: &Trajectory, ud_samples: &[Vec<f64>], c: &[Vec<f64>], kappa: f64, h: f64, tau: f64) -> Result<f64> {
    let n = u.n;
    if ud_samples.len() != n + 1 || c.len() != n {
        return Err(Error::Dimension(format!(
            "objective needs {} target rows and {n} control rows, got {} and {}",
            n + 1,
            ud_samples.len(),
            c.len()
        )));
    }
    let density = |level: usize| -> f64 {
        let diff: Vec<f64> = u.row(level).iter().zip(&ud_samples[level]).map(|(a, b)| a - b).collect();
        let tracking = 0.5 * l2_norm_discrete(&diff, h).powi(2);
        let cost = if level < n {
            let sq: Vec<f64> = c[level].iter().map(|v| v * v).collect();
            0.5 * kappa * trapezoid_full(&sq, h)
        } else {
            0.0
        };
        tracking + cost
    };
    let inner: f64 = (1..n).map(density).sum();
    Ok(tau * (0.5 * density(0) + inner + 0.5 * density(n)))
}

/// Precomputed operators for repeated solves of one problem.
struct Workspace {
    tables: KernelTables,
    fem: FemOperators,
}

/// Projected fixed-point iteration starting from `C ≡ 0`.
///
/// Each iterate marches the state with `s^j = q^j + C^{j−1}`, the adjoint
/// against `u_d`, and projects `Z^n` into `C^n` for `n = 0..N−1`. Stops when
/// the space-time sup-norm update falls below `tol`.
pub fn fixed_point_optimize(problem: &ControlProblem) -> Result<OptimalityResult> {
    problem.validate()?;
    let rule = g_rule(problem.spec.alpha0, problem.quad_nodes)?;
    let ws = Workspace {
        tables: build_tables(&problem.spec, problem.n, &rule)?,
        fem: FemOperators::new(problem.m)?,
    };
    let h = ws.fem.mesh.h;
    let n = problem.n;

    let mut c_old = vec![vec![0.0; problem.m + 1]; n];
    let mut history = Vec::new();
    for iteration in 1..=problem.max_iters {
        let sources = (1..=n)
            .map(|j| {
                let interior = &c_old[j - 1][1..problem.m];
                problem.q_samples[j - 1].iter().zip(interior).map(|(q, c)| q + c).collect()
            })
            .collect();
        let u = solve_state(&ws.tables, &ws.fem, &ForcingPlan::NodalHistory(sources))?;
        let z = solve_adjoint(&ws.tables, &ws.fem, &u, &problem.ud_samples)?;
        let c_new = (0..n)
            .map(|level| project_control(z.row(level), problem.kappa, h))
            .collect::<Result<Vec<_>>>()?;

        let residual = c_new
            .iter()
            .flatten()
            .zip(c_old.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let objective = if problem.ud_samples.len() == n + 1 {
            Some(objective_eval(&u, &problem.ud_samples, &c_old, problem.kappa, h, ws.tables.tau)?)
        } else {
            None
        };
        history.push(IterationRecord { iteration, residual, objective });
        c_old = c_new;
        if residual < problem.tol {
            return Ok(OptimalityResult { u, z, c: c_old, iterations: iteration, residual, objective, history });
        }
    }
    let residual = history.last().map_or(f64::INFINITY, |r| r.residual);
    Err(Error::NonConvergence { iterations: problem.max_iters, residual })
}
