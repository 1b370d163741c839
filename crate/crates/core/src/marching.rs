//! Fully discrete L1/Galerkin time stepping for the reformulated state
//! equation and for the time-reversed adjoint equation.
//!
//! Step `n` solves
//!
//! ```text
//! (b_0 M + K) U^n = M Σ_{k=1}^{n−1} (b_{n−k−1} − b_{n−k}) U^k − K Σ_{j=1}^{n} w_j U^{n−j} + (F^n, χ)
//! ```
//!
//! with `U⁰ = 0`. The left operator is factored once per solve.

use crate::fem1d::{FactoredTriDiag, FemOperators};
use crate::kernels::KernelTables;
use crate::{Error, Result};

/// Interior nodal values at time levels `0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub n: usize,
    pub m: usize,
    /// `values[n]` holds the `M − 1` interior values at `t_n`.
    pub values: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn zeros(n: usize, m: usize) -> Self {
        Self { n, m, values: vec![vec![0.0; m - 1]; n + 1] }
    }

    pub fn row(&self, level: usize) -> &[f64] {
        &self.values[level]
    }

    pub fn final_row(&self) -> &[f64] {
        &self.values[self.n]
    }

    /// Row `level` padded with the zero boundary values.
    pub fn full_row(&self, level: usize) -> Vec<f64> {
        let mut full = Vec::with_capacity(self.m + 1);
        full.push(0.0);
        full.extend_from_slice(&self.values[level]);
        full.push(0.0);
        full
    }
}

/// Source of the right-hand side `F^n`, given as interior nodal values.
///
/// A row `f` enters the scheme as `(I_h f, χ) = M f`, where the interpolant
/// `I_h f` lives in the finite element space and therefore vanishes on the boundary.
#[derive(Debug, Clone, PartialEq)]
pub enum ForcingPlan {
    /// `samples[j − 1] = s^j`; the scheme uses `F^n = Σ_{j=1}^{n} b̂_{n−j} s^j`.
    NodalHistory(Vec<Vec<f64>>),
    /// `values[n − 1] = F^n`, used verbatim.
    DirectF(Vec<Vec<f64>>),
}

impl ForcingPlan {
    fn rows(&self) -> &[Vec<f64>] {
        match self {
            ForcingPlan::NodalHistory(rows) | ForcingPlan::DirectF(rows) => rows,
        }
    }
}

/// `Σ_{j=1}^{n} b̂_{n−j} φ^j` with `samples[j − 1] = φ^j`.
pub fn discrete_frac_integral(bhat: &[f64], samples: &[Vec<f64>], n: usize) -> Result<Vec<f64>> {
    if n > samples.len() || n > bhat.len() {
        return Err(Error::Dimension(format!(
            "step {n} exceeds the {} samples / {} weights available",
            samples.len(),
            bhat.len()
        )));
    }
    let width = samples.first().map_or(0, Vec::len);
    let mut acc = vec![0.0; width];
    for j in 1..=n {
        axpy(bhat[n - j], &samples[j - 1], &mut acc);
    }
    Ok(acc)
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

fn check_dims(tables: &KernelTables, fem: &FemOperators, plan: &ForcingPlan) -> Result<()> {
    let rows = plan.rows();
    if rows.len() != tables.n {
        return Err(Error::Dimension(format!(
            "forcing has {} time levels, tables have N = {}",
            rows.len(),
            tables.n
        )));
    }
    let width = fem.mesh.interior_len();
    if let Some(bad) = rows.iter().find(|r| r.len() != width) {
        return Err(Error::Dimension(format!(
            "forcing rows must have {width} nodal values, found {}",
            bad.len()
        )));
    }
    Ok(())
}

/// Shared marching core. `refactor_each_step` re-solves from scratch every
/// step and exists only to cross-check the factored path.
fn march(tables: &KernelTables, fem: &FemOperators, plan: &ForcingPlan, refactor_each_step: bool) -> Result<Trajectory> {
    check_dims(tables, fem, plan)?;
    let n_steps = tables.n;
    let width = fem.mesh.interior_len();
    let b = &tables.b;
    let lhs = fem.mass.combine(b[0], &fem.stiffness, 1.0)?;
    let factor = FactoredTriDiag::new(&lhs)?;

    // loads of the nodal rows; F^n is linear in them
    let loads: Vec<Vec<f64>> = plan.rows().iter().map(|row| fem.mass.matvec(row)).collect();

    let mut traj = Trajectory::zeros(n_steps, fem.mesh.m);
    let mut l1_hist = vec![0.0; width];
    let mut mem_hist = vec![0.0; width];
    let mut tmp = vec![0.0; width];
    for n in 1..=n_steps {
        l1_hist.fill(0.0);
        for k in 1..n {
            axpy(b[n - k - 1] - b[n - k], &traj.values[k], &mut l1_hist);
        }
        mem_hist.fill(0.0);
        for j in 1..=n {
            axpy(tables.w[j - 1], &traj.values[n - j], &mut mem_hist);
        }

        let mut rhs = match plan {
            ForcingPlan::NodalHistory(_) => discrete_frac_integral(&tables.bhat, &loads, n)?,
            ForcingPlan::DirectF(_) => loads[n - 1].clone(),
        };
        fem.mass.matvec_into(&l1_hist, &mut tmp);
        axpy(1.0, &tmp, &mut rhs);
        fem.stiffness.matvec_into(&mem_hist, &mut tmp);
        axpy(-1.0, &tmp, &mut rhs);

        if refactor_each_step {
            rhs = crate::fem1d::tridiag_solve(&lhs, &rhs)?;
        } else {
            factor.solve_in_place(&mut rhs)?;
        }
        traj.values[n] = rhs;
    }
    Ok(traj)
}

/// Marches the state from `U⁰ = 0`.
pub fn solve_state(tables: &KernelTables, fem: &FemOperators, plan: &ForcingPlan) -> Result<Trajectory> {
    march(tables, fem, plan, false)
}

/// Solves the adjoint backwards in time.
///
/// `ud_samples[n]` holds `u_d(·, t_n)` at the interior nodes for `n = 0..N−1`
/// (the value at `t_N` is never used). The reversed variable `Z̄` is forced by
/// `s^j = U^{N−j} − u_d(t_{N−j})` and the result is returned in forward time,
/// so row `N` is zero.
pub fn solve_adjoint(
    tables: &KernelTables,
    fem: &FemOperators,
    state: &Trajectory,
    ud_samples: &[Vec<f64>],
) -> Result<Trajectory> {
    let n_steps = tables.n;
    if state.n != n_steps || state.m != fem.mesh.m {
        return Err(Error::Dimension(format!(
            "state is (N, M) = ({}, {}), expected ({n_steps}, {})",
            state.n, state.m, fem.mesh.m
        )));
    }
    if ud_samples.len() < n_steps {
        return Err(Error::Dimension(format!(
            "u_d needs samples at t_0..t_{{N−1}} ({n_steps} rows), got {}",
            ud_samples.len()
        )));
    }
    let sources = (1..=n_steps)
        .map(|j| {
            let level = n_steps - j;
            let ud = &ud_samples[level];
            if ud.len() != fem.mesh.interior_len() {
                return Err(Error::Dimension(format!(
                    "u_d rows must have {} nodal values, found {}",
                    fem.mesh.interior_len(),
                    ud.len()
                )));
            }
            Ok(state.row(level).iter().zip(ud).map(|(u, d)| u - d).collect())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    let reversed = march(tables, fem, &ForcingPlan::NodalHistory(sources), false)?;
    Ok(reverse_in_time(reversed))
}

fn reverse_in_time(mut traj: Trajectory) -> Trajectory {
    traj.values.reverse();
    traj
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem1d::interpolate;
    use crate::kernels::{build_tables, g_rule, ExponentSpec};
    use crate::special_fn::{gamma_fn, DEFAULT_NODE_COUNT};
    use std::f64::consts::PI;

    fn setup(n: usize, m: usize) -> (KernelTables, FemOperators) {
        let spec = ExponentSpec::new(0.4, -1.0 / 6.0, 0.5).unwrap();
        let tables = build_tables(&spec, n, &g_rule(0.4, DEFAULT_NODE_COUNT).unwrap()).unwrap();
        (tables, FemOperators::new(m).unwrap())
    }

    fn sine_history(n: usize, fem: &FemOperators) -> ForcingPlan {
        let row = interpolate(|x: f64| (PI * x).sin(), &fem.mesh);
        ForcingPlan::NodalHistory((1..=n).map(|j| row.iter().map(|v| v * (1.0 + j as f64)).collect()).collect())
    }

    #[test]
    fn zero_forcing_gives_zero_trajectory() {
        let (tables, fem) = setup(8, 6);
        let plan = ForcingPlan::NodalHistory(vec![vec![0.0; 5]; 8]);
        let traj = solve_state(&tables, &fem, &plan).unwrap();
        assert!(traj.values.iter().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn factored_equals_resolved() {
        let (tables, fem) = setup(20, 9);
        let plan = sine_history(20, &fem);
        let fast = march(&tables, &fem, &plan, false).unwrap();
        let slow = march(&tables, &fem, &plan, true).unwrap();
        for (a, b) in fast.values.iter().flatten().zip(slow.values.iter().flatten()) {
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }

    #[test]
    fn adjoint_shares_the_forward_core() {
        let (tables, fem) = setup(12, 8);
        let state = solve_state(&tables, &fem, &sine_history(12, &fem)).unwrap();
        let ud: Vec<Vec<f64>> = (0..12)
            .map(|n| interpolate(|x| x * (1.0 - x) * n as f64, &fem.mesh))
            .collect();
        let z = solve_adjoint(&tables, &fem, &state, &ud).unwrap();
        assert!(z.final_row().iter().all(|&v| v == 0.0));

        let sources = (1..=12)
            .map(|j| state.row(12 - j).iter().zip(&ud[12 - j]).map(|(u, d)| u - d).collect())
            .collect();
        let forward = solve_state(&tables, &fem, &ForcingPlan::NodalHistory(sources)).unwrap();
        for n in 0..=12 {
            assert_eq!(forward.row(n), z.row(12 - n));
        }
    }

    #[test]
    fn adjoint_vanishes_when_state_matches_target() {
        let (tables, fem) = setup(10, 8);
        let state = solve_state(&tables, &fem, &sine_history(10, &fem)).unwrap();
        let ud: Vec<Vec<f64>> = (0..10).map(|n| state.row(n).to_vec()).collect();
        let z = solve_adjoint(&tables, &fem, &state, &ud).unwrap();
        assert!(z.values.iter().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn dimension_errors() {
        let (tables, fem) = setup(4, 4);
        assert!(matches!(
            solve_state(&tables, &fem, &ForcingPlan::DirectF(vec![vec![0.0; 3]; 3])),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            solve_state(&tables, &fem, &ForcingPlan::DirectF(vec![vec![0.0; 4]; 4])),
            Err(Error::Dimension(_))
        ));
        let state = Trajectory::zeros(4, 4);
        assert!(matches!(solve_adjoint(&tables, &fem, &state, &[]), Err(Error::Dimension(_))));
    }

    #[test]
    fn frac_integral_of_constants_and_linear() {
        let (tables, _) = setup(16, 4);
        let ones = vec![vec![1.0]; 16];
        assert_eq!(discrete_frac_integral(&tables.bhat, &vec![vec![0.0]; 16], 16).unwrap(), vec![0.0]);
        let total = discrete_frac_integral(&tables.bhat, &ones, 16).unwrap()[0];
        let exact = 0.5f64.powf(0.6) / gamma_fn(1.6).unwrap();
        assert!((total - exact).abs() < 1e-13);

        let spec = ExponentSpec::constant(0.5, 1.0).unwrap();
        let mut prev = f64::INFINITY;
        for &n in &[64usize, 128, 256] {
            let t = build_tables(&spec, n, &g_rule(0.5, 8).unwrap()).unwrap();
            let phi: Vec<Vec<f64>> = (1..=n).map(|j| vec![t.time(j)]).collect();
            let approx = discrete_frac_integral(&t.bhat, &phi, n).unwrap()[0];
            let err = (approx - 1.0 / gamma_fn(2.5).unwrap()).abs();
            assert!(err <= 2e-2 && err < prev);
            prev = err;
        }
    }
}
