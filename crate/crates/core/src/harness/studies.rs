//! Mesh-ladder studies. Distinct solves run in parallel; results are
//! collected in ladder order so reports are deterministic.

use rayon::prelude::*;

use super::config::StudyConfig;
use super::convergence::{two_mesh_spatial_error, two_mesh_temporal_error, ConvergenceReport, Direction, Variable};
use super::manufactured::{manufactured_forcing, ManufacturedData, Profile};
use crate::control::{fixed_point_optimize, trapezoid_full, ControlProblem, OptimalityResult};
use crate::fem1d::{interpolate, l2_norm_discrete, FemOperators, Mesh1D};
use crate::kernels::{build_tables, g_rule, ExponentSpec};
use crate::marching::{solve_state, ForcingPlan, Trajectory};
use crate::special_fn::{mittag_leffler, MLParams};
use crate::{Error, Result};

fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> Result<R> + Sync + Send) -> Result<Vec<R>> {
    items.par_iter().map(f).collect()
}

/// Ladder followed by its doubled last entry.
fn extended(ladder: &[usize]) -> Vec<usize> {
    let mut levels = ladder.to_vec();
    if let Some(&last) = ladder.last() {
        levels.push(2 * last);
    }
    levels
}

/// State driven by a time-independent source `f(x)`.
pub fn solve_state_constant_source(
    spec: &ExponentSpec,
    n: usize,
    m: usize,
    quad_nodes: usize,
    source: impl Fn(f64) -> f64,
) -> Result<Trajectory> {
    let tables = build_tables(spec, n, &g_rule(spec.alpha0, quad_nodes)?)?;
    let fem = FemOperators::new(m)?;
    let row = interpolate(source, &fem.mesh);
    solve_state(&tables, &fem, &ForcingPlan::NodalHistory(vec![row; n]))
}

/// Temporal and spatial two-mesh reports for the uncontrolled state with `q = 1`.
pub fn state_two_mesh_study(cfg: &StudyConfig, alpha0: f64) -> Result<(ConvergenceReport, ConvergenceReport)> {
    let spec = cfg.spec(alpha0)?;
    let n_levels = extended(&cfg.n_list);
    let m_levels = extended(&cfg.m_list);
    let temporal = par_map(&n_levels, |&n| solve_state_constant_source(&spec, n, cfg.temporal_m, cfg.quad_nodes, |_| 1.0))?;
    let spatial = par_map(&m_levels, |&m| solve_state_constant_source(&spec, cfg.spatial_n, m, cfg.quad_nodes, |_| 1.0))?;

    let h = 1.0 / cfg.temporal_m as f64;
    let e_t = temporal
        .windows(2)
        .map(|w| two_mesh_temporal_error(&w[0].values, &w[1].values, h))
        .collect::<Result<Vec<_>>>()?;
    let e_s = spatial
        .windows(2)
        .map(|w| two_mesh_spatial_error(&w[0].values, &w[1].values, 1.0 / w[0].m as f64))
        .collect::<Result<Vec<_>>>()?;
    Ok((
        ConvergenceReport::from_errors(alpha0, Variable::U, Direction::Temporal, &cfg.n_list, &e_t)?,
        ConvergenceReport::from_errors(alpha0, Variable::U, Direction::Spatial, &cfg.m_list, &e_s)?,
    ))
}

/// Desired state `1 − 4(x − ½)²` with source `q = 1`.
pub fn example2_problem(cfg: &StudyConfig, alpha0: f64, n: usize, m: usize) -> Result<ControlProblem> {
    let mesh = Mesh1D::new(m)?;
    let ud = interpolate(|x| 1.0 - 4.0 * (x - 0.5) * (x - 0.5), &mesh);
    let mut problem = ControlProblem::new(cfg.spec(alpha0)?, n, m, cfg.kappa, vec![vec![1.0; m - 1]; n], vec![ud; n + 1]);
    problem.tol = cfg.tol;
    problem.max_iters = cfg.max_iters;
    problem.quad_nodes = cfg.quad_nodes;
    Ok(problem)
}

/// Interior control values, the part that is compared between meshes.
fn interior_controls(result: &OptimalityResult) -> Vec<Vec<f64>> {
    result.c.iter().map(|row| row[1..row.len() - 1].to_vec()).collect()
}

/// Fixed-point statistics of one ladder solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveStats {
    pub direction: Direction,
    pub n: usize,
    pub m: usize,
    pub iterations: usize,
    pub residual: f64,
}

/// Six two-mesh reports (U, Z, C in both directions) for the control problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlStudy {
    pub reports: Vec<ConvergenceReport>,
    pub stats: Vec<SolveStats>,
}

impl ControlStudy {
    pub fn report(&self, variable: Variable, direction: Direction) -> Option<&ConvergenceReport> {
        self.reports.iter().find(|r| r.variable == variable && r.direction == direction)
    }
}

pub fn control_two_mesh_study(cfg: &StudyConfig, alpha0: f64) -> Result<ControlStudy> {
    let n_levels = extended(&cfg.n_list);
    let m_levels = extended(&cfg.m_list);
    let temporal = par_map(&n_levels, |&n| fixed_point_optimize(&example2_problem(cfg, alpha0, n, cfg.temporal_m)?))?;
    let spatial = par_map(&m_levels, |&m| fixed_point_optimize(&example2_problem(cfg, alpha0, cfg.spatial_n, m)?))?;

    let mut reports = Vec::new();
    let h = 1.0 / cfg.temporal_m as f64;
    for variable in [Variable::U, Variable::Z, Variable::C] {
        let fields: Vec<Vec<Vec<f64>>> = temporal.iter().map(|r| field(r, variable)).collect();
        let errors = fields
            .windows(2)
            .map(|w| two_mesh_temporal_error(&w[0], &w[1], h))
            .collect::<Result<Vec<_>>>()?;
        reports.push(ConvergenceReport::from_errors(alpha0, variable, Direction::Temporal, &cfg.n_list, &errors)?);
    }
    for variable in [Variable::U, Variable::Z, Variable::C] {
        let fields: Vec<Vec<Vec<f64>>> = spatial.iter().map(|r| field(r, variable)).collect();
        let errors = fields
            .windows(2)
            .zip(&m_levels)
            .map(|(w, &m)| two_mesh_spatial_error(&w[0], &w[1], 1.0 / m as f64))
            .collect::<Result<Vec<_>>>()?;
        reports.push(ConvergenceReport::from_errors(alpha0, variable, Direction::Spatial, &cfg.m_list, &errors)?);
    }

    let stats = n_levels
        .iter()
        .zip(&temporal)
        .map(|(&n, r)| (Direction::Temporal, n, cfg.temporal_m, r))
        .chain(m_levels.iter().zip(&spatial).map(|(&m, r)| (Direction::Spatial, cfg.spatial_n, m, r)))
        .map(|(direction, n, m, r)| SolveStats { direction, n, m, iterations: r.iterations, residual: r.residual })
        .collect();
    Ok(ControlStudy { reports, stats })
}

fn field(result: &OptimalityResult, variable: Variable) -> Vec<Vec<f64>> {
    match variable {
        Variable::U => result.u.values.clone(),
        Variable::Z => result.z.values.clone(),
        Variable::C => interior_controls(result),
    }
}

/// `t E_{α₀,2}(−π² t^{α₀}) sin πx`, the solution for `q = sin πx` and constant exponent.
pub fn mittag_leffler_solution(alpha0: f64, t: f64, x: f64) -> Result<f64> {
    if t == 0.0 {
        return Ok(0.0);
    }
    let z = -std::f64::consts::PI.powi(2) * t.powf(alpha0);
    Ok(t * mittag_leffler(MLParams::new(alpha0, 2.0, z))? * (std::f64::consts::PI * x).sin())
}

/// `max_{1≤n≤N} ‖U^n − u(t_n)‖` against the Mittag-Leffler solution.
pub fn mittag_leffler_error(alpha0: f64, horizon: f64, n: usize, m: usize, quad_nodes: usize) -> Result<f64> {
    let spec = ExponentSpec::constant(alpha0, horizon)?;
    let sine = |x: f64| (std::f64::consts::PI * x).sin();
    let traj = solve_state_constant_source(&spec, n, m, quad_nodes, sine)?;
    let mesh = Mesh1D::new(m)?;
    let x = mesh.interior_nodes();
    let mut worst: f64 = 0.0;
    for level in 1..=n {
        let t = horizon * level as f64 / n as f64;
        let amp = mittag_leffler_solution(alpha0, t, 0.5)?;
        let diff: Vec<f64> = traj.row(level).iter().zip(&x).map(|(u, &xi)| u - amp * sine(xi)).collect();
        worst = worst.max(l2_norm_discrete(&diff, mesh.h));
    }
    Ok(worst)
}

/// Errors against the Mittag-Leffler solution along an `N` ladder (fixed `m`)
/// or an `M` ladder (fixed `n`).
pub fn mittag_leffler_study(
    alpha0: f64,
    horizon: f64,
    direction: Direction,
    ladder: &[usize],
    fixed: usize,
    quad_nodes: usize,
) -> Result<ConvergenceReport> {
    let errors = par_map(ladder, |&p| match direction {
        Direction::Temporal => mittag_leffler_error(alpha0, horizon, p, fixed, quad_nodes),
        Direction::Spatial => mittag_leffler_error(alpha0, horizon, fixed, p, quad_nodes),
    })?;
    ConvergenceReport::from_errors(alpha0, Variable::U, direction, ladder, &errors)
}

/// Converged manufactured case with its relative errors.
#[derive(Debug, Clone)]
pub struct ManufacturedOutcome {
    pub profile: Profile,
    pub data: ManufacturedData,
    pub result: OptimalityResult,
    pub mesh: Mesh1D,
    /// `‖U^N − u(T)‖ / ‖u(T)‖`.
    pub rel_u: f64,
    /// `‖Z⁰ − z(0)‖ / ‖z(0)‖`.
    pub rel_z: f64,
    /// Space-time relative error of `C` over levels `0..N−1`.
    pub rel_c: f64,
}

fn relative(numeric: &[f64], exact: &[f64], h: f64) -> f64 {
    let diff: Vec<f64> = numeric.iter().zip(exact).map(|(a, b)| a - b).collect();
    l2_norm_discrete(&diff, h) / l2_norm_discrete(exact, h)
}

pub fn manufactured_case(cfg: &StudyConfig, profile: Profile) -> Result<ManufacturedOutcome> {
    let alpha0 = cfg.alpha0[0];
    let spec = cfg.spec(alpha0)?;
    let (n, m) = (cfg.n_list[0], cfg.m_list[0]);
    let data = manufactured_forcing(profile, &spec, cfg.kappa, n, m, cfg.quad_nodes)?;
    let mut problem = ControlProblem::new(spec, n, m, cfg.kappa, data.q_samples.clone(), data.ud_samples.clone());
    problem.tol = cfg.tol;
    problem.max_iters = cfg.max_iters;
    problem.quad_nodes = cfg.quad_nodes;
    let result = fixed_point_optimize(&problem)?;
    let mesh = Mesh1D::new(m)?;
    let rel_u = relative(result.u.final_row(), &data.u_final, mesh.h);
    let rel_z = relative(result.z.row(0), &data.z_initial, mesh.h);
    let (mut num, mut den) = (0.0, 0.0);
    for (c, e) in result.c.iter().zip(&data.c_exact) {
        let sq: Vec<f64> = c.iter().zip(e).map(|(a, b)| (a - b).powi(2)).collect();
        num += trapezoid_full(&sq, mesh.h);
        let sq: Vec<f64> = e.iter().map(|b| b * b).collect();
        den += trapezoid_full(&sq, mesh.h);
    }
    if !(den > 0.0) {
        return Err(Error::Oracle("exact control vanishes identically".into()));
    }
    let rel_c = (num / den).sqrt();
    Ok(ManufacturedOutcome { profile, data, result, mesh, rel_u, rel_z, rel_c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::ExampleId;

    #[test]
    fn ladder_extension() {
        assert_eq!(extended(&[4, 8]), vec![4, 8, 16]);
        assert!(extended(&[]).is_empty());
    }

    #[test]
    fn small_state_study_runs_and_is_deterministic() {
        let mut cfg = StudyConfig::preset(ExampleId::Example1);
        cfg.n_list = vec![8, 16];
        cfg.m_list = vec![4, 8];
        cfg.temporal_m = 8;
        cfg.spatial_n = 8;
        let a = state_two_mesh_study(&cfg, 0.4).unwrap();
        let b = state_two_mesh_study(&cfg, 0.4).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.0.rows.len(), 2);
        assert!(a.1.rows.iter().all(|r| r.error > 0.0));
    }

    #[test]
    fn mittag_leffler_solution_at_origin_and_decay() {
        assert_eq!(mittag_leffler_solution(0.5, 0.0, 0.5).unwrap(), 0.0);
        // u ≈ t (1 − π² t^{α₀} / Γ(α₀ + 2)) for small t
        let t = 1e-8;
        let early = mittag_leffler_solution(0.5, t, 0.5).unwrap();
        let leading = t * (1.0 - std::f64::consts::PI.powi(2) * t.sqrt() / crate::special_fn::gamma_fn(2.5).unwrap());
        assert!((early - leading).abs() < 1e-6 * t);
    }
}
