//! Drivers behind the command-line subcommands. Each writes its CSV files
//! into `out_dir` as soon as they are complete.

use std::path::{Path, PathBuf};

use super::config::{ExampleId, StudyConfig};
use super::convergence::{ConvergenceReport, Direction, Variable};
use super::manufactured::{manufactured_forcing, Profile};
use super::output::{convergence_table, profile_table, Cell, Table};
use super::studies::{control_two_mesh_study, example2_problem, manufactured_case, state_two_mesh_study};
use crate::control::{fixed_point_optimize, ControlProblem};
use crate::fem1d::{l2_norm_discrete, FemOperators, Mesh1D};
use crate::kernels::{build_tables, g_rule};
use crate::marching::{solve_state, ForcingPlan, Trajectory};
use crate::{Error, Result};

/// Everything an example run produced.
#[derive(Debug, Clone, Default)]
pub struct RunOutput {
    pub reports: Vec<ConvergenceReport>,
    pub files: Vec<PathBuf>,
}

impl RunOutput {
    fn save(&mut self, table: &Table, path: PathBuf) -> Result<()> {
        table.write(&path)?;
        self.files.push(path);
        Ok(())
    }
}

/// Runs the convergence or manufactured study selected by `cfg.example`.
pub fn run_example(cfg: &StudyConfig, out_dir: &Path) -> Result<RunOutput> {
    let mut out = RunOutput::default();
    match cfg.example {
        ExampleId::Example1 => {
            let mut temporal = Vec::new();
            let mut spatial = Vec::new();
            for &a in &cfg.alpha0 {
                let (t, s) = state_two_mesh_study(cfg, a)?;
                temporal.push(t);
                spatial.push(s);
                let t_refs: Vec<_> = temporal.iter().collect();
                let s_refs: Vec<_> = spatial.iter().collect();
                out.save(&convergence_table(&t_refs), out_dir.join("example1_temporal_U.csv"))?;
                out.save(&convergence_table(&s_refs), out_dir.join("example1_spatial_U.csv"))?;
            }
            out.files.sort();
            out.files.dedup();
            out.reports = temporal.into_iter().chain(spatial).collect();
        }
        ExampleId::Example2 => {
            let mut stats_table = Table::new(&["alpha0", "direction", "N", "M", "iterations", "residual"]);
            for &a in &cfg.alpha0 {
                let study = control_two_mesh_study(cfg, a)?;
                for s in &study.stats {
                    stats_table.push(vec![
                        a.into(),
                        s.direction.to_string().as_str().into(),
                        s.n.into(),
                        s.m.into(),
                        s.iterations.into(),
                        s.residual.into(),
                    ]);
                }
                out.reports.extend(study.reports);
            }
            for direction in [Direction::Temporal, Direction::Spatial] {
                for variable in [Variable::U, Variable::Z, Variable::C] {
                    let reports: Vec<_> =
                        out.reports.iter().filter(|r| r.variable == variable && r.direction == direction).collect();
                    let path = out_dir.join(format!("example2_{direction}_{variable}.csv"));
                    let table = convergence_table(&reports);
                    out.save(&table, path)?;
                }
            }
            out.save(&stats_table, out_dir.join("example2_iterations.csv"))?;
        }
        ExampleId::Example3 | ExampleId::Example3a | ExampleId::Example3b => {
            let cases: &[(Profile, &str)] = match cfg.example {
                ExampleId::Example3a => &[(Profile::Sine, "a")],
                ExampleId::Example3b => &[(Profile::Polynomial, "b")],
                _ => &[(Profile::Sine, "a"), (Profile::Polynomial, "b")],
            };
            let mut summary =
                Table::new(&["case", "N", "M", "iterations", "residual", "rel_err_U_T", "rel_err_Z_0", "rel_err_C"]);
            for &(profile, tag) in cases {
                let oc = manufactured_case(cfg, profile)?;
                let x = oc.mesh.all_nodes();
                let pad = |v: &[f64]| -> Vec<f64> { std::iter::once(0.0).chain(v.iter().copied()).chain([0.0]).collect() };
                let columns: [(&str, Vec<f64>); 6] = [
                    ("U_T", oc.result.u.full_row(oc.result.u.n)),
                    ("u_exact_T", pad(&oc.data.u_final)),
                    ("Z_0", oc.result.z.full_row(0)),
                    ("z_exact_0", pad(&oc.data.z_initial)),
                    ("C_0", oc.result.c[0].clone()),
                    ("c_exact_0", oc.data.c_exact[0].clone()),
                ];
                let named: Vec<(&str, &[f64])> = columns.iter().map(|(k, v)| (*k, v.as_slice())).collect();
                out.save(&profile_table(&x, &named), out_dir.join(format!("example3{tag}_profiles.csv")))?;
                summary.push(vec![
                    tag.into(),
                    oc.result.u.n.into(),
                    oc.mesh.m.into(),
                    oc.result.iterations.into(),
                    oc.result.residual.into(),
                    oc.rel_u.into(),
                    oc.rel_z.into(),
                    oc.rel_c.into(),
                ]);
            }
            out.save(&summary, out_dir.join("example3_summary.csv"))?;
        }
    }
    Ok(out)
}

fn single_case(cfg: &StudyConfig) -> Result<Option<Profile>> {
    match cfg.example {
        ExampleId::Example1 | ExampleId::Example2 => Ok(None),
        ExampleId::Example3a => Ok(Some(Profile::Sine)),
        ExampleId::Example3b => Ok(Some(Profile::Polynomial)),
        ExampleId::Example3 => Err(Error::Config("single solves need example3a or example3b".into())),
    }
}

/// Control problem of a single solve: the first entries of the ladders and of `alpha0`.
pub fn control_problem(cfg: &StudyConfig) -> Result<ControlProblem> {
    let (a, n, m) = (cfg.alpha0[0], cfg.n_list[0], cfg.m_list[0]);
    match single_case(cfg)? {
        None if cfg.example == ExampleId::Example1 => {
            Err(Error::Config("example1 has no target state; use example2, example3a or example3b".into()))
        }
        None => example2_problem(cfg, a, n, m),
        Some(profile) => {
            let spec = cfg.spec(a)?;
            let data = manufactured_forcing(profile, &spec, cfg.kappa, n, m, cfg.quad_nodes)?;
            let mut p = ControlProblem::new(spec, n, m, cfg.kappa, data.q_samples, data.ud_samples);
            p.tol = cfg.tol;
            p.max_iters = cfg.max_iters;
            p.quad_nodes = cfg.quad_nodes;
            Ok(p)
        }
    }
}

/// State for the first ladder entries. Examples 1 and 2 use `q = 1`; the
/// manufactured cases use `q + c` with the exact control, which reproduces
/// the exact state.
pub fn state_trajectory(cfg: &StudyConfig) -> Result<Trajectory> {
    let (a, n, m) = (cfg.alpha0[0], cfg.n_list[0], cfg.m_list[0]);
    let spec = cfg.spec(a)?;
    let sources = match single_case(cfg)? {
        None => vec![vec![1.0; m - 1]; n],
        Some(profile) => {
            let data = manufactured_forcing(profile, &spec, cfg.kappa, n, m, cfg.quad_nodes)?;
            data.q_samples
                .iter()
                .zip(&data.c_exact)
                .map(|(q, c)| q.iter().zip(&c[1..m]).map(|(a, b)| a + b).collect())
                .collect()
        }
    };
    let tables = build_tables(&spec, n, &g_rule(a, cfg.quad_nodes)?)?;
    solve_state(&tables, &FemOperators::new(m)?, &ForcingPlan::NodalHistory(sources))
}

/// Writes `state_final.csv` (nodal `U^N`) and `state_norms.csv` (`‖U^n‖` per level).
pub fn run_solve_state(cfg: &StudyConfig, out_dir: &Path) -> Result<RunOutput> {
    let traj = state_trajectory(cfg)?;
    let mesh = Mesh1D::new(traj.m)?;
    let tau = cfg.horizon / traj.n as f64;
    let mut out = RunOutput::default();
    let final_row = traj.full_row(traj.n);
    out.save(&profile_table(&mesh.all_nodes(), &[("U", &final_row)]), out_dir.join("state_final.csv"))?;
    let mut norms = Table::new(&["n", "t_n", "l2_norm"]);
    for level in 0..=traj.n {
        norms.push(vec![level.into(), (level as f64 * tau).into(), l2_norm_discrete(traj.row(level), mesh.h).into()]);
    }
    out.save(&norms, out_dir.join("state_norms.csv"))?;
    Ok(out)
}

/// Writes `control_iterations.csv`, `control_summary.csv` and `control_profiles.csv`.
pub fn run_solve_control(cfg: &StudyConfig, out_dir: &Path) -> Result<RunOutput> {
    let problem = control_problem(cfg)?;
    let result = fixed_point_optimize(&problem)?;
    let mesh = Mesh1D::new(problem.m)?;
    let mut out = RunOutput::default();

    let mut iters = Table::new(&["iteration", "residual", "objective"]);
    for rec in &result.history {
        iters.push(vec![rec.iteration.into(), rec.residual.into(), rec.objective.into()]);
    }
    out.save(&iters, out_dir.join("control_iterations.csv"))?;

    let mut summary = Table::new(&["example", "alpha0", "N", "M", "kappa", "iterations", "residual", "objective"]);
    summary.push(vec![
        Cell::Text(cfg.example.to_string()),
        problem.spec.alpha0.into(),
        problem.n.into(),
        problem.m.into(),
        problem.kappa.into(),
        result.iterations.into(),
        result.residual.into(),
        result.objective.into(),
    ]);
    out.save(&summary, out_dir.join("control_summary.csv"))?;

    let u_final = result.u.full_row(result.u.n);
    let z_initial = result.z.full_row(0);
    let profiles = profile_table(&mesh.all_nodes(), &[("U_T", &u_final), ("Z_0", &z_initial), ("C_0", &result.c[0])]);
    out.save(&profiles, out_dir.join("control_profiles.csv"))?;
    Ok(out)
}

/// Writes `kernels.csv` with columns `n, t_n, g, w, b, bhat, P`; entries
/// outside a sequence's index range are left empty.
pub fn run_kernels(cfg: &StudyConfig, out_dir: &Path) -> Result<RunOutput> {
    let (a, n) = (cfg.alpha0[0], cfg.n_list[0]);
    let tables = build_tables(&cfg.spec(a)?, n, &g_rule(a, cfg.quad_nodes)?)?;
    let mut table = Table::new(&["n", "t_n", "g", "w", "b", "bhat", "P"]);
    for k in 0..=n {
        let below = |v: &[f64]| v.get(k).copied();
        table.push(vec![
            k.into(),
            tables.time(k).into(),
            tables.g_vals[k].into(),
            (if k >= 1 { Some(tables.weight(k)) } else { None }).into(),
            below(&tables.b).into(),
            below(&tables.bhat).into(),
            below(&tables.p).into(),
        ]);
    }
    let mut out = RunOutput::default();
    out.save(&table, out_dir.join("kernels.csv"))?;
    Ok(out)
}
