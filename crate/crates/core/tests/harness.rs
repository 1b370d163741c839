//! Studies, manufactured data, configuration files and CSV reproducibility.

use std::fs;

use vesd_core::fem1d::l2_norm_discrete;
use vesd_core::harness::studies::solve_state_constant_source;
use vesd_core::harness::{
    manufactured_forcing, rates_from_errors, run_example, run_kernels, run_solve_control, run_solve_state,
    state_two_mesh_study, ExampleId, MemoryIntegral, Profile, StudyConfig,
};
use vesd_core::kernels::ExponentSpec;
use vesd_core::Error;

fn small_example2() -> StudyConfig {
    StudyConfig::from_toml_str("N_list = [4, 8]\nM_list = [4, 8]", Some(ExampleId::Example2)).unwrap()
}

#[test]
fn table_rates_from_printed_errors() {
    let r = rates_from_errors(&[3.3834e-5, 1.8048e-5, 9.1291e-6, 4.4025e-6]).unwrap();
    for (a, b) in r.iter().zip([0.91, 0.98, 1.05]) {
        assert!((a - b).abs() < 5e-3);
    }
}

#[test]
fn example1_finest_rates_are_sane() {
    let cfg = StudyConfig::preset(ExampleId::Example1);
    for a0 in [0.4, 0.7, 0.95] {
        let (t, s) = state_two_mesh_study(&cfg, a0).unwrap();
        let rt = *t.rates().last().unwrap();
        let rs = *s.rates().last().unwrap();
        assert!((0.8..=1.3).contains(&rt), "α₀={a0}: temporal {rt}");
        assert!((1.85..=2.1).contains(&rs), "α₀={a0}: spatial {rs}");
        assert!(t.rows[0].rate.is_none() && s.rows[0].rate.is_none());
    }
}

#[test]
fn state_stays_bounded_across_example1_sweep() {
    for a0 in [0.4, 0.7, 0.95] {
        let spec = ExponentSpec::new(a0, -1.0 / 6.0, 0.5).unwrap();
        for n in [128, 256, 512, 1024] {
            let traj = solve_state_constant_source(&spec, n, 32, 64, |_| 1.0).unwrap();
            let worst = traj.values.iter().map(|r| l2_norm_discrete(r, 1.0 / 32.0)).fold(0.0, f64::max);
            assert!(worst <= 10.0 && worst > 0.0, "α₀={a0} N={n}: {worst}");
        }
    }
}

#[test]
fn manufactured_quadrature_is_self_consistent() {
    let spec = ExponentSpec::new(0.8, -1.0 / 6.0, 1.0).unwrap();
    let a = MemoryIntegral::new(spec, 64).unwrap();
    let b = MemoryIntegral::new(spec, 128).unwrap();
    for k in 1..=80 {
        let s = k as f64 / 80.0;
        assert!((a.eval(s) - b.eval(s)).abs() <= 1e-7);
    }
    // too few nodes for the doubling check
    assert!(matches!(manufactured_forcing(Profile::Sine, &spec, 1.0, 80, 32, 2), Err(Error::Oracle(_))));
}

#[test]
fn manufactured_state_reproduces_exact_field() {
    // driving the state with q + c_exact recovers u(T) = φ
    let dir = tempfile::tempdir().unwrap();
    let cfg = StudyConfig::from_toml_str("example = \"example3a\"", None).unwrap();
    run_solve_state(&cfg, dir.path()).unwrap();
    let text = fs::read_to_string(dir.path().join("state_final.csv")).unwrap();
    let mut worst: f64 = 0.0;
    for line in text.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        worst = worst.max((v[1] - (std::f64::consts::PI * v[0]).sin()).abs());
    }
    assert!(worst < 2e-2, "{worst}");
}

#[test]
fn reports_are_byte_identical() {
    let cfg = small_example2();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let out_a = run_example(&cfg, a.path()).unwrap();
    run_example(&cfg, b.path()).unwrap();
    assert_eq!(out_a.files.len(), 7);
    for f in &out_a.files {
        let name = f.file_name().unwrap();
        let bytes = fs::read(f).unwrap();
        assert_eq!(bytes, fs::read(b.path().join(name)).unwrap(), "{name:?}");
        assert!(!bytes.contains(&b'\r'));
    }
    let csv = fs::read_to_string(a.path().join("example2_spatial_C.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "alpha0,param,error,rate");
    assert!(lines[1].ends_with(','));
    assert_eq!(lines.len(), 3);
}

#[test]
fn single_entry_ladder_has_empty_rate_column() {
    let cfg = StudyConfig::from_toml_str("alpha0 = 0.4\nN_list = [16]\nM_list = [8]", Some(ExampleId::Example1)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let out = run_example(&cfg, dir.path()).unwrap();
    assert!(out.reports.iter().all(|r| r.rows.len() == 1 && r.rows[0].rate.is_none()));
}

#[test]
fn kernels_and_control_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = StudyConfig::from_toml_str("N_list = [16]\nM_list = [32]", Some(ExampleId::Example2)).unwrap();
    run_kernels(&cfg, dir.path()).unwrap();
    let kernels = fs::read_to_string(dir.path().join("kernels.csv")).unwrap();
    assert_eq!(kernels.lines().count(), 18);
    assert!(kernels.starts_with("n,t_n,g,w,b,bhat,P\n0,0.000000000000e0,1.000000000000e0,,"));

    run_solve_control(&cfg, dir.path()).unwrap();
    let summary = fs::read_to_string(dir.path().join("control_summary.csv")).unwrap();
    let fields: Vec<&str> = summary.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(fields[0], "example2");
    assert!(fields[5].parse::<usize>().unwrap() <= 100);
    let profiles = fs::read_to_string(dir.path().join("control_profiles.csv")).unwrap();
    assert_eq!(profiles.lines().count(), 34);
}

#[test]
fn config_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("study.toml");
    fs::write(
        &path,
        "example = \"example2\"\nalpha0 = [0.3]\nalpha_slope = -0.1\nT = 1.0\nN_list = [8, 16]\nM_list = [8]\n\
         kappa = 0.5\ntol = 1e-8\nmax_iters = 50\nquad_nodes = 32\nout_dir = \"results\"\n",
    )
    .unwrap();
    let text = StudyConfig::read_file(&path).unwrap();
    let cfg = StudyConfig::from_toml_str(&text, None).unwrap();
    assert_eq!(cfg.alpha0, vec![0.3]);
    assert_eq!(cfg.kappa, 0.5);
    assert_eq!(cfg.max_iters, 50);
    assert_eq!(cfg.out_dir.as_deref(), Some(std::path::Path::new("results")));
    assert!(matches!(StudyConfig::read_file(&dir.path().join("missing.toml")), Err(Error::ConfigIo { .. })));
    assert!(StudyConfig::from_toml_str("example = \"example9\"", None).is_err());
}
