//! End-to-end tests of the `ctap` binary: exit codes, file contents,
//! determinism, and error reporting.

use std::collections::HashMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run_ctap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ctap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("config.toml");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn read_csv(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|line| line.split(',').map(str::to_string).collect())
        .collect()
}

fn read_meta(path: &Path) -> HashMap<String, String> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|line| {
            let (k, v) = line.split_once(" = ").expect("key = value");
            (k.to_string(), v.to_string())
        })
        .collect()
}

const THREE_DOT_IDEAL: &str = "n_dqd = 3\nomega_max = 1.0\nt_max_pi = 25.0\n";

const COARSE_INTEGRATOR: &str = "\n[integrator]\nsteps_per_t_max = 2000\nsamples = 50\n";

#[test]
fn simulate_hits_complete_transfer_and_echoes_defaults() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), THREE_DOT_IDEAL);
    let out = dir.path().join("run");

    let result = run_ctap(&[
        "simulate",
        "--config",
        &config,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{result:?}");

    let rows = read_csv(&out.join("trajectory.csv"));
    assert_eq!(rows[0][0], "t");
    assert_eq!(rows[0][1], "P1S1");
    assert_eq!(rows[0][9], "P3S3");
    assert_eq!(rows[0][10], "trace");
    assert_eq!(rows[0][11], "purity");
    // Default sampling: 2000 rows plus the header.
    assert_eq!(rows.len(), 2001);
    let last = rows.last().unwrap();
    let p33: f64 = last[9].parse().unwrap();
    assert!(p33 >= 0.999, "final transfer {p33}");

    // Defaults the config left implicit are echoed in the sidecar.
    let meta = read_meta(&out.join("trajectory.meta.txt"));
    assert_eq!(meta["command"], "simulate");
    assert_eq!(meta["seedless"], "true");
    assert_eq!(meta["tool_version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(meta["omega_s_ratio"], "1.0000000000000000e1");
    assert_eq!(meta["sigma_ratio"], "1.2500000000000000e-1");
    assert_eq!(meta["margin_ratio"].parse::<f64>().unwrap(), 0.1);
    assert_eq!(meta["gamma"], "0.0000000000000000e0");
    assert_eq!(meta["steps_per_t_max"], "50000");
    assert_eq!(meta["samples"], "2000");
    let transfer: f64 = meta["final_transfer_probability"].parse().unwrap();
    assert!(transfer >= 0.999);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        dir.path(),
        &format!("{THREE_DOT_IDEAL}gamma = 0.05\n{COARSE_INTEGRATOR}"),
    );
    for name in ["a", "b"] {
        let out = dir.path().join(name);
        let result = run_ctap(&[
            "simulate",
            "--config",
            &config,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(result.status.success(), "{result:?}");
    }
    let a = fs::read(dir.path().join("a/trajectory.csv")).unwrap();
    let b = fs::read(dir.path().join("b/trajectory.csv")).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);

    // The sidecars agree on everything except the recorded output paths.
    let strip = |name: &str| {
        fs::read_to_string(dir.path().join(name).join("trajectory.meta.txt"))
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with("output_dir"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip("a"), strip("b"));
}

#[test]
fn spectrum_reports_threefold_zero_multiplicity_throughout() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        dir.path(),
        &format!("{THREE_DOT_IDEAL}\n[spectrum]\nn_times = 60\n"),
    );
    let out = dir.path().join("run");

    let result = run_ctap(&[
        "spectrum",
        "--config",
        &config,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{result:?}");

    let rows = read_csv(&out.join("spectrum.csv"));
    assert_eq!(rows[0].len(), 1 + 9 + 1);
    assert_eq!(rows[0][1], "lambda_1");
    assert_eq!(*rows[0].last().unwrap(), "zero_multiplicity");
    assert_eq!(rows.len(), 61);
    for row in &rows[1..] {
        assert_eq!(*row.last().unwrap(), "3");
    }
    let meta = read_meta(&out.join("spectrum.meta.txt"));
    assert_eq!(meta["n_times"], "60");
}

#[test]
fn unknown_config_key_is_rejected_by_name() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        dir.path(),
        "n_dqd = 3\nomega_max = 1.0\nt_max_pi = 25.0\ngamna = 0.1\n",
    );
    let out = dir.path().join("run");

    let result = run_ctap(&[
        "simulate",
        "--config",
        &config,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(result.status.code(), Some(1));
    let stderr = String::from_utf8(result.stderr).unwrap();
    assert!(stderr.contains("\"status\":\"error\""), "{stderr}");
    assert!(stderr.contains("gamna"), "{stderr}");
    assert!(!out.join("trajectory.csv").exists());
}

#[test]
fn even_chain_is_rejected_with_the_invariant_named() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), "n_dqd = 4\nomega_max = 1.0\nt_max_pi = 25.0\n");
    let out = dir.path().join("run");

    let result = run_ctap(&[
        "simulate",
        "--config",
        &config,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(result.status.code(), Some(1));
    let stderr = String::from_utf8(result.stderr).unwrap();
    assert!(stderr.contains("n_dqd must be odd"), "{stderr}");
}

#[test]
fn command_line_overrides_beat_the_config() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), &format!("{THREE_DOT_IDEAL}{COARSE_INTEGRATOR}"));
    let out = dir.path().join("run");

    let result = run_ctap(&[
        "simulate",
        "--config",
        &config,
        "--out",
        out.to_str().unwrap(),
        "--tmax",
        "30",
        "--gamma",
        "0.05",
        "--samples",
        "25",
    ]);
    assert!(result.status.success(), "{result:?}");

    let meta = read_meta(&out.join("trajectory.meta.txt"));
    let t_max_pi: f64 = meta["t_max_pi"].parse().unwrap();
    assert!((t_max_pi - 30.0).abs() < 1e-12, "{t_max_pi}");
    assert_eq!(meta["gamma"].parse::<f64>().unwrap(), 0.05);
    assert_eq!(meta["samples"], "25");
    let rows = read_csv(&out.join("trajectory.csv"));
    assert_eq!(rows.len(), 26);
}

#[test]
fn sweep_partial_failure_exits_2_and_marks_the_row() {
    // The rate axis keeps the raw pulse time fixed, so with the 10x
    // interior pulse of a five-dot chain its top end pushes the fixed-step
    // integrator far outside its stability region and that one grid point
    // fails while the other succeeds.
    let dir = TempDir::new().unwrap();
    let config = write_config(
        dir.path(),
        &format!(
            "n_dqd = 5\nomega_max = 1.0\nt_max_pi = 10.0\n{COARSE_INTEGRATOR}\n\
             [sweep]\nobservable = \"transfer_probability\"\n\n\
             [[sweep.axis]]\nparam = \"omega_max\"\nmin = 1.0\nmax = 40.0\ncount = 2\n"
        ),
    );
    let out = dir.path().join("run");

    let result = run_ctap(&[
        "sweep",
        "--config",
        &config,
        "--out",
        out.to_str().unwrap(),
        "--workers",
        "2",
    ]);
    assert_eq!(result.status.code(), Some(2), "{result:?}");
    let stderr = String::from_utf8(result.stderr).unwrap();
    assert!(stderr.contains("\"status\":\"partial\""), "{stderr}");
    assert!(stderr.contains("\"failed_points\":1"), "{stderr}");

    let text = fs::read_to_string(out.join("sweep.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "omega_max,value,status");
    assert!(lines[1].ends_with(",ok"), "{}", lines[1]);
    assert!(lines[2].contains(",,"), "{}", lines[2]);
    assert!(lines[2].contains("error: "), "{}", lines[2]);

    let meta = read_meta(&out.join("sweep.meta.txt"));
    assert_eq!(meta["grid_points"], "2");
    assert_eq!(meta["failed_points"], "1");
    assert_eq!(meta["axis_0_param"], "omega_max");
}

#[test]
fn fully_successful_sweep_exits_0() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        dir.path(),
        &format!(
            "n_dqd = 3\nomega_max = 1.0\nt_max_pi = 10.0\n{COARSE_INTEGRATOR}\n\
             [sweep]\nobservable = \"transfer_probability\"\n\n\
             [[sweep.axis]]\nparam = \"gamma\"\nmin = 0.0\nmax = 0.01\ncount = 2\n"
        ),
    );
    let out = dir.path().join("run");

    let result = run_ctap(&["sweep", "--config", &config, "--out", out.to_str().unwrap()]);
    assert_eq!(result.status.code(), Some(0), "{result:?}");
    assert!(result.stderr.is_empty());

    let rows = read_csv(&out.join("sweep.csv"));
    assert_eq!(rows.len(), 3);
    for row in &rows[1..] {
        assert_eq!(row.last().unwrap(), "ok");
        let value: f64 = row[1].parse().unwrap();
        assert!((0.0..=1.0).contains(&value));
    }
}

#[test]
fn optimize_writes_a_single_verdict_row() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        dir.path(),
        &format!(
            "n_dqd = 3\nomega_max = 10.0\nt_max_pi = 20.0\ngamma = 0.05\n{COARSE_INTEGRATOR}\n\
             [optimize]\nt_min_pi = 10.0\nt_max_pi = 20.0\nresolution_pi = 5.0\n"
        ),
    );
    let out = dir.path().join("run");

    let result = run_ctap(&[
        "optimize",
        "--config",
        &config,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{result:?}");

    let rows = read_csv(&out.join("optimize.csv"));
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0], vec!["t_opt_pi", "transfer_probability"]);
    let t_opt: f64 = rows[1][0].parse().unwrap();
    let transfer: f64 = rows[1][1].parse().unwrap();
    assert!((5.0..=25.0).contains(&t_opt), "{t_opt}");
    assert!(transfer > 0.5 && transfer <= 1.0, "{transfer}");

    let meta = read_meta(&out.join("optimize.meta.txt"));
    assert_eq!(meta["search_resolution_pi"], "5.0000000000000000e0");
}

#[test]
fn miscalibrate_zero_fraction_gives_an_identically_zero_curve() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        dir.path(),
        &format!(
            "n_dqd = 3\nomega_max = 1.0\nt_max_pi = 10.0\n{COARSE_INTEGRATOR}\n\
             [miscalibrate]\ntarget = \"omega_i\"\nkind = \"amplitude\"\nfraction = 0.0\n\
             t_axis_pi = [10.0, 15.0]\n"
        ),
    );
    let out = dir.path().join("run");

    let result = run_ctap(&[
        "miscalibrate",
        "--config",
        &config,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{result:?}");

    let rows = read_csv(&out.join("miscalibrate.csv"));
    assert_eq!(rows[0], vec!["t_max_pi", "delta"]);
    assert_eq!(rows.len(), 3);
    for row in &rows[1..] {
        let delta: f64 = row[1].parse().unwrap();
        assert_eq!(delta, 0.0);
    }
    let meta = read_meta(&out.join("miscalibrate.meta.txt"));
    assert_eq!(meta["perturbation_kind"], "amplitude");
    assert_eq!(meta["perturbation_fraction"], "0.0000000000000000e0");
}

#[test]
fn swap_compare_favors_the_adiabatic_side_at_low_rates() {
    let dir = TempDir::new().unwrap();
    let config = write_config(
        dir.path(),
        "n_dqd = 3\nomega_max = 0.05\nt_max_pi = 10.0\n\n\
         [integrator]\nsteps_per_t_max = 2000\nsamples = 2\n\n\
         [swap_compare]\nn_values = [3, 5]\nscan_max_pi = 30.0\nscan_step_pi = 5.0\n\
         time_tol_pi = 0.5\n",
    );
    let out = dir.path().join("run");

    let result = run_ctap(&[
        "swap-compare",
        "--config",
        &config,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{result:?}");

    let rows = read_csv(&out.join("comparison.csv"));
    assert_eq!(rows[0], vec!["N", "t_ctap", "t_swap", "faster"]);
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[1][0], "3");
    assert_eq!(rows[2][0], "5");
    for row in &rows[1..] {
        assert_eq!(row[3], "ctap");
        let t_ctap: f64 = row[1].parse().unwrap();
        let t_swap: f64 = row[2].parse().unwrap();
        assert!(t_ctap < t_swap, "{t_ctap} vs {t_swap}");
    }
    let meta = read_meta(&out.join("comparison.meta.txt"));
    assert_eq!(meta["crossover_n"], "none");
    assert_eq!(meta["comparison_omega_max"].parse::<f64>().unwrap(), 0.05);
}

#[test]
fn config_file_round_trips_through_serialization() {
    let dir = TempDir::new().unwrap();
    let text = format!("{THREE_DOT_IDEAL}gamma = 0.01\nmargin_ratio = 0.0\n{COARSE_INTEGRATOR}");
    let path = dir.path().join("config.toml");
    fs::write(&path, &text).unwrap();

    let parsed = ctap_cli::FileConfig::load(&path).unwrap();
    let reserialized = parsed.to_toml().unwrap();
    let reparsed: ctap_cli::FileConfig = toml::from_str(&reserialized).unwrap();
    assert_eq!(parsed, reparsed);
    assert_eq!(
        parsed.chain_config().unwrap(),
        reparsed.chain_config().unwrap()
    );
}
