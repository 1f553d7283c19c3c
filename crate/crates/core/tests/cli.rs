//! End-to-end checks of the command-line interface: each subcommand against
//! small configs, the repository example config, and the error paths that
//! should fail with a clear message and a nonzero exit code.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn msdiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_msdiff"))
        .args(args)
        .output()
        .unwrap()
}

fn repo_config() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/example.toml")
}

fn write_mini_config(dir: &Path, extra: &str) -> PathBuf {
    let path = dir.join("run.toml");
    let base = r#"
[mixture]
temperature = 1.0

[[mixture.species]]
name = "A"
mass = 1.0

[[mixture.species]]
name = "B"
mass = 1.0

[kernel]
coefficients = [1.0]

[[angular]]
pair = ["A", "B"]
constant = 0.5

[oracle]
nodes_per_axis = 40
richardson_eps = [1e-3, 5e-4]
"#;
    std::fs::write(&path, format!("{base}{extra}")).unwrap();
    path
}

const MINI_SOLVER: &str = r#"
[solver]
x_min = 0.0
x_max = 1.0
n_cells = 16
boundary = "periodic"
t_end = 0.002
output_every = 0

[[solver.profiles]]
species = "A"
terms = [
  { kind = "constant", value = 0.5 },
  { kind = "sine", amplitude = 0.25, wavenumber = 1.0 },
]

[[solver.profiles]]
species = "B"
terms = [
  { kind = "constant", value = 0.5 },
  { kind = "sine", amplitude = -0.25, wavenumber = 1.0 },
]
"#;

#[test]
fn coeffs_on_repo_example_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.csv");
    let delta_out = dir.path().join("delta.csv");
    let cfg = repo_config();
    let result = msdiff(&[
        "coeffs",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--delta-out",
        delta_out.to_str().unwrap(),
    ]);
    assert!(
        result.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&result.stderr)
    );
    let d = std::fs::read_to_string(&out).unwrap();
    assert!(d.starts_with("# quantity: binary_diffusion"), "{d}");
    assert!(d.contains("species,A,B"), "{d}");
    // Unit binary mixture with L1 norm 1: D = 1 / pi.
    assert!(d.contains("0.31830988618379069"), "{d}");
    let delta = std::fs::read_to_string(&delta_out).unwrap();
    assert!(delta.starts_with("# quantity: reduced_friction"), "{delta}");
    assert!(delta.contains("3.1415926535897931"), "{delta}");
}

#[test]
fn oracle_check_on_repo_example_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.csv");
    let cfg = repo_config();
    let result = msdiff(&[
        "oracle-check",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(
        result.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&result.stderr)
    );
    let report = std::fs::read_to_string(&out).unwrap();
    let mut lines = report.lines();
    assert_eq!(
        lines.next().unwrap(),
        "pair,term,closed_form,oracle,rel_diff,note"
    );
    let a0 = lines.next().unwrap();
    assert!(a0.starts_with("A-B,a0,"), "{a0}");
    assert!(a0.ends_with(",ok"), "{a0}");
    // Same report on stdout.
    let stdout = String::from_utf8_lossy(&result.stdout);
    assert!(stdout.contains("A-B,a0,"), "{stdout}");
}

#[test]
fn ms_run_writes_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_mini_config(dir.path(), MINI_SOLVER);
    let out_dir = dir.path().join("out");
    let result = msdiff(&[
        "ms-run",
        "--config",
        cfg.to_str().unwrap(),
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert!(
        result.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&result.stderr)
    );
    // output_every = 0 keeps the initial and final states only.
    let first = std::fs::read_to_string(out_dir.join("ms_000000.csv")).unwrap();
    assert!(first.starts_with("# t: 0\n"), "{first}");
    assert_eq!(first.lines().nth(1).unwrap(), "x,c_A,c_B,F_A,F_B");
    assert_eq!(first.lines().count(), 2 + 16);
    let last = std::fs::read_to_string(out_dir.join("ms_000001.csv")).unwrap();
    assert!(last.starts_with("# t: 0.002"), "{last}");
    assert!(!out_dir.join("ms_000002.csv").exists());
}

#[test]
fn kinetic_run_writes_snapshots_with_eps_header() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_mini_config(dir.path(), MINI_SOLVER);
    let out_dir = dir.path().join("out");
    let result = msdiff(&[
        "kinetic-run",
        "--config",
        cfg.to_str().unwrap(),
        "--eps",
        "0.25",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert!(
        result.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&result.stderr)
    );
    let first = std::fs::read_to_string(out_dir.join("kin_000000.csv")).unwrap();
    assert!(first.starts_with("# t: 0\n# eps: 0.25\n"), "{first}");
    assert_eq!(first.lines().nth(2).unwrap(), "x,c_A,c_B,u_A,u_B");
    assert_eq!(first.lines().count(), 3 + 16);
    assert!(out_dir.join("kin_000001.csv").exists());
}

#[test]
fn sweep_writes_error_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_mini_config(
        dir.path(),
        &format!("{MINI_SOLVER}\n[sweep]\nepsilons = [0.2, 0.1]\nrefine = 2\n"),
    );
    let out = dir.path().join("sweep.csv");
    let result = msdiff(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(
        result.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&result.stderr)
    );
    let table = std::fs::read_to_string(&out).unwrap();
    assert!(table.starts_with("# dt: "), "{table}");
    assert!(table.contains("# reference_cells: 32"), "{table}");
    assert!(table.contains("# max_momentum_residual: "), "{table}");
    assert!(table.contains("eps,l2_error,observed_order"), "{table}");
    // One data row per eps; the first has no observed order.
    let rows: Vec<&str> = table
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("eps,"))
        .collect();
    assert_eq!(rows.len(), 2, "{table}");
    assert!(rows[0].starts_with("0.2") && rows[0].ends_with(','), "{table}");
}

#[test]
fn sweep_accepts_eps_override() {
    let dir = tempfile::tempdir().unwrap();
    // No [sweep] section; the --eps list must stand on its own.
    let cfg = write_mini_config(dir.path(), MINI_SOLVER);
    let out = dir.path().join("sweep.csv");
    let result = msdiff(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--eps",
        "0.25,0.125",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(
        result.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&result.stderr)
    );
    let table = std::fs::read_to_string(&out).unwrap();
    assert!(table.contains("\n0.25,"), "{table}");
    assert!(table.contains("\n0.125,"), "{table}");
}

#[test]
fn angular_table_file_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    // Constant 0.5 over [-1, 1] sampled on five points: L1 norm 1, so the
    // diffusion coefficient matches the constant-kernel config exactly.
    std::fs::write(
        dir.path().join("b.csv"),
        "eta,b\n-1,0.5\n-0.5,0.5\n0,0.5\n0.5,0.5\n1,0.5\n",
    )
    .unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(
        &path,
        r#"
[mixture]
temperature = 1.0

[[mixture.species]]
name = "A"
mass = 1.0

[[mixture.species]]
name = "B"
mass = 1.0

[kernel]
coefficients = [1.0]

[[angular]]
pair = ["A", "B"]
table = "b.csv"
"#,
    )
    .unwrap();
    let out = dir.path().join("d.csv");
    let result = msdiff(&[
        "coeffs",
        "--config",
        path.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(
        result.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&result.stderr)
    );
    let d = std::fs::read_to_string(&out).unwrap();
    assert!(d.contains("0.31830988618379069"), "{d}");
}

fn expect_failure(args: &[&str], needle: &str) {
    let result = msdiff(args);
    assert!(!result.status.success(), "expected failure for {args:?}");
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.starts_with("error:"), "{stderr}");
    assert!(stderr.contains(needle), "missing {needle:?} in: {stderr}");
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(
        &path,
        r#"
[mixture]
temperature = 1.0
bogus = 1

[[mixture.species]]
name = "A"
mass = 1.0

[[mixture.species]]
name = "B"
mass = 1.0

[kernel]
coefficients = [1.0]

[[angular]]
pair = ["A", "B"]
constant = 0.5
"#,
    )
    .unwrap();
    let out = dir.path().join("d.csv");
    expect_failure(
        &[
            "coeffs",
            "--config",
            path.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ],
        "bogus",
    );
}

#[test]
fn missing_angular_pair_names_the_species() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(
        &path,
        r#"
[mixture]
temperature = 1.0

[[mixture.species]]
name = "A"
mass = 1.0

[[mixture.species]]
name = "B"
mass = 1.0

[[mixture.species]]
name = "C"
mass = 2.0

[kernel]
coefficients = [1.0]

[[angular]]
pair = ["A", "B"]
constant = 0.5

[[angular]]
pair = ["A", "C"]
constant = 0.5
"#,
    )
    .unwrap();
    let out = dir.path().join("d.csv");
    expect_failure(
        &[
            "coeffs",
            "--config",
            path.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ],
        "(B, C)",
    );
}

#[test]
fn ms_run_without_solver_section_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_mini_config(dir.path(), "");
    let out_dir = dir.path().join("out");
    expect_failure(
        &[
            "ms-run",
            "--config",
            cfg.to_str().unwrap(),
            "--out-dir",
            out_dir.to_str().unwrap(),
        ],
        "solver",
    );
}
