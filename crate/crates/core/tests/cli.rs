use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use spin_compress::interaction::preset_tfim;
use spin_compress::oracle::classical_entropy_bits;
use spin_compress::{GroundStateConfig, Volume};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spin-compress")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.cfg");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

/// Rows of a CSV file as header-keyed string maps.
fn read_csv(path: &Path) -> Vec<std::collections::HashMap<String, String>> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    lines
        .map(|l| header.iter().cloned().zip(l.split(',').map(String::from)).collect())
        .collect()
}

fn num(row: &std::collections::HashMap<String, String>, key: &str) -> f64 {
    row[key].parse().unwrap()
}

#[test]
fn free_model_is_fully_typical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "J = 0\nh_field = 0\nlambda = 0\nbeta = 1\nvolume = 1\nvolume = 2\nvolume = 3\n");
    let out = dir.path().join("out");
    let res = run(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap(), "--quiet"]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let rows = read_csv(&out.join("sweep.csv"));
    assert_eq!(rows.len(), 3);
    for row in rows {
        let n_sites = num(&row, "n_sites");
        assert!((num(&row, "S_bits") - n_sites).abs() <= 1e-12);
        assert!((num(&row, "h_bits") - 1.0).abs() <= 1e-12);
        assert!((num(&row, "typical_mass") - 1.0).abs() <= 1e-12);
        assert!(num(&row, "identity_residual") <= 1e-10);
    }
}

#[test]
fn classical_sweep_matches_enumeration() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "J = 1\nh_field = 0.5\nbeta = 2\nchain = 4\nchain = 6\nchain = 8\n");
    let out = dir.path().join("out");
    let res = run(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap(), "--quiet"]);
    assert!(res.status.success());
    let phi = preset_tfim(1.0, 0.5, 0.0).unwrap();
    for row in read_csv(&out.join("thermo.csv")) {
        let n = num(&row, "n_sites") as usize;
        let volume = Volume::chain(n, 12).unwrap();
        let s = classical_entropy_bits(&phi, &volume, &GroundStateConfig::all_up(1), 2.0).unwrap();
        assert!((num(&row, "S_bits") - s).abs() <= 1e-10, "N={n}");
    }
}

#[test]
fn negative_beta_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "volume = 1\nbeta = -2\n");
    let res = run(&["sweep", "--config", &cfg, "--quiet"]);
    assert_eq!(res.status.code(), Some(2));
    let err = String::from_utf8_lossy(&res.stderr);
    assert!(err.contains("line 2") && err.contains("beta"), "{err}");
}

#[test]
fn over_cap_volume_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "beta = 1\nvolume = 1\nvolume = 7\n");
    let out = dir.path().join("out");
    let res = run(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap(), "--quiet"]);
    assert_eq!(res.status.code(), Some(3));
    let res = run(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap(), "--max-qubits", "2"]);
    assert_eq!(res.status.code(), Some(3));
}

#[test]
fn generic_lambda_without_quantum_term_warns() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "model = generic\nbeta = 1\nchain = 2\nterm.zz.support = 0;1\nterm.zz.classical = -1, 1, 1, -1\nlambda = 0.3\n",
    );
    let out = dir.path().join("out");
    let res = run(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(res.status.success());
    assert!(String::from_utf8_lossy(&res.stderr).contains("no quantum term"));
}

#[test]
fn sweeps_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "J = 1\nh_field = 0.5\nlambda = 0.2\nbeta = 2\nchain = 3\nchain = 4\nchain = 5\ndelta = 0.15\ndelta = 0.4\nrate = 0.3\nrate_offset = 0.2\nlln_t = 0\nlln_t = 1\nseed = 17\n",
    );
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        assert!(run(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap(), "--quiet"]).status.success());
    }
    for name in ["sweep.csv", "thermo.csv", "typical.csv", "best_rate.csv", "lln.csv"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
}

#[test]
fn auxiliary_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "J = 1\nh_field = 0.5\nlambda = 0.8\nbeta = 0.5\nchain = 4\ndelta = 0.5\n");
    let out = dir.path().join("out");
    let out_s = out.to_str().unwrap();

    assert!(run(&["spectrum", "--config", &cfg, "--out", out_s, "--quiet"]).status.success());
    assert_eq!(fs::read_to_string(out.join("spectrum.csv")).unwrap().lines().count(), 17);

    let res = run(&["codec-demo", "--config", &cfg, "--out", out_s]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let book = fs::read_to_string(out.join("codebook.txt")).unwrap();
    assert_eq!(book.lines().next(), Some("codeword eigen_index"));
    assert_eq!(book.lines().count(), 4);

    let res = run(&["check", "--quiet"]);
    assert!(res.status.success());
    let res = run(&["check", "--config", &cfg]);
    assert!(res.status.success());
    assert!(String::from_utf8_lossy(&res.stdout).lines().all(|l| l.starts_with("PASS")));
}
