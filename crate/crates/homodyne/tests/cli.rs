use std::path::Path;
use std::process::Command;

fn homodyne(dir: &Path, args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_homodyne"))
        .args(args)
        .env("HOMODYNE_OUTPUT_DIR", dir)
        .output()
        .expect("binary runs")
}

#[test]
fn mc_experiment_is_byte_identical_for_fixed_seed() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let ds = dir.path().join("ds.csv");
    for (out, threads) in [(&a, "1"), (&b, "4")] {
        let o = homodyne(
            dir.path(),
            &[
                "mc-experiment",
                "--samples-per-phase",
                "500",
                "--f",
                "8",
                "--n-max",
                "10",
                "--seed",
                "7",
                "--threads",
                threads,
                "--dataset-out",
                ds.to_str().unwrap(),
                "-o",
                out.to_str().unwrap(),
            ],
        );
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    // reconstructing from the stored records reproduces the estimate
    let c = dir.path().join("c.csv");
    let o = homodyne(dir.path(), &["reconstruct", "--dataset", ds.to_str().unwrap(), "--n-max", "10", "-o", c.to_str().unwrap()]);
    assert!(o.status.success());
    let strip = |p: &Path| -> Vec<String> {
        std::fs::read_to_string(p).unwrap().lines().map(|l| l.split(',').take(4).collect::<Vec<_>>().join(",")).collect()
    };
    assert_eq!(strip(&a), strip(&c));
}

#[test]
fn exit_codes_follow_error_category() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(homodyne(dir.path(), &["reconstruct", "--eta", "0.4"]).status.code(), Some(3));
    assert_eq!(homodyne(dir.path(), &["reconstruct", "--state", "cat"]).status.code(), Some(2));
    assert_eq!(homodyne(dir.path(), &["reconstruct", "--nonsense"]).status.code(), Some(2));
    assert_eq!(homodyne(dir.path(), &["reconstruct", "--dataset", "/nonexistent/ds.csv"]).status.code(), Some(5));
    let o = homodyne(dir.path(), &["verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("verify.json").exists());
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# coherent scan\ncommand = sweep-f\nstate.mean_n = 2\nf = 4..8\nn_max = 12\nelements = 5,5\nformat = json\n").unwrap();
    let o = homodyne(dir.path(), &["--config", cfg.to_str().unwrap(), "--f", "6,10"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("sweep-f.json")).unwrap()).unwrap();
    let rows = v["result"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][0].as_f64(), Some(6.0));
    assert_eq!(rows[1][0].as_f64(), Some(10.0));
    assert_eq!(v["config"]["n_max"].as_u64(), Some(12));

    std::fs::write(&cfg, "command = reconstruct\nunknown_key = 3\n").unwrap();
    assert_eq!(homodyne(dir.path(), &["--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn observable_emits_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = homodyne(dir.path(), &["observable", "--mean-n", "4"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("observable.json")).unwrap()).unwrap();
    for key in ["mean", "sigma", "variance", "precision"] {
        assert!(v[key].is_number(), "missing {key}");
    }
    assert!((v["precision"].as_f64().unwrap() - 5.0 / 2f64.sqrt()).abs() < 1e-6);
}

#[test]
fn kernel_csv_has_expected_shape() {
    let dir = tempfile::tempdir().unwrap();
    let o = homodyne(dir.path(), &["kernel", "--m", "0..2", "--d", "1", "--x-points", "11", "--eta", "0.9"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(dir.path().join("kernel.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("m,d,x,re,im"));
    assert_eq!(lines.count(), 33);
}
