use std::process::{Command, Output};

fn uarea(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uarea")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = uarea(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn worked_examples() {
    assert_eq!(stdout(&["act", "--n", "2", "t_hat", "Gamma[2,1]"]), "4/3 * pi^-1 * Gamma[1,0]\n");
    assert_eq!(stdout(&["act", "--n", "2", "--val", "t_hat", "--measure", "Gamma[2,1]"]), "4/3 * pi^-1 * Gamma[1,0]\n");
    assert_eq!(stdout(&["glob", "--n", "2", "B[3,1]"]), "mu[3,1]\n");
    assert_eq!(stdout(&["poly", "pk", "--k", "2"]), "t^2 - s\n");
    assert_eq!(stdout(&["centroid", "--n", "2", "N[1,0]"]), "true\n");
    assert_eq!(stdout(&["angular", "--n", "2", "Delta[2,1]"]), "Delta[2,1]\nangular: true\n");
}

#[test]
fn exit_codes() {
    assert_eq!(uarea(&["verify", "--n", "0"]).status.code(), Some(2));
    assert_eq!(uarea(&["verify", "--n", "2", "--filter", "no-such-check"]).status.code(), Some(2));
    assert_eq!(uarea(&["act", "--n", "2", "t_hat", "B[2,1]"]).status.code(), Some(2));
    assert_eq!(uarea(&["eval", "--n", "2", "mu[1,0] +"]).status.code(), Some(2));
    assert_eq!(uarea(&["poly", "pk"]).status.code(), Some(2));
    assert_eq!(uarea(&["verify", "--n", "2", "--filter", "kernel-lemma"]).status.code(), Some(0));
    assert_eq!(uarea(&["oracle", "t-table", "--n", "2", "--diff-against", "module"]).status.code(), Some(0));
}

#[test]
fn parse_errors_report_a_position() {
    let out = uarea(&["eval", "--n", "2", "t + )"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("position 4"), "{err}");
}

#[test]
fn verify_output_is_deterministic() {
    let args = ["verify", "--n", "3", "--format", "json"];
    let a = stdout(&args);
    let b = stdout(&args);
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 14);
}

#[test]
fn export_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    for format in ["json", "csv"] {
        let path = dir.path().join(format!("t.{format}"));
        let p = path.to_str().unwrap();
        stdout(&["export", "t-table", "--n", "3", "--format", format, "--out", p]);
        let written = std::fs::read_to_string(&path).unwrap();
        assert_eq!(written, stdout(&["export", "t-table", "--n", "3", "--format", format]));
        let parsed = match format {
            "json" => uarea::table::StructureTable::from_json(&written).unwrap(),
            _ => uarea::table::StructureTable::from_csv(3, uarea::table::Generator::THat, &written).unwrap(),
        };
        assert_eq!(parsed, uarea::table::StructureTable::compute(3, uarea::table::Generator::THat).unwrap());
    }
}

#[test]
fn oracle_table_matches_export() {
    assert_eq!(stdout(&["oracle", "t-table", "--n", "3"]), stdout(&["export", "t-table", "--n", "3"]));
}

#[test]
fn dims_csv() {
    let csv = stdout(&["export", "dims", "--n", "2", "--format", "csv"]);
    assert_eq!(csv, "k,dim_val,dim_area\n0,1,1\n1,1,2\n2,2,2\n3,1,1\n4,1,\n");
}

#[test]
fn cache_directory_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_uarea"))
            .args(["export", "s-table", "--n", "2"])
            .env("UAREA_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    assert!(first.status.success());
    assert!(dir.path().join("s_hat-n2.json").exists());
    let second = run();
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn unwritable_output_is_a_runtime_error() {
    let out = uarea(&["export", "dims", "--n", "2", "--out", "/nonexistent-dir/x.json"]);
    assert_eq!(out.status.code(), Some(1));
}
