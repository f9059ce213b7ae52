use std::process::{Command, Output};

use serde_json::Value;

fn modata(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modata"))
        .args(args)
        .env_remove("MODATA_MAX_ORDER")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json report")
}

#[test]
fn verify_builtins_exit_zero() {
    for m in ["su2:1", "trivial", "cyclic_odd:5"] {
        let o = modata(&["verify", "--model", m]);
        assert_eq!(code(&o), 0, "{m}: {}", stdout(&o));
    }
}

#[test]
fn corrupted_file_names_the_identity() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("corrupted.json");
    let o = modata(&["export", "--model", "su2:1"]);
    let mut file: Value = serde_json::from_slice(&o.stdout).unwrap();
    file["delta"][1] = Value::from("1/3");
    std::fs::write(&path, file.to_string()).unwrap();

    let o = modata(&["verify", path.to_str().unwrap(), "--json"]);
    assert_eq!(code(&o), 1);
    let rep = json(&o);
    assert_eq!(rep["pass"], false);
    let failed: Vec<&str> = rep["records"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["pass"] == false)
        .map(|r| r["check"].as_str().unwrap())
        .collect();
    assert!(failed.contains(&"STS = T^-1 S T^-1"), "{failed:?}");
    assert!(String::from_utf8_lossy(&o.stderr).contains("STS"));
}

#[test]
fn exported_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("su2_2.json");
    let o = modata(&["export", "--model", "su2:2"]);
    std::fs::write(&path, &o.stdout).unwrap();
    let o = modata(&["verify", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let again = modata(&["export", path.to_str().unwrap()]);
    let first: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    let second: Value = serde_json::from_slice(&again.stdout).unwrap();
    for key in ["S", "delta", "c", "c0", "labels"] {
        assert_eq!(first[key], second[key], "{key}");
    }
}

#[test]
fn file_takes_precedence_over_builtin_name() {
    let dir = tempfile::tempdir().unwrap();
    let o = modata(&["export", "--model", "su2:3"]);
    std::fs::write(dir.path().join("su2:1"), &o.stdout).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_modata"))
        .args(["verify", "--model", "su2:1", "--json"])
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let rep = json(&o);
    let shape = rep["records"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["check"] == "shape")
        .unwrap();
    assert_eq!(shape["params"], "rank=4");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["verify", "--model", "nope:3"],
        vec!["lambda", "--model", "su2:1", "--r", "x/3"],
        vec!["lambda", "--model", "su2:1", "--r", "1/0"],
        vec!["orbifold", "--model", "su2:1", "--order", "1"],
        vec!["verify"],
        vec!["frobnicate"],
    ] {
        let o = modata(&args);
        assert_eq!(code(&o), 2, "{args:?}");
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{not json").unwrap();
    assert_eq!(code(&modata(&["verify", path.to_str().unwrap()])), 2);
}

#[test]
fn order_cap_is_enforced() {
    let o = Command::new(env!("CARGO_BIN_EXE_modata"))
        .args(["verify", "--model", "su2:1"])
        .env("MODATA_MAX_ORDER", "10")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));
}

#[test]
fn non_coprime_l_is_skipped_with_notice() {
    let o = modata(&[
        "galois",
        "--model",
        "su2:2",
        "--l",
        "4",
        "--samples",
        "10",
        "--json",
    ]);
    assert_eq!(code(&o), 0);
    let rep = json(&o);
    let notes: Vec<&Value> = rep["records"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["check"] == "notice" && r["params"] == "l=4")
        .collect();
    assert_eq!(notes.len(), 1);
    assert!(notes[0]["witness"].as_str().unwrap().contains("gcd(4,16)"));
    assert!(!rep["records"]
        .as_array()
        .unwrap()
        .iter()
        .any(|r| r["suite"] == "galois" && r["check"] != "notice"));
}

#[test]
fn galois_example_passes() {
    let o = modata(&[
        "galois",
        "--model",
        "su2:1",
        "--l",
        "5,7,11",
        "--samples",
        "100",
        "--seed",
        "1",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn lambda_is_periodic_in_r() {
    let dump = |r: &str| {
        json(&modata(&["lambda", "--model", "su2:1", "--r", r, "--json"]))["matrix"].clone()
    };
    let base = dump("1/3");
    assert_eq!(dump("4/3"), base);
    assert_eq!(dump("7/3"), base);
}

#[test]
fn lambda_at_zero_prints_s() {
    let o = modata(&["lambda", "--model", "su2:1", "--r", "0", "--json"]);
    assert_eq!(code(&o), 0);
    let m = json(&o)["matrix"].clone();
    assert_eq!(m[0][0], m[0][1]);
    assert_eq!(m[0][0], m[1][0]);
    assert_ne!(m[1][1], m[0][0]);
    let o = modata(&[
        "lambda", "--model", "su2:2", "--r", "1/3", "--hat", "--approx", "6",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("Lambda-hat unitary"));
}

#[test]
fn orbifold_examples() {
    assert_eq!(
        code(&modata(&["orbifold", "--model", "su2:1", "--order", "2"])),
        0
    );
    assert_eq!(
        code(&modata(&["orbifold", "--model", "trivial", "--order", "3"])),
        0
    );
    let o = modata(&["orbifold", "--model", "su2:1", "--order", "15", "--json"]);
    assert_eq!(code(&o), 0);
    let rep = json(&o);
    let nested = rep["records"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["check"] == "S((l,g^n,0),(m,g^k,0)) = S_lm / N" && r["pass"] == true)
        .count();
    assert_eq!(nested, 2);
}

#[test]
fn reports_are_deterministic() {
    let runs: [&[&str]; 3] = [
        &[
            "galois",
            "--model",
            "su2:2",
            "--l",
            "3,5,7",
            "--samples",
            "30",
            "--seed",
            "9",
            "--json",
        ],
        &["orbifold", "--model", "su2:1", "--order", "3", "--json"],
        &["verify", "--model", "su2:3"],
    ];
    for args in runs {
        let a = modata(args);
        let b = modata(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn json_keys_are_sorted() {
    let rep = stdout(&modata(&["verify", "--model", "trivial", "--json"]));
    let top: Vec<&str> = rep
        .lines()
        .filter(|l| l.starts_with("  \""))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    let mut sorted = top.clone();
    sorted.sort();
    assert_eq!(top, sorted);
    assert!(top.contains(&"tool") && top.contains(&"records"));
}
