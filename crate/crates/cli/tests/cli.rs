use std::process::{Command, Output};

use serde_json::Value;

fn dptm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dptm"))
        .args(args)
        .env_remove("DPTM_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn exact_amplitude_damping() {
    let v = json(&dptm(&[
        "exact",
        "--channel",
        "model=amplitude_damping,p=0.25",
        "--report",
    ]));
    let g = &v["gamma"];
    assert!((g[1][1].as_f64().unwrap() - 0.75f64.sqrt()).abs() < 1e-12);
    assert!((g[3][0].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert_eq!(v["channel"]["model"], "amplitude_damping");
    assert!(v["report"]["min_choi_eigenvalue"].as_f64().unwrap() > -1e-12);
}

#[test]
fn exact_correlated_depolarizing_is_diagonal() {
    let v = json(&dptm(&[
        "exact",
        "--channel",
        "model=correlated_depolarizing,p=0.25,mu=0.75",
    ]));
    let g = v["gamma"].as_array().unwrap();
    assert_eq!(g.len(), 16);
    assert!((g[6][6].as_f64().unwrap() - 0.703125).abs() < 1e-12);
    for (i, row) in g.iter().enumerate() {
        for (j, x) in row.as_array().unwrap().iter().enumerate() {
            if i != j {
                assert!(x.as_f64().unwrap().abs() < 1e-12);
            }
        }
    }
}

#[test]
fn exact_identity_from_spec_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("id.json");
    std::fs::write(&path, r#"{"model": "identity", "params": {"n": 2}}"#).unwrap();
    let v = json(&dptm(&["exact", "--channel", path.to_str().unwrap()]));
    for (i, row) in v["gamma"].as_array().unwrap().iter().enumerate() {
        for (j, x) in row.as_array().unwrap().iter().enumerate() {
            let expected = if i == j { 1.0 } else { 0.0 };
            assert!((x.as_f64().unwrap() - expected).abs() < 1e-12);
        }
    }
}

#[test]
fn malformed_spec_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{not json").unwrap();
    let out = dptm(&["exact", "--channel", path.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    let out = dptm(&["exact", "--channel", "model=bit_flip,p=2"]);
    assert!(!out.status.success());
}

#[test]
fn tomo_amplitude_damping_counts() {
    let v = json(&dptm(&[
        "tomo",
        "--channel",
        "model=amplitude_damping,p=0.25",
        "--entries",
        "1,1;2,2;3,0;3,3",
        "--prior",
        "cptp",
        "--known",
        "1,0=0;2,0=0",
        "--shots",
        "512",
    ]));
    let cmp = &v["comparison"];
    assert_eq!(cmp["dptm_configurations"], 4);
    assert_eq!(cmp["sqpt_configurations"], 8);
    let rows = cmp["rows"].as_array().unwrap();
    let keys: Vec<(u64, u64)> = rows
        .iter()
        .map(|r| (r["i"].as_u64().unwrap(), r["j"].as_u64().unwrap()))
        .collect();
    assert_eq!(keys, vec![(1, 1), (2, 2), (3, 0), (3, 3)]);
    assert_eq!(v["results"].as_array().unwrap().len(), 2);
}

#[test]
fn tomo_unital_prior_uses_two_configurations() {
    let v = json(&dptm(&[
        "tomo",
        "--channel",
        "model=correlated_depolarizing,p=0.25,mu=0.75",
        "--protocol",
        "dptm",
        "--entries",
        "4,4;6,6",
        "--prior",
        "unital",
    ]));
    let result = &v["results"][0];
    assert_eq!(result["configuration_count"], 2);
    assert!(v.get("comparison").is_none());
}

#[test]
fn tomo_exact_matches_analytic() {
    let v = json(&dptm(&[
        "tomo",
        "--channel",
        "model=depolarizing,p=0.3,n=2",
        "--shots",
        "exact",
    ]));
    for row in v["comparison"]["rows"].as_array().unwrap() {
        assert!(row["dptm_deviation"].as_f64().unwrap() < 1e-10);
        assert!(row["sqpt_deviation"].as_f64().unwrap() < 1e-10);
    }
}

#[test]
fn tomo_is_reproducible_and_seed_env_is_a_fallback() {
    let args = [
        "tomo",
        "--channel",
        "model=amplitude_damping,p=0.4",
        "--shots",
        "300",
        "--seed",
        "11",
    ];
    let a = dptm(&args).stdout;
    let b = dptm(&args).stdout;
    assert_eq!(a, b);

    let base = [
        "tomo",
        "--channel",
        "model=amplitude_damping,p=0.4",
        "--shots",
        "300",
    ];
    let from_env = Command::new(env!("CARGO_BIN_EXE_dptm"))
        .args(base)
        .env("DPTM_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(from_env.stdout, a);
    let flag_wins = Command::new(env!("CARGO_BIN_EXE_dptm"))
        .args(args)
        .env("DPTM_SEED", "12")
        .output()
        .unwrap();
    assert_eq!(flag_wins.stdout, a);
}

#[test]
fn tomo_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let out = dptm(&[
        "tomo",
        "--channel",
        "model=phase_flip,p=0.1",
        "--protocol",
        "sqpt",
        "--entries",
        "3,3;1,1",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "i,j,gamma_hat,std_error,n_configs_used");
    assert!(lines[1].starts_with("1,1,"));
    assert!(lines[2].starts_with("3,3,"));
}

#[test]
fn tomo_rejects_bad_arguments() {
    for args in [
        ["--entries", "4,0"],
        ["--shots", "1"],
        ["--prior", "sometimes"],
    ] {
        let mut full = vec!["tomo", "--channel", "model=bit_flip,p=0.1"];
        full.extend(args);
        assert!(!dptm(&full).status.success(), "{args:?}");
    }
}

#[test]
fn cost_examples() {
    let v = json(&dptm(&["cost", "--n", "3", "--protocol", "sqpt"]));
    assert_eq!(v["protocols"][0]["min"], 8);
    assert_eq!(v["protocols"][0]["max"], 27);

    let v = json(&dptm(&["cost", "--n", "1"]));
    let full = &v["full_plan"];
    assert_eq!(
        [
            &full["general"],
            &full["cptp"],
            &full["unital"],
            &full["pauli"]
        ],
        [16, 12, 9, 3]
    );

    let v = json(&dptm(&[
        "cost",
        "--n",
        "1",
        "--protocol",
        "dptm",
        "--entries",
        "1,0",
    ]));
    assert_eq!(v["entries"][0]["configurations"], 1);

    let v = json(&dptm(&["cost", "--n", "12"]));
    assert_eq!(v["protocols"][1]["max"], 531441);
    assert!(!dptm(&["cost", "--n", "0"]).status.success());
    assert!(!dptm(&["cost", "--n", "40"]).status.success());
}

#[test]
fn cost_table() {
    let v = json(&dptm(&["cost", "--table"]));
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 8);
    for (k, row) in rows.iter().enumerate() {
        let n = k as u32 + 1;
        assert_eq!(row["full_tomography"].as_u64().unwrap(), 16u64.pow(n));
        assert_eq!(row["sqpt_min"].as_u64().unwrap(), 2u64.pow(n));
        assert_eq!(row["sqpt_max"].as_u64().unwrap(), 3u64.pow(n));
        assert_eq!(row["dptm_max"], 2);
    }
}

#[test]
fn repro_studies_pass_with_default_seed() {
    let v = json(&dptm(&["repro", "amp-damp"]));
    assert_eq!(v["pass"], true);
    assert_eq!(v["configurations"]["dptm"], 4);
    assert_eq!(v["configurations"]["sqpt"], 8);
    let row30 = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["i"] == 3 && r["j"] == 0)
        .unwrap();
    assert!((row30["analytic"].as_f64().unwrap() - 0.25).abs() < 1e-12);

    let v = json(&dptm(&["repro", "corr-depol"]));
    assert_eq!(v["pass"], true);
    assert_eq!(v["configurations"]["sqpt"], 15);
    let p = &v["parameters"]["dptm"];
    assert!((p["mu"].as_f64().unwrap() - 0.75).abs() < 4.0 * p["mu_std_error"].as_f64().unwrap());
}

#[test]
fn repro_failure_exits_nonzero_with_report() {
    let out = dptm(&["repro", "corr-depol", "--gate", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL"));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], false);
}
