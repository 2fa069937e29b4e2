use std::process::{Command, Output};

fn skewbeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skewbeta"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn eval_documented_examples() {
    let cases: [(&[&str], &str); 3] = [
        (
            &[
                "eval", "--family", "bsn", "--lambda", "1", "--a", "1", "--b", "1", "--what", "pdf", "--at", "0",
            ],
            "0.398942280401\n",
        ),
        (
            &["eval", "--family", "sn", "--lambda", "1", "--what", "cdf", "--at", "0"],
            "0.25\n",
        ),
        (
            &[
                "eval", "--family", "bsn", "--lambda", "0", "--a", "1", "--b", "1", "--what", "quantile", "--at", "0.5",
            ],
            "0\n",
        ),
    ];
    for (args, expected) in cases {
        let out = skewbeta(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        assert_eq!(stdout(&out), expected, "{args:?}");
    }
}

#[test]
fn eval_negative_point() {
    // SN(0, 1, 2) at -1: 2 phi(-1) Phi(-2).
    let out = skewbeta(&["eval", "--family", "sn", "--lambda", "2", "--what", "pdf", "--at", "-1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: f64 = stdout(&out).trim().parse().unwrap();
    assert!((v - 0.011_009_731_820_8).abs() < 1e-12, "{v}");
}

#[test]
fn parameter_errors_exit_2() {
    let cases: [&[&str]; 6] = [
        &[
            "eval", "--family", "bsn", "--lambda", "1", "--a", "-1", "--b", "1", "--what", "pdf", "--at", "0",
        ],
        &[
            "eval", "--family", "sn", "--lambda", "1", "--a", "2", "--what", "pdf", "--at", "0",
        ],
        &["eval", "--family", "sn", "--what", "pdf", "--at", "0"],
        &[
            "eval", "--family", "sn", "--lambda", "1", "--what", "quantile", "--at", "1.5",
        ],
        &["grid", "--family", "sn", "--lambda", "1", "--from", "1", "--to", "0"],
        &["check", "everything"],
    ];
    for args in cases {
        let out = skewbeta(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn grid_csv_layout() {
    let out = skewbeta(&[
        "grid", "--family", "sn", "--lambda", "0", "--from", "-1", "--to", "1", "--points", "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "x,pdf,cdf\n-1,0.241970724519,0.158655253931\n0,0.398942280401,0.5\n1,0.241970724519,0.841344746069\n"
    );
}

#[test]
fn grid_json_lines_use_null_outside_finite_range() {
    let out = skewbeta(&[
        "grid", "--family", "beta", "--a", "0.5", "--b", "2", "--from", "0", "--to", "1", "--points", "2", "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).expect("json line"))
        .collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0]["pdf"].is_null());
    assert_eq!(lines[1]["cdf"], 1.0);
}

#[test]
fn sampling_is_seeded() {
    let args = [
        "sample", "--family", "bsn", "--lambda", "1", "--a", "2", "--b", "3", "--count", "50", "--seed", "9",
    ];
    let (a, b) = (skewbeta(&args), skewbeta(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 51);
    let other = skewbeta(&[
        "sample", "--family", "bsn", "--lambda", "1", "--a", "2", "--b", "3", "--count", "50", "--seed", "10",
    ]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn rejection_sampling_restrictions() {
    let run = |a: &str| {
        let line = format!("sample --family bsn --lambda 1 --a {a} --b 1 --count 20 --method rejection");
        skewbeta(&line.split_whitespace().collect::<Vec<_>>())
    };
    let ok = run("3");
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stderr).contains("acceptance rate"));
    assert_eq!(run("2.5").status.code(), Some(2));
}

#[test]
fn moments_json() {
    let out = skewbeta(&["moments", "--family", "sn", "--lambda", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let m: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(m["mean"].as_f64().unwrap().abs() < 1e-12);
    assert!((m["sd"].as_f64().unwrap() - 1.0).abs() < 1e-10);
    assert!((m["kurtosis"].as_f64().unwrap() - 3.0).abs() < 1e-8);
}

#[test]
fn table1_lists_every_row() {
    let out = skewbeta(&["table1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 51);
}

#[test]
fn config_file_overrides_and_rejects() {
    let dir = std::env::temp_dir().join(format!("skewbeta-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.conf");
    std::fs::write(&good, "# tighter\nabs_tol = 1e-13\nrel_tol = 1e-12\n").unwrap();
    let bad = dir.join("bad.conf");
    std::fs::write(&bad, "abs_tol = -1\n").unwrap();
    let base = [
        "eval", "--family", "bsn", "--lambda", "2", "--a", "2", "--b", "3", "--what", "cdf", "--at", "0.3",
    ];
    let with = |path: &std::path::Path| {
        let mut args = vec!["--config", path.to_str().unwrap()];
        args.extend(base);
        skewbeta(&args)
    };
    assert_eq!(with(&good).status.code(), Some(0));
    assert_eq!(with(&bad).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn check_reports_json() {
    let out = skewbeta(&["check", "moments", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(r["suite"], "moments");
    assert_eq!(r["seed"], 3);
    assert_eq!(r["pass"], true);
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}
