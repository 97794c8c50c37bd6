use std::io::Write;
use std::process::{Command, Output};

fn virmod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_virmod"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn act_examples() {
    let o = virmod(&["act", "Omega(2,3)", "d:1", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "2t - 6\n");
    assert_eq!(stdout(&virmod(&["act", "A(0,1)", "d:2", "x^0"])), "2 x^2\n");
    assert_eq!(stdout(&virmod(&["act", "Omega(1,1)", "c", "anything"])), "0\n");
    assert_eq!(stdout(&virmod(&["act", "A(1/2,1)", "c", "x"])), "0\n");
}

#[test]
fn act_h_basis_and_negative_inputs() {
    let o = virmod(&["act", "Omega(1,1)", "g:2", "t^2", "--h-basis", "--anchor", "-1"]);
    assert_eq!(stdout(&o), "t^3\nh_-1^3 + 3 h_-1^2 + h_-1^1\n");
    let o = virmod(&["act", "A(0,1)", "x:-1", "-x^-2"]);
    assert_eq!(stdout(&o), "-x^-3\n");
    assert_eq!(code(&virmod(&["act", "A(0,1)", "d:1", "x", "--h-basis"])), 2);
}

#[test]
fn act_output_round_trips() {
    let cases = [
        ("Omega(2,1/3)", "d:-2", "1/2 t^3 - t + 4"),
        ("A(1/2,-1)", "d:3", "x^-2 + 2 x^5"),
        ("F(shift,Omega(1,1))", "d:2", "v[1] (x) (t - 1) + 1/3 v[0] (x) (t^2)"),
        ("F(Mgamma(1/2),F(shift,A(0,1)))", "g:-1", "v[0] (x) (v[2] (x) (x^3 - x))"),
    ];
    for (module, op, elem) in cases {
        let first = stdout(&virmod(&["act", module, op, elem]));
        let printed = first.trim_end();
        let again = stdout(&virmod(&["act", module, "x:0", printed]));
        assert_eq!(again.trim_end(), printed, "{module} {op} {elem}");
    }
}

#[test]
fn act_errors_exit_2() {
    for args in [
        vec!["act", "Nope(1)", "d:1", "1"],
        vec!["act", "Omega(1,1)", "q:1", "1"],
        vec!["act", "Omega(1,1)", "d:x", "1"],
        vec!["act", "Omega(1,1)", "d:1", "x^2"],
        vec!["act", "Omega(0,1)", "d:1", "1"],
        vec!["act", "F(broken_fixture,Omega(1,1))", "d:1", "v[0] (x) (1)"],
        vec!["act"],
        vec!["frobnicate"],
    ] {
        let o = virmod(&args);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn verify_exit_codes() {
    let o = virmod(&["verify", "h", "--lambda", "1/2", "--beta", "0"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("PASS h Omega(1/2,0)"));

    let o = virmod(&["verify", "gm", "--module", "broken_fixture"]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("FAIL gm broken_fixture"));
    assert!(out.contains("[d̄_0, d̄_1] on v[0]"));

    assert_eq!(code(&virmod(&["verify", "nope"])), 2);
    assert_eq!(code(&virmod(&["verify", "h", "--lambda", "0"])), 2);
    assert_eq!(code(&virmod(&["verify", "h", "--lambda", "x"])), 2);
    assert_eq!(code(&virmod(&["verify", "h", "--module", "A(0,1)"])), 2);
    assert_eq!(code(&virmod(&["verify", "bracket", "--window", "0"])), 2);
    assert_eq!(code(&virmod(&["verify", "h", "--module", "Omega(1,1)", "--beta", "1"])), 2);
}

#[test]
fn verify_json_report() {
    let o = virmod(&["verify", "gm", "--module", "broken_fixture", "--json"]);
    assert_eq!(code(&o), 1);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let r = &doc[0];
    assert_eq!(r["suite"], "gm");
    assert_eq!(r["window"]["modes"], 4);
    let f = &r["failures"][0];
    for key in ["op", "lhs", "rhs", "witness"] {
        assert!(f[key].is_string(), "{key}");
    }

    let o = virmod(&["verify", "compat", "--module", "A(1/2,-1/3)", "--json", "--window", "2"]);
    assert_eq!(code(&o), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc[0]["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn verify_all_on_a_module_skips_inapplicable_suites() {
    let o = virmod(&["verify", "all", "--module", "A(0,1)", "--window", "2", "--dt-cap", "2"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("PASS bracket A(0,1)"));
    assert!(out.contains("SKIP h A(0,1)"));
}

#[test]
fn closure_examples() {
    let o = virmod(&["closure", "Omega(1,0)", "--seed", "t"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("PROPER SUBSPACE (dim "));
    assert!(stdout(&virmod(&["closure", "Omega(1,1)", "--seed", "1"])).starts_with("FULL WINDOW"));
    assert!(stdout(&virmod(&["closure", "F(Mgamma(2),Omega(1,2))"])).starts_with("PROPER SUBSPACE"));
    assert!(stdout(&virmod(&["closure", "F(Mgamma(1),Omega(1,2))"])).starts_with("FULL WINDOW from all"));

    let o = virmod(&["closure", "Omega(2,0)", "--seed", "t", "--basis", "--json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["verdict"], "proper");
    assert_eq!(doc["basis"].as_array().unwrap().len(), doc["window_dim"].as_u64().unwrap() as usize - 1);

    assert_eq!(code(&virmod(&["closure", "Omega(1,0)", "--seed", "0"])), 2);
    assert_eq!(code(&virmod(&["closure", "Omega(1,0)", "--seed", "t", "--window", "0"])), 2);
}

#[test]
fn weight_examples() {
    let o = virmod(&["weight", "Omega(3,2)"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("image A(0,-1)\n"));
    assert!(out.ends_with("matches A(0,-1)\n"));
    assert!(out.contains("d_2 w_1 = -1 w_3\n"));

    let out = stdout(&virmod(&["weight", "Omega(1,1)", "--window", "3"]));
    for m in -3..=3 {
        for n in -3..=3 {
            assert!(out.contains(&format!("d_{m} w_{n} = {n} w_{}\n", n + m)));
        }
    }

    assert_eq!(stdout(&virmod(&["weight", "Omega(1,1/2)"])), stdout(&virmod(&["weight", "Omega(7/3,1/2)"])));
    assert_ne!(stdout(&virmod(&["weight", "Omega(1,1/2)"])), stdout(&virmod(&["weight", "Omega(1,0)"])));

    let o = virmod(&["weight", "F(shift,Omega(2,1))", "--window", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).ends_with("matches F(shift,A(0,0))\n"));
    assert_eq!(code(&virmod(&["weight", "A(0,1)"])), 2);
}

#[test]
fn module_file_definitions() {
    let dir = std::env::temp_dir().join(format!("virmod-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("modules.json");
    let mut f = std::fs::File::create(&path).unwrap();
    write!(
        f,
        r#"{{
          "br_modules": [
            {{ "name": "jordan", "matrices": [[["0","0"],["0","1"]], [["0","0"],["1","0"]]] }},
            {{ "name": "bad", "matrices": [[["1","0"],["0","2"]], [["0","1"],["0","0"]]] }}
          ],
          "modules": [
            {{ "name": "om", "omega": {{ "lambda": "2", "beta": "1/2" }} }},
            {{ "name": "fj", "f": {{ "br": "jordan", "inner": "om" }} }}
          ]
        }}"#
    )
    .unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(stdout(&virmod(&["--module-file", p, "act", "om", "d:0", "t"])), "t^2\n");
    assert_eq!(code(&virmod(&["--module-file", p, "verify", "gm", "--module", "jordan"])), 0);
    assert_eq!(code(&virmod(&["--module-file", p, "verify", "gm", "--module", "bad"])), 1);
    assert_eq!(code(&virmod(&["--module-file", p, "verify", "bracket", "--module", "fj", "--window", "2"])), 0);
    assert_eq!(code(&virmod(&["--module-file", p, "act", "F(bad,om)", "d:1", "v[0] (x) (1)"])), 2);
    assert_eq!(code(&virmod(&["--module-file", "/nonexistent/m.json", "act", "om", "d:0", "t"])), 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn in_process_runner_matches_binary() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = virmod_cli::run_with(["virmod", "act", "Omega(2,3)", "d:1", "1"], &mut out, &mut err);
    assert_eq!(code, 0);
    assert_eq!(String::from_utf8(out).unwrap(), "2t - 6\n");
    let mut out = Vec::new();
    assert_eq!(virmod_cli::run_with(["virmod", "--help"], &mut out, &mut err), 0);
    assert!(String::from_utf8(out).unwrap().contains("verify"));
}
