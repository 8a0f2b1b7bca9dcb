use std::process::{Command, Output};

fn k3moon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3moon"))
        .args(args)
        .env_remove("K3MOON_DATA")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn symt_rational_two_a() {
    let o = k3moon(&["symt", "--class", "2A", "--terms", "8", "--rational"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("Phi_2(t)^2"), "{s}");
    assert!(s.contains("7    -16"), "{s}");
}

#[test]
fn json_cells_parse_back() {
    let o = k3moon(&["symt", "--class", "11AB", "--terms", "10", "--rational", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v["blocks"][1]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 10);
    for r in rows {
        let cell = r[1].as_str().unwrap();
        let x = k3moon::exactcore::parse_q(cell).unwrap();
        assert_eq!(k3moon::exactcore::fmt_q(&x), cell);
    }
}

#[test]
fn output_is_deterministic() {
    let a = k3moon(&["n4-decompose", "--terms", "4", "--format", "csv"]);
    let b = k3moon(&["n4-decompose", "--terms", "4", "--format", "csv"]);
    assert_eq!(a.stdout, b.stdout);
    let s = stdout(&a);
    assert!(s.contains("0,-2,1,0,1,0,1,3,2,6,11,13,24,43"), "{s}");
}

#[test]
fn lattice_check_reports_factors() {
    let o = k3moon(&["lattice-check"]);
    let s = stdout(&o);
    assert!(s.contains("2 4 24 40320"));
    assert!(s.contains("PASS K = N"));
    // the Conway lattice verdict is red against the shipped table
    assert!(s.contains("FAIL [N : K''] = 2"));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn m23_table_text_rows() {
    let o = k3moon(&["m23-table", "--t-order", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let row4: Vec<&str> = s.lines().find(|l| l.trim_start().starts_with("4 ")).unwrap().split_whitespace().collect();
    assert_eq!(row4[1..], ["2", "-2", "-2", "-2", "0", "2", "0", "0", "2", "0", "0", "1", "1", "1", "1", "0", "-2"]);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(k3moon(&["bogus"]).status.code(), Some(2));
    assert_eq!(k3moon(&["symt", "--terms", "x"]).status.code(), Some(2));
    assert_eq!(k3moon(&["symt", "--class", "9Z"]).status.code(), Some(2));
    assert_eq!(k3moon(&["ellgenus", "--q-order", "0"]).status.code(), Some(2));
}

#[test]
fn missing_data_exits_3() {
    let o = k3moon(&["lattice-check", "--data-dir", "/nonexistent/k3moon"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn data_dir_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_k3moon"))
        .args(["audit-integrality", "--terms", "4"])
        .env("K3MOON_DATA", "/nonexistent/k3moon")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn audit_flags_eleven() {
    let o = k3moon(&["audit-integrality", "--terms", "5", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("11A,t^4: -2/3"));
}
