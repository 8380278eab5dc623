use serde_json::Value;

use super::run;

struct Output {
    code: u8,
    stdout: Vec<u8>,
    stderr: Vec<u8>,
}

fn psmetro(args: &[&str]) -> Output {
    let (mut stdout, mut stderr) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("psmetro").chain(args.iter().copied()), &mut stdout, &mut stderr);
    Output { code, stdout, stderr }
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = psmetro(&full);
    assert_eq!(o.code, 0, "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn three_level_point_near_optimum() {
    let j = json(&["three-level", "--lambda", "1", "--alpha", "0.785398", "--x", "1e-6"]);
    let r = &j["records"][0];
    assert!((num(&r["p_ps"]) - 0.5).abs() < 1e-6);
    assert!((num(&r["qfi"]) - 8.0).abs() < 1e-4);
    assert!((num(&r["xi"]) - 4.0).abs() < 1e-6);
    assert_eq!(j["command"], "three-level");
}

#[test]
fn three_level_alpha_zero_has_flat_qfi() {
    let j = json(&["three-level", "--lambda", "1", "--alpha", "0", "--x", "0.3"]);
    assert!((num(&j["records"][0]["qfi"]) - 4.0).abs() < 1e-12);
}

#[test]
fn phi_and_delta_theta_give_x() {
    let a = json(&["three-level", "--lambda", "2", "--alpha", "0.4", "--phi", "0.5", "--delta-theta", "0.1"]);
    let b = json(&["three-level", "--lambda", "2", "--alpha", "0.4", "--x", "0.3"]);
    assert!((num(&a["records"][0]["x"]) - 0.3).abs() < 1e-15);
    assert!((num(&a["records"][0]["qfi"]) - num(&b["records"][0]["qfi"])).abs() < 1e-9);
}

#[test]
fn flag_errors_exit_two() {
    for args in [
        &["three-level", "--alpha", "0.3", "--x", "0.1"][..],
        &["three-level", "--lambda", "1", "--alpha", "0.3"],
        &["three-level", "--lambda", "1", "--lambda-tilde", "1", "--alpha", "0.3", "--x", "0.1"],
        &["bound-check", "--dim", "1"],
        &["bound-check", "--dim", "9"],
        &["bound-check", "--dim", "3", "--trials", "0"],
        &["kd"],
        &["wva", "--entangled", "--n", "2"],
        &["three-level-sweep", "--lambda", "1", "--x-min", "1", "--x-max", "-1"],
    ] {
        assert_eq!(psmetro(args).code, 2, "{args:?}");
    }
}

#[test]
fn singular_limit_exits_one() {
    let o = psmetro(&["three-level", "--lambda", "1", "--alpha", "1.5707963267948966", "--x", "0.2", "--limit"]);
    assert_eq!(o.code, 1);
}

#[test]
fn dimension_cap_exits_one() {
    let o = psmetro(&["wva", "--entangled", "--n", "20", "--sub-dim", "2", "--lx", "1", "--ly", "-0.9"]);
    assert_eq!(o.code, 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));
}

#[test]
fn sweep_header_and_shape() {
    let o = psmetro(&[
        "three-level-sweep",
        "--lambda",
        "1",
        "--x-min",
        "1e-6",
        "--x-max",
        "1",
        "--x-steps",
        "5",
        "--alpha-steps",
        "4",
    ]);
    assert_eq!(o.code, 0);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,alpha,p_ps,qfi,xi,aw1_re,aw1_im,aw2_re,aw2_im,divergent"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 20);
    for r in rows.iter().filter(|r| r[0] == "1e-6") {
        assert!((r[4].parse::<f64>().unwrap() - 4.0).abs() < 1e-6);
    }
}

#[test]
fn bound_check_single_trial() {
    let o = psmetro(&["bound-check", "--dim", "2", "--trials", "1", "--seed", "7"]);
    assert_eq!(o.code, 0);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().ends_with(",ok"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("violations=0"));
}

#[test]
fn bound_check_is_deterministic_per_seed() {
    let a = psmetro(&["bound-check", "--dim", "3", "--trials", "50", "--seed", "9"]);
    let b = psmetro(&["bound-check", "--dim", "3", "--trials", "50", "--seed", "9"]);
    let c = psmetro(&["bound-check", "--dim", "3", "--trials", "50", "--seed", "10"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn json_round_trips_bit_exact() {
    let j = json(&["bound-check", "--dim", "5", "--trials", "20", "--seed", "3"]);
    let csv = stdout(&psmetro(&["bound-check", "--dim", "5", "--trials", "20", "--seed", "3"]));
    for (rec, line) in j["records"].as_array().unwrap().iter().zip(csv.lines().skip(1)) {
        let cells: Vec<&str> = line.split(',').collect();
        for (i, key) in ["p_ps", "qfi", "xi", "bound", "ratio"].iter().enumerate() {
            let from_csv: f64 = cells[3 + i].parse().unwrap();
            assert_eq!(num(&rec[*key]).to_bits(), from_csv.to_bits(), "{key}");
        }
    }
    assert_eq!(j["summary"]["violations"], 0);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("psmetro-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("t.csv");
    let o = psmetro(&["three-level", "--lambda", "1", "--alpha", "0", "--x", "0.3", "--out", path.to_str().unwrap()]);
    assert!(o.code == 0 && o.stdout.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("x,alpha,"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn kd_demos() {
    let j = json(&["kd", "--demo", "three-level", "--alpha", "1.0472"]);
    let find = |table: &str, row_value: f64, col: u64| {
        j["records"]
            .as_array()
            .unwrap()
            .iter()
            .find(|r| r["table"] == table && num(&r["eigenvalue"]) == row_value && r["col"] == col)
            .map(|r| num(&r["re"]))
            .unwrap()
    };
    assert!((find("kd", 1.0, 1) - 0.125).abs() < 1e-5);
    assert!((find("kd", 1.0, 2) - 0.375).abs() < 1e-5);
    assert!((find("wigner", 1.0, 0) - 0.25).abs() < 1e-9);
    assert!((find("wigner", 1.0, 1) - 0.0625).abs() < 1e-5);

    let j = json(&["kd", "--random", "--dim", "3", "--seed", "5"]);
    assert!(num(&j["summary"]["identity_max_residual"]) < 1e-10);

    let j = json(&["kd", "--demo", "commuting", "--dim", "4"]);
    assert_eq!(j["summary"]["classical"], true);
    assert!(num(&j["summary"]["modification_max_abs"]) < 1e-12);
}

#[test]
fn wva_demos() {
    let j = json(&["wva", "--entangled", "--n", "2", "--lx", "1", "--ly", "-0.9"]);
    let r = &j["records"][0];
    assert!((num(&r["weak_value"]) - 36.2).abs() < 1e-9);
    assert!((num(&r["prob"]) - 2.7624e-3).abs() < 1e-7);

    let j = json(&["wva", "--entangled", "--n", "2", "--lx", "1", "--ly", "-0.9", "--target-aw", "36.2"]);
    let roots = [num(&j["records"][0]["ly_root_minus"]), num(&j["records"][0]["ly_root_plus"])];
    assert!(roots[0] < roots[1]);
    assert!(roots.iter().any(|y| (y + 0.9).abs() < 1e-9));

    let j = json(&["wva", "--spin-half", "--theta", "0.6", "--phi", "0.1"]);
    assert!((num(&j["records"][0]["efficiency"]) - 1.0).abs() < 1e-10);
}

#[test]
fn identity_check_passes() {
    let j = json(&["identity-check", "--trials", "30", "--max-dim", "5", "--seed", "2"]);
    assert_eq!(j["summary"]["failures"], 0);
    assert_eq!(j["records"].as_array().unwrap().len(), 30);
}

#[test]
fn help_exits_zero_on_stdout() {
    let o = psmetro(&["--help"]);
    assert_eq!(o.code, 0);
    assert!(stdout(&o).contains("three-level-sweep"));
}

#[test]
fn violations_would_exit_one() {
    let o = psmetro(&["--tol", "-1", "bound-check", "--dim", "2", "--trials", "3"]);
    assert_eq!(o.code, 1);
    assert!(stdout(&o).contains("violation"));
}
