use std::path::Path;
use std::process::{Command, Output};

fn walkdens(args: &[&str]) -> Output {
    walkdens_with_config(args, None)
}

fn walkdens_with_config(args: &[&str], config: Option<&Path>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_walkdens"));
    c.args(args).env_remove("WALKDENS_CONFIG");
    if let Some(p) = config {
        c.env("WALKDENS_CONFIG", p);
    }
    c.output().expect("spawn walkdens")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows as (x_or_s, value, method, flags).
fn rows(o: &Output) -> Vec<(f64, f64, String, String)> {
    stdout(o)
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[3].to_string(), f[4].to_string())
        })
        .collect()
}

#[test]
fn density_p3_table() {
    let o = walkdens(&["density", "--n", "3", "--from", "0", "--to", "3", "--step", "0.05"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&o);
    assert_eq!(r.len(), 61);
    assert_eq!(stdout(&o).lines().next().unwrap(), "x_or_s,value,err,method,flags");
    let last = r.last().unwrap();
    assert_eq!(last.0, 3.0);
    assert!((last.1 - 0.2756644).abs() < 1e-7);
    let one = r.iter().find(|t| t.0 == 1.0).unwrap();
    assert!(one.1.is_infinite() && one.3.contains("singular_point"));
}

#[test]
fn density_p4_seam_uses_quadrature() {
    let o = walkdens(&["density", "--n", "4", "--from", "1.9", "--to", "2.1", "--step", "0.01"]);
    assert_eq!(o.status.code(), Some(0));
    for (x, _, method, flags) in rows(&o) {
        if (x - 2.0).abs() < 0.05 - 1e-9 {
            assert_eq!(method, "quadrature", "x={x}");
            assert!(flags.contains("singular_point"));
        } else if (x - 2.0).abs() > 0.05 + 1e-9 {
            assert_ne!(method, "quadrature", "x={x}");
        }
    }
}

#[test]
fn density_rayleigh_column() {
    let o = walkdens(&["density", "--n", "8", "--rayleigh", "--from", "0.5", "--to", "7.5", "--step", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("x_or_s,value,err,method,flags,rayleigh\n"));
    for l in text.lines().skip(1) {
        let f: Vec<f64> = l.split(',').filter_map(|v| v.parse().ok()).collect();
        // x, value, err, limit
        assert!((f[1] - f[3]).abs() < 0.02, "{l}");
    }
}

#[test]
fn density_usage_errors() {
    assert_eq!(walkdens(&["density", "--n", "3", "--from", "2", "--to", "1"]).status.code(), Some(2));
    assert_eq!(walkdens(&["density", "--n", "3", "--step", "-0.1"]).status.code(), Some(2));
    assert_eq!(walkdens(&["density", "--n", "1"]).status.code(), Some(2));
    assert_eq!(walkdens(&["density", "--n", "4", "--method", "agm"]).status.code(), Some(2));
    assert_eq!(walkdens(&["density"]).status.code(), Some(2));
}

#[test]
fn density_point_errors_do_not_abort() {
    // the p5 series covers only [0, 1]
    let o = walkdens(&["density", "--n", "5", "--method", "series", "--from", "0.5", "--to", "1.5", "--step", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&o);
    assert_eq!(r.len(), 3);
    assert!(r[0].1.is_finite());
    assert!(r[2].1.is_nan() && r[2].3.contains("error=domain"));
}

#[test]
fn exact_moments() {
    let o = walkdens(&["moment", "--n", "3", "--s", "2,4,6", "--method", "exact"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Vec<f64> = rows(&o).iter().map(|r| r.1).collect();
    assert_eq!(v, vec![3.0, 15.0, 93.0]);
}

#[test]
fn moment_near_pole_and_pole() {
    let o = walkdens(&["moment", "--n", "4", "--s", "-1.99"]);
    let r = rows(&o);
    assert!(r[0].1 > 1000.0);
    assert!(r[0].3.contains("near_pole"));
    let o = walkdens(&["moment", "--n", "4", "--s", "-2"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&o);
    assert!(r[0].3.contains("pole"));
}

#[test]
fn moment_methods_agree() {
    let o = walkdens(&["moment", "--n", "5", "--s", "-1", "--method", "functional_eq,quadrature"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(lines.len(), 3);
    let (a, ea): (f64, f64) = (lines[0][1].parse().unwrap(), lines[0][2].parse().unwrap());
    let (b, eb): (f64, f64) = (lines[1][1].parse().unwrap(), lines[1][2].parse().unwrap());
    assert!((a - b).abs() <= ea + eb, "{a} {b}");
    assert_eq!(lines[2][3], "max_discrepancy");
}

#[test]
fn csv_and_json_agree() {
    let args = ["moment", "--n", "4", "--s", "0.5,1,-3", "--method", "auto,hyper"];
    let csv = rows(&walkdens(&args));
    let mut json_args = args.to_vec();
    json_args.extend(["--format", "json"]);
    let j: serde_json::Value = serde_json::from_str(&stdout(&walkdens(&json_args))).unwrap();
    let arr = j.as_array().unwrap();
    assert_eq!(arr.len(), csv.len());
    for (rec, row) in arr.iter().zip(&csv) {
        let v = match &rec["value"] {
            serde_json::Value::Number(n) => n.as_f64().unwrap(),
            serde_json::Value::String(s) => s.parse().unwrap(),
            other => panic!("{other}"),
        };
        assert!(v == row.1 || (v.is_nan() && row.1.is_nan()));
        assert_eq!(rec["method"], row.2.as_str());
    }
}

#[test]
fn verify_appendix_and_mahler() {
    let o = walkdens(&["verify", "--suite", "appendix", "--level", "quick"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("name,criterion,target,residual,cmp,tol,status,note\n"));

    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("mahler.json");
    let o = walkdens(&["verify", "--suite", "mahler", "--report", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("CONJECTURAL-CONFIRMED-NUMERICALLY"));
    let j: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(j["passed"], true);
    assert!(j["checks"].as_array().unwrap().iter().any(|c| c["name"] == "w5_prime_eta_integral"));
}

#[test]
fn verify_closed_forms_has_gamma_check() {
    let o = walkdens(&["verify", "--suite", "closed_forms", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(j["checks"].as_array().unwrap().iter().any(|c| c["name"] == "r50_chowla_selberg"));
}

#[test]
fn verify_bad_suite_is_usage_error() {
    assert_eq!(walkdens(&["verify", "--suite", "everything"]).status.code(), Some(2));
}

#[test]
fn sample_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = walkdens(&["sample", "--n", "5", "--samples", "1000000", "--seed", "42", "-o", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn sample_two_steps_mass_below_one() {
    let o = walkdens(&["sample", "--n", "2", "--samples", "100000", "--bins", "20"]);
    let text = stdout(&o);
    let mut below = 0u64;
    for l in text.lines().skip(1) {
        let f: Vec<&str> = l.split(',').collect();
        if f[1].parse::<f64>().unwrap() <= 1.0 {
            below += f[2].parse::<u64>().unwrap();
        }
    }
    let p = below as f64 / 1e5;
    let sigma = (1.0 / 3.0 * 2.0 / 3.0 / 1e5f64).sqrt();
    assert!((p - 1.0 / 3.0).abs() < 3.0 * sigma, "{p}");
}

#[test]
fn sample_one_step() {
    let o = walkdens(&["sample", "--n", "1", "--samples", "20000", "--bins", "10"]);
    let text = stdout(&o);
    let counts: Vec<u64> = text.lines().skip(1).map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert_eq!(counts[9], 20000);
    assert_eq!(counts.iter().sum::<u64>(), 20000);
}

#[test]
fn sample_guard() {
    assert_eq!(walkdens(&["sample", "--n", "3", "--samples", "2000000000"]).status.code(), Some(2));
}

#[test]
fn config_file_and_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("walkdens.conf");
    std::fs::write(&cfg, "format = json\nstep = 0.5\n").unwrap();
    let o = walkdens_with_config(&["density", "--n", "3", "--from", "0", "--to", "1"], Some(&cfg));
    let j: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(j.as_array().unwrap().len(), 3);
    // flags win
    let o = walkdens_with_config(&["density", "--n", "3", "--from", "0", "--to", "1", "--format", "csv", "--step", "0.25"], Some(&cfg));
    assert_eq!(rows(&o).len(), 5);

    std::fs::write(&cfg, "colour = blue\n").unwrap();
    let o = walkdens_with_config(&["density", "--n", "3"], Some(&cfg));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_seam_width() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("seam.conf");
    std::fs::write(&cfg, "p4_seam_half_width = 0.005\n").unwrap();
    let o = walkdens_with_config(&["density", "--n", "4", "--from", "1.98", "--to", "2.02", "--step", "0.01"], Some(&cfg));
    let r = rows(&o);
    assert_eq!(r[0].2, "log_continuation");
    assert_eq!(r[2].2, "quadrature");
    assert_eq!(r[4].2, "closed_form");
}
