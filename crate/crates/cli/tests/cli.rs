use serde_json::Value;
use std::process::{Command, Output};

fn lpf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lpf")).args(args).env_remove("LPF_THREADS").output().expect("run lpf")
}

fn lines(o: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&o.stdout).lines().map(|l| serde_json::from_str(l).expect(l)).collect()
}

fn f(v: &Value, k: &str) -> f64 {
    v[k].as_f64().unwrap_or_else(|| panic!("{k} missing in {v}"))
}

#[test]
fn wp_at_half_period_shorthand() {
    let o = lpf(&["eval", "wp", "--lambda", "0.5,0", "--z", "0,0.5@basis", "--no-timestamp"]);
    assert!(o.status.success());
    let r = &lines(&o)[0];
    // −(λ+1)/3 at ω₂/2
    assert!((f(r, "value_re") + 0.5).abs() < 1e-10 && f(r, "value_im").abs() < 1e-10);
    assert_eq!(r["orbit_index"], 0);
}

#[test]
fn betti_far_point_is_bounded() {
    let o = lpf(&["eval", "betti", "--lambda", "0.3,0.2", "--xi", "5,5", "--no-timestamp"]);
    assert!(o.status.success());
    let r = &lines(&o)[0];
    assert!(f(r, "b1").abs() <= 42.0 && f(r, "b2").abs() <= 42.0);
    assert!(r["route"].as_str().unwrap().starts_with("-1,0"));
}

#[test]
fn abel_z_at_one() {
    let o = lpf(&["eval", "abel_z", "--lambda", "0.5,0", "--xi", "1,0", "--no-timestamp"]);
    let r = &lines(&o)[0];
    assert!((f(r, "b1").abs() - 0.5).abs() < 1e-10 && f(r, "b2").abs() < 1e-10);
}

#[test]
fn slit_points_need_a_side() {
    let o = lpf(&["eval", "abel_z", "--lambda", "0.3,0.2", "--xi", "-1,0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("on_slit_without_side"));
    let n = lpf(&["eval", "abel_z", "--lambda", "0.3,0.2", "--xi", "-1,0", "--side", "north", "--no-timestamp"]);
    let s = lpf(&["eval", "abel_z", "--lambda", "0.3,0.2", "--xi", "-1,0", "--side", "south", "--no-timestamp"]);
    assert!(n.status.success() && s.status.success());
    assert_ne!(lines(&n)[0]["value_re"], lines(&s)[0]["value_re"]);
}

#[test]
fn format_tuples() {
    let o = lpf(&["formats", "--no-timestamp"]);
    let t: Vec<String> = lines(&o).iter().map(|r| r["tuple"].as_str().unwrap().to_string()).collect();
    assert_eq!(t, ["(7,9,1,4,144503,2)", "(9,9,1,6,144503,4)", "(17,9,6,10,114565235503,8)"]);
    let p = lpf(&["formats", "--which", "phi", "--no-timestamp"]);
    assert_eq!(lines(&p)[0]["L"], "114565235503");
}

#[test]
fn zero_bound_exceeds_stated_constant() {
    let o = lpf(&["zero-bound", "--T", "20", "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(1));
    let r = &lines(&o)[0];
    assert_eq!(r["within_stated"], false);
    assert!((f(r, "ratio_to_stated") / 1e5 - 1.0).abs() < 1e-4);
    assert_eq!(lpf(&["zero-bound", "--T", "10"]).status.code(), Some(2));
}

#[test]
fn monodromy_words() {
    let o = lpf(&["monodromy", "--word", "g1 g1", "--no-timestamp"]);
    assert!(o.status.success());
    assert_eq!(lines(&o)[0]["element"], "(1,(0,0))");
    let o = lpf(&["monodromy", "--word", "g2", "--no-timestamp"]);
    assert_eq!(lines(&o)[0]["element"], "(-1,(1,0))");
    assert_eq!(lpf(&["monodromy", "--word", "g7"]).status.code(), Some(2));
}

#[test]
fn numeric_monodromy_flips_the_sheet() {
    let o = lpf(&["monodromy", "--lambda", "0.3,0.2", "--puncture", "lambda", "--no-timestamp"]);
    assert!(o.status.success());
    let r = &lines(&o)[0];
    assert_eq!(r["sign"], -1);
    assert!(f(r, "residual") < 1e-6);
}

#[test]
fn verify_legendre_passes() {
    let o = lpf(&["verify", "legendre", "--samples", "20", "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0));
    let v = lines(&o);
    assert_eq!(v.len(), 21);
    let s = v.last().unwrap();
    assert_eq!(s["type"], "summary");
    assert_eq!(s["passed"], true);
    let max = v[..20].iter().map(|r| f(r, "value")).fold(f64::NEG_INFINITY, f64::max);
    assert_eq!(f(s, "max_value"), max);
}

#[test]
fn verify_sweeps_pass() {
    for (suite, n) in [("betti42", "100"), ("imL384", "40"), ("halfperiods", "10"), ("north_south", "2")] {
        let o = lpf(&["verify", suite, "--samples", n, "--no-timestamp"]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn reports_are_deterministic() {
    let a = lpf(&["verify", "imL384", "--samples", "40", "--seed", "5", "--no-timestamp", "--threads", "1"]);
    let b = lpf(&["verify", "imL384", "--samples", "40", "--seed", "5", "--no-timestamp", "--threads", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = lpf(&["verify", "imL384", "--samples", "40", "--seed", "6", "--no-timestamp"]);
    assert_ne!(a.stdout, c.stdout);
    // with timestamps the summary carries them
    let t = lpf(&["verify", "legendre", "--samples", "2"]);
    let s = lines(&t).pop().unwrap();
    assert!(s.get("timestamp").is_some() && s.get("wall_time_s").is_some());
}

#[test]
fn config_file_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# small run\nseed = 3\nsamples = 4\noutput_format = csv\nthreads = 1\n").unwrap();
    let out = dir.path().join("report.csv");
    let o = lpf(&["verify", "halfperiods", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--no-timestamp"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 5);
    assert!(rows[0].starts_with("type,suite,index,lambda_re,lambda_im"));
    // the summary goes to stderr in CSV mode
    assert!(String::from_utf8_lossy(&o.stderr).contains("\"suite\":\"halfperiods\""));

    std::fs::write(&cfg, "tol = 0.5\n").unwrap();
    assert_eq!(lpf(&["formats", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(lpf(&["formats", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn usage_errors() {
    assert_eq!(lpf(&["eval", "wp", "--lambda", "x,0", "--z", "1,1"]).status.code(), Some(2));
    assert_eq!(lpf(&["eval", "wp", "--lambda", "0.3,0", "--xi", "1,1"]).status.code(), Some(2));
    assert_eq!(lpf(&["eval", "wp", "--lambda", "0,0", "--z", "1,1"]).status.code(), Some(2));
    assert_eq!(lpf(&["verify", "nope"]).status.code(), Some(2));
    assert_eq!(lpf(&["verify", "legendre", "--samples", "0"]).status.code(), Some(2));
}
