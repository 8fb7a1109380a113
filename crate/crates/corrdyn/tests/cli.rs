//! End-to-end checks of the corrdyn binary: exit codes, config merging,
//! summaries, sidecars, and output determinism.

use std::path::Path;
use std::process::Command;

fn corrdyn() -> Command {
    Command::new(env!("CARGO_BIN_EXE_corrdyn"))
}

fn run_json(args: &[&str]) -> serde_json::Value {
    let out = corrdyn().args(args).output().expect("spawn corrdyn");
    assert!(
        out.status.success(),
        "command {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8(out.stdout).unwrap();
    let line = stdout.lines().last().expect("summary line");
    serde_json::from_str(line).expect("summary must be one JSON line")
}

#[test]
fn julia_at_zero_reports_circle_deviation() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("j.ppm");
    let summary = run_json(&[
        "julia", "--p", "5", "--q", "2", "--c", "0,0", "--px", "256", "--depth", "60", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(summary["command"], "julia");
    let dev = summary["metrics"]["circle_deviation_px"].as_f64().unwrap();
    assert!(dev <= 2.0, "circle deviation {dev} px");
    assert!(out.exists());
    assert!(Path::new(&format!("{}.meta", out.display())).exists());
    let meta = std::fs::read_to_string(format!("{}.meta", out.display())).unwrap();
    assert!(meta.contains("command = julia"));
    assert!(meta.contains("px = 256"));
}

#[test]
fn usage_errors_exit_2() {
    let out = corrdyn()
        .args(["julia", "--p", "2", "--q", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert_eq!(err.lines().count(), 1, "diagnostic must be a single line");
    assert!(err.contains("q must be ≥ 1"), "got: {err}");

    let out2 = corrdyn().args(["julia", "--bogus", "3"]).output().unwrap();
    assert_eq!(out2.status.code(), Some(2));
}

#[test]
fn computational_failure_exits_1() {
    // c = 10 admits no CIFS radius.
    let out = corrdyn()
        .args(["cifs", "--p", "5", "--q", "2", "--c", "10,0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no disk radius"));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "px = 64\ndepth = 30\n# comment line\n").unwrap();
    let out = dir.path().join("f.ppm");
    let summary = run_json(&[
        "filled",
        "--p",
        "3",
        "--q",
        "2",
        "--c",
        "0,0",
        "--config",
        cfg.to_str().unwrap(),
        "--px",
        "32",
        "--out",
        out.to_str().unwrap(),
    ]);
    // 32x32 wins over the config's 64: header P6\n32 32\n...
    let bytes = std::fs::read(&out).unwrap();
    assert!(bytes.starts_with(b"P6\n32 32\n255\n"));
    let meta = std::fs::read_to_string(format!("{}.meta", out.display())).unwrap();
    assert!(meta.contains("depth = 30"), "config depth must be recorded");
    assert_eq!(summary["metrics"]["unknown_pixels"], 0);
}

#[test]
fn unknown_config_key_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "pixels = 64\n").unwrap();
    let out = corrdyn()
        .args(["filled", "--p", "3", "--q", "2", "--config", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown config key"));
}

#[test]
fn yoccoz_disks_family_count() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("disks.csv");
    let summary = run_json(&[
        "yoccoz-disks", "--qmax", "8", "--extra", "1/16", "--variant", "mating", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(summary["metrics"]["disk_count"], 12);
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 13);
    assert!(csv.starts_with("p,q,center_re,center_im,radius\n"));
    assert!(!csv.contains('\r'), "LF endings required");
}

#[test]
fn minkowski_golden_ratio() {
    let summary = run_json(&["minkowski", "--cf", "[1;(1)]", "--bits", "128"]);
    let h = summary["metrics"]["h"].as_f64().unwrap();
    assert!((h - 2.0 / 3.0).abs() < 1e-12, "h = {h}");
    assert_eq!(summary["metrics"]["conjugacy_pass"], true);
}

#[test]
fn sturmian_word_output() {
    let summary = run_json(&["sturmian", "--p", "2", "--q", "5"]);
    assert_eq!(summary["metrics"]["word"], "00101");
    assert_eq!(summary["metrics"]["trace"], "10");
}

#[test]
fn yoccoz_verify_runs() {
    let summary = run_json(&["yoccoz-verify", "--a", "4.1,0", "--qmax", "8"]);
    assert_eq!(summary["metrics"]["no_repelling"], false);
    assert_eq!(summary["metrics"]["all_pass"], true);
}

#[test]
fn cifs_and_motion_emit_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cifs_out = dir.path().join("attractor.csv");
    let summary = run_json(&[
        "cifs", "--p", "5", "--q", "2", "--c", "0.05,0", "--out", cifs_out.to_str().unwrap(),
    ]);
    let s_star = summary["metrics"]["s_star"].as_f64().unwrap();
    assert!(s_star > 0.0 && s_star < 2.0);
    let csv = std::fs::read_to_string(&cifs_out).unwrap();
    assert!(csv.starts_with("gen,re,im\n"));
    let dim = std::fs::read_to_string(dir.path().join("attractor.dim.csv")).unwrap();
    assert!(dim.starts_with("beta_p,beta_q,c_re,c_im,rho,r,s_star\n"));

    let motion_out = dir.path().join("motion.csv");
    let summary2 = run_json(&[
        "motion", "--p", "3", "--q", "2", "--c-end", "0.01,0", "--steps", "4", "--points", "4",
        "--period-max", "3", "--out", motion_out.to_str().unwrap(),
    ]);
    assert!(summary2["metrics"]["tracks"].as_u64().unwrap() >= 1);
    let mcsv = std::fs::read_to_string(&motion_out).unwrap();
    assert!(mcsv.starts_with("seed_id,step,re,im,branch_id\n"));
    assert!(mcsv.lines().count() > 4);
}

#[test]
fn identical_configs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &Path, workers: &str| {
        vec![
            "limitset".to_string(),
            "--a".into(),
            "4.56,0.42".into(),
            "--px".into(),
            "96".into(),
            "--width".into(),
            "1.5".into(),
            "--depth".into(),
            "16".into(),
            "--workers".into(),
            workers.to_string(),
            "--out".into(),
            out.display().to_string(),
        ]
    };
    let a = dir.path().join("a.ppm");
    let b = dir.path().join("b.ppm");
    let c = dir.path().join("c.ppm");
    run_json(&args(&a, "1").iter().map(String::as_str).collect::<Vec<_>>());
    run_json(&args(&b, "1").iter().map(String::as_str).collect::<Vec<_>>());
    run_json(&args(&c, "4").iter().map(String::as_str).collect::<Vec<_>>());
    let (ba, bb, bc) = (
        std::fs::read(&a).unwrap(),
        std::fs::read(&b).unwrap(),
        std::fs::read(&c).unwrap(),
    );
    assert_eq!(ba, bb, "same config, same bytes");
    assert_eq!(ba, bc, "worker count must not change bytes");
}
