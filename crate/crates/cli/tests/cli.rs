use std::path::PathBuf;
use std::process::{Command, Output};

fn kbsm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kbsm")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap().trim_end().to_string()
}

fn corpus(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "corpus", name].iter().collect();
    p.to_string_lossy().into_owned()
}

#[test]
fn bracket_samples() {
    let cases = [
        ("unknot.kd", "(-A^2-A^-2) * 1"),
        ("reversed_arrow.kd", "A^-6 * x"),
        ("kink.kd", "(A^5+A) * 1"),
        ("annulus_y2.kd", "(-A^2) * y + (-A^-2) * y' x"),
    ];
    for (file, want) in cases {
        let o = kbsm(&["bracket", &corpus(file)]);
        assert_eq!(o.status.code(), Some(0), "{file}");
        assert_eq!(stdout(&o), want, "{file}");
    }
}

#[test]
fn surface_override_changes_classification() {
    // Without the hole the y2 circle is the disk curve with two arrows, P_2.
    let o = kbsm(&["bracket", &corpus("annulus_y2.kd"), "--surface", "disk"]);
    assert_eq!(stdout(&o), "(A^4+1) * 1 + (-A^-2) * x^2");
    // The unknot's square runs through both pants holes.
    let o = kbsm(&["bracket", &corpus("unknot.kd"), "--surface", "pants"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("puncture"));
}

#[test]
fn malformed_file_reports_line() {
    let dir = std::env::temp_dir().join(format!("kbsm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.kd");
    std::fs::write(&path, "surface disk\ncomponent\n0 0\n1 zero\n").unwrap();
    let o = kbsm(&["bracket", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn reduce_examples() {
    let o = kbsm(&["reduce", "y' y", "--surface", "annulus"]);
    assert_eq!(stdout(&o), "(1-A^-4) * x + A^2 * y y'");
    assert_eq!(stdout(&kbsm(&["reduce", "y z t", "--surface", "pants"])), "y z t");
    assert_eq!(stdout(&kbsm(&["reduce", "y_2", "--surface", "annulus"])), "(-A^2) * y + (-A^-2) * y' x");
    // z is not a letter of the annulus
    assert_eq!(kbsm(&["reduce", "z", "--surface", "annulus"]).status.code(), Some(1));
    // the surface is mandatory
    assert_eq!(kbsm(&["reduce", "y"]).status.code(), Some(1));
}

#[test]
fn reduce_trace_goes_to_stderr() {
    let o = kbsm(&["reduce", "y_2", "--surface", "annulus", "--trace"]);
    assert_eq!(stdout(&o), "(-A^2) * y + (-A^-2) * y' x");
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.lines().any(|l| l.starts_with("RULE ")), "{err}");
}

#[test]
fn polynomial_queries() {
    assert_eq!(stdout(&kbsm(&["pn", "-1"])), "A^-6*x");
    assert_eq!(stdout(&kbsm(&["pn", "2"])), "(-A^-2)*x^2 + (A^4+1)");
    assert_eq!(stdout(&kbsm(&["pnk", "0", "1"])), "(-A^4-A^-4)*x");
    assert_eq!(kbsm(&["pnk", "3"]).status.code(), Some(1));
}

#[test]
fn verify_runs_and_rejects_zero_trials() {
    let o = kbsm(&["verify", "--surface", "disk", "--moves", "omega1", "--trials", "3", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.ends_with("result=OK")).count(), 6);
    assert!(out.lines().next().unwrap().starts_with("TRIAL 0 seed="));
    assert_eq!(out, stdout(&kbsm(&["verify", "--surface", "disk", "--moves", "omega1", "--trials", "3", "--seed", "1"])));
    assert_eq!(kbsm(&["verify", "--surface", "disk", "--trials", "0"]).status.code(), Some(1));
    assert_eq!(kbsm(&["verify", "--surface", "disk", "--moves", "omega9", "--trials", "1"]).status.code(), Some(1));
}

#[test]
fn random_output_is_a_valid_deterministic_diagram() {
    let a = kbsm(&["random", "--surface", "pants", "--crossings", "2", "--seed", "9"]);
    let b = kbsm(&["random", "--surface", "pants", "--crossings", "2", "--seed", "9"]);
    assert_eq!(a.stdout, b.stdout);
    let dir = std::env::temp_dir().join(format!("kbsm-cli-rand-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.kd");
    std::fs::write(&path, &a.stdout).unwrap();
    assert_eq!(kbsm(&["bracket", path.to_str().unwrap()]).status.code(), Some(0));
}
