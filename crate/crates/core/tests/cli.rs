use std::path::Path;
use std::process::{Command, Output};

use spedac::fixtures::seven_vertex;
use spedac::io::render_instance;

fn spedac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spedac")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_seven_vertex(dir: &Path) -> String {
    let path = dir.join("seven_vertex.spedac");
    std::fs::write(&path, render_instance(&seven_vertex(10))).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn solve_seven_vertex_with_each_method() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_seven_vertex(dir.path());
    for method in ["bb", "heur", "brute"] {
        let out = spedac(&["solve", &file, "--method", method, "--clock", "off"]);
        assert!(out.status.success(), "{method}");
        let text = stdout(&out);
        assert!(text.contains("objective: 7\n"), "{text}");
        assert!(text.contains("path: 0,1,3,4,6\n"), "{text}");
    }
}

#[test]
fn solve_writes_a_feasible_assignment() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_seven_vertex(dir.path());
    let point = dir.path().join("point.txt");
    let out = spedac(&["solve", &file, "--assignment-out", point.to_str().unwrap()]);
    assert!(out.status.success());
    let out = spedac(&["validate", &file, "--assignment", point.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("objective: 7\n"));
}

#[test]
fn validate_reports_path_objective_and_rejects_bad_paths() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_seven_vertex(dir.path());
    let ok = spedac(&["validate", &file, "--path", "0,2,1,3,6"]);
    assert!(ok.status.success());
    assert!(stdout(&ok).contains("= 15)"), "{}", stdout(&ok));
    assert_eq!(spedac(&["validate", &file, "--path", "0,3,6"]).status.code(), Some(2));
}

#[test]
fn malformed_instance_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.spedac");
    std::fs::write(&path, "SPEDAC 1\n2 1 0 0 1\n0 0 5\n").unwrap();
    let out = spedac(&["solve", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("self-loop"));
}

#[test]
fn missing_file_exits_with_one() {
    assert_eq!(spedac(&["export", "/nonexistent/instance.spedac"]).status.code(), Some(1));
}

#[test]
fn zero_time_limit_without_incumbent_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_seven_vertex(dir.path());
    let out = spedac(&["solve", &file, "--time-limit", "0"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("status: time_limit"));
}

#[test]
fn generate_then_bench() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = spedac(&[
        "gen-random",
        "--n",
        "8",
        "--density",
        "0.3",
        "--conflict-density",
        "0.01",
        "--penalty",
        "1-20",
        "--replicates",
        "2",
        "--out-dir",
        d,
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 2);
    let csv = dir.path().join("report.csv");
    let out = spedac(&["bench", d, "--clock", "off", "-o", csv.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(csv).unwrap();
    assert!(text.starts_with(
        "# spedac-bench schema v1\nkind,set,method,instance,status,LB,UB,Sec best,Sec tot,Opt gap %,count\n"
    ));
}

#[test]
fn profile_drives_generation() {
    let dir = tempfile::tempdir().unwrap();
    let profile = dir.path().join("sw.profile");
    std::fs::write(&profile, "family=smallworld\nn=10\nk=0.3\nbeta=0.5\nr=0.01\npenalty=1-20\nweights=1-100\nseed=4\n")
        .unwrap();
    let out =
        spedac(&["gen-smallworld", "--profile", profile.to_str().unwrap(), "--out-dir", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).trim_end().ends_with("smallworld_n010_d0.3_r0.01_p1-20_s4.spedac"), "{}", stdout(&out));
}

#[test]
fn gen_without_required_flags_exits_with_two() {
    assert_eq!(spedac(&["gen-random", "--n", "8"]).status.code(), Some(2));
}

#[test]
fn export_omit_mode_warns_in_header() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_seven_vertex(dir.path());
    let text = stdout(&spedac(&["export", &file, "--sec", "omit"]));
    assert!(text.contains("sec_mode: omit"));
    assert!(!text.contains("u_1"));
}
