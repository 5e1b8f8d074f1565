use std::path::Path;
use std::process::{Command, Output};

use sparse_kfold::io::parse_filtration;

fn sparsekfold(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sparsekfold"))
        .args(args)
        .env_remove("SPARSEKFOLD_SEED")
        .output()
        .expect("binary runs")
}

fn write_points(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn sparse_mode_on_four_points() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_points(dir.path(), "four.txt", "0\n1\n4\n5\n");
    let out = dir.path().join("f.txt");
    let o = sparsekfold(&[&input, "--k", "2", "--epsilon", "1", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let file = parse_filtration(&text).unwrap();
    assert!(file.simplices.len() >= 2);
    assert!(file.simplices.iter().any(|(_, l)| l == &vec![vec![0, 1]]));
    assert!(file.simplices.iter().any(|(_, l)| l == &vec![vec![2, 3]]));
    assert_eq!(file.perm, vec![0, 1, 3, 2]);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let pts: String = (0..15).map(|i| format!("{} {}\n", (i * 37 % 101) as f64 / 7.0, (i * i % 53) as f64 / 4.0)).collect();
    let input = write_points(dir.path(), "pts.txt", &pts);
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = sparsekfold(&[&input, "--k", "2", "--max-dim", "2", "--seed", "9", "--out", out.to_str().unwrap()]);
        assert!(o.status.success());
        std::fs::read(out).unwrap()
    };
    assert_eq!(run("a.txt"), run("b.txt"));
}

#[test]
fn verify_mode_passes() {
    let o = sparsekfold(&["--mode", "verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(String::from_utf8_lossy(&o.stdout).lines().filter(|l| l.ends_with(" ok")).count(), 25);
}

#[test]
fn exact_mode_over_the_guard_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let pts: String = (0..30).map(|i| format!("{i} {}\n", i * i)).collect();
    let input = write_points(dir.path(), "pts.txt", &pts);
    let o = sparsekfold(&[&input, "--mode", "exact", "--k", "4", "--limit-vertices", "1000"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("resource limit"));
}

#[test]
fn simplex_limit_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let pts: String = (0..30).map(|i| format!("{i} {}\n", i * i)).collect();
    let input = write_points(dir.path(), "pts.txt", &pts);
    let o = sparsekfold(&[&input, "--max-dim", "2", "--limit-simplices", "10"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_points(dir.path(), "dup.txt", "0 0\n1 0\n0 0\n");
    let o = sparsekfold(&[&input]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    let o = sparsekfold(&["/nonexistent/points.txt"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(sparsekfold(&["--bogus"]).status.code(), Some(1));
    assert_eq!(sparsekfold(&["--mode", "sparse"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let input = write_points(dir.path(), "p.txt", "0\n1\n");
    assert_eq!(sparsekfold(&[&input, "--epsilon", "2"]).status.code(), Some(1));
    assert_eq!(sparsekfold(&[&input, "--k", "0"]).status.code(), Some(1));
}

#[test]
fn seed_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_sparsekfold"))
        .args(["--mode", "verify", "--instances", "2"])
        .env("SPARSEKFOLD_SEED", "123")
        .output()
        .unwrap();
    assert!(o.status.success());
    let default = sparsekfold(&["--mode", "verify", "--instances", "2"]);
    assert_ne!(o.stdout, default.stdout);
}

#[test]
fn compare_and_persistence_modes() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_points(dir.path(), "p.txt", "0 0\n1 0\n0 1\n1 1\n0.5 0.4\n2 2\n");
    let o = sparsekfold(&[&input, "--mode", "compare", "--k", "2"]);
    assert!(o.status.success());
    let report = String::from_utf8_lossy(&o.stdout);
    assert!(report.contains("lower_bound 4 ok"));

    for which in ["sparse", "exact"] {
        let o = sparsekfold(&[&input, "--mode", "persistence", "--max-dim", "2", "--filtration", which]);
        assert!(o.status.success());
        let text = String::from_utf8_lossy(&o.stdout);
        assert!(text.lines().any(|l| l.starts_with("0 ") && l.ends_with(" inf")));
        assert!(text.lines().all(|l| l.split(' ').count() == 3));
    }
}
