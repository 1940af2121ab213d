use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_certjulia"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn listing(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    v.sort();
    v
}

#[test]
fn bad_flag_exits_one_without_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["render", "--poly", "-2,0,1", "-m", "3", "--out", "k.cells", "--colour", "red"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown flag `--colour`"));
    assert!(listing(dir.path()).is_empty());
}

#[test]
fn malformed_polynomial_lists_every_problem() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["render", "--poly", "1,q,1", "-m", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("--poly"), "{err}");
    assert!(err.contains("-m must lie"), "{err}");
    assert!(err.contains("requires --out"), "{err}");
    assert!(listing(dir.path()).is_empty());
}

#[test]
fn certified_render_writes_cells_and_bitmap() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["render", "--poly", "-2,0,1", "-m", "2", "--out", "k.cells", "--bitmap", "k.raw"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(listing(dir.path()), ["k.cells", "k.raw", "k.raw.txt"]);
    let cells = fs::read_to_string(dir.path().join("k.cells")).unwrap();
    let mut lines = cells.lines();
    assert_eq!(lines.next().unwrap(), "depth=6 frame=-4,4,-4,4 poly=-2,0,1");
    assert!(lines.next().unwrap().contains("status=certified"));
    let n = lines.count();
    let raw = fs::read(dir.path().join("k.raw")).unwrap();
    assert_eq!(raw.len(), 512 * 512);
    assert_eq!(raw.iter().filter(|&&b| b == 255).count(), n);
    let side = fs::read_to_string(dir.path().join("k.raw.txt")).unwrap();
    assert!(side.starts_with("width=512 height=512 depth=6"));
}

#[test]
fn exhausted_render_writes_only_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["render", "--poly", "0,0,1", "-m", "2", "--max-k", "3", "--max-period", "2", "--out", "z.cells", "--bitmap", "z.raw"],
    );
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(listing(dir.path()), ["z.cells.diag"]);
    let diag = fs::read_to_string(dir.path().join("z.cells.diag")).unwrap();
    assert!(diag.contains("status=budget-exhausted"));
    assert!(diag.contains("gap trend"));
}

#[test]
fn unwritable_output_leaves_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["escape", "--poly", "0,0,1", "--out", "missing/dir/e.txt"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(listing(dir.path()).is_empty());
}

#[test]
fn text_commands_print_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["escape", "--poly", "-2,0,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("b=4\n"));

    let out = run(dir.path(), &["points", "--poly", "0,0,1", "--max-period", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    assert!(text.contains("root_counts=2,4"));
    assert_eq!(text.lines().filter(|l| l.contains(" repelling ")).count(), 3);
    assert_eq!(text.lines().filter(|l| l.contains(" attracting ")).count(), 1);

    let out = run(dir.path(), &["siegel-estimate", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let q: Vec<String> = String::from_utf8_lossy(&out.stdout)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(' ').nth(1).unwrap().to_string())
        .collect();
    assert_eq!(q, ["1", "2", "3", "5"]);
    assert!(listing(dir.path()).is_empty());
}

#[test]
fn siegel_render_marks_conditional_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["siegel-render", "--rho", "0.25", "-m", "1", "--max-k", "3", "--out", "s.cells"],
    );
    assert_eq!(out.status.code(), Some(2));
    let diag = fs::read_to_string(dir.path().join("s.cells.diag")).unwrap();
    assert!(diag.contains("conditional_on_rho=1*2^-2"));
}

#[test]
fn worker_count_does_not_change_files() {
    let dir = tempfile::tempdir().unwrap();
    for w in ["1", "3"] {
        let name = format!("k{w}.cells");
        let out = run(dir.path(), &["render", "--poly", "0,-3,0,1", "-m", "2", "--out", &name, "--workers", w]);
        assert_eq!(out.status.code(), Some(0));
    }
    let a = fs::read(dir.path().join("k1.cells")).unwrap();
    let b = fs::read(dir.path().join("k3.cells")).unwrap();
    assert_eq!(a, b);
}
