use std::fs;
use std::path::Path;
use std::process::Command;

fn gkbo() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gkbo"))
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

const SMALL: &str = r#"
[dynamics]
sigma_f = 3.0

[experiment]
dimension = 3
n = 30
max_iter = 80
repetitions = 3

[sweep]
strategy = ["random", "weighted"]
sigma_f = [2, 4]
"#;

fn lines(path: &Path) -> usize {
    fs::read_to_string(path).unwrap().lines().count()
}

#[test]
fn sweep_writes_tables_and_plots() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "small.toml", SMALL);
    let out = tmp.path().join("out");
    let status = gkbo()
        .args(["sweep", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .args(["--threads", "2", "--trace-every", "20"])
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(lines(&out.join("runs.csv")), 1 + 4 * 3);
    assert_eq!(lines(&out.join("summary.csv")), 1 + 4);
    assert!(out.join("success_vs_sigma_f.svg").exists());
    assert!(out.join("iterations_vs_sigma_f.dat").exists());
    assert_eq!(fs::read_dir(out.join("traces")).unwrap().count(), 12);

    // Re-render from the summary alone.
    for f in ["success_vs_sigma_f.svg", "iterations_vs_sigma_f.svg"] {
        fs::remove_file(out.join(f)).unwrap();
    }
    let status = gkbo().args(["plot", "--out"]).arg(&out).status().unwrap();
    assert!(status.success());
    assert!(out.join("success_vs_sigma_f.svg").exists());
}

#[test]
fn run_ignores_sweep_axes_and_honours_seed() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(tmp.path(), "small.toml", SMALL);
    let run = |seed: &str, out: &str| {
        let out = tmp.path().join(out);
        let status = gkbo()
            .args(["run", "--no-plots", "--seed", seed, "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success());
        fs::read_to_string(out.join("runs.csv")).unwrap()
    };
    let a = run("5", "a");
    let b = run("5", "b");
    let c = run("6", "c");
    assert_eq!(a.lines().count(), 1 + 3);
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert!(a.lines().nth(1).unwrap().starts_with("0,0,5,"));
}

#[test]
fn configuration_errors_exit_nonzero() {
    let tmp = tempfile::tempdir().unwrap();
    for (name, text) in [
        ("unknown.toml", "[dynamics]\nsigma = 4.0\n"),
        ("section.toml", "[dynamic]\nsigma_f = 4.0\n"),
        ("objective.toml", "[experiment]\nobjective = \"sphere\"\n"),
        ("axis.toml", "[sweep]\nnot_a_key = [1, 2]\n"),
        ("syntax.toml", "[dynamics\n"),
    ] {
        let cfg = write(tmp.path(), name, text);
        let output = gkbo()
            .args(["run", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(tmp.path().join("out"))
            .output()
            .unwrap();
        assert!(!output.status.success(), "{name} was accepted");
        assert!(
            String::from_utf8_lossy(&output.stderr).contains("error"),
            "{name}"
        );
    }
    let missing = gkbo()
        .args(["run", "--config", "/nonexistent/cfg.toml"])
        .output()
        .unwrap();
    assert!(!missing.status.success());
}

#[test]
fn unsuccessful_runs_are_not_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(
        tmp.path(),
        "hopeless.toml",
        "[dynamics]\nsigma_f = 0.0\n[experiment]\ndimension = 10\nn = 10\nmax_iter = 5\nrepetitions = 2\n",
    );
    let out = tmp.path().join("out");
    let status = gkbo()
        .args(["run", "--no-plots", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let runs = fs::read_to_string(out.join("runs.csv")).unwrap();
    assert!(runs.lines().skip(1).all(|l| l.contains(",false,")));
}
