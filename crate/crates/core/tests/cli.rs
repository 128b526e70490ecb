use std::path::Path;
use std::process::{Command, Output};

use ptasynth::fixtures::TOY_MODEL;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptasynth"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn toy_dir() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("toy.imi"), TOY_MODEL).unwrap();
    std::fs::write(dir.path().join("toy.pi0"), "p1 = 1 & p2 = 2").unwrap();
    std::fs::write(dir.path().join("toy.v0"), "p1 = 0..2\np2 = 0..2\n").unwrap();
    dir
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn inverse_mode_writes_result_files() {
    let dir = toy_dir();
    let out = run(dir.path(), &["toy.imi", "--pi0", "toy.pi0"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let res = read(dir.path(), "toy.res");
    let mut lines = res.lines();
    assert_eq!(lines.next(), Some("0 <= p1 & p1 < p2"));
    assert_eq!(lines.next(), Some("iterations: 1"));
    assert_eq!(lines.next(), Some("refinements: 1"));
    assert_eq!(lines.next(), Some("states: 2"));
    assert_eq!(lines.next(), Some("transitions: 1"));
    assert!(lines.next().unwrap().starts_with("time_ms: "));
    assert_eq!(read(dir.path(), "toy.states").lines().count(), 2);
    assert!(read(dir.path(), "toy.dot").contains("s0 -> s1 [label=\"a\"];"));
    let summary = stdout(&out);
    assert!(
        summary.starts_with("mode=inverse status=ok time_ms="),
        "{summary}"
    );
}

#[test]
fn cover_mode_writes_tiles_and_plot() {
    let dir = toy_dir();
    let out = run(
        dir.path(),
        &["toy.imi", "--v0", "toy.v0", "--forbid", "q2", "-o", "out"],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let cart = read(dir.path(), "out.cart");
    let tiles: Vec<&str> = cart.lines().filter(|l| l.starts_with("TILE ")).collect();
    assert_eq!(tiles.len(), 2);
    assert!(cart.contains("constraint=0 <= p1 & p1 < p2 ; verdict=good"));
    assert!(cart.contains("constraint=0 <= p1 & p2 <= p1 ; verdict=bad"));
    assert!(cart.contains("integer coverage: 9/9"));
    for name in ["out_tile1.dot", "out_tile2.dot"] {
        assert!(read(dir.path(), name).starts_with("digraph"));
    }
    let svg = read(dir.path(), "out_cart.svg");
    assert!(svg.contains("width=\"480\" height=\"480\""));
    assert!(stdout(&out).starts_with("mode=cover status=ok"));
}

#[test]
fn random_mode_is_seeded() {
    let dir = toy_dir();
    let args = [
        "toy.imi",
        "--v0",
        "toy.v0",
        "--random",
        "3",
        "--seed",
        "5",
        "--no-timings",
    ];
    let first = run(dir.path(), &args);
    assert_eq!(first.status.code(), Some(0));
    let a = read(dir.path(), "toy.cart");
    run(dir.path(), &args);
    assert_eq!(a, read(dir.path(), "toy.cart"));
    assert_eq!(stdout(&first), "mode=border-random status=ok time_ms=0\n");
}

#[test]
fn missing_reference_file_is_named() {
    let dir = toy_dir();
    let out = run(dir.path(), &["toy.imi", "--pi0", "absent.pi0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("absent.pi0"));
    assert!(stderr(&out).contains("--pi0"));
    assert!(stdout(&out).starts_with("mode=inverse status=diag"));
}

#[test]
fn parse_errors_carry_positions() {
    let dir = toy_dir();
    std::fs::write(
        dir.path().join("bad.imi"),
        "var x: clock;\nautomaton A synclabs: ;\nloc l0: while z <= 1 do\nend\ninit := loc[A] = l0;",
    )
    .unwrap();
    let out = run(dir.path(), &["bad.imi"]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("bad.imi:3:"), "{err}");
    assert!(err.contains("z"), "{err}");
    assert!(stdout(&out).starts_with("mode=reach status=diag"));
}

#[test]
fn usage_errors_exit_with_one() {
    let dir = toy_dir();
    let out = run(
        dir.path(),
        &["toy.imi", "--pi0", "toy.pi0", "--v0", "toy.v0"],
    );
    assert_eq!(out.status.code(), Some(1));
    let out = run(dir.path(), &["toy.imi", "--depth", "many"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("status=diag"));
    let out = run(dir.path(), &["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("--grid-denominator"));
}

#[test]
fn limits_exit_with_two_and_flag_partial_results() {
    let dir = toy_dir();
    std::fs::write(
        dir.path().join("loop.imi"),
        "var x: clock; p: parameter;
automaton A synclabs: ;
loc l0: while True do
  when x >= p do {x' = 0} goto l1;
loc l1: while True do
  when x >= p + 1 do {x' = 0} goto l0;
end
init := loc[A] = l0 & x = 0;",
    )
    .unwrap();
    std::fs::write(dir.path().join("loop.pi0"), "p = 1").unwrap();
    let out = run(
        dir.path(),
        &["loop.imi", "--pi0", "loop.pi0", "--depth", "0"],
    );
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert!(read(dir.path(), "loop.res").contains("partial: depth limit"));
    assert!(stdout(&out).starts_with("mode=inverse status=limit"));

    let out = run(dir.path(), &["loop.imi", "--depth", "1", "-o", "r"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(read(dir.path(), "r.states").lines().count(), 2);
}

#[test]
fn plot_needs_two_parameters() {
    let dir = toy_dir();
    std::fs::write(
        dir.path().join("latch.imi"),
        ptasynth::fixtures::SR_LATCH_MODEL,
    )
    .unwrap();
    std::fs::write(
        dir.path().join("latch.v0"),
        "w = 1..2 & d1 = 1..1 & d2 = 1..1",
    )
    .unwrap();
    let out = run(dir.path(), &["latch.imi", "--v0", "latch.v0", "--plot"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--plot-params"));
    let out = run(
        dir.path(),
        &[
            "latch.imi",
            "--v0",
            "latch.v0",
            "--plot",
            "--plot-params",
            "0",
            "2",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(dir.path().join("latch_cart.svg").exists());
}
