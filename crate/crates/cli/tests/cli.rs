use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cherry-mwpm"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_two_nodes() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("two.txt");
    fs::write(&input, "p edge 2 1\ne 1 2 7\n").unwrap();
    let out = run(&["solve", "--input", path(&input)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "s 7\nm 1 2\n");
}

#[test]
fn solver_options_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("square.txt");
    fs::write(&input, "p edge 4 4\ne 1 2 1\ne 2 3 5\ne 3 4 1\ne 1 4 5\n").unwrap();
    for init in ["greedy", "fractional", "fractional-t", "fractional-thresholded"] {
        for mode in ["cc", "lp"] {
            let out = run(&["solve", "--input", path(&input), "--init", init, "--dual-mode", mode, "--init-threshold", "1"]);
            assert_eq!(out.status.code(), Some(0), "{init} {mode}");
            assert!(String::from_utf8(out.stdout).unwrap().starts_with("s 2\n"));
        }
    }
}

#[test]
fn odd_instance_is_infeasible_with_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("odd.txt");
    fs::write(&input, "p edge 3 3\ne 1 2 1\ne 2 3 1\ne 1 3 1\n").unwrap();
    let out = run(&["solve", "--input", path(&input)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "s INFEASIBLE\n");
}

#[test]
fn parse_error_reports_the_line_and_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.txt");
    fs::write(&input, "c comment\np edge 2 1\ne 1 2 seven\n").unwrap();
    let out = run(&["solve", "--input", path(&input)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 3"));
}

#[test]
fn generate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for family in ["random-sparse", "delaunay-bw", "geometric-sw", "maxcut-bw"] {
        let a = dir.path().join("a.txt");
        let b = dir.path().join("b.txt");
        for p in [&a, &b] {
            let out = run(&["generate", "--family", family, "--n", "300", "--seed", "11", "--out", path(p)]);
            assert!(out.status.success(), "{family}");
        }
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap(), "{family}");
        let c = dir.path().join("c.txt");
        run(&["generate", "--family", family, "--n", "300", "--seed", "12", "--out", path(&c)]);
        assert_ne!(fs::read(&a).unwrap(), fs::read(&c).unwrap(), "{family}");
    }
}

#[test]
fn generate_solve_verify_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    for family in ["random-dense", "delaunay-sw", "geometric-bw", "maxcut-sw"] {
        let inst = dir.path().join("inst.txt");
        let sol = dir.path().join("sol.txt");
        assert!(run(&["generate", "--family", family, "--n", "12", "--seed", "4", "--out", path(&inst)]).status.success());
        let out = run(&["solve", "--input", path(&inst), "--emit-certificate", "--out", path(&sol)]);
        assert_eq!(out.status.code(), Some(0), "{family}");
        let out = run(&["verify", "--instance", path(&inst), "--solution", path(&sol)]);
        assert_eq!(out.status.code(), Some(0), "{family}: {}", String::from_utf8_lossy(&out.stdout));
        assert!(String::from_utf8(out.stdout).unwrap().contains("certified optimal"));
    }
}

#[test]
fn verify_rejects_tampered_solutions() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.txt");
    let sol = dir.path().join("sol.txt");
    run(&["generate", "--family", "geometric-bw", "--n", "400", "--seed", "2", "--out", path(&inst)]);
    assert_eq!(run(&["solve", "--input", path(&inst), "--emit-certificate", "--out", path(&sol)]).status.code(), Some(0));
    assert!(run(&["verify", "--instance", path(&inst), "--solution", path(&sol)]).status.success());
    let text = fs::read_to_string(&sol).unwrap();

    // Raise one vertex dual: an edge slack or strong duality breaks.
    let bumped: String = text
        .lines()
        .map(|l| match l.strip_prefix("y 1 ") {
            Some(v) => format!("y 1 {}\n", v.parse::<i64>().unwrap() + 1),
            None => format!("{l}\n"),
        })
        .collect();
    fs::write(&sol, bumped).unwrap();
    assert_eq!(run(&["verify", "--instance", path(&inst), "--solution", path(&sol)]).status.code(), Some(1));

    // Swap two mates: the stated weight or the edge set no longer fits.
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let ms: Vec<usize> = (0..lines.len()).filter(|&i| lines[i].starts_with("m ")).take(2).collect();
    let a: Vec<String> = lines[ms[0]].split(' ').map(String::from).collect();
    let b: Vec<String> = lines[ms[1]].split(' ').map(String::from).collect();
    lines[ms[0]] = format!("m {} {}", a[1], b[2]);
    lines[ms[1]] = format!("m {} {}", b[1], a[2]);
    fs::write(&sol, lines.join("\n") + "\n").unwrap();
    assert_eq!(run(&["verify", "--instance", path(&inst), "--solution", path(&sol)]).status.code(), Some(1));

    // A false infeasibility claim on a small feasible instance.
    let small = dir.path().join("small.txt");
    fs::write(&small, "p edge 2 1\ne 1 2 7\n").unwrap();
    fs::write(&sol, "s INFEASIBLE\n").unwrap();
    assert_eq!(run(&["verify", "--instance", path(&small), "--solution", path(&sol)]).status.code(), Some(1));
}

#[test]
fn bench_writes_one_row_per_run() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bench.csv");
    let out = run(&["bench", "--families", "delaunay-sw", "--sizes", "200,400", "--out", path(&csv)]);
    assert!(out.status.success());
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("instance,n,m,seed,status"));
    let cols = lines[0].split(',').count();
    for row in &lines[1..] {
        assert_eq!(row.split(',').count(), cols);
        assert!(row.starts_with("delaunay-sw,"));
        assert!(row.contains(",solved,"));
        assert!(row.ends_with(",ok"));
    }
}

#[test]
fn bench_marks_timed_out_runs() {
    let out = run(&["bench", "--families", "random-sparse", "--sizes", "20000", "--timeout", "0.000001"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().contains(",timeout,"));
}

#[test]
fn solve_appends_stats_rows() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("two.txt");
    let csv = dir.path().join("stats.csv");
    fs::write(&input, "p edge 2 1\ne 1 2 7\n").unwrap();
    for _ in 0..2 {
        assert!(run(&["solve", "--input", path(&input), "--stats", path(&csv)]).status.success());
    }
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert_eq!(text.lines().filter(|l| l.starts_with("instance,")).count(), 1);
}

#[test]
fn points_file_family() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("pts.txt");
    let inst = dir.path().join("inst.txt");
    fs::write(&pts, "0 0\n1 0\n1 1\n0 1\n").unwrap();
    let out = run(&["generate", "--family", "points-file", "--points", path(&pts), "--out", path(&inst)]);
    assert!(out.status.success());
    assert!(fs::read_to_string(&inst).unwrap().starts_with("p edge 4 5\n"));
}
