//! End-to-end tests of the `covlife` binary: every subcommand, the JSON file
//! formats, and the exit-code policy.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use covlife::instance::{CoverFamily, Instance, Schedule};
use covlife_cli::bench::gen_random;

fn covlife(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_covlife"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_triangle(dir: &Path) -> std::path::PathBuf {
    let inst = Instance::unit(3, vec![vec![0, 1], vec![1, 2], vec![2, 0]]).unwrap();
    let path = dir.join("triangle.json");
    fs::write(&path, inst.to_json().unwrap()).unwrap();
    path
}

#[test]
fn gen_writes_a_deterministic_instance() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a.json");
    let out_b = dir.path().join("b.json");
    for out in [&out_a, &out_b] {
        let res = covlife(&[
            "gen",
            "--n",
            "12",
            "--m",
            "30",
            "--size-max",
            "4",
            "--seed",
            "7",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(res.status.success(), "{res:?}");
    }
    let a = fs::read_to_string(&out_a).unwrap();
    assert_eq!(a, fs::read_to_string(&out_b).unwrap());
    let inst = Instance::from_json(&a).unwrap();
    assert_eq!(inst.n(), 12);
    assert_eq!(inst.subset_count(), 30);
}

#[test]
fn generator_seed_two_yields_the_triangle() {
    // Pinned: with three subsets of size two over three elements, seed 2 is
    // the first seed whose covering family is exactly the triangle.
    let inst = gen_random(3, 3, 2, 2, 2).unwrap();
    let mut subsets = inst.subsets().to_vec();
    subsets.sort();
    assert_eq!(subsets, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
}

#[test]
fn solve_exact_reports_the_triangle_lifetime() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_triangle(dir.path());
    let sched_path = dir.path().join("sched.json");
    let res = covlife(&[
        "solve",
        "--algo",
        "exact",
        "--in",
        inst.to_str().unwrap(),
        "--out",
        sched_path.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "{res:?}");
    let stdout = String::from_utf8(res.stdout).unwrap();
    assert!(stdout.contains("z=3/2"), "stdout: {stdout}");

    let sched = Schedule::from_json(&fs::read_to_string(&sched_path).unwrap()).unwrap();
    assert_eq!(sched.value(), covlife::rational::parse_rat("3/2").unwrap());
}

#[test]
fn solve_and_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_triangle(dir.path());
    let covers = dir.path().join("covers.json");
    let res = covlife(&[
        "solve",
        "--algo",
        "colour",
        "--in",
        inst.to_str().unwrap(),
        "--out",
        covers.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "{res:?}");

    let res = covlife(&[
        "verify",
        "--in",
        inst.to_str().unwrap(),
        "--covers",
        covers.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "{res:?}");
    assert!(String::from_utf8(res.stdout).unwrap().contains("valid"));

    // Tamper: reuse subset 0 in a second cover.
    let mut fam =
        CoverFamily::from_json(&fs::read_to_string(&covers).unwrap()).unwrap();
    fam.covers.push(vec![0]);
    fs::write(&covers, fam.to_json().unwrap()).unwrap();
    let res = covlife(&[
        "verify",
        "--in",
        inst.to_str().unwrap(),
        "--covers",
        covers.to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(1), "{res:?}");
}

#[test]
fn invalid_instance_file_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    fs::write(&path, "{ not json").unwrap();
    let res = covlife(&["solve", "--algo", "colour", "--in", path.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(1), "{res:?}");
}

#[test]
fn oversized_brute_force_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen_random(20, 40, 2, 5, 3).unwrap();
    let path = dir.path().join("big.json");
    fs::write(&path, inst.to_json().unwrap()).unwrap();
    let res = covlife(&["solve", "--algo", "brute", "--in", path.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(3), "{res:?}");
}

#[test]
fn solver_precondition_failures_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_triangle(dir.path());
    // The triangle is not an interval instance.
    let res = covlife(&["solve", "--algo", "oned", "--in", inst.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(1), "{res:?}");
}

#[test]
fn bench_and_plot_produce_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"ns": [9, 12], "subsets_per_n": 40, "size_max": 4, "trials": 2, "algos": ["colour"]}"#,
    )
    .unwrap();
    let csv = dir.path().join("out.csv");
    let res = covlife(&[
        "bench",
        "--config",
        cfg.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "{res:?}");
    let table = fs::read_to_string(&csv).unwrap();
    assert_eq!(table.lines().count(), 1 + 2 * 2);

    let svg = dir.path().join("out.svg");
    let res = covlife(&[
        "plot",
        "--csv",
        csv.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert!(res.status.success(), "{res:?}");
    let rendered = fs::read_to_string(&svg).unwrap();
    assert!(rendered.starts_with("<svg"));
    assert_eq!(rendered.matches("<polyline").count(), 3);
}

#[test]
fn bench_rejects_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"trials": 0}"#).unwrap();
    let res = covlife(&[
        "bench",
        "--config",
        cfg.to_str().unwrap(),
        "--csv",
        dir.path().join("x.csv").to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(1), "{res:?}");
}
