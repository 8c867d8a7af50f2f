mod common;

use std::fs;
use std::time::Instant;

use common::*;
use memdvfs::cli::{load_graph, load_platform};
use memdvfs::model::{DeadlineProblem, ParallelismVector};
use memdvfs::optimizer::solve_constrained;
use memdvfs::scheduler::{rank_schedules, Policy};
use serde_json::Value;

fn stdout(out: &std::process::Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &std::process::Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json(out: &std::process::Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn optimize_serial_workload() {
    let out = memdvfs(&["optimize", "-p", &data("platform.json"), "-w", "1,0,0,0", "-d", "0", "-t", "1e9"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().filter(|l| l.trim_start().starts_with(char::is_numeric)).collect();
    assert_eq!(rows.len(), 4);
    assert!(!rows[0].trim_end().ends_with('-'));
    assert!(rows[1..].iter().all(|r| r.trim_end().ends_with('-')));
    assert!(text.contains("deadline binding no"));
}

#[test]
fn optimize_json_matches_library() {
    let out = memdvfs(&[
        "optimize", "-p", &data("platform.json"), "-w", "1e9,2e9,0,1e9", "-d", "0.002", "-t", "6", "--json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);

    let platform = load_platform(data("platform.json").as_ref()).unwrap();
    let w = ParallelismVector::new(vec![1e9, 2e9, 0.0, 1e9]).unwrap();
    let r = solve_constrained(&DeadlineProblem::new(platform, w, 0.002, 6.0).unwrap()).unwrap();

    assert_eq!(v["energy"]["total"].as_f64().unwrap(), r.energy.total);
    assert_eq!(v["dual_multiplier"].as_f64().unwrap(), r.dual_multiplier);
    assert_eq!(v["deadline_binding"].as_bool().unwrap(), r.deadline_binding);
    for (i, level) in v["levels"].as_array().unwrap().iter().enumerate() {
        assert_eq!(level["f"].as_f64(), r.f.as_slice()[i]);
    }
}

#[test]
fn optimize_from_graph_uses_schedule() {
    let out = memdvfs(&["optimize", "-p", &data("platform.json"), "-g", &data("pipeline.json"), "-t", "40", "--policy", "fifo", "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["policy"], "fifo");
    let graph = load_graph(data("pipeline.json").as_ref()).unwrap();
    let busy: f64 = v["levels"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["m"].as_f64().unwrap() * l["cycles"].as_f64().unwrap())
        .sum();
    assert_eq!(busy, graph.total_work() as f64);
}

#[test]
fn dynamic_only_prints_closed_form_alongside() {
    // memory-bound: d t_a f is about 1e5
    let dir = scratch_dir("cli-dynamic");
    let params = platform(1e-27, 0.0, 0.0, 3.0, 0.1, 4, 1e-7).params();
    let plat = write_platform(&dir, "mem.json", &params);
    let args = ["optimize", "-p", plat.to_str().unwrap(), "-w", "1e9,2e9,0,1e9", "-d", "1", "-t", "400.0004", "--dynamic-only"];
    let text = stdout(&memdvfs(&args));
    assert!(text.contains("closed form"));
    assert!(text.contains("reference f'"));

    let mut args = args.to_vec();
    args.push("--json");
    let v = json(&memdvfs(&args));
    let solved = v["energy"]["total"].as_f64().unwrap();
    let closed = v["reference"]["energy"]["total"].as_f64().unwrap();
    assert_eq!(v["energy"]["static_energy"].as_f64().unwrap(), 0.0);
    assert!(rel(closed, solved) < 1e-8, "{closed} vs {solved}");
}

#[test]
fn malformed_json_reports_position() {
    let dir = scratch_dir("cli-bad-json");
    let bad = dir.join("bad.json");
    fs::write(&bad, "{\n  \"c1\": 1.0,\n  \"c2\": oops\n}\n").unwrap();
    let out = memdvfs(&["optimize", "-p", bad.to_str().unwrap(), "-w", "1,1", "-d", "0", "-t", "10"]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("line 3") && err.contains("column"), "{err}");
}

#[test]
fn unknown_keys_are_input_errors() {
    let dir = scratch_dir("cli-unknown-key");
    let plat = dir.join("p.json");
    fs::write(&plat, r#"{"c1": 1, "c2": 0, "c3": 0, "alpha": 2, "K": 0, "M": 2, "t_a": 1, "units": "GHz"}"#).unwrap();
    let out = memdvfs(&["optimize", "-p", plat.to_str().unwrap(), "-w", "1,1", "-d", "0", "-t", "10"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("unknown field"));

    let graph = dir.join("g.json");
    fs::write(&graph, r#"{"d": 0, "tasks": [{"id": "a", "cw": 1}], "edges": [["a", "a"]]}"#).unwrap();
    let out = memdvfs(&["schedule", "-p", &data("platform.json"), "-g", graph.to_str().unwrap(), "-t", "10"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn infeasible_deadline_exits_two() {
    let out = memdvfs(&["optimize", "-p", &data("platform.json"), "-w", "1e9,0,0,0", "-d", "0.01", "-t", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("memory floor is 1"), "{}", stderr(&out));

    let out = memdvfs(&["optimize", "-p", &data("platform.json"), "-w", "1e9,0,0,0", "-d", "0", "-t", "0.5", "--f-max", "1e9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    assert_eq!(memdvfs(&["optimize", "-p", "x.json"]).status.code(), Some(1));
    assert_eq!(memdvfs(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(memdvfs(&["schedule", "-p", "x", "-g", "y", "-t", "1", "--policies", "random"]).status.code(), Some(1));
    let help = memdvfs(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout(&help).contains("optimize"));
}

#[test]
fn chain_rows_identical_across_policies() {
    let dir = scratch_dir("cli-chain");
    let g = dir.join("chain.json");
    fs::write(
        &g,
        r#"{"d": 0.001, "tasks": [{"id": "a", "cw": 3000000000}, {"id": "b", "cw": 1000000000}, {"id": "c", "cw": 2000000000}],
            "edges": [["a", "b"], ["b", "c"]]}"#,
    )
    .unwrap();
    let v = json(&memdvfs(&["schedule", "-p", &data("platform.json"), "-g", g.to_str().unwrap(), "-t", "30", "--json"]));
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for r in &rows[1..] {
        assert_eq!(r["metrics"], rows[0]["metrics"]);
        assert_eq!(r["energy"], rows[0]["energy"]);
    }
}

#[test]
fn ranked_rows_match_library_order() {
    let args = [
        "schedule", "-p", &data("platform.json"), "-g", &data("pipeline.json"), "-t", "40",
        "--policies", "fifo,critical-path", "--rank", "--json",
    ];
    let out = memdvfs(&args);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    let platform = load_platform(data("platform.json").as_ref()).unwrap();
    let graph = load_graph(data("pipeline.json").as_ref()).unwrap();
    let ranked = rank_schedules(&graph, &platform, 40.0, &[Policy::Fifo, Policy::CriticalPath]).unwrap();
    let got: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["policy"].as_str().unwrap()).collect();
    let want: Vec<&str> = ranked.iter().map(|r| r.policy.name()).collect();
    assert_eq!(got, want);
    for (row, r) in v.as_array().unwrap().iter().zip(&ranked) {
        assert_eq!(row["metrics"]["criterion"].as_f64().unwrap(), r.metrics.criterion);
    }
    // the two policies really differ on this graph
    assert_ne!(ranked[0].metrics.criterion, ranked[1].metrics.criterion);
}

#[test]
fn schedule_below_floor_names_it() {
    let out = memdvfs(&["schedule", "-p", &data("platform.json"), "-g", &data("diamond.json"), "-t", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("memory floor"));
}

#[test]
fn sweep_single_point() {
    let out = memdvfs(&["sweep", "-p", &data("platform_quadratic.json"), "-m", "4", "--points", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows, ["g,x_m", "0.0000000000000000e0,5.0000000000000000e-1"]);
}

#[test]
fn sweep_requires_quadratic_exponent() {
    let out = memdvfs(&["sweep", "-p", &data("platform.json"), "-m", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("alpha = 2"));
}

#[test]
fn sweep_round_trips_and_flattens() {
    let dir = scratch_dir("cli-sweep");
    let csv = dir.join("sweep.csv");
    let out = memdvfs(&["sweep", "-p", &data("platform_quadratic.json"), "-m", "8", "-o", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&csv).unwrap();
    let mut xs = Vec::new();
    for line in text.lines().skip(1).filter(|l| !l.starts_with('#')) {
        let (g, x) = line.split_once(',').unwrap();
        let (g, x): (f64, f64) = (g.parse().unwrap(), x.parse().unwrap());
        assert_eq!(format!("{g:.16e},{x:.16e}"), line);
        xs.push(x);
    }
    assert_eq!(xs.len(), 201);
    // g step is 0.5: the first unit of overload moves x_m far more than the last fifty
    let early = xs[2] - xs[0];
    let late = xs[200] - xs[100];
    assert!(early > 5.0 * late, "early {early}, late {late}");
}

#[test]
fn validate_empty_run_passes() {
    let out = memdvfs(&["validate", "--instances", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("PASS"));
}

#[test]
fn validate_is_deterministic_and_fast() {
    let start = Instant::now();
    let a = memdvfs(&["validate", "--seed", "3"]);
    let elapsed = start.elapsed().as_secs_f64();
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert!(stdout(&a).contains("instances=200"));
    assert!(elapsed < 60.0, "{elapsed} s");
    let b = memdvfs(&["validate", "--seed", "3"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, memdvfs(&["validate", "--seed", "4"]).stdout);
}
