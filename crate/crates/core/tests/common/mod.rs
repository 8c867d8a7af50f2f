#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use memdvfs::model::{DeadlineProblem, ParallelismVector, Platform, PlatformParams, Task, TaskGraph};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn platform(c1: f64, c2: f64, c3: f64, alpha: f64, k: f64, cores: usize, t_a: f64) -> Platform {
    Platform::new(PlatformParams { c1, c2, c3, alpha, k, cores, t_a }).unwrap()
}

/// `m' = m + K(M - m)`, written out independently of the library.
pub fn eff(k: f64, cores: usize, m: usize) -> f64 {
    m as f64 + k * (cores - m) as f64
}

/// Random nonzero workload; each level active with probability `p_active`.
pub fn workload(rng: &mut ChaCha8Rng, cores: usize, p_active: f64) -> ParallelismVector {
    loop {
        let w: Vec<f64> = (0..cores)
            .map(|_| if rng.gen_bool(p_active) { rng.gen_range(0.1..10.0) } else { 0.0 })
            .collect();
        if w.iter().any(|&x| x > 0.0) {
            return ParallelismVector::new(w).unwrap();
        }
    }
}

/// Workload with exactly `levels` active levels.
pub fn workload_with_levels(rng: &mut ChaCha8Rng, cores: usize, levels: usize) -> ParallelismVector {
    let mut w = vec![0.0; cores];
    let mut placed = 0;
    while placed < levels {
        let i = rng.gen_range(0..cores);
        if w[i] == 0.0 {
            w[i] = rng.gen_range(0.1..10.0);
            placed += 1;
        }
    }
    ParallelismVector::new(w).unwrap()
}

/// Deadline leaving `slack` seconds of compute per cycle above the memory floor.
pub fn problem(platform: Platform, w: ParallelismVector, d: f64, slack: f64) -> DeadlineProblem {
    let floor = w.total_cycles() * d * platform.t_a();
    let t = floor + w.total_cycles() * slack;
    DeadlineProblem::new(platform, w, d, t).unwrap()
}

/// Random DAG on `n` tasks; edges only go from lower to higher index.
pub fn random_dag(rng: &mut ChaCha8Rng, n: usize, p_edge: f64, d: f64) -> TaskGraph {
    let ids: Vec<String> = (0..n).map(|i| format!("t{i}")).collect();
    let tasks = ids.iter().map(|id| Task::new(id.clone(), rng.gen_range(1..=9))).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p_edge) {
                edges.push((ids[i].clone(), ids[j].clone()));
            }
        }
    }
    TaskGraph::new(tasks, &edges, d).unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

pub fn scratch_dir(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

pub fn write_platform(dir: &Path, name: &str, p: &PlatformParams) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(p).unwrap()).unwrap();
    path
}

pub fn memdvfs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_memdvfs")).args(args).output().unwrap()
}

pub fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}
