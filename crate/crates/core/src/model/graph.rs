use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Task {
    pub id: String,
    /// Compute workload in CPU cycles.
    pub cw: u64,
}

impl Task {
    pub fn new(id: impl Into<String>, cw: u64) -> Self {
        Self { id: id.into(), cw }
    }
}

/// Precedence DAG of tasks sharing one application-wide data-to-CPU
/// quotient `d` (memory accesses per cycle).
///
/// Tasks are stored sorted by id; task indices used throughout the scheduler
/// therefore order ties by ascending id.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaskGraph {
    tasks: Vec<Task>,
    edges: Vec<(usize, usize)>,
    d: f64,
    #[serde(skip)]
    preds: Vec<Vec<usize>>,
    #[serde(skip)]
    succs: Vec<Vec<usize>>,
}

impl TaskGraph {
    pub fn new(mut tasks: Vec<Task>, edges: &[(String, String)], d: f64) -> Result<Self> {
        if !(d.is_finite() && d >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "data-to-CPU quotient must be finite and nonnegative, got {d}"
            )));
        }
        if tasks.is_empty() {
            return Err(Error::InvalidInput("task graph has no tasks".into()));
        }
        tasks.sort_by(|a, b| a.id.cmp(&b.id));
        if let Some(pair) = tasks.windows(2).find(|p| p[0].id == p[1].id) {
            return Err(Error::InvalidInput(format!("duplicate task id {:?}", pair[0].id)));
        }
        if let Some(t) = tasks.iter().find(|t| t.cw == 0) {
            return Err(Error::InvalidInput(format!("task {:?} has zero workload", t.id)));
        }

        let index: HashMap<&str, usize> =
            tasks.iter().enumerate().map(|(i, t)| (t.id.as_str(), i)).collect();
        let lookup = |id: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::InvalidInput(format!("edge references unknown task {id:?}")))
        };

        let mut seen = HashSet::new();
        let mut resolved = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let edge = (lookup(a)?, lookup(b)?);
            if !seen.insert(edge) {
                return Err(Error::InvalidInput(format!("duplicate edge {a:?} -> {b:?}")));
            }
            resolved.push(edge);
        }

        let n = tasks.len();
        let mut preds = vec![Vec::new(); n];
        let mut succs = vec![Vec::new(); n];
        for &(a, b) in &resolved {
            succs[a].push(b);
            preds[b].push(a);
        }
        for list in preds.iter_mut().chain(succs.iter_mut()) {
            list.sort_unstable();
        }

        let graph = Self {
            tasks,
            edges: resolved,
            d,
            preds,
            succs,
        };
        if graph.topological_order().len() != n {
            return Err(Error::CyclicGraph);
        }
        Ok(graph)
    }

    /// Convenience constructor from `(id, cw)` pairs and id edges.
    pub fn from_parts(tasks: &[(&str, u64)], edges: &[(&str, &str)], d: f64) -> Result<Self> {
        let tasks = tasks.iter().map(|(id, cw)| Task::new(*id, *cw)).collect();
        let edges: Vec<(String, String)> =
            edges.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        Self::new(tasks, &edges, d)
    }

    pub fn tasks(&self) -> &[Task] {
        &self.tasks
    }

    pub fn len(&self) -> usize {
        self.tasks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tasks.is_empty()
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn preds(&self, task: usize) -> &[usize] {
        &self.preds[task]
    }

    pub fn succs(&self, task: usize) -> &[usize] {
        &self.succs[task]
    }

    pub fn total_work(&self) -> u64 {
        self.tasks.iter().map(|t| t.cw).sum()
    }

    /// Kahn's algorithm, smallest ready index first. Shorter than `len()` iff
    /// the graph is cyclic.
    pub fn topological_order(&self) -> Vec<usize> {
        let mut indegree: Vec<usize> = self.preds.iter().map(Vec::len).collect();
        let mut ready: BinaryHeap<Reverse<usize>> = indegree
            .iter()
            .enumerate()
            .filter(|(_, deg)| **deg == 0)
            .map(|(i, _)| Reverse(i))
            .collect();
        let mut order = Vec::with_capacity(self.tasks.len());
        while let Some(Reverse(t)) = ready.pop() {
            order.push(t);
            for &s in &self.succs[t] {
                indegree[s] -= 1;
                if indegree[s] == 0 {
                    ready.push(Reverse(s));
                }
            }
        }
        order
    }

    /// Longest path (in cycles) from each task to any sink, own workload included.
    pub fn bottom_levels(&self) -> Vec<u64> {
        let mut level = vec![0u64; self.tasks.len()];
        for &t in self.topological_order().iter().rev() {
            let tail = self.succs[t].iter().map(|&s| level[s]).max().unwrap_or(0);
            level[t] = self.tasks[t].cw + tail;
        }
        level
    }
}
