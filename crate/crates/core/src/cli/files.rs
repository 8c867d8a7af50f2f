use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;

use super::CliError;
use crate::model::{Platform, PlatformParams, Task, TaskGraph};

/// On-disk platform description: the [`PlatformParams`] fields by name
/// (`c1`, `c2`, `c3`, `alpha`, `K`, `M`, `t_a`). Unknown keys are rejected.
pub type PlatformFile = PlatformParams;

/// On-disk task graph.
///
/// ```json
/// {"d": 0.02, "tasks": [{"id": "a", "cw": 100}], "edges": [["a", "b"]]}
/// ```
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub d: f64,
    pub tasks: Vec<TaskEntry>,
    pub edges: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskEntry {
    pub id: String,
    pub cw: u64,
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

pub fn load_platform(path: &Path) -> Result<Platform, CliError> {
    let params: PlatformFile = read_json(path)?;
    Platform::new(params).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

pub fn load_graph(path: &Path) -> Result<TaskGraph, CliError> {
    let file: GraphFile = read_json(path)?;
    let tasks = file.tasks.into_iter().map(|t| Task::new(t.id, t.cw)).collect();
    TaskGraph::new(tasks, &file.edges, file.d)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_schema_is_strict() {
        let ok: GraphFile =
            serde_json::from_str(r#"{"d": 0.5, "tasks": [{"id": "a", "cw": 3}], "edges": []}"#).unwrap();
        assert_eq!(ok.tasks[0].cw, 3);
        assert!(serde_json::from_str::<GraphFile>(r#"{"d": 0.5, "tasks": [], "edges": [], "x": 1}"#).is_err());
        assert!(serde_json::from_str::<GraphFile>(
            r#"{"d": 0.5, "tasks": [{"id": "a", "cw": 3, "w": 1}], "edges": []}"#
        )
        .is_err());
        assert!(serde_json::from_str::<GraphFile>(r#"{"d": 0.5, "tasks": [{"id": "a", "cw": -3}], "edges": []}"#).is_err());
    }

    #[test]
    fn platform_schema_uses_symbol_names() {
        let p: PlatformFile = serde_json::from_str(
            r#"{"c1": 1, "c2": 0, "c3": 0.5, "alpha": 2, "K": 0.1, "M": 4, "t_a": 1e-7}"#,
        )
        .unwrap();
        assert_eq!((p.k, p.cores), (0.1, 4));
        assert!(serde_json::from_str::<PlatformFile>(
            r#"{"c1": 1, "c2": 0, "c3": 0.5, "alpha": 2, "k": 0.1, "M": 4, "t_a": 1e-7}"#
        )
        .is_err());
    }
}
