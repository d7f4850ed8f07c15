//! JSON encoding of dynamic graphs.
//!
//! ```json
//! {"n_vertices": 4, "sequence": [{"edges": [[0, 2]], "loops": [1], "time": {"pi_num": 1, "pi_den": 2}}]}
//! ```

use std::collections::BTreeSet;

use serde::Deserialize;
use thiserror::Error;

use super::{DynamicGraph, Graph, RationalAngle, TimedGraph};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("invalid JSON at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("{location}: {message}")]
    Invalid { location: String, message: String },
}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        let message = match message.rfind(" at line ") {
            Some(i) => message[..i].to_string(),
            None => message,
        };
        Self::Json { line: e.line(), column: e.column(), message }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FileRepr {
    n_vertices: usize,
    sequence: Vec<StepRepr>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StepRepr {
    edges: Vec<[usize; 2]>,
    loops: Vec<usize>,
    time: TimeRepr,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TimeRepr {
    pi_num: i64,
    pi_den: i64,
}

fn invalid(location: String, message: impl Into<String>) -> ParseError {
    ParseError::Invalid { location, message: message.into() }
}

/// Parses and validates a dynamic graph file.
pub fn parse_dynamic_graph(text: &str) -> Result<DynamicGraph, ParseError> {
    let file: FileRepr = serde_json::from_str(text)?;
    let n = file.n_vertices;
    if n == 0 {
        return Err(invalid("n_vertices".into(), "must be at least 1"));
    }
    let mut steps = Vec::with_capacity(file.sequence.len());
    for (s, step) in file.sequence.iter().enumerate() {
        let at = |field: &str, k: usize| format!("sequence[{s}].{field}[{k}]");
        let mut seen = BTreeSet::new();
        for (k, &[i, j]) in step.edges.iter().enumerate() {
            if i >= n || j >= n {
                return Err(invalid(at("edges", k), format!("vertex out of range for {n} vertices")));
            }
            if i >= j {
                return Err(invalid(at("edges", k), "edge must be written [i, j] with i < j"));
            }
            if !seen.insert((i, j)) {
                return Err(invalid(at("edges", k), "duplicate edge"));
            }
        }
        let mut seen = BTreeSet::new();
        for (k, &v) in step.loops.iter().enumerate() {
            if v >= n {
                return Err(invalid(at("loops", k), format!("vertex out of range for {n} vertices")));
            }
            if !seen.insert(v) {
                return Err(invalid(at("loops", k), "duplicate loop"));
            }
        }
        let time = RationalAngle::try_new(step.time.pi_num, step.time.pi_den)
            .map_err(|e| invalid(format!("sequence[{s}].time"), e.to_string()))?;
        let graph = Graph::new(n, step.edges.iter().map(|&[i, j]| (i, j)), step.loops.iter().copied())
            .map_err(|e| invalid(format!("sequence[{s}]"), e.to_string()))?;
        steps.push(TimedGraph::new(graph, time));
    }
    Ok(DynamicGraph::from_steps(n, steps).expect("validated vertex counts"))
}

/// Serializes with one step per line.
pub fn serialize_dynamic_graph(dg: &DynamicGraph) -> String {
    let lines: Vec<String> = dg
        .steps()
        .iter()
        .map(|s| {
            let edges: Vec<String> = s.graph.edges().iter().map(|(i, j)| format!("[{i}, {j}]")).collect();
            let loops: Vec<String> = s.graph.loops().iter().map(|v| v.to_string()).collect();
            format!(
                "    {{\"edges\": [{}], \"loops\": [{}], \"time\": {{\"pi_num\": {}, \"pi_den\": {}}}}}",
                edges.join(", "),
                loops.join(", "),
                s.duration.num(),
                s.duration.den()
            )
        })
        .collect();
    if lines.is_empty() {
        return format!("{{\n  \"n_vertices\": {},\n  \"sequence\": []\n}}\n", dg.n_vertices());
    }
    format!("{{\n  \"n_vertices\": {},\n  \"sequence\": [\n{}\n  ]\n}}\n", dg.n_vertices(), lines.join(",\n"))
}
