//! Plain-text graph dumps: a header `n <n>`, then one `u v` line per edge
//! with `u < v`, sorted.

use std::fmt::Write as _;

use majsim_core::graph::{Graph, GraphError, RepresentationPolicy};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphIoError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("missing `n <count>` header")]
    MissingHeader,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub fn dump_graph(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.n());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Reads a dump. The representation follows the default density rule.
pub fn load_graph(text: &str) -> Result<Graph, GraphIoError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (line, header) = lines.next().ok_or(GraphIoError::MissingHeader)?;
    let n = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["n", count] => count.parse::<usize>().map_err(|_| GraphIoError::Parse {
            line,
            reason: format!("bad vertex count `{count}`"),
        })?,
        _ => return Err(GraphIoError::MissingHeader),
    };
    let mut edges = Vec::new();
    for (line, l) in lines {
        let parsed: Option<Vec<usize>> = l.split_whitespace().map(|t| t.parse().ok()).collect();
        match parsed.as_deref() {
            Some(&[u, v]) => edges.push((u, v)),
            _ => {
                return Err(GraphIoError::Parse {
                    line,
                    reason: format!("expected `u v`, got `{l}`"),
                })
            }
        }
    }
    let p = if n > 1 {
        2.0 * edges.len() as f64 / (n as f64 * (n - 1) as f64)
    } else {
        0.0
    };
    let repr = RepresentationPolicy::default().choose(n, p);
    Ok(Graph::from_edges(n, edges, repr)?)
}
