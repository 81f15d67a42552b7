use serde::Deserialize;

use super::{Graph, GraphError, Node};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    n: usize,
    edges: Vec<[Node; 2]>,
}

/// Parses a graph from either the JSON form `{"n": 3, "edges": [[0,1],...]}`
/// or a plain edge list whose first line is `n m` followed by `m` lines `u v`.
pub fn load_graph(text: &str) -> Result<Graph, GraphError> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let file: GraphFile = serde_json::from_str(text).map_err(|e| GraphError::Parse {
            location: format!("line {}, column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        Graph::new(file.n, file.edges.into_iter().map(|[u, v]| (u, v)))
    } else {
        load_edge_list(text)
    }
}

/// JSON form accepted by [`load_graph`], compact with a trailing newline.
pub fn graph_to_json(g: &Graph) -> String {
    let edges: Vec<[Node; 2]> = g.edges().iter().map(|&(u, v)| [u, v]).collect();
    let mut out = serde_json::json!({ "edges": edges, "n": g.n() }).to_string();
    out.push('\n');
    out
}

fn load_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (header_line, header) = lines.next().ok_or_else(|| GraphError::Parse {
        location: "line 1".into(),
        message: "empty input".into(),
    })?;
    let [n, m] = parse_pair(header_line, header, ["n", "m"])?;
    let mut edges = Vec::with_capacity(m);
    for (line_no, line) in lines.by_ref().take(m) {
        let [u, v] = parse_pair(line_no, line, ["u", "v"])?;
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(GraphError::Parse {
            location: format!("line {header_line}"),
            message: format!("header announces {m} edges, found {}", edges.len()),
        });
    }
    if let Some((line_no, _)) = lines.next() {
        return Err(GraphError::Parse {
            location: format!("line {line_no}"),
            message: format!("trailing content after {m} edges"),
        });
    }
    Graph::new(n, edges)
}

fn parse_pair(line_no: usize, line: &str, names: [&str; 2]) -> Result<[usize; 2], GraphError> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(GraphError::Parse {
            location: format!("line {line_no}"),
            message: format!("expected 2 fields, found {}", fields.len()),
        });
    }
    let mut out = [0; 2];
    for (i, (field, name)) in fields.iter().zip(names).enumerate() {
        out[i] = field.parse().map_err(|_| GraphError::Parse {
            location: format!("line {line_no}, field {name}"),
            message: format!("not a non-negative integer: {field:?}"),
        })?;
    }
    Ok(out)
}
