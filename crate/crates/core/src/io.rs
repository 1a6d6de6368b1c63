//! graph6, DOT and JSON forms of labeled graphs.
//!
//! graph6 has no labels, so writing maps the sorted label set onto
//! `0..n` and reading produces labels `0..n`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Label, LabeledGraph};

const HEADER: &str = ">>graph6<<";

fn encode_order(n: usize, out: &mut String) {
    if n <= 62 {
        out.push((n as u8 + 63) as char);
    } else if n <= 258_047 {
        out.push('~');
        for shift in [12, 6, 0] {
            out.push(((n >> shift & 63) as u8 + 63) as char);
        }
    } else {
        out.push_str("~~");
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift & 63) as u8 + 63) as char);
        }
    }
}

pub fn to_graph6(g: &LabeledGraph) -> String {
    let labels = g.label_vec();
    let n = labels.len();
    let mut out = String::new();
    encode_order(n, &mut out);
    let pos = |l: Label| labels.binary_search(&l).expect("edge endpoint is a label");
    let mut bits = vec![false; n * n.saturating_sub(1) / 2];
    for e in g.edges() {
        let (i, j) = (pos(e.lo()), pos(e.hi()));
        bits[j * (j - 1) / 2 + i] = true;
    }
    for chunk in bits.chunks(6) {
        let mut v = 0u8;
        for k in 0..6 {
            v = v << 1 | u8::from(chunk.get(k).copied().unwrap_or(false));
        }
        out.push((v + 63) as char);
    }
    out
}

pub fn from_graph6(text: &str) -> Result<LabeledGraph> {
    let text = text.trim();
    let text = text.strip_prefix(HEADER).unwrap_or(text);
    let bytes = text.as_bytes();
    if bytes.iter().any(|&b| !(63..=126).contains(&b)) {
        return Err(Error::Graph6("bytes must lie in 63..=126".into()));
    }
    let digit = |b: u8| (b - 63) as usize;
    let (n, rest) = match bytes {
        [] => return Err(Error::Graph6("empty input".into())),
        [126, 126, tail @ ..] => {
            if tail.len() < 6 {
                return Err(Error::Graph6("truncated order".into()));
            }
            (tail[..6].iter().fold(0, |acc, &b| acc << 6 | digit(b)), &tail[6..])
        }
        [126, tail @ ..] => {
            if tail.len() < 3 {
                return Err(Error::Graph6("truncated order".into()));
            }
            (tail[..3].iter().fold(0, |acc, &b| acc << 6 | digit(b)), &tail[3..])
        }
        [b, tail @ ..] => (digit(*b), tail),
    };
    let nbits = n * n.saturating_sub(1) / 2;
    if rest.len() != nbits.div_ceil(6) {
        return Err(Error::Graph6(format!("expected {} data bytes for n = {n}, found {}", nbits.div_ceil(6), rest.len())));
    }
    let bit = |k: usize| digit(rest[k / 6]) >> (5 - k % 6) & 1 == 1;
    if (nbits..rest.len() * 6).any(bit) {
        return Err(Error::Graph6("padding bits must be zero".into()));
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                edges.push((i as Label, j as Label));
            }
            k += 1;
        }
    }
    LabeledGraph::new(0..n as Label, edges)
}

pub fn to_dot(g: &LabeledGraph, name: &str) -> String {
    let mut out = format!("graph {name} {{\n");
    for l in g.labels() {
        let _ = writeln!(out, "  {l};");
    }
    for e in g.edges() {
        let _ = writeln!(out, "  {} -- {};", e.lo(), e.hi());
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize, Deserialize)]
pub struct GraphJson {
    pub labels: Vec<Label>,
    pub edges: Vec<[Label; 2]>,
}

impl From<&LabeledGraph> for GraphJson {
    fn from(g: &LabeledGraph) -> Self {
        GraphJson {
            labels: g.label_vec(),
            edges: g.edges().iter().map(|e| [e.lo(), e.hi()]).collect(),
        }
    }
}

impl TryFrom<GraphJson> for LabeledGraph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<Self> {
        LabeledGraph::new(j.labels, j.edges.into_iter().map(|[a, b]| (a, b)))
    }
}

pub fn to_json(g: &LabeledGraph) -> serde_json::Value {
    serde_json::to_value(GraphJson::from(g)).expect("plain data serialises")
}

pub fn from_json(text: &str) -> Result<LabeledGraph> {
    let j: GraphJson = serde_json::from_str(text).map_err(|e| Error::GraphJson(e.to_string()))?;
    LabeledGraph::try_from(j)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_encodings() {
        // Reference strings from the format description.
        assert_eq!(to_graph6(&LabeledGraph::empty(0..0)), "?");
        assert_eq!(to_graph6(&LabeledGraph::complete(2)), "A_");
        let g = LabeledGraph::new(0..5, [(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(to_graph6(&g), "DQc");
    }

    #[test]
    fn round_trip_and_header() {
        let g = LabeledGraph::new(0..7, [(0, 1), (1, 2), (2, 6), (3, 5)]).unwrap();
        let s = to_graph6(&g);
        assert_eq!(from_graph6(&s).unwrap(), g);
        assert_eq!(from_graph6(&format!("{HEADER}{s}\n")).unwrap(), g);
    }

    #[test]
    fn large_order_prefix() {
        let g = LabeledGraph::path(70);
        let s = to_graph6(&g);
        assert!(s.starts_with('~'));
        assert_eq!(from_graph6(&s).unwrap(), g);
    }

    #[test]
    fn rejects_malformed() {
        assert!(from_graph6("").is_err());
        assert!(from_graph6("D").is_err());
        assert!(from_graph6("A`").is_err());
        assert!(from_graph6("D\u{7f}c").is_err());
    }

    #[test]
    fn sparse_labels_are_compacted() {
        let g = LabeledGraph::from_edges([(10, 30), (30, 20)]).unwrap();
        let back = from_graph6(&to_graph6(&g)).unwrap();
        assert_eq!(back, LabeledGraph::from_edges([(0, 2), (2, 1)]).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let g = LabeledGraph::new([1, 2, 3, 9], [(1, 2), (2, 3)]).unwrap();
        let text = to_json(&g).to_string();
        assert_eq!(text, r#"{"edges":[[1,2],[2,3]],"labels":[1,2,3,9]}"#);
        assert_eq!(from_json(&text).unwrap(), g);
        assert!(from_json(r#"{"labels":[0],"edges":[[0,0]]}"#).is_err());
    }

    #[test]
    fn dot_lists_everything() {
        let dot = to_dot(&LabeledGraph::path(3), "P");
        assert!(dot.contains("0 -- 1;"));
        assert!(dot.contains("  2;"));
    }
}
