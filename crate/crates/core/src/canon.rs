//! Canonical forms for small graphs (at most 16 vertices) by
//! individualisation and refinement. Two graphs get the same form exactly
//! when they are isomorphic; labels are forgotten.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::LabeledGraph;

pub const MAX_CANON_ORDER: usize = 16;

/// Vertex count plus the upper-triangle adjacency bits under the best
/// ordering found.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub n: u8,
    pub code: u128,
}

impl CanonicalForm {
    /// Rebuilds a representative graph on labels `0..n`.
    pub fn to_graph(&self) -> LabeledGraph {
        let n = self.n as u32;
        let mut edges = Vec::new();
        let mut bit = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.code >> bit & 1 == 1 {
                    edges.push((i, j));
                }
                bit += 1;
            }
        }
        LabeledGraph::new(0..n, edges).expect("valid pairs")
    }
}

struct Small {
    n: usize,
    adj: Vec<u16>,
}

impl Small {
    fn twins(&self, u: usize, v: usize) -> bool {
        let mask = !((1u16 << u) | (1u16 << v));
        self.adj[u] & mask == self.adj[v] & mask
    }
}

pub fn canonical_form(g: &LabeledGraph) -> Result<CanonicalForm> {
    let labels = g.label_vec();
    let n = labels.len();
    if n > MAX_CANON_ORDER {
        return Err(Error::Guard(format!("canonical forms are limited to {MAX_CANON_ORDER} vertices")));
    }
    let index: HashMap<_, _> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let mut adj = vec![0u16; n];
    for e in g.edges() {
        let (a, b) = (index[&e.lo()], index[&e.hi()]);
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    let s = Small { n, adj };
    let mut best = None;
    search(&s, refine(&s, vec![(0..n).collect()]), &mut best);
    Ok(CanonicalForm {
        n: n as u8,
        code: best.unwrap_or(0),
    })
}

/// Splits cells until every vertex in a cell sees the same number of
/// neighbours in every cell. Splits depend only on the isomorphism type.
fn refine(s: &Small, mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    loop {
        let masks: Vec<u16> = cells.iter().map(|c| c.iter().fold(0u16, |m, &v| m | 1 << v)).collect();
        let sig = |v: usize| -> Vec<u32> { masks.iter().map(|m| (s.adj[v] & m).count_ones()).collect() };
        let mut next = Vec::with_capacity(cells.len());
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<u32>, usize)> = cell.iter().map(|&v| (sig(v), v)).collect();
            keyed.sort();
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    next.push(keyed[start..i].iter().map(|(_, v)| *v).collect());
                    start = i;
                }
            }
        }
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}

fn code_of(s: &Small, cells: &[Vec<usize>]) -> u128 {
    let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
    let mut code = 0u128;
    let mut bit = 0;
    for i in 0..s.n {
        for j in i + 1..s.n {
            if s.adj[order[i]] >> order[j] & 1 == 1 {
                code |= 1 << bit;
            }
            bit += 1;
        }
    }
    code
}

fn search(s: &Small, cells: Vec<Vec<usize>>, best: &mut Option<u128>) {
    let Some(target) = cells.iter().position(|c| c.len() > 1) else {
        let code = code_of(s, &cells);
        if best.is_none_or(|b| code > b) {
            *best = Some(code);
        }
        return;
    };
    let mut tried: Vec<usize> = Vec::new();
    for &v in &cells[target] {
        // Swapping twins is an automorphism that preserves the partition.
        if tried.iter().any(|&u| s.twins(u, v)) {
            continue;
        }
        tried.push(v);
        let mut next = cells[..target].to_vec();
        next.push(vec![v]);
        next.push(cells[target].iter().copied().filter(|&u| u != v).collect());
        next.extend_from_slice(&cells[target + 1..]);
        search(s, refine(s, next), best);
    }
}
