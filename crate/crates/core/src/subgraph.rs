//! Non-induced subgraph embedding by backtracking, with a separate search
//! for star forests.

use std::collections::BTreeMap;

use crate::graph::{Label, LabeledGraph};
use crate::iso::Dense;

struct Search<'a> {
    p: &'a Dense,
    h: &'a Dense,
    order: Vec<usize>,
    /// For each position, an earlier pattern neighbour if there is one.
    anchor: Vec<Option<usize>>,
    hosts_by_degree: Vec<usize>,
    map: Vec<usize>,
    used: Vec<bool>,
}

const FREE: usize = usize::MAX;

impl Search<'_> {
    fn fits(&self, v: usize, w: usize) -> bool {
        !self.used[w]
            && self.h.nbrs[w].len() >= self.p.nbrs[v].len()
            && self.p.nbrs[v]
                .iter()
                .all(|&u| self.map[u] == FREE || self.h.adjacent(self.map[u], w))
    }

    fn run(&mut self, pos: usize) -> bool {
        if pos == self.order.len() {
            return true;
        }
        let v = self.order[pos];
        // Tightest fit first keeps high-degree host vertices for later centres.
        let mut cands: Vec<usize> = match self.anchor[pos] {
            Some(u) => self.h.nbrs[self.map[u]].clone(),
            None => self.hosts_by_degree.clone(),
        };
        cands.retain(|&w| self.fits(v, w));
        cands.sort_by_key(|&w| (self.h.nbrs[w].len(), w));
        for w in cands {
            self.map[v] = w;
            self.used[w] = true;
            if self.run(pos + 1) {
                return true;
            }
            self.used[w] = false;
            self.map[v] = FREE;
        }
        false
    }
}

/// An injective map `labels(pattern) → labels(host)` sending every pattern
/// edge to a host edge, if one exists.
pub fn find_embedding(pattern: &LabeledGraph, host: &LabeledGraph) -> Option<BTreeMap<Label, Label>> {
    if pattern.order() > host.order() || pattern.size() > host.size() {
        return None;
    }
    let p = Dense::new(pattern);
    let h = Dense::new(host);
    let n = p.n();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut anchor = Vec::with_capacity(n);
    while order.len() < n {
        // Continue inside the current component, else open the next one at
        // its highest-degree vertex.
        let frontier = (0..n)
            .filter(|&v| !placed[v] && p.nbrs[v].iter().any(|&u| placed[u]))
            .max_by_key(|&v| (p.nbrs[v].iter().filter(|&&u| placed[u]).count(), p.nbrs[v].len(), usize::MAX - v));
        let v = frontier.unwrap_or_else(|| {
            (0..n)
                .filter(|&v| !placed[v])
                .max_by_key(|&v| (p.nbrs[v].len(), usize::MAX - v))
                .expect("unplaced vertex")
        });
        anchor.push(p.nbrs[v].iter().copied().find(|&u| placed[u]));
        placed[v] = true;
        order.push(v);
    }
    let hosts_by_degree: Vec<usize> = (0..h.n()).collect();
    let mut s = Search {
        p: &p,
        h: &h,
        order,
        anchor,
        hosts_by_degree,
        map: vec![FREE; n],
        used: vec![false; h.n()],
    };
    s.run(0).then(|| {
        s.map
            .iter()
            .enumerate()
            .map(|(v, &w)| (p.labels[v], h.labels[w]))
            .collect()
    })
}

pub fn contains_subgraph(host: &LabeledGraph, pattern: &LabeledGraph) -> bool {
    find_embedding(pattern, host).is_some()
}

/// Leaf assignment for a fixed set of centres: one slot per wanted leaf,
/// matched to free host vertices by augmenting paths.
#[derive(Clone)]
struct Slots {
    /// Centre (host index) of each slot.
    centre: Vec<usize>,
    leaf: Vec<usize>,
    owner: Vec<usize>,
    is_centre: Vec<bool>,
}

impl Slots {
    fn augment(&mut self, h: &Dense, slot: usize, seen: &mut [bool]) -> bool {
        for &w in &h.nbrs[self.centre[slot]] {
            if self.is_centre[w] || seen[w] {
                continue;
            }
            seen[w] = true;
            let prev = self.owner[w];
            if prev == FREE || self.augment(h, prev, seen) {
                self.owner[w] = slot;
                self.leaf[slot] = w;
                return true;
            }
        }
        false
    }

    /// Makes `c` the centre of `d` new slots; false if the leaves no longer fit.
    fn add_centre(&mut self, h: &Dense, c: usize, d: usize) -> bool {
        self.is_centre[c] = true;
        let mut pending: Vec<usize> = Vec::with_capacity(d + 1);
        if self.owner[c] != FREE {
            let s = self.owner[c];
            self.owner[c] = FREE;
            self.leaf[s] = FREE;
            pending.push(s);
        }
        for _ in 0..d {
            self.centre.push(c);
            self.leaf.push(FREE);
            pending.push(self.centre.len() - 1);
        }
        let mut seen = vec![false; h.n()];
        pending.into_iter().all(|s| {
            seen.iter_mut().for_each(|x| *x = false);
            self.augment(h, s, &mut seen)
        })
    }
}

fn place_stars(h: &Dense, degrees: &[usize], i: usize, last: usize, slots: Slots, centres: &mut Vec<usize>) -> Option<Slots> {
    if i == degrees.len() {
        return Some(slots);
    }
    let d = degrees[i];
    // Equal stars are interchangeable, so their centres rise.
    let floor = if i > 0 && degrees[i - 1] == d { last + 1 } else { 0 };
    let mut cands: Vec<usize> = (floor..h.n()).filter(|&w| !slots.is_centre[w] && h.nbrs[w].len() >= d).collect();
    cands.sort_by_key(|&w| (h.nbrs[w].len(), w));
    for w in cands {
        let mut next = slots.clone();
        if !next.add_centre(h, w, d) {
            continue;
        }
        centres.push(w);
        if let Some(done) = place_stars(h, degrees, i + 1, w, next, centres) {
            return Some(done);
        }
        centres.pop();
    }
    None
}

/// Vertex-disjoint stars of the given degrees (non-increasing) inside
/// `host`: each centre label with its leaf labels.
pub fn find_star_forest(degrees: &[usize], host: &LabeledGraph) -> Option<Vec<(Label, Vec<Label>)>> {
    if degrees.iter().map(|d| d + 1).sum::<usize>() > host.order() {
        return None;
    }
    let h = Dense::new(host);
    let slots = Slots {
        centre: Vec::new(),
        leaf: Vec::new(),
        owner: vec![FREE; h.n()],
        is_centre: vec![false; h.n()],
    };
    let mut centres = Vec::with_capacity(degrees.len());
    let done = place_stars(&h, degrees, 0, 0, slots, &mut centres)?;
    let mut out: Vec<(Label, Vec<Label>)> = centres.iter().map(|&c| (h.labels[c], Vec::new())).collect();
    let mut slot = 0;
    for (i, &d) in degrees.iter().enumerate() {
        for _ in 0..d {
            out[i].1.push(h.labels[done.leaf[slot]]);
            slot += 1;
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_in_cycle() {
        let c5 = LabeledGraph::from_edges((0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        let p4 = LabeledGraph::path(4);
        let map = find_embedding(&p4, &c5).unwrap();
        assert!(p4.edges().iter().all(|e| c5.has_edge(map[&e.lo()], map[&e.hi()])));
        assert!(!contains_subgraph(&c5, &LabeledGraph::complete(3)));
    }

    #[test]
    fn two_edges_need_four_vertices() {
        let two_k2 = LabeledGraph::from_edges([(0, 1), (2, 3)]).unwrap();
        assert!(!contains_subgraph(&LabeledGraph::complete(3), &two_k2));
        assert!(contains_subgraph(&LabeledGraph::path(4), &two_k2));
    }

    #[test]
    fn isolated_pattern_vertices_need_room() {
        let g = LabeledGraph::new(0..3, [(0, 1)]).unwrap();
        assert!(contains_subgraph(&LabeledGraph::path(3), &g));
        assert!(!contains_subgraph(&LabeledGraph::complete(2), &g));
    }

    #[test]
    fn star_forests_agree_with_backtracking() {
        let hosts = [LabeledGraph::path(7), LabeledGraph::star(4), LabeledGraph::complete_bipartite(2, 5), LabeledGraph::complete(5)];
        let forests: [&[usize]; 5] = [&[1, 1], &[2, 1], &[3, 1], &[2, 2], &[1, 1, 1]];
        for host in &hosts {
            for degrees in forests {
                let mut edges = Vec::new();
                let mut next = 0;
                for &d in degrees {
                    edges.extend((1..=d as Label).map(|j| (next, next + j)));
                    next += d as Label + 1;
                }
                let pattern = LabeledGraph::from_edges(edges).unwrap();
                assert_eq!(find_star_forest(degrees, host).is_some(), contains_subgraph(host, &pattern), "{degrees:?} in {host:?}");
            }
        }
    }
}
