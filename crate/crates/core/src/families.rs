//! The recursive trees `T_k`, `A_k`, `B_k` with interval labelings, their
//! degree profiles, and the star forests `S_k`, `S_k⁺`, `R_k`.
//!
//! Labeling: every sub-copy occupies a contiguous interval and carries the
//! canonical labeling of its own index, shifted by the interval start; each
//! sub-copy's root is its local label 0.
//!
//! * `T_1 = T_2 = K_2` on `{0, 1}`; `T_k` is `T_{k−1}` on `[0, 2F_{k−1})`,
//!   `T_{k−2}` shifted by `c = 2F_{k−1}`, and the edge `0c`.
//! * `A_1 = K_1`; `A_k` is `A_{k−1}` twice, the second copy shifted by
//!   `2^{k−2}`, joined at their roots.
//! * `B_k` is `A_k` plus a pendant at 0 with label `2^{k−1}`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Edge, Label, LabeledGraph};
use crate::subgraph::find_star_forest;
use crate::util::fib;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    T,
    A,
    B,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "T" | "t" => Ok(Family::T),
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            _ => Err(Error::Degenerate(format!("unknown family {s:?}; expected T, A or B"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::T => "T",
            Family::A => "A",
            Family::B => "B",
        };
        f.write_str(s)
    }
}

/// The roots `a, b, c, d` of the four-part decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Roots {
    pub a: Label,
    pub b: Label,
    pub c: Label,
    pub d: Label,
}

/// Half-open label intervals of the four parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Regions {
    pub b: Range<Label>,
    pub a: Range<Label>,
    pub c: Range<Label>,
    pub d: Range<Label>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CanonicalTree {
    pub family: Family,
    pub k: usize,
    #[serde(skip)]
    pub graph: LabeledGraph,
    pub roots: Option<Roots>,
    pub regions: Option<Regions>,
    /// The pendant label of `B_k`.
    pub pendant: Option<Label>,
}

/// `n(T_k) = 2F_k`.
pub fn t_order(k: usize) -> usize {
    2 * fib(k) as usize
}

/// `n(A_k) = 2^{k−1}`.
pub fn a_order(k: usize) -> usize {
    1 << (k - 1)
}

fn t_edges(k: usize, shift: Label, out: &mut Vec<(Label, Label)>) {
    if k <= 2 {
        out.push((shift, shift + 1));
        return;
    }
    let c = t_order(k - 1) as Label;
    t_edges(k - 1, shift, out);
    t_edges(k - 2, shift + c, out);
    out.push((shift, shift + c));
}

fn a_edges(k: usize, shift: Label, out: &mut Vec<(Label, Label)>) {
    if k <= 1 {
        return;
    }
    let c = a_order(k - 1) as Label;
    a_edges(k - 1, shift, out);
    a_edges(k - 1, shift + c, out);
    out.push((shift, shift + c));
}

/// Edge list of canonical `T_k`.
pub fn t_graph(k: usize) -> LabeledGraph {
    let mut edges = Vec::new();
    t_edges(k, 0, &mut edges);
    LabeledGraph::new(0..t_order(k) as Label, edges).expect("canonical edges are valid")
}

fn t_roots(k: usize) -> Option<(Roots, Regions)> {
    if k < 5 {
        return None;
    }
    let a = t_order(k - 2) as Label;
    let c = t_order(k - 1) as Label;
    let d = c + t_order(k - 3) as Label;
    let end = t_order(k) as Label;
    Some((
        Roots { a, b: 0, c, d },
        Regions {
            b: 0..a,
            a: a..c,
            c: c..d,
            d: d..end,
        },
    ))
}

fn a_roots(k: usize) -> Option<(Roots, Regions)> {
    if k < 3 {
        return None;
    }
    let a = a_order(k - 2) as Label;
    let c = a_order(k - 1) as Label;
    let d = c + a;
    let end = a_order(k) as Label;
    Some((
        Roots { a, b: 0, c, d },
        Regions {
            b: 0..a,
            a: a..c,
            c: c..d,
            d: d..end,
        },
    ))
}

pub fn build(family: Family, k: usize) -> Result<CanonicalTree> {
    if k < 1 {
        return Err(Error::IndexOutOfRange { k, range: "k ≥ 1" });
    }
    if k > 40 {
        return Err(Error::Guard(format!("k = {k} would need more than 2^32 labels")));
    }
    let mut edges = Vec::new();
    let (n, decomposition, pendant) = match family {
        Family::T => {
            t_edges(k, 0, &mut edges);
            (t_order(k), t_roots(k), None)
        }
        Family::A => {
            a_edges(k, 0, &mut edges);
            (a_order(k), a_roots(k), None)
        }
        Family::B => {
            a_edges(k, 0, &mut edges);
            let z = a_order(k) as Label;
            edges.push((0, z));
            (a_order(k) + 1, a_roots(k), Some(z))
        }
    };
    let graph = LabeledGraph::new(0..n as Label, edges)?;
    let (roots, regions) = decomposition.unzip();
    Ok(CanonicalTree {
        family,
        k,
        graph,
        roots,
        regions,
        pendant,
    })
}

/// `|V_i|` from the closed forms, indexed by degree (entry 0 is `|V_0| = 0`).
pub fn profile_closed_form(family: Family, k: usize) -> Result<Vec<usize>> {
    match family {
        Family::T => {
            if k < 4 {
                return Err(Error::IndexOutOfRange { k, range: "k ≥ 4 for T" });
            }
            let mut p = vec![0; k];
            for (i, slot) in p.iter_mut().enumerate().skip(1) {
                *slot = match i {
                    1 | 2 => fib(k + 1 - i) as usize,
                    i if i <= k - 2 => fib(k - 1 - i) as usize,
                    _ => 1,
                };
            }
            Ok(p)
        }
        Family::A => {
            if k < 2 {
                return Err(Error::IndexOutOfRange { k, range: "k ≥ 2 for A" });
            }
            let mut p = vec![0; k];
            for (i, slot) in p.iter_mut().enumerate().skip(1) {
                *slot = if i <= k - 2 { 1 << (k - i - 1) } else { 2 };
            }
            Ok(p)
        }
        Family::B => Err(Error::Degenerate("closed-form profiles are given for T and A only".into())),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StarFamily {
    S,
    SPlus,
    R,
}

/// A disjoint union of stars, given by their degrees in non-increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarForest {
    pub degrees: Vec<usize>,
}

impl StarForest {
    pub fn new(mut degrees: Vec<usize>) -> Result<Self> {
        if degrees.contains(&0) {
            return Err(Error::Degenerate("stars need at least one edge".into()));
        }
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        Ok(StarForest { degrees })
    }

    pub fn edge_count(&self) -> usize {
        self.degrees.iter().sum()
    }

    pub fn multiset(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for &d in &self.degrees {
            *m.entry(d).or_insert(0) += 1;
        }
        m
    }

    /// Centre of each star followed by its leaves, labels counting up from 0.
    pub fn graph(&self) -> LabeledGraph {
        let mut edges = Vec::new();
        let mut next: Label = 0;
        for &d in &self.degrees {
            let centre = next;
            for leaf in 1..=d as Label {
                edges.push((centre, centre + leaf));
            }
            next += d as Label + 1;
        }
        LabeledGraph::from_edges(edges).expect("stars are simple")
    }
}

pub fn star_forest(family: StarFamily, k: usize) -> Result<StarForest> {
    let degrees = match family {
        StarFamily::S | StarFamily::SPlus => {
            if k < 5 {
                return Err(Error::IndexOutOfRange { k, range: "k ≥ 5 for S and S⁺" });
            }
            let (f4, f3, f2) = (fib(k - 4) as usize, fib(k - 3) as usize, fib(k - 2) as usize);
            let mut d: Vec<usize> = (1..f2).map(|i| if i <= f4 { 4 } else if i <= f3 { 3 } else { 1 }).collect();
            if family == StarFamily::SPlus {
                d.push(1);
            }
            d
        }
        StarFamily::R => {
            if k < 4 {
                return Err(Error::IndexOutOfRange { k, range: "k ≥ 4 for R" });
            }
            (1..=1usize << (k - 3)).map(|i| if i <= 1 << (k - 4) { 3 } else { 1 }).collect()
        }
    };
    StarForest::new(degrees)
}

/// Injective map from the forest's labels into the host carrying every
/// forest edge onto a host edge, if one exists.
pub fn embeds_in(forest: &StarForest, host: &LabeledGraph) -> Option<BTreeMap<Label, Label>> {
    let stars = find_star_forest(&forest.degrees, host)?;
    let mut map = BTreeMap::new();
    let mut next: Label = 0;
    for (centre, leaves) in stars {
        map.insert(next, centre);
        for (j, leaf) in leaves.into_iter().enumerate() {
            map.insert(next + 1 + j as Label, leaf);
        }
        next = map.len() as Label;
    }
    Some(map)
}

/// Checks an embedding witness edge by edge.
pub fn check_embedding(pattern: &LabeledGraph, host: &LabeledGraph, map: &BTreeMap<Label, Label>) -> bool {
    let mut images: Vec<Label> = map.values().copied().collect();
    images.sort_unstable();
    images.dedup();
    images.len() == pattern.order()
        && pattern.edges().iter().all(|e: &Edge| {
            matches!((map.get(&e.lo()), map.get(&e.hi())), (Some(&x), Some(&y)) if host.has_edge(x, y))
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t5_layout() {
        let t = build(Family::T, 5).unwrap();
        let expected = LabeledGraph::from_edges([(0, 1), (2, 3), (0, 2), (4, 5), (0, 4), (6, 7), (8, 9), (6, 8), (0, 6)]).unwrap();
        assert_eq!(t.graph, expected);
        assert_eq!(t.roots, Some(Roots { a: 4, b: 0, c: 6, d: 8 }));
        let r = t.regions.unwrap();
        assert_eq!((r.b, r.a, r.c, r.d), (0..4, 4..6, 6..8, 8..10));
    }

    #[test]
    fn orders() {
        assert_eq!(build(Family::T, 5).unwrap().graph.order(), 10);
        assert_eq!(build(Family::A, 4).unwrap().graph.order(), 8);
        assert_eq!(build(Family::B, 4).unwrap().graph.order(), 9);
        assert!(build(Family::T, 0).is_err());
    }

    #[test]
    fn small_profiles() {
        assert_eq!(profile_closed_form(Family::T, 5).unwrap(), vec![0, 5, 3, 1, 1]);
        assert_eq!(profile_closed_form(Family::A, 4).unwrap(), vec![0, 4, 2, 2]);
        assert_eq!(profile_closed_form(Family::T, 4).unwrap(), vec![0, 3, 2, 1]);
        assert!(profile_closed_form(Family::T, 3).is_err());
    }

    #[test]
    fn small_star_forests() {
        assert_eq!(star_forest(StarFamily::S, 5).unwrap().degrees, vec![4]);
        assert_eq!(star_forest(StarFamily::SPlus, 5).unwrap().degrees, vec![4, 1]);
        assert_eq!(star_forest(StarFamily::S, 6).unwrap().degrees, vec![4, 3]);
        assert_eq!(star_forest(StarFamily::R, 4).unwrap().degrees, vec![3, 1]);
    }

    #[test]
    fn family_names_parse() {
        assert_eq!("T".parse::<Family>().unwrap(), Family::T);
        assert!("Q".parse::<Family>().is_err());
    }
}
