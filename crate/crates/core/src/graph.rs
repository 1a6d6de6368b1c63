//! Labeled simple graphs and the copies `G_σ` they induce on their own label
//! set.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

pub type Label = u32;

/// An unordered pair of distinct labels, stored with the smaller label first.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(Label, Label);

impl Edge {
    pub fn new(a: Label, b: Label) -> Result<Edge> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Edge(a, b)),
            std::cmp::Ordering::Greater => Ok(Edge(b, a)),
            std::cmp::Ordering::Equal => Err(Error::Loop(a)),
        }
    }

    pub fn lo(self) -> Label {
        self.0
    }

    pub fn hi(self) -> Label {
        self.1
    }

    pub fn ends(self) -> [Label; 2] {
        [self.0, self.1]
    }

    pub fn touches(self, x: Label) -> bool {
        self.0 == x || self.1 == x
    }

    /// Relabels both endpoints; `f` must stay injective on the pair.
    pub fn map(self, f: impl Fn(Label) -> Label) -> Edge {
        Edge::new(f(self.0), f(self.1)).expect("injective relabelling")
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.0, self.1)
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.0, self.1)
    }
}

impl Serialize for Edge {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.0, self.1].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Edge {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [a, b] = <[Label; 2]>::deserialize(d)?;
        Edge::new(a, b).map_err(serde::de::Error::custom)
    }
}

/// A single edge move `rs → kl`, or the neutral replacement `∅ → ∅`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeReplacement {
    Neutral,
    Move { remove: Edge, add: Edge },
}

impl EdgeReplacement {
    pub fn new(remove: (Label, Label), add: (Label, Label)) -> Result<Self> {
        Ok(EdgeReplacement::Move {
            remove: Edge::new(remove.0, remove.1)?,
            add: Edge::new(add.0, add.1)?,
        })
    }

    /// A move that puts an edge back where it was; it changes nothing.
    pub fn is_trivial(&self) -> bool {
        match self {
            EdgeReplacement::Neutral => true,
            EdgeReplacement::Move { remove, add } => remove == add,
        }
    }

    pub fn map(self, f: impl Fn(Label) -> Label) -> Self {
        match self {
            EdgeReplacement::Neutral => EdgeReplacement::Neutral,
            EdgeReplacement::Move { remove, add } => EdgeReplacement::Move {
                remove: remove.map(&f),
                add: add.map(&f),
            },
        }
    }

    /// The move that undoes this one.
    pub fn reversed(self) -> Self {
        match self {
            EdgeReplacement::Neutral => EdgeReplacement::Neutral,
            EdgeReplacement::Move { remove, add } => EdgeReplacement::Move { remove: add, add: remove },
        }
    }
}

impl fmt::Display for EdgeReplacement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeReplacement::Neutral => write!(f, "(∅→∅)"),
            EdgeReplacement::Move { remove, add } => write!(f, "({remove}→{add})"),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ReplacementJson {
    remove: Option<Edge>,
    add: Option<Edge>,
}

impl Serialize for EdgeReplacement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let json = match *self {
            EdgeReplacement::Neutral => ReplacementJson { remove: None, add: None },
            EdgeReplacement::Move { remove, add } => ReplacementJson {
                remove: Some(remove),
                add: Some(add),
            },
        };
        json.serialize(s)
    }
}

impl<'de> Deserialize<'de> for EdgeReplacement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match ReplacementJson::deserialize(d)? {
            ReplacementJson { remove: None, add: None } => Ok(EdgeReplacement::Neutral),
            ReplacementJson {
                remove: Some(remove),
                add: Some(add),
            } => Ok(EdgeReplacement::Move { remove, add }),
            _ => Err(serde::de::Error::custom("remove and add must both be present or both null")),
        }
    }
}

/// A simple undirected graph on an explicit set of non-negative integer
/// labels. Isolated labels are allowed.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LabeledGraph {
    labels: BTreeSet<Label>,
    edges: BTreeSet<Edge>,
}

/// Degree sequence (non-increasing) and profile: `profile[i] = |V_i(G)|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeProfile {
    pub sequence: Vec<usize>,
    pub profile: Vec<usize>,
}

impl LabeledGraph {
    pub fn new<L, E>(labels: L, edges: E) -> Result<Self>
    where
        L: IntoIterator<Item = Label>,
        E: IntoIterator<Item = (Label, Label)>,
    {
        let labels: BTreeSet<Label> = labels.into_iter().collect();
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            let e = Edge::new(a, b)?;
            if !labels.contains(&a) || !labels.contains(&b) {
                return Err(Error::DanglingEdge(e));
            }
            set.insert(e);
        }
        Ok(LabeledGraph { labels, edges: set })
    }

    /// Graph whose label set is exactly the endpoints of `edges`.
    pub fn from_edges<E: IntoIterator<Item = (Label, Label)>>(edges: E) -> Result<Self> {
        let edges: Vec<(Label, Label)> = edges.into_iter().collect();
        let labels: Vec<Label> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        Self::new(labels, edges)
    }

    /// Adds one edge between existing labels.
    pub fn with_edge(&self, e: Edge) -> Result<Self> {
        if !self.labels.contains(&e.lo()) || !self.labels.contains(&e.hi()) {
            return Err(Error::DanglingEdge(e));
        }
        let mut out = self.clone();
        if !out.edges.insert(e) {
            return Err(Error::DuplicateEdge(e));
        }
        Ok(out)
    }

    pub(crate) fn from_parts(labels: BTreeSet<Label>, edges: BTreeSet<Edge>) -> Self {
        debug_assert!(edges.iter().all(|e| labels.contains(&e.lo()) && labels.contains(&e.hi())));
        LabeledGraph { labels, edges }
    }

    pub fn complete(n: Label) -> Self {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| Edge(i, j))).collect();
        LabeledGraph { labels: (0..n).collect(), edges }
    }

    pub fn empty<L: IntoIterator<Item = Label>>(labels: L) -> Self {
        LabeledGraph {
            labels: labels.into_iter().collect(),
            edges: BTreeSet::new(),
        }
    }

    pub fn complete_bipartite(left: Label, right: Label) -> Self {
        let edges = (0..left)
            .flat_map(|i| (left..left + right).map(move |j| Edge(i, j)))
            .collect();
        LabeledGraph {
            labels: (0..left + right).collect(),
            edges,
        }
    }

    pub fn path(n: Label) -> Self {
        let edges = (1..n).map(|i| Edge(i - 1, i)).collect();
        LabeledGraph { labels: (0..n).collect(), edges }
    }

    pub fn star(leaves: Label) -> Self {
        let edges = (1..=leaves).map(|i| Edge(0, i)).collect();
        LabeledGraph {
            labels: (0..=leaves).collect(),
            edges,
        }
    }

    pub fn labels(&self) -> &BTreeSet<Label> {
        &self.labels
    }

    pub fn label_vec(&self) -> Vec<Label> {
        self.labels.iter().copied().collect()
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    /// n(G)
    pub fn order(&self) -> usize {
        self.labels.len()
    }

    /// e(G)
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: Label, b: Label) -> bool {
        Edge::new(a, b).is_ok_and(|e| self.edges.contains(&e))
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.edges.contains(&e)
    }

    pub fn adjacency(&self) -> BTreeMap<Label, Vec<Label>> {
        let mut adj: BTreeMap<Label, Vec<Label>> = self.labels.iter().map(|&l| (l, Vec::new())).collect();
        for e in &self.edges {
            adj.get_mut(&e.lo()).expect("endpoint").push(e.hi());
            adj.get_mut(&e.hi()).expect("endpoint").push(e.lo());
        }
        adj
    }

    pub fn degree(&self, x: Label) -> usize {
        self.edges.iter().filter(|e| e.touches(x)).count()
    }

    pub fn degrees(&self) -> BTreeMap<Label, usize> {
        let mut deg: BTreeMap<Label, usize> = self.labels.iter().map(|&l| (l, 0)).collect();
        for e in &self.edges {
            *deg.get_mut(&e.lo()).expect("endpoint") += 1;
            *deg.get_mut(&e.hi()).expect("endpoint") += 1;
        }
        deg
    }

    pub fn min_degree(&self) -> usize {
        self.degrees().values().copied().min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().values().copied().max().unwrap_or(0)
    }

    /// Non-edges of the complete graph on the label set.
    pub fn non_edges(&self) -> Vec<Edge> {
        let labels = self.label_vec();
        let mut out = Vec::new();
        for (i, &a) in labels.iter().enumerate() {
            for &b in &labels[i + 1..] {
                let e = Edge(a, b);
                if !self.edges.contains(&e) {
                    out.push(e);
                }
            }
        }
        out
    }

    /// `G_σ`: the copy with `E(G_σ) = { ij : σ(i)σ(j) ∈ L_G }`.
    pub fn copy_under(&self, sigma: &Permutation) -> Result<Self> {
        if sigma.len() != self.labels.len() || !self.labels.iter().all(|&l| sigma.contains(l)) {
            return Err(Error::DomainMismatch);
        }
        let inv = sigma.inverse();
        let edges = self.edges.iter().map(|e| e.map(|x| inv.apply(x))).collect();
        Ok(LabeledGraph {
            labels: self.labels.clone(),
            edges,
        })
    }

    /// `G − e + e′`. The neutral replacement and `e → e` return `G`.
    pub fn apply_replacement(&self, r: &EdgeReplacement) -> Result<Self> {
        let mut edges = self.edges.clone();
        apply_to_edge_set(&mut edges, &self.labels, r)?;
        Ok(LabeledGraph {
            labels: self.labels.clone(),
            edges,
        })
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        let mut sequence: Vec<usize> = self.degrees().into_values().collect();
        sequence.sort_unstable_by(|a, b| b.cmp(a));
        let max = sequence.first().copied().unwrap_or(0);
        let mut profile = vec![0; max + 1];
        for &d in &sequence {
            profile[d] += 1;
        }
        DegreeProfile { sequence, profile }
    }

    /// `G ∪ K_1` using the label one past the largest label.
    pub fn with_isolated_vertex(&self) -> (Self, Label) {
        let fresh = self.labels.iter().next_back().map_or(0, |&l| l + 1);
        let mut g = self.clone();
        g.labels.insert(fresh);
        (g, fresh)
    }

    /// Adds `shift` to every label.
    pub fn shifted(&self, shift: Label) -> Self {
        LabeledGraph {
            labels: self.labels.iter().map(|l| l + shift).collect(),
            edges: self.edges.iter().map(|e| Edge(e.0 + shift, e.1 + shift)).collect(),
        }
    }

    /// Subgraph induced on `subset`.
    pub fn induced(&self, subset: &BTreeSet<Label>) -> Self {
        LabeledGraph {
            labels: self.labels.intersection(subset).copied().collect(),
            edges: self
                .edges
                .iter()
                .filter(|e| subset.contains(&e.0) && subset.contains(&e.1))
                .copied()
                .collect(),
        }
    }

    /// Drops labels that meet no edge.
    pub fn without_isolated(&self) -> Self {
        LabeledGraph {
            labels: self.edges.iter().flat_map(|e| e.ends()).collect(),
            edges: self.edges.clone(),
        }
    }

    /// Union with a graph on disjoint labels plus extra edges between them.
    pub fn join(&self, other: &LabeledGraph, extra: &[(Label, Label)]) -> Result<Self> {
        if !self.labels.is_disjoint(&other.labels) {
            return Err(Error::Degenerate("joined graphs share labels".into()));
        }
        let labels: BTreeSet<Label> = self.labels.union(&other.labels).copied().collect();
        let mut edges: BTreeSet<Edge> = self.edges.union(&other.edges).copied().collect();
        for &(a, b) in extra {
            let e = Edge::new(a, b)?;
            if !labels.contains(&a) || !labels.contains(&b) {
                return Err(Error::DanglingEdge(e));
            }
            edges.insert(e);
        }
        Ok(LabeledGraph { labels, edges })
    }

    /// Relabels through an injective map defined on every label.
    pub fn relabel(&self, f: impl Fn(Label) -> Label) -> Self {
        LabeledGraph {
            labels: self.labels.iter().map(|&l| f(l)).collect(),
            edges: self.edges.iter().map(|e| e.map(&f)).collect(),
        }
    }

    pub fn is_forest(&self) -> bool {
        let mut uf = crate::util::UnionFind::new(self.labels.iter().copied());
        self.edges.iter().all(|e| uf.union(e.lo(), e.hi()))
    }
}

/// Applies a replacement to a bare edge set, checking its preconditions.
pub(crate) fn apply_to_edge_set(
    edges: &mut BTreeSet<Edge>,
    labels: &BTreeSet<Label>,
    r: &EdgeReplacement,
) -> Result<()> {
    let EdgeReplacement::Move { remove, add } = *r else {
        return Ok(());
    };
    for x in add.ends() {
        if !labels.contains(&x) {
            return Err(Error::UnknownLabel(x));
        }
    }
    if !edges.contains(&remove) {
        return Err(Error::MissingEdge(remove));
    }
    if remove == add {
        return Ok(());
    }
    if edges.contains(&add) {
        return Err(Error::DuplicateEdge(add));
    }
    edges.remove(&remove);
    edges.insert(add);
    Ok(())
}

impl fmt::Debug for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LabeledGraph {{ labels: {:?}, edges: {:?} }}", self.labels, self.edges)
    }
}
