//! Isomorphism search: colour refinement plus backtracking for general
//! graphs, AHU codes for forests, and automorphism group generators.

use std::collections::{BTreeMap, HashMap};
use std::ops::ControlFlow;

use num_bigint::BigUint;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::graph::{Label, LabeledGraph};
use crate::perm::Permutation;
use crate::util::UnionFind;

/// A bijection `labels(G) → labels(H)` carrying `E(G)` onto `E(H)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoWitness {
    pub map: BTreeMap<Label, Label>,
}

impl IsoWitness {
    pub fn apply(&self, x: Label) -> Label {
        self.map[&x]
    }

    /// The witness as a permutation; only meaningful when both graphs share
    /// a label set.
    pub fn to_permutation(&self) -> crate::Result<Permutation> {
        Permutation::from_map(&self.map)
    }

    /// Checks the witness against both graphs.
    pub fn verify(&self, g: &LabeledGraph, h: &LabeledGraph) -> bool {
        if self.map.len() != g.order() || g.order() != h.order() || g.size() != h.size() {
            return false;
        }
        if !g.labels().iter().all(|l| self.map.get(l).is_some_and(|t| h.labels().contains(t))) {
            return false;
        }
        let mut targets: Vec<Label> = self.map.values().copied().collect();
        targets.sort_unstable();
        targets.dedup();
        targets.len() == g.order() && g.edges().iter().all(|e| h.has_edge(self.apply(e.lo()), self.apply(e.hi())))
    }
}

/// Index-based view of a graph used by the searches.
#[derive(Clone, Debug)]
pub(crate) struct Dense {
    pub labels: Vec<Label>,
    pub nbrs: Vec<Vec<usize>>,
    adj: Vec<bool>,
}

impl Dense {
    pub fn new(g: &LabeledGraph) -> Dense {
        let labels = g.label_vec();
        let n = labels.len();
        let index: HashMap<Label, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let mut nbrs = vec![Vec::new(); n];
        let mut adj = vec![false; n * n];
        for e in g.edges() {
            let (a, b) = (index[&e.lo()], index[&e.hi()]);
            nbrs[a].push(b);
            nbrs[b].push(a);
            adj[a * n + b] = true;
            adj[b * n + a] = true;
        }
        Dense { labels, nbrs, adj }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a * self.n() + b]
    }
}

/// Joint colour refinement on the disjoint union of `a` and `b`, so colour
/// ids are comparable between the two graphs.
fn refine_joint(a: &Dense, b: &Dense) -> (Vec<u32>, Vec<u32>) {
    let mut ca: Vec<u32> = a.nbrs.iter().map(|v| v.len() as u32).collect();
    let mut cb: Vec<u32> = b.nbrs.iter().map(|v| v.len() as u32).collect();
    let mut classes = usize::MAX;
    loop {
        let sig = |g: &Dense, c: &[u32], v: usize| {
            let mut s: Vec<u32> = g.nbrs[v].iter().map(|&u| c[u]).collect();
            s.sort_unstable();
            (c[v], s)
        };
        let sa: Vec<_> = (0..a.n()).map(|v| sig(a, &ca, v)).collect();
        let sb: Vec<_> = (0..b.n()).map(|v| sig(b, &cb, v)).collect();
        let mut ids: BTreeMap<&(u32, Vec<u32>), u32> = BTreeMap::new();
        for s in sa.iter().chain(sb.iter()) {
            ids.insert(s, 0);
        }
        for (i, id) in ids.values_mut().enumerate() {
            *id = i as u32;
        }
        let na: Vec<u32> = sa.iter().map(|s| ids[s]).collect();
        let nb: Vec<u32> = sb.iter().map(|s| ids[s]).collect();
        let count = ids.len();
        ca = na;
        cb = nb;
        if count == classes {
            return (ca, cb);
        }
        classes = count;
    }
}

fn histogram(c: &[u32]) -> BTreeMap<u32, usize> {
    let mut h = BTreeMap::new();
    for &x in c {
        *h.entry(x).or_insert(0) += 1;
    }
    h
}

/// Backtracking matcher from `g` onto `h` with refined colours.
struct Matcher<'a> {
    g: &'a Dense,
    h: &'a Dense,
    order: Vec<usize>,
    candidates: Vec<Vec<usize>>,
    map: Vec<usize>,
    used: Vec<bool>,
}

const UNMAPPED: usize = usize::MAX;

impl<'a> Matcher<'a> {
    /// Returns `None` when the colour histograms already rule out a match.
    fn new(g: &'a Dense, h: &'a Dense) -> Option<Matcher<'a>> {
        if g.n() != h.n() {
            return None;
        }
        let (cg, ch) = refine_joint(g, h);
        let hist = histogram(&cg);
        if hist != histogram(&ch) {
            return None;
        }
        let mut by_color: HashMap<u32, Vec<usize>> = HashMap::new();
        for (w, &c) in ch.iter().enumerate() {
            by_color.entry(c).or_default().push(w);
        }
        let n = g.n();
        let mut placed = vec![false; n];
        let mut links = vec![0usize; n];
        let mut order = Vec::with_capacity(n);
        for _ in 0..n {
            let v = (0..n)
                .filter(|&v| !placed[v])
                .max_by(|&x, &y| {
                    links[x]
                        .cmp(&links[y])
                        .then(hist[&cg[y]].cmp(&hist[&cg[x]]))
                        .then(y.cmp(&x))
                })
                .expect("unplaced vertex");
            placed[v] = true;
            order.push(v);
            for &u in &g.nbrs[v] {
                links[u] += 1;
            }
        }
        let candidates = (0..n).map(|v| by_color[&cg[v]].clone()).collect();
        Some(Matcher {
            g,
            h,
            order,
            candidates,
            map: vec![UNMAPPED; n],
            used: vec![false; h.n()],
        })
    }

    fn consistent(&self, pos: usize, v: usize, w: usize) -> bool {
        self.order[..pos]
            .iter()
            .all(|&u| self.g.adjacent(u, v) == self.h.adjacent(self.map[u], w))
    }

    /// Depth-first search; `fixed[pos]` pins the image of `order[pos]`.
    fn search<F>(&mut self, pos: usize, fixed: &[usize], visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if pos == self.order.len() {
            return visit(&self.map);
        }
        let v = self.order[pos];
        let pinned = fixed.get(pos).copied();
        let cands: Vec<usize> = match pinned {
            Some(w) => vec![w],
            None => self.candidates[v].clone(),
        };
        for w in cands {
            if self.used[w] || !self.candidates[v].contains(&w) || !self.consistent(pos, v, w) {
                continue;
            }
            self.map[v] = w;
            self.used[w] = true;
            let flow = self.search(pos + 1, fixed, visit);
            self.used[w] = false;
            self.map[v] = UNMAPPED;
            flow?;
        }
        ControlFlow::Continue(())
    }
}

fn witness_from(g: &Dense, h: &Dense, map: &[usize]) -> IsoWitness {
    IsoWitness {
        map: map.iter().enumerate().map(|(v, &w)| (g.labels[v], h.labels[w])).collect(),
    }
}

/// Streams every isomorphism `g → h` until `visit` breaks.
pub fn for_each_isomorphism<F>(g: &LabeledGraph, h: &LabeledGraph, mut visit: F)
where
    F: FnMut(&IsoWitness) -> ControlFlow<()>,
{
    if g.order() != h.order() || g.size() != h.size() {
        return;
    }
    let (dg, dh) = (Dense::new(g), Dense::new(h));
    let Some(mut m) = Matcher::new(&dg, &dh) else {
        return;
    };
    let _ = m.search(0, &[], &mut |map| visit(&witness_from(&dg, &dh, map)));
}

pub fn all_isomorphisms(g: &LabeledGraph, h: &LabeledGraph) -> Vec<IsoWitness> {
    let mut out = Vec::new();
    for_each_isomorphism(g, h, |w| {
        out.push(w.clone());
        ControlFlow::Continue(())
    });
    out
}

/// One isomorphism, or `None`. Forests go through AHU codes.
pub fn find_isomorphism(g: &LabeledGraph, h: &LabeledGraph) -> Option<IsoWitness> {
    if g.order() != h.order() || g.size() != h.size() {
        return None;
    }
    if g.is_forest() && h.is_forest() {
        return forest_isomorphism(g, h);
    }
    let mut found = None;
    for_each_isomorphism(g, h, |w| {
        found = Some(w.clone());
        ControlFlow::Break(())
    });
    found
}

pub fn are_isomorphic(g: &LabeledGraph, h: &LabeledGraph) -> bool {
    find_isomorphism(g, h).is_some()
}

/// Generators of `Aut(G)` together with its exact order.
#[derive(Clone, Debug)]
pub struct Automorphisms {
    pub generators: Vec<Permutation>,
    pub order: BigUint,
}

/// Builds automorphism generators level by level along the search order:
/// at level `i` the first `i` vertices are fixed and one automorphism is
/// found for each image of vertex `i` not already in its known orbit.
pub fn automorphisms(g: &LabeledGraph) -> Automorphisms {
    let d = Dense::new(g);
    let n = d.n();
    let mut generators = Vec::new();
    let mut order = BigUint::from(1u32);
    if n == 0 {
        return Automorphisms { generators, order };
    }
    let mut m = Matcher::new(&d, &d).expect("graph matches itself");
    let base = m.order.clone();
    let mut uf = UnionFind::new(0..n);
    for i in (0..n).rev() {
        let v = base[i];
        let mut fixed: Vec<usize> = base[..i].to_vec();
        fixed.push(UNMAPPED);
        for w in m.candidates[v].clone() {
            if w == v || uf.same(v, w) || base[..i].contains(&w) {
                continue;
            }
            fixed[i] = w;
            let mut hit: Option<Vec<usize>> = None;
            let _ = m.search(0, &fixed, &mut |map| {
                hit = Some(map.to_vec());
                ControlFlow::Break(())
            });
            if let Some(map) = hit {
                for (x, &y) in map.iter().enumerate() {
                    uf.union(x, y);
                }
                let images: BTreeMap<Label, Label> = map.iter().enumerate().map(|(x, &y)| (d.labels[x], d.labels[y])).collect();
                generators.push(Permutation::from_map(&images).expect("automorphism is a bijection"));
            }
        }
        order *= uf.class_size(v);
    }
    Automorphisms { generators, order }
}

/// Interns rooted subtree shapes so equal shapes share one id. The
/// interner persists across calls, so codes from different trees compare.
#[derive(Default)]
pub struct TreeCoder {
    interner: FxHashMap<Vec<u32>, u32>,
}

const NONE: u32 = u32::MAX;

impl TreeCoder {
    pub fn new() -> Self {
        Self::default()
    }

    fn intern(&mut self, children: &[u32]) -> u32 {
        if let Some(&c) = self.interner.get(children) {
            return c;
        }
        let next = self.interner.len() as u32;
        self.interner.insert(children.to_vec(), next);
        next
    }

    /// Subtree codes of every vertex reachable from `root`, indexed by
    /// vertex; unreachable vertices get `u32::MAX`.
    pub fn rooted_codes(&mut self, nbrs: &[Vec<usize>], root: usize) -> Vec<u32> {
        let n = nbrs.len();
        let mut parent = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        order.push(root);
        parent[root] = root;
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            i += 1;
            for &u in &nbrs[v] {
                if parent[u] == usize::MAX {
                    parent[u] = v;
                    order.push(u);
                }
            }
        }
        let mut codes = vec![NONE; n];
        let mut buf = Vec::new();
        for &v in order.iter().rev() {
            buf.clear();
            buf.extend(nbrs[v].iter().filter(|&&u| u != parent[v]).map(|&u| codes[u]));
            buf.sort_unstable();
            codes[v] = self.intern(&buf);
        }
        codes
    }

    fn best_center(&mut self, nbrs: &[Vec<usize>], comp: &[usize]) -> (u32, usize) {
        let mut best: Option<(u32, usize)> = None;
        for c in centers(nbrs, comp) {
            let code = self.rooted_codes(nbrs, c)[c];
            if best.is_none_or(|(b, _)| code < b) {
                best = Some((code, c));
            }
        }
        best.expect("a tree has a centre")
    }

    /// Canonical code of the tree containing `start`, together with the root
    /// it was computed from. Returns `None` if the component has a cycle.
    pub fn unrooted_code(&mut self, nbrs: &[Vec<usize>], start: usize) -> Option<(u32, usize)> {
        let comp = component(nbrs, start);
        let edges: usize = comp.iter().map(|&v| nbrs[v].len()).sum::<usize>() / 2;
        if edges + 1 != comp.len() {
            return None;
        }
        Some(self.best_center(nbrs, &comp))
    }

    /// Code of a whole tree given as adjacency lists on `0..n`; `None` when
    /// the graph is not a tree.
    pub fn tree_code(&mut self, nbrs: &[Vec<usize>]) -> Option<u32> {
        let edges: usize = nbrs.iter().map(Vec::len).sum::<usize>() / 2;
        if nbrs.is_empty() || edges + 1 != nbrs.len() {
            return None;
        }
        let comp = component(nbrs, 0);
        (comp.len() == nbrs.len()).then(|| self.best_center(nbrs, &comp).0)
    }
}

fn component(nbrs: &[Vec<usize>], start: usize) -> Vec<usize> {
    let mut seen = vec![false; nbrs.len()];
    seen[start] = true;
    let mut out = vec![start];
    let mut i = 0;
    while i < out.len() {
        let v = out[i];
        i += 1;
        for &u in &nbrs[v] {
            if !seen[u] {
                seen[u] = true;
                out.push(u);
            }
        }
    }
    out
}

/// One or two centres of a tree, found by peeling leaves.
fn centers(nbrs: &[Vec<usize>], comp: &[usize]) -> Vec<usize> {
    if comp.len() <= 2 {
        return comp.to_vec();
    }
    let mut deg = vec![0usize; nbrs.len()];
    for &v in comp {
        deg[v] = nbrs[v].len();
    }
    let mut layer: Vec<usize> = comp.iter().copied().filter(|&v| deg[v] <= 1).collect();
    let mut remaining = comp.len();
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            deg[v] = 0;
            for &u in &nbrs[v] {
                if deg[u] > 0 {
                    deg[u] -= 1;
                    if deg[u] == 1 {
                        next.push(u);
                    }
                }
            }
        }
        layer = next;
    }
    layer.sort_unstable();
    layer
}

/// Forest isomorphism through centre-rooted AHU codes, pairing children of
/// matched vertices by code to build the witness.
pub fn forest_isomorphism(g: &LabeledGraph, h: &LabeledGraph) -> Option<IsoWitness> {
    if g.order() != h.order() || g.size() != h.size() {
        return None;
    }
    let (dg, dh) = (Dense::new(g), Dense::new(h));
    let mut coder = TreeCoder::new();
    let roots = |coder: &mut TreeCoder, d: &Dense| -> Option<Vec<(u32, usize)>> {
        let mut seen = vec![false; d.n()];
        let mut out = Vec::new();
        for v in 0..d.n() {
            if seen[v] {
                continue;
            }
            for u in component(&d.nbrs, v) {
                seen[u] = true;
            }
            out.push(coder.unrooted_code(&d.nbrs, v)?);
        }
        out.sort_unstable();
        Some(out)
    };
    let rg = roots(&mut coder, &dg)?;
    let rh = roots(&mut coder, &dh)?;
    if rg.iter().map(|r| r.0).ne(rh.iter().map(|r| r.0)) {
        return None;
    }
    let mut map = vec![UNMAPPED; dg.n()];
    for (&(_, a), &(_, b)) in rg.iter().zip(&rh) {
        let ca = coder.rooted_codes(&dg.nbrs, a);
        let cb = coder.rooted_codes(&dh.nbrs, b);
        let mut stack = vec![(a, b, UNMAPPED, UNMAPPED)];
        while let Some((x, y, px, py)) = stack.pop() {
            map[x] = y;
            let mut kx: Vec<usize> = dg.nbrs[x].iter().copied().filter(|&u| u != px).collect();
            let mut ky: Vec<usize> = dh.nbrs[y].iter().copied().filter(|&u| u != py).collect();
            kx.sort_by_key(|&u| ca[u]);
            ky.sort_by_key(|&u| cb[u]);
            for (&u, &w) in kx.iter().zip(&ky) {
                stack.push((u, w, x, y));
            }
        }
    }
    let w = witness_from(&dg, &dh, &map);
    debug_assert!(w.verify(g, h));
    Some(w)
}
