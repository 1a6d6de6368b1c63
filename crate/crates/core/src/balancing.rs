//! Balancing numbers at desk scale: the half-edge family `𝓗_G`, exact
//! `ex` and `bal` by exhaustive search, cut bounds, the star-forest Turán
//! formula and the closed-form bounds for the three tree families.

use std::collections::HashSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::canon::{canonical_form, CanonicalForm};
use crate::error::{Error, Result};
use crate::families::{a_order, t_order, Family, StarForest};
use crate::graph::{Label, LabeledGraph};
use crate::subgraph::contains_subgraph;
use crate::util::{binomial2, fib};

/// Largest host order `ex_bruteforce` accepts without `force`.
pub const EX_GUARD_N: usize = 10;
/// Largest `C(n,2)` `bal_bruteforce` accepts without `force`.
pub const BAL_GUARD_EDGES: usize = 28;
/// Default seed for the order in which copies are tried.
pub const COPY_ORDER_SEED: u64 = 0x5eed;

/// Graphs without isolated vertices, pairwise non-isomorphic.
#[derive(Clone, Debug, Default)]
pub struct SubgraphFamily {
    pub members: Vec<LabeledGraph>,
}

impl SubgraphFamily {
    /// Builds a family, stripping isolated vertices and dropping isomorphic
    /// repeats.
    pub fn new<I: IntoIterator<Item = LabeledGraph>>(graphs: I) -> Result<SubgraphFamily> {
        let mut seen = HashSet::new();
        let mut members = Vec::new();
        for g in graphs {
            let g = g.without_isolated();
            if seen.insert(canonical_form(&g)?) {
                members.push(g);
            }
        }
        Ok(SubgraphFamily { members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// True when some member is a subgraph of `host`.
    pub fn hits(&self, host: &LabeledGraph) -> bool {
        self.members
            .iter()
            .any(|h| h.order() <= host.order() && h.size() <= host.size() && contains_subgraph(host, h))
    }
}

/// `𝓗_G`: every subgraph with `⌊e(G)/2⌋` edges, isolated vertices removed,
/// up to isomorphism.
pub fn half_family(g: &LabeledGraph) -> Result<SubgraphFamily> {
    let m = g.size();
    if m < 2 {
        return Err(Error::Degenerate(format!("e(G) = {m}; half of it rounds down to no edges")));
    }
    let half = m / 2;
    let edges: Vec<_> = g.edges().iter().copied().collect();
    if m > 24 {
        return Err(Error::Guard(format!("{m} edges give too many half-size subsets")));
    }
    let mut graphs = Vec::new();
    let mut pick: Vec<usize> = (0..half).collect();
    loop {
        let sub = pick.iter().map(|&i| (edges[i].lo(), edges[i].hi()));
        graphs.push(LabeledGraph::from_edges(sub)?);
        // Next combination in lexicographic order.
        let Some(pos) = (0..half).rev().find(|&i| pick[i] < m - half + i) else {
            break;
        };
        pick[pos] += 1;
        for j in pos + 1..half {
            pick[j] = pick[j - 1] + 1;
        }
    }
    SubgraphFamily::new(graphs)
}

#[derive(Clone, Debug)]
pub struct ExtremalResult {
    pub n: usize,
    pub ex: usize,
    /// An extremal graph on the fewest non-isolated vertices.
    pub witness: LabeledGraph,
    /// Every extremal graph on `n` vertices, up to isomorphism.
    pub extremal: Vec<LabeledGraph>,
    /// F-free graphs met during the search, up to isomorphism.
    pub examined: usize,
}

/// Exact `ex(n, F)`. F-freeness is inherited by subgraphs, so every F-free
/// graph with `e` edges arises by adding one edge to an F-free graph with
/// `e − 1`; the search grows edge counts level by level and keeps one
/// representative per isomorphism class.
pub fn ex_bruteforce(n: usize, family: &SubgraphFamily, force: bool) -> Result<ExtremalResult> {
    if n > EX_GUARD_N && !force {
        return Err(Error::Guard(format!("ex search with n = {n} > {EX_GUARD_N}")));
    }
    if family.is_empty() {
        return Err(Error::Degenerate("empty family forbids nothing".into()));
    }
    if n > crate::canon::MAX_CANON_ORDER {
        return Err(Error::Guard(format!("n = {n} exceeds the canonical-form limit")));
    }
    let start = LabeledGraph::empty(0..n as Label);
    if family.hits(&start) {
        return Err(Error::Degenerate("a member has no edges".into()));
    }
    let mut level = vec![start];
    let mut examined = 1;
    loop {
        let next: Vec<(CanonicalForm, LabeledGraph)> = level
            .par_iter()
            .flat_map_iter(|g| {
                g.non_edges()
                    .into_iter()
                    .map(|e| g.with_edge(e).expect("non-edge"))
                    .collect::<Vec<_>>()
            })
            .filter(|h| !family.hits(h))
            .map(|h| (canonical_form(&h).expect("small host"), h))
            .collect();
        let mut seen = HashSet::new();
        let mut fresh: Vec<(CanonicalForm, LabeledGraph)> = next.into_iter().filter(|(c, _)| seen.insert(*c)).collect();
        if fresh.is_empty() {
            break;
        }
        fresh.sort_by_key(|(c, _)| *c);
        examined += fresh.len();
        level = fresh.into_iter().map(|(c, _)| c.to_graph()).collect();
    }
    let witness = level
        .iter()
        .min_by_key(|g| g.without_isolated().order())
        .expect("level is never empty")
        .clone();
    Ok(ExtremalResult {
        n,
        ex: witness.size(),
        witness,
        extremal: level,
        examined,
    })
}

#[derive(Clone, Debug)]
pub struct BalResult {
    pub n: usize,
    pub bal: usize,
    /// Red edges of a colouring with `bal` red edges and no balanced copy.
    pub witness_red: Option<LabeledGraph>,
    /// Distinct copies of `G` inside `K_n`.
    pub copies: usize,
}

/// Bit index of each pair `i < j` of `K_n`.
fn pair_index(n: usize) -> Vec<Vec<usize>> {
    let mut idx = vec![vec![usize::MAX; n]; n];
    let mut next = 0;
    for i in 0..n {
        for j in i + 1..n {
            idx[i][j] = next;
            idx[j][i] = next;
            next += 1;
        }
    }
    idx
}

/// Edge masks of every copy of `g` in `K_n`.
fn copy_masks(g: &LabeledGraph, n: usize, seed: u64) -> Vec<u64> {
    let labels = g.label_vec();
    let pos = |l: Label| labels.binary_search(&l).expect("own label");
    let edges: Vec<(usize, usize)> = g.edges().iter().map(|e| (pos(e.lo()), pos(e.hi()))).collect();
    let idx = pair_index(n);
    let mut masks = HashSet::new();
    let mut image = vec![0usize; labels.len()];
    let mut used = vec![false; n];
    fn place(
        v: usize,
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
        edges: &[(usize, usize)],
        idx: &[Vec<usize>],
        masks: &mut HashSet<u64>,
    ) {
        if v == image.len() {
            masks.insert(edges.iter().fold(0u64, |m, &(a, b)| m | 1 << idx[image[a]][image[b]]));
            return;
        }
        for w in 0..used.len() {
            if !used[w] {
                used[w] = true;
                image[v] = w;
                place(v + 1, image, used, edges, idx, masks);
                used[w] = false;
            }
        }
    }
    place(0, &mut image, &mut used, &edges, &idx, &mut masks);
    let mut out: Vec<u64> = masks.into_iter().collect();
    out.sort_unstable();
    out.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    out
}

/// Scans the `r`-subsets of `0..bits` whose highest bit is `top` and
/// returns the first that `ok` accepts.
fn first_with_top(top: usize, r: usize, mut ok: impl FnMut(u64) -> bool) -> Option<u64> {
    let high = 1u64 << top;
    if r == 1 {
        return ok(high).then_some(high);
    }
    let k = r - 1;
    if k > top {
        return None;
    }
    let limit = 1u64 << top;
    let mut low = (1u64 << k) - 1;
    while low < limit {
        if ok(high | low) {
            return Some(high | low);
        }
        // Gosper's hack: next integer with the same popcount.
        let c = low & low.wrapping_neg();
        let rr = low + c;
        low = (((rr ^ low) >> 2) / c) | rr;
    }
    None
}

/// Exact `bal(n, G)`: the largest `min(|R|, |B|)` over 2-colourings of
/// `K_n` with no copy of `G` carrying `⌊m/2⌋` or `⌈m/2⌉` red edges. Swapping
/// colours preserves balance, so only colourings with `|R| ≤ |B|` are
/// scanned, from the middle level down; the first level holding a
/// balance-free colouring is the answer.
pub fn bal_bruteforce(n: usize, g: &LabeledGraph, force: bool) -> Result<BalResult> {
    bal_bruteforce_seeded(n, g, force, COPY_ORDER_SEED)
}

/// [`bal_bruteforce`] with a chosen copy order. The value never depends on
/// the seed; the witness may.
pub fn bal_bruteforce_seeded(n: usize, g: &LabeledGraph, force: bool, seed: u64) -> Result<BalResult> {
    if n < g.order() {
        return Err(Error::Degenerate(format!("K_{n} cannot hold a graph on {} vertices", g.order())));
    }
    let total = n * n.saturating_sub(1) / 2;
    if total > BAL_GUARD_EDGES && !force {
        return Err(Error::Guard(format!("2^{total} colourings of K_{n}")));
    }
    if total > 63 {
        return Err(Error::Guard(format!("K_{n} has more than 63 edges")));
    }
    let m = g.size() as u32;
    let (lo, hi) = (m / 2, m.div_ceil(2));
    let copies = copy_masks(g, n, seed);
    let balanced_free = |red: u64, hint: &mut usize| {
        let hit = |c: &u64| {
            let r = (red & c).count_ones();
            r == lo || r == hi
        };
        if hit(&copies[*hint]) {
            return false;
        }
        match copies.iter().position(hit) {
            Some(i) => {
                *hint = i;
                false
            }
            None => true,
        }
    };
    let idx = pair_index(n);
    let to_graph = |mask: u64| {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if mask >> idx[i][j] & 1 == 1 {
                    edges.push((i as Label, j as Label));
                }
            }
        }
        LabeledGraph::new(0..n as Label, edges).expect("pairs of K_n")
    };
    for r in (1..=total / 2).rev() {
        let found = (r - 1..total)
            .into_par_iter()
            .filter_map(|top| {
                let mut hint = 0;
                first_with_top(top, r, |red| balanced_free(red, &mut hint))
            })
            .min();
        if let Some(mask) = found {
            return Ok(BalResult {
                n,
                bal: r,
                witness_red: Some(to_graph(mask)),
                copies: copies.len(),
            });
        }
    }
    // All blue is balance-free unless a single red-free copy already counts.
    Ok(BalResult {
        n,
        bal: 0,
        witness_red: (lo != 0).then(|| to_graph(0)),
        copies: copies.len(),
    })
}

/// `MaxCut(G, ℓ)` and `ℓ_G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutReport {
    pub max_cut: usize,
    pub ell_g: usize,
}

fn dense_adjacency(g: &LabeledGraph) -> Result<Vec<u64>> {
    let labels = g.label_vec();
    if labels.len() > 64 {
        return Err(Error::Guard("cut enumeration handles at most 64 vertices".into()));
    }
    let pos = |l: Label| labels.binary_search(&l).expect("own label");
    let mut adj = vec![0u64; labels.len()];
    for e in g.edges() {
        let (a, b) = (pos(e.lo()), pos(e.hi()));
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    Ok(adj)
}

/// Largest cut `e(S, V∖S)` over `|S| ≤ ell`, by enumerating the sets.
pub fn max_cut(g: &LabeledGraph, ell: usize) -> Result<usize> {
    let adj = dense_adjacency(g)?;
    let n = adj.len();
    let ell = ell.min(n);
    let sets: f64 = (0..=ell).map(|s| binomial(n, s)).sum();
    if sets > 5e8 {
        return Err(Error::Guard(format!("{sets:.0} vertex subsets")));
    }
    fn grow(adj: &[u64], from: usize, left: usize, set: u64, cut: usize, best: &mut usize) {
        *best = (*best).max(cut);
        if left == 0 {
            return;
        }
        for v in from..adj.len() {
            let inside = (adj[v] & set).count_ones() as usize;
            let deg = adj[v].count_ones() as usize;
            grow(adj, v + 1, left - 1, set | 1 << v, cut + deg - 2 * inside, best);
        }
    }
    let mut best = 0;
    grow(&adj, 0, ell, 0, 0, &mut best);
    Ok(best)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `MaxCut(G, ℓ)` at the given `ℓ`, with `ℓ_G`, the largest `ℓ ≥ 0` whose
/// cut stays below `⌊e(G)/2⌋`.
pub fn cuts(g: &LabeledGraph, ell: usize) -> Result<CutReport> {
    if ell > g.order() {
        return Err(Error::Degenerate(format!("ℓ = {ell} exceeds n(G) = {}", g.order())));
    }
    Ok(CutReport {
        max_cut: max_cut(g, ell)?,
        ell_g: ell_g(g)?,
    })
}

pub fn ell_g(g: &LabeledGraph) -> Result<usize> {
    let half = g.size() / 2;
    if half == 0 {
        return Err(Error::Degenerate("ℓ_G needs e(G) ≥ 2".into()));
    }
    let mut ell = 0;
    while ell < g.order() && max_cut(g, ell + 1)? < half {
        ell += 1;
    }
    Ok(ell)
}

/// A bound `ℓ(n − ℓ)` together with the `ℓ` that produced it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LowerBound {
    pub ell: usize,
    pub value: i64,
}

impl LowerBound {
    fn at(ell: usize, n: usize) -> LowerBound {
        LowerBound {
            ell,
            value: ell as i64 * (n as i64 - ell as i64),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LowerBounds {
    pub partial_sum: LowerBound,
    pub generic: LowerBound,
    /// False when `m < 2(k + 1)`, where the generic bound says nothing.
    pub generic_meaningful: bool,
    pub cut: LowerBound,
}

/// The three lower bounds on `bal(n, G)` for a global amoeba `G`; the
/// amoeba property is the caller's claim.
pub fn lower_bounds(g: &LabeledGraph, n: usize) -> Result<LowerBounds> {
    let m = g.size();
    let k = g.order();
    let seq = g.degree_profile().sequence;
    let mut sum = 0;
    let mut ell = 0;
    for d in &seq {
        sum += d;
        if sum >= m / 2 {
            break;
        }
        ell += 1;
    }
    let ell0 = m.saturating_sub(1) / (2 * k + 1);
    Ok(LowerBounds {
        partial_sum: LowerBound::at(ell, n),
        generic: LowerBound::at(ell0, n),
        generic_meaningful: m >= 2 * (k + 1),
        cut: LowerBound::at(ell_g(g)?, n),
    })
}

/// `ex(n, H)` for a star forest with degrees `d₁ ≥ … ≥ d_t`:
/// `max_i (i−1)(n−i+1) + C(i−1,2) + ⌊(d_i−1)(n−i+1)/2⌋`. The formula is
/// asymptotic; `reliable` is false below `n = 2t`.
pub fn lidicky_ex(h: &StarForest, n: usize) -> (i64, bool) {
    let n = n as i64;
    let best = h
        .degrees
        .iter()
        .enumerate()
        .map(|(i0, &d)| {
            let i = i0 as i64 + 1;
            (i - 1) * (n - i + 1) + binomial2(i - 1) + ((d as i64 - 1) * (n - i + 1)).div_euclid(2)
        })
        .max()
        .unwrap_or(0);
    (best, n >= 2 * h.degrees.len() as i64)
}

/// `slope·n + constant`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Affine {
    pub slope: i64,
    pub constant: i64,
}

impl Affine {
    pub fn new(slope: i64, constant: i64) -> Affine {
        Affine { slope, constant }
    }

    pub fn eval(&self, n: i64) -> i64 {
        self.slope * n + self.constant
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.slope {
            0 => return write!(f, "{}", self.constant),
            1 => write!(f, "n")?,
            -1 => write!(f, "-n")?,
            s => write!(f, "{s}n")?,
        }
        match self.constant {
            0 => Ok(()),
            c if c > 0 => write!(f, "+{c}"),
            c => write!(f, "{c}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundsReport {
    pub family: Family,
    pub k: usize,
    pub n: i64,
    pub lower: Affine,
    pub upper: Affine,
}

impl BoundsReport {
    pub fn lower_value(&self) -> i64 {
        self.lower.eval(self.n)
    }

    pub fn upper_value(&self) -> i64 {
        self.upper.eval(self.n)
    }

    /// `"3n-6 → 294"` style strings for reports.
    pub fn lower_text(&self) -> String {
        format!("{} → {}", self.lower, self.lower_value())
    }

    pub fn upper_text(&self) -> String {
        format!("{} → {}", self.upper, self.upper_value())
    }
}

/// Closed-form lower and upper bounds on `bal(n, ·)` for `T_k` (`k ≥ 6`)
/// and `A_k`, `B_k` (`k ≥ 5`).
pub fn bounds_report(family: Family, k: usize, n: i64) -> Result<BoundsReport> {
    if k > 60 {
        return Err(Error::Guard(format!("k = {k} overflows the closed forms")));
    }
    let (lower, upper) = match family {
        Family::T => {
            if k < 6 {
                return Err(Error::IndexOutOfRange { k, range: "k ≥ 6 for T" });
            }
            if k == 6 {
                (Affine::new(1, -1), Affine::new(2, -2))
            } else {
                let f4 = fib(k - 4) as i64;
                let f2 = fib(k - 2) as i64;
                let delta = i64::from(k == 7);
                (Affine::new(f4, -f4 * f4), Affine::new(f2 - 2, -binomial2(f2 - 1) + delta))
            }
        }
        Family::A | Family::B => {
            if k < 5 {
                return Err(Error::IndexOutOfRange { k, range: "k ≥ 5 for A and B" });
            }
            let low = 1i64 << (k - 5);
            let high = 1i64 << (k - 3);
            (Affine::new(low, -low * low), Affine::new(high - 1, -binomial2(high)))
        }
    };
    Ok(BoundsReport { family, k, n, lower, upper })
}

/// `n(G)` for a family member, used for the `n = 10·n(G)` sanity sweep.
pub fn member_order(family: Family, k: usize) -> usize {
    match family {
        Family::T => t_order(k),
        Family::A => a_order(k),
        Family::B => a_order(k) + 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::build;

    #[test]
    fn half_family_of_t4() {
        let t4 = build(Family::T, 4).unwrap().graph;
        let h = half_family(&t4).unwrap();
        assert_eq!(h.len(), 2);
        let two_k2 = LabeledGraph::from_edges([(0, 1), (2, 3)]).unwrap();
        let p2 = LabeledGraph::path(3);
        for g in [two_k2, p2] {
            let c = canonical_form(&g).unwrap();
            assert!(h.members.iter().any(|m| canonical_form(m).unwrap() == c));
        }
    }

    #[test]
    fn half_family_rejects_single_edge() {
        assert!(matches!(half_family(&LabeledGraph::complete(2)), Err(Error::Degenerate(_))));
    }

    #[test]
    fn star_cut() {
        let star = LabeledGraph::star(3);
        assert_eq!(cuts(&star, 1).unwrap(), CutReport { max_cut: 3, ell_g: 0 });
    }

    #[test]
    fn k33_cut() {
        assert_eq!(ell_g(&LabeledGraph::complete_bipartite(3, 3)).unwrap(), 1);
    }

    #[test]
    fn affine_display() {
        assert_eq!(Affine::new(3, -6).to_string(), "3n-6");
        assert_eq!(Affine::new(1, -1).to_string(), "n-1");
        assert_eq!(Affine::new(2, 0).to_string(), "2n");
        assert_eq!(Affine::new(0, 4).to_string(), "4");
        assert_eq!(Affine::new(3, 1).to_string(), "3n+1");
    }

    #[test]
    fn b5_upper() {
        let r = bounds_report(Family::B, 5, 100).unwrap();
        assert_eq!(r.upper_text(), "3n-6 → 294");
    }

    #[test]
    fn gosper_walks_all_subsets() {
        let mut seen = 0;
        for top in 2..6 {
            first_with_top(top, 3, |m| {
                assert_eq!(m.count_ones(), 3);
                assert_eq!(63 - m.leading_zeros() as usize, top);
                seen += 1;
                false
            });
        }
        assert_eq!(seen, 20);
    }

    #[test]
    fn k2_balances_immediately() {
        for n in 4..=7 {
            assert_eq!(bal_bruteforce(n, &LabeledGraph::complete(2), false).unwrap().bal, 0);
        }
    }
}
