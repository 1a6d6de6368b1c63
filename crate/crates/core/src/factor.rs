//! Factoring label permutations of canonical `T_k` into chains of feasible
//! edge replacements, with the fixed point `y₀ = 1`.
//!
//! A [`FerObject`] pairs a permutation `π` with a chain whose replay from
//! canonical `T_k` ends at the copy `T_k,π`. In the product `f * g` the
//! permutations multiply left to right and every label `ℓ` of `g`'s chain
//! is rewritten to `f.perm⁻¹(ℓ)`: replaying `g` after `f` is `g`'s replay
//! seen through the relabelling that produced `T_k,f`.
//!
//! Sub-chains are lifted into larger trees (`x ∈ A ∪ B`) or shifted into
//! the `J` copy (`x ∈ D`). That is only sound when the sub-chain never moves
//! the sub-tree's root, since the rest of the tree hangs off it. The base
//! tables therefore prefer chains whose every prefix fixes 0, and the case
//! `x = b` is handled by `φ * Q(k) * φ` where `Q(k)` realises `(c c+1)`
//! with 0 fixed throughout.

use std::collections::{HashMap, HashSet, VecDeque};
use std::ops::ControlFlow;
use std::sync::OnceLock;

use serde::Serialize;

use crate::amoeba::FerData;
use crate::error::{Error, Result};
use crate::families::{t_graph, t_order};
use crate::graph::{Edge, EdgeReplacement, Label, LabeledGraph};
use crate::iso::{for_each_isomorphism, TreeCoder};
use crate::perm::Permutation;

/// The fixed point of every transposition `(y₀ x)`.
pub const Y0: Label = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FerObject {
    pub perm: Permutation,
    pub chain: Vec<EdgeReplacement>,
}

impl FerObject {
    pub fn identity(n: usize) -> FerObject {
        FerObject {
            perm: Permutation::identity_range(n),
            chain: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    /// `self * other`.
    pub fn product(&self, other: &FerObject) -> Result<FerObject> {
        let mut out = self.clone();
        out.mul_assign(other)?;
        Ok(out)
    }

    /// In-place `self = self * other`.
    pub fn mul_assign(&mut self, other: &FerObject) -> Result<()> {
        if !self.perm.same_domain(&other.perm) {
            return Err(Error::GraphMismatch);
        }
        let inv = self.perm.inverse();
        self.chain.extend(other.chain.iter().map(|r| r.map(|l| inv.apply(l))));
        self.perm = self.perm.compose(&other.perm)?;
        Ok(())
    }

    /// The object for `π⁻¹`: the reversed chain, moves undone, seen through
    /// `π`.
    pub fn inverse(&self) -> FerObject {
        let p = &self.perm;
        FerObject {
            perm: p.inverse(),
            chain: self.chain.iter().rev().map(|r| r.reversed().map(|l| p.apply(l))).collect(),
        }
    }

    /// Same object on `T_k` for a larger `k` whose labels extend these.
    pub fn lift(&self, n: usize) -> FerObject {
        FerObject {
            perm: self.perm.extend_range(n),
            chain: self.chain.clone(),
        }
    }

    /// Moves every label up by `shift` and extends to `0..n`.
    pub fn shifted(&self, shift: Label, n: usize) -> FerObject {
        FerObject {
            perm: self.perm.shift_into_range(shift, n),
            chain: self.chain.iter().map(|r| r.map(|l| l + shift)).collect(),
        }
    }
}

/// JSON trace of a factorization.
#[derive(Clone, Debug, Serialize)]
pub struct FerTrace {
    pub perm: Vec<Label>,
    pub chain: Vec<EdgeReplacement>,
    pub length: usize,
    pub verified: bool,
}

impl FerTrace {
    pub fn new(f: &FerObject, verified: bool) -> FerTrace {
        FerTrace {
            perm: f.perm.images().to_vec(),
            chain: f.chain.clone(),
            length: f.len(),
            verified,
        }
    }
}

/// Every permutation of `labels(T_k)` for `k ≤ 4` with a replacement chain.
#[derive(Clone, Debug)]
pub struct BaseTable {
    pub k: usize,
    entries: HashMap<Vec<Label>, FerObject>,
    /// Keys whose chain fixes 0 after every step.
    zero_fixing: HashSet<Vec<Label>>,
}

impl BaseTable {
    /// Breadth-first closure from the identity over single-step objects
    /// `(σ, [r])` with `σ ∈ Fer_G(r)`; automorphisms carry `[∅→∅]`. The
    /// first pass only uses elements fixing 0, so permutations fixing 0 get
    /// chains that keep 0 in place. The second pass uses everything and
    /// supplies the permutations that move 0.
    pub fn build(k: usize) -> Result<BaseTable> {
        if !(1..=4).contains(&k) {
            return Err(Error::IndexOutOfRange { k, range: "1 ≤ k ≤ 4 for base tables" });
        }
        let g = t_graph(k);
        let n = g.order();
        let data = FerData::new(&g);
        let mut auts = Vec::new();
        for_each_isomorphism(&g, &g, |w| {
            auts.push(w.to_permutation().expect("automorphism"));
            ControlFlow::Continue(())
        });
        let mut steps: Vec<FerObject> = auts
            .iter()
            .filter(|a| !a.is_identity())
            .map(|a| FerObject {
                perm: a.clone(),
                chain: vec![EdgeReplacement::Neutral],
            })
            .collect();
        for coset in data.cosets.iter().filter(|c| !c.replacement.is_trivial()) {
            for a in &auts {
                steps.push(FerObject {
                    perm: coset.representative.compose(a)?,
                    chain: vec![coset.replacement],
                });
            }
        }
        let (fixing, moving): (Vec<FerObject>, Vec<FerObject>) = steps.into_iter().partition(|s| s.perm.apply(0) == 0);

        let zero_fixed = closure(n, &fixing);
        let all: Vec<FerObject> = fixing.into_iter().chain(moving).collect();
        let mut entries = closure(n, &all);
        let zero_fixing: HashSet<Vec<Label>> = zero_fixed.keys().cloned().collect();
        entries.extend(zero_fixed);
        Ok(BaseTable { k, entries, zero_fixing })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, p: &Permutation) -> Option<&FerObject> {
        self.entries.get(p.images())
    }

    pub fn fixes_zero_throughout(&self, p: &Permutation) -> bool {
        self.zero_fixing.contains(p.images())
    }

    pub fn values(&self) -> impl Iterator<Item = &FerObject> {
        self.entries.values()
    }
}

/// Breadth-first closure from the identity, so each chain is as short as
/// the generating steps allow.
fn closure(n: usize, steps: &[FerObject]) -> HashMap<Vec<Label>, FerObject> {
    let start = FerObject::identity(n);
    let mut entries = HashMap::from([(start.perm.images().to_vec(), start.clone())]);
    let mut queue = VecDeque::from([start]);
    while let Some(f) = queue.pop_front() {
        for s in steps {
            let next = f.product(s).expect("shared domain");
            if !entries.contains_key(next.perm.images()) {
                entries.insert(next.perm.images().to_vec(), next.clone());
                queue.push_back(next);
            }
        }
    }
    entries
}

/// Shared, lazily built base tables for `k = 1..4`.
pub fn base_table(k: usize) -> Result<&'static BaseTable> {
    static TABLES: OnceLock<Vec<BaseTable>> = OnceLock::new();
    if !(1..=4).contains(&k) {
        return Err(Error::IndexOutOfRange { k, range: "1 ≤ k ≤ 4 for base tables" });
    }
    let tables = TABLES.get_or_init(|| (1..=4).map(|k| BaseTable::build(k).expect("base case")).collect());
    Ok(&tables[k - 1])
}

/// Roots of `T_k` for `k ≥ 5`.
#[derive(Clone, Copy, Debug)]
struct Layout {
    n: usize,
    a: Label,
    c: Label,
    d: Label,
}

impl Layout {
    fn new(k: usize) -> Layout {
        let a = t_order(k - 2) as Label;
        let c = t_order(k - 1) as Label;
        Layout {
            n: t_order(k),
            a,
            c,
            d: c + t_order(k - 3) as Label,
        }
    }
}

/// `φ = ∏_{t∈B} (t t+c)` with chain `[ab → ac]`.
fn phi(k: usize) -> FerObject {
    let l = Layout::new(k);
    let mut images: Vec<Label> = (0..l.n as Label).collect();
    for t in 0..l.a {
        images.swap(t as usize, (t + l.c) as usize);
    }
    FerObject {
        perm: Permutation::from_images(&images).expect("product of disjoint swaps"),
        chain: vec![EdgeReplacement::new((l.a, 0), (l.a, l.c)).expect("distinct labels")],
    }
}

/// `ρ = ∏_{t∈A} (t t+c−a)` with chain `[cd → ad]`.
fn rho(k: usize) -> FerObject {
    let l = Layout::new(k);
    let mut images: Vec<Label> = (0..l.n as Label).collect();
    for t in l.a..l.c {
        images.swap(t as usize, (t + l.c - l.a) as usize);
    }
    FerObject {
        perm: Permutation::from_images(&images).expect("product of disjoint swaps"),
        chain: vec![EdgeReplacement::new((l.c, l.d), (l.a, l.d)).expect("distinct labels")],
    }
}

/// Chain factorization on one `k`, with an optional memo table.
pub struct Factorizer {
    k: usize,
    memo: Option<HashMap<(Label, usize), FerObject>>,
    depth: usize,
    /// Replay every result of [`Factorizer::factor`] before returning it.
    pub self_check: bool,
}

impl Factorizer {
    pub fn new(k: usize) -> Result<Factorizer> {
        Self::with_memo(k, true)
    }

    pub fn with_memo(k: usize, memo: bool) -> Result<Factorizer> {
        if k < 1 {
            return Err(Error::IndexOutOfRange { k, range: "k ≥ 1" });
        }
        if k > 30 {
            return Err(Error::Guard(format!("k = {k} is far beyond desk scale")));
        }
        Ok(Factorizer {
            k,
            memo: memo.then(HashMap::new),
            depth: 0,
            self_check: cfg!(debug_assertions),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        t_order(self.k)
    }

    /// `RecursiveFer(x, k)` for the factorizer's own `k`.
    pub fn transposition(&mut self, x: Label) -> Result<FerObject> {
        self.recursive_fer(x, self.k)
    }

    /// An object for `(y₀ x)` on `T_k`, `k` at most the factorizer's `k`.
    pub fn recursive_fer(&mut self, x: Label, k: usize) -> Result<FerObject> {
        if x == Y0 {
            return Err(Error::FixedPoint(x));
        }
        if x as usize >= t_order(k) || k > self.k || k == 0 {
            return Err(Error::UnknownLabel(x));
        }
        if let Some(f) = self.memo.as_ref().and_then(|m| m.get(&(x, k))) {
            return Ok(f.clone());
        }
        self.depth += 1;
        if self.depth > 4 * self.k + 8 {
            self.depth = 0;
            return Err(Error::RecursionDepth(x));
        }
        let out = self.dispatch(x, k);
        self.depth -= 1;
        let out = out?;
        if let Some(m) = self.memo.as_mut() {
            m.insert((x, k), out.clone());
        }
        Ok(out)
    }

    fn dispatch(&mut self, x: Label, k: usize) -> Result<FerObject> {
        let n = t_order(k);
        if k <= 4 {
            let t = Permutation::transposition_range(n, Y0, x);
            return base_table(k)?.get(&t).cloned().ok_or(Error::UnknownLabel(x));
        }
        let l = Layout::new(k);
        if x == 0 {
            let p = phi(k);
            let mut f = p.product(&self.zero_fixed_swap(k)?)?;
            f.mul_assign(&p)?;
            return Ok(f);
        }
        if x < l.c {
            return Ok(self.recursive_fer(x, k - 1)?.lift(n));
        }
        if x < l.d {
            let r = rho(k);
            let inner = self.recursive_fer(r.perm.apply(x), k)?;
            let mut f = r.product(&inner)?;
            f.mul_assign(&r)?;
            return Ok(f);
        }
        let y0x0 = self.recursive_fer(l.c + 1, k)?;
        let xx0 = self.recursive_fer(x - l.c, k - 2)?.shifted(l.c, n);
        let mut f = y0x0.product(&xx0)?;
        f.mul_assign(&y0x0)?;
        Ok(f)
    }

    /// `Q(k)`: an object for `(c c+1)` on `T_k` whose chain keeps 0 fixed
    /// after every step.
    fn zero_fixed_swap(&mut self, k: usize) -> Result<FerObject> {
        if k == 4 {
            let c = t_order(3) as Label;
            let t = Permutation::transposition_range(t_order(4), c, c + 1);
            let table = base_table(4)?;
            if !table.fixes_zero_throughout(&t) {
                return Err(Error::Degenerate("base table has no 0-fixing chain for (4 5)".into()));
            }
            return Ok(table.get(&t).expect("complete table").clone());
        }
        if let Some(f) = self.memo.as_ref().and_then(|m| m.get(&(0, 100 + k))) {
            return Ok(f.clone());
        }
        let r = rho(k);
        let inner = self.zero_fixed_swap(k - 1)?.lift(t_order(k));
        let mut f = r.product(&inner)?;
        f.mul_assign(&r)?;
        if let Some(m) = self.memo.as_mut() {
            m.insert((0, 100 + k), f.clone());
        }
        Ok(f)
    }

    /// Splits `p` into transpositions `(y₀ x)`, finds an object for each
    /// and multiplies them left to right.
    pub fn factor(&mut self, p: &Permutation) -> Result<FerObject> {
        let n = self.n();
        if p.len() != n || p.index_of(0) != Some(0) || p.index_of(n as Label - 1) != Some(n - 1) {
            return Err(Error::DomainMismatch);
        }
        let xs = step_one(p)?;
        let mut acc = FerObject::identity(n);
        if self.memo.is_some() {
            let mut step_two: HashMap<Label, FerObject> = HashMap::new();
            for &x in &xs {
                if let std::collections::hash_map::Entry::Vacant(e) = step_two.entry(x) {
                    e.insert(self.transposition(x)?);
                }
            }
            for x in &xs {
                acc.mul_assign(&step_two[x])?;
            }
        } else {
            for &x in &xs {
                acc.mul_assign(&self.transposition(x)?)?;
            }
        }
        debug_assert_eq!(&acc.perm, p);
        if self.self_check {
            if let Err(i) = replay_verify(&acc, self.k) {
                return Err(Error::Degenerate(format!("internal check failed at step {i}")));
            }
        }
        Ok(acc)
    }
}

/// The `x` of each transposition `(y₀ x)`, in product order. A
/// cycle `(a₀ … a_m)` becomes `(y₀ a₀)(y₀ a₁)⋯(y₀ a_m)(y₀ a₀)`; when `y₀`
/// lies on the cycle it is rotated to the front and the `(y₀ y₀)` factors
/// vanish. The list is checked by multiplying it back out.
pub fn step_one(p: &Permutation) -> Result<Vec<Label>> {
    let mut xs = Vec::new();
    for mut cycle in p.cycles() {
        if let Some(pos) = cycle.iter().position(|&a| a == Y0) {
            cycle.rotate_left(pos);
            xs.extend_from_slice(&cycle[1..]);
        } else {
            xs.extend_from_slice(&cycle);
            xs.push(cycle[0]);
        }
    }
    let mut check = Permutation::identity(p.domain().iter().copied());
    for &x in &xs {
        check = check.compose(&Permutation::transposition(p.domain().iter().copied(), Y0, x)?)?;
    }
    if &check != p {
        return Err(Error::Degenerate("transposition list does not multiply back to the input".into()));
    }
    Ok(xs)
}

pub fn factor(p: &Permutation, k: usize) -> Result<FerObject> {
    Factorizer::new(k)?.factor(p)
}

fn mergeable(first: (Edge, Edge), second: (Edge, Edge)) -> Option<(Edge, Edge)> {
    let ((r1, a1), (r2, a2)) = (first, second);
    if a1 == r2 {
        Some((r1, a2))
    } else if r1 == a2 {
        Some((r2, a1))
    } else {
        None
    }
}

/// Peephole shortening: drops `∅→∅` and `e→e`, and fuses neighbours where
/// one step undoes half of the other, e.g. `[(12→01), (23→12)]` becomes
/// `[(23→01)]`. The permutation is unchanged and the surviving intermediate
/// graphs are a subset of the original ones.
pub fn simplify(f: &FerObject) -> FerObject {
    let mut stack: Vec<(Edge, Edge)> = Vec::with_capacity(f.chain.len());
    for r in &f.chain {
        let EdgeReplacement::Move { remove, add } = *r else {
            continue;
        };
        let mut cur = (remove, add);
        if cur.0 == cur.1 {
            continue;
        }
        let mut keep = true;
        while let Some(&top) = stack.last() {
            match mergeable(top, cur) {
                Some(m) => {
                    stack.pop();
                    cur = m;
                    if cur.0 == cur.1 {
                        keep = false;
                        break;
                    }
                }
                None => break,
            }
        }
        if keep {
            stack.push(cur);
        }
    }
    FerObject {
        perm: f.perm.clone(),
        chain: stack.into_iter().map(|(remove, add)| EdgeReplacement::Move { remove, add }).collect(),
    }
}

/// Replays `f` from canonical `T_k`. Each step must remove a present edge
/// and add an absent one, each intermediate graph must be a tree isomorphic
/// to `T_k`, and the end must be the copy under `f.perm`. On failure returns
/// the index of the first bad step, or `chain.len()` when only the final
/// comparison fails.
pub fn replay_verify(f: &FerObject, k: usize) -> std::result::Result<(), usize> {
    let g = t_graph(k);
    let n = g.order();
    let end = f.chain.len();
    if f.perm.len() != n || f.perm.index_of(0) != Some(0) {
        return Err(end);
    }
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in g.edges() {
        nbrs[e.lo() as usize].push(e.hi() as usize);
        nbrs[e.hi() as usize].push(e.lo() as usize);
    }
    let mut coder = TreeCoder::new();
    let target = coder.tree_code(&nbrs).expect("T_k is a tree");
    for (i, r) in f.chain.iter().enumerate() {
        let EdgeReplacement::Move { remove, add } = *r else {
            continue;
        };
        let (a, b) = (remove.lo() as usize, remove.hi() as usize);
        let (c, d) = (add.lo() as usize, add.hi() as usize);
        if b >= n || d >= n || !nbrs[a].contains(&b) {
            return Err(i);
        }
        if remove == add {
            continue;
        }
        if nbrs[c].contains(&d) {
            return Err(i);
        }
        nbrs[a].retain(|&u| u != b);
        nbrs[b].retain(|&u| u != a);
        nbrs[c].push(d);
        nbrs[d].push(c);
        if coder.tree_code(&nbrs) != Some(target) {
            return Err(i);
        }
    }
    let expected = g.copy_under(&f.perm).map_err(|_| end)?;
    let mut edges = std::collections::BTreeSet::new();
    for (v, list) in nbrs.iter().enumerate() {
        for &u in list {
            if v < u {
                edges.insert(Edge::new(v as Label, u as Label).expect("distinct ends"));
            }
        }
    }
    let reached = LabeledGraph::from_parts((0..n as Label).collect(), edges);
    if reached == expected {
        Ok(())
    } else {
        Err(end)
    }
}

/// Longest pre-simplification chain over every `(y₀ x)` in `T_k`.
pub fn length_audit(k: usize) -> Result<usize> {
    if k < 3 {
        return Err(Error::IndexOutOfRange { k, range: "k ≥ 3" });
    }
    let mut fz = Factorizer::new(k)?;
    let mut best = 0;
    for x in (0..t_order(k) as Label).filter(|&x| x != Y0) {
        best = best.max(fz.transposition(x)?.len());
    }
    Ok(best)
}

/// `(0 1)(2 3)(4 5)⋯` on `T_k`, the slowest input shape for [`factor`].
pub fn worst_case_permutation(k: usize) -> Permutation {
    let n = t_order(k) as Label;
    let cycles: Vec<Vec<Label>> = (0..n / 2).map(|i| vec![2 * i, 2 * i + 1]).collect();
    Permutation::from_cycles(0..n, &cycles).expect("disjoint swaps")
}

/// Median wall time in seconds of `reps` factorizations of `p`, each with a
/// fresh factorizer and the self-check off.
pub fn time_factor(p: &Permutation, k: usize, memo: bool, reps: usize) -> Result<f64> {
    let mut times = Vec::with_capacity(reps.max(1));
    for _ in 0..reps.max(1) {
        let mut fz = Factorizer::with_memo(k, memo)?;
        fz.self_check = false;
        let start = std::time::Instant::now();
        let out = fz.factor(p)?;
        times.push(start.elapsed().as_secs_f64());
        drop(out);
    }
    times.sort_by(f64::total_cmp);
    Ok(times[times.len() / 2])
}

/// Least-squares slope of `ln t` against `ln n`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let m = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(n, t) in points {
        let (x, y) = (n.ln(), t.ln());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    (m * sxy - sx * sy) / (m * sxx - sx * sx)
}

/// The bound `k² − 3k + 3` on that length.
pub fn length_bound(k: usize) -> usize {
    k * k + 3 - 3 * k
}
