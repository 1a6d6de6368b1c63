//! Permutation groups given by generators, with a base and strong
//! generating set built by deterministic Schreier–Sims.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::OnceLock;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::graph::Label;
use crate::perm::Permutation;
use crate::util::factorial;

/// Images on `0..n`; products are left to right like [`Permutation`].
type Dense = Vec<usize>;

fn mul(a: &Dense, b: &Dense) -> Dense {
    a.iter().map(|&x| b[x]).collect()
}

fn inv(a: &Dense) -> Dense {
    let mut out = vec![0; a.len()];
    for (i, &x) in a.iter().enumerate() {
        out[x] = i;
    }
    out
}

fn is_id(a: &Dense) -> bool {
    a.iter().enumerate().all(|(i, &x)| i == x)
}

/// One level of the stabilizer chain.
#[derive(Clone, Debug)]
struct Level {
    point: usize,
    gens: Vec<Dense>,
    /// `transversal[β]` sends the base point to `β`.
    transversal: HashMap<usize, Dense>,
}

impl Level {
    fn new(point: usize, gens: Vec<Dense>, n: usize) -> Level {
        let mut l = Level {
            point,
            gens,
            transversal: HashMap::new(),
        };
        l.rebuild(n);
        l
    }

    fn rebuild(&mut self, n: usize) {
        self.transversal.clear();
        self.transversal.insert(self.point, (0..n).collect());
        let mut queue = vec![self.point];
        while let Some(beta) = queue.pop() {
            let u = self.transversal[&beta].clone();
            for g in &self.gens {
                let img = g[beta];
                if let std::collections::hash_map::Entry::Vacant(e) = self.transversal.entry(img) {
                    e.insert(mul(&u, g));
                    queue.push(img);
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
struct Chain {
    n: usize,
    levels: Vec<Level>,
}

impl Chain {
    /// Sifts `g` from `start`; returns the residue and the level where it
    /// stopped (`levels.len()` if it passed every level).
    fn sift(&self, mut g: Dense, start: usize) -> (Dense, usize) {
        for (i, level) in self.levels.iter().enumerate().skip(start) {
            let beta = g[level.point];
            match level.transversal.get(&beta) {
                Some(u) => g = mul(&g, &inv(u)),
                None => return (g, i),
            }
        }
        (g, self.levels.len())
    }

    fn build(n: usize, gens: &[Dense], prefix: &[usize]) -> Chain {
        let gens: Vec<Dense> = gens.iter().filter(|g| !is_id(g)).cloned().collect();
        let mut base: Vec<usize> = prefix.to_vec();
        for g in &gens {
            if base.iter().all(|&b| g[b] == b) {
                let moved = (0..n).find(|&x| g[x] != x).expect("non-identity");
                base.push(moved);
            }
        }
        let mut chain = Chain { n, levels: Vec::new() };
        let mut fixed: Vec<usize> = Vec::new();
        for &b in &base {
            let level_gens = gens.iter().filter(|g| fixed.iter().all(|&p| g[p] == p)).cloned().collect();
            chain.levels.push(Level::new(b, level_gens, n));
            fixed.push(b);
        }
        chain.complete();
        chain
    }

    fn complete(&mut self) {
        let mut i = self.levels.len();
        while i > 0 {
            i -= 1;
            if let Some(j) = self.check_level(i) {
                i = j + 1;
            }
        }
    }

    /// Tests the Schreier generators of level `i`; on failure extends the
    /// chain and returns the deepest level touched.
    fn check_level(&mut self, i: usize) -> Option<usize> {
        let n = self.n;
        let betas: Vec<usize> = self.levels[i].transversal.keys().copied().collect();
        for beta in betas {
            for x in self.levels[i].gens.clone() {
                let u_beta = &self.levels[i].transversal[&beta];
                let u_img = &self.levels[i].transversal[&x[beta]];
                let h = mul(&mul(u_beta, &x), &inv(u_img));
                if is_id(&h) {
                    continue;
                }
                let (y, j) = self.sift(h, i + 1);
                if j == self.levels.len() && is_id(&y) {
                    continue;
                }
                if j == self.levels.len() {
                    let moved = (0..n).find(|&p| y[p] != p).expect("non-identity residue");
                    self.levels.push(Level::new(moved, Vec::new(), n));
                }
                for l in i + 1..=j {
                    self.levels[l].gens.push(y.clone());
                    self.levels[l].rebuild(n);
                }
                return Some(j);
            }
        }
        None
    }

    fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::from(1u32), |acc, l| acc * l.transversal.len())
    }
}

/// A permutation group on a finite label set.
#[derive(Clone, Debug)]
pub struct PermGroup {
    domain: Vec<Label>,
    generators: Vec<Permutation>,
    chain: OnceLock<Chain>,
}

impl PermGroup {
    /// Generators must all act on `domain`.
    pub fn new<I: IntoIterator<Item = Label>>(domain: I, generators: Vec<Permutation>) -> Result<Self> {
        let domain: Vec<Label> = domain.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        for g in &generators {
            if g.domain() != domain.as_slice() {
                return Err(Error::DomainMismatch);
            }
        }
        Ok(PermGroup {
            domain,
            generators,
            chain: OnceLock::new(),
        })
    }

    pub fn trivial<I: IntoIterator<Item = Label>>(domain: I) -> Self {
        PermGroup::new(domain, Vec::new()).expect("no generators to check")
    }

    pub fn domain(&self) -> &[Label] {
        &self.domain
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    fn dense(&self, p: &Permutation) -> Dense {
        p.images()
            .iter()
            .map(|&y| self.domain.binary_search(&y).expect("image in domain"))
            .collect()
    }

    fn sparse(&self, d: &Dense) -> Permutation {
        let map: BTreeMap<Label, Label> = d.iter().enumerate().map(|(i, &j)| (self.domain[i], self.domain[j])).collect();
        Permutation::from_map(&map).expect("dense images form a bijection")
    }

    fn dense_gens(&self) -> Vec<Dense> {
        self.generators.iter().map(|g| self.dense(g)).collect()
    }

    fn chain(&self) -> &Chain {
        self.chain
            .get_or_init(|| Chain::build(self.domain.len(), &self.dense_gens(), &[]))
    }

    pub fn order(&self) -> BigUint {
        self.chain().order()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        if p.domain() != self.domain.as_slice() {
            return false;
        }
        let chain = self.chain();
        let (y, j) = chain.sift(self.dense(p), 0);
        j == chain.levels.len() && is_id(&y)
    }

    pub fn orbit(&self, x: Label) -> BTreeSet<Label> {
        let mut seen = BTreeSet::from([x]);
        let mut stack = vec![x];
        while let Some(y) = stack.pop() {
            for g in &self.generators {
                let z = g.apply(y);
                if seen.insert(z) {
                    stack.push(z);
                }
            }
        }
        seen
    }

    /// Point stabilizer, read off a chain whose base starts at `i`.
    pub fn stabilizer(&self, i: Label) -> Result<PermGroup> {
        let idx = self.domain.binary_search(&i).map_err(|_| Error::UnknownLabel(i))?;
        let chain = Chain::build(self.domain.len(), &self.dense_gens(), &[idx]);
        let gens = chain.levels.get(1).map(|l| l.gens.clone()).unwrap_or_default();
        let generators = gens.iter().map(|d| self.sparse(d)).collect();
        PermGroup::new(self.domain.iter().copied(), generators)
    }

    /// Some element sending `i` to `j`, or `None` when `j` is outside the
    /// orbit of `i`.
    pub fn transversal_element(&self, i: Label, j: Label) -> Option<Permutation> {
        if !self.domain.contains(&i) || !self.domain.contains(&j) {
            return None;
        }
        let mut reached: HashMap<Label, Permutation> = HashMap::from([(i, Permutation::identity(self.domain.iter().copied()))]);
        let mut queue = std::collections::VecDeque::from([i]);
        while let Some(x) = queue.pop_front() {
            if x == j {
                return reached.remove(&x);
            }
            let u = reached[&x].clone();
            for g in &self.generators {
                let y = g.apply(x);
                if let std::collections::hash_map::Entry::Vacant(e) = reached.entry(y) {
                    e.insert(u.compose(g).expect("shared domain"));
                    queue.push_back(y);
                }
            }
        }
        None
    }

    /// True when the group maps `x` onto itself and induces all of `Sym(x)`.
    pub fn is_symmetric_on(&self, x: &BTreeSet<Label>) -> bool {
        let subset: Vec<Label> = x.iter().copied().collect();
        let mut restricted = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            match g.restrict(&subset) {
                Ok(r) => restricted.push(r),
                Err(_) => return false,
            }
        }
        let sub = PermGroup::new(subset.iter().copied(), restricted).expect("restricted domains agree");
        sub.order() == factorial(subset.len())
    }

    pub fn is_symmetric(&self) -> bool {
        self.order() == factorial(self.domain.len())
    }
}
