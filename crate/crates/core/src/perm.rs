//! Permutations of finite label sets.
//!
//! Products are written left to right everywhere in this crate:
//! `a.compose(&b)` is the permutation `x ↦ b(a(x))`. Every module goes
//! through [`Permutation::compose`]; nothing chains image maps by hand.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::Label;

/// A bijection on a finite, sorted set of labels.
#[derive(Clone)]
pub struct Permutation {
    domain: Arc<[Label]>,
    image: Vec<Label>,
    /// First label when the domain is a contiguous run, enabling O(1) lookup.
    offset: Option<Label>,
}

fn contiguous_offset(domain: &[Label]) -> Option<Label> {
    match (domain.first(), domain.last()) {
        (Some(&lo), Some(&hi)) if (hi - lo) as usize + 1 == domain.len() => Some(lo),
        (None, None) => Some(0),
        _ => None,
    }
}

fn sorted_domain<I: IntoIterator<Item = Label>>(labels: I) -> Arc<[Label]> {
    let set: BTreeSet<Label> = labels.into_iter().collect();
    set.into_iter().collect::<Vec<_>>().into()
}

impl Permutation {
    pub fn identity<I: IntoIterator<Item = Label>>(domain: I) -> Self {
        Self::identity_on(sorted_domain(domain))
    }

    /// Identity on `0..n`.
    pub fn identity_range(n: usize) -> Self {
        Self::identity_on((0..n as Label).collect::<Vec<_>>().into())
    }

    fn identity_on(domain: Arc<[Label]>) -> Self {
        let image = domain.to_vec();
        let offset = contiguous_offset(&domain);
        Permutation { domain, image, offset }
    }

    /// Builds a permutation from `(label, image)` pairs; the domain is the set
    /// of labels listed.
    pub fn from_map(map: &BTreeMap<Label, Label>) -> Result<Self> {
        let domain: Arc<[Label]> = map.keys().copied().collect::<Vec<_>>().into();
        let image: Vec<Label> = map.values().copied().collect();
        Self::from_parts(domain, image)
    }

    /// One-line notation on `0..n`: `images[i]` is the image of `i`.
    pub fn from_images(images: &[Label]) -> Result<Self> {
        let domain: Arc<[Label]> = (0..images.len() as Label).collect::<Vec<_>>().into();
        Self::from_parts(domain, images.to_vec())
    }

    fn from_parts(domain: Arc<[Label]>, image: Vec<Label>) -> Result<Self> {
        let p = Permutation {
            offset: contiguous_offset(&domain),
            domain,
            image,
        };
        let mut seen = BTreeSet::new();
        for &y in &p.image {
            if p.index_of(y).is_none() {
                return Err(Error::NotBijection(format!("image {y} lies outside the domain")));
            }
            if !seen.insert(y) {
                return Err(Error::NotBijection(format!("label {y} is hit twice")));
            }
        }
        Ok(p)
    }

    /// Builds a permutation on `domain` from disjoint cycles, where the cycle
    /// `(a0 a1 … am)` sends `a0 ↦ a1 ↦ … ↦ am ↦ a0`.
    pub fn from_cycles<I: IntoIterator<Item = Label>>(domain: I, cycles: &[Vec<Label>]) -> Result<Self> {
        let mut p = Self::identity(domain);
        let mut touched = BTreeSet::new();
        for cycle in cycles {
            for (pos, &x) in cycle.iter().enumerate() {
                if !touched.insert(x) {
                    return Err(Error::ParsePermutation(format!("label {x} appears in more than one cycle position")));
                }
                let next = cycle[(pos + 1) % cycle.len()];
                let i = p.index_of(x).ok_or(Error::UnknownLabel(x))?;
                if p.index_of(next).is_none() {
                    return Err(Error::UnknownLabel(next));
                }
                p.image[i] = next;
            }
        }
        Ok(p)
    }

    pub fn transposition<I: IntoIterator<Item = Label>>(domain: I, a: Label, b: Label) -> Result<Self> {
        if a == b {
            return Ok(Self::identity(domain));
        }
        Self::from_cycles(domain, &[vec![a, b]])
    }

    /// Transposition `(a b)` on `0..n`.
    pub fn transposition_range(n: usize, a: Label, b: Label) -> Self {
        let mut p = Self::identity_range(n);
        p.image.swap(a as usize, b as usize);
        p
    }

    /// Parses cycle notation such as `"(0 3)(1 5)"`; `"()"` or `""` is the
    /// identity. Labels may be separated by spaces or commas.
    pub fn parse_cycles<I: IntoIterator<Item = Label>>(text: &str, domain: I) -> Result<Self> {
        let cycles = parse_cycle_list(text)?;
        Self::from_cycles(domain, &cycles)
    }

    pub fn domain(&self) -> &[Label] {
        &self.domain
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    /// Images in domain order.
    pub fn images(&self) -> &[Label] {
        &self.image
    }

    #[inline]
    pub fn index_of(&self, x: Label) -> Option<usize> {
        match self.offset {
            Some(lo) => {
                let i = x.checked_sub(lo)? as usize;
                (i < self.domain.len()).then_some(i)
            }
            None => self.domain.binary_search(&x).ok(),
        }
    }

    pub fn contains(&self, x: Label) -> bool {
        self.index_of(x).is_some()
    }

    /// Image of `x`; labels outside the domain are fixed.
    #[inline]
    pub fn apply(&self, x: Label) -> Label {
        match self.index_of(x) {
            Some(i) => self.image[i],
            None => x,
        }
    }

    pub fn same_domain(&self, other: &Permutation) -> bool {
        Arc::ptr_eq(&self.domain, &other.domain) || self.domain == other.domain
    }

    /// Left-to-right product: the result maps `x` to `other(self(x))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if !self.same_domain(other) {
            return Err(Error::DomainMismatch);
        }
        let image = self.image.iter().map(|&y| other.apply(y)).collect();
        Ok(Permutation {
            domain: Arc::clone(&self.domain),
            image,
            offset: self.offset,
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0; self.image.len()];
        for (i, &y) in self.image.iter().enumerate() {
            let j = self.index_of(y).expect("image inside domain");
            image[j] = self.domain[i];
        }
        Permutation {
            domain: Arc::clone(&self.domain),
            image,
            offset: self.offset,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().zip(self.domain.iter()).all(|(a, b)| a == b)
    }

    pub fn moved_points(&self) -> Vec<Label> {
        self.domain
            .iter()
            .zip(&self.image)
            .filter(|(a, b)| a != b)
            .map(|(&a, _)| a)
            .collect()
    }

    /// Disjoint cycles of length at least two, each starting at its smallest
    /// label, ordered by that label.
    pub fn cycles(&self) -> Vec<Vec<Label>> {
        let mut seen = vec![false; self.domain.len()];
        let mut out = Vec::new();
        for start in 0..self.domain.len() {
            if seen[start] || self.image[start] == self.domain[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(self.domain[i]);
                i = self.index_of(self.image[i]).expect("image inside domain");
            }
            out.push(cycle);
        }
        out
    }

    /// Restriction to a subset that the permutation maps onto itself.
    pub fn restrict(&self, subset: &[Label]) -> Result<Permutation> {
        let mut map = BTreeMap::new();
        let set: BTreeSet<Label> = subset.iter().copied().collect();
        for &x in &set {
            if !self.contains(x) {
                return Err(Error::UnknownLabel(x));
            }
            let y = self.apply(x);
            if !set.contains(&y) {
                return Err(Error::NotBijection(format!("{x} is mapped outside the subset")));
            }
            map.insert(x, y);
        }
        Permutation::from_map(&map)
    }

    /// Extends by the identity to `0..n` (which must contain the domain).
    pub fn extend_range(&self, n: usize) -> Permutation {
        let mut p = Permutation::identity_range(n);
        for (&x, &y) in self.domain.iter().zip(&self.image) {
            p.image[x as usize] = y;
        }
        p
    }

    /// Moves the permutation to `x + shift` labels and extends it by the
    /// identity to `0..n`.
    pub fn shift_into_range(&self, shift: Label, n: usize) -> Permutation {
        let mut p = Permutation::identity_range(n);
        for (&x, &y) in self.domain.iter().zip(&self.image) {
            p.image[(x + shift) as usize] = y + shift;
        }
        p
    }

    /// Pastes `self` on its domain X with `other` on its domain A into a
    /// bijection on X ∪ A: acts as `self` on X and as `other` on A \ X.
    pub fn paste(&self, other: &Permutation) -> Result<Permutation> {
        let mut map = BTreeMap::new();
        for (&x, &y) in self.domain.iter().zip(&self.image) {
            map.insert(x, y);
        }
        for (&x, &y) in other.domain.iter().zip(&other.image) {
            match map.get(&x) {
                Some(&mine) if mine != y => return Err(Error::PasteConflict(x)),
                Some(_) => {}
                None => {
                    map.insert(x, y);
                }
            }
        }
        Permutation::from_map(&map)
    }

    /// Conjugation relabelling a cycle: `c.conjugate_by(s)` is `s⁻¹·c·s`.
    pub fn conjugate_by(&self, s: &Permutation) -> Result<Permutation> {
        s.inverse().compose(self)?.compose(s)
    }
}

impl PartialEq for Permutation {
    fn eq(&self, other: &Self) -> bool {
        self.same_domain(other) && self.image == other.image
    }
}

impl Eq for Permutation {}

impl std::hash::Hash for Permutation {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.domain.hash(state);
        self.image.hash(state);
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (i, x) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self} on {} labels)", self.domain.len())
    }
}

/// Splits `"(0 3)(1 5)"` into cycles without checking them against a domain.
pub fn parse_cycle_list(text: &str) -> Result<Vec<Vec<Label>>> {
    let mut cycles = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::ParsePermutation(format!("expected '(' at {rest:?}")))?;
        let close = body
            .find(')')
            .ok_or_else(|| Error::ParsePermutation("unclosed cycle".into()))?;
        let cycle = body[..close]
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<Label>()
                    .map_err(|_| Error::ParsePermutation(format!("bad label {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if cycle.len() > 1 {
            cycles.push(cycle);
        }
        rest = body[close + 1..].trim_start();
    }
    Ok(cycles)
}
