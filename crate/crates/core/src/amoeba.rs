//! Feasible edge replacements, the group `Fer(G)` they generate, and
//! local/global amoeba recognition.
//!
//! `Fer_G(e→e′)` is read with exact copy equality: `σ` belongs to it when
//! `G_σ = G − e + e′` as labeled graphs. Each such set is the left coset
//! `σ₀·A_G` of the automorphism group, so one representative per
//! replacement together with generators of `A_G` generates `Fer(G)`.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeReplacement, Label, LabeledGraph};
use crate::group::PermGroup;
use crate::iso::{automorphisms, find_isomorphism};
use crate::perm::Permutation;
use crate::util::factorial;

/// `Fer_G(e→e′)` stored as a representative of the coset `σ₀·A_G`.
#[derive(Clone, Debug)]
pub struct FerCoset {
    pub replacement: EdgeReplacement,
    pub representative: Permutation,
    source: LabeledGraph,
    target: LabeledGraph,
}

impl FerCoset {
    pub fn target(&self) -> &LabeledGraph {
        &self.target
    }

    /// Membership: `G_σ` must equal `G − e + e′` exactly.
    pub fn contains(&self, sigma: &Permutation) -> bool {
        self.source.copy_under(sigma).is_ok_and(|copy| copy == self.target)
    }
}

fn sorted_degrees(g: &LabeledGraph) -> Vec<usize> {
    g.degree_profile().sequence
}

/// Candidate replacements `e → e′` with `e ∈ E(G)` and `e′ ∈ Ē(G) ∪ {e}`.
fn candidates(g: &LabeledGraph) -> Vec<EdgeReplacement> {
    let non_edges = g.non_edges();
    let mut out = Vec::new();
    for &remove in g.edges() {
        out.push(EdgeReplacement::Move { remove, add: remove });
        for &add in &non_edges {
            out.push(EdgeReplacement::Move { remove, add });
        }
    }
    out
}

/// Coset representative for a candidate, or `None` if it is not feasible.
fn representative(g: &LabeledGraph, degrees: &[usize], r: &EdgeReplacement) -> Result<Option<(Permutation, LabeledGraph)>> {
    let target = g.apply_replacement(r)?;
    if r.is_trivial() {
        return Ok(Some((Permutation::identity(g.labels().iter().copied()), target)));
    }
    if sorted_degrees(&target) != degrees {
        return Ok(None);
    }
    let Some(w) = find_isomorphism(g, &target) else {
        return Ok(None);
    };
    // w carries E(G) onto E(target), so G_{w⁻¹} = target.
    let sigma = w.to_permutation()?.inverse();
    debug_assert_eq!(g.copy_under(&sigma)?, target);
    Ok(Some((sigma, target)))
}

fn feasible_cosets(g: &LabeledGraph) -> Vec<FerCoset> {
    let degrees = sorted_degrees(g);
    let mut out: Vec<FerCoset> = candidates(g)
        .into_par_iter()
        .filter_map(|r| {
            let (representative, target) = representative(g, &degrees, &r).expect("candidate is well formed")?;
            Some(FerCoset {
                replacement: r,
                representative,
                source: g.clone(),
                target,
            })
        })
        .collect();
    out.sort_by_key(|c| c.replacement);
    out.insert(
        0,
        FerCoset {
            replacement: EdgeReplacement::Neutral,
            representative: Permutation::identity(g.labels().iter().copied()),
            source: g.clone(),
            target: g.clone(),
        },
    );
    out
}

/// `R_G`: the neutral replacement and every `e → e′` with `G − e + e′ ≅ G`,
/// including the trivial `e → e`.
pub fn enumerate_feasible(g: &LabeledGraph) -> Vec<EdgeReplacement> {
    feasible_cosets(g).into_iter().map(|c| c.replacement).collect()
}

pub fn fer_coset(g: &LabeledGraph, r: &EdgeReplacement) -> Result<FerCoset> {
    let degrees = sorted_degrees(g);
    match representative(g, &degrees, r) {
        Ok(Some((representative, target))) => Ok(FerCoset {
            replacement: *r,
            representative,
            source: g.clone(),
            target,
        }),
        Ok(None) | Err(_) => Err(Error::Infeasible(r.to_string())),
    }
}

/// Everything recognition needs about one graph.
#[derive(Clone, Debug)]
pub struct FerData {
    pub graph: LabeledGraph,
    pub cosets: Vec<FerCoset>,
    pub aut_generators: Vec<Permutation>,
    pub aut_order: BigUint,
}

impl FerData {
    pub fn new(g: &LabeledGraph) -> FerData {
        let aut = automorphisms(g);
        FerData {
            graph: g.clone(),
            cosets: feasible_cosets(g),
            aut_generators: aut.generators,
            aut_order: aut.order,
        }
    }

    pub fn aut_group(&self) -> PermGroup {
        PermGroup::new(self.graph.labels().iter().copied(), self.aut_generators.clone()).expect("automorphisms act on the labels")
    }

    /// Generators of `⟨ℰ_G⟩`: `A_G` generators plus one representative per
    /// non-trivial feasible replacement.
    pub fn generators(&self) -> Vec<Permutation> {
        let mut gens = self.aut_generators.clone();
        gens.extend(
            self.cosets
                .iter()
                .filter(|c| !c.replacement.is_trivial())
                .map(|c| c.representative.clone()),
        );
        gens
    }

    pub fn fer_group(&self) -> PermGroup {
        PermGroup::new(self.graph.labels().iter().copied(), self.generators()).expect("representatives act on the labels")
    }

    /// Generators of `⟨ℰ_G ∩ Stab(i)⟩`.
    pub fn point_fixing_generators(&self, i: Label) -> Result<Vec<Permutation>> {
        if !self.graph.labels().contains(&i) {
            return Err(Error::UnknownLabel(i));
        }
        let aut = self.aut_group();
        let mut gens = aut.stabilizer(i)?.generators().to_vec();
        for c in self.cosets.iter().filter(|c| !c.replacement.is_trivial()) {
            let s0 = &c.representative;
            // β ∈ A_G with β(σ₀(i)) = i makes σ₀·β fix i.
            if let Some(beta) = aut.transversal_element(s0.apply(i), i) {
                gens.push(s0.compose(&beta)?);
            }
        }
        Ok(gens)
    }

    pub fn is_local_amoeba(&self) -> bool {
        self.fer_group().order() == factorial(self.graph.order())
    }

    pub fn is_stem_symmetric(&self, v: Label) -> Result<bool> {
        let gens = self.point_fixing_generators(v)?;
        let group = PermGroup::new(self.graph.labels().iter().copied(), gens)?;
        Ok(group.order() == factorial(self.graph.order() - 1))
    }
}

pub fn fer_generators(g: &LabeledGraph) -> Vec<Permutation> {
    FerData::new(g).generators()
}

pub fn fer_order(g: &LabeledGraph) -> BigUint {
    FerData::new(g).fer_group().order()
}

pub fn is_local_amoeba(g: &LabeledGraph) -> bool {
    FerData::new(g).is_local_amoeba()
}

/// Local test on `G ∪ K_1` with a fresh isolated label.
pub fn is_global_amoeba(g: &LabeledGraph) -> bool {
    is_local_amoeba(&g.with_isolated_vertex().0)
}

pub fn point_fixing_generators(g: &LabeledGraph, i: Label) -> Result<Vec<Permutation>> {
    FerData::new(g).point_fixing_generators(i)
}

pub fn is_stem_symmetric(g: &LabeledGraph, v: Label) -> Result<bool> {
    FerData::new(g).is_stem_symmetric(v)
}

/// Recognition summary, serialised for the CLI.
#[derive(Clone, Debug, Serialize)]
pub struct AmoebaReport {
    pub n: usize,
    pub m: usize,
    pub feasible_replacements: Vec<EdgeReplacement>,
    pub aut_order: String,
    pub fer_order: String,
    pub global_fer_order: String,
    pub is_local: bool,
    pub is_global: bool,
    pub stem_symmetric_at: Vec<Label>,
}

pub fn recognize(g: &LabeledGraph) -> AmoebaReport {
    let data = FerData::new(g);
    let fer_order = data.fer_group().order();
    let (with_k1, _) = g.with_isolated_vertex();
    let global_order = FerData::new(&with_k1).fer_group().order();
    let stem: BTreeSet<Label> = g
        .labels()
        .iter()
        .copied()
        .filter(|&v| data.is_stem_symmetric(v).unwrap_or(false))
        .collect();
    AmoebaReport {
        n: g.order(),
        m: g.size(),
        feasible_replacements: data.cosets.iter().map(|c| c.replacement).collect(),
        aut_order: data.aut_order.to_string(),
        is_local: fer_order == factorial(g.order()),
        is_global: global_order == factorial(g.order() + 1),
        fer_order: fer_order.to_string(),
        global_fer_order: global_order.to_string(),
        stem_symmetric_at: stem.into_iter().collect(),
    }
}
