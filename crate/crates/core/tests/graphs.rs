use amoeba_core::canon::canonical_form;
use amoeba_core::families::{build, Family};
use amoeba_core::io::{from_graph6, from_json, to_graph6, to_json};
use amoeba_core::iso::{all_isomorphisms, are_isomorphic, find_isomorphism};
use amoeba_core::{EdgeReplacement, LabeledGraph, Permutation};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Every bijection of the label set, by Heap's algorithm.
fn all_perms(labels: &[u32]) -> Vec<Vec<u32>> {
    let mut a = labels.to_vec();
    let mut out = vec![a.clone()];
    let mut c = vec![0; a.len()];
    let mut i = 1;
    while i < a.len() {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Number of bijections g → h carrying edges onto edges, by trying all n!.
fn brute_iso_count(g: &LabeledGraph, h: &LabeledGraph) -> usize {
    let gl = g.label_vec();
    let hl = h.label_vec();
    if gl.len() != hl.len() || g.size() != h.size() {
        return 0;
    }
    all_perms(&hl)
        .into_iter()
        .filter(|img| {
            let at = |x: u32| img[gl.binary_search(&x).unwrap()];
            g.edges().iter().all(|e| h.has_edge(at(e.lo()), at(e.hi())))
        })
        .count()
}

fn graph_strategy(max_n: u32) -> impl Strategy<Value = LabeledGraph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = (n * n.saturating_sub(1) / 2) as usize;
        prop::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut it = bits.into_iter();
            for i in 0..n {
                for j in i + 1..n {
                    if it.next().unwrap() {
                        edges.push((i, j));
                    }
                }
            }
            LabeledGraph::new(0..n, edges).unwrap()
        })
    })
}

fn shuffled(n: u32, seed: u64) -> Permutation {
    let mut v: Vec<u32> = (0..n).collect();
    v.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    Permutation::from_images(&v).unwrap()
}

#[test]
fn t4_has_two_automorphisms_by_brute_force() {
    let t4 = build(Family::T, 4).unwrap().graph;
    assert_eq!(brute_iso_count(&t4, &t4), 2);
    assert_eq!(all_isomorphisms(&t4, &t4).len(), 2);
}

#[test]
fn copy_of_t3_under_transposition() {
    let t3 = LabeledGraph::from_edges([(1, 2), (2, 3), (3, 4)]).unwrap();
    let s = Permutation::parse_cycles("(1 2)", 1..=4).unwrap();
    let expected = LabeledGraph::from_edges([(1, 2), (1, 3), (3, 4)]).unwrap();
    assert_eq!(t3.copy_under(&s).unwrap(), expected);
    let r = EdgeReplacement::new((3, 2), (3, 1)).unwrap();
    assert_eq!(t3.apply_replacement(&r).unwrap(), expected);
}

#[test]
fn replacement_in_t5_stays_a_t5() {
    let t5 = build(Family::T, 5).unwrap().graph;
    let r = EdgeReplacement::new((0, 6), (4, 6)).unwrap();
    let g = t5.apply_replacement(&r).unwrap();
    assert!(!g.has_edge(0, 6) && g.has_edge(4, 6));
    assert!(g.is_forest());
    assert_eq!(brute_iso_count(&t5, &g) > 0, are_isomorphic(&t5, &g));
}

#[test]
fn replacement_errors() {
    let p = LabeledGraph::path(4);
    assert!(p.apply_replacement(&EdgeReplacement::new((0, 2), (0, 3)).unwrap()).is_err());
    assert!(p.apply_replacement(&EdgeReplacement::new((0, 1), (1, 2)).unwrap()).is_err());
    assert_eq!(p.apply_replacement(&EdgeReplacement::Neutral).unwrap(), p);
}

#[test]
fn profiles_of_small_members() {
    let t5 = build(Family::T, 5).unwrap().graph.degree_profile();
    assert_eq!(t5.profile, vec![0, 5, 3, 1, 1]);
    let a4 = build(Family::A, 4).unwrap().graph.degree_profile();
    assert_eq!(a4.profile, vec![0, 4, 2, 2]);
    assert_eq!(LabeledGraph::complete(2).degree_profile().profile, vec![0, 2]);
}

#[test]
fn all_graphs_on_five_vertices_match_brute_force() {
    let n = 5u32;
    let pairs: Vec<(u32, u32)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let graphs: Vec<LabeledGraph> = (0u32..1 << pairs.len())
        .step_by(7)
        .map(|mask| LabeledGraph::new(0..n, pairs.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &e)| e)).unwrap())
        .collect();
    for g in &graphs {
        assert_eq!(all_isomorphisms(g, g).len(), brute_iso_count(g, g), "{g:?}");
    }
    for (g, h) in graphs.iter().zip(graphs.iter().skip(1)) {
        let brute = brute_iso_count(g, h) > 0;
        assert_eq!(are_isomorphic(g, h), brute);
        assert_eq!(canonical_form(g).unwrap() == canonical_form(h).unwrap(), brute);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn copy_under_composes(g in graph_strategy(8), seed in any::<u64>()) {
        let n = g.order() as u32;
        let (s, t) = (shuffled(n, seed), shuffled(n, seed.wrapping_add(1)));
        let lhs = g.copy_under(&s.compose(&t).unwrap()).unwrap();
        let rhs = g.copy_under(&t).unwrap().copy_under(&s).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn witnesses_map_edges_exactly(g in graph_strategy(7), seed in any::<u64>()) {
        let p = shuffled(g.order() as u32, seed);
        let h = g.copy_under(&p).unwrap();
        let w = find_isomorphism(&g, &h).expect("copies are isomorphic");
        prop_assert!(w.verify(&g, &h));
    }

    #[test]
    fn automorphism_count_matches_brute_force(g in graph_strategy(7)) {
        prop_assert_eq!(all_isomorphisms(&g, &g).len(), brute_iso_count(&g, &g));
    }

    #[test]
    fn canonical_form_respects_copies(g in graph_strategy(9), seed in any::<u64>()) {
        let h = g.copy_under(&shuffled(g.order() as u32, seed)).unwrap();
        prop_assert_eq!(canonical_form(&g).unwrap(), canonical_form(&h).unwrap());
    }

    #[test]
    fn handshake(g in graph_strategy(10)) {
        let p = g.degree_profile();
        let weighted: usize = p.profile.iter().enumerate().map(|(d, c)| d * c).sum();
        prop_assert_eq!(weighted, 2 * g.size());
        prop_assert_eq!(p.profile.iter().sum::<usize>(), g.order());
    }

    #[test]
    fn graph6_round_trip(g in graph_strategy(12)) {
        prop_assert_eq!(from_graph6(&to_graph6(&g)).unwrap(), g.clone());
        prop_assert_eq!(from_json(&to_json(&g).to_string()).unwrap(), g);
    }
}
