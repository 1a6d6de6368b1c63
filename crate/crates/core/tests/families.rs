use amoeba_core::families::{a_order, build, check_embedding, embeds_in, profile_closed_form, star_forest, t_order, Family, StarFamily, StarForest};
use amoeba_core::util::fib;
use amoeba_core::LabeledGraph;

#[test]
fn fibonacci_partial_sums() {
    for m in 1..40 {
        let sum: u64 = (1..=m).map(fib).sum();
        assert_eq!(sum, fib(m + 2) - 1);
    }
    assert_eq!((fib(1), fib(2), fib(3)), (1, 1, 2));
}

#[test]
fn orders() {
    for k in 1..=20 {
        assert_eq!(build(Family::T, k).unwrap().graph.order(), 2 * fib(k) as usize);
    }
    for k in 1..=12 {
        assert_eq!(build(Family::A, k).unwrap().graph.order(), 1 << (k - 1));
        assert_eq!(build(Family::B, k).unwrap().graph.order(), (1 << (k - 1)) + 1);
    }
    assert!(build(Family::T, 0).is_err());
}

#[test]
fn profiles_match_closed_forms() {
    for k in 4..=18 {
        let built = build(Family::T, k).unwrap().graph.degree_profile().profile;
        assert_eq!(profile_closed_form(Family::T, k).unwrap(), built, "T_{k}");
    }
    for k in 2..=12 {
        let built = build(Family::A, k).unwrap().graph.degree_profile().profile;
        assert_eq!(profile_closed_form(Family::A, k).unwrap(), built, "A_{k}");
    }
    assert_eq!(profile_closed_form(Family::T, 4).unwrap(), vec![0, 3, 2, 1]);
    assert!(profile_closed_form(Family::T, 3).is_err());
}

#[test]
fn j_interval_is_shifted_t_k_minus_2() {
    for k in 5..=14 {
        let t = build(Family::T, k).unwrap();
        let c = t_order(k - 1) as u32;
        let j: std::collections::BTreeSet<u32> = (c..t_order(k) as u32).collect();
        let expected = build(Family::T, k - 2).unwrap().graph.shifted(c);
        assert_eq!(t.graph.induced(&j), expected, "k = {k}");
        let roots = t.roots.unwrap();
        assert_eq!((roots.b, roots.c), (0, c));
        assert_eq!(roots.a, t_order(k - 2) as u32);
        assert_eq!(roots.d, c + t_order(k - 3) as u32);
        assert!(t.graph.has_edge(0, 1) && t.graph.has_edge(c, c + 1));
    }
}

#[test]
fn root_has_unique_maximum_degree() {
    // T_3 is a path, so both inner vertices tie.
    for k in 4..=16 {
        let g = build(Family::T, k).unwrap().graph;
        let top = g.max_degree();
        assert_eq!(g.degree(0), top);
        assert_eq!(g.degrees().values().filter(|&&d| d == top).count(), 1, "T_{k}");
    }
    for k in 2..=10 {
        let g = build(Family::A, k).unwrap().graph;
        assert_eq!(g.degree(0), g.max_degree());
        assert_eq!(build(Family::B, k).unwrap().pendant, Some(a_order(k) as u32));
    }
}

#[test]
fn star_forest_tables() {
    assert_eq!(star_forest(StarFamily::S, 5).unwrap().degrees, vec![4]);
    assert_eq!(star_forest(StarFamily::SPlus, 5).unwrap().degrees, vec![4, 1]);
    assert_eq!(star_forest(StarFamily::S, 6).unwrap().degrees, vec![4, 3]);
    assert_eq!(star_forest(StarFamily::R, 4).unwrap().degrees, vec![3, 1]);
    for k in 5..=20 {
        let s = star_forest(StarFamily::S, k).unwrap();
        assert_eq!(s.edge_count() as u64, fib(k) - 1);
        assert_eq!(star_forest(StarFamily::SPlus, k).unwrap().edge_count() as u64, fib(k));
        assert_eq!(s.edge_count(), (t_order(k) - 1) / 2);
        let m = s.multiset();
        assert_eq!(m.get(&4).copied().unwrap_or(0) as u64, fib(k - 4));
        assert_eq!(m.get(&3).copied().unwrap_or(0) as u64, fib(k - 3) - fib(k - 4));
    }
    for k in 4..=16 {
        let r = star_forest(StarFamily::R, k).unwrap();
        assert_eq!(r.edge_count(), 1 << (k - 2));
        assert_eq!(r.edge_count(), a_order(k) / 2);
    }
    assert!(star_forest(StarFamily::S, 4).is_err());
}

#[test]
fn embeddings() {
    let t5 = build(Family::T, 5).unwrap().graph;
    let s5 = star_forest(StarFamily::S, 5).unwrap();
    let map = embeds_in(&s5, &t5).unwrap();
    assert!(check_embedding(&s5.graph(), &t5, &map));
    let a4 = build(Family::A, 4).unwrap().graph;
    assert!(embeds_in(&star_forest(StarFamily::R, 4).unwrap(), &a4).is_some());
    assert!(embeds_in(&StarForest::new(vec![5]).unwrap(), &t5).is_none());
    for k in 5..=10 {
        let (s, t) = (star_forest(StarFamily::S, k).unwrap(), build(Family::T, k).unwrap().graph);
        assert!(embeds_in(&s, &t).is_some_and(|m| check_embedding(&s.graph(), &t, &m)), "S_{k}");
        let (r, b) = (star_forest(StarFamily::R, k).unwrap(), build(Family::B, k).unwrap().graph);
        assert!(embeds_in(&r, &b).is_some_and(|m| check_embedding(&r.graph(), &b, &m)), "R_{k}");
    }
    let bad = [(0u32, 1u32)].into_iter().collect();
    assert!(!check_embedding(&LabeledGraph::path(3), &t5, &bad));
}
