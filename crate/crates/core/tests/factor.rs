use amoeba_core::factor::{base_table, factor, replay_verify, simplify, step_one, worst_case_permutation, FerObject, Factorizer, Y0};
use amoeba_core::families::{t_graph, t_order};
use amoeba_core::iso::are_isomorphic;
use amoeba_core::{EdgeReplacement, Error, LabeledGraph, Permutation};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_perm(k: usize, rng: &mut ChaCha8Rng) -> Permutation {
    let mut v: Vec<u32> = (0..t_order(k) as u32).collect();
    v.shuffle(rng);
    Permutation::from_images(&v).unwrap()
}

fn unchecked(k: usize) -> Factorizer {
    let mut fz = Factorizer::new(k).unwrap();
    fz.self_check = false;
    fz
}

/// Independent replay through the public graph API: each step applied with
/// `apply_replacement`, each result compared with `T_k` by isomorphism.
fn slow_replay(f: &FerObject, k: usize) -> bool {
    let start = t_graph(k);
    let mut g = start.clone();
    for r in &f.chain {
        match g.apply_replacement(r) {
            Ok(h) if are_isomorphic(&h, &start) => g = h,
            _ => return false,
        }
    }
    g == start.copy_under(&f.perm).unwrap()
}

#[test]
fn random_permutations_replay() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut done = 0;
    for k in 5..=10 {
        let mut fz = unchecked(k);
        for _ in 0..167 {
            let p = random_perm(k, &mut rng);
            let f = fz.factor(&p).unwrap();
            assert_eq!(f.perm, p);
            assert_eq!(replay_verify(&f, k), Ok(()), "k = {k}, p = {p}");
            done += 1;
        }
    }
    assert!(done >= 1000);
}

#[test]
fn slow_replay_agrees_on_small_trees() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for k in 5..=6 {
        let mut fz = unchecked(k);
        for _ in 0..10 {
            let f = fz.factor(&random_perm(k, &mut rng)).unwrap();
            assert!(slow_replay(&f, k));
        }
    }
}

#[test]
fn quoted_examples() {
    let mut fz = unchecked(5);
    let a = fz.transposition(7).unwrap();
    let b = Permutation::transposition_range(10, 7, 9);
    let b = fz.factor(&b).unwrap();
    let ab = a.product(&b).unwrap();
    assert_eq!(ab.perm, Permutation::transposition_range(10, 1, 7).compose(&Permutation::transposition_range(10, 7, 9)).unwrap());
    assert_eq!(replay_verify(&ab, 5), Ok(()));

    let p = Permutation::parse_cycles("(0 2)", 0..10).unwrap();
    let f = fz.factor(&p).unwrap();
    assert!(slow_replay(&f, 5));

    let w = fz.factor(&worst_case_permutation(5)).unwrap();
    assert_eq!(w.perm, Permutation::parse_cycles("(0 1)(2 3)(4 5)(6 7)(8 9)", 0..10).unwrap());
    assert!(slow_replay(&w, 5));

    let id = fz.factor(&Permutation::identity_range(10)).unwrap();
    assert!(id.is_empty());
    assert_eq!(replay_verify(&FerObject::identity(10), 5), Ok(()));

    for x in [5, 7, 9] {
        let f = fz.transposition(x).unwrap();
        assert_eq!(f.perm, Permutation::transposition_range(10, Y0, x));
        assert!(slow_replay(&f, 5), "x = {x}");
    }
}

#[test]
fn transposition_errors() {
    let mut fz = unchecked(5);
    assert!(matches!(fz.transposition(Y0), Err(Error::FixedPoint(_))));
    assert!(matches!(fz.transposition(10), Err(Error::UnknownLabel(_))));
    assert!(fz.factor(&Permutation::identity_range(12)).is_err());
}

#[test]
fn self_check_accepts_factor_output() {
    let mut fz = Factorizer::new(6).unwrap();
    fz.self_check = true;
    let p = random_perm(6, &mut ChaCha8Rng::seed_from_u64(1));
    assert_eq!(fz.factor(&p).unwrap().perm, p);
    assert_eq!(factor(&p, 6).unwrap().perm, p);
}

#[test]
fn base_tables_cover_every_permutation() {
    assert_eq!(base_table(4).unwrap().len(), 720);
    assert_eq!(base_table(3).unwrap().len(), 24);
    for k in 3..=4 {
        let n = t_order(k) as u32;
        for x in (0..n).filter(|&x| x != Y0) {
            let t = Permutation::transposition_range(n as usize, Y0, x);
            assert!(base_table(k).unwrap().get(&t).unwrap().len() <= 3);
        }
    }
    let t3 = base_table(3).unwrap();
    assert_eq!(t3.get(&Permutation::transposition_range(4, 1, 2)).unwrap().len(), 1);
}

#[test]
fn step_one_multiplies_back() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for k in 5..=9 {
        let p = random_perm(k, &mut rng);
        let xs = step_one(&p).unwrap();
        let n = t_order(k);
        let back = xs.iter().fold(Permutation::identity_range(n), |acc, &x| acc.compose(&Permutation::transposition_range(n, Y0, x)).unwrap());
        assert_eq!(back, p);
    }
}

#[test]
fn memo_on_and_off_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for k in 5..=7 {
        let mut on = Factorizer::with_memo(k, true).unwrap();
        let mut off = Factorizer::with_memo(k, false).unwrap();
        on.self_check = false;
        off.self_check = false;
        for _ in 0..20 {
            let p = random_perm(k, &mut rng);
            let (a, b) = (on.factor(&p).unwrap(), off.factor(&p).unwrap());
            assert_eq!(a.perm, b.perm);
            assert_eq!(replay_verify(&a, k), Ok(()));
            assert_eq!(replay_verify(&b, k), Ok(()));
        }
    }
}

#[test]
fn corrupted_chains_are_caught() {
    let mut fz = unchecked(6);
    let f = fz.factor(&random_perm(6, &mut ChaCha8Rng::seed_from_u64(9))).unwrap();
    assert!(!f.is_empty());
    let mut bad = f.clone();
    bad.chain.pop();
    assert!(replay_verify(&bad, 6).is_err());
    let mut bad = f.clone();
    let last = bad.chain.len() - 1;
    bad.chain[last] = bad.chain[last].reversed();
    assert!(replay_verify(&bad, 6).is_err());
    let mut wrong_perm = f;
    wrong_perm.perm = wrong_perm.perm.compose(&Permutation::transposition_range(t_order(6), 2, 3)).unwrap();
    assert_eq!(replay_verify(&wrong_perm, 6), Err(wrong_perm.chain.len()));
}

#[test]
fn simplify_quoted_rule() {
    let f = FerObject {
        perm: Permutation::identity_range(4),
        chain: vec![EdgeReplacement::new((1, 2), (0, 1)).unwrap(), EdgeReplacement::new((2, 3), (1, 2)).unwrap()],
    };
    assert_eq!(simplify(&f).chain, vec![EdgeReplacement::new((2, 3), (0, 1)).unwrap()]);
    let trivial = FerObject {
        perm: Permutation::identity_range(4),
        chain: vec![EdgeReplacement::new((1, 2), (1, 2)).unwrap(), EdgeReplacement::Neutral],
    };
    assert!(simplify(&trivial).is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn products_stay_valid(k in 5usize..=8, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut fz = unchecked(k);
        let f = fz.factor(&random_perm(k, &mut rng)).unwrap();
        let g = fz.factor(&random_perm(k, &mut rng)).unwrap();
        let fg = f.product(&g).unwrap();
        prop_assert_eq!(&fg.perm, &f.perm.compose(&g.perm).unwrap());
        prop_assert_eq!(replay_verify(&fg, k), Ok(()));
        let inv = f.inverse();
        prop_assert_eq!(replay_verify(&inv, k), Ok(()));
        prop_assert!(f.product(&inv).unwrap().perm.is_identity());
        prop_assert_eq!(FerObject::identity(t_order(k)).product(&g).unwrap(), g);
    }

    #[test]
    fn simplify_keeps_validity(k in 5usize..=8, seed in any::<u64>()) {
        let mut fz = unchecked(k);
        let f = fz.factor(&random_perm(k, &mut ChaCha8Rng::seed_from_u64(seed))).unwrap();
        let s = simplify(&f);
        prop_assert_eq!(&s.perm, &f.perm);
        prop_assert!(s.len() <= f.len());
        prop_assert_eq!(replay_verify(&s, k), Ok(()));
        prop_assert_eq!(simplify(&s), s);
    }
}

#[test]
fn copies_of_t5_reached_by_chains_are_isomorphic() {
    let t5 = t_graph(5);
    let mut fz = unchecked(5);
    let f = fz.transposition(9).unwrap();
    let mut g: LabeledGraph = t5.clone();
    for r in &f.chain {
        g = g.apply_replacement(r).unwrap();
        assert!(are_isomorphic(&g, &t5));
    }
}
