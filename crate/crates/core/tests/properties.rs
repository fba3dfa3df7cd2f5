use num_rational::BigRational;
use proptest::prelude::*;
use treecenter::envelope::build_envelopes;
use treecenter::feasibility::{min_centers, Preprocessed, SearchStrategy};
use treecenter::gen::{complete_binary_tree, random_recursive_tree};
use treecenter::oracle::{greedy_feasible, oracle_candidates};
use treecenter::spine::std_max_depth;
use treecenter::{binarize, Exact, VertexId};

fn tree(n: usize, seed: u64, balanced: bool) -> treecenter::TreeNetwork {
    if balanced {
        complete_binary_tree(n, seed)
    } else {
        random_recursive_tree(n, seed)
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn envelope_matches_brute_force(n in 1usize..40, seed: u64, balanced: bool, k in 0i64..=64) {
        let t = binarize::<Exact>(&tree(n, seed, balanced), VertexId(0)).unwrap();
        let es = build_envelopes(&t);
        let height = t.vertices().map(|v| t.depth(v).clone()).max().unwrap();
        for v in t.vertices() {
            let span = t.depth(v).clone() + &height;
            let pos = -height.clone() + span * BigRational::new(k.into(), 64.into());
            let want = t.subtree(v).into_iter().map(|u| (t.depth(u).clone() - &pos) * t.weight(u)).max().unwrap();
            prop_assert_eq!(es.get(v).evaluate(&pos), want);
        }
    }

    #[test]
    fn search_paths_agree_on_center_counts(n in 1usize..50, seed: u64, balanced: bool, pick in 0.0f64..1.0) {
        let net = tree(n, seed, balanced);
        let pre = Preprocessed::<Exact>::with_strategies(binarize(&net, VertexId(0)).unwrap(), &SearchStrategy::ALL);
        let cands = oracle_candidates(&net);
        let alpha = cands[((cands.len() - 1) as f64 * pick) as usize].clone();
        let counts: Vec<usize> = SearchStrategy::ALL.iter().map(|&s| min_centers(&pre, s, &alpha).unwrap()).collect();
        prop_assert!(counts.windows(2).all(|w| w[0] == w[1]), "{:?}", counts);
    }

    #[test]
    fn greedy_is_monotone_in_alpha(n in 1usize..50, seed: u64, x in 0.0f64..1.0, y in 0.0f64..1.0) {
        let net = random_recursive_tree(n, seed);
        let cands = oracle_candidates(&net);
        let at = |f: f64| cands[((cands.len() - 1) as f64 * f) as usize].clone();
        let (a, b) = if at(x) <= at(y) { (at(x), at(y)) } else { (at(y), at(x)) };
        let used = |alpha: &Exact| greedy_feasible(&net, alpha, usize::MAX).centers_used;
        prop_assert!(used(&b) <= used(&a));
    }
}

#[test]
fn bending_points_stay_within_n_log_n() {
    for (i, n) in [10usize, 100, 1000, 4000].into_iter().enumerate() {
        for balanced in [false, true] {
            let t = binarize::<f64>(&tree(n, i as u64, balanced), VertexId(0)).unwrap();
            let total = build_envelopes(&t).total_points as f64;
            let m = t.len() as f64;
            assert!(total <= 4.0 * m * (m + 1.0).log2(), "n {n}: {total} points");
        }
    }
}

#[test]
fn spine_depth_is_logarithmic() {
    for seed in 0..20 {
        let t = binarize::<f64>(&random_recursive_tree(1000, seed), VertexId(0)).unwrap();
        let d = std_max_depth(&t);
        assert!(d as f64 <= 4.0 * 1000f64.log2() + 4.0, "seed {seed}: depth {d}");
    }
    let path = binarize::<f64>(&treecenter::TreeNetwork::from_integers(&vec![1; 4096], &(1..4096).map(|i| (i - 1, i, 1)).collect::<Vec<_>>()), VertexId(0)).unwrap();
    assert!(std_max_depth(&path) <= 13);
}
