use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use treecenter::feasibility::{feasibility_test, min_centers, CenterKind, Feasibility, Preprocessed, SearchStats, SearchStrategy};
use treecenter::gen::random_recursive_tree;
use treecenter::oracle::{greedy_feasible, oracle_candidates};
use treecenter::{binarize, Exact, VertexId};

fn probe_values(t: &treecenter::TreeNetwork, rng: &mut ChaCha8Rng) -> Vec<BigRational> {
    let cands = oracle_candidates(t);
    let mut out = Vec::new();
    for _ in 0..6 {
        let c = cands[rng.gen_range(0..cands.len())].clone();
        out.push(c.clone());
        // Just below and just above a candidate.
        let eps = BigRational::new(1.into(), 1000.into());
        out.push(c.clone() + &eps);
        if c > eps {
            out.push(c - eps);
        }
    }
    out
}

#[test]
fn every_strategy_matches_the_greedy() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for seed in 0..120u64 {
        let n = rng.gen_range(1..=60);
        let net = random_recursive_tree(n, seed);
        let pre = Preprocessed::with_strategies(binarize::<Exact>(&net, VertexId(0)).unwrap(), &SearchStrategy::ALL);
        for alpha in probe_values(&net, &mut rng) {
            let want = greedy_feasible(&net, &alpha, usize::MAX).centers_used;
            for s in SearchStrategy::ALL {
                let got = min_centers(&pre, s, &alpha).unwrap();
                assert_eq!(got, want, "seed {seed} n {n} alpha {alpha} strategy {s:?}");
                for p in 1..=4 {
                    let r = feasibility_test(&pre, s, &alpha, p, &mut SearchStats::default());
                    assert_eq!(r.is_feasible(), want <= p);
                    if let Feasibility::Feasible(pl) = r {
                        let worst = pl.max_cost(&pre.tree).unwrap();
                        assert!(worst <= alpha, "seed {seed}: cost {worst} above {alpha}");
                        for c in &pl.centers {
                            if matches!(c.kind, CenterKind::Root | CenterKind::Trivial) {
                                continue;
                            }
                            let tight = pre.tree.vertices().any(|v| {
                                pre.tree.point_vertex_distance(&c.point, v) * pre.tree.weight(v) == alpha
                            });
                            assert!(tight, "seed {seed}: center {:?} has no tight vertex", c.point);
                        }
                    }
                }
            }
        }
    }
}
