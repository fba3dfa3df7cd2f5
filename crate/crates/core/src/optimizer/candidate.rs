//! Binary search over the pairwise equal-cost values.

use std::cell::Cell;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{pair_cost, placement_at, Instance, Solution};
use crate::numeric::Scalar;
use crate::tree::{TreeNetwork, VertexId};

/// Above this many pairs the candidate set is narrowed by sampling before it is materialized.
const MATERIALIZE_LIMIT: usize = 1 << 21;
const SAMPLE: usize = 1023;

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateCost<S> {
    pub value: S,
    pub pair: (VertexId, VertexId),
}

struct PairWalker<S> {
    adjacency: Vec<Vec<(usize, S)>>,
    weights: Vec<S>,
}

impl<S: Scalar> PairWalker<S> {
    fn new(t: &TreeNetwork) -> Self {
        let mut adjacency = vec![Vec::new(); t.len()];
        for e in &t.edges {
            let len = S::from_rational(&e.length);
            adjacency[e.a.0].push((e.b.0, len.clone()));
            adjacency[e.b.0].push((e.a.0, len));
        }
        PairWalker { adjacency, weights: t.weights.iter().map(S::from_rational).collect() }
    }

    fn pairs(&self) -> usize {
        let k = self.weights.iter().filter(|w| w.gt_zero()).count();
        k * k.saturating_sub(1) / 2
    }

    /// Calls `f` with every pair `a < b` of positive-weight vertices and its equal cost.
    fn for_each(&self, mut f: impl FnMut(usize, usize, S)) {
        let n = self.weights.len();
        let mut dist: Vec<S> = vec![S::zero(); n];
        let mut stack = Vec::new();
        for a in 0..n {
            if !self.weights[a].gt_zero() {
                continue;
            }
            dist[a] = S::zero();
            stack.push((a, usize::MAX));
            while let Some((u, from)) = stack.pop() {
                if u > a && self.weights[u].gt_zero() {
                    f(a, u, pair_cost(&dist[u], &self.weights[a], &self.weights[u]));
                }
                for (x, len) in &self.adjacency[u] {
                    if *x != from {
                        dist[*x] = dist[u].clone() + len;
                        stack.push((*x, u));
                    }
                }
            }
        }
    }
}

fn sort_dedup<S: Scalar>(values: &mut Vec<CandidateCost<S>>) {
    values.sort_by(|a, b| a.value.partial_cmp(&b.value).expect("comparable costs"));
    values.dedup_by(|later, earlier| later.value == earlier.value);
}

/// Every pairwise equal cost over positive-weight vertices, plus zero; sorted, duplicates merged.
pub fn candidate_costs<S: Scalar>(t: &TreeNetwork) -> Vec<CandidateCost<S>> {
    let walker = PairWalker::<S>::new(t);
    let mut out = vec![CandidateCost { value: S::zero(), pair: (VertexId(0), VertexId(0)) }];
    walker.for_each(|a, b, value| out.push(CandidateCost { value, pair: (VertexId(a), VertexId(b)) }));
    sort_dedup(&mut out);
    out
}

/// Smallest feasible candidate cost.
///
/// Small candidate sets are materialized and binary searched. Large ones are
/// first narrowed: each round streams all pairs, keeps a uniform sample of the
/// values strictly between the current bounds, and binary searches the sample.
pub fn solve_candidate<S: Scalar>(inst: &Instance<S>, p: usize) -> Solution<S> {
    let walker = PairWalker::<S>::new(&inst.network);
    let calls = Cell::new(0usize);
    let feasible = |alpha: &S| {
        calls.set(calls.get() + 1);
        inst.is_feasible(alpha, p)
    };
    if p >= inst.network.positive_weight_count() {
        let zero = S::zero();
        return Solution { placement: placement_at(inst, &zero, p), alpha_star: zero, feasibility_calls: 1, candidates: 1 };
    }
    let total = walker.pairs() + 1;
    let mut low: Option<S> = None;
    let mut high: Option<S> = None;
    let inside = |v: &S, low: &Option<S>, high: &Option<S>| {
        low.as_ref().is_none_or(|l| v > l) && high.as_ref().is_none_or(|h| v < h)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let narrow = |sample: &mut Vec<S>, low: &mut Option<S>, high: &mut Option<S>| {
        sample.sort_by(|a, b| a.partial_cmp(b).expect("comparable costs"));
        sample.dedup();
        let (mut lo, mut hi) = (0usize, sample.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if feasible(&sample[mid]) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        if lo < sample.len() {
            *high = Some(sample[lo].clone());
        }
        if lo > 0 {
            *low = Some(sample[lo - 1].clone());
        }
    };
    if total > MATERIALIZE_LIMIT {
        // A first sample of random pairs, measured on the tree, saves a pass.
        let t = inst.tree();
        let positive: Vec<usize> = (0..inst.network.len()).filter(|&v| walker.weights[v].gt_zero()).collect();
        let mut sample: Vec<S> = (0..SAMPLE)
            .map(|_| {
                let a = positive[rng.gen_range(0..positive.len())];
                let b = loop {
                    let b = positive[rng.gen_range(0..positive.len())];
                    if b != a {
                        break b;
                    }
                };
                pair_cost(&t.vertex_distance(VertexId(a), VertexId(b)), &walker.weights[a], &walker.weights[b])
            })
            .collect();
        narrow(&mut sample, &mut low, &mut high);
    }
    let mut list: Vec<CandidateCost<S>>;
    loop {
        // Collect while the values in range fit; keep a uniform sample regardless.
        let mut count = 0usize;
        let mut sample: Vec<S> = Vec::with_capacity(SAMPLE);
        let mut keep = Vec::new();
        let mut offer = |a: usize, b: usize, v: S| {
            if !inside(&v, &low, &high) {
                return;
            }
            count += 1;
            if count <= MATERIALIZE_LIMIT {
                keep.push(CandidateCost { value: v.clone(), pair: (VertexId(a), VertexId(b)) });
            } else if count == MATERIALIZE_LIMIT + 1 {
                keep = Vec::new();
            }
            if sample.len() < SAMPLE {
                sample.push(v);
            } else {
                let j = rng.gen_range(0..count);
                if j < SAMPLE {
                    sample[j] = v;
                }
            }
        };
        offer(0, 0, S::zero());
        walker.for_each(&mut offer);
        if count <= MATERIALIZE_LIMIT {
            list = keep;
            break;
        }
        narrow(&mut sample, &mut low, &mut high);
    }
    sort_dedup(&mut list);
    let candidates = if low.is_none() && high.is_none() { list.len() } else { total };
    // Smallest feasible entry of `list`, else the current upper bound.
    let (mut lo, mut hi) = (0usize, list.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(&list[mid].value) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let alpha_star = match list.get(lo) {
        Some(c) => c.value.clone(),
        None => high.expect("the largest candidate is feasible"),
    };
    Solution { placement: placement_at(inst, &alpha_star, p), alpha_star, feasibility_calls: calls.get(), candidates }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feasibility::SearchStrategy;
    use crate::numeric::Exact;
    use crate::tree::PointOnTree;

    fn q(v: i64) -> Exact {
        Exact::from_i64(v)
    }

    fn path3() -> TreeNetwork {
        TreeNetwork::from_integers(&[1, 1, 1], &[(0, 1, 4), (1, 2, 4)])
    }

    #[test]
    fn candidates_of_small_trees() {
        let c: Vec<Exact> = candidate_costs(&path3()).into_iter().map(|c| c.value).collect();
        assert_eq!(c, vec![q(0), q(2), q(4)]);
        assert_eq!(candidate_costs::<Exact>(&TreeNetwork::from_integers(&[3], &[])).len(), 1);
    }

    #[test]
    fn solves_paths() {
        let inst = Instance::<Exact>::new(path3(), SearchStrategy::Cascade).unwrap();
        let s = solve_candidate(&inst, 1);
        assert_eq!(s.alpha_star, q(4));
        assert_eq!(s.placement.centers[0].point, PointOnTree::vertex(VertexId(1)));
        assert_eq!(solve_candidate(&inst, 2).alpha_star, q(2));
        assert_eq!(solve_candidate(&inst, 3).alpha_star, q(0));
        let w = Instance::<Exact>::new(
            TreeNetwork::from_integers(&[1, 2, 1], &[(0, 1, 3), (1, 2, 3)]),
            SearchStrategy::BinarySearch,
        )
        .unwrap();
        let s = solve_candidate(&w, 1);
        assert_eq!(s.alpha_star, q(3));
        assert_eq!(s.placement.centers[0].point, PointOnTree::vertex(VertexId(1)));
    }
}
