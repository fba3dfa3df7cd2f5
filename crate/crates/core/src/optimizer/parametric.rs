//! Parametric search: the bottom-up greedy run symbolically at the optimum.
//!
//! Every state of the greedy is tied to one vertex `g` whose cost line sets
//! it: a pending demand allows a center up to `α/w(g) - d(g,v)` above `v`,
//! and a center placed for `g` sits `d(g,v) - α/w(g)` below `v`. Comparing
//! two such quantities reduces to comparing α with a fixed threshold, which
//! [`Bounds::below`] settles with a feasibility test unless the bounds
//! already decide it. The run is therefore identical for every α strictly
//! between the final bounds, so the optimum is the final upper bound.

use super::{crossing_above, crossing_with_vertex, pair_cost, placement_at, Instance, Solution};
use crate::numeric::Scalar;
use crate::tree::{RootedBinaryTree, VertexId};

/// `low < α* <= high`; `low` is `None` while no infeasible value is known.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds<S> {
    pub low: Option<S>,
    pub high: S,
    pub calls: usize,
}

impl<S: Scalar> Bounds<S> {
    pub fn new(high: S) -> Self {
        Bounds { low: None, high, calls: 0 }
    }

    /// Whether the optimum is strictly below `t` in the open bound interval.
    pub fn below(&mut self, t: &S, feasible: &mut impl FnMut(&S) -> bool) -> bool {
        if *t < S::zero() || self.low.as_ref().is_some_and(|l| t <= l) {
            return false;
        }
        if *t >= self.high {
            return true;
        }
        self.calls += 1;
        if feasible(t) {
            self.high = t.clone();
            true
        } else {
            self.low = Some(t.clone());
            false
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum State {
    /// Pending demand set by `g`.
    Minus(VertexId),
    /// Highest center below, placed for `g`.
    Plus(VertexId),
}

struct Run<'a, S, F> {
    t: &'a RootedBinaryTree<S>,
    bounds: Bounds<S>,
    feasible: F,
}

impl<S: Scalar, F: FnMut(&S) -> bool> Run<'_, S, F> {
    fn d(&self, g: VertexId, v: VertexId) -> S {
        self.t.depth(g).clone() - self.t.depth(v)
    }

    fn below(&mut self, t: &S) -> bool {
        self.bounds.below(t, &mut self.feasible)
    }

    /// The demand of `a` or `b` that is tighter above `v`.
    ///
    /// Both demands are pending, so α exceeds both costs at `v` and a
    /// dominated vertex can be dropped without a test.
    fn tighter(&mut self, a: VertexId, b: VertexId, v: VertexId) -> VertexId {
        let (da, db) = (self.d(a, v), self.d(b, v));
        let (wa, wb) = (self.t.weight(a).clone(), self.t.weight(b).clone());
        if wa == wb {
            return if da >= db { a } else { b };
        }
        let (light, heavy) = if wa < wb { (a, b) } else { (b, a) };
        match crossing_above(&da, &wa, &db, &wb) {
            Some(q) => {
                if self.below(&q) {
                    light
                } else {
                    heavy
                }
            }
            None => heavy,
        }
    }

    /// Of two placed centers, the one nearer to `v`.
    ///
    /// Here α is below both costs at `v`, so the crossing is always tested.
    fn nearest(&mut self, a: VertexId, b: VertexId, v: VertexId) -> VertexId {
        let (da, db) = (self.d(a, v), self.d(b, v));
        let (wa, wb) = (self.t.weight(a).clone(), self.t.weight(b).clone());
        if wa == wb {
            return if da <= db { a } else { b };
        }
        let (light, heavy, dl, dh, wl, wh) = if wa < wb { (a, b, da, db, wa, wb) } else { (b, a, db, da, wb, wa) };
        // The light center is nearer exactly when α is above the crossing.
        let q = (dl - &dh) * &wl * &wh / (wh - &wl);
        if self.below(&q) {
            heavy
        } else {
            light
        }
    }

    /// The tighter of the demand of `g` and the demand of `v` itself.
    fn with_vertex(&mut self, g: VertexId, v: VertexId) -> VertexId {
        let (wg, wv) = (self.t.weight(g).clone(), self.t.weight(v).clone());
        if wv.is_zero_value() {
            return g;
        }
        match crossing_with_vertex(&self.d(g, v), &wg, &wv) {
            Some(q) => {
                if self.below(&q) {
                    g
                } else {
                    v
                }
            }
            None => g,
        }
    }

    /// Whether a center for `g` covers `u`, both measured through `v`.
    fn serves(&mut self, g: VertexId, u: VertexId, v: VertexId) -> bool {
        let (wg, wu) = (self.t.weight(g), self.t.weight(u));
        if wu.is_zero_value() {
            return true;
        }
        let cost = pair_cost(&(self.d(g, v) + &self.d(u, v)), wg, wu);
        !self.below(&cost)
    }

    fn step(&mut self, v: VertexId, children: &[State]) -> Option<State> {
        let mut plus: Option<VertexId> = None;
        let mut minus: Option<VertexId> = None;
        for &state in children {
            match state {
                State::Minus(g) => {
                    let lost = self.t.weight(g).clone() * &self.d(g, v);
                    if self.below(&lost) {
                        // A center goes on the child edge.
                        plus = Some(match plus {
                            Some(h) => self.nearest(h, g, v),
                            None => g,
                        });
                    } else {
                        minus = Some(match minus {
                            Some(h) => self.tighter(h, g, v),
                            None => g,
                        });
                    }
                }
                State::Plus(g) => {
                    plus = Some(match plus {
                        Some(h) => self.nearest(h, g, v),
                        None => g,
                    });
                }
            }
        }
        let positive = self.t.weight(v).gt_zero();
        match (plus, minus) {
            (None, None) => positive.then_some(State::Minus(v)),
            (Some(g), None) => {
                if self.serves(g, v, v) {
                    Some(State::Plus(g))
                } else {
                    Some(State::Minus(v))
                }
            }
            (None, Some(g)) => Some(State::Minus(self.with_vertex(g, v))),
            (Some(g1), Some(g2)) => {
                if self.serves(g1, v, v) && self.serves(g1, g2, v) {
                    Some(State::Plus(g1))
                } else {
                    Some(State::Minus(self.with_vertex(g2, v)))
                }
            }
        }
    }
}

/// Settles which of two critical vertices below `v`, or `v` itself, binds near the optimum.
pub fn resolve_critical_vertex<S: Scalar>(
    t: &RootedBinaryTree<S>,
    v: VertexId,
    left: VertexId,
    right: VertexId,
    bounds: &mut Bounds<S>,
    feasible: &mut impl FnMut(&S) -> bool,
) -> VertexId {
    let mut run = Run { t, bounds: bounds.clone(), feasible };
    let g = run.tighter(left, right, v);
    let g = run.with_vertex(g, v);
    *bounds = run.bounds;
    g
}

/// Parametric solver.
pub fn solve_parametric<S: Scalar>(inst: &Instance<S>, p: usize) -> Solution<S> {
    run_parametric(inst, p, false)
}

/// Parametric solver that re-verifies both bounds after every update.
pub fn solve_parametric_checked<S: Scalar>(inst: &Instance<S>, p: usize) -> Solution<S> {
    run_parametric(inst, p, true)
}

fn run_parametric<S: Scalar>(inst: &Instance<S>, p: usize, verify: bool) -> Solution<S> {
    let t = inst.tree();
    if p >= inst.network.positive_weight_count() {
        let zero = S::zero();
        return Solution { placement: placement_at(inst, &zero, p), alpha_star: zero, feasibility_calls: 1, candidates: 0 };
    }
    let feasible = |alpha: &S| inst.is_feasible(alpha, p);
    let mut run = Run { t, bounds: Bounds::new(inst.root_cost()), feasible };

    // Deepest level first; within a level any order works.
    let mut order: Vec<VertexId> = t.vertices().collect();
    order.sort_by_key(|v| std::cmp::Reverse(t.level[v.0]));
    let mut state: Vec<Option<State>> = vec![None; t.len()];
    for &v in &order {
        let kids: Vec<State> = t.children(v).filter_map(|c| state[c.0]).collect();
        state[v.0] = run.step(v, &kids);
        if verify {
            check_bounds(inst, &run.bounds, p);
        }
    }
    // Without an infeasible value the run covers [0, high), where 0 itself may be optimal.
    if run.bounds.low.is_none() && run.bounds.high.gt_zero() {
        run.below(&S::zero());
    }
    let alpha_star = run.bounds.high.clone();
    let calls = run.bounds.calls + 1;
    Solution { placement: placement_at(inst, &alpha_star, p), alpha_star, feasibility_calls: calls, candidates: 0 }
}

fn check_bounds<S: Scalar>(inst: &Instance<S>, b: &Bounds<S>, p: usize) {
    assert!(inst.is_feasible(&b.high, p), "upper bound {} is infeasible", b.high);
    if let Some(l) = &b.low {
        assert!(!inst.is_feasible(l, p), "lower bound {l} is feasible");
        assert!(*l < b.high);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feasibility::SearchStrategy;
    use crate::numeric::Exact;
    use crate::tree::{binarize, TreeNetwork};

    fn q(v: i64) -> Exact {
        Exact::from_i64(v)
    }

    fn path3() -> TreeNetwork {
        TreeNetwork::from_integers(&[1, 1, 1], &[(0, 1, 4), (1, 2, 4)])
    }

    #[test]
    fn unit_path() {
        let inst = Instance::<Exact>::new(path3(), SearchStrategy::Cascade).unwrap();
        assert_eq!(solve_parametric_checked(&inst, 1).alpha_star, q(4));
        assert_eq!(solve_parametric_checked(&inst, 2).alpha_star, q(2));
        assert_eq!(solve_parametric(&inst, 3).alpha_star, q(0));
    }

    #[test]
    fn weighted_path() {
        let inst = Instance::<Exact>::new(
            TreeNetwork::from_integers(&[1, 2, 1], &[(0, 1, 3), (1, 2, 3)]),
            SearchStrategy::BinarySearch,
        )
        .unwrap();
        assert_eq!(solve_parametric_checked(&inst, 1).alpha_star, q(3));
    }

    #[test]
    fn dominated_vertex_needs_no_test() {
        // Below vertex 0: a (w 1) at distance 3, b (w 2) at distance 2; b dominates.
        let t: RootedBinaryTree<Exact> =
            binarize(&TreeNetwork::from_integers(&[0, 1, 2], &[(0, 1, 3), (0, 2, 2)]), VertexId(0)).unwrap();
        let mut b = Bounds::new(q(100));
        let mut calls = 0;
        let g = resolve_critical_vertex(&t, VertexId(0), VertexId(1), VertexId(2), &mut b, &mut |_: &Exact| {
            calls += 1;
            true
        });
        assert_eq!((g, calls), (VertexId(2), 0));
    }

    #[test]
    fn crossing_test_picks_side() {
        // a (w 1) at distance 5 and b (w 2) at distance 2 cross at cost 6.
        let t: RootedBinaryTree<Exact> =
            binarize(&TreeNetwork::from_integers(&[0, 1, 2], &[(0, 1, 5), (0, 2, 2)]), VertexId(0)).unwrap();
        let mut b = Bounds::new(q(100));
        let g = resolve_critical_vertex(&t, VertexId(0), VertexId(1), VertexId(2), &mut b, &mut |x: &Exact| *x >= q(6));
        assert_eq!(g, VertexId(1));
        assert_eq!(b.high, q(6));
        let mut b = Bounds::new(q(100));
        let g = resolve_critical_vertex(&t, VertexId(0), VertexId(1), VertexId(2), &mut b, &mut |x: &Exact| *x >= q(7));
        assert_eq!(g, VertexId(2));
        assert_eq!(b.low, Some(q(6)));
    }
}
