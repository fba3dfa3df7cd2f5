//! Optimal cost and placement.
//!
//! Two solvers share one feasibility oracle. The candidate solver binary
//! searches the pairwise equal-cost values. The parametric solver simulates
//! the bottom-up greedy at the unknown optimum, settling every comparison
//! against a threshold with a feasibility test that also narrows the bounds.

mod candidate;
mod json;
mod parametric;

pub use candidate::{candidate_costs, solve_candidate, CandidateCost};
pub use json::{centers_json, feasibility_json, rational_json, render_json, solution_json};
pub use parametric::{resolve_critical_vertex, solve_parametric, solve_parametric_checked, Bounds};

use crate::feasibility::{feasibility_test, Feasibility, Placement, Preprocessed, SearchStats, SearchStrategy};
use crate::numeric::Scalar;
use crate::tree::{binarize, RootedBinaryTree, TreeError, TreeNetwork, VertexId};

/// Cost at which `u` and `v` are served equally well by a point between them.
pub fn pair_cost<S: Scalar>(d: &S, wu: &S, wv: &S) -> S {
    if wu.is_zero_value() || wv.is_zero_value() {
        return S::zero();
    }
    d.clone() * wu * wv / (wu.clone() + wv)
}

/// Cost at which the cost lines of `a` and `b`, seen from above their common
/// ancestor at distances `da` and `db`, cross.
///
/// Absent for equal weights, and when the heavier vertex costs at least as
/// much at the ancestor (it then dominates everywhere above).
pub fn crossing_above<S: Scalar>(da: &S, wa: &S, db: &S, wb: &S) -> Option<S> {
    let ((dl, wl), (dh, wh)) = match wa.partial_cmp(wb)? {
        std::cmp::Ordering::Less => ((da, wa), (db, wb)),
        std::cmp::Ordering::Greater => ((db, wb), (da, wa)),
        std::cmp::Ordering::Equal => return None,
    };
    if dl.clone() * wl < dh.clone() * wh {
        return None;
    }
    Some((dl.clone() - dh) * wl * wh / (wh.clone() - wl))
}

/// Cost at which the line of a vertex `d` below `v` crosses the line of `v` above `v`.
pub fn crossing_with_vertex<S: Scalar>(d: &S, wa: &S, wv: &S) -> Option<S> {
    (wv > wa).then(|| d.clone() * wa * wv / (wv.clone() - wa))
}

/// Equal cost of two vertices of the rooted tree.
pub fn equal_cost<S: Scalar>(t: &RootedBinaryTree<S>, u: VertexId, v: VertexId) -> S {
    pair_cost(&t.vertex_distance(u, v), t.weight(u), t.weight(v))
}

/// Crossing cost of two vertices of `T(v)` on the path above `v`.
pub fn equal_cost_above<S: Scalar>(t: &RootedBinaryTree<S>, a: VertexId, b: VertexId, v: VertexId) -> Option<S> {
    let da = t.depth(a).clone() - t.depth(v);
    let db = t.depth(b).clone() - t.depth(v);
    crossing_above(&da, t.weight(a), &db, t.weight(b))
}

/// Crossing cost of `a ∈ T(v)` with `v` itself, above `v`.
pub fn equal_cost_with_vertex<S: Scalar>(t: &RootedBinaryTree<S>, a: VertexId, v: VertexId) -> Option<S> {
    if t.weight(v).is_zero_value() {
        return None;
    }
    crossing_with_vertex(&(t.depth(a).clone() - t.depth(v)), t.weight(a), t.weight(v))
}

/// Input network together with its preprocessing, rooted at vertex 0.
#[derive(Debug, Clone)]
pub struct Instance<S> {
    pub network: TreeNetwork,
    pub pre: Preprocessed<S>,
    pub strategy: SearchStrategy,
}

impl<S: Scalar> Instance<S> {
    pub fn new(network: TreeNetwork, strategy: SearchStrategy) -> Result<Self, TreeError> {
        let tree = binarize(&network, VertexId(0))?;
        Ok(Instance { network, pre: Preprocessed::new(tree, strategy), strategy })
    }

    pub fn tree(&self) -> &RootedBinaryTree<S> {
        &self.pre.tree
    }

    pub fn test(&self, alpha: &S, p: usize) -> Feasibility<S> {
        feasibility_test(&self.pre, self.strategy, alpha, p, &mut SearchStats::default())
    }

    pub fn is_feasible(&self, alpha: &S, p: usize) -> bool {
        self.test(alpha, p).is_feasible()
    }

    /// Cost of serving everything from the root.
    pub fn root_cost(&self) -> S {
        let t = self.tree();
        t.vertices().map(|v| t.depth(v).clone() * t.weight(v)).fold(S::zero(), S::max_of)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution<S> {
    pub alpha_star: S,
    pub placement: Placement<S>,
    pub feasibility_calls: usize,
    /// Size of the candidate set the search ran over.
    pub candidates: usize,
}

pub(crate) fn placement_at<S: Scalar>(inst: &Instance<S>, alpha: &S, p: usize) -> Placement<S> {
    match inst.test(alpha, p) {
        Feasibility::Feasible(pl) => pl,
        Feasibility::Infeasible => panic!("optimal cost {alpha} is not feasible"),
    }
}
