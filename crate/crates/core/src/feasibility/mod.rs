//! The α-feasibility test.
//!
//! A truncated pre-order DFS follows subtrees whose cost envelope already
//! exceeds α at their top vertex and stops at every subtree whose envelope
//! meets α on its parent edge: the meeting point is a peripheral center. The
//! visited vertices form the trimmed tree, which a post-order pass then
//! resolves, placing the remaining centers as high as possible.

mod backend;
mod merge;

pub use backend::{Cursor, Preprocessed, SearchStrategy};
pub use merge::{merge_step, ChildInput, EdgeCenter, SubtreeStatus};

use crate::envelope::Reach;
use crate::numeric::Scalar;
use crate::tree::{PointOnTree, RootedBinaryTree, VertexId};

#[derive(Debug, Clone, PartialEq)]
pub struct PeripheralCenter<S> {
    pub location: PointOnTree<S>,
    /// The vertex whose subtree envelope meets α at `location`.
    pub subtree_root: VertexId,
    /// A vertex of that subtree with cost exactly α at `location`.
    pub critical: VertexId,
}

/// Classification of a vertex visited by the truncated DFS.
#[derive(Debug, Clone, PartialEq)]
pub enum VertexKind<S> {
    /// On a path from a peripheral center to the root.
    FirstType,
    /// Its subtree is handled by a peripheral center on its parent edge.
    Dummy(PeripheralCenter<S>),
    /// Its subtree is covered from above; `delta_minus` is the largest
    /// distance above it at which a center still covers the subtree, `None`
    /// when no vertex of it has positive weight.
    SecondType { delta_minus: Option<S>, critical: VertexId },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrimmedVertex<S> {
    pub vertex: VertexId,
    /// Index of the parent in [`TrimmedTree::vertices`].
    pub parent: Option<usize>,
    pub kind: VertexKind<S>,
}

/// Vertices reached by the truncated DFS, parents before children.
#[derive(Debug, Clone, PartialEq)]
pub struct TrimmedTree<S> {
    pub vertices: Vec<TrimmedVertex<S>>,
}

impl<S> TrimmedTree<S> {
    pub fn second_type_count(&self) -> usize {
        self.vertices.iter().filter(|v| matches!(v.kind, VertexKind::SecondType { .. })).count()
    }

    pub fn dummies(&self) -> impl Iterator<Item = &PeripheralCenter<S>> {
        self.vertices.iter().filter_map(|v| match &v.kind {
            VertexKind::Dummy(c) => Some(c),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PeripheralSearch<S> {
    /// One center at the root covers everything.
    Trivial { visited: usize },
    Found { trimmed: TrimmedTree<S>, peripheral: usize, visited: usize },
    /// More than `p` peripheral centers exist.
    EarlyInfeasible { visited: usize },
}

impl<S> PeripheralSearch<S> {
    pub fn visited(&self) -> usize {
        match self {
            PeripheralSearch::Trivial { visited }
            | PeripheralSearch::Found { visited, .. }
            | PeripheralSearch::EarlyInfeasible { visited } => *visited,
        }
    }
}

/// Per-call counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Vertices below the root whose envelope was queried.
    pub visited: usize,
    pub comparisons: u64,
    pub peripheral: usize,
}

/// Runs the truncated DFS, giving up once more than `limit` peripheral centers are found.
pub fn find_peripheral_centers<S: Scalar>(
    pre: &Preprocessed<S>,
    strategy: SearchStrategy,
    alpha: &S,
    limit: Option<usize>,
    stats: &mut SearchStats,
) -> PeripheralSearch<S> {
    let t = &pre.tree;
    let root_cursor = pre.start(strategy, alpha, &mut stats.comparisons);
    if !matches!(pre.reach(strategy, &root_cursor, alpha, &mut stats.comparisons), Reach::Blocked) {
        return PeripheralSearch::Trivial { visited: 0 };
    }
    let mut vertices = vec![TrimmedVertex { vertex: t.root, parent: None, kind: VertexKind::FirstType }];
    let mut stack = vec![(0usize, root_cursor)];
    while let Some((idx, cursor)) = stack.pop() {
        let v = vertices[idx].vertex;
        let mut descend = Vec::with_capacity(2);
        for c in t.children(v) {
            let cc = pre.descend(&cursor, c, alpha, &mut stats.comparisons);
            stats.visited += 1;
            let kind = match pre.reach(strategy, &cc, alpha, &mut stats.comparisons) {
                Reach::Blocked => VertexKind::FirstType,
                Reach::At { position, critical } if position > *t.depth(v) => {
                    stats.peripheral += 1;
                    if limit.is_some_and(|p| stats.peripheral > p) {
                        return PeripheralSearch::EarlyInfeasible { visited: stats.visited };
                    }
                    let location = t.point_on_edge(c, t.depth(c).clone() - position);
                    VertexKind::Dummy(PeripheralCenter { location, subtree_root: c, critical })
                }
                Reach::At { position, critical } => {
                    let delta_minus = t.depth(c).clone() - position;
                    VertexKind::SecondType { delta_minus: Some(delta_minus), critical }
                }
                Reach::Unbounded => VertexKind::SecondType { delta_minus: None, critical: c },
            };
            let first = kind == VertexKind::FirstType;
            vertices.push(TrimmedVertex { vertex: c, parent: Some(idx), kind });
            if first {
                descend.push((vertices.len() - 1, cc));
            }
        }
        // Left child on top of the stack.
        stack.extend(descend.into_iter().rev());
    }
    PeripheralSearch::Found { trimmed: TrimmedTree { vertices }, peripheral: stats.peripheral, visited: stats.visited }
}

/// The trimmed tree of a completed search; empty in the trivial case.
pub fn build_trimmed_tree<S: Clone>(search: &PeripheralSearch<S>) -> Option<TrimmedTree<S>> {
    match search {
        PeripheralSearch::Trivial { .. } => Some(TrimmedTree { vertices: Vec::new() }),
        PeripheralSearch::Found { trimmed, .. } => Some(trimmed.clone()),
        PeripheralSearch::EarlyInfeasible { .. } => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CenterKind {
    /// Found by the DFS where a subtree envelope meets α.
    Peripheral,
    /// Placed on a trimmed edge by the bottom-up pass.
    Interior,
    /// Placed at the root for residual demand.
    Root,
    /// The single center of the trivial case.
    Trivial,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Center<S> {
    pub point: PointOnTree<S>,
    pub kind: CenterKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Placement<S> {
    pub centers: Vec<Center<S>>,
}

impl<S: Scalar> Placement<S> {
    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = &PointOnTree<S>> {
        self.centers.iter().map(|c| &c.point)
    }

    /// Largest vertex cost to its nearest center, by full scan.
    pub fn max_cost(&self, t: &RootedBinaryTree<S>) -> Option<S> {
        let mut worst: Option<S> = None;
        for v in t.vertices() {
            let best = self
                .points()
                .map(|c| t.point_vertex_distance(c, v) * t.weight(v))
                .reduce(S::min_of)?;
            worst = Some(match worst {
                Some(w) => S::max_of(w, best),
                None => best,
            });
        }
        worst
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility<S> {
    Feasible(Placement<S>),
    Infeasible,
}

impl<S> Feasibility<S> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

/// Resolves the trimmed tree bottom-up and returns every center the policy places.
pub fn resolve_trimmed<S: Scalar>(t: &RootedBinaryTree<S>, trimmed: &TrimmedTree<S>, alpha: &S) -> Placement<S> {
    let n = trimmed.vertices.len();
    let mut inputs: Vec<Vec<ChildInput<S>>> = vec![Vec::new(); n];
    let mut centers = Vec::new();
    let mut emitted = Vec::new();
    let mut root_status = None;
    for idx in (0..n).rev() {
        let tv = &trimmed.vertices[idx];
        let v = tv.vertex;
        let contribution = match &tv.kind {
            VertexKind::Dummy(pc) => {
                centers.push(Center { point: pc.location.clone(), kind: CenterKind::Peripheral });
                let d = t.parent_length[v.0].clone() - &pc.location.offset_toward_parent;
                Some((SubtreeStatus::Plus(S::zero()), d))
            }
            VertexKind::SecondType { delta_minus: Some(dm), .. } => {
                Some((SubtreeStatus::Minus(dm.clone()), t.parent_length[v.0].clone()))
            }
            VertexKind::SecondType { delta_minus: None, .. } => None,
            VertexKind::FirstType => {
                let kids = std::mem::take(&mut inputs[idx]);
                let status = merge_step(t.weight(v), alpha, &kids, &mut emitted);
                for e in emitted.drain(..) {
                    centers.push(Center { point: t.point_on_edge(e.child, e.offset), kind: CenterKind::Interior });
                }
                match tv.parent {
                    Some(_) => status.map(|s| (s, t.parent_length[v.0].clone())),
                    None => {
                        root_status = status;
                        None
                    }
                }
            }
        };
        if let (Some(p), Some((status, distance))) = (tv.parent, contribution) {
            inputs[p].push(ChildInput { vertex: v, status, distance });
        }
    }
    if let Some(SubtreeStatus::Minus(_)) = root_status {
        centers.push(Center { point: PointOnTree::vertex(t.root), kind: CenterKind::Root });
    }
    Placement { centers }
}

/// Decides whether `p` centers achieve cost `alpha`.
pub fn feasibility_test<S: Scalar>(
    pre: &Preprocessed<S>,
    strategy: SearchStrategy,
    alpha: &S,
    p: usize,
    stats: &mut SearchStats,
) -> Feasibility<S> {
    match place_centers(pre, strategy, alpha, Some(p), stats) {
        Some(placement) if placement.len() <= p => Feasibility::Feasible(placement),
        _ => Feasibility::Infeasible,
    }
}

/// Number of centers the policy places for cost `alpha`; `None` when `alpha < 0`.
pub fn min_centers<S: Scalar>(pre: &Preprocessed<S>, strategy: SearchStrategy, alpha: &S) -> Option<usize> {
    place_centers(pre, strategy, alpha, None, &mut SearchStats::default()).map(|p| p.len())
}

fn place_centers<S: Scalar>(
    pre: &Preprocessed<S>,
    strategy: SearchStrategy,
    alpha: &S,
    limit: Option<usize>,
    stats: &mut SearchStats,
) -> Option<Placement<S>> {
    if *alpha < S::zero() {
        return None;
    }
    match find_peripheral_centers(pre, strategy, alpha, limit, stats) {
        PeripheralSearch::Trivial { .. } => Some(Placement {
            centers: vec![Center { point: PointOnTree::vertex(pre.tree.root), kind: CenterKind::Trivial }],
        }),
        PeripheralSearch::Found { trimmed, .. } => Some(resolve_trimmed(&pre.tree, &trimmed, alpha)),
        PeripheralSearch::EarlyInfeasible { .. } => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Exact;
    use crate::tree::{binarize, TreeNetwork};

    fn q(v: i64) -> Exact {
        Exact::from_i64(v)
    }

    fn prep(net: &TreeNetwork) -> Preprocessed<Exact> {
        Preprocessed::with_strategies(binarize(net, VertexId(0)).unwrap(), &SearchStrategy::ALL)
    }

    fn path3() -> TreeNetwork {
        TreeNetwork::from_integers(&[1, 1, 1], &[(0, 1, 4), (1, 2, 4)])
    }

    #[test]
    fn path_peripheral_center() {
        let pre = prep(&path3());
        for s in SearchStrategy::ALL {
            let mut stats = SearchStats::default();
            let r = find_peripheral_centers(&pre, s, &q(3), Some(2), &mut stats);
            let PeripheralSearch::Found { trimmed, peripheral, visited } = r else { panic!("{r:?}") };
            assert_eq!((peripheral, visited), (1, 2));
            let c: Vec<_> = trimmed.dummies().collect();
            assert_eq!(c[0].location, PointOnTree { edge_child_end: VertexId(2), offset_toward_parent: q(3) });
            assert_eq!(trimmed.vertices.len(), 3);
            assert_eq!(trimmed.second_type_count(), 0);
        }
    }

    #[test]
    fn trivial_and_early_exit() {
        let pre = prep(&path3());
        let mut stats = SearchStats::default();
        assert_eq!(
            find_peripheral_centers(&pre, SearchStrategy::Cascade, &q(9), Some(1), &mut stats),
            PeripheralSearch::Trivial { visited: 0 }
        );
        // Rooted at its middle vertex, the path has two leaves and two peripheral centers at alpha 0.
        let mid = prep(&TreeNetwork::from_integers(&[1, 1, 1], &[(0, 1, 4), (0, 2, 4)]));
        let r = find_peripheral_centers(&mid, SearchStrategy::Cascade, &q(0), Some(1), &mut SearchStats::default());
        assert_eq!(r, PeripheralSearch::EarlyInfeasible { visited: 2 });
        // Rooted at an end there is a single leaf; the other centers come from the bottom-up pass.
        let r = find_peripheral_centers(&pre, SearchStrategy::Cascade, &q(0), Some(1), &mut SearchStats::default());
        assert!(matches!(r, PeripheralSearch::Found { peripheral: 1, .. }));
        assert!(!feasibility_test(&pre, SearchStrategy::Cascade, &q(0), 1, &mut stats).is_feasible());
    }

    #[test]
    fn path_feasibility() {
        let pre = prep(&path3());
        for s in SearchStrategy::ALL {
            let mut st = SearchStats::default();
            match feasibility_test(&pre, s, &q(4), 1, &mut st) {
                Feasibility::Feasible(p) => {
                    assert_eq!(p.len(), 1);
                    assert_eq!(p.centers[0].point, PointOnTree::vertex(VertexId(1)));
                }
                other => panic!("{other:?}"),
            }
            assert!(!feasibility_test(&pre, s, &q(3), 1, &mut st).is_feasible());
            assert_eq!(min_centers(&pre, s, &q(3)), Some(2));
            assert_eq!(min_centers(&pre, s, &q(8)), Some(1));
            assert_eq!(min_centers(&pre, s, &q(0)), Some(3));
        }
    }

    #[test]
    fn weighted_path() {
        let pre = prep(&TreeNetwork::from_integers(&[1, 2, 1], &[(0, 1, 3), (1, 2, 3)]));
        for s in SearchStrategy::ALL {
            assert_eq!(min_centers(&pre, s, &q(2)), Some(2));
            assert_eq!(min_centers(&pre, s, &q(3)), Some(1));
        }
    }

    #[test]
    fn sibling_subtree_becomes_second_type() {
        // Complete binary tree of 7, unit weights and lengths; leaves of the
        // left child get their own centers at alpha = 0.
        let net = TreeNetwork::from_integers(
            &[0, 0, 0, 1, 1, 0, 0],
            &[(0, 1, 1), (0, 2, 1), (1, 3, 1), (1, 4, 1), (2, 5, 1), (2, 6, 1)],
        );
        let pre = prep(&net);
        let r = find_peripheral_centers(&pre, SearchStrategy::BinarySearch, &q(0), None, &mut SearchStats::default());
        let PeripheralSearch::Found { trimmed, peripheral, .. } = r else { panic!() };
        assert_eq!(peripheral, 2);
        let second: Vec<_> = trimmed.vertices.iter().filter(|v| matches!(v.kind, VertexKind::SecondType { .. })).collect();
        assert_eq!(second.len(), 1);
        assert_eq!(second[0].vertex, VertexId(2));
        assert_eq!(min_centers(&pre, SearchStrategy::Spine, &q(0)), Some(2));
    }
}
