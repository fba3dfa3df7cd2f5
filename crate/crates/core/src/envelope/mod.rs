//! Upper envelopes of subtree costs along root paths.
//!
//! For a vertex `v`, `E_v(x)` is the largest weighted distance from a point
//! `x` on the path from `v` to the root to any vertex of the subtree `T(v)`.
//! Points are addressed by their distance from the root (`position`). Since
//! every vertex of `T(v)` lies below `x`, each cost is the linear function
//! `w(u) * (depth(u) - position)` and `E_v` is their upper envelope: convex
//! and nonincreasing in position.
//!
//! Envelopes are stored as bending points ordered from `v` upward. Besides
//! the true breakpoints, every vertex of the root path contributes an
//! evaluation marker, and a final `Top` marker sits at `-height` so that
//! reach queries can look past the root into sibling branches.

mod cascade;
mod hull;

pub use cascade::{CascadeError, CascadeHandle, CascadeIndex};
pub use hull::{upper_envelope, CostLine};

use std::fmt::Write as _;

use crate::numeric::Scalar;
use crate::tree::{PointOnTree, RootedBinaryTree, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointKind {
    Breakpoint,
    /// Evaluation at a vertex of the root path.
    Vertex(VertexId),
    /// End of the domain, `height` above the root.
    Top,
    /// End of a curve that carries no vertex markers.
    Endpoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BendingPoint<S> {
    pub position: S,
    pub value: S,
    pub kind: PointKind,
    /// Vertex whose cost line is maximal just above this point (just below,
    /// for the last point).
    pub critical: VertexId,
}

/// Where a cost envelope meets a threshold.
#[derive(Debug, Clone, PartialEq)]
pub enum Reach<S> {
    /// The envelope already exceeds the threshold at its lowest point.
    Blocked,
    /// Highest position with envelope value `<=` the threshold, and the vertex
    /// whose cost equals the threshold there.
    At { position: S, critical: VertexId },
    /// The threshold is never exceeded on the domain.
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Envelope<S> {
    pub owner: VertexId,
    /// Ordered by decreasing position.
    pub points: Vec<BendingPoint<S>>,
}

impl<S: Scalar> Envelope<S> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Value at `position`; positions outside the domain extrapolate the end segments.
    pub fn evaluate(&self, position: &S) -> S {
        let pts = &self.points;
        let i = pts.partition_point(|p| p.position > *position);
        if i < pts.len() && pts[i].position == *position {
            // Coincident points carry equal values; take the max regardless.
            return pts[i..]
                .iter()
                .take_while(|p| p.position == *position)
                .map(|p| p.value.clone())
                .fold(pts[i].value.clone(), S::max_of);
        }
        if pts.len() == 1 {
            return pts[0].value.clone();
        }
        let (a, b) = match i {
            0 => (&pts[0], &pts[1]),
            i if i == pts.len() => (&pts[i - 2], &pts[i - 1]),
            i => (&pts[i - 1], &pts[i]),
        };
        interpolate(a, b, position)
    }

    /// Index of the first point whose value exceeds `alpha`, by binary search.
    pub fn upper_bound(&self, alpha: &S, comparisons: &mut u64) -> usize {
        let (mut lo, mut hi) = (0, self.points.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            *comparisons += 1;
            if self.points[mid].value <= *alpha {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Reach for `alpha` given the upper-bound index from [`Self::upper_bound`].
    pub fn reach_from_index(&self, alpha: &S, j: usize) -> Reach<S> {
        if j == 0 {
            return Reach::Blocked;
        }
        if j == self.points.len() {
            return Reach::Unbounded;
        }
        let (a, b) = (&self.points[j - 1], &self.points[j]);
        let position = if a.position == b.position || a.value == *alpha {
            a.position.clone()
        } else {
            a.position.clone()
                - (alpha.clone() - &a.value) * (a.position.clone() - &b.position) / (b.value.clone() - &a.value)
        };
        Reach::At { position, critical: a.critical }
    }

    pub fn reach(&self, alpha: &S) -> Reach<S> {
        let j = self.upper_bound(alpha, &mut 0);
        self.reach_from_index(alpha, j)
    }

    /// Distinct critical vertices, i.e. the cost lines the envelope is made of.
    pub fn lines(&self) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = Vec::new();
        for p in &self.points {
            if out.last() != Some(&p.critical) {
                out.push(p.critical);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn interpolate<S: Scalar>(a: &BendingPoint<S>, b: &BendingPoint<S>, position: &S) -> S {
    a.value.clone() + (b.value.clone() - &a.value) * (position.clone() - &a.position) / (b.position.clone() - &a.position)
}

/// Envelope of `v` built from an explicit set of candidate cost lines.
///
/// Domain is `[-height, depth(v)]`; markers are placed at every vertex of
/// the root path of `v` and at the top end.
pub fn envelope_from_lines<S: Scalar>(t: &RootedBinaryTree<S>, v: VertexId, lines: &[VertexId]) -> Envelope<S> {
    let lo = -t.height.clone();
    let hi = t.depth(v).clone();
    let segments = upper_envelope(lines.iter().map(|&u| CostLine::above(t, u)).collect(), &lo, &hi);

    let mut markers: Vec<(S, PointKind)> = t.ancestors(v).map(|u| (t.depth(u).clone(), PointKind::Vertex(u))).collect();
    markers.push((lo, PointKind::Top));

    let mut points = Vec::with_capacity(markers.len() + segments.len());
    let mut seg = 0;
    let push = |points: &mut Vec<BendingPoint<S>>, position: S, kind: PointKind, seg: usize| {
        let line = &segments[seg].1;
        points.push(BendingPoint { value: line.value(&position), position, kind, critical: line.vertex });
    };
    for (position, kind) in markers {
        // Breakpoints strictly above the previous marker and strictly below this one.
        while seg + 1 < segments.len() && segments[seg + 1].0 >= position {
            seg += 1;
            if segments[seg].0 > position {
                push(&mut points, segments[seg].0.clone(), PointKind::Breakpoint, seg);
            }
        }
        push(&mut points, position, kind, seg);
    }
    Envelope { owner: v, points }
}

/// Upper envelope of arbitrary cost lines on `[lo, hi]`, stored as its two
/// ends and its breakpoints.
pub fn curve_from_lines<S: Scalar>(owner: VertexId, lines: Vec<CostLine<S>>, lo: &S, hi: &S) -> Envelope<S> {
    let segments = upper_envelope(lines, lo, hi);
    let mut points = Vec::with_capacity(segments.len() + 1);
    for (i, (start, line)) in segments.iter().enumerate() {
        let kind = if i == 0 { PointKind::Endpoint } else { PointKind::Breakpoint };
        points.push(BendingPoint { value: line.value(start), position: start.clone(), kind, critical: line.vertex });
    }
    let last = &segments[segments.len() - 1].1;
    points.push(BendingPoint { value: last.value(lo), position: lo.clone(), kind: PointKind::Endpoint, critical: last.vertex });
    Envelope { owner, points }
}

/// Envelope of a leaf: its own cost line.
pub fn leaf_envelope<S: Scalar>(t: &RootedBinaryTree<S>, v: VertexId) -> Result<Envelope<S>, EnvelopeError> {
    if !t.is_leaf(v) {
        return Err(EnvelopeError::NotALeaf(v));
    }
    Ok(envelope_from_lines(t, v, &[v]))
}

/// Pointwise maximum of the children's envelopes and the cost line of `v`.
pub fn combine<S: Scalar>(
    t: &RootedBinaryTree<S>,
    left: Option<&Envelope<S>>,
    right: Option<&Envelope<S>>,
    v: VertexId,
) -> Envelope<S> {
    let mut lines = vec![v];
    for env in left.into_iter().chain(right) {
        lines.extend(env.lines());
    }
    lines.sort_unstable();
    lines.dedup();
    envelope_from_lines(t, v, &lines)
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EnvelopeError {
    #[error("vertex {} is not a leaf", .0.0)]
    NotALeaf(VertexId),
}

/// Envelopes of every vertex.
#[derive(Debug, Clone)]
pub struct EnvelopeSet<S> {
    pub envelopes: Vec<Envelope<S>>,
    pub total_points: usize,
}

impl<S: Scalar> EnvelopeSet<S> {
    pub fn get(&self, v: VertexId) -> &Envelope<S> {
        &self.envelopes[v.0]
    }

    /// `E_v` at the root-path vertex `ancestor` of `v`, read from its marker.
    pub fn value_at_ancestor(&self, t: &RootedBinaryTree<S>, v: VertexId, ancestor: VertexId) -> S {
        let env = self.get(v);
        let k = (t.level[v.0] - t.level[ancestor.0]) as usize;
        debug_assert_eq!(t.ancestors(v).nth(k), Some(ancestor));
        // Markers appear in path order; breakpoints may sit between them.
        env.points
            .iter()
            .filter(|p| matches!(p.kind, PointKind::Vertex(_)))
            .nth(k)
            .map(|p| p.value.clone())
            .expect("ancestor marker present")
    }

    /// Debug dump, one `env <v>: (pos,val) ...` line per vertex.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for env in &self.envelopes {
            let _ = write!(out, "env {}:", env.owner.0);
            for p in &env.points {
                let _ = write!(out, " ({},{})", p.position, p.value);
            }
            out.push('\n');
        }
        out
    }
}

/// Builds every envelope bottom-up.
pub fn build_envelopes<S: Scalar>(t: &RootedBinaryTree<S>) -> EnvelopeSet<S> {
    let mut slots: Vec<Option<Envelope<S>>> = vec![None; t.len()];
    for v in t.postorder() {
        let env = combine(
            t,
            t.left[v.0].and_then(|c| slots[c.0].as_ref()),
            t.right[v.0].and_then(|c| slots[c.0].as_ref()),
            v,
        );
        slots[v.0] = Some(env);
    }
    let envelopes: Vec<Envelope<S>> = slots.into_iter().map(|e| e.expect("every vertex visited")).collect();
    let total_points = envelopes.iter().map(Envelope::len).sum();
    EnvelopeSet { envelopes, total_points }
}

/// Point on the half-open parent edge `[v, p(v))` where `E_v` reaches `alpha`.
pub fn envelope_crossing_on_edge<S: Scalar>(
    t: &RootedBinaryTree<S>,
    es: &EnvelopeSet<S>,
    v: VertexId,
    alpha: &S,
) -> Option<PointOnTree<S>> {
    let parent = t.parent(v)?;
    match es.get(v).reach(alpha) {
        Reach::At { position, .. } if position > *t.depth(parent) => {
            Some(t.point_on_edge(v, t.depth(v).clone() - position))
        }
        _ => None,
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

    fn path3() -> RootedBinaryTree<Exact> {
        binarize(&TreeNetwork::from_integers(&[1, 1, 1], &[(0, 1, 4), (1, 2, 4)]), VertexId(0)).unwrap()
    }

    #[test]
    fn leaf_envelope_is_one_line() {
        let t = path3();
        let env = leaf_envelope(&t, VertexId(2)).unwrap();
        assert_eq!(env.evaluate(&q(8)), q(0));
        assert_eq!(env.evaluate(&q(0)), q(8));
        assert_eq!(leaf_envelope(&t, VertexId(1)), Err(EnvelopeError::NotALeaf(VertexId(1))));
    }

    #[test]
    fn zero_weight_leaf_is_flat() {
        let t: RootedBinaryTree<Exact> =
            binarize(&TreeNetwork::from_integers(&[1, 0], &[(0, 1, 5)]), VertexId(0)).unwrap();
        let env = leaf_envelope(&t, VertexId(1)).unwrap();
        assert!(env.points.iter().all(|p| p.value == q(0)));
    }

    #[test]
    fn path_envelopes_match_hand_values() {
        let t = path3();
        let es = build_envelopes(&t);
        assert_eq!(es.get(VertexId(2)).evaluate(&q(4)), q(4));
        assert_eq!(es.get(VertexId(1)).evaluate(&q(0)), q(8));
        assert_eq!(es.value_at_ancestor(&t, VertexId(2), VertexId(0)), q(8));
    }

    #[test]
    fn single_vertex_envelope_is_zero() {
        let t: RootedBinaryTree<Exact> = binarize(&TreeNetwork::from_integers(&[3], &[]), VertexId(0)).unwrap();
        let es = build_envelopes(&t);
        assert!(es.get(VertexId(0)).points.iter().all(|p| p.value == q(0) && p.position == q(0)));
    }

    #[test]
    fn combine_with_own_line() {
        // v at depth 3 with weight 2; single child whose line has slope 1 and value 4 at v.
        let t: RootedBinaryTree<Exact> =
            binarize(&TreeNetwork::from_integers(&[0, 2, 1], &[(0, 1, 3), (1, 2, 4)]), VertexId(0)).unwrap();
        let child = leaf_envelope(&t, VertexId(2)).unwrap();
        let env = combine(&t, Some(&child), None, VertexId(1));
        assert_eq!(env.evaluate(&q(3)), q(4));
        assert_eq!(env.evaluate(&q(1)), q(6));
    }

    #[test]
    fn combine_two_child_lines_adds_crossing() {
        // Children of v (depth 3): a at distance 4 (w=1) and b at distance 0 (w=3).
        let t: RootedBinaryTree<Exact> = binarize(
            &TreeNetwork::from_integers(&[0, 0, 1, 3], &[(0, 1, 3), (1, 2, 4), (1, 3, 0)]),
            VertexId(0),
        )
        .unwrap();
        let left = leaf_envelope(&t, VertexId(2)).unwrap();
        let right = leaf_envelope(&t, VertexId(3)).unwrap();
        let env = combine(&t, Some(&left), Some(&right), VertexId(1));
        let crossings: Vec<_> = env.points.iter().filter(|p| p.kind == PointKind::Breakpoint).collect();
        assert_eq!(crossings.len(), 1);
        assert_eq!(crossings[0].position, q(1));
        assert_eq!(crossings[0].value, q(6));
        for k in -12..=12 {
            let pos = Exact::new(k.into(), 4.into());
            let brute = [q(7) - pos.clone(), q(9) - q(3) * pos.clone()].into_iter().max().unwrap();
            assert_eq!(env.evaluate(&pos), brute);
        }
    }

    #[test]
    fn crossing_on_edge_examples() {
        let t = path3();
        let es = build_envelopes(&t);
        let x = envelope_crossing_on_edge(&t, &es, VertexId(2), &q(3)).unwrap();
        assert_eq!(x, PointOnTree { edge_child_end: VertexId(2), offset_toward_parent: q(3) });
        assert_eq!(envelope_crossing_on_edge(&t, &es, VertexId(1), &q(3)), None);
        let x = envelope_crossing_on_edge(&t, &es, VertexId(2), &q(0)).unwrap();
        assert_eq!(x, PointOnTree::vertex(VertexId(2)));
    }

    #[test]
    fn reach_past_root_uses_top_marker() {
        let t = path3();
        let es = build_envelopes(&t);
        // Height is 8, so E_2 is defined down to position -8 with value 16.
        assert_eq!(es.get(VertexId(2)).reach(&q(12)), Reach::At { position: q(-4), critical: VertexId(2) });
        assert_eq!(es.get(VertexId(2)).reach(&q(16)), Reach::Unbounded);
    }

    #[test]
    fn dump_format() {
        let es = build_envelopes(&path3());
        let dump = es.dump();
        assert_eq!(dump, "env 0: (0,8) (-8,16)\nenv 1: (4,4) (0,8) (-8,16)\nenv 2: (8,0) (4,4) (0,8) (-8,16)\n");
    }
}
