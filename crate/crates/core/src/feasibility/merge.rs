//! One step of the bottom-up pass over the trimmed tree.

use crate::numeric::Scalar;
use crate::tree::VertexId;

/// State of a processed trimmed subtree, relative to its top vertex.
#[derive(Debug, Clone, PartialEq)]
pub enum SubtreeStatus<S> {
    /// Everything is covered; the highest center is this far below.
    Plus(S),
    /// Some vertex is uncovered; a center must appear within this distance above.
    Minus(S),
}

/// A trimmed child as seen from its parent `v`.
#[derive(Debug, Clone)]
pub struct ChildInput<S> {
    pub vertex: VertexId,
    pub status: SubtreeStatus<S>,
    /// Distance from `v` to the child's reference point.
    pub distance: S,
}

/// Center emitted on the edge from `child` toward `v`, `offset` above `child`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeCenter<S> {
    pub child: VertexId,
    pub offset: S,
}

fn covers<S: Scalar>(distance: &S, weight: &S, alpha: &S) -> bool {
    weight.is_zero_value() || (distance.clone() * weight).le_tol(alpha)
}

/// Combines the children of `v` (weight `weight`) into the status of `T(v)`.
///
/// Returns `None` when nothing in the subtree constrains the placement above `v`.
pub fn merge_step<S: Scalar>(
    weight: &S,
    alpha: &S,
    children: &[ChildInput<S>],
    emitted: &mut Vec<EdgeCenter<S>>,
) -> Option<SubtreeStatus<S>> {
    let cap = (!weight.is_zero_value()).then(|| alpha.clone() / weight);
    let mut plus: Option<S> = None;
    let mut minus: Option<S> = None;
    let keep_min = |slot: &mut Option<S>, x: S| {
        *slot = Some(match slot.take() {
            Some(y) => S::min_of(x, y),
            None => x,
        });
    };
    for c in children {
        match &c.status {
            SubtreeStatus::Plus(d) => keep_min(&mut plus, d.clone() + &c.distance),
            SubtreeStatus::Minus(d) if *d < c.distance => {
                emitted.push(EdgeCenter { child: c.vertex, offset: d.clone() });
                keep_min(&mut plus, c.distance.clone() - d);
            }
            SubtreeStatus::Minus(d) => keep_min(&mut minus, d.clone() - &c.distance),
        }
    }
    let capped = |need: S| match &cap {
        Some(c) => S::min_of(need, c.clone()),
        None => need,
    };
    match (plus, minus) {
        (None, None) => cap.map(SubtreeStatus::Minus),
        (Some(p), None) => {
            if covers(&p, weight, alpha) {
                Some(SubtreeStatus::Plus(p))
            } else {
                cap.map(SubtreeStatus::Minus)
            }
        }
        (None, Some(need)) => Some(SubtreeStatus::Minus(capped(need))),
        (Some(p), Some(need)) => {
            if covers(&p, weight, alpha) && p.le_tol(&need) {
                Some(SubtreeStatus::Plus(p))
            } else {
                Some(SubtreeStatus::Minus(capped(need)))
            }
        }
    }
}
