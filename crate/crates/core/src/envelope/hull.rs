//! Upper envelope of vertex cost lines restricted to a position interval.

use crate::numeric::Scalar;
use crate::tree::{RootedBinaryTree, VertexId};

/// Cost line of a vertex viewed from its ancestors: `value(pos) = c - m * pos`.
///
/// `m` is the vertex weight and `c = m * depth(u)`; `pos` is a distance from
/// the root along a root path that passes above `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct CostLine<S> {
    pub vertex: VertexId,
    pub slope: S,
    pub intercept: S,
}

impl<S: Scalar> CostLine<S> {
    /// Line of `u` for points above it on its root path.
    pub fn above(t: &RootedBinaryTree<S>, u: VertexId) -> Self {
        let w = t.weight(u).clone();
        CostLine { vertex: u, intercept: w.clone() * t.depth(u), slope: w }
    }

    pub fn value(&self, pos: &S) -> S {
        self.intercept.clone() - self.slope.clone() * pos
    }
}

/// Segments of the upper envelope of `lines` on `[lo, hi]`, walking from `hi`
/// down to `lo`.
///
/// Each entry is `(start, line)`: the line is maximal from `start` downward to
/// the next entry's start. The first start is `hi`. At a breakpoint the line
/// that takes over below it is reported. Parallel lines keep the larger
/// intercept; exact ties keep the smaller vertex id.
pub fn upper_envelope<S: Scalar>(mut lines: Vec<CostLine<S>>, lo: &S, hi: &S) -> Vec<(S, CostLine<S>)> {
    assert!(!lines.is_empty(), "envelope of no lines");
    // Walking downward in position means increasing t = -pos; the slope in t
    // is the weight, so sort by weight ascending.
    lines.sort_by(|a, b| {
        a.slope
            .partial_cmp(&b.slope)
            .unwrap()
            .then_with(|| b.intercept.partial_cmp(&a.intercept).unwrap())
            .then_with(|| a.vertex.cmp(&b.vertex))
    });
    lines.dedup_by(|later, earlier| later.slope == earlier.slope);

    // Upper hull over t of y = intercept + slope * t.
    let mut hull: Vec<CostLine<S>> = Vec::with_capacity(lines.len());
    for line in lines {
        while hull.len() >= 2 {
            let l1 = &hull[hull.len() - 2];
            let l2 = &hull[hull.len() - 1];
            // l2 is redundant when its crossing with l1 is not left of its crossing with `line`.
            let lhs = (l1.intercept.clone() - &l2.intercept) * (line.slope.clone() - &l2.slope);
            let rhs = (l2.intercept.clone() - &line.intercept) * (l2.slope.clone() - &l1.slope);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(line);
    }

    // Crossing of hull[i] and hull[i+1] in t.
    let crossing = |i: usize| -> S {
        (hull[i].intercept.clone() - &hull[i + 1].intercept) / (hull[i + 1].slope.clone() - &hull[i].slope)
    };
    let t_start = -hi.clone();
    let t_end = -lo.clone();
    let mut i = 0;
    while i + 1 < hull.len() && crossing(i) <= t_start {
        i += 1;
    }
    let mut out = vec![(hi.clone(), hull[i].clone())];
    while i + 1 < hull.len() {
        let x = crossing(i);
        if x >= t_end {
            break;
        }
        i += 1;
        out.push((-x, hull[i].clone()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Exact;

    fn line(v: usize, w: i64, c: i64) -> CostLine<Exact> {
        CostLine { vertex: VertexId(v), slope: Exact::from_i64(w), intercept: Exact::from_i64(c) }
    }

    fn brute_max(lines: &[CostLine<Exact>], pos: &Exact) -> Exact {
        lines.iter().map(|l| l.value(pos)).fold(None, |m: Option<Exact>, v| Some(m.map_or(v.clone(), |m| m.max(v)))).unwrap()
    }

    fn eval(segs: &[(Exact, CostLine<Exact>)], pos: &Exact) -> Exact {
        let ix = segs.iter().rposition(|(s, _)| s >= pos).unwrap();
        segs[ix].1.value(pos)
    }

    #[test]
    fn two_lines_cross_once() {
        // Slope-1 line worth 4 at pos 3, slope-3 line worth 0 at pos 3.
        let lines = vec![line(0, 1, 7), line(1, 3, 9)];
        let segs = upper_envelope(lines.clone(), &Exact::from_i64(-10), &Exact::from_i64(3));
        assert_eq!(segs.len(), 2);
        assert_eq!(segs[1].0, Exact::from_i64(1));
        assert_eq!(segs[1].1.value(&Exact::from_i64(1)), Exact::from_i64(6));
        for k in -40..=12 {
            let pos = Exact::new(k.into(), 4.into());
            assert_eq!(eval(&segs, &pos), brute_max(&lines, &pos));
        }
    }

    #[test]
    fn dominated_and_parallel_lines_vanish() {
        let lines = vec![line(0, 2, 1), line(1, 2, 5), line(2, 1, 0), line(3, 5, 3)];
        let segs = upper_envelope(lines.clone(), &Exact::from_i64(-6), &Exact::from_i64(6));
        assert!(segs.iter().all(|(_, l)| l.vertex != VertexId(0)));
        for k in -24..=24 {
            let pos = Exact::new(k.into(), 4.into());
            assert_eq!(eval(&segs, &pos), brute_max(&lines, &pos));
        }
    }
}
