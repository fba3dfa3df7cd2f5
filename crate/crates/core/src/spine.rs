//! Spine tree decomposition.
//!
//! The rooted binary tree is cut into spines: starting at a spine head, each
//! step follows the child with more leaves (ties go to the smaller vertex id)
//! until a leaf is reached. The other child of every spine vertex heads a
//! hanging branch, which is decomposed recursively one level deeper.
//!
//! Every spine carries a weight-balanced search tree whose leaves are the
//! spine vertices from the leaf end `v_1` up to the head `v_k`; the weight of
//! `v_i` is one plus the size of its hanging branch. A search node covering
//! `v_L..v_R` stores two side envelopes over the vertices of the hanging
//! branches it covers: `E_L` for positions above `v_R`, and `E_R` for
//! positions on the spine below `v_L`. It also stores the envelope of the
//! whole covered part (spine vertices included), which answers subtree cost
//! queries for any spine prefix by a canonical decomposition.

use std::fmt::Write as _;

use crate::envelope::{curve_from_lines, CostLine, Envelope, Reach};
use crate::numeric::Scalar;
use crate::tree::{RootedBinaryTree, VertexId};

#[derive(Debug, Clone)]
pub struct Spine {
    /// 1 for the spine through the root.
    pub level: u32,
    /// From the leaf end up to the head.
    pub vertices: Vec<VertexId>,
    /// Spine vertex the head hangs from.
    pub attach: Option<VertexId>,
    pub root_node: usize,
}

impl Spine {
    pub fn head(&self) -> VertexId {
        *self.vertices.last().expect("spines are nonempty")
    }
}

#[derive(Debug, Clone)]
pub struct SearchNode<S> {
    pub spine: usize,
    /// Covered spine indices `lo..=hi`, counted from the leaf end.
    pub lo: usize,
    pub hi: usize,
    pub children: Option<[usize; 2]>,
    pub parent: Option<usize>,
    /// Nodes on the path to the root of the whole decomposition, this one included.
    pub depth: usize,
    /// Hanging-branch costs for positions at or above `v_hi`; `None` without branches.
    pub e_left: Option<Envelope<S>>,
    /// Hanging-branch costs for spine positions at or below `v_lo`.
    pub e_right: Option<Envelope<S>>,
    /// Costs of all covered vertices for positions at or above `v_hi`.
    pub span: Envelope<S>,
}

#[derive(Debug, Clone)]
pub struct SpineDecomposition<S> {
    pub spines: Vec<Spine>,
    pub nodes: Vec<SearchNode<S>>,
    /// `(spine, index)` of every vertex.
    pub position: Vec<(usize, usize)>,
    /// Search-tree leaf of every vertex.
    pub leaf_node: Vec<usize>,
}

struct Lines<S> {
    left: Vec<CostLine<S>>,
    right: Vec<CostLine<S>>,
    span: Vec<CostLine<S>>,
}

fn hull_lines<S: Scalar>(lines: Vec<CostLine<S>>, lo: &S, hi: &S) -> Vec<CostLine<S>> {
    if lines.is_empty() {
        return lines;
    }
    let mut out: Vec<CostLine<S>> = crate::envelope::upper_envelope(lines, lo, hi).into_iter().map(|(_, l)| l).collect();
    out.dedup_by(|a, b| a.vertex == b.vertex && a.slope == b.slope);
    out
}

fn leaf_counts<S: Scalar>(t: &RootedBinaryTree<S>) -> (Vec<usize>, Vec<usize>) {
    let mut leaves = vec![0usize; t.len()];
    let mut sizes = vec![1usize; t.len()];
    for &v in t.preorder().iter().rev() {
        let mut l = 0;
        for c in [t.left[v.0], t.right[v.0]].into_iter().flatten() {
            l += leaves[c.0];
            sizes[v.0] += sizes[c.0];
        }
        leaves[v.0] = l.max(1);
    }
    (leaves, sizes)
}

/// Builds the decomposition and all side envelopes.
pub fn build_std<S: Scalar>(t: &RootedBinaryTree<S>) -> SpineDecomposition<S> {
    let (leaves, sizes) = leaf_counts(t);
    let mut spines: Vec<Spine> = Vec::new();
    let mut hanging: Vec<Vec<Option<VertexId>>> = Vec::new();
    let mut position = vec![(0usize, 0usize); t.len()];
    let mut heads = vec![(t.root, None::<VertexId>, 1u32)];
    while let Some((head, attach, level)) = heads.pop() {
        let mut path = Vec::new();
        let mut hang = Vec::new();
        let mut cur = head;
        loop {
            path.push(cur);
            let kids: Vec<VertexId> = t.children(cur).collect();
            match kids.as_slice() {
                [] => {
                    hang.push(None);
                    break;
                }
                [only] => {
                    hang.push(None);
                    cur = *only;
                }
                [a, b] => {
                    let heavy = match leaves[a.0].cmp(&leaves[b.0]) {
                        std::cmp::Ordering::Greater => *a,
                        std::cmp::Ordering::Less => *b,
                        std::cmp::Ordering::Equal => (*a).min(*b),
                    };
                    let light = if heavy == *a { *b } else { *a };
                    hang.push(Some(light));
                    heads.push((light, Some(cur), level + 1));
                    cur = heavy;
                }
                _ => unreachable!("binary tree"),
            }
        }
        path.reverse();
        hang.reverse();
        let s = spines.len();
        for (i, v) in path.iter().enumerate() {
            position[v.0] = (s, i);
        }
        spines.push(Spine { level, vertices: path, attach, root_node: usize::MAX });
        hanging.push(hang);
    }

    let lo = -t.height.clone();
    let mut nodes: Vec<SearchNode<S>> = Vec::new();
    let mut leaf_node = vec![usize::MAX; t.len()];
    let mut span_of_spine: Vec<Option<Vec<CostLine<S>>>> = vec![None; spines.len()];
    // Spines are created top-down, so every hanging spine has a larger index.
    for s in (0..spines.len()).rev() {
        let weights: Vec<usize> = hanging[s].iter().map(|h| 1 + h.map_or(0, |c| sizes[c.0])).collect();
        let mut prefix = vec![0usize; weights.len() + 1];
        for (i, w) in weights.iter().enumerate() {
            prefix[i + 1] = prefix[i] + w;
        }
        let ctx = BuildCtx { t, spine: s, vertices: &spines[s].vertices, hanging: &hanging[s], prefix: &prefix, lo: &lo };
        let (root, lines) = ctx.build(0, weights.len() - 1, &mut nodes, &mut leaf_node, &mut span_of_spine, &position);
        spines[s].root_node = root;
        span_of_spine[s] = Some(lines.span);
    }

    // Depths, top-down through spines in creation order.
    for s in 0..spines.len() {
        let base = match spines[s].attach {
            Some(a) => nodes[leaf_node[a.0]].depth,
            None => 0,
        };
        let mut stack = vec![(spines[s].root_node, base + 1)];
        while let Some((n, d)) = stack.pop() {
            nodes[n].depth = d;
            if let Some([a, b]) = nodes[n].children {
                stack.push((a, d + 1));
                stack.push((b, d + 1));
            }
        }
    }

    SpineDecomposition { spines, nodes, position, leaf_node }
}

struct BuildCtx<'a, S> {
    t: &'a RootedBinaryTree<S>,
    spine: usize,
    vertices: &'a [VertexId],
    hanging: &'a [Option<VertexId>],
    prefix: &'a [usize],
    lo: &'a S,
}

impl<S: Scalar> BuildCtx<'_, S> {
    fn split(&self, lo: usize, hi: usize) -> usize {
        let base = self.prefix[lo];
        let total = self.prefix[hi + 1] - base;
        // Smallest m whose left part holds at least half the weight.
        let m = lo + self.prefix[lo + 1..=hi + 1].partition_point(|&p| 2 * (p - base) < total);
        let cost = |m: usize| {
            let left = self.prefix[m + 1] - base;
            left.max(total - left)
        };
        let mut best = m.min(hi - 1);
        if best > lo && cost(best - 1) <= cost(best) {
            best -= 1;
        }
        best
    }

    #[allow(clippy::too_many_arguments)]
    fn build(
        &self,
        lo: usize,
        hi: usize,
        nodes: &mut Vec<SearchNode<S>>,
        leaf_node: &mut [usize],
        span_of_spine: &mut [Option<Vec<CostLine<S>>>],
        position: &[(usize, usize)],
    ) -> (usize, Lines<S>) {
        let t = self.t;
        let v_lo = self.vertices[lo];
        let v_hi = self.vertices[hi];
        let top = t.depth(v_hi).clone();
        let (children, left, right, span) = if lo == hi {
            let mut left = Vec::new();
            let mut right = Vec::new();
            if let Some(c) = self.hanging[lo] {
                let (cs, _) = position[c.0];
                let branch = span_of_spine[cs].take().expect("hanging spine built first");
                let two_d = t.depth(v_lo).clone() * S::from_i64(2);
                for l in &branch {
                    right.push(CostLine {
                        vertex: l.vertex,
                        slope: -l.slope.clone(),
                        intercept: l.intercept.clone() - l.slope.clone() * &two_d,
                    });
                }
                left = branch;
            }
            let mut span = left.clone();
            span.push(CostLine::above(t, v_lo));
            (None, left, right, span)
        } else {
            let m = self.split(lo, hi);
            let (a, la) = self.build(lo, m, nodes, leaf_node, span_of_spine, position);
            let (b, lb) = self.build(m + 1, hi, nodes, leaf_node, span_of_spine, position);
            let cat = |mut x: Vec<CostLine<S>>, y: Vec<CostLine<S>>| {
                x.extend(y);
                x
            };
            (Some([a, b]), cat(la.left, lb.left), cat(la.right, lb.right), cat(la.span, lb.span))
        };
        let bottom = t.depth(self.vertices[0]).clone();
        let low = t.depth(v_lo).clone();
        let left = hull_lines(left, self.lo, &top);
        let right = hull_lines(right, &low, &bottom);
        let span = hull_lines(span, self.lo, &top);
        let id = nodes.len();
        nodes.push(SearchNode {
            spine: self.spine,
            lo,
            hi,
            children,
            parent: None,
            depth: 0,
            e_left: (!left.is_empty()).then(|| curve_from_lines(v_hi, left.clone(), self.lo, &top)),
            e_right: (!right.is_empty()).then(|| curve_from_lines(v_lo, right.clone(), &low, &bottom)),
            span: curve_from_lines(v_hi, span.clone(), self.lo, &top),
        });
        if let Some([a, b]) = children {
            nodes[a].parent = Some(id);
            nodes[b].parent = Some(id);
        } else {
            leaf_node[v_lo.0] = id;
        }
        (id, Lines { left, right, span })
    }
}

impl<S: Scalar> SpineDecomposition<S> {
    /// Largest number of search nodes on a path from a leaf to the root of the decomposition.
    pub fn max_depth(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    /// Search nodes whose ranges partition the spine prefix `v_1..=v` of the spine through `v`.
    pub fn prefix_cover(&self, v: VertexId) -> Vec<usize> {
        let (s, i) = self.position[v.0];
        let mut out = Vec::new();
        let mut stack = vec![self.spines[s].root_node];
        while let Some(n) = stack.pop() {
            let node = &self.nodes[n];
            if node.lo > i {
                continue;
            }
            if node.hi <= i {
                out.push(n);
            } else if let Some([a, b]) = node.children {
                stack.push(b);
                stack.push(a);
            }
        }
        out
    }

    /// Highest position at or above `v` where the subtree cost of `v` is at most `alpha`.
    pub fn reach(&self, t: &RootedBinaryTree<S>, v: VertexId, alpha: &S, comparisons: &mut u64) -> Reach<S> {
        let limit = t.depth(v);
        let mut best: Option<(S, VertexId)> = None;
        for n in self.prefix_cover(v) {
            let env = &self.nodes[n].span;
            let j = env.upper_bound(alpha, comparisons);
            match env.reach_from_index(alpha, j) {
                Reach::Blocked => return Reach::Blocked,
                Reach::Unbounded => {}
                Reach::At { position, critical } => {
                    if position > *limit {
                        return Reach::Blocked;
                    }
                    if best.as_ref().is_none_or(|(b, _)| position > *b) {
                        best = Some((position, critical));
                    }
                }
            }
        }
        match best {
            Some((position, critical)) => Reach::At { position, critical },
            None => Reach::Unbounded,
        }
    }

    /// One line per spine: `spine <level>: v_1 ... v_k @attach=<v>`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for s in &self.spines {
            let _ = write!(out, "spine {}:", s.level);
            for v in &s.vertices {
                let _ = write!(out, " {}", v.0);
            }
            match s.attach {
                Some(a) => {
                    let _ = writeln!(out, " @attach={}", a.0);
                }
                None => {
                    let _ = writeln!(out, " @attach=-");
                }
            }
        }
        out
    }
}

/// Maximum search-node depth of the decomposition of `t`.
pub fn std_max_depth<S: Scalar>(t: &RootedBinaryTree<S>) -> usize {
    build_std(t).max_depth()
}
