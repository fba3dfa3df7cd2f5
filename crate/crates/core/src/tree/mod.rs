//! Tree networks: input model, validation, binarization and distances.

mod format;
mod validate;

pub use format::{parse_document, parse_tree, render_tree};
pub use validate::{validate, Diagnostics, Issue};

use std::collections::VecDeque;

use num_rational::BigRational;
use num_traits::Signed;
use thiserror::Error;

use crate::numeric::Scalar;

/// Dense vertex index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Error)]
pub enum TreeError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{0}")]
    Invalid(Diagnostics),
    #[error("root vertex {0} does not exist")]
    UnknownRoot(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub a: VertexId,
    pub b: VertexId,
    pub length: BigRational,
}

/// Weighted tree as read from an instance document.
///
/// Construction does not check the tree invariants; run [`validate`] (or use
/// [`parse_tree`]) before handing a network to the solvers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNetwork {
    /// External id of each vertex, in dense-id order.
    pub labels: Vec<u64>,
    pub weights: Vec<BigRational>,
    pub edges: Vec<Edge>,
}

impl TreeNetwork {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Builds a network from integer data with labels `0..n`.
    pub fn from_integers(weights: &[i64], edges: &[(usize, usize, i64)]) -> Self {
        let int = |v: i64| BigRational::from_integer(v.into());
        TreeNetwork {
            labels: (0..weights.len() as u64).collect(),
            weights: weights.iter().map(|&w| int(w)).collect(),
            edges: edges
                .iter()
                .map(|&(a, b, l)| Edge { a: VertexId(a), b: VertexId(b), length: int(l) })
                .collect(),
        }
    }

    /// Number of vertices with strictly positive weight.
    pub fn positive_weight_count(&self) -> usize {
        self.weights.iter().filter(|w| w.is_positive()).count()
    }

    /// Adjacency lists `(neighbor, edge index)` in edge input order.
    pub fn adjacency(&self) -> Vec<Vec<(VertexId, usize)>> {
        let mut adj = vec![Vec::new(); self.len()];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.a.0].push((e.b, i));
            adj[e.b.0].push((e.a, i));
        }
        adj
    }
}

/// Binarized rooted working tree.
///
/// Vertices `0..original_count` are the input vertices; fillers follow.
#[derive(Debug, Clone)]
pub struct RootedBinaryTree<S> {
    pub root: VertexId,
    pub parent: Vec<Option<VertexId>>,
    pub left: Vec<Option<VertexId>>,
    pub right: Vec<Option<VertexId>>,
    pub parent_length: Vec<S>,
    /// Distance from the root.
    pub depth: Vec<S>,
    /// Number of edges from the root; the root has level 1.
    pub level: Vec<u32>,
    pub original: Vec<bool>,
    pub weight: Vec<S>,
    /// Largest depth over all vertices.
    pub height: S,
    pub original_count: usize,
    preorder: Vec<VertexId>,
}

impl<S: Scalar> RootedBinaryTree<S> {
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.len()).map(VertexId)
    }

    pub fn children(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.left[v.0].into_iter().chain(self.right[v.0])
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        self.left[v.0].is_none() && self.right[v.0].is_none()
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parent[v.0]
    }

    pub fn depth(&self, v: VertexId) -> &S {
        &self.depth[v.0]
    }

    pub fn weight(&self, v: VertexId) -> &S {
        &self.weight[v.0]
    }

    /// Vertices in pre-order (root first, left child before right).
    pub fn preorder(&self) -> &[VertexId] {
        &self.preorder
    }

    /// Vertices in an order where every child precedes its parent.
    pub fn postorder(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.preorder.iter().rev().copied()
    }

    /// Path from `v` up to the root, both inclusive.
    pub fn ancestors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        std::iter::successors(Some(v), move |&u| self.parent[u.0])
    }

    /// Vertices of the subtree rooted at `v`.
    pub fn subtree(&self, v: VertexId) -> Vec<VertexId> {
        let mut out = vec![v];
        let mut i = 0;
        while i < out.len() {
            let u = out[i];
            out.extend(self.children(u));
            i += 1;
        }
        out
    }

    pub fn lca(&self, a: VertexId, b: VertexId) -> VertexId {
        let (mut a, mut b) = (a, b);
        while self.level[a.0] > self.level[b.0] {
            a = self.parent[a.0].expect("non-root has parent");
        }
        while self.level[b.0] > self.level[a.0] {
            b = self.parent[b.0].expect("non-root has parent");
        }
        while a != b {
            a = self.parent[a.0].expect("non-root has parent");
            b = self.parent[b.0].expect("non-root has parent");
        }
        a
    }

    pub fn vertex_distance(&self, a: VertexId, b: VertexId) -> S {
        let l = self.lca(a, b);
        self.depth[a.0].clone() + &self.depth[b.0] - self.depth[l.0].clone() - self.depth[l.0].clone()
    }

    /// Distance from the root to point `p`.
    pub fn point_depth(&self, p: &PointOnTree<S>) -> S {
        self.depth[p.edge_child_end.0].clone() - &p.offset_toward_parent
    }

    /// Length of the unique path between two points.
    pub fn distance(&self, a: &PointOnTree<S>, b: &PointOnTree<S>) -> S {
        let (ca, cb) = (a.edge_child_end, b.edge_child_end);
        if ca == cb {
            let d = a.offset_toward_parent.clone() - &b.offset_toward_parent;
            return if d < S::zero() { -d } else { d };
        }
        let l = self.lca(ca, cb);
        let pa = self.point_depth(a);
        let pb = self.point_depth(b);
        if l == ca {
            // `b` lies inside T(ca); `a` sits at or above ca.
            pb - &self.depth[ca.0] + &a.offset_toward_parent
        } else if l == cb {
            pa - &self.depth[cb.0] + &b.offset_toward_parent
        } else {
            pa + pb - self.depth[l.0].clone() - self.depth[l.0].clone()
        }
    }

    /// Distance from point `p` to vertex `v`.
    pub fn point_vertex_distance(&self, p: &PointOnTree<S>, v: VertexId) -> S {
        self.distance(p, &PointOnTree::vertex(v))
    }

    /// Canonical point at `offset` above `child` on its parent edge.
    pub fn point_on_edge(&self, child: VertexId, offset: S) -> PointOnTree<S> {
        match self.parent[child.0] {
            Some(p) if offset == self.parent_length[child.0] => PointOnTree::vertex(p),
            _ => PointOnTree { edge_child_end: child, offset_toward_parent: offset },
        }
    }

    /// Canonical point on the root path of `v` at root-distance `position`.
    pub fn point_at_depth(&self, v: VertexId, position: &S) -> PointOnTree<S> {
        let mut u = v;
        loop {
            match self.parent[u.0] {
                Some(p) if *position <= self.depth[p.0] => u = p,
                _ => break,
            }
        }
        self.point_on_edge(u, self.depth[u.0].clone() - position)
    }

    /// Nearest input vertex at or above `v`.
    pub fn original_ancestor(&self, v: VertexId) -> VertexId {
        self.ancestors(v).find(|u| self.original[u.0]).expect("root is an input vertex")
    }

    /// Expresses `p` on the input tree: `(child, parent, offset from child)`.
    ///
    /// The root is reported as `(r, r, 0)`.
    pub fn to_input_edge(&self, p: &PointOnTree<S>) -> (VertexId, VertexId, S) {
        let c = p.edge_child_end;
        if !self.original[c.0] {
            // Filler edges have zero length, so the point coincides with an input vertex.
            let a = self.original_ancestor(c);
            return self.to_input_edge(&PointOnTree::vertex(a));
        }
        match self.parent[c.0] {
            Some(par) => (c, self.original_ancestor(par), p.offset_toward_parent.clone()),
            None => (c, c, S::zero()),
        }
    }
}

/// A point on the tree: `offset_toward_parent` above `edge_child_end`.
///
/// A vertex is canonically offset 0 on its own parent edge; the root uses
/// offset 0 on a virtual zero-length self-edge.
#[derive(Debug, Clone, PartialEq)]
pub struct PointOnTree<S> {
    pub edge_child_end: VertexId,
    pub offset_toward_parent: S,
}

impl<S: Scalar> PointOnTree<S> {
    pub fn vertex(v: VertexId) -> Self {
        PointOnTree { edge_child_end: v, offset_toward_parent: S::zero() }
    }
}

/// Roots `t` at `root` and splits high-degree vertices with zero-weight fillers.
///
/// A vertex with `k > 2` children keeps its first child on the left and gets a
/// right-leaning chain of `k - 2` fillers joined by zero-length edges.
pub fn binarize<S: Scalar>(t: &TreeNetwork, root: VertexId) -> Result<RootedBinaryTree<S>, TreeError> {
    let report = validate(t);
    if !report.is_empty() {
        return Err(TreeError::Invalid(report));
    }
    let n = t.len();
    if root.0 >= n {
        return Err(TreeError::UnknownRoot(root.0));
    }
    let adj = t.adjacency();

    let mut parent: Vec<Option<VertexId>> = vec![None; n];
    let mut parent_length: Vec<S> = vec![S::zero(); n];
    let mut left: Vec<Option<VertexId>> = vec![None; n];
    let mut right: Vec<Option<VertexId>> = vec![None; n];
    let mut weight: Vec<S> = t.weights.iter().map(S::from_rational).collect();
    let mut original = vec![true; n];

    let mut seen = vec![false; n];
    seen[root.0] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let mut kids = Vec::new();
        for &(u, e) in &adj[v.0] {
            if !seen[u.0] {
                seen[u.0] = true;
                parent_length[u.0] = S::from_rational(&t.edges[e].length);
                kids.push(u);
                queue.push_back(u);
            }
        }
        let mut host = v;
        let mut rest = kids.as_slice();
        while rest.len() > 2 {
            let filler = VertexId(parent.len());
            parent.push(Some(host));
            parent_length.push(S::zero());
            left.push(None);
            right.push(None);
            weight.push(S::zero());
            original.push(false);
            left[host.0] = Some(rest[0]);
            parent[rest[0].0] = Some(host);
            right[host.0] = Some(filler);
            host = filler;
            rest = &rest[1..];
        }
        for (slot, &child) in rest.iter().enumerate() {
            parent[child.0] = Some(host);
            if slot == 0 {
                left[host.0] = Some(child);
            } else {
                right[host.0] = Some(child);
            }
        }
    }

    let total = parent.len();
    let mut depth = vec![S::zero(); total];
    let mut level = vec![1u32; total];
    let mut preorder = Vec::with_capacity(total);
    let mut stack = vec![root];
    let mut height = S::zero();
    while let Some(v) = stack.pop() {
        preorder.push(v);
        if let Some(p) = parent[v.0] {
            depth[v.0] = depth[p.0].clone() + &parent_length[v.0];
            level[v.0] = level[p.0] + 1;
            if depth[v.0] > height {
                height = depth[v.0].clone();
            }
        }
        stack.extend(right[v.0]);
        stack.extend(left[v.0]);
    }

    Ok(RootedBinaryTree {
        root,
        parent,
        left,
        right,
        parent_length,
        depth,
        level,
        original,
        weight,
        height,
        original_count: n,
        preorder,
    })
}

/// All-pairs distances on the input network by walking from each vertex.
pub fn all_pairs_distances(t: &TreeNetwork) -> Vec<Vec<BigRational>> {
    let n = t.len();
    let adj = t.adjacency();
    let mut out = Vec::with_capacity(n);
    for s in 0..n {
        let mut dist: Vec<Option<BigRational>> = vec![None; n];
        dist[s] = Some(BigRational::from_integer(0.into()));
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            let dv = dist[v].clone().expect("visited");
            for &(u, e) in &adj[v] {
                if dist[u.0].is_none() {
                    dist[u.0] = Some(dv.clone() + &t.edges[e].length);
                    stack.push(u.0);
                }
            }
        }
        out.push(dist.into_iter().map(|d| d.expect("connected")).collect());
    }
    out
}
