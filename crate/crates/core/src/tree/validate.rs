use std::fmt;

use num_traits::Signed;

use super::{TreeNetwork, VertexId};

/// One violated structural invariant of a [`TreeNetwork`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Issue {
    Empty,
    EdgeCount { expected: usize, found: usize },
    NegativeWeight(VertexId),
    NegativeLength { edge: usize },
    UnknownEndpoint { edge: usize },
    SelfLoop { edge: usize },
    CycleOrMultiEdge { edge: usize },
    Disconnected { unreachable: usize },
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::Empty => write!(f, "empty instance: at least one vertex is required"),
            Issue::EdgeCount { expected, found } => {
                write!(f, "not a tree: expected {expected} edges, found {found}")
            }
            Issue::NegativeWeight(v) => write!(f, "negative weight at vertex {}", v.0),
            Issue::NegativeLength { edge } => write!(f, "negative length on edge #{edge}"),
            Issue::UnknownEndpoint { edge } => write!(f, "edge #{edge} references an unknown vertex"),
            Issue::SelfLoop { edge } => write!(f, "cycle/multi-edge: edge #{edge} is a self-loop"),
            Issue::CycleOrMultiEdge { edge } => {
                write!(f, "cycle/multi-edge: edge #{edge} closes a cycle")
            }
            Issue::Disconnected { unreachable } => {
                write!(f, "disconnected: {unreachable} vertices unreachable from vertex 0")
            }
        }
    }
}

/// Every invariant violation found in a network; empty iff the network is a valid tree.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Diagnostics {
    pub issues: Vec<Issue>,
}

impl Diagnostics {
    pub fn is_empty(&self) -> bool {
        self.issues.is_empty()
    }
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, issue) in self.issues.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{issue}")?;
        }
        Ok(())
    }
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Lists all invariant violations of `t`.
pub fn validate(t: &TreeNetwork) -> Diagnostics {
    let n = t.len();
    let mut issues = Vec::new();
    if n == 0 {
        issues.push(Issue::Empty);
        return Diagnostics { issues };
    }
    if t.edges.len() != n - 1 {
        issues.push(Issue::EdgeCount { expected: n - 1, found: t.edges.len() });
    }
    for (i, w) in t.weights.iter().enumerate() {
        if w.is_negative() {
            issues.push(Issue::NegativeWeight(VertexId(i)));
        }
    }
    let mut sets = DisjointSets::new(n);
    for (i, e) in t.edges.iter().enumerate() {
        if e.length.is_negative() {
            issues.push(Issue::NegativeLength { edge: i });
        }
        if e.a.0 >= n || e.b.0 >= n {
            issues.push(Issue::UnknownEndpoint { edge: i });
            continue;
        }
        if e.a == e.b {
            issues.push(Issue::SelfLoop { edge: i });
        } else if !sets.union(e.a.0, e.b.0) {
            issues.push(Issue::CycleOrMultiEdge { edge: i });
        }
    }
    let root = sets.find(0);
    let unreachable = (0..n).filter(|&v| sets.find(v) != root).count();
    if unreachable > 0 {
        issues.push(Issue::Disconnected { unreachable });
    }
    Diagnostics { issues }
}
