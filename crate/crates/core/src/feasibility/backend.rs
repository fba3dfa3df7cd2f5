//! Preprocessed structures and the subtree-cost queries the search runs on.

use crate::envelope::{build_envelopes, CascadeHandle, CascadeIndex, EnvelopeSet, Reach};
use crate::numeric::Scalar;
use crate::spine::{build_std, SpineDecomposition};
use crate::tree::{RootedBinaryTree, VertexId};

/// How `E_v` is searched during the truncated DFS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SearchStrategy {
    /// Independent binary search in every envelope.
    BinarySearch,
    /// Fractional cascading from the root downward.
    Cascade,
    /// Canonical spine-prefix decomposition of the spine tree.
    Spine,
}

impl SearchStrategy {
    pub const ALL: [SearchStrategy; 3] = [SearchStrategy::BinarySearch, SearchStrategy::Cascade, SearchStrategy::Spine];
}

/// Immutable preprocessing shared by any number of feasibility tests.
#[derive(Debug, Clone)]
pub struct Preprocessed<S> {
    pub tree: RootedBinaryTree<S>,
    pub envelopes: Option<EnvelopeSet<S>>,
    pub cascade: Option<CascadeIndex<S>>,
    pub spine: Option<SpineDecomposition<S>>,
}

#[derive(Debug, Clone, Copy)]
pub enum Cursor {
    Vertex(VertexId),
    Cascade(CascadeHandle),
}

impl Cursor {
    fn vertex(&self) -> VertexId {
        match self {
            Cursor::Vertex(v) => *v,
            Cursor::Cascade(h) => h.vertex,
        }
    }
}

impl<S: Scalar> Preprocessed<S> {
    /// Builds only what `strategy` needs.
    pub fn new(tree: RootedBinaryTree<S>, strategy: SearchStrategy) -> Self {
        Self::with_strategies(tree, &[strategy])
    }

    pub fn with_strategies(tree: RootedBinaryTree<S>, strategies: &[SearchStrategy]) -> Self {
        let needs_env = strategies.iter().any(|s| *s != SearchStrategy::Spine);
        let envelopes = needs_env.then(|| build_envelopes(&tree));
        let cascade = strategies
            .contains(&SearchStrategy::Cascade)
            .then(|| CascadeIndex::build(&tree, envelopes.as_ref().expect("built above")));
        let spine = strategies.contains(&SearchStrategy::Spine).then(|| build_std(&tree));
        Preprocessed { tree, envelopes, cascade, spine }
    }

    pub fn supports(&self, strategy: SearchStrategy) -> bool {
        match strategy {
            SearchStrategy::BinarySearch => self.envelopes.is_some(),
            SearchStrategy::Cascade => self.cascade.is_some(),
            SearchStrategy::Spine => self.spine.is_some(),
        }
    }

    fn envelopes(&self) -> &EnvelopeSet<S> {
        self.envelopes.as_ref().expect("envelopes were not built")
    }

    pub(crate) fn start(&self, strategy: SearchStrategy, alpha: &S, comparisons: &mut u64) -> Cursor {
        match strategy {
            SearchStrategy::Cascade => {
                Cursor::Cascade(self.cascade.as_ref().expect("cascade was not built").locate_root(alpha, comparisons))
            }
            _ => Cursor::Vertex(self.tree.root),
        }
    }

    pub(crate) fn descend(&self, parent: &Cursor, child: VertexId, alpha: &S, comparisons: &mut u64) -> Cursor {
        match parent {
            Cursor::Vertex(_) => Cursor::Vertex(child),
            Cursor::Cascade(h) => Cursor::Cascade(
                self.cascade
                    .as_ref()
                    .expect("cascade was not built")
                    .locate(alpha, child, *h, comparisons)
                    .expect("cursor descends to a child"),
            ),
        }
    }

    pub(crate) fn reach(&self, strategy: SearchStrategy, cursor: &Cursor, alpha: &S, comparisons: &mut u64) -> Reach<S> {
        let v = cursor.vertex();
        match (strategy, cursor) {
            (SearchStrategy::Spine, _) => {
                self.spine.as_ref().expect("spine decomposition was not built").reach(&self.tree, v, alpha, comparisons)
            }
            (_, Cursor::Cascade(h)) => {
                let j = self.cascade.as_ref().expect("cascade was not built").own_index(*h);
                self.envelopes().get(v).reach_from_index(alpha, j)
            }
            (_, Cursor::Vertex(_)) => {
                let env = self.envelopes().get(v);
                let j = env.upper_bound(alpha, comparisons);
                env.reach_from_index(alpha, j)
            }
        }
    }
}
