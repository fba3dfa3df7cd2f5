//! Fractional cascading over the envelope value sequences.
//!
//! Each vertex keeps an augmented catalog: its own envelope values merged
//! with every second element of each child's augmented catalog. Prefix counts
//! stored at every catalog position act as bridges: after locating a key in a
//! parent catalog, the position in a child catalog is pinned down with a
//! single extra comparison.

use super::EnvelopeSet;
use crate::numeric::Scalar;
use crate::tree::{RootedBinaryTree, VertexId};

#[derive(Debug, Clone)]
struct Catalog<S> {
    values: Vec<S>,
    /// `own[i]`: elements of the vertex's own envelope among `values[..i]`.
    own: Vec<u32>,
    /// `bridge[k][i]`: sampled elements of child `k` (left, right) among `values[..i]`.
    bridge: [Vec<u32>; 2],
}

/// Augmented catalogs for the whole tree.
#[derive(Debug, Clone)]
pub struct CascadeIndex<S> {
    catalogs: Vec<Catalog<S>>,
    children: Vec<[Option<VertexId>; 2]>,
    parent: Vec<Option<VertexId>>,
    root: VertexId,
    pub total_entries: usize,
}

/// Located position of a key in one vertex's augmented catalog: the number of
/// catalog entries `<=` the key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CascadeHandle {
    pub vertex: VertexId,
    pub position: usize,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CascadeError {
    #[error("handle for vertex {} is not the parent of vertex {}", .handle.0, .child.0)]
    NotParent { handle: VertexId, child: VertexId },
}

fn sampled<S: Clone>(values: &[S]) -> impl Iterator<Item = S> + '_ {
    values.iter().skip(1).step_by(2).cloned()
}

impl<S: Scalar> CascadeIndex<S> {
    /// Merges catalogs bottom-up.
    pub fn build(t: &RootedBinaryTree<S>, es: &EnvelopeSet<S>) -> Self {
        let mut catalogs: Vec<Option<Catalog<S>>> = vec![None; t.len()];
        for v in t.postorder() {
            let own: Vec<S> = es.get(v).points.iter().map(|p| p.value.clone()).collect();
            let kids = [t.left[v.0], t.right[v.0]];
            let samples: [Vec<S>; 2] = kids.map(|c| match c {
                Some(c) => sampled(&catalogs[c.0].as_ref().expect("child built first").values).collect(),
                None => Vec::new(),
            });
            catalogs[v.0] = Some(merge3(own, &samples));
        }
        let catalogs: Vec<Catalog<S>> = catalogs.into_iter().map(|c| c.expect("built")).collect();
        let total_entries = catalogs.iter().map(|c| c.values.len()).sum();
        CascadeIndex {
            catalogs,
            children: t.vertices().map(|v| [t.left[v.0], t.right[v.0]]).collect(),
            parent: t.parent.clone(),
            root: t.root,
            total_entries,
        }
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn catalog_len(&self, v: VertexId) -> usize {
        self.catalogs[v.0].values.len()
    }

    /// Binary search at the root.
    pub fn locate_root(&self, alpha: &S, comparisons: &mut u64) -> CascadeHandle {
        CascadeHandle { vertex: self.root, position: self.search(self.root, alpha, comparisons) }
    }

    /// Plain binary search in any catalog; the reference the cascade is checked against.
    pub fn search(&self, v: VertexId, alpha: &S, comparisons: &mut u64) -> usize {
        let values = &self.catalogs[v.0].values;
        let (mut lo, mut hi) = (0, values.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            *comparisons += 1;
            if values[mid] <= *alpha {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Follows the bridge from the parent's located position into `v`.
    pub fn locate(
        &self,
        alpha: &S,
        v: VertexId,
        parent: CascadeHandle,
        comparisons: &mut u64,
    ) -> Result<CascadeHandle, CascadeError> {
        let side = match self.parent[v.0] {
            Some(p) if p == parent.vertex => {
                if self.children[p.0][0] == Some(v) {
                    0
                } else {
                    1
                }
            }
            _ => return Err(CascadeError::NotParent { handle: parent.vertex, child: v }),
        };
        let k = self.catalogs[parent.vertex.0].bridge[side][parent.position] as usize;
        // Sampled child entries are its odd positions: entry 2k-1 is <= alpha, entry 2k+1 is not.
        let values = &self.catalogs[v.0].values;
        let mut position = 2 * k;
        if position < values.len() {
            *comparisons += 1;
            if values[position] <= *alpha {
                position += 1;
            }
        }
        Ok(CascadeHandle { vertex: v, position: position.min(values.len()) })
    }

    /// Number of the vertex's own envelope points `<=` the located key.
    pub fn own_index(&self, h: CascadeHandle) -> usize {
        self.catalogs[h.vertex.0].own[h.position] as usize
    }
}

fn merge3<S: Scalar>(own: Vec<S>, samples: &[Vec<S>; 2]) -> Catalog<S> {
    let total = own.len() + samples[0].len() + samples[1].len();
    let mut values = Vec::with_capacity(total);
    let mut counts = [Vec::with_capacity(total + 1), Vec::with_capacity(total + 1), Vec::with_capacity(total + 1)];
    let sources: [&[S]; 3] = [&own, &samples[0], &samples[1]];
    let mut next = [0usize; 3];
    loop {
        for (c, n) in counts.iter_mut().zip(next) {
            c.push(n as u32);
        }
        let mut best: Option<usize> = None;
        for s in 0..3 {
            if next[s] < sources[s].len() {
                let better = match best {
                    None => true,
                    Some(b) => sources[s][next[s]] < sources[b][next[b]],
                };
                if better {
                    best = Some(s);
                }
            }
        }
        match best {
            Some(s) => {
                values.push(sources[s][next[s]].clone());
                next[s] += 1;
            }
            None => break,
        }
    }
    let [own, left, right] = counts;
    Catalog { values, own, bridge: [left, right] }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envelope::build_envelopes;
    use crate::numeric::Exact;
    use crate::tree::{binarize, TreeNetwork};

    fn q(v: i64) -> Exact {
        Exact::from_i64(v)
    }

    fn path3() -> RootedBinaryTree<Exact> {
        binarize(&TreeNetwork::from_integers(&[1, 1, 1], &[(0, 1, 4), (1, 2, 4)]), VertexId(0)).unwrap()
    }

    #[test]
    fn single_vertex_catalog() {
        let t: RootedBinaryTree<Exact> = binarize(&TreeNetwork::from_integers(&[1], &[]), VertexId(0)).unwrap();
        let ci = CascadeIndex::build(&t, &build_envelopes(&t));
        // The root marker and the top marker coincide for a single vertex.
        assert_eq!(ci.catalog_len(VertexId(0)), 2);
    }

    #[test]
    fn boundaries_locate_to_ends() {
        let t = path3();
        let ci = CascadeIndex::build(&t, &build_envelopes(&t));
        let h = ci.locate_root(&q(-1), &mut 0);
        assert_eq!(h.position, 0);
        let h = ci.locate_root(&q(1000), &mut 0);
        assert_eq!(h.position, ci.catalog_len(VertexId(0)));
        let c = ci.locate(&q(1000), VertexId(1), h, &mut 0).unwrap();
        assert_eq!(c.position, ci.catalog_len(VertexId(1)));
    }

    #[test]
    fn locate_rejects_wrong_parent() {
        let t = path3();
        let ci = CascadeIndex::build(&t, &build_envelopes(&t));
        let h = ci.locate_root(&q(3), &mut 0);
        assert_eq!(
            ci.locate(&q(3), VertexId(2), h, &mut 0),
            Err(CascadeError::NotParent { handle: VertexId(0), child: VertexId(2) })
        );
    }

    #[test]
    fn root_catalog_holds_descendant_samples() {
        let t = path3();
        let es = build_envelopes(&t);
        let ci = CascadeIndex::build(&t, &es);
        let own = es.get(VertexId(0)).len();
        assert!(ci.catalog_len(VertexId(0)) > own);
        assert_eq!(ci.total_entries, (0..3).map(|v| ci.catalog_len(VertexId(v))).sum::<usize>());
    }
}
