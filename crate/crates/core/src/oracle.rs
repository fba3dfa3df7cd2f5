//! Brute-force reference solver.
//!
//! Works on the input tree directly and recomputes every coverage decision
//! from explicit distances. Nothing here touches envelopes, the trimmed tree
//! or the bottom-up merge.

use std::collections::VecDeque;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::tree::TreeNetwork;

/// A center on the input tree: `offset` above `vertex` toward `parent`, or
/// the root itself when `parent` is `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleCenter {
    pub vertex: usize,
    pub parent: Option<usize>,
    pub offset: BigRational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub feasible: bool,
    pub centers_used: usize,
    pub placement: Vec<OracleCenter>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSolution {
    pub alpha_star: BigRational,
    pub centers: Vec<OracleCenter>,
    pub greedy_calls: usize,
    pub candidates: usize,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance has {0} vertices; the oracle accepts at most {MAX_ORACLE_VERTICES}")]
    TooLarge(usize),
}

pub const MAX_ORACLE_VERTICES: usize = 150;

struct Rooted {
    parent: Vec<Option<usize>>,
    up_length: Vec<BigRational>,
    children: Vec<Vec<usize>>,
    /// Children before parents.
    order: Vec<usize>,
    dist: Vec<Vec<BigRational>>,
}

fn root_at_zero(t: &TreeNetwork) -> Rooted {
    let n = t.len();
    let mut adj: Vec<Vec<(usize, BigRational)>> = vec![Vec::new(); n];
    for e in &t.edges {
        adj[e.a.0].push((e.b.0, e.length.clone()));
        adj[e.b.0].push((e.a.0, e.length.clone()));
    }
    let mut dist = vec![vec![BigRational::zero(); n]; n];
    for (s, row) in dist.iter_mut().enumerate() {
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for (x, len) in &adj[u] {
                if !seen[*x] {
                    seen[*x] = true;
                    row[*x] = row[u].clone() + len;
                    queue.push_back(*x);
                }
            }
        }
    }
    let mut parent = vec![None; n];
    let mut up_length = vec![BigRational::zero(); n];
    let mut children = vec![Vec::new(); n];
    let mut hops = vec![0usize; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for (x, len) in &adj[u] {
            if !seen[*x] {
                seen[*x] = true;
                parent[*x] = Some(u);
                up_length[*x] = len.clone();
                children[u].push(*x);
                hops[*x] = hops[u] + 1;
                queue.push_back(*x);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| dist[0][b].cmp(&dist[0][a]).then(hops[b].cmp(&hops[a])));
    Rooted { parent, up_length, children, order, dist }
}

fn center_distance(r: &Rooted, c: &OracleCenter, u: usize) -> BigRational {
    match c.parent {
        None => r.dist[c.vertex][u].clone(),
        Some(p) => {
            let via_child = r.dist[c.vertex][u].clone() + &c.offset;
            let via_parent = r.dist[p][u].clone() + &r.up_length[c.vertex] - &c.offset;
            via_child.min(via_parent)
        }
    }
}

/// Deepest-constraint greedy: place a center only when some uncovered vertex
/// below would otherwise be lost, and put it as high as possible.
pub fn greedy_feasible(t: &TreeNetwork, alpha: &BigRational, p: usize) -> OracleResult {
    Greedy::new(t).feasible(alpha, p)
}

/// The greedy with its distance table built once, for repeated queries on one tree.
pub struct Greedy<'a> {
    t: &'a TreeNetwork,
    r: Rooted,
}

impl<'a> Greedy<'a> {
    pub fn new(t: &'a TreeNetwork) -> Self {
        Greedy { t, r: root_at_zero(t) }
    }

    pub fn feasible(&self, alpha: &BigRational, p: usize) -> OracleResult {
        run_greedy(self.t, &self.r, alpha, p)
    }
}

fn run_greedy(t: &TreeNetwork, r: &Rooted, alpha: &BigRational, p: usize) -> OracleResult {
    if alpha.is_negative() {
        return OracleResult { feasible: false, centers_used: usize::MAX, placement: Vec::new() };
    }
    let n = t.len();
    let mut covered: Vec<bool> = t.weights.iter().map(|w| w.is_zero()).collect();
    let mut pending: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut placement = Vec::new();
    for &v in &r.order {
        let mut here: Vec<usize> = Vec::new();
        if !covered[v] {
            here.push(v);
        }
        for &c in &r.children[v] {
            here.extend(std::mem::take(&mut pending[c]).into_iter().filter(|&u| !covered[u]));
        }
        let center = match r.parent[v] {
            None => (!here.is_empty()).then(|| OracleCenter { vertex: v, parent: None, offset: BigRational::zero() }),
            Some(par) => {
                let lost = here.iter().any(|&u| (r.dist[u][par].clone() * &t.weights[u]) > *alpha);
                lost.then(|| {
                    let offset = here
                        .iter()
                        .map(|&u| alpha.clone() / &t.weights[u] - &r.dist[u][v])
                        .min()
                        .expect("a lost vertex exists");
                    OracleCenter { vertex: v, parent: Some(par), offset }
                })
            }
        };
        match center {
            Some(c) => {
                for u in 0..n {
                    if !covered[u] && center_distance(r, &c, u) * &t.weights[u] <= *alpha {
                        covered[u] = true;
                    }
                }
                debug_assert!(here.iter().all(|&u| covered[u]));
                placement.push(c);
            }
            None => pending[v] = here,
        }
    }
    OracleResult { feasible: placement.len() <= p, centers_used: placement.len(), placement }
}

/// All pairwise equal-cost values plus zero, sorted and deduplicated.
pub fn oracle_candidates(t: &TreeNetwork) -> Vec<BigRational> {
    candidates_from(t, &root_at_zero(t))
}

fn candidates_from(t: &TreeNetwork, r: &Rooted) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero()];
    for a in 0..t.len() {
        for b in a + 1..t.len() {
            let (wa, wb) = (&t.weights[a], &t.weights[b]);
            if wa.is_zero() || wb.is_zero() {
                continue;
            }
            out.push(r.dist[a][b].clone() * wa * wb / (wa.clone() + wb));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Smallest candidate cost the greedy can meet with `p` centers.
pub fn exhaustive_solve(t: &TreeNetwork, p: usize) -> Result<OracleSolution, OracleError> {
    if t.len() > MAX_ORACLE_VERTICES {
        return Err(OracleError::TooLarge(t.len()));
    }
    let greedy = Greedy::new(t);
    let candidates = candidates_from(t, &greedy.r);
    // The one-center optimum is itself a candidate, so the largest one is feasible.
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    let mut best = greedy.feasible(&candidates[hi], p);
    let mut calls = 1;
    assert!(best.feasible, "largest candidate must be feasible");
    while lo < hi {
        let mid = (lo + hi) / 2;
        let r = greedy.feasible(&candidates[mid], p);
        calls += 1;
        if r.feasible {
            hi = mid;
            best = r;
        } else {
            lo = mid + 1;
        }
    }
    Ok(OracleSolution {
        alpha_star: candidates[hi].clone(),
        centers: best.placement,
        greedy_calls: calls,
        candidates: candidates.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    fn path3() -> TreeNetwork {
        TreeNetwork::from_integers(&[1, 1, 1], &[(0, 1, 4), (1, 2, 4)])
    }

    #[test]
    fn greedy_on_unit_path() {
        assert_eq!(greedy_feasible(&path3(), &q(3), 1).centers_used, 2);
        assert_eq!(greedy_feasible(&path3(), &q(8), 1).centers_used, 1);
        assert_eq!(greedy_feasible(&path3(), &q(0), 1).centers_used, 3);
        assert!(greedy_feasible(&path3(), &q(4), 1).feasible);
    }

    #[test]
    fn exhaustive_examples() {
        assert_eq!(exhaustive_solve(&path3(), 1).unwrap().alpha_star, q(4));
        assert_eq!(exhaustive_solve(&path3(), 2).unwrap().alpha_star, q(2));
        assert_eq!(exhaustive_solve(&path3(), 3).unwrap().alpha_star, q(0));
        let weighted = TreeNetwork::from_integers(&[1, 2, 1], &[(0, 1, 3), (1, 2, 3)]);
        assert_eq!(exhaustive_solve(&weighted, 1).unwrap().alpha_star, q(3));
    }

    #[test]
    fn candidates_of_unit_path() {
        assert_eq!(oracle_candidates(&path3()), vec![q(0), q(2), q(4)]);
    }

    #[test]
    fn rejects_large_instances() {
        let n = MAX_ORACLE_VERTICES + 1;
        let e: Vec<_> = (1..n).map(|i| (i - 1, i, 1)).collect();
        let t = TreeNetwork::from_integers(&vec![1; n], &e);
        assert_eq!(exhaustive_solve(&t, 1), Err(OracleError::TooLarge(n)));
    }
}
