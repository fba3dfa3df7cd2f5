//! Seeded instance generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::tree::TreeNetwork;

pub const MAX_WEIGHT: i64 = 10;
pub const MAX_LENGTH: i64 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    /// Every new vertex attaches to a uniformly random earlier vertex.
    RandomRecursive,
    /// Vertex `i` attaches to `(i - 1) / 2`.
    CompleteBinary,
}

/// Tree with `n` vertices, integer weights in `0..=10` and lengths in `1..=10`.
pub fn generate(n: usize, seed: u64, shape: Shape) -> TreeNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=MAX_WEIGHT)).collect();
    let edges: Vec<(usize, usize, i64)> = (1..n)
        .map(|i| {
            let parent = match shape {
                Shape::RandomRecursive => rng.gen_range(0..i),
                Shape::CompleteBinary => (i - 1) / 2,
            };
            (parent, i, rng.gen_range(1..=MAX_LENGTH))
        })
        .collect();
    TreeNetwork::from_integers(&weights, &edges)
}

pub fn random_recursive_tree(n: usize, seed: u64) -> TreeNetwork {
    generate(n, seed, Shape::RandomRecursive)
}

pub fn complete_binary_tree(n: usize, seed: u64) -> TreeNetwork {
    generate(n, seed, Shape::CompleteBinary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{render_tree, validate};

    #[test]
    fn same_seed_same_tree() {
        assert_eq!(render_tree(&random_recursive_tree(50, 7)), render_tree(&random_recursive_tree(50, 7)));
        assert_ne!(render_tree(&random_recursive_tree(50, 7)), render_tree(&random_recursive_tree(50, 8)));
    }

    #[test]
    fn generated_trees_are_valid() {
        for seed in 0..20 {
            assert!(validate(&random_recursive_tree(40, seed)).is_empty());
            assert!(validate(&complete_binary_tree(31, seed)).is_empty());
        }
    }
}
