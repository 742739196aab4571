#![allow(dead_code)]

use mpoly_core::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seed for the random part of the graph corpus.
pub const CORPUS_SEED: u64 = 20_240_601;

/// Every labelled graph on `n` vertices.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs = n * n.saturating_sub(1) / 2;
    (0..1u64 << pairs).map(move |mask| Graph::from_edge_mask(n, mask).unwrap())
}

/// `count` seeded `G(n, p)` samples with `n` drawn from `sizes` and `p`
/// uniform in `[0.15, 0.75]`.
pub fn random_graphs(count: usize, sizes: std::ops::RangeInclusive<usize>, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(sizes.clone());
            let p = rng.random_range(0.15..0.75);
            Graph::gnp(n, p, &mut rng).unwrap()
        })
        .collect()
}

/// All graphs with `n <= 5` plus 100 seeded samples with `n` in 6..=7.
pub fn small_corpus() -> Vec<Graph> {
    let mut graphs: Vec<Graph> = (1..=5).flat_map(all_graphs).collect();
    graphs.extend(random_graphs(100, 6..=7, CORPUS_SEED));
    graphs
}

/// Brute-force independence number by subset enumeration.
pub fn brute_alpha(g: &Graph) -> usize {
    let n = g.vertex_count();
    (0u32..1 << n)
        .filter(|&s| g.edges().all(|(u, v)| s >> u & 1 == 0 || s >> v & 1 == 0))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap()
}
