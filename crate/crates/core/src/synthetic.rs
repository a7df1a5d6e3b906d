//! Planted-partition graphs for tests, benchmarks and demos.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, GroundTruth};

/// Samples a planted-partition graph: each within-block pair is linked with
/// probability `p_in`, each between-block pair with `p_out`.
///
/// Node `i` has identifier `i` and blocks occupy consecutive index ranges.
pub fn planted_partition(block_sizes: &[usize], p_in: f64, p_out: f64, seed: u64) -> Result<(Graph, GroundTruth)> {
    for p in [p_in, p_out] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::param(format!("edge probability must be in [0, 1], got {p}")));
        }
    }
    let labels: Vec<usize> = block_sizes
        .iter()
        .enumerate()
        .flat_map(|(b, &size)| std::iter::repeat_n(b, size))
        .collect();
    let n = labels.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let p = if labels[i] == labels[j] { p_in } else { p_out };
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    let graph = Graph::from_index_edges(n, edges)?;
    Ok((graph, GroundTruth::from_labels(labels)))
}
