//! Shared fixtures for the criterion benchmarks.

use hsgn_core::graph::{Graph, GroundTruth};
use hsgn_core::synthetic::planted_partition;

/// Planted partition with `blocks` equal blocks of `size` nodes and an
/// expected within-block degree of about `avg_in`.
pub fn planted(blocks: usize, size: usize, avg_in: f64, seed: u64) -> (Graph, GroundTruth) {
    let p_in = (avg_in / (size.max(2) - 1) as f64).min(1.0);
    let p_out = p_in / 20.0;
    planted_partition(&vec![size; blocks], p_in, p_out, seed).expect("valid probabilities")
}
