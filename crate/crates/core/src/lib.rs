//! Community detection on undirected, unweighted networks.
//!
//! The pipeline has two stages. First the adjacency structure is enriched
//! with high-order-proximity edges: node pairs joined by short simple paths
//! are scored with a weighted pointwise-mutual-information ratio and linked
//! when the ratio clears a threshold ([`reconstruct`]). The enhanced
//! adjacency is then factorized by a symmetry- and graph-regularized
//! nonnegative matrix factorization ([`solver`]) whose primary factor gives
//! a hard community assignment. [`eval`] scores assignments against ground
//! truth and [`pipeline`] runs the whole thing over seeded trials.

pub mod error;
pub mod eval;
pub mod graph;
pub mod hop;
pub mod pipeline;
pub mod reconstruct;
pub mod solver;
pub mod synthetic;

pub use error::{Error, Result};
pub use eval::{nmi, purity, Contingency, NmiNormalization};
pub use graph::{degree_vector, load_communities, load_edge_list, Graph, GroundTruth};
pub use hop::{build_hop_table, enumerate_order_pairs, hop_ratio, HopTable, OrderPairCounts};
pub use pipeline::{run_pipeline, sweep, PipelineConfig, RunReport, SolverKind, SweepAxis};
pub use reconstruct::{reconstruct_iterative, reconstruct_once, ReconstructionReport, Threshold};
pub use solver::{
    assign, init_factors, sgn_objective, sgn_step, sgn_train, snmf_train, FactorSet,
    LaplacianPieces, Partition, SgnConfig, SymmetricAdjacency,
};
