//! Iterative HOP-driven edge addition.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hop::{build_hop_table_with, HopOptions, MAX_ORDER};

/// Largest supported number of reconstruction passes.
pub const MAX_PASSES: usize = 6;

/// Ratio threshold for adding an edge. `Disabled` behaves as an infinite threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    Finite(f64),
    Disabled,
}

impl Threshold {
    pub fn new(epsilon: f64) -> Result<Self> {
        if epsilon.is_infinite() && epsilon > 0.0 {
            return Ok(Threshold::Disabled);
        }
        if epsilon.is_nan() || epsilon <= 1.0 {
            return Err(Error::param(format!("epsilon must be > 1, got {epsilon}")));
        }
        Ok(Threshold::Finite(epsilon))
    }

    pub fn is_disabled(&self) -> bool {
        matches!(self, Threshold::Disabled)
    }

    /// Numeric value, `+inf` when disabled.
    pub fn value(&self) -> f64 {
        match *self {
            Threshold::Finite(e) => e,
            Threshold::Disabled => f64::INFINITY,
        }
    }
}

impl std::str::FromStr for Threshold {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "disabled" | "inf" | "infinity" => Ok(Threshold::Disabled),
            other => {
                let v: f64 = other
                    .parse()
                    .map_err(|_| Error::param(format!("epsilon must be a number or `disabled`, got `{other}`")))?;
                Threshold::new(v)
            }
        }
    }
}

impl std::fmt::Display for Threshold {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Threshold::Finite(e) => write!(f, "{e}"),
            Threshold::Disabled => f.write_str("disabled"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PassRecord {
    pub edges_before: usize,
    pub edges_added: usize,
    pub edges_after: usize,
}

#[derive(Debug, Clone)]
pub struct ReconstructionReport {
    pub passes: Vec<PassRecord>,
    pub final_graph: Graph,
}

fn check_order(r: usize) -> Result<()> {
    if !(1..=MAX_ORDER).contains(&r) {
        return Err(Error::param(format!("max order r must be in 1..={MAX_ORDER}, got {r}")));
    }
    Ok(())
}

/// One pass: keep every edge and add each non-adjacent pair whose ratio is `>= epsilon`.
pub fn reconstruct_once(graph: &Graph, r: usize, epsilon: Threshold) -> Result<(Graph, usize)> {
    reconstruct_once_with(graph, r, epsilon, HopOptions::default())
}

pub fn reconstruct_once_with(graph: &Graph, r: usize, epsilon: Threshold, opts: HopOptions) -> Result<(Graph, usize)> {
    check_order(r)?;
    let eps = match epsilon {
        Threshold::Disabled => return Ok((graph.clone(), 0)),
        Threshold::Finite(e) if e > 1.0 => e,
        Threshold::Finite(e) => return Err(Error::param(format!("epsilon must be > 1, got {e}"))),
    };
    let table = build_hop_table_with(graph, r, opts)?;
    let added: Vec<(usize, usize)> = table
        .iter()
        .filter(|&((i, j), ratio)| ratio >= eps && !graph.has_edge(i, j))
        .map(|(pair, _)| pair)
        .collect();
    if added.is_empty() {
        return Ok((graph.clone(), 0));
    }
    let count = added.len();
    Ok((graph.with_added_edges(added)?, count))
}

/// Runs `d` passes, recomputing HOP counts on each pass's output.
///
/// Once a pass adds nothing the graph is a fixed point, so the remaining
/// passes are recorded with zero additions without recomputation. A disabled
/// threshold executes no passes at all.
pub fn reconstruct_iterative(graph: &Graph, r: usize, epsilon: Threshold, d: usize) -> Result<ReconstructionReport> {
    reconstruct_iterative_with(graph, r, epsilon, d, HopOptions::default())
}

pub fn reconstruct_iterative_with(
    graph: &Graph,
    r: usize,
    epsilon: Threshold,
    d: usize,
    opts: HopOptions,
) -> Result<ReconstructionReport> {
    check_order(r)?;
    if !(1..=MAX_PASSES).contains(&d) {
        return Err(Error::param(format!("pass count d must be in 1..={MAX_PASSES}, got {d}")));
    }
    if epsilon.is_disabled() {
        return Ok(ReconstructionReport {
            passes: Vec::new(),
            final_graph: graph.clone(),
        });
    }

    let mut current = graph.clone();
    let mut passes = Vec::with_capacity(d);
    let mut settled = false;
    for _ in 0..d {
        let before = current.edge_count();
        let added = if settled {
            0
        } else {
            let (next, added) = reconstruct_once_with(&current, r, epsilon, opts)?;
            current = next;
            added
        };
        settled = added == 0;
        passes.push(PassRecord {
            edges_before: before,
            edges_added: added,
            edges_after: current.edge_count(),
        });
    }
    Ok(ReconstructionReport {
        passes,
        final_graph: current,
    })
}
