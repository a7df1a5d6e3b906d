//! High-order proximity between node pairs.
//!
//! A k-th-order node pair is the endpoint pair of a simple path with exactly
//! `k` edges. For each order we count how often every pair and every node
//! appears among those endpoint pairs, then score a pair with the weighted
//! PMI ratio
//!
//! ```text
//!   p(i, j) / (p(i) p(j)),   p(i, j) = sum_k N_k(i, j) / (k |H_k|),
//!                            p(v)    = sum_k N_k(v)    / (k |H_k|)
//! ```
//!
//! The HOP index is the logarithm of this ratio. Thresholding is done on the
//! ratio directly so the logarithm base never matters.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest supported path order.
pub const MAX_ORDER: usize = 6;

/// Default cap on the number of path extensions per enumeration.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Whether a path contributes both endpoint orders or just one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Counting {
    /// Each undirected path yields `(s, t)` and `(t, s)`.
    #[default]
    Ordered,
    /// Each undirected path is counted once.
    Unordered,
}

#[derive(Debug, Clone, Copy)]
pub struct HopOptions {
    pub counting: Counting,
    pub budget: u64,
}

impl Default for HopOptions {
    fn default() -> Self {
        Self {
            counting: Counting::Ordered,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Endpoint-pair statistics for paths of one order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderPairCounts {
    order: usize,
    total: u64,
    per_node: Vec<u64>,
    per_pair: HashMap<(usize, usize), u64>,
}

fn key(i: usize, j: usize) -> (usize, usize) {
    if i <= j {
        (i, j)
    } else {
        (j, i)
    }
}

impl OrderPairCounts {
    fn empty(order: usize, n: usize) -> Self {
        Self {
            order,
            total: 0,
            per_node: vec![0; n],
            per_pair: HashMap::new(),
        }
    }

    fn record(&mut self, s: usize, t: usize) {
        self.total += 1;
        self.per_node[s] += 1;
        self.per_node[t] += 1;
        *self.per_pair.entry(key(s, t)).or_insert(0) += 1;
    }

    fn merge(&mut self, other: Self) {
        self.total += other.total;
        for (a, b) in self.per_node.iter_mut().zip(other.per_node) {
            *a += b;
        }
        for (k, c) in other.per_pair {
            *self.per_pair.entry(k).or_insert(0) += c;
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `|H_k|`.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// `N_k(v)`: number of elements of `H_k` that contain `v`.
    pub fn node_count(&self, v: usize) -> u64 {
        self.per_node[v]
    }

    /// `N_k(i, j)`, symmetric in its arguments.
    pub fn pair_count(&self, i: usize, j: usize) -> u64 {
        self.per_pair.get(&key(i, j)).copied().unwrap_or(0)
    }

    /// Pairs with nonzero count, keyed `(min, max)`, in arbitrary order.
    pub fn pairs(&self) -> impl Iterator<Item = ((usize, usize), u64)> + '_ {
        self.per_pair.iter().map(|(&k, &c)| (k, c))
    }

    pub fn per_node(&self) -> &[u64] {
        &self.per_node
    }
}

struct Walker<'a> {
    graph: &'a Graph,
    max_order: usize,
    counting: Counting,
    budget: u64,
    used: &'a AtomicU64,
    aborted: &'a AtomicBool,
}

impl Walker<'_> {
    fn walk_from(&self, start: usize, visited: &mut [bool], acc: &mut [OrderPairCounts]) {
        visited[start] = true;
        self.extend(start, start, 1, visited, acc);
        visited[start] = false;
    }

    fn extend(&self, start: usize, at: usize, depth: usize, visited: &mut [bool], acc: &mut [OrderPairCounts]) {
        if self.aborted.load(Ordering::Relaxed) {
            return;
        }
        for &next in self.graph.neighbors(at) {
            if visited[next] {
                continue;
            }
            if self.used.fetch_add(1, Ordering::Relaxed) >= self.budget {
                self.aborted.store(true, Ordering::Relaxed);
                return;
            }
            if self.counting == Counting::Ordered || start < next {
                acc[depth - 1].record(start, next);
            }
            if depth < self.max_order {
                visited[next] = true;
                self.extend(start, next, depth + 1, visited, acc);
                visited[next] = false;
            }
        }
    }
}

/// Counts endpoint pairs of simple paths for every order `1..=max_order`.
///
/// Element `k - 1` of the result holds order `k`. Start nodes are processed
/// in parallel; integer counts merge by addition so the result does not
/// depend on scheduling.
pub fn enumerate_orders(graph: &Graph, max_order: usize, opts: HopOptions) -> Result<Vec<OrderPairCounts>> {
    if max_order == 0 {
        return Err(Error::param("path order must be at least 1"));
    }
    let n = graph.node_count();
    if n == 0 {
        return Err(Error::param("graph has no nodes"));
    }
    let used = AtomicU64::new(0);
    let aborted = AtomicBool::new(false);
    let walker = Walker {
        graph,
        max_order,
        counting: opts.counting,
        budget: opts.budget,
        used: &used,
        aborted: &aborted,
    };
    let fresh = || (1..=max_order).map(|k| OrderPairCounts::empty(k, n)).collect::<Vec<_>>();

    let counts = (0..n)
        .into_par_iter()
        .with_min_len(64)
        .fold(
            || (fresh(), vec![false; n]),
            |(mut acc, mut visited), start| {
                walker.walk_from(start, &mut visited, &mut acc);
                (acc, visited)
            },
        )
        .map(|(acc, _)| acc)
        .reduce(fresh, |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                x.merge(y);
            }
            a
        });

    if aborted.load(Ordering::Relaxed) {
        return Err(Error::BudgetExceeded { budget: opts.budget });
    }
    Ok(counts)
}

/// `H_k` statistics for a single order `k`, with ordered counting.
pub fn enumerate_order_pairs(graph: &Graph, k: usize) -> Result<OrderPairCounts> {
    let mut all = enumerate_orders(graph, k, HopOptions::default())?;
    Ok(all.pop().expect("k >= 1 orders"))
}

/// Weighted marginal `p(v) = sum_k N_k(v) / (k |H_k|)`.
pub fn hop_marginal(counts: &[OrderPairCounts], v: usize) -> f64 {
    counts
        .iter()
        .filter(|c| c.total > 0)
        .map(|c| c.node_count(v) as f64 / (c.order as f64 * c.total as f64))
        .sum()
}

fn weighted_joint(counts: &[OrderPairCounts], i: usize, j: usize) -> f64 {
    counts
        .iter()
        .filter(|c| c.total > 0)
        .map(|c| c.pair_count(i, j) as f64 / (c.order as f64 * c.total as f64))
        .sum()
}

/// Weighted PMI ratio `p(i, j) / (p(i) p(j))` with order weights `1/k`.
///
/// Returns 0 when the pair never co-occurs.
pub fn hop_ratio(counts: &[OrderPairCounts], i: usize, j: usize) -> f64 {
    let joint = weighted_joint(counts, i, j);
    if joint == 0.0 {
        return 0.0;
    }
    joint / (hop_marginal(counts, i) * hop_marginal(counts, j))
}

/// Natural-log HOP index of a ratio (`-inf` for 0).
pub fn hop_index(ratio: f64) -> f64 {
    ratio.ln()
}

/// Ratios for every pair co-occurring at some order `<= max_order`.
#[derive(Debug, Clone, PartialEq)]
pub struct HopTable {
    max_order: usize,
    ratios: BTreeMap<(usize, usize), f64>,
}

impl HopTable {
    pub fn max_order(&self) -> usize {
        self.max_order
    }

    /// Ratio for the pair, or 0 when it was never observed.
    pub fn ratio(&self, i: usize, j: usize) -> f64 {
        self.ratios.get(&key(i, j)).copied().unwrap_or(0.0)
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.ratios.contains_key(&key(i, j))
    }

    pub fn len(&self) -> usize {
        self.ratios.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ratios.is_empty()
    }

    /// `((i, j), ratio)` with `i < j`, sorted by pair.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.ratios.iter().map(|(&k, &r)| (k, r))
    }

    /// Diagnostic dump: `id_i id_j ratio` per stored pair.
    pub fn write_dump<W: Write>(&self, graph: &Graph, mut out: W) -> Result<()> {
        for ((i, j), r) in self.iter() {
            writeln!(out, "{} {} {:.8e}", graph.node_id(i), graph.node_id(j), r)?;
        }
        Ok(())
    }
}

pub fn build_hop_table(graph: &Graph, max_order: usize) -> Result<HopTable> {
    build_hop_table_with(graph, max_order, HopOptions::default())
}

pub fn build_hop_table_with(graph: &Graph, max_order: usize, opts: HopOptions) -> Result<HopTable> {
    if !(1..=MAX_ORDER).contains(&max_order) {
        return Err(Error::param(format!("max order r must be in 1..={MAX_ORDER}, got {max_order}")));
    }
    if graph.edge_count() == 0 {
        return Ok(HopTable {
            max_order,
            ratios: BTreeMap::new(),
        });
    }
    let counts = enumerate_orders(graph, max_order, opts)?;
    let marginals: Vec<f64> = (0..graph.node_count()).map(|v| hop_marginal(&counts, v)).collect();

    let mut joint: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for c in counts.iter().filter(|c| c.total > 0) {
        for (pair, _) in c.pairs() {
            joint.entry(pair).or_insert(0.0);
        }
    }
    // Summing orders in ascending sequence keeps values bitwise equal to `hop_ratio`.
    let ratios = joint
        .into_keys()
        .map(|(i, j)| {
            let p = weighted_joint(&counts, i, j);
            ((i, j), p / (marginals[i] * marginals[j]))
        })
        .collect();
    Ok(HopTable { max_order, ratios })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::from_index_edges(3, [(0, 1), (1, 2)]).unwrap()
    }

    fn k3() -> Graph {
        Graph::from_index_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    /// Triangle {0,1,2} plus the path 3-4-5.
    fn triangle_plus_path() -> Graph {
        Graph::from_index_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5)]).unwrap()
    }

    #[test]
    fn path_first_order() {
        let c = enumerate_order_pairs(&path3(), 1).unwrap();
        assert_eq!(c.total(), 4);
        // Middle node sits in (0,1),(1,0),(1,2),(2,1).
        assert_eq!(c.node_count(1), 4);
        assert_eq!(c.pair_count(0, 1), 2);
        assert_eq!(c.pair_count(1, 0), 2);
    }

    #[test]
    fn path_second_order() {
        let c = enumerate_order_pairs(&path3(), 2).unwrap();
        assert_eq!(c.total(), 2);
        assert_eq!(c.pair_count(0, 2), 2);
        assert_eq!(c.node_count(1), 0);
    }

    #[test]
    fn triangle_second_order() {
        let c = enumerate_order_pairs(&k3(), 2).unwrap();
        assert_eq!(c.total(), 6);
        for v in 0..3 {
            assert_eq!(c.node_count(v), 4);
        }
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            assert_eq!(c.pair_count(i, j), 2);
        }
    }

    #[test]
    fn zero_order_rejected() {
        assert!(matches!(enumerate_order_pairs(&path3(), 0), Err(Error::Parameter(_))));
    }

    #[test]
    fn golden_ratios() {
        let counts = enumerate_orders(&path3(), 2, HopOptions::default()).unwrap();
        assert!((hop_ratio(&counts, 0, 2) - 0.5).abs() < 1e-15);

        let counts = enumerate_orders(&k3(), 2, HopOptions::default()).unwrap();
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            assert!((hop_ratio(&counts, i, j) - 0.5).abs() < 1e-15);
        }

        let counts = enumerate_orders(&triangle_plus_path(), 2, HopOptions::default()).unwrap();
        let expected = 0.125 / (0.325 * 0.325);
        assert!((hop_ratio(&counts, 3, 5) - expected).abs() < 1e-12);
        assert!((expected - 1.1834).abs() < 1e-4);
        assert_eq!(hop_ratio(&counts, 0, 3), 0.0);
    }

    #[test]
    fn orders_beyond_diameter_contribute_nothing() {
        let counts = enumerate_orders(&path3(), 5, HopOptions::default()).unwrap();
        assert_eq!(counts[2].total(), 0);
        assert!((hop_ratio(&counts, 0, 2) - hop_ratio(&counts[..2], 0, 2)).abs() == 0.0);
    }

    #[test]
    fn table_first_order_is_edge_set() {
        let g = triangle_plus_path();
        let t = build_hop_table(&g, 1).unwrap();
        let stored: Vec<_> = t.iter().map(|(p, _)| p).collect();
        let edges: Vec<_> = g.edges().collect();
        assert_eq!(stored, edges);
    }

    #[test]
    fn table_path_second_order() {
        let t = build_hop_table(&path3(), 2).unwrap();
        let stored: Vec<_> = t.iter().map(|(p, _)| p).collect();
        assert_eq!(stored, [(0, 1), (0, 2), (1, 2)]);
        assert!(t.iter().all(|(_, r)| r.is_finite() && r > 0.0));
    }

    #[test]
    fn table_matches_hop_ratio_bitwise() {
        let g = triangle_plus_path();
        let t = build_hop_table(&g, 3).unwrap();
        let counts = enumerate_orders(&g, 3, HopOptions::default()).unwrap();
        for ((i, j), r) in t.iter() {
            assert_eq!(r, hop_ratio(&counts, i, j));
            assert_eq!(r, t.ratio(j, i));
        }
    }

    #[test]
    fn empty_edge_graph_gives_empty_table() {
        let g = Graph::from_index_edges(4, []).unwrap();
        assert!(build_hop_table(&g, 2).unwrap().is_empty());
    }

    #[test]
    fn order_bounds() {
        assert!(build_hop_table(&path3(), 0).is_err());
        assert!(build_hop_table(&path3(), 7).is_err());
        assert!(build_hop_table(&path3(), 6).is_ok());
    }

    #[test]
    fn budget_aborts() {
        let mut edges = vec![];
        for i in 0..10 {
            for j in i + 1..10 {
                edges.push((i, j));
            }
        }
        let g = Graph::from_index_edges(10, edges).unwrap();
        let opts = HopOptions {
            budget: 1000,
            ..Default::default()
        };
        assert!(matches!(
            build_hop_table_with(&g, 6, opts),
            Err(Error::BudgetExceeded { budget: 1000 })
        ));
    }

    #[test]
    fn dump_format() {
        let g = Graph::from_edges(vec!["a".into(), "b".into()], [(0, 1)]).unwrap();
        let t = build_hop_table(&g, 1).unwrap();
        let mut buf = Vec::new();
        t.write_dump(&g, &mut buf).unwrap();
        // Single edge: p(a,b) = 1, p(a) = p(b) = 1.
        assert_eq!(String::from_utf8(buf).unwrap(), "a b 1.00000000e0\n");
    }
}
