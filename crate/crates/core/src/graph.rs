//! Sparse symmetric adjacency and the SNAP-style text formats.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// An undirected, unweighted, self-loop-free network.
///
/// Nodes carry opaque external identifiers mapped to dense indices
/// `0..n`. Neighbor lists are kept sorted so membership tests are
/// binary searches and iteration order is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    node_ids: Vec<String>,
    neighbors: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph from index pairs over `node_ids.len()` nodes.
    ///
    /// Duplicates (in either orientation) collapse and self-loops are dropped.
    pub fn from_edges(node_ids: Vec<String>, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let n = node_ids.len();
        let mut neighbors = vec![Vec::new(); n];
        for (i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::Shape(format!("edge ({i}, {j}) out of range for {n} nodes")));
            }
            if i == j {
                continue;
            }
            neighbors[i].push(j);
            neighbors[j].push(i);
        }
        let mut twice_m = 0;
        for list in &mut neighbors {
            list.sort_unstable();
            list.dedup();
            twice_m += list.len();
        }
        Ok(Self {
            node_ids,
            neighbors,
            edge_count: twice_m / 2,
        })
    }

    /// Graph whose node identifiers are the decimal indices `0..n`.
    pub fn from_index_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::from_edges((0..n).map(|i| i.to_string()).collect(), edges)
    }

    pub fn node_count(&self) -> usize {
        self.neighbors.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn node_ids(&self) -> &[String] {
        &self.node_ids
    }

    pub fn node_id(&self, i: usize) -> &str {
        &self.node_ids[i]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.node_ids.iter().position(|x| x == id)
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.neighbors[i].binary_search(&j).is_ok()
    }

    /// Undirected edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(i, list)| list.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    /// Same node set with the extra undirected edges merged in.
    pub fn with_added_edges(&self, extra: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let edges: Vec<_> = self.edges().chain(extra).collect();
        Self::from_edges(self.node_ids.clone(), edges)
    }

    /// Dense 0/1 adjacency, row-major. Intended for small graphs.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.node_count();
        let mut dense = vec![vec![0.0; n]; n];
        for (i, j) in self.edges() {
            dense[i][j] = 1.0;
            dense[j][i] = 1.0;
        }
        dense
    }

    /// Writes one `id_i id_j` line per undirected edge.
    ///
    /// Isolated nodes have no representation in this format.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        for (i, j) in self.edges() {
            writeln!(out, "{} {}", self.node_ids[i], self.node_ids[j])?;
        }
        Ok(())
    }
}

/// Loads an edge list: `#` comments, two whitespace-separated identifiers per line.
///
/// Blank lines are skipped. Node indices follow first appearance.
pub fn load_edge_list<R: BufRead>(source: R) -> Result<Graph> {
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut node_ids = Vec::new();
    let mut edges = Vec::new();
    let mut intern = |id: &str| -> usize {
        *index.entry(id.to_owned()).or_insert_with(|| {
            node_ids.push(id.to_owned());
            node_ids.len() - 1
        })
    };

    for (lineno, line) in source.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: lineno + 1,
                found: tokens.len(),
            });
        }
        if tokens[0] == tokens[1] {
            continue;
        }
        let a = intern(tokens[0]);
        let b = intern(tokens[1]);
        edges.push((a, b));
    }

    if edges.is_empty() {
        return Err(Error::EmptyGraph);
    }
    Graph::from_edges(node_ids, edges)
}

/// Disjoint ground-truth community labels over a graph's nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruth {
    labels: Vec<usize>,
    community_count: usize,
    /// Nodes listed in more than one community; the first listing won.
    pub overlap_warnings: usize,
}

impl GroundTruth {
    /// Labels must be dense in `0..K`; every label in that range need not occur.
    pub fn from_labels(labels: Vec<usize>) -> Self {
        let community_count = labels.iter().max().map_or(0, |&m| m + 1);
        Self {
            labels,
            community_count,
            overlap_warnings: 0,
        }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn community_count(&self) -> usize {
        self.community_count
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Loads a community file: one community per line, whitespace-separated ids.
///
/// Overlaps are resolved first-wins and counted in
/// [`GroundTruth::overlap_warnings`]. Every node of `graph` must be covered.
pub fn load_communities<R: BufRead>(source: R, graph: &Graph) -> Result<GroundTruth> {
    let index: HashMap<&str, usize> = graph
        .node_ids()
        .iter()
        .enumerate()
        .map(|(i, id)| (id.as_str(), i))
        .collect();
    let mut labels: Vec<Option<usize>> = vec![None; graph.node_count()];
    let mut community_count = 0;
    let mut overlap_warnings = 0;

    for (lineno, line) in source.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        for token in trimmed.split_whitespace() {
            let &node = index.get(token).ok_or_else(|| Error::UnknownNode {
                line: lineno + 1,
                id: token.to_owned(),
            })?;
            match labels[node] {
                None => labels[node] = Some(community_count),
                Some(c) if c != community_count => overlap_warnings += 1,
                Some(_) => {}
            }
        }
        community_count += 1;
    }

    let missing: Vec<String> = labels
        .iter()
        .enumerate()
        .filter(|(_, l)| l.is_none())
        .map(|(i, _)| graph.node_id(i).to_owned())
        .collect();
    if !missing.is_empty() {
        return Err(Error::Coverage { missing });
    }

    Ok(GroundTruth {
        labels: labels.into_iter().map(|l| l.unwrap_or_default()).collect(),
        community_count,
        overlap_warnings,
    })
}

/// Row sums of the adjacency matrix.
pub fn degree_vector(graph: &Graph) -> Vec<usize> {
    (0..graph.node_count()).map(|i| graph.degree(i)).collect()
}
