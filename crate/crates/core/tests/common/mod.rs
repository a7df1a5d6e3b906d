//! Independent oracles shared by the integration suites. Nothing here calls
//! into the code paths it is used to check.

#![allow(dead_code)]

use std::collections::HashMap;

use hsgn_core::graph::Graph;
use ndarray::Array2;
use rand::Rng;

pub type Dense = Vec<Vec<f64>>;

/// Erdos-Renyi graph with string ids `0..n`.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Graph::from_index_edges(n, edges).unwrap()
}

/// Disjoint union of 2-4 small random components. Small components
/// concentrate probability mass, so HOP ratios above 1 are common.
pub fn random_components<R: Rng>(rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    let mut offset = 0;
    for _ in 0..rng.random_range(2..=4) {
        let size = rng.random_range(2..=6);
        let p = rng.random_range(0.3..0.9);
        let part = random_graph(rng, size, p);
        edges.extend(part.edges().map(|(i, j)| (i + offset, j + offset)));
        offset += size;
    }
    Graph::from_index_edges(offset, edges).unwrap()
}

pub fn adjacency_bool(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut a = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            a[i][j] = g.has_edge(i, j);
        }
    }
    a
}

/// Every simple path with exactly `k` edges, from every start node, as a
/// materialized node sequence. Each undirected path appears once per direction.
pub fn all_simple_paths(adj: &[Vec<bool>], k: usize) -> Vec<Vec<usize>> {
    fn grow(adj: &[Vec<bool>], path: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if path.len() == k + 1 {
            out.push(path.clone());
            return;
        }
        let last = *path.last().unwrap();
        for next in 0..adj.len() {
            if adj[last][next] && !path.contains(&next) {
                path.push(next);
                grow(adj, path, k, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    for s in 0..adj.len() {
        grow(adj, &mut vec![s], k, &mut out);
    }
    out
}

pub struct OracleCounts {
    pub total: u64,
    pub per_node: Vec<u64>,
    /// Keyed `(min, max)`.
    pub per_pair: HashMap<(usize, usize), u64>,
}

pub fn oracle_counts(adj: &[Vec<bool>], k: usize, ordered: bool) -> OracleCounts {
    let n = adj.len();
    let mut c = OracleCounts {
        total: 0,
        per_node: vec![0; n],
        per_pair: HashMap::new(),
    };
    for p in all_simple_paths(adj, k) {
        let (s, t) = (p[0], *p.last().unwrap());
        if !ordered && s > t {
            continue;
        }
        c.total += 1;
        c.per_node[s] += 1;
        c.per_node[t] += 1;
        *c.per_pair.entry((s.min(t), s.max(t))).or_default() += 1;
    }
    c
}

/// Weighted PMI ratio with weights `1/k`, straight from the counts.
pub fn oracle_ratio(orders: &[OracleCounts], i: usize, j: usize) -> f64 {
    let mut joint = 0.0;
    let mut pi = 0.0;
    let mut pj = 0.0;
    for (idx, c) in orders.iter().enumerate() {
        if c.total == 0 {
            continue;
        }
        let scale = (idx + 1) as f64 * c.total as f64;
        joint += *c.per_pair.get(&(i.min(j), i.max(j))).unwrap_or(&0) as f64 / scale;
        pi += c.per_node[i] as f64 / scale;
        pj += c.per_node[j] as f64 / scale;
    }
    if joint == 0.0 {
        0.0
    } else {
        joint / (pi * pj)
    }
}

pub fn to_dense(m: &Array2<f64>) -> Dense {
    m.rows().into_iter().map(|r| r.to_vec()).collect()
}

pub fn from_dense(d: &Dense) -> Array2<f64> {
    let (n, k) = (d.len(), d[0].len());
    Array2::from_shape_fn((n, k), |(i, j)| d[i][j])
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let (n, m, p) = (a.len(), b.len(), b[0].len());
    let mut out = vec![vec![0.0; p]; n];
    for i in 0..n {
        for l in 0..m {
            for j in 0..p {
                out[i][j] += a[i][l] * b[l][j];
            }
        }
    }
    out
}

pub fn transpose(a: &Dense) -> Dense {
    let (n, m) = (a.len(), a[0].len());
    (0..m).map(|j| (0..n).map(|i| a[i][j]).collect()).collect()
}

pub fn sub(a: &Dense, b: &Dense) -> Dense {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect()
}

pub fn frob_sq(a: &Dense) -> f64 {
    a.iter().flatten().map(|v| v * v).sum()
}

pub fn trace(a: &Dense) -> f64 {
    (0..a.len()).map(|i| a[i][i]).sum()
}

/// Literal evaluation of the regularized objective with explicit Laplacian.
pub fn dense_objective(a: &Dense, x: &Dense, y: &Dense, u: &Dense, theta: f64, lambda: f64) -> f64 {
    let n = a.len();
    let mut lap = vec![vec![0.0; n]; n];
    for i in 0..n {
        let d: f64 = a[i].iter().sum();
        for j in 0..n {
            lap[i][j] = if i == j { d } else { 0.0 } - a[i][j];
        }
    }
    let fit_x = frob_sq(&sub(&matmul(x, &transpose(x)), a));
    let fit_yu = frob_sq(&sub(&matmul(y, &transpose(u)), a));
    let smooth = trace(&matmul(&transpose(x), &matmul(&lap, x)));
    0.25 * fit_x + 0.5 * lambda * smooth + 0.5 * theta * (fit_yu + frob_sq(&sub(x, y)) + frob_sq(&sub(x, u)))
}

/// Literal X -> Y -> U multiplicative step.
pub fn dense_sgn_step(a: &Dense, x: &Dense, y: &Dense, u: &Dense, theta: f64, lambda: f64, beta: f64) -> (Dense, Dense, Dense) {
    let (n, k) = (x.len(), x[0].len());
    let deg: Vec<f64> = a.iter().map(|r| r.iter().sum()).collect();
    let ax = matmul(a, x);
    let xxtx = matmul(&matmul(x, &transpose(x)), x);
    let mut xn = x.clone();
    for i in 0..n {
        for c in 0..k {
            let num = (1.0 + lambda) * ax[i][c] + theta * y[i][c] + theta * u[i][c];
            let den = xxtx[i][c] + 2.0 * theta * x[i][c] + lambda * deg[i] * x[i][c];
            if den > 0.0 {
                xn[i][c] = x[i][c] * (1.0 - beta + beta * num / den);
            }
        }
    }
    let au = matmul(a, u);
    let yutu = matmul(&matmul(y, &transpose(u)), u);
    let mut yn = y.clone();
    for i in 0..n {
        for c in 0..k {
            let den = yutu[i][c] + y[i][c];
            if den > 0.0 {
                yn[i][c] = y[i][c] * (au[i][c] + xn[i][c]) / den;
            }
        }
    }
    let aty = matmul(&transpose(a), &yn);
    let uyty = matmul(&matmul(u, &transpose(&yn)), &yn);
    let mut un = u.clone();
    for i in 0..n {
        for c in 0..k {
            let den = uyty[i][c] + u[i][c];
            if den > 0.0 {
                un[i][c] = u[i][c] * (aty[i][c] + xn[i][c]) / den;
            }
        }
    }
    (xn, yn, un)
}

pub fn dense_snmf_objective(a: &Dense, x: &Dense) -> f64 {
    0.5 * frob_sq(&sub(a, &matmul(x, &transpose(x))))
}

pub fn dense_snmf_step(a: &Dense, x: &Dense) -> Dense {
    let ax = matmul(a, x);
    let xxtx = matmul(&matmul(x, &transpose(x)), x);
    let mut out = x.clone();
    for i in 0..x.len() {
        for c in 0..x[0].len() {
            if xxtx[i][c] > 0.0 {
                out[i][c] = x[i][c] * (0.5 + ax[i][c] / (2.0 * xxtx[i][c]));
            }
        }
    }
    out
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
