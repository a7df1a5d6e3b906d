use ndarray::{Array2, ArrayView2, Axis};

use crate::graph::Graph;

/// Read access to a symmetric nonnegative matrix `A` as used by the updates.
pub trait SymmetricAdjacency: Sync {
    fn dim(&self) -> usize;

    /// `A M`.
    fn mul(&self, m: ArrayView2<'_, f64>) -> Array2<f64>;

    /// `tr(L^T A R) = sum_ij a_ij <l_i, r_j>`.
    fn bilinear(&self, left: ArrayView2<'_, f64>, right: ArrayView2<'_, f64>) -> f64;

    /// `||A||_F^2`.
    fn frobenius_sq(&self) -> f64;

    fn row_sums(&self) -> Vec<f64>;
}

impl SymmetricAdjacency for Graph {
    fn dim(&self) -> usize {
        self.node_count()
    }

    fn mul(&self, m: ArrayView2<'_, f64>) -> Array2<f64> {
        let mut out = Array2::zeros(m.dim());
        for (i, mut row) in out.axis_iter_mut(Axis(0)).enumerate() {
            for &j in self.neighbors(i) {
                row += &m.row(j);
            }
        }
        out
    }

    fn bilinear(&self, left: ArrayView2<'_, f64>, right: ArrayView2<'_, f64>) -> f64 {
        (0..self.node_count())
            .map(|i| {
                let li = left.row(i);
                self.neighbors(i).iter().map(|&j| li.dot(&right.row(j))).sum::<f64>()
            })
            .sum()
    }

    fn frobenius_sq(&self) -> f64 {
        2.0 * self.edge_count() as f64
    }

    fn row_sums(&self) -> Vec<f64> {
        (0..self.node_count()).map(|i| self.degree(i) as f64).collect()
    }
}

/// Dense matrices are taken as given; symmetry is the caller's responsibility.
impl SymmetricAdjacency for Array2<f64> {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn mul(&self, m: ArrayView2<'_, f64>) -> Array2<f64> {
        self.dot(&m)
    }

    fn bilinear(&self, left: ArrayView2<'_, f64>, right: ArrayView2<'_, f64>) -> f64 {
        (&left * &self.dot(&right)).sum()
    }

    fn frobenius_sq(&self) -> f64 {
        self.iter().map(|v| v * v).sum()
    }

    fn row_sums(&self) -> Vec<f64> {
        self.sum_axis(Axis(1)).to_vec()
    }
}
