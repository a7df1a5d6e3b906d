//! Nonnegative factorization of the (enhanced) adjacency matrix.
//!
//! [`sgn`] holds the three-factor symmetry- and graph-regularized model and
//! [`snmf`] the single-factor baseline. Both read the adjacency through
//! [`SymmetricAdjacency`], implemented sparsely for [`Graph`] and densely for
//! `Array2<f64>`.

mod adjacency;
pub mod sgn;
pub mod snmf;

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use adjacency::SymmetricAdjacency;
pub use sgn::{sgn_gradient, sgn_objective, sgn_step, sgn_train, sgn_train_from, sgn_update_ratios, TrainOutcome};
pub use snmf::{snmf_objective, snmf_step, snmf_train, snmf_train_from, SnmfOutcome};

#[cfg(doc)]
use crate::graph::Graph;

/// The three `n x K` nonnegative factors. `x` is the community indicator.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorSet {
    pub x: Array2<f64>,
    pub y: Array2<f64>,
    pub u: Array2<f64>,
}

impl FactorSet {
    pub fn new(x: Array2<f64>, y: Array2<f64>, u: Array2<f64>) -> Result<Self> {
        if x.dim() != y.dim() || x.dim() != u.dim() {
            return Err(Error::Shape(format!(
                "factor dims differ: X {:?}, Y {:?}, U {:?}",
                x.dim(),
                y.dim(),
                u.dim()
            )));
        }
        Ok(Self { x, y, u })
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn k(&self) -> usize {
        self.x.ncols()
    }

    pub fn is_nonnegative(&self) -> bool {
        [&self.x, &self.y, &self.u].iter().all(|m| m.iter().all(|&v| v >= 0.0))
    }
}

/// Hyper-parameters of the regularized model.
///
/// `theta` weights both the `YU^T` fit and the two equality penalties.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SgnConfig {
    pub k: usize,
    pub theta: f64,
    pub lambda: f64,
    pub beta: f64,
    pub tol: f64,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for SgnConfig {
    fn default() -> Self {
        Self {
            k: 2,
            theta: 0.125,
            lambda: 1.0,
            beta: 0.5,
            tol: 1e-3,
            max_iters: 200,
            seed: 0,
        }
    }
}

impl SgnConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::param("K must be at least 1"));
        }
        if !(self.theta > 0.0 && self.theta.is_finite()) {
            return Err(Error::param(format!("theta must be > 0, got {}", self.theta)));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::param(format!("lambda must be >= 0, got {}", self.lambda)));
        }
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return Err(Error::param(format!("beta must be in (0, 1], got {}", self.beta)));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::param(format!("tol must be > 0, got {}", self.tol)));
        }
        if self.max_iters == 0 {
            return Err(Error::param("max_iters must be at least 1"));
        }
        Ok(())
    }
}

/// Degree vector of the similarity matrix; the Laplacian is `diag(degrees) - W`
/// with `W` the adjacency itself.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianPieces {
    pub degrees: Vec<f64>,
}

impl LaplacianPieces {
    pub fn from_adjacency<A: SymmetricAdjacency + ?Sized>(adj: &A) -> Self {
        Self {
            degrees: adj.row_sums(),
        }
    }

    pub fn n(&self) -> usize {
        self.degrees.len()
    }
}

/// Uniform draws from the open interval (0, 0.5) for X, then Y, then U.
pub fn init_factors(n: usize, k: usize, seed: u64) -> FactorSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |_| loop {
        let v = rng.random::<f64>() * 0.5;
        if v > 0.0 {
            break v;
        }
    };
    let x = Array2::from_shape_fn((n, k), &mut draw);
    let y = Array2::from_shape_fn((n, k), &mut draw);
    let u = Array2::from_shape_fn((n, k), &mut draw);
    FactorSet { x, y, u }
}

/// Hard community assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub assignment: Vec<usize>,
    pub k: usize,
}

impl Partition {
    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }
}

/// Row-wise argmax; ties go to the smallest column index.
pub fn assign(x: &Array2<f64>) -> Partition {
    let assignment = x
        .rows()
        .into_iter()
        .map(|row| {
            let mut best = 0;
            for (c, &v) in row.iter().enumerate() {
                if v > row[best] {
                    best = c;
                }
            }
            best
        })
        .collect();
    Partition {
        assignment,
        k: x.ncols(),
    }
}

/// `num / den`, or `None` for a zero denominator (the entry is then left as is).
#[inline]
pub(crate) fn guarded_ratio(num: f64, den: f64) -> Option<f64> {
    if den > 0.0 {
        Some(num / den)
    } else {
        None
    }
}
