//! Single-factor symmetric NMF baseline, `min 1/2 ||A - XX^T||^2`, with the
//! half-damped update `x <- x (0.5 + (AX) / (2 XX^T X))`.

use ndarray::{Array2, Zip};

use super::{guarded_ratio, init_factors, SymmetricAdjacency};
use crate::error::{Error, Result};

fn check(adj: &(impl SymmetricAdjacency + ?Sized), x: &Array2<f64>) -> Result<()> {
    if x.nrows() != adj.dim() {
        return Err(Error::Shape(format!("X has {} rows, adjacency is {}x{}", x.nrows(), adj.dim(), adj.dim())));
    }
    Ok(())
}

fn objective_unchecked(adj: &(impl SymmetricAdjacency + ?Sized), x: &Array2<f64>) -> f64 {
    let xtx = x.t().dot(x);
    0.5 * ((&xtx * &xtx).sum() - 2.0 * adj.bilinear(x.view(), x.view()) + adj.frobenius_sq())
}

fn step_unchecked(adj: &(impl SymmetricAdjacency + ?Sized), x: &Array2<f64>) -> Array2<f64> {
    let ax = adj.mul(x.view());
    let xxtx = x.dot(&x.t().dot(x));
    let mut next = x.clone();
    Zip::from(&mut next).and(&ax).and(&xxtx).for_each(|v, &n, &d| {
        if let Some(r) = guarded_ratio(n, 2.0 * d) {
            *v *= 0.5 + r;
        }
    });
    next
}

pub fn snmf_objective(adj: &(impl SymmetricAdjacency + ?Sized), x: &Array2<f64>) -> Result<f64> {
    check(adj, x)?;
    Ok(objective_unchecked(adj, x))
}

pub fn snmf_step(adj: &(impl SymmetricAdjacency + ?Sized), x: &Array2<f64>) -> Result<Array2<f64>> {
    check(adj, x)?;
    Ok(step_unchecked(adj, x))
}

#[derive(Debug, Clone)]
pub struct SnmfOutcome {
    pub x: Array2<f64>,
    pub initial_objective: f64,
    pub trace: Vec<f64>,
    pub converged: bool,
}

impl SnmfOutcome {
    pub fn iterations(&self) -> usize {
        self.trace.len()
    }

    pub fn final_objective(&self) -> f64 {
        self.trace.last().copied().unwrap_or(self.initial_objective)
    }
}

/// Starts from the X block of [`init_factors`] for the same seed, so the
/// baseline and the regularized model share their initial indicator.
pub fn snmf_train(
    adj: &(impl SymmetricAdjacency + ?Sized),
    k: usize,
    seed: u64,
    tol: f64,
    max_iters: usize,
) -> Result<SnmfOutcome> {
    if k == 0 {
        return Err(Error::param("K must be at least 1"));
    }
    snmf_train_from(adj, init_factors(adj.dim(), k, seed).x, tol, max_iters)
}

pub fn snmf_train_from(
    adj: &(impl SymmetricAdjacency + ?Sized),
    x: Array2<f64>,
    tol: f64,
    max_iters: usize,
) -> Result<SnmfOutcome> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::param(format!("tol must be > 0, got {tol}")));
    }
    if max_iters == 0 {
        return Err(Error::param("max_iters must be at least 1"));
    }
    check(adj, &x)?;
    let initial_objective = objective_unchecked(adj, &x);
    let mut x = x;
    let mut prev = initial_objective;
    let mut trace = Vec::with_capacity(max_iters);
    let mut converged = false;
    while trace.len() < max_iters {
        x = step_unchecked(adj, &x);
        let obj = objective_unchecked(adj, &x);
        trace.push(obj);
        if (obj - prev).abs() < tol {
            converged = true;
            break;
        }
        prev = obj;
    }
    Ok(SnmfOutcome {
        x,
        initial_objective,
        trace,
        converged,
    })
}
