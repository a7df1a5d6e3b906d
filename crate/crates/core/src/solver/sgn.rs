//! Symmetry- and graph-regularized NMF.
//!
//! Objective, with `A` the (enhanced) adjacency and `L = D - A`:
//!
//! ```text
//! J = 1/4 ||XX^T - A||^2 + lambda/2 tr(X^T L X)
//!   + theta/2 (||YU^T - A||^2 + ||X - Y||^2 + ||X - U||^2)
//! ```
//!
//! Updates run X, then Y, then U. The X rule is damped by `beta`; Y and U use
//! the freshest factors available.

use ndarray::{Array2, Zip};

use super::{guarded_ratio, init_factors, FactorSet, LaplacianPieces, SgnConfig, SymmetricAdjacency};
use crate::error::{Error, Result};

fn check_shapes<A: SymmetricAdjacency + ?Sized>(adj: &A, factors: &FactorSet, lap: &LaplacianPieces) -> Result<()> {
    let n = adj.dim();
    if factors.n() != n || lap.n() != n || factors.y.dim() != factors.x.dim() || factors.u.dim() != factors.x.dim() {
        return Err(Error::Shape(format!(
            "adjacency is {n}x{n}, Laplacian has {} rows, factors are X {:?} Y {:?} U {:?}",
            lap.n(),
            factors.x.dim(),
            factors.y.dim(),
            factors.u.dim()
        )));
    }
    Ok(())
}

/// `diag(d) M`.
fn scale_rows(degrees: &[f64], m: &Array2<f64>) -> Array2<f64> {
    let mut out = m.clone();
    for (mut row, &d) in out.rows_mut().into_iter().zip(degrees) {
        row *= d;
    }
    out
}

fn objective_unchecked<A: SymmetricAdjacency + ?Sized>(
    adj: &A,
    f: &FactorSet,
    cfg: &SgnConfig,
    lap: &LaplacianPieces,
) -> f64 {
    let a_sq = adj.frobenius_sq();
    let xtx = f.x.t().dot(&f.x);
    let fit_x = (&xtx * &xtx).sum() - 2.0 * adj.bilinear(f.x.view(), f.x.view()) + a_sq;

    let yty = f.y.t().dot(&f.y);
    let utu = f.u.t().dot(&f.u);
    let fit_yu = (&yty * &utu).sum() - 2.0 * adj.bilinear(f.y.view(), f.u.view()) + a_sq;

    let degree_term: f64 = f
        .x
        .rows()
        .into_iter()
        .zip(&lap.degrees)
        .map(|(row, &d)| d * row.dot(&row))
        .sum();
    let smooth = degree_term - adj.bilinear(f.x.view(), f.x.view());

    let gap_y: f64 = Zip::from(&f.x).and(&f.y).fold(0.0, |acc, &a, &b| acc + (a - b) * (a - b));
    let gap_u: f64 = Zip::from(&f.x).and(&f.u).fold(0.0, |acc, &a, &b| acc + (a - b) * (a - b));

    0.25 * fit_x + 0.5 * cfg.lambda * smooth + 0.5 * cfg.theta * (fit_yu + gap_y + gap_u)
}

pub fn sgn_objective<A: SymmetricAdjacency + ?Sized>(
    adj: &A,
    factors: &FactorSet,
    cfg: &SgnConfig,
    lap: &LaplacianPieces,
) -> Result<f64> {
    check_shapes(adj, factors, lap)?;
    Ok(objective_unchecked(adj, factors, cfg, lap))
}

/// Numerator and denominator of the X rule at `f`.
fn x_terms<A: SymmetricAdjacency + ?Sized>(
    adj: &A,
    f: &FactorSet,
    cfg: &SgnConfig,
    lap: &LaplacianPieces,
) -> (Array2<f64>, Array2<f64>) {
    let ax = adj.mul(f.x.view());
    let num = &ax * (1.0 + cfg.lambda) + &(&f.y + &f.u) * cfg.theta;
    let xxtx = f.x.dot(&f.x.t().dot(&f.x));
    let den = xxtx + &f.x * (2.0 * cfg.theta) + scale_rows(&lap.degrees, &f.x) * cfg.lambda;
    (num, den)
}

/// Numerator and denominator of the rule for `target`, paired with `other`:
/// `(A other + X) / (target other^T other + target)`.
fn pair_terms<A: SymmetricAdjacency + ?Sized>(
    adj: &A,
    x: &Array2<f64>,
    target: &Array2<f64>,
    other: &Array2<f64>,
) -> (Array2<f64>, Array2<f64>) {
    let num = adj.mul(other.view()) + x;
    let den = target.dot(&other.t().dot(other)) + target;
    (num, den)
}

fn step_unchecked<A: SymmetricAdjacency + ?Sized>(
    adj: &A,
    f: &FactorSet,
    cfg: &SgnConfig,
    lap: &LaplacianPieces,
) -> FactorSet {
    let beta = cfg.beta;
    let (num, den) = x_terms(adj, f, cfg, lap);
    let mut x = f.x.clone();
    Zip::from(&mut x).and(&num).and(&den).for_each(|v, &n, &d| {
        if let Some(r) = guarded_ratio(n, d) {
            *v *= 1.0 - beta + beta * r;
        }
    });

    let (num, den) = pair_terms(adj, &x, &f.y, &f.u);
    let mut y = f.y.clone();
    Zip::from(&mut y).and(&num).and(&den).for_each(|v, &n, &d| {
        if let Some(r) = guarded_ratio(n, d) {
            *v *= r;
        }
    });

    let (num, den) = pair_terms(adj, &x, &f.u, &y);
    let mut u = f.u.clone();
    Zip::from(&mut u).and(&num).and(&den).for_each(|v, &n, &d| {
        if let Some(r) = guarded_ratio(n, d) {
            *v *= r;
        }
    });

    FactorSet { x, y, u }
}

/// One X -> Y -> U multiplicative sweep.
pub fn sgn_step<A: SymmetricAdjacency + ?Sized>(
    adj: &A,
    factors: &FactorSet,
    cfg: &SgnConfig,
    lap: &LaplacianPieces,
) -> Result<FactorSet> {
    check_shapes(adj, factors, lap)?;
    Ok(step_unchecked(adj, factors, cfg, lap))
}

/// Analytic gradients `(dJ/dX, dJ/dY, dJ/dU)`.
///
/// Each is the denominator minus the numerator of the matching update rule,
/// scaled by `theta` for Y and U.
pub fn sgn_gradient<A: SymmetricAdjacency + ?Sized>(
    adj: &A,
    f: &FactorSet,
    cfg: &SgnConfig,
    lap: &LaplacianPieces,
) -> Result<(Array2<f64>, Array2<f64>, Array2<f64>)> {
    check_shapes(adj, f, lap)?;
    let (nx, dx) = x_terms(adj, f, cfg, lap);
    let (ny, dy) = pair_terms(adj, &f.x, &f.y, &f.u);
    let (nu, du) = pair_terms(adj, &f.x, &f.u, &f.y);
    Ok((dx - nx, (dy - ny) * cfg.theta, (du - nu) * cfg.theta))
}

/// Undamped update ratios `num / den` for X, Y and U at the current point,
/// all evaluated without advancing any factor. Zero denominators give NaN.
pub fn sgn_update_ratios<A: SymmetricAdjacency + ?Sized>(
    adj: &A,
    f: &FactorSet,
    cfg: &SgnConfig,
    lap: &LaplacianPieces,
) -> Result<(Array2<f64>, Array2<f64>, Array2<f64>)> {
    check_shapes(adj, f, lap)?;
    let div = |(n, d): (Array2<f64>, Array2<f64>)| {
        Zip::from(&n).and(&d).map_collect(|&n, &d| guarded_ratio(n, d).unwrap_or(f64::NAN))
    };
    Ok((
        div(x_terms(adj, f, cfg, lap)),
        div(pair_terms(adj, &f.x, &f.y, &f.u)),
        div(pair_terms(adj, &f.x, &f.u, &f.y)),
    ))
}

/// Result of a training run.
#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub factors: FactorSet,
    /// Objective before the first update.
    pub initial_objective: f64,
    /// Objective after each update; its length is the iteration count.
    pub trace: Vec<f64>,
    /// Whether the objective change fell below `tol` before `max_iters`.
    pub converged: bool,
}

impl TrainOutcome {
    pub fn iterations(&self) -> usize {
        self.trace.len()
    }

    pub fn final_objective(&self) -> f64 {
        self.trace.last().copied().unwrap_or(self.initial_objective)
    }
}

/// Trains from seeded random factors in (0, 0.5).
pub fn sgn_train<A: SymmetricAdjacency + ?Sized>(adj: &A, cfg: &SgnConfig) -> Result<TrainOutcome> {
    cfg.validate()?;
    sgn_train_from(adj, cfg, init_factors(adj.dim(), cfg.k, cfg.seed))
}

/// Trains from the given factors. Stops once `|J_t - J_{t-1}| < tol`
/// (with `J_0` the initial objective) or after `max_iters` updates.
pub fn sgn_train_from<A: SymmetricAdjacency + ?Sized>(
    adj: &A,
    cfg: &SgnConfig,
    factors: FactorSet,
) -> Result<TrainOutcome> {
    cfg.validate()?;
    let lap = LaplacianPieces::from_adjacency(adj);
    check_shapes(adj, &factors, &lap)?;

    let initial_objective = objective_unchecked(adj, &factors, cfg, &lap);
    let mut current = factors;
    let mut prev = initial_objective;
    let mut trace = Vec::with_capacity(cfg.max_iters);
    let mut converged = false;
    while trace.len() < cfg.max_iters {
        current = step_unchecked(adj, &current, cfg, &lap);
        let obj = objective_unchecked(adj, &current, cfg, &lap);
        trace.push(obj);
        if (obj - prev).abs() < cfg.tol {
            converged = true;
            break;
        }
        prev = obj;
    }
    Ok(TrainOutcome {
        factors: current,
        initial_objective,
        trace,
        converged,
    })
}
