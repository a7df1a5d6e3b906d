//! External clustering metrics: normalized mutual information and purity.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::GroundTruth;
use crate::solver::Partition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NmiNormalization {
    /// `I / sqrt(H_p H_t)`.
    #[default]
    Geometric,
    /// `2 I / (H_p + H_t)`.
    Arithmetic,
}

/// Co-occurrence counts between predicted clusters (rows) and true labels (columns).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contingency {
    pub table: Vec<Vec<usize>>,
    pub row_sums: Vec<usize>,
    pub col_sums: Vec<usize>,
    pub n: usize,
}

/// Maps arbitrary labels to dense indices in first-seen order.
fn compact(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut seen = HashMap::new();
    let dense = labels
        .iter()
        .map(|&l| {
            let next = seen.len();
            *seen.entry(l).or_insert(next)
        })
        .collect();
    (dense, seen.len())
}

impl Contingency {
    pub fn from_labels(pred: &[usize], truth: &[usize]) -> Result<Self> {
        if pred.len() != truth.len() {
            return Err(Error::Shape(format!(
                "prediction covers {} nodes, ground truth {}",
                pred.len(),
                truth.len()
            )));
        }
        let (p, kp) = compact(pred);
        let (t, kt) = compact(truth);
        let mut table = vec![vec![0; kt]; kp];
        for (&a, &b) in p.iter().zip(&t) {
            table[a][b] += 1;
        }
        let row_sums = table.iter().map(|r| r.iter().sum()).collect();
        let col_sums = (0..kt).map(|c| table.iter().map(|r| r[c]).sum()).collect();
        Ok(Self {
            table,
            row_sums,
            col_sums,
            n: pred.len(),
        })
    }

    fn entropy(sums: &[usize], n: f64) -> f64 {
        sums.iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / n;
                -p * p.ln()
            })
            .sum()
    }

    pub fn mutual_information(&self) -> f64 {
        let n = self.n as f64;
        let mut mi = 0.0;
        for (i, row) in self.table.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let joint = c as f64 / n;
                let ratio = (c as f64 * n) / (self.row_sums[i] as f64 * self.col_sums[j] as f64);
                mi += joint * ratio.ln();
            }
        }
        mi
    }

    pub fn nmi(&self, norm: NmiNormalization) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        let n = self.n as f64;
        let hp = Self::entropy(&self.row_sums, n);
        let ht = Self::entropy(&self.col_sums, n);
        if hp == 0.0 || ht == 0.0 {
            // Both single-cluster: the partitions coincide.
            return if hp == 0.0 && ht == 0.0 { 1.0 } else { 0.0 };
        }
        let mi = self.mutual_information();
        let value = match norm {
            NmiNormalization::Geometric => mi / (hp * ht).sqrt(),
            NmiNormalization::Arithmetic => 2.0 * mi / (hp + ht),
        };
        value.clamp(0.0, 1.0)
    }

    pub fn purity(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        let hits: usize = self.table.iter().map(|r| r.iter().copied().max().unwrap_or(0)).sum();
        hits as f64 / self.n as f64
    }
}

/// NMI with geometric-mean normalization.
pub fn nmi(pred: &Partition, truth: &GroundTruth) -> Result<f64> {
    nmi_with(pred, truth, NmiNormalization::Geometric)
}

pub fn nmi_with(pred: &Partition, truth: &GroundTruth, norm: NmiNormalization) -> Result<f64> {
    Ok(Contingency::from_labels(&pred.assignment, truth.labels())?.nmi(norm))
}

pub fn purity(pred: &Partition, truth: &GroundTruth) -> Result<f64> {
    Ok(Contingency::from_labels(&pred.assignment, truth.labels())?.purity())
}

/// NMI on raw label slices; symmetric in its arguments.
pub fn nmi_labels(a: &[usize], b: &[usize], norm: NmiNormalization) -> Result<f64> {
    Ok(Contingency::from_labels(a, b)?.nmi(norm))
}

pub fn purity_labels(pred: &[usize], truth: &[usize]) -> Result<f64> {
    Ok(Contingency::from_labels(pred, truth)?.purity())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(v: &[usize]) -> Partition {
        Partition {
            assignment: v.to_vec(),
            k: v.iter().max().map_or(0, |m| m + 1),
        }
    }

    fn gt(v: &[usize]) -> GroundTruth {
        GroundTruth::from_labels(v.to_vec())
    }

    #[test]
    fn identical_partitions() {
        let labels = [0, 0, 1, 1, 2, 2, 2];
        assert!((nmi(&part(&labels), &gt(&labels)).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(purity(&part(&labels), &gt(&labels)).unwrap(), 1.0);
        let relabeled = [2, 2, 0, 0, 1, 1, 1];
        assert!((nmi(&part(&relabeled), &gt(&labels)).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_cluster_prediction() {
        assert_eq!(nmi(&part(&[0, 0, 0, 0]), &gt(&[0, 0, 1, 1])).unwrap(), 0.0);
        let truth = [0, 0, 0, 0, 0, 0, 1, 1, 1, 1];
        assert!((purity(&part(&[0; 10]), &gt(&truth)).unwrap() - 0.6).abs() < 1e-15);
        assert_eq!(nmi(&part(&[0, 0]), &gt(&[3, 3])).unwrap(), 1.0);
    }

    #[test]
    fn independent_partitions() {
        let pred = [0, 0, 1, 1];
        let truth = [0, 1, 0, 1];
        let c = Contingency::from_labels(&pred, &truth).unwrap();
        assert_eq!(c.mutual_information(), 0.0);
        assert_eq!(nmi(&part(&pred), &gt(&truth)).unwrap(), 0.0);
    }

    #[test]
    fn purity_counts() {
        assert_eq!(purity(&part(&[0, 0, 1, 1]), &gt(&[0, 1, 1, 1])).unwrap(), 0.75);
    }

    #[test]
    fn arithmetic_normalization() {
        let pred = [0, 0, 1, 1, 1];
        let truth = [0, 0, 0, 1, 1];
        let g = nmi_labels(&pred, &truth, NmiNormalization::Geometric).unwrap();
        let a = nmi_labels(&pred, &truth, NmiNormalization::Arithmetic).unwrap();
        // Equal marginal entropies make both normalizations coincide.
        assert!((g - a).abs() < 1e-12);
        let a2 = nmi_labels(&[0, 0, 0, 0, 1], &truth, NmiNormalization::Arithmetic).unwrap();
        let g2 = nmi_labels(&[0, 0, 0, 0, 1], &truth, NmiNormalization::Geometric).unwrap();
        assert!(a2 <= g2 + 1e-12);
    }

    #[test]
    fn length_mismatch() {
        assert!(nmi(&part(&[0, 1]), &gt(&[0, 1, 1])).is_err());
        assert!(purity(&part(&[0, 1]), &gt(&[0])).is_err());
    }
}
