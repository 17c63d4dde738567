//! Exact empirical Wasserstein distances between equal-size sample sets.
//!
//! For two empirical measures with `n` atoms each, the optimal coupling is a
//! permutation, so `W_p` reduces to a linear assignment problem on the
//! matrix of `p`-th power Euclidean costs. One-dimensional samples take a
//! sorting shortcut: pairing order statistics is optimal for every `p >= 1`.

pub mod assignment;
mod matrix;

pub use matrix::{distance_matrix, read_distance_matrix, write_distance_matrix, DistanceMatrix, Metric};

use crate::dataset::SampleSet;
use crate::error::{MirrorError, Result};

/// An optimal permutation coupling and the `W_p` cost it attains.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan {
    /// `permutation[i]` is the index in the second set matched to row `i` of the first.
    pub permutation: Vec<usize>,
    pub cost: f64,
}

fn check_pair(a: &SampleSet, b: &SampleSet, p: f64) -> Result<()> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(MirrorError::InvalidConfig(format!("Wasserstein order p={p} must be a finite value >= 1")));
    }
    if a.q() != b.q() {
        return Err(MirrorError::DimensionMismatch(format!(
            "sets `{}` (q={}) and `{}` (q={})",
            a.id(),
            a.q(),
            b.id(),
            b.q()
        )));
    }
    if a.n() != b.n() {
        return Err(MirrorError::UnequalSampleSizes {
            expected: a.n(),
            offending: vec![(b.id().to_string(), b.n())],
        });
    }
    Ok(())
}

#[inline]
fn squared_distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// `|x - y|^p` computed from the squared Euclidean distance.
#[inline]
pub(crate) fn powered_cost(sq: f64, p: f64) -> f64 {
    if p == 2.0 {
        sq
    } else if p == 1.0 {
        sq.sqrt()
    } else {
        sq.sqrt().powf(p)
    }
}

/// `(mean of powered costs)^(1/p)`.
#[inline]
fn finish(sum: f64, n: usize, p: f64) -> f64 {
    let mean = sum / n as f64;
    if p == 1.0 {
        mean
    } else if p == 2.0 {
        mean.sqrt()
    } else {
        mean.powf(1.0 / p)
    }
}

/// Row-major `n x n` matrix with entry `(i, j) = ||a_i - b_j||^p`.
pub fn cost_matrix(a: &SampleSet, b: &SampleSet, p: f64) -> Result<Vec<f64>> {
    check_pair(a, b, p)?;
    let n = a.n();
    let mut costs = Vec::with_capacity(n * n);
    for x in a.rows() {
        costs.extend(b.rows().map(|y| powered_cost(squared_distance(x, y), p)));
    }
    Ok(costs)
}

/// `W_p` cost of a given coupling, recomputed from raw samples.
pub fn plan_cost(a: &SampleSet, b: &SampleSet, permutation: &[usize], p: f64) -> f64 {
    let sum: f64 = permutation
        .iter()
        .enumerate()
        .map(|(i, &j)| powered_cost(squared_distance(a.row(i), b.row(j)), p))
        .sum();
    finish(sum, permutation.len(), p)
}

/// Exact `W_p` between two equal-size empirical measures.
///
/// Uses the sorting path for `q = 1` and the assignment solver otherwise.
pub fn wasserstein_exact(a: &SampleSet, b: &SampleSet, p: f64) -> Result<TransportPlan> {
    check_pair(a, b, p)?;
    if a.q() == 1 {
        Ok(wasserstein_sorted(a, b, p))
    } else {
        wasserstein_assignment(a, b, p)
    }
}

/// General path: solve the assignment problem on the full cost matrix.
///
/// Valid for any `q`; exposed so the one-dimensional shortcut can be checked
/// against it.
pub fn wasserstein_assignment(a: &SampleSet, b: &SampleSet, p: f64) -> Result<TransportPlan> {
    let costs = cost_matrix(a, b, p)?;
    let permutation = assignment::solve(&costs, a.n());
    let cost = plan_cost(a, b, &permutation, p);
    Ok(TransportPlan { permutation, cost })
}

fn sorted_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| values[i].total_cmp(&values[j]).then(i.cmp(&j)));
    idx
}

/// One-dimensional path: match the k-th smallest of `a` to the k-th smallest of `b`.
fn wasserstein_sorted(a: &SampleSet, b: &SampleSet, p: f64) -> TransportPlan {
    let ia = sorted_order(a.data());
    let ib = sorted_order(b.data());
    let mut permutation = vec![0usize; a.n()];
    for (&i, &j) in ia.iter().zip(&ib) {
        permutation[i] = j;
    }
    let sum: f64 = ia
        .iter()
        .zip(&ib)
        .map(|(&i, &j)| {
            let diff = a.data()[i] - b.data()[j];
            powered_cost(diff * diff, p)
        })
        .sum();
    TransportPlan {
        permutation,
        cost: finish(sum, a.n(), p),
    }
}

/// `W_p` between two already sorted one-dimensional samples of equal length.
pub(crate) fn wasserstein_sorted_values(a: &[f64], b: &[f64], p: f64) -> f64 {
    let sum: f64 = a
        .iter()
        .zip(b)
        .map(|(x, y)| {
            let diff = x - y;
            powered_cost(diff * diff, p)
        })
        .sum();
    finish(sum, a.len(), p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(id: &str, rows: &[&[f64]]) -> SampleSet {
        let rows: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
        SampleSet::from_rows(id, None, &rows).unwrap()
    }

    #[test]
    fn cost_matrix_examples() {
        let a = set("a", &[&[0.0]]);
        let b = set("b", &[&[3.0]]);
        assert_eq!(cost_matrix(&a, &b, 1.0).unwrap(), vec![3.0]);

        let a = set("a", &[&[0.0], &[1.0]]);
        let b = set("b", &[&[1.0], &[2.0]]);
        assert_eq!(cost_matrix(&a, &b, 2.0).unwrap(), vec![1.0, 4.0, 0.0, 1.0]);

        let c = cost_matrix(&a, &a, 1.0).unwrap();
        assert_eq!((c[0], c[3]), (0.0, 0.0));
    }

    #[test]
    fn cost_matrix_dimension_mismatch() {
        let a = set("a", &[&[0.0, 1.0]]);
        let b = set("b", &[&[3.0]]);
        assert!(matches!(cost_matrix(&a, &b, 1.0), Err(MirrorError::DimensionMismatch(_))));
    }

    #[test]
    fn wasserstein_examples() {
        let a = set("a", &[&[0.0]]);
        let b = set("b", &[&[3.0]]);
        assert_eq!(wasserstein_exact(&a, &b, 1.0).unwrap().cost, 3.0);

        // both permutations of n=2 cost 1.0
        let a = set("a", &[&[0.0], &[1.0]]);
        let b = set("b", &[&[1.0], &[2.0]]);
        assert_eq!(wasserstein_exact(&a, &b, 1.0).unwrap().cost, 1.0);
        assert_eq!(wasserstein_assignment(&a, &b, 1.0).unwrap().cost, 1.0);

        let a = set("a", &[&[0.0, 1.0], &[2.0, -1.0], &[5.0, 5.0]]);
        let plan = wasserstein_exact(&a, &a, 2.0).unwrap();
        assert_eq!(plan.cost, 0.0);
    }

    #[test]
    fn unequal_sizes_rejected() {
        let a = set("a", &[&[0.0], &[1.0]]);
        let b = set("b", &[&[1.0]]);
        assert!(matches!(
            wasserstein_exact(&a, &b, 1.0),
            Err(MirrorError::UnequalSampleSizes { .. })
        ));
    }

    #[test]
    fn invalid_order_rejected() {
        let a = set("a", &[&[0.0]]);
        assert!(wasserstein_exact(&a, &a, 0.5).is_err());
        assert!(wasserstein_exact(&a, &a, f64::NAN).is_err());
    }

    #[test]
    fn general_p_uses_same_solver() {
        let a = set("a", &[&[0.0, 0.0], &[1.0, 0.0]]);
        let b = set("b", &[&[0.0, 2.0], &[1.0, 2.0]]);
        let plan = wasserstein_exact(&a, &b, 3.0).unwrap();
        assert!((plan.cost - 2.0).abs() < 1e-12);
    }
}
