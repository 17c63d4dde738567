use super::{double_center, sorted_eigen};
use crate::error::{MirrorError, Result};
use crate::transport::DistanceMatrix;

/// Scree-plot data and the evidence for (or against) Euclidean realizability.
#[derive(Debug, Clone, PartialEq)]
pub struct RealizabilityReport {
    /// Eigenvalues of the doubly centered matrix, descending.
    pub spectrum: Vec<f64>,
    /// Eigenvalues below `-tolerance`.
    pub count_negative: usize,
    pub min_eigenvalue: f64,
    /// `1e-9 * max |lambda|`.
    pub tolerance: f64,
    /// `lambda_c / m` for `c = 1..=m`.
    pub ratio_over_m: Vec<f64>,
}

impl RealizabilityReport {
    pub fn is_euclidean(&self) -> bool {
        self.count_negative == 0
    }
}

pub fn realizability_diagnostics(delta: &DistanceMatrix) -> Result<RealizabilityReport> {
    let m = delta.len();
    if m == 0 {
        return Err(MirrorError::Empty("distance matrix".into()));
    }
    let (spectrum, _) = sorted_eigen(double_center(delta))?;
    let max_abs = spectrum.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let tolerance = 1e-9 * max_abs;
    let count_negative = spectrum.iter().filter(|&&v| v < -tolerance).count();
    let min_eigenvalue = spectrum.last().copied().unwrap_or(0.0);
    let ratio_over_m = spectrum.iter().map(|v| v / m as f64).collect();
    Ok(RealizabilityReport {
        spectrum,
        count_negative,
        min_eigenvalue,
        tolerance,
        ratio_over_m,
    })
}

/// Largest-gap rule: `c = argmax_j (lambda_j - lambda_{j+1})` over positive
/// `lambda_j`, `j < m`. Gaps equal to within a relative 1e-12 tie, and ties
/// go to the smaller `c`.
pub fn select_dimension(spectrum: &[f64]) -> Result<usize> {
    if spectrum.len() < 2 {
        return Err(MirrorError::InvalidConfig(format!(
            "dimension selection needs at least 2 eigenvalues, got {}",
            spectrum.len()
        )));
    }
    if spectrum.iter().any(|v| !v.is_finite()) {
        return Err(MirrorError::NonFinite("spectrum".into()));
    }
    let gaps: Vec<(usize, f64)> = spectrum
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] > 0.0)
        .map(|(j, w)| (j + 1, w[0] - w[1]))
        .collect();
    let max_gap = gaps
        .iter()
        .map(|&(_, g)| g)
        .fold(f64::NEG_INFINITY, f64::max);
    if gaps.is_empty() {
        return Err(MirrorError::NoPositiveSpectrum);
    }
    let tie = 1e-12 * max_gap.abs();
    Ok(gaps
        .iter()
        .find(|&&(_, g)| g >= max_gap - tie)
        .map(|&(c, _)| c)
        .unwrap_or(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transport::Metric;
    use nalgebra::DMatrix;
    use proptest::prelude::*;

    #[test]
    fn largest_gap_examples() {
        assert_eq!(select_dimension(&[10.0, 9.0, 0.1, 0.05]).unwrap(), 2);
        assert_eq!(select_dimension(&[5.0, 0.0, 0.0]).unwrap(), 1);
        assert_eq!(select_dimension(&[4.0, 4.0, 0.1]).unwrap(), 2);
        // equal gaps resolve to the smaller dimension
        assert_eq!(select_dimension(&[3.0, 2.0, 1.0]).unwrap(), 1);
    }

    #[test]
    fn no_positive_eigenvalue() {
        assert!(matches!(select_dimension(&[0.0, -1.0, -2.0]), Err(MirrorError::NoPositiveSpectrum)));
        assert!(select_dimension(&[1.0]).is_err());
    }

    #[test]
    fn euclidean_input_has_no_negative_eigenvalues() {
        let pts: [[f64; 2]; 5] = [[0.0, 0.0], [1.0, 0.0], [0.3, 2.0], [4.0, 1.0], [2.0, 2.0]];
        let ids = (0..5).map(|i| i.to_string()).collect();
        let d = DistanceMatrix::from_fn(ids, Metric::External, |i, j| {
            ((pts[i][0] - pts[j][0]).powi(2) + (pts[i][1] - pts[j][1]).powi(2)).sqrt()
        })
        .unwrap();
        let r = realizability_diagnostics(&d).unwrap();
        assert_eq!(r.count_negative, 0);
        assert!(r.is_euclidean());
        assert_eq!(r.ratio_over_m.len(), 5);
        assert!((r.ratio_over_m[0] - r.spectrum[0] / 5.0).abs() < 1e-15);
    }

    #[test]
    fn triangle_violation_is_flagged() {
        // d(1,2) = 3 > d(1,0) + d(0,2) = 2; B has eigenvalues 4.5, 0, -5/6
        let d = DistanceMatrix::new(
            vec!["a".into(), "b".into(), "c".into()],
            DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 1.0, 1.0, 0.0, 3.0, 1.0, 3.0, 0.0]),
            Metric::External,
        )
        .unwrap();
        let r = realizability_diagnostics(&d).unwrap();
        assert!(r.count_negative >= 1);
        assert!((r.min_eigenvalue + 5.0 / 6.0).abs() < 1e-12, "{:?}", r.spectrum);
        assert!((r.spectrum[0] - 4.5).abs() < 1e-12);
    }

    #[test]
    fn two_points_closed_form() {
        for delta in [0.5, 1.0, 7.25] {
            let d = DistanceMatrix::new(
                vec!["a".into(), "b".into()],
                DMatrix::from_row_slice(2, 2, &[0.0, delta, delta, 0.0]),
                Metric::External,
            )
            .unwrap();
            let r = realizability_diagnostics(&d).unwrap();
            assert!((r.spectrum[0] - delta * delta / 2.0).abs() < 1e-12);
            assert!(r.spectrum[1].abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn selection_is_scale_invariant(
            mut spec in prop::collection::vec(-5.0f64..50.0, 2..12),
            scale in 1e-6f64..1e6,
        ) {
            spec.sort_by(|a, b| b.total_cmp(a));
            let scaled: Vec<f64> = spec.iter().map(|v| v * scale).collect();
            match (select_dimension(&spec), select_dimension(&scaled)) {
                (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
                (Err(_), Err(_)) => {}
                (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
            }
        }
    }
}
