//! Penalized tensor-product B-spline smoother for `d = 2`.
//!
//! Clamped uniform knots span the bounding box of the data. Coefficients
//! minimize the squared residual plus `penalty` times the squared second
//! differences of the coefficient grid along each axis. Differences are
//! taken over the Greville abscissae, which bunch up next to the clamped
//! ends, so bilinear surfaces carry no penalty at all.

use nalgebra::DMatrix;

use crate::error::{MirrorError, Result};

use super::{delaunay_triangulate, Triangulation};

/// Smallest pivot ratio accepted for an unpenalized fit.
const RANK_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BSplineConfig {
    pub degree: usize,
    /// Interior knots per axis.
    pub interior_knots: usize,
    pub penalty: f64,
}

impl Default for BSplineConfig {
    fn default() -> Self {
        BSplineConfig {
            degree: 3,
            interior_knots: 8,
            penalty: 1e-2,
        }
    }
}

impl BSplineConfig {
    fn validate(&self) -> Result<()> {
        if self.degree == 0 {
            return Err(MirrorError::InvalidConfig("spline degree must be at least 1".into()));
        }
        if !(self.penalty >= 0.0 && self.penalty.is_finite()) {
            return Err(MirrorError::InvalidConfig(format!("penalty {} must be finite and >= 0", self.penalty)));
        }
        Ok(())
    }

    /// Basis functions per axis.
    pub fn basis_len(&self) -> usize {
        self.interior_knots + self.degree + 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BSplineSurface {
    degree: usize,
    knots: [Vec<f64>; 2],
    /// `(nb1 * nb2) x c`; row `a * nb2 + b` holds control value `(a, b)`.
    coefficients: DMatrix<f64>,
    penalty: f64,
    hull: Triangulation,
}

fn clamped_knots(lo: f64, hi: f64, degree: usize, interior: usize) -> Vec<f64> {
    let mut k = vec![lo; degree + 1];
    k.extend((1..=interior).map(|j| lo + (hi - lo) * (j as f64 / (interior + 1) as f64)));
    k.extend(std::iter::repeat(hi).take(degree + 1));
    k
}

fn find_span(knots: &[f64], degree: usize, nb: usize, x: f64) -> usize {
    if x >= knots[nb] {
        return nb - 1;
    }
    if x <= knots[degree] {
        return degree;
    }
    let (mut low, mut high) = (degree, nb);
    let mut mid = (low + high) / 2;
    while x < knots[mid] || x >= knots[mid + 1] {
        if x < knots[mid] {
            high = mid;
        } else {
            low = mid;
        }
        mid = (low + high) / 2;
    }
    mid
}

/// Nonzero basis values at `x`: entries for indices `span - degree ..= span`.
fn basis_funs(knots: &[f64], degree: usize, span: usize, x: f64) -> Vec<f64> {
    let mut n = vec![0.0; degree + 1];
    let mut left = vec![0.0; degree + 1];
    let mut right = vec![0.0; degree + 1];
    n[0] = 1.0;
    for j in 1..=degree {
        left[j] = x - knots[span + 1 - j];
        right[j] = knots[span + j] - x;
        let mut saved = 0.0;
        for r in 0..j {
            let temp = n[r] / (right[r + 1] + left[j - r]);
            n[r] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        n[j] = saved;
    }
    n
}

/// Full basis row of length `nb` at `x`.
fn basis_row(knots: &[f64], degree: usize, nb: usize, x: f64) -> Vec<f64> {
    let x = x.clamp(knots[0], knots[knots.len() - 1]);
    let span = find_span(knots, degree, nb, x);
    let vals = basis_funs(knots, degree, span, x);
    let mut row = vec![0.0; nb];
    row[span - degree..=span].copy_from_slice(&vals);
    row
}

/// Greville abscissae: knot averages, one per basis function.
fn greville(knots: &[f64], degree: usize, nb: usize) -> Vec<f64> {
    (0..nb)
        .map(|j| knots[j + 1..=j + degree].iter().sum::<f64>() / degree as f64)
        .collect()
}

/// Second divided differences over the Greville abscissae, scaled so that
/// evenly spaced abscissae give the plain `(1, -2, 1)` stencil. Its kernel
/// is exactly the coefficient vectors of linear functions.
fn second_difference(knots: &[f64], degree: usize, nb: usize) -> DMatrix<f64> {
    let interior = nb - degree - 1;
    let h = (knots[knots.len() - 1] - knots[0]) / (interior + 1) as f64;
    let t: Vec<f64> = greville(knots, degree, nb).iter().map(|g| g / h).collect();
    let mut d = DMatrix::zeros(nb.saturating_sub(2), nb);
    for r in 0..nb.saturating_sub(2) {
        let (h0, h1) = (t[r + 1] - t[r], t[r + 2] - t[r + 1]);
        let span = 0.5 * (h0 + h1);
        d[(r, r)] = 1.0 / (h0 * span);
        d[(r, r + 1)] = -(1.0 / h0 + 1.0 / h1) / span;
        d[(r, r + 2)] = 1.0 / (h1 * span);
    }
    d
}

/// `P1ᵀP1 ⊗ I + I ⊗ P2ᵀP2` for the `nb x nb` coefficient grid, `Pk` being
/// the difference operator of axis `k`.
pub(crate) fn penalty_matrix(knots: &[Vec<f64>; 2], degree: usize, nb: usize) -> DMatrix<f64> {
    let dtd = |k: &[f64]| {
        let d = second_difference(k, degree, nb);
        d.transpose() * d
    };
    let eye = DMatrix::<f64>::identity(nb, nb);
    dtd(&knots[0]).kronecker(&eye) + eye.kronecker(&dtd(&knots[1]))
}

fn design_matrix(points: &[Vec<f64>], knots: &[Vec<f64>; 2], degree: usize, nb: usize) -> DMatrix<f64> {
    let mut b = DMatrix::zeros(points.len(), nb * nb);
    for (i, p) in points.iter().enumerate() {
        let r1 = basis_row(&knots[0], degree, nb, p[0]);
        let r2 = basis_row(&knots[1], degree, nb, p[1]);
        for (a, &u) in r1.iter().enumerate().filter(|(_, u)| **u != 0.0) {
            for (c, &v) in r2.iter().enumerate() {
                b[(i, a * nb + c)] = u * v;
            }
        }
    }
    b
}

/// Fit a penalized spline through `values` (`m x c`) at planar `points`.
pub fn fit_bspline(points: &[Vec<f64>], values: &DMatrix<f64>, config: &BSplineConfig) -> Result<BSplineSurface> {
    config.validate()?;
    if let Some(p) = points.iter().find(|p| p.len() != 2) {
        return Err(MirrorError::UnsupportedDimension(p.len()));
    }
    let m = points.len();
    let need = (config.degree + 1) * (config.degree + 1);
    if m < need {
        return Err(MirrorError::DegenerateInput(format!(
            "{m} points; degree {} needs at least {need}",
            config.degree
        )));
    }
    if values.nrows() != m {
        return Err(MirrorError::DimensionMismatch(format!("{} value rows for {m} points", values.nrows())));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(MirrorError::NonFinite("spline values".into()));
    }
    let hull = delaunay_triangulate(points)?;

    let nb = config.basis_len();
    let knots = [0, 1].map(|k| {
        let lo = points.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min);
        let hi = points.iter().map(|p| p[k]).fold(f64::NEG_INFINITY, f64::max);
        clamped_knots(lo, hi, config.degree, config.interior_knots)
    });
    let b = design_matrix(points, &knots, config.degree, nb);
    let mut normal = b.transpose() * &b;
    if config.penalty > 0.0 {
        normal += penalty_matrix(&knots, config.degree, nb) * config.penalty;
    }
    let rhs = b.transpose() * values;

    let chol = normal.cholesky().ok_or(if config.penalty == 0.0 {
        MirrorError::RankDeficient
    } else {
        MirrorError::DegenerateInput("penalized spline system is not positive definite".into())
    })?;
    if config.penalty == 0.0 {
        let diag = chol.l_dirty().diagonal();
        let max = diag.iter().copied().fold(0.0, f64::max);
        let min = diag.iter().copied().fold(f64::INFINITY, f64::min);
        if !(min * min > RANK_TOL * max * max) {
            return Err(MirrorError::RankDeficient);
        }
    }
    let coefficients = chol.solve(&rhs);

    Ok(BSplineSurface {
        degree: config.degree,
        knots,
        coefficients,
        penalty: config.penalty,
        hull,
    })
}

impl BSplineSurface {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn knots(&self) -> &[Vec<f64>; 2] {
        &self.knots
    }

    pub fn coefficients(&self) -> &DMatrix<f64> {
        &self.coefficients
    }

    pub fn penalty(&self) -> f64 {
        self.penalty
    }

    pub fn c(&self) -> usize {
        self.coefficients.ncols()
    }

    /// Basis functions per axis.
    pub fn basis_len(&self) -> usize {
        self.knots[0].len() - self.degree - 1
    }

    /// Spline value at `x`, or `None` outside the hull of the data.
    pub fn evaluate(&self, x: &[f64]) -> Option<Vec<f64>> {
        self.hull.locate(x)?;
        Some(self.evaluate_unchecked(x))
    }

    fn evaluate_unchecked(&self, x: &[f64]) -> Vec<f64> {
        let nb = self.basis_len();
        let r1 = basis_row(&self.knots[0], self.degree, nb, x[0]);
        let r2 = basis_row(&self.knots[1], self.degree, nb, x[1]);
        let mut out = vec![0.0; self.c()];
        for (a, &u) in r1.iter().enumerate().filter(|(_, u)| **u != 0.0) {
            for (b, &v) in r2.iter().enumerate().filter(|(_, v)| **v != 0.0) {
                let row = self.coefficients.row(a * nb + b);
                for (o, coef) in out.iter_mut().zip(row.iter()) {
                    *o += u * v * coef;
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(k: usize) -> Vec<Vec<f64>> {
        let mut g = Vec::new();
        for i in 0..k {
            for j in 0..k {
                g.push(vec![i as f64 / (k - 1) as f64, j as f64 / (k - 1) as f64]);
            }
        }
        g
    }

    #[test]
    fn basis_partition_of_unity() {
        let knots = clamped_knots(0.0, 1.0, 3, 8);
        for t in 0..=100 {
            let x = t as f64 / 100.0;
            let row = basis_row(&knots, 3, 12, x);
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-14, "x={x}");
            assert!(row.iter().all(|&v| v >= 0.0));
        }
        assert_eq!(basis_row(&knots, 3, 12, 1.0)[11], 1.0);
        assert_eq!(basis_row(&knots, 3, 12, 0.0)[0], 1.0);
    }

    #[test]
    fn constant_values_give_constant_surface() {
        let pts = grid(6);
        let values = DMatrix::from_element(pts.len(), 2, 3.5);
        for penalty in [0.0, 1e-2, 1e4] {
            let cfg = BSplineConfig {
                degree: 3,
                interior_knots: 1,
                penalty,
            };
            let s = fit_bspline(&pts, &values, &cfg).unwrap();
            for x in [[0.0, 0.0], [0.33, 0.71], [1.0, 0.5]] {
                let v = s.evaluate(&x).unwrap();
                assert!(v.iter().all(|y| (y - 3.5).abs() < 1e-9), "penalty {penalty}: {v:?}");
            }
        }
    }

    #[test]
    fn bilinear_reproduced_on_nine_by_nine_grid() {
        let pts = grid(9);
        let f = |p: &[f64]| 1.0 + 2.0 * p[0] - 0.5 * p[1] + 3.0 * p[0] * p[1];
        let values = DMatrix::from_fn(pts.len(), 1, |i, _| f(&pts[i]));
        let cfg = BSplineConfig {
            degree: 3,
            interior_knots: 8,
            penalty: 1e-6,
        };
        let s = fit_bspline(&pts, &values, &cfg).unwrap();
        let err = pts
            .iter()
            .map(|p| (s.evaluate(p).unwrap()[0] - f(p)).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-6, "max error {err:e}");
    }

    #[test]
    fn large_penalty_approaches_null_space_fit() {
        // the penalty kernel holds the bilinear surfaces: coefficients 1, g1, g2, g1*g2
        // over the Greville abscissae
        let pts = grid(7);
        let values = DMatrix::from_fn(pts.len(), 1, |i, _| ((i * 7919) % 13) as f64 / 13.0);
        let nb = 3 + 3 + 1;
        let knots = [0, 1].map(|_| clamped_knots(0.0, 1.0, 3, 3));
        let g = greville(&knots[0], 3, nb);
        let kernel = DMatrix::from_fn(nb * nb, 4, |r, k| {
            let (a, b) = (g[r / nb], g[r % nb]);
            [1.0, a, b, a * b][k]
        });
        let design = design_matrix(&pts, &knots, 3, nb) * &kernel;
        let theta = (design.transpose() * &design)
            .cholesky()
            .unwrap()
            .solve(&(design.transpose() * &values));
        let oracle = &kernel * theta;

        let gaps: Vec<f64> = [1e2, 1e4, 1e6]
            .iter()
            .map(|&penalty| {
                let cfg = BSplineConfig {
                    degree: 3,
                    interior_knots: 3,
                    penalty,
                };
                let s = fit_bspline(&pts, &values, &cfg).unwrap();
                (s.coefficients() - &oracle).abs().max()
            })
            .collect();
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
        assert!(gaps[2] < 1e-5, "{gaps:?}");
    }

    #[test]
    fn unpenalized_underdetermined_fit_is_rank_deficient() {
        let pts = grid(5);
        let values = DMatrix::from_element(pts.len(), 1, 1.0);
        let cfg = BSplineConfig {
            degree: 3,
            interior_knots: 8,
            penalty: 0.0,
        };
        assert!(matches!(fit_bspline(&pts, &values, &cfg), Err(MirrorError::RankDeficient)));
    }

    #[test]
    fn outside_hull_is_none() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![0.2, 0.2]];
        let mut all = pts.clone();
        all.extend(grid(4).into_iter().map(|p| vec![p[0] * 0.5, p[1] * 0.5]).skip(1));
        let values = DMatrix::from_element(all.len(), 1, 0.0);
        let cfg = BSplineConfig {
            degree: 1,
            interior_knots: 0,
            penalty: 1e-3,
        };
        let s = fit_bspline(&all, &values, &cfg).unwrap();
        assert!(s.evaluate(&[0.9, 0.9]).is_none());
        assert!(s.evaluate(&[0.1, 0.1]).is_some());
    }
}
