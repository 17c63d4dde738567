use nalgebra::{DMatrix, SVD};

use crate::error::{MirrorError, Result};

/// Orthogonal `W` minimizing `||reference - estimate * W||_F` after both
/// configurations are column-centered.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcrustesAlignment {
    pub rotation: DMatrix<f64>,
    /// Frobenius norm of the residual at the optimum.
    pub residual: f64,
}

impl ProcrustesAlignment {
    /// `center(estimate) * W`.
    pub fn apply(&self, estimate: &DMatrix<f64>) -> DMatrix<f64> {
        center_columns(estimate) * &self.rotation
    }
}

pub fn center_columns(x: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = x.clone();
    for mut col in out.column_iter_mut() {
        let mean = col.mean();
        col.add_scalar_mut(-mean);
    }
    out
}

pub fn procrustes_align(estimate: &DMatrix<f64>, reference: &DMatrix<f64>) -> Result<ProcrustesAlignment> {
    if estimate.shape() != reference.shape() {
        return Err(MirrorError::DimensionMismatch(format!(
            "procrustes shapes {:?} and {:?}",
            estimate.shape(),
            reference.shape()
        )));
    }
    let est = center_columns(estimate);
    let reference = center_columns(reference);
    let cross = est.transpose() * &reference;
    let svd = SVD::try_new(cross, true, true, 1e-15, 10_000).ok_or(MirrorError::SvdNonConvergence)?;
    let (u, v_t) = match (svd.u, svd.v_t) {
        (Some(u), Some(v_t)) => (u, v_t),
        _ => return Err(MirrorError::SvdNonConvergence),
    };
    let rotation = u * v_t;
    let residual = (&reference - &est * &rotation).norm();
    Ok(ProcrustesAlignment { rotation, residual })
}
