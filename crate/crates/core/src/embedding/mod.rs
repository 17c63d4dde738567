//! Classical multidimensional scaling and its diagnostics.
//!
//! `B = -1/2 H D^2 H` (element-wise square, `H = I - 11'/m`) is the Gram
//! matrix of the centered configuration whenever `D` is Euclidean. The top
//! `c` eigenpairs give the coordinates; the full spectrum exposes how far
//! `D` is from Euclidean.

mod diagnostics;
mod procrustes;

pub use diagnostics::{realizability_diagnostics, select_dimension, RealizabilityReport};
pub use procrustes::{center_columns, procrustes_align, ProcrustesAlignment};

use std::io::{Read, Write};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{MirrorError, Result};
use crate::transport::DistanceMatrix;

const EIGEN_EPS: f64 = 1e-15;
const EIGEN_MAX_ITER: usize = 10_000;

/// Coordinates from CMDS plus the spectrum of the doubly centered matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MirrorEmbedding {
    pub ids: Vec<String>,
    /// `m x c`; row `i` is the mirror estimate for set `i`.
    pub coords: DMatrix<f64>,
    /// All `m` eigenvalues of `B`, descending. Negative values are kept.
    pub spectrum: Vec<f64>,
}

impl MirrorEmbedding {
    pub fn c(&self) -> usize {
        self.coords.ncols()
    }

    pub fn m(&self) -> usize {
        self.coords.nrows()
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.coords.row(i).iter().copied().collect()
    }
}

/// `-1/2 H D^2 H`.
pub fn double_center(delta: &DistanceMatrix) -> DMatrix<f64> {
    double_center_values(delta.values())
}

pub(crate) fn double_center_values(d: &DMatrix<f64>) -> DMatrix<f64> {
    let m = d.nrows();
    if m == 0 {
        return DMatrix::zeros(0, 0);
    }
    let sq = d.map(|v| v * v);
    let row_means: Vec<f64> = (0..m).map(|i| sq.row(i).sum() / m as f64).collect();
    let col_means: Vec<f64> = (0..m).map(|j| sq.column(j).sum() / m as f64).collect();
    let grand = row_means.iter().sum::<f64>() / m as f64;
    let mut b = DMatrix::from_fn(m, m, |i, j| -0.5 * (sq[(i, j)] - row_means[i] - col_means[j] + grand));
    // exact symmetry
    for i in 0..m {
        for j in i + 1..m {
            let avg = 0.5 * (b[(i, j)] + b[(j, i)]);
            b[(i, j)] = avg;
            b[(j, i)] = avg;
        }
    }
    b
}

/// Eigenpairs of a symmetric matrix, sorted by eigenvalue descending.
pub(crate) fn sorted_eigen(b: DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let m = b.nrows();
    let eig = SymmetricEigen::try_new(b, EIGEN_EPS, EIGEN_MAX_ITER).ok_or(MirrorError::EigenNonConvergence(m))?;
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]).then(i.cmp(&j)));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(m, m, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok((values, vectors))
}

/// Flip each column so that its largest-magnitude entry is positive.
///
/// Entries within a relative 1e-9 of the maximum count as tied; the lowest
/// row index among them decides, which keeps the choice stable under
/// last-bit rounding differences.
pub(crate) fn canonicalize_signs(coords: &mut DMatrix<f64>) {
    for mut col in coords.column_iter_mut() {
        let max = col.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if max == 0.0 {
            continue;
        }
        let pivot = col
            .iter()
            .copied()
            .find(|v| v.abs() >= max * (1.0 - 1e-9))
            .unwrap_or(0.0);
        if pivot < 0.0 {
            col.neg_mut();
        }
    }
}

/// Classical MDS of `delta` into `R^c`.
///
/// Column `j` is `v_j * sqrt(max(lambda_j, 0))` for the `j`-th largest
/// eigenpair of [`double_center`]; non-positive eigenvalues give zero columns.
pub fn cmds(delta: &DistanceMatrix, c: usize) -> Result<MirrorEmbedding> {
    let m = delta.len();
    if c == 0 || c > m {
        return Err(MirrorError::InvalidConfig(format!("embedding dimension c={c} must satisfy 1 <= c <= m={m}")));
    }
    let (spectrum, vectors) = sorted_eigen(double_center(delta))?;
    let mut coords = DMatrix::from_fn(m, c, |i, j| {
        let lambda = spectrum[j];
        if lambda > 0.0 {
            vectors[(i, j)] * lambda.sqrt()
        } else {
            0.0
        }
    });
    canonicalize_signs(&mut coords);
    Ok(MirrorEmbedding {
        ids: delta.ids().to_vec(),
        coords,
        spectrum,
    })
}

/// Embedding CSV: header `id,y1..yc`, one row per set.
pub fn write_embedding<W: Write>(emb: &MirrorEmbedding, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let to_err = |e: csv::Error| MirrorError::io("<embedding output>", std::io::Error::other(e));
    let mut header = vec!["id".to_string()];
    header.extend((1..=emb.c()).map(|k| format!("y{k}")));
    w.write_record(&header).map_err(to_err)?;
    for (i, id) in emb.ids.iter().enumerate() {
        let mut rec = vec![id.clone()];
        rec.extend(emb.coords.row(i).iter().map(f64::to_string));
        w.write_record(&rec).map_err(to_err)?;
    }
    w.flush().map_err(|e| MirrorError::io("<embedding output>", e))
}

/// Reads an embedding CSV back as `(ids, coords)`.
pub fn read_embedding<R: Read>(reader: R) -> Result<(Vec<String>, DMatrix<f64>)> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| MirrorError::parse(1, e.to_string()))?.clone();
    if headers.get(0) != Some("id") || headers.len() < 2 {
        return Err(MirrorError::parse(1, "expected header `id,y1..yc`"));
    }
    let c = headers.len() - 1;
    let mut ids = Vec::new();
    let mut data = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| MirrorError::parse(line, e.to_string()))?;
        ids.push(rec.get(0).unwrap_or_default().to_string());
        for cell in rec.iter().skip(1) {
            let v: f64 = cell
                .parse()
                .map_err(|_| MirrorError::parse(line, format!("`{cell}` is not a number")))?;
            if !v.is_finite() {
                return Err(MirrorError::parse(line, "non-finite coordinate"));
            }
            data.push(v);
        }
    }
    let m = ids.len();
    Ok((ids, DMatrix::from_row_slice(m, c, &data)))
}

/// Spectrum CSV: a single `eigenvalue` column, descending.
pub fn write_spectrum<W: Write>(spectrum: &[f64], mut writer: W) -> Result<()> {
    let err = |e| MirrorError::io("<spectrum output>", e);
    writeln!(writer, "eigenvalue").map_err(err)?;
    for v in spectrum {
        writeln!(writer, "{v}").map_err(err)?;
    }
    Ok(())
}
