use std::fmt;
use std::io::{Read, Write};

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::{wasserstein_exact, wasserstein_sorted_values};
use crate::dataset::SampleSet;
use crate::error::{MirrorError, Result};

/// Symmetry tolerance applied when reading an external matrix.
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;

/// How the entries of a [`DistanceMatrix`] were produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Metric {
    Wasserstein { p: f64 },
    /// Supplied by the caller (read from a file, or any other dissimilarity).
    External,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::Wasserstein { p } => write!(f, "w{p}"),
            Metric::External => f.write_str("external"),
        }
    }
}

/// Symmetric, zero-diagonal, non-negative matrix of pairwise dissimilarities.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    ids: Vec<String>,
    values: DMatrix<f64>,
    metric: Metric,
}

impl DistanceMatrix {
    /// Validates exact symmetry, zero diagonal and finite non-negative entries.
    pub fn new(ids: Vec<String>, values: DMatrix<f64>, metric: Metric) -> Result<Self> {
        let m = ids.len();
        if values.nrows() != m || values.ncols() != m {
            return Err(MirrorError::InvalidDistanceMatrix(format!(
                "{} ids for a {}x{} matrix",
                m,
                values.nrows(),
                values.ncols()
            )));
        }
        for i in 0..m {
            if values[(i, i)] != 0.0 {
                return Err(MirrorError::InvalidDistanceMatrix(format!("non-zero diagonal at {i}")));
            }
            for j in 0..m {
                let v = values[(i, j)];
                if !v.is_finite() || v < 0.0 {
                    return Err(MirrorError::InvalidDistanceMatrix(format!("entry ({i},{j}) = {v}")));
                }
                if v != values[(j, i)] {
                    return Err(MirrorError::InvalidDistanceMatrix(format!("asymmetric at ({i},{j})")));
                }
            }
        }
        check_unique(&ids)?;
        Ok(DistanceMatrix { ids, values, metric })
    }

    /// Accepts a nearly symmetric matrix (within `tol`), averaging mirrored
    /// entries and zeroing a near-zero diagonal.
    pub fn symmetrized(ids: Vec<String>, mut values: DMatrix<f64>, metric: Metric, tol: f64) -> Result<Self> {
        let m = ids.len();
        if values.nrows() != m || values.ncols() != m {
            return Err(MirrorError::InvalidDistanceMatrix(format!(
                "{} ids for a {}x{} matrix",
                m,
                values.nrows(),
                values.ncols()
            )));
        }
        for i in 0..m {
            if values[(i, i)].abs() > tol {
                return Err(MirrorError::InvalidDistanceMatrix(format!(
                    "diagonal entry {i} = {}",
                    values[(i, i)]
                )));
            }
            values[(i, i)] = 0.0;
            for j in i + 1..m {
                let (a, b) = (values[(i, j)], values[(j, i)]);
                if !a.is_finite() || !b.is_finite() {
                    return Err(MirrorError::InvalidDistanceMatrix(format!("non-finite entry at ({i},{j})")));
                }
                if (a - b).abs() > tol {
                    return Err(MirrorError::InvalidDistanceMatrix(format!(
                        "asymmetric beyond {tol:e} at ({i},{j}): {a} vs {b}"
                    )));
                }
                let avg = 0.5 * (a + b);
                values[(i, j)] = avg;
                values[(j, i)] = avg;
            }
        }
        Self::new(ids, values, metric)
    }

    /// Build from a full point-to-point distance function.
    pub fn from_fn(ids: Vec<String>, metric: Metric, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let m = ids.len();
        let mut values = DMatrix::zeros(m, m);
        for i in 0..m {
            for j in i + 1..m {
                let v = f(i, j);
                values[(i, j)] = v;
                values[(j, i)] = v;
            }
        }
        Self::new(ids, values, metric)
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[(i, j)]
    }

    /// Rows and columns rearranged so that new index `k` is old index `order[k]`.
    pub fn reordered(&self, order: &[usize]) -> Result<Self> {
        let m = order.len();
        let mut seen = vec![false; self.len()];
        for &k in order {
            if k >= self.len() || std::mem::replace(&mut seen[k], true) {
                return Err(MirrorError::InvalidConfig(format!("bad index {k} in reorder")));
            }
        }
        let values = DMatrix::from_fn(m, m, |i, j| self.values[(order[i], order[j])]);
        let ids = order.iter().map(|&k| self.ids[k].clone()).collect();
        Ok(DistanceMatrix {
            ids,
            values,
            metric: self.metric,
        })
    }

    /// Largest entry (zero for an empty or single-point matrix).
    pub fn max_entry(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

fn check_unique(ids: &[String]) -> Result<()> {
    let mut sorted: Vec<&String> = ids.iter().collect();
    sorted.sort();
    match sorted.windows(2).find(|w| w[0] == w[1]) {
        Some(w) => Err(MirrorError::DuplicateId(w[0].clone())),
        None => Ok(()),
    }
}

/// Pairwise exact `W_p` distances between `sets`.
///
/// Each unordered pair is computed once and mirrored. Pairs may run in
/// parallel; every pair's result lands in its own slot so the output is
/// independent of the worker count.
pub fn distance_matrix(sets: &[SampleSet], p: f64) -> Result<DistanceMatrix> {
    let first = sets
        .first()
        .ok_or_else(|| MirrorError::Empty("no sample sets for a distance matrix".into()))?;
    let (n, q) = (first.n(), first.q());
    for s in sets {
        if s.q() != q {
            return Err(MirrorError::InconsistentSampleDimension {
                id: s.id().to_string(),
                expected: q,
                found: s.q(),
            });
        }
    }
    let offending: Vec<(String, usize)> = sets
        .iter()
        .filter(|s| s.n() != n)
        .map(|s| (s.id().to_string(), s.n()))
        .collect();
    if !offending.is_empty() {
        return Err(MirrorError::UnequalSampleSizes { expected: n, offending });
    }
    if !(p >= 1.0 && p.is_finite()) {
        return Err(MirrorError::InvalidConfig(format!("Wasserstein order p={p} must be a finite value >= 1")));
    }

    let m = sets.len();
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();

    let costs: Vec<f64> = if q == 1 {
        // sort each set once; every pair is then a linear merge
        let sorted: Vec<Vec<f64>> = sets
            .par_iter()
            .map(|s| {
                let mut v = s.data().to_vec();
                v.sort_by(f64::total_cmp);
                v
            })
            .collect();
        pairs
            .par_iter()
            .map(|&(i, j)| wasserstein_sorted_values(&sorted[i], &sorted[j], p))
            .collect()
    } else {
        pairs
            .par_iter()
            .map(|&(i, j)| wasserstein_exact(&sets[i], &sets[j], p).map(|plan| plan.cost))
            .collect::<Result<_>>()?
    };

    let mut values = DMatrix::zeros(m, m);
    for (&(i, j), &c) in pairs.iter().zip(&costs) {
        values[(i, j)] = c;
        values[(j, i)] = c;
    }
    let ids = sets.iter().map(|s| s.id().to_string()).collect();
    DistanceMatrix::new(ids, values, Metric::Wasserstein { p })
}

/// CSV: a row of ids followed by `m` rows of `m` numbers.
pub fn write_distance_matrix<W: Write>(dm: &DistanceMatrix, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let to_err = |e: csv::Error| MirrorError::io("<distance matrix output>", std::io::Error::other(e));
    w.write_record(dm.ids()).map_err(to_err)?;
    for i in 0..dm.len() {
        w.write_record((0..dm.len()).map(|j| dm.get(i, j).to_string()))
            .map_err(to_err)?;
    }
    w.flush().map_err(|e| MirrorError::io("<distance matrix output>", e))
}

/// Reads the CSV written by [`write_distance_matrix`] (or any external
/// source), checking symmetry within [`SYMMETRY_TOLERANCE`] and averaging
/// the two triangles.
pub fn read_distance_matrix<R: Read>(reader: R) -> Result<DistanceMatrix> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let mut records = rdr.records();
    let header = records
        .next()
        .ok_or_else(|| MirrorError::parse(1, "empty distance matrix file"))?
        .map_err(|e| MirrorError::parse(1, e.to_string()))?;
    let ids: Vec<String> = header.iter().map(str::to_string).collect();
    let m = ids.len();
    if ids.iter().any(String::is_empty) {
        return Err(MirrorError::parse(1, "empty id in header"));
    }

    let mut values = DMatrix::zeros(m, m);
    let mut rows = 0;
    for (i, rec) in records.enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| MirrorError::parse(line, e.to_string()))?;
        if rows == m {
            return Err(MirrorError::parse(line, format!("more than {m} matrix rows")));
        }
        if rec.len() != m {
            return Err(MirrorError::parse(line, format!("expected {m} entries, found {}", rec.len())));
        }
        for (j, cell) in rec.iter().enumerate() {
            let v: f64 = cell
                .parse()
                .map_err(|_| MirrorError::parse(line, format!("`{cell}` is not a number")))?;
            if !v.is_finite() || v < 0.0 {
                return Err(MirrorError::parse(line, format!("entry {v} must be finite and non-negative")));
            }
            values[(i, j)] = v;
        }
        rows += 1;
    }
    if rows != m {
        return Err(MirrorError::parse(rows + 1, format!("expected {m} matrix rows, found {rows}")));
    }
    DistanceMatrix::symmetrized(ids, values, Metric::External, SYMMETRY_TOLERANCE)
}
