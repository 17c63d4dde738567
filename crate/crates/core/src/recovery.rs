//! Parameter recovery for unlabeled sample sets.
//!
//! The unlabeled set is embedded jointly with the labeled ones; the
//! labeled rows define a piecewise-linear surface over the parameter hull
//! and the estimate is the hull point whose surface value is nearest to
//! the unlabeled row. On each simplex the objective is a convex quadratic
//! in the barycentric weights, so its exact minimum sits in the relative
//! interior of one face and is found by enumerating faces.

use std::io::Write;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::dataset::{Dataset, ParameterVector, SampleSet};
use crate::embedding::{cmds, MirrorEmbedding};
use crate::error::{MirrorError, Result};
use crate::surface::{MirrorSurface, ParamScaling};
use crate::transport::{distance_matrix, DistanceMatrix};

/// Relative pivot below which a face's Gram matrix counts as singular.
const FACE_PIVOT_TOL: f64 = 1e-12;
/// Slack on barycentric feasibility of a face solution.
const FEASIBILITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryResult {
    pub x_hat: ParameterVector,
    /// `||f(x_hat) - target||`.
    pub residual: f64,
    /// Simplex holding `x_hat`.
    pub simplex: usize,
    /// `x_hat` lies on the hull boundary.
    pub on_boundary: bool,
    /// The unlabeled set's mirror value.
    pub mirror_point: Vec<f64>,
}

/// One leave-one-out iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct HeldOut {
    pub id: String,
    pub x_true: ParameterVector,
    pub result: RecoveryResult,
    /// The held-out point lies on the boundary of the full parameter hull.
    pub on_full_hull: bool,
    /// The held-out point is outside the hull of the remaining points, so
    /// exact recovery is impossible.
    pub outside_reduced_hull: bool,
}

impl HeldOut {
    pub fn error(&self) -> f64 {
        euclid(self.x_true.as_slice(), self.result.x_hat.as_slice())
    }
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// CMDS of the `m + 1` sets `labeled ++ [unlabeled]`; the last row is the
/// unlabeled set's mirror value.
pub fn joint_embed(labeled: &[SampleSet], unlabeled: &SampleSet, p: f64, c: usize) -> Result<MirrorEmbedding> {
    let mut sets = labeled.to_vec();
    sets.push(unlabeled.clone());
    cmds(&distance_matrix(&sets, p)?, c)
}

struct Candidate {
    objective: f64,
    simplex: usize,
    lambda: Vec<f64>,
    x: Vec<f64>,
}

/// Minimize `||sum_j lambda_j y_j - target||^2` over the probability simplex.
/// Returns `(objective, lambda)`; ties between faces go to the
/// lexicographically smallest parameter point.
fn minimize_on_simplex(
    values: &[&[f64]],
    vertices: &[&[f64]],
    target: &[f64],
    tol: f64,
) -> (f64, Vec<f64>, Vec<f64>) {
    let k = values.len();
    let mut best: Option<(f64, Vec<f64>, Vec<f64>)> = None;
    for mask in 1u32..(1 << k) {
        let face: Vec<usize> = (0..k).filter(|j| mask & (1 << j) != 0).collect();
        let Some(lambda) = solve_face(values, target, &face, k) else { continue };
        let objective = objective(values, &lambda, target);
        let x = combine(vertices, &lambda);
        let better = match &best {
            None => true,
            Some((b, _, bx)) => objective < b - tol || (objective <= b + tol && lex_less(&x, bx)),
        };
        if better {
            best = Some((objective, lambda, x));
        }
    }
    best.expect("vertex faces are always feasible")
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).find(|(x, y)| x != y).is_some_and(|(x, y)| x < y)
}

fn combine(points: &[&[f64]], lambda: &[f64]) -> Vec<f64> {
    let dim = points[0].len();
    (0..dim)
        .map(|r| points.iter().zip(lambda).map(|(p, l)| l * p[r]).sum())
        .collect()
}

fn objective(values: &[&[f64]], lambda: &[f64], target: &[f64]) -> f64 {
    combine(values, lambda)
        .iter()
        .zip(target)
        .map(|(a, b)| (a - b) * (a - b))
        .sum()
}

/// Affine least squares on the face spanned by `face`; `None` if the face is
/// degenerate or its minimizer leaves the face.
fn solve_face(values: &[&[f64]], target: &[f64], face: &[usize], k: usize) -> Option<Vec<f64>> {
    let mut lambda = vec![0.0; k];
    let base = face[0];
    if face.len() == 1 {
        lambda[base] = 1.0;
        return Some(lambda);
    }
    let c = target.len();
    let e = DMatrix::from_fn(c, face.len() - 1, |r, j| values[face[j + 1]][r] - values[base][r]);
    let r0 = DVector::from_fn(c, |r, _| target[r] - values[base][r]);
    let gram = e.transpose() * &e;
    let max_diag = gram.diagonal().max();
    if !(max_diag > 0.0) {
        return None;
    }
    let chol = gram.clone().cholesky()?;
    let min_pivot = chol.l_dirty().diagonal().min();
    if min_pivot * min_pivot <= FACE_PIVOT_TOL * max_diag {
        return None;
    }
    let mu = chol.solve(&(e.transpose() * r0));
    let rest: f64 = mu.iter().sum();
    if mu.iter().any(|&v| v < -FEASIBILITY_TOL) || 1.0 - rest < -FEASIBILITY_TOL {
        return None;
    }
    for (j, &v) in mu.iter().enumerate() {
        lambda[face[j + 1]] = v.max(0.0);
    }
    lambda[base] = (1.0 - rest).max(0.0);
    let sum: f64 = lambda.iter().sum();
    lambda.iter_mut().for_each(|l| *l /= sum);
    Some(lambda)
}

/// Nearest point on `surface` to `target`, searched over the whole hull.
///
/// Equal minima resolve to the lowest simplex id, then the
/// lexicographically smallest parameter point.
pub fn recover_on_surface(surface: &MirrorSurface, target: &[f64]) -> Result<RecoveryResult> {
    if target.len() != surface.c() {
        return Err(MirrorError::DimensionMismatch(format!(
            "target of length {} for a surface with c={}",
            target.len(),
            surface.c()
        )));
    }
    let tri = surface.triangulation();
    let vals = surface.values();
    let rows: Vec<Vec<f64>> = (0..vals.nrows()).map(|i| vals.row(i).iter().copied().collect()).collect();
    let magnitude = rows
        .iter()
        .chain(std::iter::once(&target.to_vec()))
        .map(|r| r.iter().map(|v| v * v).sum::<f64>())
        .fold(0.0, f64::max);
    let tol = 1e-12 * (1.0 + magnitude);

    let mut best: Option<Candidate> = None;
    for (id, s) in tri.simplices().iter().enumerate() {
        let values: Vec<&[f64]> = s.iter().map(|&v| rows[v].as_slice()).collect();
        let vertices: Vec<&[f64]> = s.iter().map(|&v| tri.point(v)).collect();
        let (objective, lambda, x) = minimize_on_simplex(&values, &vertices, target, tol);
        // ascending ids: a later simplex only wins on a strictly smaller objective
        if best.as_ref().map_or(true, |b| objective < b.objective - tol) {
            best = Some(Candidate {
                objective,
                simplex: id,
                lambda,
                x,
            });
        }
    }
    let best = best.ok_or_else(|| MirrorError::Empty("triangulation has no simplices".into()))?;
    let fitted = surface.combine(best.simplex, &best.lambda);
    Ok(RecoveryResult {
        on_boundary: tri.on_hull_boundary(&best.x),
        x_hat: ParameterVector::new(best.x)?,
        residual: euclid(&fitted, target),
        simplex: best.simplex,
        mirror_point: target.to_vec(),
    })
}

fn param_rows(params: &[ParameterVector], scaling: &ParamScaling) -> Vec<Vec<f64>> {
    params.iter().map(|p| scaling.apply(p.as_slice())).collect()
}

/// Recover the parameter of the last row of `psi` from a surface fitted to
/// the first `m` rows at `params`.
pub fn recover_parameter(psi: &MirrorEmbedding, params: &[ParameterVector]) -> Result<RecoveryResult> {
    let d = params.first().map_or(0, ParameterVector::dim);
    recover_parameter_scaled(psi, params, &ParamScaling::identity(d))
}

/// As [`recover_parameter`], triangulating and searching in the scaled
/// parameter space and reporting `x_hat` in original units.
pub fn recover_parameter_scaled(
    psi: &MirrorEmbedding,
    params: &[ParameterVector],
    scaling: &ParamScaling,
) -> Result<RecoveryResult> {
    let m = params.len();
    if psi.m() != m + 1 {
        return Err(MirrorError::DimensionMismatch(format!(
            "embedding has {} rows, expected m + 1 = {}",
            psi.m(),
            m + 1
        )));
    }
    let values = psi.coords.rows(0, m).into_owned();
    let surface = MirrorSurface::new(&param_rows(params, scaling), values)?;
    let mut result = recover_on_surface(&surface, &psi.row(m))?;
    result.x_hat = ParameterVector::new(scaling.invert(result.x_hat.as_slice()))?;
    Ok(result)
}

/// Recover every set in `delta` whose id is not in `labeled`.
///
/// `labeled` pairs ids with parameters. Each unlabeled set is embedded with
/// all labeled sets and nothing else.
pub fn recover_from_matrix(
    delta: &DistanceMatrix,
    labeled: &[(String, ParameterVector)],
    c: usize,
    scaling: &ParamScaling,
) -> Result<Vec<(String, RecoveryResult)>> {
    let index = |id: &str| delta.ids().iter().position(|x| x == id);
    let mut lab_idx = Vec::with_capacity(labeled.len());
    for (id, _) in labeled {
        lab_idx.push(index(id).ok_or_else(|| MirrorError::InvalidConfig(format!("labeled id `{id}` not in matrix")))?);
    }
    let params: Vec<ParameterVector> = labeled.iter().map(|(_, p)| p.clone()).collect();
    let targets: Vec<usize> = (0..delta.len()).filter(|i| !lab_idx.contains(i)).collect();
    targets
        .par_iter()
        .map(|&u| {
            let mut order = lab_idx.clone();
            order.push(u);
            let psi = cmds(&delta.reordered(&order)?, c)?;
            let r = recover_parameter_scaled(&psi, &params, scaling)?;
            Ok((delta.ids()[u].clone(), r))
        })
        .collect()
}

/// Recover each unlabeled set of `ds` against all labeled sets.
/// `c` defaults to `d`.
pub fn recover_unlabeled(
    ds: &Dataset,
    p: f64,
    c: Option<usize>,
    scaling: &ParamScaling,
) -> Result<Vec<(String, RecoveryResult)>> {
    let d = ds.d().ok_or_else(|| MirrorError::Empty("no labeled sets".into()))?;
    let sets: Vec<SampleSet> = ds.sets().cloned().collect();
    let delta = distance_matrix(&sets, p)?;
    let labeled: Vec<(String, ParameterVector)> = ds
        .labeled()
        .iter()
        .map(|s| (s.id().to_string(), s.params().expect("labeled").clone()))
        .collect();
    recover_from_matrix(&delta, &labeled, c.unwrap_or(d), scaling)
}

/// Hold out each labeled set in turn and recover it from the others.
/// `c` defaults to `d`.
pub fn leave_one_out(ds: &Dataset, p: f64, c: Option<usize>) -> Result<Vec<HeldOut>> {
    let d = ds.d().ok_or_else(|| MirrorError::Empty("no labeled sets".into()))?;
    let delta = distance_matrix(ds.labeled(), p)?;
    let params: Vec<ParameterVector> = ds.params().into_iter().cloned().collect();
    leave_one_out_from_matrix(&delta, &params, c.unwrap_or(d), &ParamScaling::identity(d))
}

/// Leave-one-out on a precomputed labeled distance matrix; `params[i]`
/// belongs to row `i`.
pub fn leave_one_out_from_matrix(
    delta: &DistanceMatrix,
    params: &[ParameterVector],
    c: usize,
    scaling: &ParamScaling,
) -> Result<Vec<HeldOut>> {
    let m = params.len();
    if delta.len() != m {
        return Err(MirrorError::DimensionMismatch(format!("{} matrix rows for {m} parameters", delta.len())));
    }
    let d = params.first().map_or(0, ParameterVector::dim);
    if m < d + 3 {
        return Err(MirrorError::DegenerateInput(format!("leave-one-out needs m >= d + 3 = {}, got {m}", d + 3)));
    }
    let scaled = param_rows(params, scaling);
    let full = crate::surface::delaunay_triangulate(&scaled)?;

    (0..m)
        .into_par_iter()
        .map(|i| {
            let order: Vec<usize> = (0..m).filter(|&k| k != i).chain(std::iter::once(i)).collect();
            let rest: Vec<ParameterVector> = order[..m - 1].iter().map(|&k| params[k].clone()).collect();
            let psi = cmds(&delta.reordered(&order)?, c)?;
            let result = recover_parameter_scaled(&psi, &rest, scaling)?;
            let reduced = crate::surface::delaunay_triangulate(&param_rows(&rest, scaling))?;
            Ok(HeldOut {
                id: delta.ids()[i].clone(),
                x_true: params[i].clone(),
                result,
                on_full_hull: full.on_hull_boundary(&scaled[i]),
                outside_reduced_hull: reduced.locate(&scaled[i]).is_none(),
            })
        })
        .collect()
}

/// One line of a recovery report.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow<'a> {
    pub id: &'a str,
    pub x_true: Option<&'a [f64]>,
    pub result: &'a RecoveryResult,
    /// Present in leave-one-out reports only.
    pub truth_on_hull: Option<bool>,
}

/// CSV `id,x_true_1..d,x_hat_1..d,residual,on_boundary`, plus
/// `truth_on_hull` when any row carries it. Unknown truths are blank.
pub fn write_recovery_report<W: Write>(rows: &[ReportRow<'_>], writer: W) -> Result<()> {
    let d = rows.first().map_or(0, |r| r.result.x_hat.dim());
    let hull_col = rows.iter().any(|r| r.truth_on_hull.is_some());
    let to_err = |e: csv::Error| MirrorError::io("<recovery report>", std::io::Error::other(e));
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["id".to_string()];
    header.extend((1..=d).map(|k| format!("x_true_{k}")));
    header.extend((1..=d).map(|k| format!("x_hat_{k}")));
    header.extend(["residual".into(), "on_boundary".into()]);
    if hull_col {
        header.push("truth_on_hull".into());
    }
    w.write_record(&header).map_err(to_err)?;
    for r in rows {
        let mut rec = vec![r.id.to_string()];
        match r.x_true {
            Some(x) => rec.extend(x.iter().map(f64::to_string)),
            None => rec.extend(std::iter::repeat(String::new()).take(d)),
        }
        rec.extend(r.result.x_hat.as_slice().iter().map(f64::to_string));
        rec.push(r.result.residual.to_string());
        rec.push(r.result.on_boundary.to_string());
        if hull_col {
            rec.push(r.truth_on_hull.map(|b| b.to_string()).unwrap_or_default());
        }
        w.write_record(&rec).map_err(to_err)?;
    }
    w.flush().map_err(|e| MirrorError::io("<recovery report>", e))
}
