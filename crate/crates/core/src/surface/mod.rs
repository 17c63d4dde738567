//! The mirror as a function of the parameter: a piecewise-linear Delaunay
//! interpolant of the embedded points, or a penalized tensor-product
//! B-spline smoother.
//!
//! Neither surface extrapolates. Queries outside the convex hull of the
//! observed parameters evaluate to `None`.

mod bspline;
pub(crate) mod delaunay;
mod export;

pub use bspline::{fit_bspline, BSplineConfig, BSplineSurface};
pub use export::{grid_points, write_surface_grid, write_triangulation};

use nalgebra::DMatrix;

use crate::error::{MirrorError, Result};
use delaunay::{coordinate_scale, orient, triangulate_1d, triangulate_2d};

/// Barycentric coordinates below this count as outside a simplex.
pub const BARYCENTRIC_TOL: f64 = 1e-12;

/// Delaunay triangulation of `m` points in `R^d`, `d` in {1, 2}.
///
/// Simplex vertex lists are counter-clockwise for `d = 2`, start at their
/// lowest index, and are sorted, so simplex ids are reproducible.
#[derive(Debug, Clone, PartialEq)]
pub struct Triangulation {
    points: Vec<Vec<f64>>,
    simplices: Vec<Vec<usize>>,
    hull: Vec<usize>,
    scale: f64,
}

/// Triangulate `points` (each of length `d`).
pub fn delaunay_triangulate(points: &[Vec<f64>]) -> Result<Triangulation> {
    let d = points.first().map_or(0, Vec::len);
    if points.iter().any(|p| p.len() != d) {
        return Err(MirrorError::DimensionMismatch("points of differing dimension".into()));
    }
    if points.iter().flatten().any(|v| !v.is_finite()) {
        return Err(MirrorError::NonFinite("triangulation points".into()));
    }
    let raw = match d {
        0 => return Err(MirrorError::Empty("no points to triangulate".into())),
        1 => triangulate_1d(points)?,
        2 => triangulate_2d(points)?,
        _ => return Err(MirrorError::UnsupportedDimension(d)),
    };
    Ok(Triangulation {
        points: points.to_vec(),
        simplices: raw.simplices,
        hull: raw.hull,
        scale: coordinate_scale(points),
    })
}

impl Triangulation {
    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    pub fn simplex(&self, id: usize) -> &[usize] {
        &self.simplices[id]
    }

    /// Number of simplices `K`.
    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Hull vertices; counter-clockwise for `d = 2`, `[min, max]` for `d = 1`.
    pub fn hull(&self) -> &[usize] {
        &self.hull
    }

    /// Largest bounding-box extent of the points.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Unclamped barycentric coordinates of `x` in simplex `id`.
    pub fn raw_barycentric(&self, id: usize, x: &[f64]) -> Vec<f64> {
        let s = &self.simplices[id];
        if self.dim() == 1 {
            let (a, b) = (self.points[s[0]][0], self.points[s[1]][0]);
            let t = (x[0] - a) / (b - a);
            vec![1.0 - t, t]
        } else {
            let v = |k: usize| [self.points[s[k]][0], self.points[s[k]][1]];
            let p = [x[0], x[1]];
            let area = orient(v(0), v(1), v(2));
            vec![
                orient(p, v(1), v(2)) / area,
                orient(v(0), p, v(2)) / area,
                orient(v(0), v(1), p) / area,
            ]
        }
    }

    /// Lowest simplex id containing `x`, or `None` outside the hull.
    pub fn locate(&self, x: &[f64]) -> Option<usize> {
        if x.len() != self.dim() {
            return None;
        }
        (0..self.simplices.len()).find(|&id| {
            self.raw_barycentric(id, x)
                .iter()
                .all(|&l| l >= -BARYCENTRIC_TOL)
        })
    }

    /// Barycentric coordinates of `x` in simplex `id`, clamped to `[0, 1]`
    /// and renormalized to sum to one.
    pub fn barycentric(&self, id: usize, x: &[f64]) -> Result<Vec<f64>> {
        if id >= self.simplices.len() {
            return Err(MirrorError::InvalidConfig(format!("simplex id {id} out of range")));
        }
        if x.len() != self.dim() {
            return Err(MirrorError::DimensionMismatch(format!("query of length {} for d={}", x.len(), self.dim())));
        }
        let raw = self.raw_barycentric(id, x);
        let min = raw.iter().copied().fold(f64::INFINITY, f64::min);
        if !(min >= -BARYCENTRIC_TOL) {
            return Err(MirrorError::OutsideSimplex { simplex: id, min_coord: min });
        }
        let clamped: Vec<f64> = raw.iter().map(|l| l.clamp(0.0, 1.0)).collect();
        let sum: f64 = clamped.iter().sum();
        Ok(clamped.iter().map(|l| l / sum).collect())
    }

    /// Whether `x` lies on the hull boundary within `1e-9 * scale`.
    pub fn on_hull_boundary(&self, x: &[f64]) -> bool {
        let tol = 1e-9 * self.scale;
        if self.dim() == 1 {
            return self.hull.iter().any(|&h| (self.points[h][0] - x[0]).abs() <= tol);
        }
        let h = self.hull.len();
        (0..h).any(|t| {
            let a = &self.points[self.hull[t]];
            let b = &self.points[self.hull[(t + 1) % h]];
            point_segment_distance(x, a, b) <= tol
        })
    }

    /// Signed d-volume of simplex `id` (area for triangles, length for segments).
    pub fn volume(&self, id: usize) -> f64 {
        let s = &self.simplices[id];
        if self.dim() == 1 {
            (self.points[s[1]][0] - self.points[s[0]][0]).abs()
        } else {
            let v = |k: usize| [self.points[s[k]][0], self.points[s[k]][1]];
            0.5 * orient(v(0), v(1), v(2))
        }
    }
}

fn point_segment_distance(x: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((x[0] - a[0]) * dx + (x[1] - a[1]) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (x[0] - a[0] - t * dx).hypot(x[1] - a[1] - t * dy)
}

/// Per-axis affine map of parameters onto `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamScaling {
    pub offset: Vec<f64>,
    pub scale: Vec<f64>,
}

impl ParamScaling {
    /// Fit to the bounding box of `points`. Constant axes keep unit scale.
    pub fn fit(points: &[Vec<f64>]) -> Self {
        let d = points.first().map_or(0, Vec::len);
        let mut offset = Vec::with_capacity(d);
        let mut scale = Vec::with_capacity(d);
        for k in 0..d {
            let lo = points.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min);
            let hi = points.iter().map(|p| p[k]).fold(f64::NEG_INFINITY, f64::max);
            offset.push(lo);
            scale.push(if hi > lo { hi - lo } else { 1.0 });
        }
        ParamScaling { offset, scale }
    }

    pub fn identity(d: usize) -> Self {
        ParamScaling {
            offset: vec![0.0; d],
            scale: vec![1.0; d],
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.offset.iter().zip(&self.scale))
            .map(|(v, (o, s))| (v - o) / s)
            .collect()
    }

    pub fn invert(&self, y: &[f64]) -> Vec<f64> {
        y.iter()
            .zip(self.offset.iter().zip(&self.scale))
            .map(|(v, (o, s))| v * s + o)
            .collect()
    }
}

/// Piecewise-linear interpolant of mirror values over a triangulation.
#[derive(Debug, Clone, PartialEq)]
pub struct MirrorSurface {
    tri: Triangulation,
    /// `m x c`, row `i` belongs to `tri.point(i)`.
    values: DMatrix<f64>,
}

impl MirrorSurface {
    /// Triangulate `points` and attach one row of `values` to each.
    pub fn new(points: &[Vec<f64>], values: DMatrix<f64>) -> Result<Self> {
        let tri = delaunay_triangulate(points)?;
        Self::from_triangulation(tri, values)
    }

    pub fn from_triangulation(tri: Triangulation, values: DMatrix<f64>) -> Result<Self> {
        if values.nrows() != tri.points().len() {
            return Err(MirrorError::DimensionMismatch(format!(
                "{} value rows for {} points",
                values.nrows(),
                tri.points().len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(MirrorError::NonFinite("surface values".into()));
        }
        Ok(MirrorSurface { tri, values })
    }

    pub fn triangulation(&self) -> &Triangulation {
        &self.tri
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn c(&self) -> usize {
        self.values.ncols()
    }

    /// `sum_j lambda_j * value(v_j)` inside simplex `id`.
    pub fn combine(&self, id: usize, lambda: &[f64]) -> Vec<f64> {
        let s = self.tri.simplex(id);
        (0..self.c())
            .map(|k| s.iter().zip(lambda).map(|(&v, l)| l * self.values[(v, k)]).sum())
            .collect()
    }

    /// Interpolant value at `x`, or `None` outside the hull.
    pub fn interpolate(&self, x: &[f64]) -> Option<Vec<f64>> {
        let id = self.tri.locate(x)?;
        let lambda = self.tri.barycentric(id, x).ok()?;
        Some(self.combine(id, &lambda))
    }

    /// Interpolant value at `x` using a specific simplex.
    pub fn interpolate_in(&self, id: usize, x: &[f64]) -> Result<Vec<f64>> {
        let lambda = self.tri.barycentric(id, x)?;
        Ok(self.combine(id, &lambda))
    }

    /// Jacobian (`c x d`) of the affine piece on simplex `id`.
    pub fn jacobian(&self, id: usize) -> DMatrix<f64> {
        let s = self.tri.simplex(id);
        let d = self.tri.dim();
        let c = self.c();
        let edge = DMatrix::from_fn(d, d, |r, k| self.tri.point(s[k + 1])[r] - self.tri.point(s[0])[r]);
        let rise = DMatrix::from_fn(c, d, |r, k| self.values[(s[k + 1], r)] - self.values[(s[0], r)]);
        let inv = edge
            .try_inverse()
            .expect("triangulation simplices are non-degenerate");
        rise * inv
    }

    /// Largest spectral norm of the per-simplex Jacobians: the Lipschitz
    /// constant of the interpolant over the hull.
    pub fn lipschitz_constant(&self) -> f64 {
        (0..self.tri.len())
            .map(|id| spectral_norm(&self.jacobian(id)))
            .fold(0.0, f64::max)
    }

    /// Ratio of largest to smallest singular value of each simplex's
    /// Jacobian; infinite where the piece is not injective.
    pub fn jacobian_condition_numbers(&self) -> Vec<f64> {
        (0..self.tri.len())
            .map(|id| {
                let sv = self.jacobian(id).singular_values();
                let max = sv.iter().copied().fold(0.0, f64::max);
                let min = if sv.len() < self.tri.dim() {
                    0.0
                } else {
                    sv.iter().copied().fold(f64::INFINITY, f64::min)
                };
                if min > 0.0 {
                    max / min
                } else {
                    f64::INFINITY
                }
            })
            .collect()
    }
}

fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    m.singular_values().iter().copied().fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri_pts() -> Vec<Vec<f64>> {
        vec![vec![0.0, 0.0], vec![4.0, 0.0], vec![0.0, 4.0], vec![1.0, 1.0]]
    }

    #[test]
    fn locate_interior_vertex_and_outside() {
        let t = delaunay_triangulate(&tri_pts()).unwrap();
        // point (0.5, 2.0) lies strictly inside exactly one triangle
        let id = t.locate(&[0.5, 2.0]).unwrap();
        let l = t.raw_barycentric(id, &[0.5, 2.0]);
        assert!(l.iter().all(|&v| v > 0.0));
        // the interior vertex belongs to all three triangles -> id 0
        assert_eq!(t.locate(&[1.0, 1.0]), Some(0));
        assert_eq!(t.locate(&[10.0, 10.0]), None);
        assert_eq!(t.locate(&[-1e-6, 0.0]), None);
    }

    #[test]
    fn barycentric_examples() {
        let t = delaunay_triangulate(&[vec![0.0, 0.0], vec![3.0, 0.0], vec![0.0, 3.0]]).unwrap();
        assert_eq!(t.barycentric(0, &[0.0, 0.0]).unwrap(), vec![1.0, 0.0, 0.0]);
        let c = t.barycentric(0, &[1.0, 1.0]).unwrap();
        assert!(c.iter().all(|v| (v - 1.0 / 3.0).abs() < 1e-15));
        let mid = t.barycentric(0, &[1.5, 0.0]).unwrap();
        assert_eq!(mid, vec![0.5, 0.5, 0.0]);
        assert!(matches!(t.barycentric(0, &[3.0, 3.0]), Err(MirrorError::OutsideSimplex { .. })));
    }

    #[test]
    fn unsupported_dimension() {
        let p = vec![vec![0.0, 0.0, 0.0]; 4];
        assert!(matches!(delaunay_triangulate(&p), Err(MirrorError::UnsupportedDimension(3))));
    }

    #[test]
    fn interpolate_is_exact_at_vertices_and_centroid_is_mean() {
        let pts = tri_pts();
        let values = DMatrix::from_row_slice(4, 2, &[1.0, -1.0, 2.5, 0.0, -3.0, 7.0, 0.25, 0.5]);
        let s = MirrorSurface::new(&pts, values.clone()).unwrap();
        for (i, p) in pts.iter().enumerate() {
            let v = s.interpolate(p).unwrap();
            assert_eq!(v, values.row(i).iter().copied().collect::<Vec<_>>());
        }
        let simplex = s.triangulation().simplex(1).to_vec();
        let centroid: Vec<f64> = (0..2)
            .map(|k| simplex.iter().map(|&v| pts[v][k]).sum::<f64>() / 3.0)
            .collect();
        let got = s.interpolate(&centroid).unwrap();
        for k in 0..2 {
            let mean = simplex.iter().map(|&v| values[(v, k)]).sum::<f64>() / 3.0;
            assert!((got[k] - mean).abs() < 1e-12);
        }
        assert!(s.interpolate(&[5.0, 5.0]).is_none());
    }

    #[test]
    fn one_dimensional_interpolation() {
        let pts = vec![vec![0.0], vec![2.0], vec![1.0]];
        let values = DMatrix::from_row_slice(3, 1, &[0.0, 4.0, 1.0]);
        let s = MirrorSurface::new(&pts, values).unwrap();
        assert_eq!(s.interpolate(&[0.5]).unwrap(), vec![0.5]);
        assert_eq!(s.interpolate(&[1.5]).unwrap(), vec![2.5]);
        assert!(s.interpolate(&[2.5]).is_none());
        assert!(s.triangulation().on_hull_boundary(&[2.0]));
        assert!(!s.triangulation().on_hull_boundary(&[1.0]));
    }

    #[test]
    fn jacobian_of_affine_data_is_exact() {
        let pts = tri_pts();
        let f = |p: &[f64]| [2.0 * p[0] - p[1] + 1.0, 0.5 * p[1]];
        let values = DMatrix::from_fn(4, 2, |i, k| f(&pts[i])[k]);
        let s = MirrorSurface::new(&pts, values).unwrap();
        let expected = DMatrix::from_row_slice(2, 2, &[2.0, -1.0, 0.0, 0.5]);
        for id in 0..s.triangulation().len() {
            assert!((s.jacobian(id) - &expected).abs().max() < 1e-12);
        }
        let lip = s.lipschitz_constant();
        assert!((lip - expected.singular_values().max()).abs() < 1e-12);
        assert!(s.jacobian_condition_numbers().iter().all(|c| c.is_finite()));
    }

    #[test]
    fn gradient_bounds_edge_slopes_but_not_pairwise_slopes() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        let values = DMatrix::from_row_slice(3, 1, &[0.0, 1.0, 1.0]);
        let s = MirrorSurface::new(&pts, values).unwrap();
        // every pairwise slope is at most 1, the gradient is (1, 1)
        assert!((s.lipschitz_constant() - 2f64.sqrt()).abs() < 1e-12);

        let pts: Vec<Vec<f64>> = (0..30)
            .map(|i| vec![((i * 37) % 101) as f64 / 101.0, ((i * 59) % 103) as f64 / 103.0])
            .collect();
        let values = DMatrix::from_fn(30, 2, |i, k| (((i + 3 * k) * 7919) % 17) as f64);
        let s = MirrorSurface::new(&pts, values.clone()).unwrap();
        for (id, simplex) in s.triangulation().simplices().iter().enumerate() {
            let norm = s.jacobian(id).singular_values().max();
            for a in 0..3 {
                let (u, v) = (simplex[a], simplex[(a + 1) % 3]);
                let run = ((pts[u][0] - pts[v][0]).powi(2) + (pts[u][1] - pts[v][1]).powi(2)).sqrt();
                let rise = (values.row(u) - values.row(v)).norm();
                assert!(norm >= rise / run * (1.0 - 1e-12));
            }
        }
    }

    #[test]
    fn scaling_round_trip() {
        let pts = vec![vec![0.1, 10.0], vec![0.9, 90.0], vec![0.5, 50.0]];
        let sc = ParamScaling::fit(&pts);
        assert_eq!(sc.apply(&[0.1, 10.0]), vec![0.0, 0.0]);
        let y = sc.apply(&[0.5, 50.0]);
        assert!((y[0] - 0.5).abs() < 1e-15 && (y[1] - 0.5).abs() < 1e-15);
        let back = sc.invert(&y);
        assert!((back[0] - 0.5).abs() < 1e-15 && (back[1] - 50.0).abs() < 1e-12);
    }
}
