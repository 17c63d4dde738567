//! Delaunay triangulation of parameter points for `d = 1` and `d = 2`.
//!
//! The planar case inserts points in lexicographic order, so every new
//! point lies outside the current hull. It is joined to the hull edges it
//! sees and the edges opposite it are legalized by Lawson flips. Cocircular
//! quadrilaterals keep the diagonal whose lowest endpoint index is smaller.

use std::collections::HashMap;

use crate::error::{MirrorError, Result};

/// Relative epsilon for the geometric predicates.
pub const PREDICATE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Tolerances {
    pub orient: f64,
    pub incircle: f64,
}

impl Tolerances {
    pub fn for_scale(scale: f64) -> Self {
        Tolerances {
            orient: PREDICATE_EPS * scale * scale,
            incircle: PREDICATE_EPS * scale.powi(4),
        }
    }
}

/// Twice the signed area of `(a, b, c)`; positive when counter-clockwise.
#[inline]
pub(crate) fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

/// Positive when `d` lies inside the circumcircle of the counter-clockwise
/// triangle `(a, b, c)`.
#[inline]
pub(crate) fn incircle(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> f64 {
    let (adx, ady) = (a[0] - d[0], a[1] - d[1]);
    let (bdx, bdy) = (b[0] - d[0], b[1] - d[1]);
    let (cdx, cdy) = (c[0] - d[0], c[1] - d[1]);
    let ad = adx * adx + ady * ady;
    let bd = bdx * bdx + bdy * bdy;
    let cd = cdx * cdx + cdy * cdy;
    adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx)
}

/// Largest bounding-box extent, floored at 1e-300 to keep tolerances positive.
pub(crate) fn coordinate_scale(points: &[Vec<f64>]) -> f64 {
    let d = points.first().map_or(0, Vec::len);
    let mut scale = 0.0f64;
    for k in 0..d {
        let lo = points.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min);
        let hi = points.iter().map(|p| p[k]).fold(f64::NEG_INFINITY, f64::max);
        scale = scale.max(hi - lo);
    }
    scale.max(1e-300)
}

pub(crate) struct RawTriangulation {
    pub simplices: Vec<Vec<usize>>,
    pub hull: Vec<usize>,
}

pub(crate) fn triangulate_1d(points: &[Vec<f64>]) -> Result<RawTriangulation> {
    let m = points.len();
    if m < 2 {
        return Err(MirrorError::DegenerateInput(format!("{m} point(s); d=1 needs at least 2")));
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| points[i][0].total_cmp(&points[j][0]).then(i.cmp(&j)));
    let scale = coordinate_scale(points);
    for w in order.windows(2) {
        if points[w[1]][0] - points[w[0]][0] <= PREDICATE_EPS * scale {
            return Err(MirrorError::DegenerateInput(format!("points {} and {} coincide", w[0], w[1])));
        }
    }
    Ok(RawTriangulation {
        simplices: order.windows(2).map(|w| w.to_vec()).collect(),
        hull: vec![order[0], order[m - 1]],
    })
}

struct Builder<'a> {
    pts: &'a [[f64; 2]],
    tol: Tolerances,
    triangles: Vec<[usize; 3]>,
    /// directed edge (a, b) -> triangle holding it counter-clockwise
    edges: HashMap<(usize, usize), usize>,
    stack: Vec<(usize, usize, usize)>,
}

impl<'a> Builder<'a> {
    fn add_triangle(&mut self, t: [usize; 3]) {
        let id = self.triangles.len();
        self.triangles.push(t);
        self.register(id);
        // queue each edge with its opposite apex
        self.stack.push((t[0], t[1], t[2]));
        self.stack.push((t[1], t[2], t[0]));
        self.stack.push((t[2], t[0], t[1]));
    }

    fn register(&mut self, id: usize) {
        let t = self.triangles[id];
        for k in 0..3 {
            self.edges.insert((t[k], t[(k + 1) % 3]), id);
        }
    }

    /// Flip `(a, b)` when it is not locally Delaunay. `p` is the apex of
    /// the triangle holding `a -> b`.
    fn legalize(&mut self) {
        while let Some((a, b, p)) = self.stack.pop() {
            let Some(&t1) = self.edges.get(&(a, b)) else { continue };
            if !self.triangles[t1].contains(&p) {
                continue; // stale entry, the edge was flipped away
            }
            let Some(&t2) = self.edges.get(&(b, a)) else { continue };
            let w = *self.triangles[t2]
                .iter()
                .find(|&&v| v != a && v != b)
                .expect("triangle has a third vertex");

            let (pa, pb, pp, pw) = (self.pts[a], self.pts[b], self.pts[p], self.pts[w]);
            let ic = incircle(pa, pb, pp, pw);
            let flip = if ic > self.tol.incircle {
                true
            } else if ic >= -self.tol.incircle {
                // cocircular: prefer the diagonal with the smaller lowest endpoint,
                // provided the quadrilateral is strictly convex
                let convex = orient(pp, pw, pa).abs() > self.tol.orient
                    && orient(pp, pw, pb).abs() > self.tol.orient
                    && orient(pp, pw, pa).signum() != orient(pp, pw, pb).signum();
                convex && p.min(w) < a.min(b)
            } else {
                false
            };
            if !flip {
                continue;
            }

            self.edges.remove(&(a, b));
            self.edges.remove(&(b, a));
            self.triangles[t1] = [a, w, p];
            self.triangles[t2] = [w, b, p];
            self.register(t1);
            self.register(t2);
            self.stack.push((a, w, p));
            self.stack.push((w, b, p));
        }
    }
}

pub(crate) fn triangulate_2d(points: &[Vec<f64>]) -> Result<RawTriangulation> {
    let m = points.len();
    if m < 3 {
        return Err(MirrorError::DegenerateInput(format!("{m} point(s); d=2 needs at least 3")));
    }
    let pts: Vec<[f64; 2]> = points.iter().map(|p| [p[0], p[1]]).collect();
    let scale = coordinate_scale(points);
    let tol = Tolerances::for_scale(scale);

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| {
        pts[i][0]
            .total_cmp(&pts[j][0])
            .then(pts[i][1].total_cmp(&pts[j][1]))
            .then(i.cmp(&j))
    });
    for w in order.windows(2) {
        let (a, b) = (pts[w[0]], pts[w[1]]);
        if (a[0] - b[0]).hypot(a[1] - b[1]) <= PREDICATE_EPS * scale {
            return Err(MirrorError::DegenerateInput(format!("points {} and {} coincide", w[0], w[1])));
        }
    }

    // collinear prefix followed by the first point off its line
    let (p0, p1) = (pts[order[0]], pts[order[1]]);
    let apex_pos = (2..m)
        .find(|&k| orient(p0, p1, pts[order[k]]).abs() > tol.orient)
        .ok_or_else(|| MirrorError::DegenerateInput("all points are collinear".into()))?;
    let chain = &order[..apex_pos];
    let apex = order[apex_pos];

    let mut b = Builder {
        pts: &pts,
        tol,
        triangles: Vec::with_capacity(2 * m),
        edges: HashMap::with_capacity(6 * m),
        stack: Vec::new(),
    };

    let left = orient(p0, p1, pts[apex]) > 0.0;
    for w in chain.windows(2) {
        if left {
            b.add_triangle([w[0], w[1], apex]);
        } else {
            b.add_triangle([w[1], w[0], apex]);
        }
    }
    let mut hull: Vec<usize> = if left {
        chain.iter().copied().chain(std::iter::once(apex)).collect()
    } else {
        chain.iter().rev().copied().chain(std::iter::once(apex)).collect()
    };
    b.legalize();

    for &p in &order[apex_pos + 1..] {
        let h = hull.len();
        let visible: Vec<bool> = (0..h)
            .map(|t| orient(pts[hull[t]], pts[hull[(t + 1) % h]], pts[p]) < -tol.orient)
            .collect();
        let start = (0..h)
            .find(|&t| visible[t] && !visible[(t + h - 1) % h])
            .ok_or_else(|| {
                MirrorError::DegenerateInput(format!("point {p} sees no hull edge (numerically degenerate input)"))
            })?;
        let mut end = start;
        while visible[(end + 1) % h] {
            end = (end + 1) % h;
            if end == start {
                return Err(MirrorError::DegenerateInput("every hull edge is visible".into()));
            }
        }

        let mut t = start;
        loop {
            let (u, v) = (hull[t], hull[(t + 1) % h]);
            b.add_triangle([v, u, p]);
            if t == end {
                break;
            }
            t = (t + 1) % h;
        }
        b.legalize();

        // keep the arc from hull[end + 1] around to hull[start], then p
        let mut next = Vec::with_capacity(h + 1);
        let mut k = (end + 1) % h;
        loop {
            next.push(hull[k]);
            if k == start {
                break;
            }
            k = (k + 1) % h;
        }
        next.push(p);
        hull = next;
    }

    let mut simplices: Vec<Vec<usize>> = b
        .triangles
        .into_iter()
        .map(|t| {
            let r = (0..3).min_by_key(|&k| t[k]).unwrap_or(0);
            vec![t[r], t[(r + 1) % 3], t[(r + 2) % 3]]
        })
        .collect();
    simplices.sort();

    let r = (0..hull.len()).min_by_key(|&k| hull[k]).unwrap_or(0);
    hull.rotate_left(r);

    Ok(RawTriangulation { simplices, hull })
}
