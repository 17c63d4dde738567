use eumirror::sim::substream;
use eumirror::surface::delaunay_triangulate;
use eumirror::MirrorSurface;
use nalgebra::DMatrix;
use rand::Rng;

/// Area of the convex polygon whose vertices are `hull` in order.
fn polygon_area(points: &[Vec<f64>], hull: &[usize]) -> f64 {
    let k = hull.len();
    0.5 * (0..k)
        .map(|i| {
            let (a, b) = (&points[hull[i]], &points[hull[(i + 1) % k]]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum::<f64>()
        .abs()
}

#[test]
fn triangulation_covers_the_hull() {
    let mut rng = substream(5, 0);
    for _ in 0..20 {
        let m = rng.random_range(3..=150);
        let pts: Vec<Vec<f64>> = (0..m).map(|_| vec![rng.random::<f64>() * 4.0, rng.random::<f64>()]).collect();
        let tri = delaunay_triangulate(&pts).unwrap();
        let total: f64 = (0..tri.len()).map(|id| tri.volume(id)).sum();
        let hull = polygon_area(&pts, tri.hull());
        assert!((total - hull).abs() <= 1e-9 * hull, "{total} vs {hull}");

        for _ in 0..1000 {
            let s = tri.simplex(rng.random_range(0..tri.len()));
            let (u, v) = (rng.random::<f64>(), rng.random::<f64>());
            let (u, v) = if u + v > 1.0 { (1.0 - u, 1.0 - v) } else { (u, v) };
            let x: Vec<f64> = (0..2)
                .map(|r| pts[s[0]][r] + u * (pts[s[1]][r] - pts[s[0]][r]) + v * (pts[s[2]][r] - pts[s[0]][r]))
                .collect();
            assert!(tri.locate(&x).is_some(), "{x:?} not located");
        }
    }
}

#[test]
fn lipschitz_constant_is_reported_and_finite() {
    let mut rng = substream(6, 0);
    let pts: Vec<Vec<f64>> = (0..60).map(|_| vec![rng.random::<f64>(), rng.random::<f64>()]).collect();
    let values = DMatrix::from_fn(pts.len(), 2, |i, k| (pts[i][k] * 3.0).sin());
    let surface = MirrorSurface::new(&pts, values).unwrap();
    let l = surface.lipschitz_constant();
    assert!(l.is_finite() && l > 0.0);
    let conds = surface.jacobian_condition_numbers();
    assert_eq!(conds.len(), surface.triangulation().len());
}
