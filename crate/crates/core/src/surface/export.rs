//! CSV exports for fitted surfaces.

use std::io::Write;

use crate::error::{MirrorError, Result};

use super::Triangulation;

fn csv_err(e: csv::Error) -> MirrorError {
    MirrorError::io("<surface output>", std::io::Error::other(e))
}

fn axis(lo: f64, hi: f64, resolution: usize) -> Vec<f64> {
    if resolution == 1 {
        return vec![lo];
    }
    let last = resolution - 1;
    (0..resolution)
        .map(|k| if k == last { hi } else { lo + (hi - lo) * (k as f64 / last as f64) })
        .collect()
}

/// Regular grid over the bounding box of `points` with `resolution` nodes
/// per axis. Ordered with the last axis varying fastest.
pub fn grid_points(points: &[Vec<f64>], resolution: usize) -> Vec<Vec<f64>> {
    let d = points.first().map_or(0, Vec::len);
    let axes: Vec<Vec<f64>> = (0..d)
        .map(|k| {
            let lo = points.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min);
            let hi = points.iter().map(|p| p[k]).fold(f64::NEG_INFINITY, f64::max);
            axis(lo, hi, resolution)
        })
        .collect();
    let mut grid = vec![Vec::with_capacity(d)];
    for ax in &axes {
        grid = grid
            .into_iter()
            .flat_map(|prefix| {
                ax.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    if d == 0 {
        grid.clear();
    }
    grid
}

/// Writes `x1..xd, y1..yc` per grid node. Nodes where `eval` returns `None`
/// (outside the hull) get empty `y` cells.
pub fn write_surface_grid<W, F>(writer: W, grid: &[Vec<f64>], c: usize, eval: F) -> Result<()>
where
    W: Write,
    F: Fn(&[f64]) -> Option<Vec<f64>>,
{
    let d = grid.first().map_or(0, Vec::len);
    let mut w = csv::Writer::from_writer(writer);
    let header = (1..=d).map(|k| format!("x{k}")).chain((1..=c).map(|k| format!("y{k}")));
    w.write_record(header).map_err(csv_err)?;
    for x in grid {
        let y = eval(x);
        let cells = x.iter().map(f64::to_string).chain(match y {
            Some(v) => v.iter().map(f64::to_string).collect::<Vec<_>>(),
            None => vec![String::new(); c],
        });
        w.write_record(cells).map_err(csv_err)?;
    }
    w.flush().map_err(|e| MirrorError::io("<surface output>", e))
}

/// Vertex list `index,id,x1..xd` and simplex list `simplex,v1..v(d+1)`.
pub fn write_triangulation<V: Write, S: Write>(
    tri: &Triangulation,
    ids: &[String],
    vertices: V,
    simplices: S,
) -> Result<()> {
    if ids.len() != tri.points().len() {
        return Err(MirrorError::DimensionMismatch(format!(
            "{} ids for {} vertices",
            ids.len(),
            tri.points().len()
        )));
    }
    let d = tri.dim();
    let mut w = csv::Writer::from_writer(vertices);
    w.write_record(["index", "id"].into_iter().map(String::from).chain((1..=d).map(|k| format!("x{k}"))))
        .map_err(csv_err)?;
    for (i, (p, id)) in tri.points().iter().zip(ids).enumerate() {
        w.write_record([i.to_string(), id.clone()].into_iter().chain(p.iter().map(f64::to_string)))
            .map_err(csv_err)?;
    }
    w.flush().map_err(|e| MirrorError::io("<surface output>", e))?;

    let mut w = csv::Writer::from_writer(simplices);
    w.write_record(std::iter::once("simplex".to_string()).chain((1..=d + 1).map(|k| format!("v{k}"))))
        .map_err(csv_err)?;
    for (k, s) in tri.simplices().iter().enumerate() {
        w.write_record(std::iter::once(k.to_string()).chain(s.iter().map(usize::to_string)))
            .map_err(csv_err)?;
    }
    w.flush().map_err(|e| MirrorError::io("<surface output>", e))
}
