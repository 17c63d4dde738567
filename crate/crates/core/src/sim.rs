//! Gaussian simulation families with known mirrors.
//!
//! * `MeanOnly`: `N(mu_x, 1)` with `mu_x = 0.1 ||x - (5.5, 5.5)||^2` on the
//!   integer grid of `[1, 10]^2`. Under `W_1` the mirror is `mu_x` itself.
//! * `MeanScale`: `N(mu_x, sigma_x)` with `mu_x = 2 (0.1 + x_1)^2` and
//!   `sigma_x = 2 (0.1 + x_2)^2` on a 10 x 10 grid of `[0, 1]^2`. Under
//!   `W_2` the mirror is `(mu_x, sigma_x)`.
//!
//! Each set draws from its own ChaCha20 stream keyed by `(seed, grid index)`,
//! so the samples of a set do not depend on how the grid is enumerated or
//! scheduled. Normals come from the inverse CDF of open-interval uniforms.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use statrs::function::erf::erfc_inv;

use crate::dataset::{Dataset, ParameterVector, SampleSet};
use crate::embedding::{center_columns, cmds, procrustes_align, MirrorEmbedding};
use crate::error::{MirrorError, Result};
use crate::recovery::{leave_one_out, HeldOut};
use crate::transport::{distance_matrix, DistanceMatrix, Metric};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    MeanOnly,
    MeanScale,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::MeanOnly => "mean-only",
            Family::MeanScale => "mean-scale",
        })
    }
}

impl FromStr for Family {
    type Err = MirrorError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mean-only" => Ok(Family::MeanOnly),
            "mean-scale" => Ok(Family::MeanScale),
            _ => Err(MirrorError::InvalidConfig(format!("unknown family `{s}`"))),
        }
    }
}

impl Family {
    pub fn mean(self, x: &[f64]) -> f64 {
        match self {
            Family::MeanOnly => true_mirror_mean_only(x),
            Family::MeanScale => 2.0 * (0.1 + x[0]).powi(2),
        }
    }

    pub fn sd(self, x: &[f64]) -> f64 {
        match self {
            Family::MeanOnly => 1.0,
            Family::MeanScale => 2.0 * (0.1 + x[1]).powi(2),
        }
    }

    /// Wasserstein order under which the family is Euclidean realizable.
    pub fn order(self) -> f64 {
        match self {
            Family::MeanOnly => 1.0,
            Family::MeanScale => 2.0,
        }
    }

    /// Mirror dimension `c`.
    pub fn mirror_dim(self) -> usize {
        match self {
            Family::MeanOnly => 1,
            Family::MeanScale => 2,
        }
    }

    pub fn true_mirror(self, x: &[f64]) -> Vec<f64> {
        match self {
            Family::MeanOnly => vec![self.mean(x)],
            Family::MeanScale => vec![self.mean(x), self.sd(x)],
        }
    }

    /// Population distance between `F_x` and `F_x'`.
    pub fn true_distance(self, x: &[f64], y: &[f64]) -> f64 {
        let dm = self.mean(x) - self.mean(y);
        let ds = self.sd(x) - self.sd(y);
        match self {
            Family::MeanOnly => dm.abs(),
            Family::MeanScale => dm.hypot(ds),
        }
    }

    /// 10 x 10 default grid, first coordinate varying slowest.
    pub fn default_grid(self) -> Vec<ParameterVector> {
        let axis: Vec<f64> = match self {
            Family::MeanOnly => (1..=10).map(f64::from).collect(),
            Family::MeanScale => (0..10).map(|k| f64::from(k) / 9.0).collect(),
        };
        axis.iter()
            .flat_map(|&a| axis.iter().map(move |&b| ParameterVector::new(vec![a, b]).expect("finite")))
            .collect()
    }
}

/// `0.1 ||x - (5.5, 5.5)||^2`.
pub fn true_mirror_mean_only(x: &[f64]) -> f64 {
    0.1 * ((x[0] - 5.5).powi(2) + (x[1] - 5.5).powi(2))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianFamilySpec {
    pub family: Family,
    pub grid: Vec<ParameterVector>,
    pub n: usize,
    pub seed: u64,
}

impl GaussianFamilySpec {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        GaussianFamilySpec {
            family,
            grid: family.default_grid(),
            n,
            seed,
        }
    }

    pub fn truth(&self) -> DMatrix<f64> {
        let c = self.family.mirror_dim();
        DMatrix::from_fn(self.grid.len(), c, |i, k| self.family.true_mirror(self.grid[i].as_slice())[k])
    }
}

/// Uniform on the open interval `(0, 1)` from the top 53 bits.
fn open_uniform(rng: &mut impl RngCore) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Standard normal by inverse CDF.
pub fn standard_normal(rng: &mut impl RngCore) -> f64 {
    -std::f64::consts::SQRT_2 * erfc_inv(2.0 * open_uniform(rng))
}

/// Generator for set `index` under `seed`.
pub fn substream(seed: u64, index: usize) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Set id for grid index `i`.
pub fn set_id(i: usize) -> String {
    format!("g{i:03}")
}

/// Draw `n` samples for every grid point.
pub fn generate(spec: &GaussianFamilySpec) -> Result<Dataset> {
    if spec.n == 0 {
        return Err(MirrorError::InvalidConfig("n must be at least 1".into()));
    }
    let sets: Vec<SampleSet> = spec
        .grid
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            let (mu, sd) = (spec.family.mean(x.as_slice()), spec.family.sd(x.as_slice()));
            let mut rng = substream(spec.seed, i);
            let values = (0..spec.n).map(|_| mu + sd * standard_normal(&mut rng)).collect();
            SampleSet::from_scalars(set_id(i), Some(x.clone()), values)
        })
        .collect::<Result<_>>()?;
    Dataset::new(sets, Vec::new())
}

/// Population distance matrix over `grid`.
pub fn oracle_distance_matrix(family: Family, grid: &[ParameterVector]) -> Result<DistanceMatrix> {
    let ids = (0..grid.len()).map(set_id).collect();
    DistanceMatrix::from_fn(ids, Metric::External, |i, j| {
        family.true_distance(grid[i].as_slice(), grid[j].as_slice())
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlignedError {
    /// `sqrt(mean_i ||e_i||^2)`.
    pub rmse: f64,
    pub max_error: f64,
}

/// Per-point error of the centered, Procrustes-aligned estimate against the
/// centered truth. Returns the aligned estimate as well.
pub fn align_to_truth(estimate: &DMatrix<f64>, truth: &DMatrix<f64>) -> Result<(DMatrix<f64>, AlignedError)> {
    let alignment = procrustes_align(estimate, truth)?;
    let aligned = alignment.apply(estimate);
    let truth = center_columns(truth);
    let errs: Vec<f64> = (0..truth.nrows())
        .map(|i| (aligned.row(i) - truth.row(i)).norm())
        .collect();
    let m = errs.len().max(1) as f64;
    let rmse = (errs.iter().map(|e| e * e).sum::<f64>() / m).sqrt();
    let max_error = errs.iter().copied().fold(0.0, f64::max);
    Ok((aligned, AlignedError { rmse, max_error }))
}

pub fn aligned_mirror_error(estimate: &MirrorEmbedding, truth: &DMatrix<f64>) -> Result<AlignedError> {
    align_to_truth(&estimate.coords, truth).map(|(_, e)| e)
}

/// Aligned error of the noiseless pipeline: population distances through CMDS.
pub fn oracle_floor(family: Family, grid: &[ParameterVector]) -> Result<AlignedError> {
    let delta = oracle_distance_matrix(family, grid)?;
    let emb = cmds(&delta, family.mirror_dim())?;
    let spec = GaussianFamilySpec {
        family,
        grid: grid.to_vec(),
        n: 1,
        seed: 0,
    };
    aligned_mirror_error(&emb, &spec.truth())
}

/// Seed of replication `rep` under base `seed`.
pub fn rep_seed(seed: u64, rep: usize) -> u64 {
    seed.wrapping_add(rep as u64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub ns: Vec<usize>,
    pub seed: u64,
    pub reps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRow {
    pub n: usize,
    pub rep: usize,
    pub seed: u64,
    pub error: AlignedError,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanOnlyRun {
    pub config: ExperimentConfig,
    pub grid: Vec<ParameterVector>,
    pub rows: Vec<ErrorRow>,
    /// Per `n`: aligned first-replication estimate, one value per grid point.
    pub surfaces: Vec<(usize, Vec<f64>)>,
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let k = values.len();
    if k == 0 {
        f64::NAN
    } else if k % 2 == 1 {
        values[k / 2]
    } else {
        0.5 * (values[k / 2 - 1] + values[k / 2])
    }
}

impl MeanOnlyRun {
    /// Median RMSE across replications for each `n`, in `config.ns` order.
    pub fn median_rmse(&self) -> Vec<(usize, f64)> {
        self.config
            .ns
            .iter()
            .map(|&n| {
                let mut v: Vec<f64> = self.rows.iter().filter(|r| r.n == n).map(|r| r.error.rmse).collect();
                (n, median(&mut v))
            })
            .collect()
    }

    /// Writes `error_reps.csv`, `error_curve.csv`, `surface_n{n}.csv` and `manifest.txt`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        create_dir(dir)?;
        write_file(&dir.join("error_reps.csv"), |w| {
            writeln!(w, "n,rep,seed,rmse,max_error")?;
            for r in &self.rows {
                writeln!(w, "{},{},{},{},{}", r.n, r.rep, r.seed, r.error.rmse, r.error.max_error)?;
            }
            Ok(())
        })?;
        write_file(&dir.join("error_curve.csv"), |w| {
            writeln!(w, "n,median_rmse")?;
            for (n, m) in self.median_rmse() {
                writeln!(w, "{n},{m}")?;
            }
            Ok(())
        })?;
        for (n, values) in &self.surfaces {
            write_file(&dir.join(format!("surface_n{n}.csv")), |w| {
                writeln!(w, "x1,x2,mirror,truth")?;
                let truth: Vec<f64> = self.grid.iter().map(|x| true_mirror_mean_only(x.as_slice())).collect();
                let mean = truth.iter().sum::<f64>() / truth.len() as f64;
                for (x, (v, t)) in self.grid.iter().zip(values.iter().zip(&truth)) {
                    let x = x.as_slice();
                    writeln!(w, "{},{},{},{}", x[0], x[1], v + mean, t)?;
                }
                Ok(())
            })?;
        }
        write_manifest(dir, Family::MeanOnly, &self.config, &self.grid)
    }
}

/// Generate, embed with `W_1` into one dimension and score against the
/// true mirror, for every `(n, rep)`.
pub fn run_mean_only_experiment(config: &ExperimentConfig) -> Result<MeanOnlyRun> {
    let grid = Family::MeanOnly.default_grid();
    let truth = GaussianFamilySpec::new(Family::MeanOnly, 1, 0).truth();
    let jobs: Vec<(usize, usize)> = config
        .ns
        .iter()
        .flat_map(|&n| (0..config.reps).map(move |r| (n, r)))
        .collect();
    let results: Vec<(ErrorRow, Option<Vec<f64>>)> = jobs
        .par_iter()
        .map(|&(n, rep)| {
            let seed = rep_seed(config.seed, rep);
            let ds = generate(&GaussianFamilySpec::new(Family::MeanOnly, n, seed))?;
            let emb = cmds(&distance_matrix(ds.labeled(), 1.0)?, 1)?;
            let (aligned, error) = align_to_truth(&emb.coords, &truth)?;
            let surface = (rep == 0).then(|| aligned.column(0).iter().copied().collect());
            Ok((ErrorRow { n, rep, seed, error }, surface))
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(results.len());
    let mut surfaces = Vec::new();
    for (row, surface) in results {
        if let Some(s) = surface {
            surfaces.push((row.n, s));
        }
        rows.push(row);
    }
    Ok(MeanOnlyRun {
        config: config.clone(),
        grid,
        rows,
        surfaces,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanScaleRun {
    pub config: ExperimentConfig,
    pub grid: Vec<ParameterVector>,
    /// Per `n`: leave-one-out results in grid order.
    pub recoveries: Vec<(usize, Vec<HeldOut>)>,
}

impl MeanScaleRun {
    /// Median leave-one-out error over points off the full hull boundary.
    pub fn median_interior_error(&self) -> Vec<(usize, f64)> {
        self.recoveries
            .iter()
            .map(|(n, held)| {
                let mut v: Vec<f64> = held.iter().filter(|h| !h.on_full_hull).map(HeldOut::error).collect();
                (*n, median(&mut v))
            })
            .collect()
    }

    /// Per-coordinate median absolute error over interior points.
    pub fn median_interior_coordinate_error(&self) -> Vec<(usize, Vec<f64>)> {
        self.recoveries
            .iter()
            .map(|(n, held)| {
                let interior: Vec<&HeldOut> = held.iter().filter(|h| !h.on_full_hull).collect();
                let per = (0..2)
                    .map(|k| {
                        let mut v: Vec<f64> = interior
                            .iter()
                            .map(|h| (h.result.x_hat.as_slice()[k] - h.x_true.as_slice()[k]).abs())
                            .collect();
                        median(&mut v)
                    })
                    .collect();
                (*n, per)
            })
            .collect()
    }

    /// Writes `recovery_n{n}.csv` per `n` and `manifest.txt`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        create_dir(dir)?;
        for (n, held) in &self.recoveries {
            write_file(&dir.join(format!("recovery_n{n}.csv")), |w| {
                writeln!(w, "id,x_true_1,x_true_2,x_hat_1,x_hat_2,error,residual,on_full_hull,outside_reduced_hull")?;
                for h in held {
                    let (t, e) = (h.x_true.as_slice(), h.result.x_hat.as_slice());
                    writeln!(
                        w,
                        "{},{},{},{},{},{},{},{},{}",
                        h.id,
                        t[0],
                        t[1],
                        e[0],
                        e[1],
                        h.error(),
                        h.result.residual,
                        h.on_full_hull,
                        h.outside_reduced_hull
                    )?;
                }
                Ok(())
            })?;
        }
        write_manifest(dir, Family::MeanScale, &self.config, &self.grid)
    }
}

/// Leave-one-out recovery under `W_2` with `c = 2` for each `n`.
/// Uses only the first seed; `config.reps` is ignored.
pub fn run_mean_scale_experiment(config: &ExperimentConfig) -> Result<MeanScaleRun> {
    let grid = Family::MeanScale.default_grid();
    let recoveries = config
        .ns
        .par_iter()
        .map(|&n| {
            let ds = generate(&GaussianFamilySpec::new(Family::MeanScale, n, config.seed))?;
            Ok((n, leave_one_out(&ds, 2.0, Some(2))?))
        })
        .collect::<Result<_>>()?;
    Ok(MeanScaleRun {
        config: config.clone(),
        grid,
        recoveries,
    })
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| MirrorError::io(dir, e))
}

fn write_file(path: &Path, body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| MirrorError::io(path, e))?;
    let mut w = std::io::BufWriter::new(file);
    body(&mut w).and_then(|_| w.flush()).map_err(|e| MirrorError::io(path, e))
}

fn write_manifest(dir: &Path, family: Family, config: &ExperimentConfig, grid: &[ParameterVector]) -> Result<()> {
    write_file(&dir.join("manifest.txt"), |w| {
        writeln!(w, "tool = eumirror {}", env!("CARGO_PKG_VERSION"))?;
        writeln!(w, "family = {family}")?;
        writeln!(w, "grid_points = {}", grid.len())?;
        writeln!(w, "wasserstein_p = {}", family.order())?;
        writeln!(w, "mirror_dim = {}", family.mirror_dim())?;
        let ns: Vec<String> = config.ns.iter().map(usize::to_string).collect();
        writeln!(w, "n = {}", ns.join(","))?;
        writeln!(w, "seed = {}", config.seed)?;
        match family {
            Family::MeanOnly => {
                writeln!(w, "reps = {}", config.reps)?;
                writeln!(w, "rep_seeds = seed + rep")?;
            }
            Family::MeanScale => writeln!(w, "reps = 1")?,
        }
        writeln!(w, "rng = ChaCha20, stream = grid index, normals by inverse CDF")
    })
}
