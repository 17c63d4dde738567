//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for data or pipeline errors, 2 for usage
//! errors (bad flags, or flag combinations that cannot work).

use std::ffi::OsString;
use std::fmt;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;

use crate::dataset::{load_dataset, Dataset, Format, ParameterVector};
use crate::embedding::{cmds, read_embedding, realizability_diagnostics, select_dimension, write_embedding, write_spectrum};
use crate::error::MirrorError;
use crate::recovery::{leave_one_out_from_matrix, recover_from_matrix, write_recovery_report, HeldOut, ReportRow, RecoveryResult};
use crate::sim::{run_mean_only_experiment, run_mean_scale_experiment, ExperimentConfig, Family};
use crate::surface::{
    delaunay_triangulate, fit_bspline, grid_points, write_surface_grid, write_triangulation, BSplineConfig, MirrorSurface,
    ParamScaling,
};
use crate::transport::{distance_matrix, read_distance_matrix, write_distance_matrix, DistanceMatrix};

#[derive(Debug, Parser)]
#[command(name = "eumirror", version, about = "Euclidean mirrors of distribution families from samples")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Input file (dataset, distance matrix or embedding, per command).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Output file, or directory for `simulate`.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Dissimilarity between sample sets.
    #[arg(long, global = true, value_enum)]
    pub metric: Option<MetricArg>,
    /// Mirror dimension: a positive integer or `auto`.
    #[arg(long, global = true)]
    pub dim: Option<Dim>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Map each parameter axis affinely onto [0, 1] before triangulating.
    #[arg(long, global = true)]
    pub normalize_params: bool,
    /// Dataset format; guessed from the extension when absent.
    #[arg(long, global = true)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    W1,
    W2,
    External,
}

impl MetricArg {
    fn order(self) -> Option<f64> {
        match self {
            MetricArg::W1 => Some(1.0),
            MetricArg::W2 => Some(2.0),
            MetricArg::External => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dim {
    Auto,
    Fixed(usize),
}

impl FromStr for Dim {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Dim::Auto);
        }
        match s.parse::<usize>() {
            Ok(c) if c >= 1 => Ok(Dim::Fixed(c)),
            _ => Err(format!("`{s}` is neither a positive integer nor `auto`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FitMethod {
    Delaunay,
    Bspline,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    MeanOnly,
    MeanScale,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pairwise Wasserstein distances between the sets of a dataset.
    Distmat,
    /// Classical MDS of a distance matrix; writes coordinates and spectrum.
    Embed,
    /// Realizability diagnostics of a distance matrix.
    Diagnose,
    /// Fit the mirror surface over the parameters and evaluate it on a grid.
    Fit(FitArgs),
    /// Recover parameters of unlabeled sets, or hold out each labeled set.
    Recover(RecoverArgs),
    /// Run a simulation study and write its tables.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Parameters: CSV `id,x1..xd` or a dataset file.
    #[arg(long)]
    pub params: PathBuf,
    #[arg(long, value_enum, default_value = "delaunay")]
    pub method: FitMethod,
    /// Grid nodes per axis.
    #[arg(long, default_value_t = 50)]
    pub resolution: usize,
    #[arg(long, default_value_t = 3)]
    pub degree: usize,
    /// Interior knots per axis.
    #[arg(long, default_value_t = 8)]
    pub knots: usize,
    #[arg(long, default_value_t = 1e-2)]
    pub penalty: f64,
}

#[derive(Debug, Args)]
pub struct RecoverArgs {
    /// Hold out each labeled set in turn.
    #[arg(long)]
    pub leave_one_out: bool,
    /// Parameters for an external distance matrix: CSV `id,x1..xd`.
    #[arg(long)]
    pub params: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(value_enum)]
    pub experiment: Experiment,
    /// Comma-separated sample sizes.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    /// Replications per sample size (mean-only).
    #[arg(long, default_value_t = 10)]
    pub reps: usize,
}

/// Failure of a command, split by exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Run(MirrorError),
}

impl From<MirrorError> for CliError {
    fn from(e: MirrorError) -> Self {
        CliError::Run(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Run(e) => write!(f, "error: {e}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Run(_) => 1,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parse `args` and run; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let threads = crate::parallel::threads_from_env();
    match crate::parallel::with_threads(threads, || run(&cli)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli) -> CliResult<()> {
    let g = &cli.global;
    match &cli.command {
        Command::Distmat => cmd_distmat(g),
        Command::Embed => cmd_embed(g),
        Command::Diagnose => cmd_diagnose(g),
        Command::Fit(a) => cmd_fit(g, a),
        Command::Recover(a) => cmd_recover(g, a),
        Command::Simulate(a) => cmd_simulate(g, a),
    }
}

fn require_input(g: &GlobalOpts) -> CliResult<&Path> {
    g.input.as_deref().ok_or_else(|| usage("--input is required"))
}

fn dataset_format(g: &GlobalOpts, path: &Path) -> CliResult<Format> {
    g.format
        .or_else(|| Format::from_path(path))
        .ok_or_else(|| usage(format!("cannot tell the format of {}; pass --format", path.display())))
}

fn read_dataset_input(g: &GlobalOpts) -> CliResult<Dataset> {
    let path = require_input(g)?;
    let format = dataset_format(g, path)?;
    Ok(load_dataset(path, format)?)
}

fn read_matrix(path: &Path) -> CliResult<DistanceMatrix> {
    let file = File::open(path).map_err(|e| MirrorError::io(path, e))?;
    Ok(read_distance_matrix(BufReader::new(file))?)
}

/// `Box<dyn Write>` to `--output`, or stdout.
fn open_output(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| MirrorError::io(p, e))?)),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).map_err(|e| MirrorError::io(path, e))?))
}

fn finish(mut w: impl Write, path: &Path) -> CliResult<()> {
    w.flush().map_err(|e| CliError::Run(MirrorError::io(path, e)))
}

/// `dir/stem.csv` -> `dir/stem.<tag>.csv`.
pub fn sidecar(path: &Path, tag: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = path.extension().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "csv".into());
    path.with_file_name(format!("{stem}.{tag}.{ext}"))
}

fn sample_order(g: &GlobalOpts) -> CliResult<f64> {
    match g.metric {
        None => Err(usage("--metric w1|w2 is required for sample input")),
        Some(MetricArg::External) => Err(usage(
            "--metric external needs a distance-matrix input, not sample sets",
        )),
        Some(m) => Ok(m.order().expect("sample metric")),
    }
}

fn cmd_distmat(g: &GlobalOpts) -> CliResult<()> {
    let p = sample_order(g)?;
    let ds = read_dataset_input(g)?;
    let sets: Vec<_> = ds.sets().cloned().collect();
    if sets.is_empty() {
        return Err(CliError::Run(MirrorError::Empty("dataset has no sample sets".into())));
    }
    let n = crate::dataset::validate_equal_sample_size(&ds)?;
    let start = Instant::now();
    let dm = distance_matrix(&sets, p)?;
    let secs = start.elapsed().as_secs_f64();
    let out = g.output.as_deref();
    let mut w = open_output(out)?;
    write_distance_matrix(&dm, &mut w)?;
    finish(w, out.unwrap_or(Path::new("<stdout>")))?;
    eprintln!("m={} n={} q={} wall_time_s={:.3}", sets.len(), n, sets[0].q(), secs);
    Ok(())
}

fn resolve_dim(dim: Option<Dim>, spectrum: &[f64], default: Dim) -> CliResult<(usize, bool)> {
    match dim.unwrap_or(default) {
        Dim::Fixed(c) => Ok((c, false)),
        Dim::Auto => Ok((select_dimension(spectrum)?, true)),
    }
}

fn cmd_embed(g: &GlobalOpts) -> CliResult<()> {
    let path = require_input(g)?;
    let delta = read_matrix(path)?;
    let report = realizability_diagnostics(&delta)?;
    if !report.spectrum.iter().any(|&v| v > 0.0) {
        return Err(MirrorError::NoPositiveSpectrum.into());
    }
    let (c, auto) = resolve_dim(g.dim, &report.spectrum, Dim::Auto)?;
    let emb = cmds(&delta, c)?;
    let out = g.output.as_deref();
    let mut w = open_output(out)?;
    write_embedding(&emb, &mut w)?;
    finish(w, out.unwrap_or(Path::new("<stdout>")))?;
    if let Some(out) = out {
        let spath = sidecar(out, "spectrum");
        let mut w = create(&spath)?;
        write_spectrum(&emb.spectrum, &mut w)?;
        finish(w, &spath)?;
    }
    eprintln!("c={c}{}", if auto { " (auto)" } else { "" });
    Ok(())
}

fn cmd_diagnose(g: &GlobalOpts) -> CliResult<()> {
    let path = require_input(g)?;
    let delta = read_matrix(path)?;
    let r = realizability_diagnostics(&delta)?;
    let m = r.spectrum.len();
    let selected = resolve_dim(g.dim, &r.spectrum, Dim::Auto);
    let mut out = std::io::stdout().lock();
    let io = |e| CliError::Run(MirrorError::io("<stdout>", e));
    writeln!(out, "m = {m}").map_err(io)?;
    writeln!(out, "tolerance = {:e}", r.tolerance).map_err(io)?;
    writeln!(out, "negative_eigenvalues = {}", r.count_negative).map_err(io)?;
    writeln!(out, "min_eigenvalue = {:e}", r.min_eigenvalue).map_err(io)?;
    writeln!(out, "euclidean = {}", r.is_euclidean()).map_err(io)?;
    match selected {
        Ok((c, _)) => {
            writeln!(out, "selected_dim = {c}").map_err(io)?;
            if let Some(ratio) = r.ratio_over_m.get(c - 1) {
                writeln!(out, "lambda_c_over_m = {ratio:e}").map_err(io)?;
            }
        }
        Err(e) => writeln!(out, "selected_dim = none ({e})").map_err(io)?,
    }
    let top: Vec<String> = r.spectrum.iter().take(10).map(|v| format!("{v:e}")).collect();
    writeln!(out, "top_eigenvalues = {}", top.join(",")).map_err(io)?;
    if let Some(p) = g.output.as_deref() {
        let mut w = create(p)?;
        write_spectrum(&r.spectrum, &mut w)?;
        finish(w, p)?;
    }
    Ok(())
}

/// Parameters by id, from a `id,x1..xd` CSV or the labeled sets of a dataset.
pub fn read_params(path: &Path, format: Option<Format>) -> crate::error::Result<Vec<(String, ParameterVector)>> {
    let file = File::open(path).map_err(|e| MirrorError::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(BufReader::new(file));
    let is_dataset = match format.or_else(|| Format::from_path(path)) {
        Some(Format::Ndjson) => true,
        _ => {
            let h = rdr.headers().map_err(|e| MirrorError::parse(1, e.to_string()))?;
            h.iter().any(|c| c == "s1")
        }
    };
    if is_dataset {
        let format = format.or_else(|| Format::from_path(path)).unwrap_or(Format::Csv);
        let ds = load_dataset(path, format)?;
        return Ok(ds
            .labeled()
            .iter()
            .map(|s| (s.id().to_string(), s.params().expect("labeled").clone()))
            .collect());
    }
    let headers = rdr.headers().map_err(|e| MirrorError::parse(1, e.to_string()))?.clone();
    if headers.get(0) != Some("id") || headers.len() < 2 {
        return Err(MirrorError::parse(1, "expected header `id,x1..xd`"));
    }
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| MirrorError::parse(line, e.to_string()))?;
        let coords = rec
            .iter()
            .skip(1)
            .map(|c| c.parse::<f64>().map_err(|_| MirrorError::parse(line, format!("`{c}` is not a number"))))
            .collect::<crate::error::Result<Vec<f64>>>()?;
        let pv = ParameterVector::new(coords).map_err(|e| MirrorError::parse(line, e.to_string()))?;
        out.push((rec.get(0).unwrap_or_default().to_string(), pv));
    }
    Ok(out)
}

fn write_scaling(path: &Path, scaling: &ParamScaling) -> CliResult<()> {
    let mut w = create(path)?;
    let io = |e| CliError::Run(MirrorError::io(path, e));
    writeln!(w, "axis,offset,scale").map_err(io)?;
    for (k, (o, s)) in scaling.offset.iter().zip(&scaling.scale).enumerate() {
        writeln!(w, "{},{o},{s}", k + 1).map_err(io)?;
    }
    finish(w, path)
}

fn cmd_fit(g: &GlobalOpts, a: &FitArgs) -> CliResult<()> {
    let path = require_input(g)?;
    let out = g.output.as_deref().ok_or_else(|| usage("--output is required for fit"))?;
    if a.resolution < 2 {
        return Err(usage("--resolution must be at least 2"));
    }
    let file = File::open(path).map_err(|e| MirrorError::io(path, e))?;
    let (ids, coords) = read_embedding(BufReader::new(file))?;
    let params = read_params(&a.params, g.format)?;

    let mut rows = Vec::new();
    let mut points = Vec::new();
    let mut used_ids = Vec::new();
    for (i, id) in ids.iter().enumerate() {
        if let Some((_, p)) = params.iter().find(|(pid, _)| pid == id) {
            rows.push(i);
            points.push(p.as_slice().to_vec());
            used_ids.push(id.clone());
        }
    }
    if points.is_empty() {
        return Err(CliError::Run(MirrorError::Empty("no embedding row has parameters".into())));
    }
    let d = points[0].len();
    let values = DMatrix::from_fn(rows.len(), coords.ncols(), |r, k| coords[(rows[r], k)]);
    let scaling = if g.normalize_params {
        ParamScaling::fit(&points)
    } else {
        ParamScaling::identity(d)
    };
    let scaled: Vec<Vec<f64>> = points.iter().map(|p| scaling.apply(p)).collect();
    let grid = grid_points(&points, a.resolution);
    let c = values.ncols();

    match a.method {
        FitMethod::Delaunay => {
            let surface = MirrorSurface::new(&scaled, values)?;
            let mut w = create(out)?;
            write_surface_grid(&mut w, &grid, c, |x| surface.interpolate(&scaling.apply(x)))?;
            finish(w, out)?;

            let (vp, sp) = (sidecar(out, "vertices"), sidecar(out, "simplices"));
            let (mut vw, mut sw) = (create(&vp)?, create(&sp)?);
            write_triangulation(surface.triangulation(), &used_ids, &mut vw, &mut sw)?;
            finish(vw, &vp)?;
            finish(sw, &sp)?;

            let jp = sidecar(out, "jacobian");
            let mut jw = create(&jp)?;
            let io = |e| CliError::Run(MirrorError::io(&jp, e));
            writeln!(jw, "simplex,spectral_norm,condition_number").map_err(io)?;
            for (k, cond) in surface.jacobian_condition_numbers().iter().enumerate() {
                let norm = surface.jacobian(k).singular_values().max();
                writeln!(jw, "{k},{norm},{cond}").map_err(io)?;
            }
            finish(jw, &jp)?;
            eprintln!(
                "simplices={} lipschitz={}",
                surface.triangulation().len(),
                surface.lipschitz_constant()
            );
        }
        FitMethod::Bspline => {
            if d != 2 {
                return Err(CliError::Run(MirrorError::UnsupportedDimension(d)));
            }
            let config = BSplineConfig {
                degree: a.degree,
                interior_knots: a.knots,
                penalty: a.penalty,
            };
            let spline = fit_bspline(&scaled, &values, &config)?;
            let mut w = create(out)?;
            write_surface_grid(&mut w, &grid, c, |x| spline.evaluate(&scaling.apply(x)))?;
            finish(w, out)?;
            let tri = delaunay_triangulate(&scaled)?;
            let (vp, sp) = (sidecar(out, "vertices"), sidecar(out, "simplices"));
            let (mut vw, mut sw) = (create(&vp)?, create(&sp)?);
            write_triangulation(&tri, &used_ids, &mut vw, &mut sw)?;
            finish(vw, &vp)?;
            finish(sw, &sp)?;
        }
    }
    if g.normalize_params {
        write_scaling(&sidecar(out, "scaling"), &scaling)?;
    }
    Ok(())
}

fn cmd_recover(g: &GlobalOpts, a: &RecoverArgs) -> CliResult<()> {
    let path = require_input(g)?;
    let (delta, labeled) = match g.metric {
        Some(MetricArg::External) => {
            let params_path = a
                .params
                .as_deref()
                .ok_or_else(|| usage("--metric external needs --params with the labeled parameters"))?;
            (read_matrix(path)?, read_params(params_path, g.format)?)
        }
        _ => {
            let p = sample_order(g)?;
            let ds = read_dataset_input(g)?;
            if !a.leave_one_out && ds.unlabeled().is_empty() {
                return Err(usage("the dataset has no unlabeled sets; pass --leave-one-out to hold out labeled sets"));
            }
            if ds.m() == 0 {
                return Err(CliError::Run(MirrorError::Empty("the dataset has no labeled sets".into())));
            }
            let sets: Vec<_> = if a.leave_one_out {
                ds.labeled().to_vec()
            } else {
                ds.sets().cloned().collect()
            };
            let labeled = ds
                .labeled()
                .iter()
                .map(|s| (s.id().to_string(), s.params().expect("labeled").clone()))
                .collect();
            (distance_matrix(&sets, p)?, labeled)
        }
    };
    if labeled.is_empty() {
        return Err(CliError::Run(MirrorError::Empty("no labeled parameters".into())));
    }
    let d = labeled[0].1.dim();
    let points: Vec<Vec<f64>> = labeled.iter().map(|(_, p)| p.as_slice().to_vec()).collect();
    let scaling = if g.normalize_params {
        ParamScaling::fit(&points)
    } else {
        ParamScaling::identity(d)
    };

    let out = g.output.as_deref();
    let mut w = open_output(out)?;
    if a.leave_one_out {
        let order: Vec<usize> = labeled
            .iter()
            .map(|(id, _)| {
                delta
                    .ids()
                    .iter()
                    .position(|x| x == id)
                    .ok_or_else(|| CliError::Run(MirrorError::InvalidConfig(format!("labeled id `{id}` not in matrix"))))
            })
            .collect::<CliResult<_>>()?;
        let sub = delta.reordered(&order)?;
        let params: Vec<ParameterVector> = labeled.iter().map(|(_, p)| p.clone()).collect();
        let c = resolve_recovery_dim(g.dim, &sub, d)?;
        let held: Vec<HeldOut> = leave_one_out_from_matrix(&sub, &params, c, &scaling)?;
        let rows: Vec<ReportRow<'_>> = held
            .iter()
            .map(|h| ReportRow {
                id: &h.id,
                x_true: Some(h.x_true.as_slice()),
                result: &h.result,
                truth_on_hull: Some(h.on_full_hull),
            })
            .collect();
        write_recovery_report(&rows, &mut w)?;
    } else {
        if delta.len() == labeled.len() {
            return Err(usage("no unlabeled sets to recover; pass --leave-one-out to hold out labeled sets"));
        }
        let c = resolve_recovery_dim(g.dim, &delta, d)?;
        let results: Vec<(String, RecoveryResult)> = recover_from_matrix(&delta, &labeled, c, &scaling)?;
        let rows: Vec<ReportRow<'_>> = results
            .iter()
            .map(|(id, r)| ReportRow {
                id,
                x_true: None,
                result: r,
                truth_on_hull: None,
            })
            .collect();
        write_recovery_report(&rows, &mut w)?;
    }
    finish(w, out.unwrap_or(Path::new("<stdout>")))
}

/// `c` for recovery: `d` unless `--dim` says otherwise.
fn resolve_recovery_dim(dim: Option<Dim>, delta: &DistanceMatrix, d: usize) -> CliResult<usize> {
    match dim {
        None => Ok(d),
        Some(Dim::Fixed(c)) => Ok(c),
        Some(Dim::Auto) => Ok(select_dimension(&realizability_diagnostics(delta)?.spectrum)?),
    }
}

fn cmd_simulate(g: &GlobalOpts, a: &SimulateArgs) -> CliResult<()> {
    let dir = g.output.as_deref().ok_or_else(|| usage("--output <dir> is required for simulate"))?;
    let family = match a.experiment {
        Experiment::MeanOnly => Family::MeanOnly,
        Experiment::MeanScale => Family::MeanScale,
    };
    let ns = a.n.clone().unwrap_or_else(|| match family {
        Family::MeanOnly => vec![10, 50, 100, 500],
        Family::MeanScale => vec![10, 100, 1000, 10000],
    });
    if ns.is_empty() || ns.contains(&0) {
        return Err(usage("--n needs positive sample sizes"));
    }
    if a.reps == 0 {
        return Err(usage("--reps must be positive"));
    }
    let config = ExperimentConfig {
        ns,
        seed: g.seed.unwrap_or(1),
        reps: a.reps,
    };
    match family {
        Family::MeanOnly => {
            let run = run_mean_only_experiment(&config)?;
            run.write(dir)?;
            for (n, m) in run.median_rmse() {
                eprintln!("n={n} median_rmse={m}");
            }
        }
        Family::MeanScale => {
            let run = run_mean_scale_experiment(&config)?;
            run.write(dir)?;
            for (n, m) in run.median_interior_error() {
                eprintln!("n={n} median_interior_error={m}");
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dim_parsing() {
        assert_eq!("auto".parse::<Dim>().unwrap(), Dim::Auto);
        assert_eq!("3".parse::<Dim>().unwrap(), Dim::Fixed(3));
        assert!("0".parse::<Dim>().is_err());
        assert!("x".parse::<Dim>().is_err());
    }

    #[test]
    fn sidecar_names() {
        assert_eq!(sidecar(Path::new("out/emb.csv"), "spectrum"), PathBuf::from("out/emb.spectrum.csv"));
        assert_eq!(sidecar(Path::new("surf"), "vertices"), PathBuf::from("surf.vertices.csv"));
    }

    #[test]
    fn parse_errors_exit_two() {
        assert_eq!(main_with_args(["eumirror", "bogus"]), 2);
        assert_eq!(main_with_args(["eumirror", "embed", "--dim", "zero"]), 2);
    }
}
