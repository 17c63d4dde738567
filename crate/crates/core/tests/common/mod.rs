#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use eumirror::dataset::{save_dataset, Dataset, Format, ParameterVector, SampleSet};
use eumirror::sim::{standard_normal, substream};
use rand::seq::SliceRandom;

pub const BIN: &str = env!("CARGO_BIN_EXE_eumirror");

pub const FIXTURE_T: [f64; 3] = [0.2, 0.5, 0.8];
pub const FIXTURE_W: [f64; 3] = [20.0, 50.0, 80.0];
pub const FIXTURE_N: usize = 50;
pub const FIXTURE_Q: usize = 16;

/// Shift of the set at `(t, w)` in the plane spanned by the frame.
pub fn fixture_shift(t: f64, w: f64) -> [f64; 2] {
    [10.0 * t, 0.08 * w]
}

/// 3x3 grid of translated copies of one base cloud, rows shuffled per set.
/// Translates of a cloud are `W_p` apart by exactly the shift length.
pub fn translated_cloud_fixture() -> Dataset {
    let mut rng = substream(7, 0);
    let base: Vec<Vec<f64>> = (0..FIXTURE_N)
        .map(|_| (0..FIXTURE_Q).map(|_| standard_normal(&mut rng)).collect())
        .collect();
    let u1: Vec<f64> = (0..FIXTURE_Q).map(|_| 0.25).collect();
    let u2: Vec<f64> = (0..FIXTURE_Q).map(|k| if k % 2 == 0 { 0.25 } else { -0.25 }).collect();

    let mut sets = Vec::new();
    for (i, &t) in FIXTURE_T.iter().enumerate() {
        for (j, &w) in FIXTURE_W.iter().enumerate() {
            let idx = 3 * i + j;
            let [a, b] = fixture_shift(t, w);
            let mut rows: Vec<Vec<f64>> = base
                .iter()
                .map(|z| z.iter().enumerate().map(|(k, v)| v + a * u1[k] + b * u2[k]).collect())
                .collect();
            rows.shuffle(&mut substream(11, idx));
            let params = ParameterVector::new(vec![t, w]).unwrap();
            sets.push(SampleSet::from_rows(format!("t{t}_w{w}"), Some(params), &rows).unwrap());
        }
    }
    Dataset::new(sets, Vec::new()).unwrap()
}

pub fn write_fixture(dir: &Path) -> PathBuf {
    let path = dir.join("fixture.ndjson");
    save_dataset(&translated_cloud_fixture(), &path, Format::Ndjson).unwrap();
    path
}

pub fn run(args: &[&str], threads: Option<usize>) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("MIRROR_THREADS", t.to_string()),
        None => cmd.env_remove("MIRROR_THREADS"),
    };
    cmd.output().expect("spawn eumirror")
}

pub fn run_ok(args: &[&str], threads: Option<usize>) -> Output {
    let out = run(args, threads);
    assert!(
        out.status.success(),
        "eumirror {args:?} failed ({:?}): {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

pub fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

/// Every file under `dir` (recursively) with its bytes, sorted by relative path.
pub fn snapshot(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let bytes = std::fs::read(&path).unwrap();
                out.push((path.strip_prefix(dir).unwrap().to_path_buf(), bytes));
            }
        }
    }
    out.sort();
    out
}
