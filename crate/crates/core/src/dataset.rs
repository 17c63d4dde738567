//! Sample sets, datasets and their on-disk formats.
//!
//! Two interchangeable formats are supported:
//!
//! * NDJSON, one set per line:
//!   `{"id": "a", "params": [0.1, 0.5], "samples": [[...], ...]}`.
//!   A missing (or `null`) `params` field marks the set as unlabeled.
//! * CSV with header `id,p1..pd,s1..sq`, one row per observation, rows of a
//!   set contiguous. Unlabeled sets leave every `p` cell empty.

use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{MirrorError, Result};

/// A point in the parameter space. All coordinates are finite and `d >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterVector(Vec<f64>);

impl ParameterVector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(MirrorError::Empty("parameter vector".into()));
        }
        if coords.iter().any(|v| !v.is_finite()) {
            return Err(MirrorError::NonFinite(format!("parameter vector {coords:?}")));
        }
        Ok(ParameterVector(coords))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for ParameterVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// One distribution's evidence: `n` observations in `R^q`, optionally tagged
/// with the parameter vector that generated them.
///
/// Samples are stored row-major so each observation is a contiguous slice.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    id: String,
    params: Option<ParameterVector>,
    data: Vec<f64>,
    n: usize,
    q: usize,
}

impl SampleSet {
    /// Build from row-major data of shape `n x q`.
    pub fn new(
        id: impl Into<String>,
        params: Option<ParameterVector>,
        data: Vec<f64>,
        n: usize,
        q: usize,
    ) -> Result<Self> {
        let id = id.into();
        if n == 0 || q == 0 {
            return Err(MirrorError::Empty(format!("set `{id}` has n={n}, q={q}")));
        }
        if data.len() != n * q {
            return Err(MirrorError::DimensionMismatch(format!(
                "set `{id}`: {} values for a {n}x{q} sample matrix",
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(MirrorError::NonFinite(format!("samples of set `{id}`")));
        }
        Ok(SampleSet {
            id,
            params,
            data,
            n,
            q,
        })
    }

    pub fn from_rows(
        id: impl Into<String>,
        params: Option<ParameterVector>,
        rows: &[Vec<f64>],
    ) -> Result<Self> {
        let id = id.into();
        let q = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != q) {
            return Err(MirrorError::InconsistentSampleDimension {
                id,
                expected: q,
                found: bad.len(),
            });
        }
        let data = rows.iter().flatten().copied().collect();
        Self::new(id, params, data, rows.len(), q)
    }

    /// Convenience constructor for one-dimensional samples.
    pub fn from_scalars(
        id: impl Into<String>,
        params: Option<ParameterVector>,
        values: Vec<f64>,
    ) -> Result<Self> {
        let n = values.len();
        Self::new(id, params, values, n, 1)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn params(&self) -> Option<&ParameterVector> {
        self.params.as_ref()
    }

    pub fn is_labeled(&self) -> bool {
        self.params.is_some()
    }

    /// Number of observations.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension of each observation.
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.q..(i + 1) * self.q]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.q)
    }

    /// Row-major sample values.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Same samples, parameter label dropped.
    pub fn unlabeled(&self) -> SampleSet {
        SampleSet {
            params: None,
            ..self.clone()
        }
    }
}

/// Labeled sets (parameters known) and unlabeled sets (parameters to recover).
///
/// Construction validates every cross-set invariant: shared `q`, shared `d`
/// among labeled sets, unique ids and pairwise distinct parameter vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    labeled: Vec<SampleSet>,
    unlabeled: Vec<SampleSet>,
}

impl Dataset {
    pub fn new(labeled: Vec<SampleSet>, unlabeled: Vec<SampleSet>) -> Result<Self> {
        if let Some(s) = labeled.iter().find(|s| !s.is_labeled()) {
            return Err(MirrorError::InvalidConfig(format!(
                "set `{}` is in the labeled list but has no parameters",
                s.id()
            )));
        }
        if let Some(s) = unlabeled.iter().find(|s| s.is_labeled()) {
            return Err(MirrorError::InvalidConfig(format!(
                "set `{}` is in the unlabeled list but has parameters",
                s.id()
            )));
        }
        let ds = Dataset { labeled, unlabeled };
        ds.validate()?;
        Ok(ds)
    }

    /// Split a mixed list of sets by presence of parameters, preserving order.
    pub fn from_sets(sets: Vec<SampleSet>) -> Result<Self> {
        let (labeled, unlabeled) = sets.into_iter().partition(SampleSet::is_labeled);
        Self::new(labeled, unlabeled)
    }

    fn validate(&self) -> Result<()> {
        let mut ids: HashMap<&str, ()> = HashMap::new();
        let mut q = None;
        for set in self.sets() {
            if ids.insert(set.id(), ()).is_some() {
                return Err(MirrorError::DuplicateId(set.id().to_string()));
            }
            match q {
                None => q = Some(set.q()),
                Some(expected) if expected != set.q() => {
                    return Err(MirrorError::InconsistentSampleDimension {
                        id: set.id().to_string(),
                        expected,
                        found: set.q(),
                    })
                }
                _ => {}
            }
        }

        let mut d = None;
        for set in &self.labeled {
            let dim = set.params().map_or(0, ParameterVector::dim);
            match d {
                None => d = Some(dim),
                Some(expected) if expected != dim => {
                    return Err(MirrorError::InconsistentParameterDimension {
                        id: set.id().to_string(),
                        expected,
                        found: dim,
                    })
                }
                _ => {}
            }
        }

        for (i, a) in self.labeled.iter().enumerate() {
            for b in &self.labeled[i + 1..] {
                if a.params() == b.params() {
                    return Err(MirrorError::DuplicateParameters {
                        first: a.id().to_string(),
                        second: b.id().to_string(),
                        params: a.params().map(|p| p.as_slice().to_vec()).unwrap_or_default(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn labeled(&self) -> &[SampleSet] {
        &self.labeled
    }

    pub fn unlabeled(&self) -> &[SampleSet] {
        &self.unlabeled
    }

    /// Labeled sets followed by unlabeled sets.
    pub fn sets(&self) -> impl Iterator<Item = &SampleSet> {
        self.labeled.iter().chain(self.unlabeled.iter())
    }

    /// Number of labeled sets.
    pub fn m(&self) -> usize {
        self.labeled.len()
    }

    /// Parameter dimension, if any set is labeled.
    pub fn d(&self) -> Option<usize> {
        self.labeled
            .first()
            .and_then(SampleSet::params)
            .map(ParameterVector::dim)
    }

    /// Sample dimension, if the dataset is non-empty.
    pub fn q(&self) -> Option<usize> {
        self.sets().next().map(SampleSet::q)
    }

    pub fn is_empty(&self) -> bool {
        self.labeled.is_empty() && self.unlabeled.is_empty()
    }

    pub fn sample_counts(&self) -> Vec<(&str, usize)> {
        self.sets().map(|s| (s.id(), s.n())).collect()
    }

    /// Parameter vectors of the labeled sets, in order.
    pub fn params(&self) -> Vec<&ParameterVector> {
        self.labeled.iter().filter_map(SampleSet::params).collect()
    }
}

/// Returns the common sample size `n` shared by every set.
pub fn validate_equal_sample_size(ds: &Dataset) -> Result<usize> {
    let mut sets = ds.sets();
    let first = sets
        .next()
        .ok_or_else(|| MirrorError::Empty("dataset has no sample sets".into()))?;
    let expected = first.n();
    let offending: Vec<(String, usize)> = sets
        .filter(|s| s.n() != expected)
        .map(|s| (s.id().to_string(), s.n()))
        .collect();
    if offending.is_empty() {
        Ok(expected)
    } else {
        Err(MirrorError::UnequalSampleSizes {
            expected,
            offending,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Ndjson,
    Csv,
}

impl Format {
    /// Guess the format from a file extension.
    pub fn from_path(path: &Path) -> Option<Format> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "ndjson" | "jsonl" | "json" => Some(Format::Ndjson),
            "csv" => Some(Format::Csv),
            _ => None,
        }
    }
}

impl FromStr for Format {
    type Err = MirrorError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ndjson" | "jsonl" => Ok(Format::Ndjson),
            "csv" => Ok(Format::Csv),
            other => Err(MirrorError::InvalidConfig(format!("unknown format `{other}`"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Ndjson => "ndjson",
            Format::Csv => "csv",
        })
    }
}

pub fn load_dataset(path: impl AsRef<Path>, format: Format) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| MirrorError::io(path, e))?;
    read_dataset(BufReader::new(file), format)
}

pub fn read_dataset<R: BufRead>(reader: R, format: Format) -> Result<Dataset> {
    let sets = match format {
        Format::Ndjson => read_ndjson(reader)?,
        Format::Csv => read_csv(reader)?,
    };
    Dataset::from_sets(sets)
}

pub fn save_dataset(ds: &Dataset, path: impl AsRef<Path>, format: Format) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| MirrorError::io(path, e))?;
    let mut w = BufWriter::new(file);
    write_dataset(ds, &mut w, format).and_then(|_| w.flush().map_err(|e| MirrorError::io(path, e)))
}

pub fn write_dataset<W: Write>(ds: &Dataset, writer: W, format: Format) -> Result<()> {
    match format {
        Format::Ndjson => write_ndjson(ds, writer),
        Format::Csv => write_csv(ds, writer),
    }
}

#[derive(Deserialize)]
struct RecordIn {
    id: String,
    #[serde(default)]
    params: Option<Vec<f64>>,
    samples: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct RecordOut<'a> {
    id: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    params: Option<&'a [f64]>,
    samples: Vec<&'a [f64]>,
}

fn read_ndjson<R: BufRead>(reader: R) -> Result<Vec<SampleSet>> {
    let mut sets = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| MirrorError::parse(line_no, e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: RecordIn =
            serde_json::from_str(&line).map_err(|e| MirrorError::parse(line_no, e.to_string()))?;
        let params = rec
            .params
            .map(ParameterVector::new)
            .transpose()
            .map_err(|e| MirrorError::parse(line_no, e.to_string()))?;
        let set = SampleSet::from_rows(rec.id, params, &rec.samples)
            .map_err(|e| MirrorError::parse(line_no, e.to_string()))?;
        sets.push(set);
    }
    Ok(sets)
}

fn write_ndjson<W: Write>(ds: &Dataset, mut writer: W) -> Result<()> {
    for set in ds.sets() {
        let rec = RecordOut {
            id: set.id(),
            params: set.params().map(ParameterVector::as_slice),
            samples: set.rows().collect(),
        };
        let line = serde_json::to_string(&rec)
            .map_err(|e| MirrorError::InvalidConfig(format!("serializing `{}`: {e}", set.id())))?;
        writeln!(writer, "{line}").map_err(|e| MirrorError::io("<ndjson output>", e))?;
    }
    Ok(())
}

struct CsvGroup {
    id: String,
    params: Option<Vec<f64>>,
    rows: Vec<Vec<f64>>,
    first_line: usize,
}

fn parse_cell(cell: &str, line: usize, column: &str) -> Result<f64> {
    let v: f64 = cell
        .trim()
        .parse()
        .map_err(|_| MirrorError::parse(line, format!("column `{column}`: `{cell}` is not a number")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(MirrorError::parse(line, format!("column `{column}`: non-finite value")))
    }
}

fn read_csv<R: BufRead>(reader: R) -> Result<Vec<SampleSet>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| MirrorError::parse(1, e.to_string()))?
        .clone();
    let names: Vec<&str> = headers.iter().collect();
    if names.first() != Some(&"id") {
        return Err(MirrorError::parse(1, "first column must be `id`"));
    }
    let d = names[1..].iter().take_while(|h| h.starts_with('p')).count();
    let q = names.len() - 1 - d;
    for (k, name) in names[1..=d].iter().enumerate() {
        if *name != format!("p{}", k + 1) {
            return Err(MirrorError::parse(1, format!("expected column `p{}`, found `{name}`", k + 1)));
        }
    }
    for (k, name) in names[1 + d..].iter().enumerate() {
        if *name != format!("s{}", k + 1) {
            return Err(MirrorError::parse(1, format!("expected column `s{}`, found `{name}`", k + 1)));
        }
    }
    if q == 0 {
        return Err(MirrorError::parse(1, "no sample columns `s1..sq`"));
    }

    let mut groups: Vec<CsvGroup> = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            MirrorError::parse(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let id = record.get(0).unwrap_or_default().to_string();
        if id.is_empty() {
            return Err(MirrorError::parse(line, "empty id"));
        }

        let pcells: Vec<&str> = (1..=d).map(|k| record.get(k).unwrap_or_default()).collect();
        let params = if pcells.iter().all(|c| c.is_empty()) {
            None
        } else if pcells.iter().any(|c| c.is_empty()) {
            return Err(MirrorError::parse(line, "partially empty parameter cells"));
        } else {
            let mut v = Vec::with_capacity(d);
            for (k, c) in pcells.iter().enumerate() {
                v.push(parse_cell(c, line, &format!("p{}", k + 1))?);
            }
            Some(v)
        };
        let mut row = Vec::with_capacity(q);
        for k in 0..q {
            row.push(parse_cell(record.get(1 + d + k).unwrap_or_default(), line, &format!("s{}", k + 1))?);
        }

        match groups.last_mut() {
            Some(g) if g.id == id => {
                if g.params != params {
                    return Err(MirrorError::parse(
                        line,
                        format!("parameters of `{id}` differ from line {}", g.first_line),
                    ));
                }
                g.rows.push(row);
            }
            _ => {
                if let Some(&prev) = seen.get(&id) {
                    return Err(MirrorError::parse(
                        line,
                        format!("rows for `{id}` are not contiguous (group started at line {})", groups[prev].first_line),
                    ));
                }
                seen.insert(id.clone(), groups.len());
                groups.push(CsvGroup {
                    id,
                    params,
                    rows: vec![row],
                    first_line: line,
                });
            }
        }
    }

    groups
        .into_iter()
        .map(|g| {
            let params = g.params.map(ParameterVector::new).transpose()?;
            SampleSet::from_rows(g.id, params, &g.rows)
        })
        .collect()
}

fn write_csv<W: Write>(ds: &Dataset, writer: W) -> Result<()> {
    let d = ds.d().unwrap_or(0);
    let q = ds.q().unwrap_or(0);
    let mut w = csv::Writer::from_writer(writer);
    let to_err = |e: csv::Error| MirrorError::io("<csv output>", std::io::Error::other(e));

    let mut header = vec!["id".to_string()];
    header.extend((1..=d).map(|k| format!("p{k}")));
    header.extend((1..=q).map(|k| format!("s{k}")));
    w.write_record(&header).map_err(to_err)?;

    for set in ds.sets() {
        let pcells: Vec<String> = match set.params() {
            Some(p) => p.as_slice().iter().map(f64::to_string).collect(),
            None => vec![String::new(); d],
        };
        for row in set.rows() {
            let mut rec = Vec::with_capacity(1 + d + q);
            rec.push(set.id().to_string());
            rec.extend(pcells.iter().cloned());
            rec.extend(row.iter().map(f64::to_string));
            w.write_record(&rec).map_err(to_err)?;
        }
    }
    w.flush().map_err(|e| MirrorError::io("<csv output>", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pv(v: &[f64]) -> Option<ParameterVector> {
        Some(ParameterVector::new(v.to_vec()).unwrap())
    }

    #[test]
    fn ndjson_two_labeled_records() {
        let text = r#"{"id":"a","params":[0.1,0.5],"samples":[[1,2,3,4],[5,6,7,8],[9,10,11,12]]}
{"id":"b","params":[0.2,0.5],"samples":[[0,0,0,0],[1,1,1,1],[2,2,2,2]]}
"#;
        let ds = read_dataset(text.as_bytes(), Format::Ndjson).unwrap();
        assert_eq!(ds.m(), 2);
        assert_eq!(ds.d(), Some(2));
        assert_eq!(ds.q(), Some(4));
        assert!(ds.labeled().iter().all(|s| s.n() == 3));
        assert_eq!(ds.labeled()[0].row(1), &[5.0, 6.0, 7.0, 8.0]);
    }

    #[test]
    fn missing_params_means_unlabeled() {
        let text = r#"{"id":"u","samples":[[1.5]]}"#;
        let ds = read_dataset(text.as_bytes(), Format::Ndjson).unwrap();
        assert_eq!(ds.m(), 0);
        assert_eq!(ds.unlabeled().len(), 1);
        assert_eq!(ds.d(), None);
    }

    #[test]
    fn empty_params_vector_is_rejected() {
        let text = r#"{"id":"u","params":[],"samples":[[1.5]]}"#;
        let err = read_dataset(text.as_bytes(), Format::Ndjson).unwrap_err();
        assert!(matches!(err, MirrorError::Parse { line: 1, .. }));
    }

    #[test]
    fn duplicate_parameters_rejected() {
        let text = r#"{"id":"a","params":[1,1],"samples":[[0]]}
{"id":"b","params":[1,1],"samples":[[1]]}"#;
        let err = read_dataset(text.as_bytes(), Format::Ndjson).unwrap_err();
        assert!(matches!(err, MirrorError::DuplicateParameters { .. }), "{err}");
    }

    #[test]
    fn parse_error_reports_line() {
        let text = "{\"id\":\"a\",\"params\":[1],\"samples\":[[0]]}\n\n{\"id\": oops}\n";
        match read_dataset(text.as_bytes(), Format::Ndjson).unwrap_err() {
            MirrorError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn inconsistent_q_rejected() {
        let text = r#"{"id":"a","params":[1],"samples":[[0,1]]}
{"id":"b","params":[2],"samples":[[1]]}"#;
        let err = read_dataset(text.as_bytes(), Format::Ndjson).unwrap_err();
        assert!(matches!(err, MirrorError::InconsistentSampleDimension { .. }));
    }

    #[test]
    fn inconsistent_d_rejected() {
        let text = r#"{"id":"a","params":[1],"samples":[[0]]}
{"id":"b","params":[2,3],"samples":[[1]]}"#;
        let err = read_dataset(text.as_bytes(), Format::Ndjson).unwrap_err();
        assert!(matches!(err, MirrorError::InconsistentParameterDimension { .. }));
    }

    #[test]
    fn csv_groups_and_unlabeled_rows() {
        let text = "id,p1,p2,s1,s2\na,0.1,10,1,2\na,0.1,10,3,4\nu,,,5,6\nu,,,7,8\n";
        let ds = read_dataset(text.as_bytes(), Format::Csv).unwrap();
        assert_eq!(ds.m(), 1);
        assert_eq!(ds.unlabeled().len(), 1);
        assert_eq!(ds.labeled()[0].params().unwrap().as_slice(), &[0.1, 10.0]);
        assert_eq!(ds.unlabeled()[0].row(1), &[7.0, 8.0]);
    }

    #[test]
    fn csv_rejects_non_contiguous_and_nan() {
        let text = "id,p1,s1\na,1,0\nb,2,0\na,1,1\n";
        match read_dataset(text.as_bytes(), Format::Csv).unwrap_err() {
            MirrorError::Parse { line, .. } => assert_eq!(line, 4),
            other => panic!("unexpected {other}"),
        }
        let text = "id,p1,s1\na,1,NaN\n";
        assert!(read_dataset(text.as_bytes(), Format::Csv).is_err());
    }

    #[test]
    fn equal_sample_size() {
        let a = SampleSet::from_scalars("a", pv(&[0.0]), vec![0.0; 100]).unwrap();
        let b = SampleSet::from_scalars("b", pv(&[1.0]), vec![0.0; 100]).unwrap();
        let c = SampleSet::from_scalars("c", pv(&[2.0]), vec![0.0; 99]).unwrap();
        let ds = Dataset::new(vec![a.clone(), b.clone()], vec![]).unwrap();
        assert_eq!(validate_equal_sample_size(&ds).unwrap(), 100);

        let ds = Dataset::new(vec![a, b, c], vec![]).unwrap();
        match validate_equal_sample_size(&ds).unwrap_err() {
            MirrorError::UnequalSampleSizes { offending, .. } => {
                assert_eq!(offending, vec![("c".to_string(), 99)])
            }
            other => panic!("unexpected {other}"),
        }

        let one = SampleSet::from_scalars("x", None, vec![3.0]).unwrap();
        let ds = Dataset::new(vec![], vec![one]).unwrap();
        assert_eq!(validate_equal_sample_size(&ds).unwrap(), 1);
    }

    #[test]
    fn empty_dataset_has_no_sample_size() {
        let ds = Dataset::new(vec![], vec![]).unwrap();
        assert!(validate_equal_sample_size(&ds).is_err());
    }

    fn arb_dataset() -> impl Strategy<Value = Dataset> {
        (1usize..4, 1usize..3, 1usize..4, 0usize..5, 0usize..3).prop_flat_map(|(q, d, n, m, u)| {
            let vals = prop::collection::vec(-1e6f64..1e6, (m + u) * n * q);
            let params = prop::collection::vec(-100f64..100.0, m * d);
            (Just((q, d, n, m, u)), vals, params)
        })
        .prop_filter_map("non-empty, distinct params", |((q, d, n, m, u), vals, params)| {
            if m + u == 0 {
                return None;
            }
            let mut sets = Vec::new();
            for i in 0..m + u {
                let p = (i < m).then(|| ParameterVector::new(params[i * d..(i + 1) * d].to_vec()).unwrap());
                let data = vals[i * n * q..(i + 1) * n * q].to_vec();
                sets.push(SampleSet::new(format!("s{i}"), p, data, n, q).unwrap());
            }
            Dataset::from_sets(sets).ok()
        })
    }

    proptest! {
        #[test]
        fn round_trip_both_formats(ds in arb_dataset()) {
            for format in [Format::Ndjson, Format::Csv] {
                let mut buf = Vec::new();
                write_dataset(&ds, &mut buf, format).unwrap();
                let back = read_dataset(buf.as_slice(), format).unwrap();
                prop_assert_eq!(&back, &ds);
            }
        }
    }
}
