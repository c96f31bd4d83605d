//! CSV/JSON interchange. Floats are written with 12 significant digits and
//! every file is written to a temporary sibling first, then renamed.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::frfs::FrfsCoefficients;
use crate::grid::{SampledSignal, TimeGrid};
use crate::processes::{Ensemble, StationaryModel, TransformRecord};
use crate::surface::{CorrelationSurface, SurfaceKind, SurfaceSource};

/// `x` with 12 significant digits.
pub fn fmt12(x: f64) -> String {
    format!("{x:.11e}")
}

/// `x` rounded to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x.is_finite() {
        fmt12(x).parse().unwrap_or(x)
    } else {
        x
    }
}

/// Write `bytes` to `path` via a temporary file in the same directory.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| Error::Format(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp-{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}

fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                if let Some(r) = serde_json::Number::from_f64(round12(x)) {
                    *n = r;
                }
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_json),
        Value::Object(o) => o.values_mut().for_each(round_json),
        _ => {}
    }
}

/// Pretty JSON with floats rounded to 12 significant digits.
pub fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut v = serde_json::to_value(value)?;
    round_json(&mut v);
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    atomic_write(path, s.as_bytes())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn csv_bytes(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))
}

fn csv_rows(path: &Path, header: &[&str]) -> Result<Vec<csv::StringRecord>> {
    let mut r = csv::Reader::from_path(path)?;
    let got: Vec<String> = r.headers()?.iter().map(|s| s.trim().to_string()).collect();
    if got != header {
        return Err(Error::Format(format!(
            "{}: expected header {header:?}, got {got:?}",
            path.display()
        )));
    }
    let rows: std::result::Result<Vec<_>, _> = r.records().collect();
    Ok(rows?)
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize, path: &Path) -> Result<T> {
    rec.get(i)
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| Error::Format(format!("{}: bad field {i} in {:?}", path.display(), rec)))
}

/// A CSV table with the given header, written atomically.
pub fn write_table(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<()> {
    atomic_write(path, &csv_bytes(header, rows)?)
}

/// `t,re,im`.
pub fn write_signal_csv(path: &Path, signal: &SampledSignal) -> Result<()> {
    let rows = signal
        .grid()
        .points()
        .zip(signal.values())
        .map(|(t, z)| vec![fmt12(t), fmt12(z.re), fmt12(z.im)]);
    atomic_write(path, &csv_bytes(&["t", "re", "im"], rows)?)
}

/// Reads `t,re,im`; the `t` column must be uniform.
pub fn read_signal_csv(path: &Path) -> Result<SampledSignal> {
    let rows = csv_rows(path, &["t", "re", "im"])?;
    let mut ts = Vec::with_capacity(rows.len());
    let mut values = Vec::with_capacity(rows.len());
    for r in &rows {
        ts.push(field::<f64>(r, 0, path)?);
        values.push(Complex64::new(field(r, 1, path)?, field(r, 2, path)?));
    }
    if ts.len() < 2 {
        return Err(Error::Format(format!("{}: fewer than 2 samples", path.display())));
    }
    let grid = TimeGrid::spanning(ts[0], ts[ts.len() - 1], ts.len())?;
    for (n, t) in ts.iter().enumerate() {
        if (t - grid.point(n)).abs() > 1e-9 * grid.step().max(1.0) {
            return Err(Error::Format(format!("{}: t column is not uniform", path.display())));
        }
    }
    SampledSignal::new(grid, values)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixManifest {
    pub n: usize,
    pub a: f64,
    pub format: String,
    pub data: String,
}

/// `<stem>.json` manifest plus `<stem>.csv` with one row per matrix row and
/// each entry as adjacent `re,im` columns.
pub fn write_matrix(dir: &Path, stem: &str, m: &DMatrix<Complex64>, a: f64) -> Result<PathBuf> {
    let n = m.nrows();
    let header: Vec<String> = (0..m.ncols())
        .flat_map(|k| [format!("re{k}"), format!("im{k}")])
        .collect();
    let header_refs: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
    let rows = (0..n).map(|j| {
        (0..m.ncols())
            .flat_map(|k| [fmt12(m[(j, k)].re), fmt12(m[(j, k)].im)])
            .collect()
    });
    let data = format!("{stem}.csv");
    atomic_write(&dir.join(&data), &csv_bytes(&header_refs, rows)?)?;
    let manifest = dir.join(format!("{stem}.json"));
    write_json(
        &manifest,
        &MatrixManifest {
            n,
            a,
            format: "csv".into(),
            data,
        },
    )?;
    Ok(manifest)
}

pub fn read_matrix(manifest_path: &Path) -> Result<(MatrixManifest, DMatrix<Complex64>)> {
    let man: MatrixManifest = read_json(manifest_path)?;
    if man.format != "csv" {
        return Err(Error::Format(format!("unsupported matrix format {:?}", man.format)));
    }
    let path = sibling(manifest_path, &man.data);
    let mut r = csv::Reader::from_path(&path)?;
    let mut m = DMatrix::zeros(man.n, man.n);
    let mut rows = 0;
    for (j, rec) in r.records().enumerate() {
        let rec = rec?;
        if j >= man.n || rec.len() != 2 * man.n {
            return Err(Error::Format(format!("{}: shape does not match n = {}", path.display(), man.n)));
        }
        for k in 0..man.n {
            m[(j, k)] = Complex64::new(field(&rec, 2 * k, &path)?, field(&rec, 2 * k + 1, &path)?);
        }
        rows += 1;
    }
    if rows != man.n {
        return Err(Error::Format(format!("{}: {rows} rows, expected {}", path.display(), man.n)));
    }
    Ok((man, m))
}

fn sibling(manifest: &Path, name: &str) -> PathBuf {
    manifest.parent().unwrap_or(Path::new(".")).join(name)
}

/// `n,re,im`.
pub fn write_coefficients_csv(path: &Path, coeffs: &FrfsCoefficients) -> Result<()> {
    let rows = coeffs
        .iter()
        .map(|(n, c)| vec![n.to_string(), fmt12(c.re), fmt12(c.im)]);
    atomic_write(path, &csv_bytes(&["n", "re", "im"], rows)?)
}

pub fn read_coefficients_csv(path: &Path) -> Result<Vec<(i64, Complex64)>> {
    csv_rows(path, &["n", "re", "im"])?
        .iter()
        .map(|r| Ok((field(r, 0, path)?, Complex64::new(field(r, 1, path)?, field(r, 2, path)?))))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleManifest {
    pub model: Option<StationaryModel>,
    pub grid: TimeGrid,
    #[serde(rename = "M")]
    pub realizations: usize,
    pub seed: Option<u64>,
    #[serde(default)]
    pub transform: Option<TransformRecord>,
    pub data: String,
}

/// `<stem>.json` manifest plus `<stem>.csv` with rows `m,n,re,im`.
pub fn write_ensemble(dir: &Path, stem: &str, ens: &Ensemble) -> Result<PathBuf> {
    let n = ens.samples();
    let rows = ens.data().iter().enumerate().map(|(i, z)| {
        vec![(i / n).to_string(), (i % n).to_string(), fmt12(z.re), fmt12(z.im)]
    });
    let data = format!("{stem}.csv");
    atomic_write(&dir.join(&data), &csv_bytes(&["m", "n", "re", "im"], rows)?)?;
    let manifest = dir.join(format!("{stem}.json"));
    write_json(
        &manifest,
        &EnsembleManifest {
            model: ens.model,
            grid: ens.grid,
            realizations: ens.realizations(),
            seed: ens.seed,
            transform: ens.transform.clone(),
            data,
        },
    )?;
    Ok(manifest)
}

pub fn read_ensemble(manifest_path: &Path) -> Result<Ensemble> {
    let man: EnsembleManifest = read_json(manifest_path)?;
    let path = sibling(manifest_path, &man.data);
    let n = man.grid.count();
    let mut data = vec![Complex64::new(0.0, 0.0); n * man.realizations];
    let mut seen = 0usize;
    let mut r = csv::Reader::from_path(&path)?;
    for rec in r.records() {
        let rec = rec?;
        let m: usize = field(&rec, 0, &path)?;
        let k: usize = field(&rec, 1, &path)?;
        if m >= man.realizations || k >= n {
            return Err(Error::Format(format!("{}: index ({m}, {k}) out of range", path.display())));
        }
        data[m * n + k] = Complex64::new(field(&rec, 2, &path)?, field(&rec, 3, &path)?);
        seen += 1;
    }
    if seen != data.len() {
        return Err(Error::Format(format!("{}: {seen} rows, expected {}", path.display(), data.len())));
    }
    let mut ens = Ensemble::from_data(man.grid, man.realizations, data)?;
    ens.model = man.model;
    ens.seed = man.seed;
    ens.transform = man.transform;
    Ok(ens)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceManifest {
    pub u_grid: TimeGrid,
    pub kind: SurfaceKind,
    pub source: SurfaceSource,
    pub data: String,
}

/// `<stem>.json` manifest plus `<stem>.csv` with rows `j,k,re,im,stderr`.
pub fn write_surface(dir: &Path, stem: &str, s: &CorrelationSurface) -> Result<PathBuf> {
    let n = s.n();
    let rows = (0..n).flat_map(|j| {
        (0..n).map(move |k| {
            let v = s.values[(j, k)];
            vec![j.to_string(), k.to_string(), fmt12(v.re), fmt12(v.im), fmt12(s.stderr[(j, k)])]
        })
    });
    let data = format!("{stem}.csv");
    atomic_write(&dir.join(&data), &csv_bytes(&["j", "k", "re", "im", "stderr"], rows)?)?;
    let manifest = dir.join(format!("{stem}.json"));
    write_json(
        &manifest,
        &SurfaceManifest {
            u_grid: s.u_grid,
            kind: s.kind,
            source: s.source,
            data,
        },
    )?;
    Ok(manifest)
}

pub fn read_surface(manifest_path: &Path) -> Result<CorrelationSurface> {
    let man: SurfaceManifest = read_json(manifest_path)?;
    let path = sibling(manifest_path, &man.data);
    let n = man.u_grid.count();
    let mut values = DMatrix::zeros(n, n);
    let mut stderr = DMatrix::zeros(n, n);
    let rows = csv_rows(&path, &["j", "k", "re", "im", "stderr"])?;
    if rows.len() != n * n {
        return Err(Error::Format(format!("{}: {} rows, expected {}", path.display(), rows.len(), n * n)));
    }
    for r in &rows {
        let j: usize = field(r, 0, &path)?;
        let k: usize = field(r, 1, &path)?;
        if j >= n || k >= n {
            return Err(Error::Format(format!("{}: index ({j}, {k}) out of range", path.display())));
        }
        values[(j, k)] = Complex64::new(field(r, 2, &path)?, field(r, 3, &path)?);
        stderr[(j, k)] = field(r, 4, &path)?;
    }
    CorrelationSurface::new(man.u_grid, values, stderr, man.kind, man.source)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt12(1.0), "1.00000000000e0");
        assert_eq!(fmt12(-0.000123456789012345), "-1.23456789012e-4");
        assert_eq!(round12(2.0 / 3.0), 0.666666666667);
    }

    #[test]
    fn atomic_write_replaces_and_leaves_no_temp() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.txt");
        atomic_write(&p, b"one").unwrap();
        atomic_write(&p, b"two").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
        assert!(atomic_write(&dir.path().join("missing/x.txt"), b"").is_err());
    }

    #[test]
    fn json_floats_are_rounded() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.json");
        write_json(&p, &serde_json::json!({"x": 0.1 + 0.2, "seed": u64::MAX})).unwrap();
        let v: Value = read_json(&p).unwrap();
        assert_eq!(v["x"].as_f64().unwrap(), 0.3);
        assert_eq!(v["seed"].as_u64().unwrap(), u64::MAX);
    }

    #[test]
    fn signal_round_trip_and_bad_header() {
        let dir = tempfile::tempdir().unwrap();
        let g = TimeGrid::new(-1.0, 0.25, 9).unwrap();
        let s = SampledSignal::from_fn(g, |t| Complex64::new(t.sin(), t * t));
        let p = dir.path().join("s.csv");
        write_signal_csv(&p, &s).unwrap();
        let back = read_signal_csv(&p).unwrap();
        assert!(back.max_abs_diff(&s) < 1e-11);
        assert!(back.grid().approx_eq(&g));
        fs::write(&p, "x,y\n1,2\n").unwrap();
        assert!(matches!(read_signal_csv(&p), Err(Error::Format(_))));
    }

    #[test]
    fn matrix_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let m = DMatrix::from_fn(3, 3, |j, k| Complex64::new(j as f64, -(k as f64) / 3.0));
        let man = write_matrix(dir.path(), "f", &m, 0.5).unwrap();
        let (meta, back) = read_matrix(&man).unwrap();
        assert_eq!(meta.n, 3);
        assert_eq!(meta.a, 0.5);
        assert!(crate::linalg::max_abs_diff(&m, &back) < 1e-11);
    }

    #[test]
    fn ensemble_and_surface_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let g = TimeGrid::indices(3).unwrap();
        let mut e = Ensemble::from_rows(
            g,
            &[
                vec![Complex64::new(1.0, 0.5); 3],
                vec![Complex64::new(-2.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(3.0, 3.0)],
            ],
        )
        .unwrap();
        e.seed = Some(9);
        let man = write_ensemble(dir.path(), "ens", &e).unwrap();
        let back = read_ensemble(&man).unwrap();
        assert_eq!(back, e);

        let s = crate::estimators::estimate_autocorr(&e).unwrap();
        let man = write_surface(dir.path(), "acf", &s).unwrap();
        let back = read_surface(&man).unwrap();
        assert!(crate::linalg::max_abs_diff(&back.values, &s.values) < 1e-11);
        assert_eq!(back.kind, SurfaceKind::Auto);
        assert_eq!(back.source, SurfaceSource::MonteCarlo);
    }
}
