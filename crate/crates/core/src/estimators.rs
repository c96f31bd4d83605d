//! Monte-Carlo ensemble statistics and the stationarity verdict.
//!
//! Sums run over fixed blocks of realizations, and block partials are
//! combined in block order, so results are bit-identical for any thread
//! count. Means and spreads use two passes.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::processes::Ensemble;
use crate::surface::{CorrelationSurface, SurfaceKind, SurfaceSource};

pub use crate::surface::CorrelationField;

const MIN_BLOCK: usize = 256;
const MAX_BLOCKS: usize = 64;

/// Ensemble mean per grid point, with its standard error.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanEstimate {
    pub grid: TimeGrid,
    pub values: Vec<Complex64>,
    pub stderr: Vec<f64>,
}

fn require_realizations(ens: &Ensemble) -> Result<()> {
    if ens.realizations() < 2 {
        return Err(Error::TooFewRealizations {
            needed: 2,
            got: ens.realizations(),
        });
    }
    Ok(())
}

fn block_size(m: usize) -> usize {
    MIN_BLOCK.max(m.div_ceil(MAX_BLOCKS))
}

/// Sum of `f(row, acc)` over realizations, reduced deterministically.
fn blocked_sum<F>(ens: &Ensemble, len: usize, f: F) -> Vec<f64>
where
    F: Fn(&[Complex64], &mut [f64]) + Sync,
{
    let n = ens.samples();
    let rows = ens.data();
    let partials: Vec<Vec<f64>> = rows
        .par_chunks(block_size(ens.realizations()) * n)
        .map(|block| {
            let mut acc = vec![0.0; len];
            for row in block.chunks_exact(n) {
                f(row, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; len];
    for p in partials {
        for (t, v) in total.iter_mut().zip(p) {
            *t += v;
        }
    }
    total
}

pub fn estimate_mean(ens: &Ensemble) -> Result<MeanEstimate> {
    require_realizations(ens)?;
    let n = ens.samples();
    let m = ens.realizations() as f64;
    let sums = blocked_sum(ens, 2 * n, |row, acc| {
        for (j, z) in row.iter().enumerate() {
            acc[2 * j] += z.re;
            acc[2 * j + 1] += z.im;
        }
    });
    let values: Vec<Complex64> = sums
        .chunks_exact(2)
        .map(|c| Complex64::new(c[0] / m, c[1] / m))
        .collect();
    let spread = blocked_sum(ens, n, |row, acc| {
        for (j, z) in row.iter().enumerate() {
            acc[j] += (z - values[j]).norm_sqr();
        }
    });
    let stderr = spread.iter().map(|s| (s / (m - 1.0) / m).sqrt()).collect();
    Ok(MeanEstimate {
        grid: ens.grid,
        values,
        stderr,
    })
}

/// Upper-triangle index of `(j, k)` with `j ≤ k`.
fn tri(n: usize, j: usize, k: usize) -> usize {
    j * n - j * (j + 1) / 2 + k
}

fn second_moment(ens: &Ensemble, kind: SurfaceKind) -> Result<CorrelationSurface> {
    require_realizations(ens)?;
    let n = ens.samples();
    let m = ens.realizations() as f64;
    let len = n * (n + 1) / 2;
    let pair = move |a: Complex64, b: Complex64| match kind {
        SurfaceKind::Auto => a * b.conj(),
        SurfaceKind::Pseudo => a * b,
    };

    let sums = blocked_sum(ens, 2 * len, |row, acc| {
        for j in 0..n {
            let base = tri(n, j, j);
            for k in j..n {
                let p = pair(row[j], row[k]);
                let i = 2 * (base + k - j);
                acc[i] += p.re;
                acc[i + 1] += p.im;
            }
        }
    });
    let mean: Vec<Complex64> = sums
        .chunks_exact(2)
        .map(|c| Complex64::new(c[0] / m, c[1] / m))
        .collect();
    let spread = blocked_sum(ens, len, |row, acc| {
        for j in 0..n {
            let base = tri(n, j, j);
            for k in j..n {
                let i = base + k - j;
                acc[i] += (pair(row[j], row[k]) - mean[i]).norm_sqr();
            }
        }
    });

    let mut values = DMatrix::zeros(n, n);
    let mut stderr = DMatrix::zeros(n, n);
    for j in 0..n {
        for k in j..n {
            let i = tri(n, j, k);
            let v = mean[i];
            let s = (spread[i] / (m - 1.0) / m).sqrt();
            values[(j, k)] = v;
            stderr[(j, k)] = s;
            stderr[(k, j)] = s;
            values[(k, j)] = match kind {
                SurfaceKind::Auto => v.conj(),
                SurfaceKind::Pseudo => v,
            };
        }
        if kind == SurfaceKind::Auto {
            values[(j, j)].im = 0.0;
        }
    }
    CorrelationSurface::new(ens.grid, values, stderr, kind, SurfaceSource::MonteCarlo)
}

/// `(1/M)·Σ_m z_m[j]·z_m[k]*`, Hermitian by construction.
pub fn estimate_autocorr(ens: &Ensemble) -> Result<CorrelationSurface> {
    second_moment(ens, SurfaceKind::Auto)
}

/// `(1/M)·Σ_m z_m[j]·z_m[k]`, symmetric by construction.
pub fn estimate_pseudo_autocorr(ens: &Ensemble) -> Result<CorrelationSurface> {
    second_moment(ens, SurfaceKind::Pseudo)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Stationary,
    NonstationaryMean,
    #[serde(rename = "NonstationaryACF")]
    NonstationaryAcf,
    ImproperOutput,
}

/// One sigma-threshold test: `passed` iff every compared entry lies within
/// `tol_sigma` standard errors of its reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub passed: bool,
    /// Largest absolute deviation from the reference.
    pub max_deviation: f64,
    /// Largest deviation in units of its standard error.
    pub max_sigma: f64,
}

impl CheckResult {
    fn new() -> Self {
        Self {
            passed: true,
            max_deviation: 0.0,
            max_sigma: 0.0,
        }
    }

    fn record(&mut self, deviation: f64, stderr: f64, scale: f64, tol_sigma: f64) {
        // deterministic ensembles have zero spread; allow round-off only
        let floor = 1e-10 * scale.max(1.0);
        self.max_deviation = self.max_deviation.max(deviation);
        if stderr > 0.0 {
            self.max_sigma = self.max_sigma.max(deviation / stderr);
        } else if deviation > floor {
            self.max_sigma = f64::INFINITY;
        }
        if deviation > tol_sigma * stderr + floor {
            self.passed = false;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationarityReport {
    /// Always `"sigma_threshold"`: per-entry comparison against `tol_sigma`
    /// standard errors, without multiple-comparison correction.
    pub method: String,
    pub tol_sigma: f64,
    pub realizations: Option<usize>,
    pub mean_constant: CheckResult,
    /// Each diagonal `R[j][j+d]` constant (single-entry corner diagonals skipped).
    pub acf_toeplitz: CheckResult,
    /// The same test on `|R[j][k]|`.
    pub acf_amplitude_toeplitz: CheckResult,
    pub pseudo_vanishes: CheckResult,
    pub verdict: Verdict,
}

fn toeplitz_check(s: &CorrelationSurface, tol_sigma: f64, amplitude: bool) -> CheckResult {
    let n = s.n();
    let scale = crate::linalg::max_abs(&s.values);
    let mut out = CheckResult::new();
    let entry = |j: usize, k: usize| {
        let v = s.values[(j, k)];
        if amplitude {
            Complex64::new(v.norm(), 0.0)
        } else {
            v
        }
    };
    for d in -(n as isize - 2)..=(n as isize - 2) {
        let cells: Vec<(usize, usize)> = (0..n)
            .filter_map(|j| {
                let k = j as isize + d;
                (0..n as isize).contains(&k).then_some((j, k as usize))
            })
            .collect();
        let len = cells.len() as f64;
        let avg: Complex64 = cells.iter().map(|&(j, k)| entry(j, k)).sum::<Complex64>() / len;
        let pooled = (cells.iter().map(|&(j, k)| s.stderr[(j, k)].powi(2)).sum::<f64>() / len).sqrt();
        for &(j, k) in &cells {
            out.record((entry(j, k) - avg).norm(), pooled, scale, tol_sigma);
        }
    }
    out
}

/// Classify an estimated output process.
///
/// Checked in order: constant mean, Toeplitz autocorrelation, then (for a
/// complex input only) vanishing pseudo-autocorrelation.
pub fn stationarity_verdict(
    mean: &MeanEstimate,
    acf: &CorrelationSurface,
    pacf: &CorrelationSurface,
    input_is_complex: bool,
    tol_sigma: f64,
) -> Result<StationarityReport> {
    if tol_sigma.is_nan() || tol_sigma <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tol_sigma must be positive, got {tol_sigma}"
        )));
    }
    if !mean.grid.approx_eq(&acf.u_grid) || !acf.u_grid.approx_eq(&pacf.u_grid) {
        return Err(Error::GridMismatch(
            "mean, autocorrelation and pseudo-autocorrelation grids differ".into(),
        ));
    }
    if acf.kind != SurfaceKind::Auto || pacf.kind != SurfaceKind::Pseudo {
        return Err(Error::InvalidParameter("surface kinds out of order".into()));
    }

    let mut mean_constant = CheckResult::new();
    let n = mean.values.len() as f64;
    let avg: Complex64 = mean.values.iter().sum::<Complex64>() / n;
    let mscale = mean.values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for (v, s) in mean.values.iter().zip(&mean.stderr) {
        mean_constant.record((v - avg).norm(), *s, mscale, tol_sigma);
    }

    let acf_toeplitz = toeplitz_check(acf, tol_sigma, false);
    let acf_amplitude_toeplitz = toeplitz_check(acf, tol_sigma, true);

    let mut pseudo_vanishes = CheckResult::new();
    let pscale = crate::linalg::max_abs(&acf.values);
    for (v, s) in pacf.values.iter().zip(pacf.stderr.iter()) {
        pseudo_vanishes.record(v.norm(), *s, pscale, tol_sigma);
    }

    let verdict = if !mean_constant.passed {
        Verdict::NonstationaryMean
    } else if !acf_toeplitz.passed {
        Verdict::NonstationaryAcf
    } else if input_is_complex && !pseudo_vanishes.passed {
        Verdict::ImproperOutput
    } else {
        Verdict::Stationary
    };

    Ok(StationarityReport {
        method: "sigma_threshold".into(),
        tol_sigma,
        realizations: None,
        mean_constant,
        acf_toeplitz,
        acf_amplitude_toeplitz,
        pseudo_vanishes,
        verdict,
    })
}

/// Mean, both surfaces and the verdict for an ensemble in one call.
pub fn analyze_ensemble(
    ens: &Ensemble,
    input_is_complex: bool,
    tol_sigma: f64,
) -> Result<(MeanEstimate, CorrelationSurface, CorrelationSurface, StationarityReport)> {
    let mean = estimate_mean(ens)?;
    let acf = estimate_autocorr(ens)?;
    let pacf = estimate_pseudo_autocorr(ens)?;
    let mut report = stationarity_verdict(&mean, &acf, &pacf, input_is_complex, tol_sigma)?;
    report.realizations = Some(ens.realizations());
    Ok((mean, acf, pacf, report))
}
