//! End-to-end experiments: draw an ensemble, push it through one of the
//! linear transforms, estimate its statistics and compare them with the exact
//! discrete prediction `A·μ`, `A·C·Aᴴ`, `A·P·Aᵀ` (plus the continuous closed
//! form where one applies).

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dfrft::DfrftMatrix;
use crate::error::{Error, Result};
use crate::estimators::{self, MeanEstimate, StationarityReport};
use crate::frfs::{self, FrfsConfig};
use crate::grid::TimeGrid;
use crate::kernel::FrftOperator;
use crate::linalg::toeplitz_matvec;
use crate::order::FractionalOrder;
use crate::processes::{
    generate_mapped, CovarianceStructure, Ensemble, Field, ProcessKind, StationaryModel,
    TransformRecord,
};
use crate::surface::{CorrelationField, CorrelationSurface, SurfaceKind, SurfaceSource};
use crate::theory::{self, OracleWindow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TransformKind {
    #[serde(rename = "DFRFT")]
    Dfrft,
    #[serde(rename = "FRFT_QUAD")]
    FrftQuad,
    #[serde(rename = "FRFS")]
    Frfs,
    #[serde(rename = "DTFRFT")]
    Dtfrft,
}

impl TransformKind {
    pub fn name(&self) -> &'static str {
        match self {
            TransformKind::Dfrft => "DFRFT",
            TransformKind::FrftQuad => "FRFT_QUAD",
            TransformKind::Frfs => "FRFS",
            TransformKind::Dtfrft => "DTFRFT",
        }
    }
}

/// What to apply to each realization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformSpec {
    pub kind: TransformKind,
    pub order: FractionalOrder,
    /// Output grid of the quadrature transform; defaults to the input grid.
    #[serde(default)]
    pub out_grid: Option<TimeGrid>,
    /// Coefficient index range for FRFS/DTFRFT; defaults to `[−N/2, N/2]`.
    #[serde(default)]
    pub index_range: Option<(i64, i64)>,
}

impl TransformSpec {
    pub fn new(kind: TransformKind, order: FractionalOrder) -> Self {
        Self {
            kind,
            order,
            out_grid: None,
            index_range: None,
        }
    }

    pub fn with_out_grid(mut self, grid: TimeGrid) -> Self {
        self.out_grid = Some(grid);
        self
    }

    pub fn with_index_range(mut self, n_min: i64, n_max: i64) -> Self {
        self.index_range = Some((n_min, n_max));
        self
    }

    fn frfs_config(&self, grid: &TimeGrid) -> Result<FrfsConfig> {
        let width = grid.end() - grid.start();
        let centred = (grid.start() + grid.end()).abs() <= 1e-9 * width;
        if !centred {
            return Err(Error::GridMismatch(format!(
                "FRFS needs a grid centred on 0, got [{}, {}]",
                grid.start(),
                grid.end()
            )));
        }
        match self.index_range {
            Some((lo, hi)) => FrfsConfig::new(self.order, width, lo, hi),
            None => FrfsConfig::with_default_range(self.order, width, grid.count()),
        }
    }
}

/// A transform fixed to an input grid: a dense `out × in` matrix, row-major.
#[derive(Debug, Clone)]
pub struct LinearTransform {
    pub spec: TransformSpec,
    pub in_grid: TimeGrid,
    pub out_grid: TimeGrid,
    /// Exact identity (a ≡ 0 mod 4 DFRFT); applied as a copy.
    identity: bool,
    rows: usize,
    cols: usize,
    matrix: Vec<Complex64>,
}

impl LinearTransform {
    pub fn new(spec: TransformSpec, in_grid: TimeGrid) -> Result<Self> {
        let n = in_grid.count();
        let (out_grid, rows, matrix, identity) = match spec.kind {
            TransformKind::Dfrft => {
                if spec.order.a().rem_euclid(4.0) == 0.0 {
                    let eye = DMatrix::<Complex64>::identity(n, n);
                    (in_grid, n, row_major(&eye), true)
                } else {
                    let f = DfrftMatrix::build(n, spec.order)?;
                    (in_grid, n, row_major(f.matrix()), false)
                }
            }
            TransformKind::FrftQuad => {
                let out = spec.out_grid.unwrap_or(in_grid);
                let op = FrftOperator::new(spec.order, in_grid, out.points().collect())?;
                (out, out.count(), op.matrix().to_vec(), false)
            }
            TransformKind::Frfs | TransformKind::Dtfrft => {
                let mut config = spec.frfs_config(&in_grid)?;
                if spec.kind == TransformKind::Dtfrft {
                    config = config.quarter_turned()?;
                }
                let op = frfs::analysis_operator(&config, &in_grid)?;
                let scale = config.correlation_scale().sqrt();
                let matrix = op.matrix().iter().map(|z| z * scale).collect();
                let out = TimeGrid::new(config.n_min() as f64, 1.0, config.len())?;
                (out, config.len(), matrix, false)
            }
        };
        Ok(Self {
            spec,
            in_grid,
            out_grid,
            identity,
            rows,
            cols: n,
            matrix,
        })
    }

    pub fn record(&self) -> TransformRecord {
        TransformRecord {
            method: self.spec.kind.name().into(),
            order: self.spec.order.a(),
        }
    }

    pub fn matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.matrix)
    }

    pub fn row(&self, k: usize) -> &[Complex64] {
        &self.matrix[k * self.cols..(k + 1) * self.cols]
    }

    pub fn apply_into(&self, z: &[Complex64], out: &mut [Complex64]) {
        if self.identity {
            out.copy_from_slice(z);
            return;
        }
        for (o, row) in out.iter_mut().zip(self.matrix.chunks_exact(self.cols)) {
            *o = row.iter().zip(z).map(|(a, b)| a * b).sum();
        }
    }
}

fn row_major(m: &DMatrix<Complex64>) -> Vec<Complex64> {
    let mut v = Vec::with_capacity(m.len());
    for j in 0..m.nrows() {
        v.extend(m.row(j).iter());
    }
    v
}

/// Apply `spec` to every realization of `ens`.
pub fn transform_ensemble(ens: &Ensemble, spec: TransformSpec) -> Result<Ensemble> {
    let t = LinearTransform::new(spec, ens.grid)?;
    let out_n = t.out_grid.count();
    let mut data = vec![Complex64::new(0.0, 0.0); out_n * ens.realizations()];
    data.par_chunks_mut(out_n)
        .zip(ens.data().par_chunks(ens.samples()))
        .for_each(|(out, z)| t.apply_into(z, out));
    let mut out = Ensemble::from_data(t.out_grid, ens.realizations(), data)?;
    out.model = ens.model;
    out.seed = ens.seed;
    out.transform = Some(t.record());
    Ok(out)
}

/// Generate and transform in one streaming pass; equal to
/// `transform_ensemble(generate(..))` without holding the input ensemble.
pub fn simulate(
    model: &StationaryModel,
    grid: TimeGrid,
    realizations: usize,
    seed: u64,
    transform: &LinearTransform,
) -> Result<Ensemble> {
    if !transform.in_grid.approx_eq(&grid) {
        return Err(Error::GridMismatch("transform built for a different grid".into()));
    }
    let out_n = transform.out_grid.count();
    let data = generate_mapped(model, grid, realizations, seed, out_n, |z, out| {
        transform.apply_into(z, out)
    })?;
    let mut ens = Ensemble::from_data(transform.out_grid, realizations, data)?;
    ens.model = Some(*model);
    ens.seed = Some(seed);
    ens.transform = Some(transform.record());
    Ok(ens)
}

/// Lag functions of the sampled covariance and pseudo-covariance, as
/// functions of the index offset `j − k`.
type Lag = Box<dyn Fn(isize) -> Complex64 + Sync>;

fn sampled_lags(model: &StationaryModel, grid: &TimeGrid) -> (Lag, Lag) {
    let n = grid.count();
    let dt = grid.step();
    let zero = Complex64::new(0.0, 0.0);
    match model.process {
        ProcessKind::ColoredGaussian {
            acf,
            field,
            covariance,
        } => {
            let lag = move |d: isize| {
                let d = d.unsigned_abs();
                let d = match covariance {
                    CovarianceStructure::Toeplitz => d,
                    CovarianceStructure::Circulant => d.min(n - d),
                };
                Complex64::new(acf.eval(d as f64 * dt), 0.0)
            };
            let pseudo: Lag = match field {
                Field::Real => Box::new(lag),
                Field::ProperComplex => Box::new(move |_| zero),
            };
            (Box::new(lag), pseudo)
        }
        _ => {
            let var = Complex64::new(model.per_sample_variance(dt).unwrap_or(0.0), 0.0);
            let pvar = model.white_pseudo_weight().unwrap_or_default() / dt;
            (
                Box::new(move |d| if d == 0 { var } else { zero }),
                Box::new(move |d| if d == 0 { pvar } else { zero }),
            )
        }
    }
}

/// Exact output mean and uncentred second moments of the transformed
/// sampled process, `A·μ`, `A·C·Aᴴ + (Aμ)(Aμ)ᴴ`, `A·P·Aᵀ + (Aμ)(Aμ)ᵀ`.
pub struct DiscreteTheory {
    pub mean: Vec<Complex64>,
    pub autocorr: CorrelationSurface,
    pub pseudo: CorrelationSurface,
}

pub fn discrete_theory(model: &StationaryModel, transform: &LinearTransform) -> Result<DiscreteTheory> {
    let grid = transform.in_grid;
    let rows = transform.out_grid.count();
    let (cov, pseudo) = sampled_lags(model, &grid);
    let mean_in = vec![model.mean; grid.count()];
    let mut mean = vec![Complex64::new(0.0, 0.0); rows];
    transform.apply_into(&mean_in, &mut mean);

    let cols: Vec<(Vec<Complex64>, Vec<Complex64>)> = (0..rows)
        .into_par_iter()
        .map(|k| {
            let ak = transform.row(k);
            let conj: Vec<Complex64> = ak.iter().map(|z| z.conj()).collect();
            let yc = toeplitz_matvec(&cov, &conj);
            let yp = toeplitz_matvec(&pseudo, ak);
            let c = (0..rows)
                .map(|j| transform.row(j).iter().zip(&yc).map(|(a, y)| a * y).sum())
                .collect();
            let p = (0..rows)
                .map(|j| transform.row(j).iter().zip(&yp).map(|(a, y)| a * y).sum())
                .collect();
            (c, p)
        })
        .collect();
    let c = DMatrix::from_fn(rows, rows, |j, k| cols[k].0[j] + mean[j] * mean[k].conj());
    let p = DMatrix::from_fn(rows, rows, |j, k| cols[k].1[j] + mean[j] * mean[k]);
    let zeros = DMatrix::zeros(rows, rows);
    let u = transform.out_grid;
    Ok(DiscreteTheory {
        mean,
        autocorr: CorrelationSurface::new(u, c, zeros.clone(), SurfaceKind::Auto, SurfaceSource::Theory)?,
        pseudo: CorrelationSurface::new(u, p, zeros, SurfaceKind::Pseudo, SurfaceSource::Theory)?,
    })
}

/// Largest `|mc − theory|/stderr` over the entries selected by `keep`; entries
/// with zero standard error count only if they differ beyond round-off.
fn max_sigma(
    mc: &CorrelationSurface,
    theory: &DMatrix<Complex64>,
    keep: impl Fn(usize, usize) -> bool,
) -> f64 {
    let n = mc.n();
    let mut worst = 0.0_f64;
    for j in 0..n {
        for k in 0..n {
            if !keep(j, k) {
                continue;
            }
            let d = (mc.values[(j, k)] - theory[(j, k)]).norm();
            let s = mc.stderr[(j, k)];
            let z = if s > 0.0 {
                d / s
            } else if d > 1e-10 {
                f64::INFINITY
            } else {
                0.0
            };
            worst = worst.max(z);
        }
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaComparison {
    pub mean_max_sigma: f64,
    pub autocorr_max_sigma: f64,
    pub pseudo_max_sigma: f64,
    pub within_tol: bool,
}

/// White-input delta check on the output sample covariance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WhiteDeltaCheck {
    pub expected_diagonal: f64,
    pub diagonal_max_sigma: f64,
    pub off_diagonal_max: f64,
    /// `5/√M`, scaled by the expected diagonal.
    pub off_diagonal_bound: f64,
    pub passed: bool,
}

/// Closed-form continuous overlay (quadrature transforms of colored inputs).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OverlaySummary {
    /// Largest `|mc − closed form|/stderr` at interior points.
    pub interior_max_sigma: f64,
    /// Largest `|oracle − closed form|` relative to the surface peak.
    pub oracle_max_rel: f64,
    pub interior_half_width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub transform: TransformRecord,
    pub model: StationaryModel,
    pub realizations: usize,
    pub seed: u64,
    pub stationarity: StationarityReport,
    pub mc_vs_discrete_theory: SigmaComparison,
    pub pseudo_max_magnitude: f64,
    pub pseudo_nonzero: bool,
    pub white_delta: Option<WhiteDeltaCheck>,
    pub closed_form_overlay: Option<OverlaySummary>,
}

/// Everything a verification run produces.
pub struct VerifyOutcome {
    pub report: VerifyReport,
    pub mean: MeanEstimate,
    pub autocorr: CorrelationSurface,
    pub pseudo: CorrelationSurface,
    pub theory: DiscreteTheory,
    /// Closed-form and oracle surfaces on the output grid, when applicable.
    pub overlay: Option<(CorrelationSurface, CorrelationSurface)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub tol_sigma: f64,
    /// Interior region `|u| ≤ interior_half_width` for the closed-form overlay.
    pub interior_half_width: Option<f64>,
    /// Oracle window for the overlay; defaults to the input grid's extent.
    pub oracle_window: Option<OracleWindow>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            tol_sigma: 4.0,
            interior_half_width: None,
            oracle_window: None,
        }
    }
}

pub fn verify(
    model: &StationaryModel,
    grid: TimeGrid,
    spec: TransformSpec,
    realizations: usize,
    seed: u64,
    opts: VerifyOptions,
) -> Result<VerifyOutcome> {
    let transform = LinearTransform::new(spec, grid)?;
    let ens = simulate(model, grid, realizations, seed, &transform)?;
    let (mean, acf, pacf, stationarity) =
        estimators::analyze_ensemble(&ens, model.is_complex(), opts.tol_sigma)?;
    let theory = discrete_theory(model, &transform)?;

    let mean_max_sigma = mean
        .values
        .iter()
        .zip(&theory.mean)
        .zip(&mean.stderr)
        .map(|((v, t), s)| {
            let d = (v - t).norm();
            if *s > 0.0 {
                d / s
            } else if d > 1e-10 {
                f64::INFINITY
            } else {
                0.0
            }
        })
        .fold(0.0, f64::max);
    let autocorr_max_sigma = max_sigma(&acf, &theory.autocorr.values, |_, _| true);
    let pseudo_max_sigma = max_sigma(&pacf, &theory.pseudo.values, |_, _| true);
    let comparison = SigmaComparison {
        mean_max_sigma,
        autocorr_max_sigma,
        pseudo_max_sigma,
        within_tol: mean_max_sigma <= opts.tol_sigma
            && autocorr_max_sigma <= opts.tol_sigma
            && pseudo_max_sigma <= opts.tol_sigma,
    };

    let pseudo_max_magnitude = crate::linalg::max_abs(&pacf.values);
    let pseudo_nonzero = !stationarity.pseudo_vanishes.passed;

    let white_delta = if model.is_white() && model.mean == Complex64::new(0.0, 0.0) {
        let n = acf.n();
        let expected = theory.autocorr.values[(0, 0)].re;
        let mut diag_sigma = 0.0_f64;
        let mut off = 0.0_f64;
        for j in 0..n {
            for k in 0..n {
                if j == k {
                    let d = (acf.values[(j, j)].re - theory.autocorr.values[(j, j)].re).abs();
                    diag_sigma = diag_sigma.max(d / acf.stderr[(j, j)].max(f64::MIN_POSITIVE));
                } else {
                    off = off.max(acf.values[(j, k)].norm());
                }
            }
        }
        let bound = 5.0 * expected / (realizations as f64).sqrt();
        Some(WhiteDeltaCheck {
            expected_diagonal: expected,
            diagonal_max_sigma: diag_sigma,
            off_diagonal_max: off,
            off_diagonal_bound: bound,
            passed: diag_sigma <= opts.tol_sigma && off < bound,
        })
    } else {
        None
    };

    let (overlay, closed_form_overlay) = match (spec.kind, model.acf_shape()) {
        (TransformKind::FrftQuad, Some(acf_shape)) if spec.order.require_finite_tangent().is_ok() => {
            let u = transform.out_grid;
            let r = theory::real_lag_fn(move |t| acf_shape.eval(t));
            let field = theory::PredictedAutocorr::new(r.clone(), spec.order)?;
            let mut closed = CorrelationSurface::from_field(u, SurfaceKind::Auto, &field)?;
            // the estimator is uncentred
            let mu: Vec<Complex64> = u
                .points()
                .map(|x| theory::predicted_mean(model.mean, spec.order, x))
                .collect::<Result<_>>()?;
            for j in 0..u.count() {
                for k in 0..u.count() {
                    closed.values[(j, k)] += mu[j] * mu[k].conj();
                }
            }
            let window = opts
                .oracle_window
                .unwrap_or(OracleWindow::new(grid.max_abs(), grid.step()));
            let mut oracle = theory::numeric_output_surface(&r, spec.order, u, SurfaceKind::Auto, window)?;
            for j in 0..u.count() {
                for k in 0..u.count() {
                    oracle.values[(j, k)] += mu[j] * mu[k].conj();
                }
            }
            let half = opts.interior_half_width.unwrap_or(u.max_abs());
            let interior = |j: usize, k: usize| u.point(j).abs() <= half + 1e-12 && u.point(k).abs() <= half + 1e-12;
            let interior_max_sigma = max_sigma(&acf, &closed.values, interior);
            let peak = spec.order.sec().abs() * acf_shape.eval(0.0);
            let oracle_max_rel = crate::linalg::max_abs_diff(&oracle.values, &closed.values) / peak;
            (
                Some((closed, oracle)),
                Some(OverlaySummary {
                    interior_max_sigma,
                    oracle_max_rel,
                    interior_half_width: half,
                }),
            )
        }
        _ => (None, None),
    };

    let report = VerifyReport {
        transform: transform.record(),
        model: *model,
        realizations,
        seed,
        stationarity,
        mc_vs_discrete_theory: comparison,
        pseudo_max_magnitude,
        pseudo_nonzero,
        white_delta,
        closed_form_overlay,
    };
    Ok(VerifyOutcome {
        report,
        mean,
        autocorr: acf,
        pseudo: pacf,
        theory,
        overlay,
    })
}

/// Coefficient correlations predicted from any correlation field, on the
/// lattice of a transform's FRFS config.
pub fn frfs_coefficient_theory(field: &impl CorrelationField, spec: &TransformSpec, grid: &TimeGrid) -> Result<DMatrix<Complex64>> {
    let config = spec.frfs_config(grid)?;
    frfs::coeff_correlations(field, &config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::processes::{generate, AcfShape};

    fn white(n0: f64) -> StationaryModel {
        StationaryModel::zero_mean(ProcessKind::WhiteProperComplex { noise_level: n0 }).unwrap()
    }

    #[test]
    fn zero_order_dfrft_is_bit_exact_identity() {
        let g = TimeGrid::indices(16).unwrap();
        let e = generate(&white(2.0), g, 10, 1).unwrap();
        let t = transform_ensemble(&e, TransformSpec::new(TransformKind::Dfrft, FractionalOrder::new(0.0))).unwrap();
        assert_eq!(t.data(), e.data());
        assert_eq!(t.transform.as_ref().unwrap().method, "DFRFT");
    }

    #[test]
    fn unit_order_dfrft_of_impulse_is_flat() {
        let g = TimeGrid::indices(8).unwrap();
        let mut row = vec![Complex64::new(0.0, 0.0); 8];
        row[0] = Complex64::new(1.0, 0.0);
        let e = Ensemble::from_rows(g, &[row]).unwrap();
        let t = transform_ensemble(&e, TransformSpec::new(TransformKind::Dfrft, FractionalOrder::new(1.0))).unwrap();
        for z in t.data() {
            assert!((z - Complex64::new(8f64.sqrt().recip(), 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn streaming_simulation_matches_two_step() {
        let g = TimeGrid::symmetric(4.0, 0.125).unwrap();
        let m = StationaryModel::zero_mean(ProcessKind::ColoredGaussian {
            acf: AcfShape::Exponential { variance: 1.0, scale: 1.0 },
            field: Field::Real,
            covariance: CovarianceStructure::Toeplitz,
        })
        .unwrap();
        let spec = TransformSpec::new(TransformKind::FrftQuad, FractionalOrder::from_angle(0.7))
            .with_out_grid(TimeGrid::symmetric(2.0, 0.5).unwrap());
        let t = LinearTransform::new(spec, g).unwrap();
        let a = simulate(&m, g, 7, 3, &t).unwrap();
        let b = transform_ensemble(&generate(&m, g, 7, 3).unwrap(), spec).unwrap();
        assert_eq!(a.data(), b.data());
    }

    #[test]
    fn frfs_transform_of_basis_function() {
        let g = TimeGrid::spanning(-4.0, 4.0, 513).unwrap();
        let spec = TransformSpec::new(TransformKind::Frfs, FractionalOrder::from_angle(0.8)).with_index_range(-5, 5);
        let config = FrfsConfig::new(spec.order, 8.0, -5, 5).unwrap();
        let row: Vec<Complex64> = g.points().map(|t| frfs::frfs_basis(&config, 3, t).unwrap()).collect();
        let e = Ensemble::from_rows(g, &[row]).unwrap();
        let t = transform_ensemble(&e, spec).unwrap();
        for (i, z) in t.data().iter().enumerate() {
            let n = i as i64 - 5;
            let expect = if n == 3 { 1.0 } else { 0.0 };
            assert!((z - Complex64::new(expect, 0.0)).norm() < 1e-3, "n = {n}: {z}");
        }
        let off = TimeGrid::new(0.0, 0.1, 11).unwrap();
        assert!(LinearTransform::new(spec, off).is_err());
    }

    #[test]
    fn discrete_theory_matches_dense_propagation() {
        let g = TimeGrid::new(0.0, 0.2, 12).unwrap();
        for cov in [CovarianceStructure::Toeplitz, CovarianceStructure::Circulant] {
            let m = StationaryModel::new(
                Complex64::new(0.5, 0.0),
                ProcessKind::ColoredGaussian {
                    acf: AcfShape::Gaussian { variance: 2.0, width: 0.5 },
                    field: Field::Real,
                    covariance: cov,
                },
            )
            .unwrap();
            let t = LinearTransform::new(TransformSpec::new(TransformKind::Dfrft, FractionalOrder::new(0.4)), g).unwrap();
            let th = discrete_theory(&m, &t).unwrap();
            let stats = m.sampled_statistics(&g).unwrap();
            let dense = theory::propagate_statistics(&t.matrix(), &stats).unwrap();
            let mm = &dense.mean;
            let c = &dense.covariance + mm * mm.adjoint();
            let p = &dense.pseudo + mm * mm.transpose();
            assert!(crate::linalg::max_abs_diff(&th.autocorr.values, &c) < 1e-12);
            assert!(crate::linalg::max_abs_diff(&th.pseudo.values, &p) < 1e-12);
        }
    }

    #[test]
    fn verify_small_white_run_is_stationary() {
        let g = TimeGrid::indices(8).unwrap();
        let spec = TransformSpec::new(TransformKind::Dfrft, FractionalOrder::new(0.5));
        let out = verify(&white(2.0), g, spec, 4000, 5, VerifyOptions::default()).unwrap();
        assert_eq!(out.report.stationarity.verdict, crate::estimators::Verdict::Stationary);
        assert!(out.report.white_delta.unwrap().passed);
        assert!(out.overlay.is_none());
    }
}
