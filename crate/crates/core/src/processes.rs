//! Wide-sense stationary input models and seeded ensemble generation.
//!
//! White kinds are sampled with per-sample variance `(N₀/2)/Δt`, so that a
//! Riemann sum of the samples reproduces the continuous delta correlation
//! `(N₀/2)·δ(τ)`. Colored Gaussian processes are drawn by circulant embedding
//! and fall back to a dense Cholesky factor when the embedding is indefinite.
//!
//! Realization `m` is drawn from ChaCha20 seeded with `seed` on stream `m`, so
//! the output never depends on the number of worker threads.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::dfrft::CovariancePair;
use crate::error::{Error, Result};
use crate::grid::{SampledSignal, TimeGrid};

/// Largest size for which the dense Cholesky fallback is attempted.
pub const CHOLESKY_FALLBACK_MAX: usize = 4096;
const EMBEDDING_DOUBLINGS: usize = 3;
const EIGEN_NEGATIVE_TOL: f64 = 1e-8;

/// Real, even autocorrelation shapes for colored processes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum AcfShape {
    /// `variance·exp(−|τ|/scale)`.
    Exponential { variance: f64, scale: f64 },
    /// `variance·exp(−τ²/(2·width²))`.
    Gaussian { variance: f64, width: f64 },
}

impl AcfShape {
    pub fn eval(&self, tau: f64) -> f64 {
        match *self {
            AcfShape::Exponential { variance, scale } => variance * (-tau.abs() / scale).exp(),
            AcfShape::Gaussian { variance, width } => {
                variance * (-0.5 * tau * tau / (width * width)).exp()
            }
        }
    }

    /// `∫ R(τ)·e^{−iωτ} dτ`.
    pub fn psd(&self, omega: f64) -> f64 {
        match *self {
            AcfShape::Exponential { variance, scale } => {
                2.0 * variance * scale / (1.0 + omega * omega * scale * scale)
            }
            AcfShape::Gaussian { variance, width } => {
                variance
                    * width
                    * std::f64::consts::TAU.sqrt()
                    * (-0.5 * omega * omega * width * width).exp()
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let (v, s) = match *self {
            AcfShape::Exponential { variance, scale } => (variance, scale),
            AcfShape::Gaussian { variance, width } => (variance, width),
        };
        if !(v >= 0.0 && v.is_finite() && s > 0.0 && s.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "ACF needs variance ≥ 0 and a positive length scale, got {self:?}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    Real,
    ProperComplex,
}

/// How the sampled covariance is built from the ACF.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CovarianceStructure {
    /// `C[j][k] = R((j − k)·Δt)`.
    #[default]
    Toeplitz,
    /// `C[j][k] = R(d·Δt)` with `d` the wrap-around distance `min(|j−k|, N−|j−k|)`.
    Circulant,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProcessKind {
    WhiteReal {
        noise_level: f64,
    },
    WhiteProperComplex {
        noise_level: f64,
    },
    /// Pseudo-correlation `ρ·(N₀/2)·δ(τ)` with `|ρ| ≤ 1`.
    WhiteImproperComplex {
        noise_level: f64,
        rho: Complex64,
    },
    ColoredGaussian {
        acf: AcfShape,
        field: Field,
        #[serde(default)]
        covariance: CovarianceStructure,
    },
}

/// A stationary process `μ + x(t)` where `x` is zero-mean with the given kind.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationaryModel {
    #[serde(default)]
    pub mean: Complex64,
    pub process: ProcessKind,
}

/// A correlation value that is either an ordinary function value or the
/// weight of a delta at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AcfValue {
    Value(Complex64),
    DeltaWeight(Complex64),
}

impl AcfValue {
    pub fn into_inner(self) -> Complex64 {
        match self {
            AcfValue::Value(v) | AcfValue::DeltaWeight(v) => v,
        }
    }
}

impl StationaryModel {
    pub fn new(mean: Complex64, process: ProcessKind) -> Result<Self> {
        let m = Self { mean, process };
        m.validate()?;
        Ok(m)
    }

    pub fn zero_mean(process: ProcessKind) -> Result<Self> {
        Self::new(Complex64::new(0.0, 0.0), process)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mean.re.is_finite() && self.mean.im.is_finite()) {
            return Err(Error::InvalidParameter("mean must be finite".into()));
        }
        let check_level = |n0: f64| {
            if n0 >= 0.0 && n0.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "noise level must be ≥ 0, got {n0}"
                )))
            }
        };
        match self.process {
            ProcessKind::WhiteReal { noise_level }
            | ProcessKind::WhiteProperComplex { noise_level } => check_level(noise_level)?,
            ProcessKind::WhiteImproperComplex { noise_level, rho } => {
                check_level(noise_level)?;
                if rho.norm().is_nan() || rho.norm() > 1.0 + 1e-12 {
                    return Err(Error::InvalidParameter(format!(
                        "improperness |ρ| must be ≤ 1, got {}",
                        rho.norm()
                    )));
                }
            }
            ProcessKind::ColoredGaussian { acf, .. } => acf.validate()?,
        }
        if self.is_real() && self.mean.im != 0.0 {
            return Err(Error::InvalidParameter(
                "a real process needs a real mean".into(),
            ));
        }
        Ok(())
    }

    pub fn is_real(&self) -> bool {
        matches!(
            self.process,
            ProcessKind::WhiteReal { .. }
                | ProcessKind::ColoredGaussian {
                    field: Field::Real,
                    ..
                }
        )
    }

    pub fn is_complex(&self) -> bool {
        !self.is_real()
    }

    pub fn is_white(&self) -> bool {
        !matches!(self.process, ProcessKind::ColoredGaussian { .. })
    }

    /// `N₀/2` for white kinds.
    pub fn white_weight(&self) -> Option<f64> {
        match self.process {
            ProcessKind::WhiteReal { noise_level }
            | ProcessKind::WhiteProperComplex { noise_level }
            | ProcessKind::WhiteImproperComplex { noise_level, .. } => Some(0.5 * noise_level),
            ProcessKind::ColoredGaussian { .. } => None,
        }
    }

    /// `ρ·(N₀/2)` (or `N₀/2` for real white, `0` for proper white).
    pub fn white_pseudo_weight(&self) -> Option<Complex64> {
        let w = self.white_weight()?;
        Some(match self.process {
            ProcessKind::WhiteReal { .. } => Complex64::new(w, 0.0),
            ProcessKind::WhiteImproperComplex { rho, .. } => rho * w,
            _ => Complex64::new(0.0, 0.0),
        })
    }

    pub fn acf_shape(&self) -> Option<AcfShape> {
        match self.process {
            ProcessKind::ColoredGaussian { acf, .. } => Some(acf),
            _ => None,
        }
    }

    /// Covariance `E{x(t+τ)·x*(t)}` of the fluctuation. White kinds report the
    /// weight of their delta at `τ = 0` and zero elsewhere.
    pub fn acf(&self, tau: f64) -> AcfValue {
        match self.process {
            ProcessKind::ColoredGaussian { acf, .. } => {
                AcfValue::Value(Complex64::new(acf.eval(tau), 0.0))
            }
            _ => {
                let w = if tau == 0.0 { self.white_weight().unwrap_or(0.0) } else { 0.0 };
                AcfValue::DeltaWeight(Complex64::new(w, 0.0))
            }
        }
    }

    /// Pseudo-covariance `E{x(t+τ)·x(t)}`.
    pub fn pseudo_acf(&self, tau: f64) -> AcfValue {
        match self.process {
            ProcessKind::ColoredGaussian { acf, field, .. } => AcfValue::Value(match field {
                Field::Real => Complex64::new(acf.eval(tau), 0.0),
                Field::ProperComplex => Complex64::new(0.0, 0.0),
            }),
            _ => {
                let w = if tau == 0.0 {
                    self.white_pseudo_weight().unwrap_or_default()
                } else {
                    Complex64::new(0.0, 0.0)
                };
                AcfValue::DeltaWeight(w)
            }
        }
    }

    /// Variance of one white sample on a grid of step `dt`.
    pub fn per_sample_variance(&self, dt: f64) -> Option<f64> {
        self.white_weight().map(|w| w / dt)
    }

    /// Exact mean, covariance and pseudo-covariance of the sampled vector.
    pub fn sampled_statistics(&self, grid: &TimeGrid) -> Result<CovariancePair> {
        let n = grid.count();
        let dt = grid.step();
        let mean = nalgebra::DVector::from_element(n, self.mean);
        let (cov, pseudo) = match self.process {
            ProcessKind::ColoredGaussian {
                acf,
                field,
                covariance,
            } => {
                let lag = |j: usize, k: usize| {
                    let d = j.abs_diff(k);
                    let d = match covariance {
                        CovarianceStructure::Toeplitz => d,
                        CovarianceStructure::Circulant => d.min(n - d),
                    };
                    Complex64::new(acf.eval(d as f64 * dt), 0.0)
                };
                let c = DMatrix::from_fn(n, n, lag);
                let p = match field {
                    Field::Real => c.clone(),
                    Field::ProperComplex => DMatrix::zeros(n, n),
                };
                (c, p)
            }
            _ => {
                let var = self.per_sample_variance(dt).unwrap_or(0.0);
                let pvar = self.white_pseudo_weight().unwrap_or_default() / dt;
                (
                    DMatrix::from_diagonal_element(n, n, Complex64::new(var, 0.0)),
                    DMatrix::from_diagonal_element(n, n, pvar),
                )
            }
        };
        CovariancePair::new(mean, cov, pseudo)
    }
}

/// How an ensemble was produced from its parent, if it is a transformed one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformRecord {
    pub method: String,
    pub order: f64,
}

/// `M` realizations of `N` samples each, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub grid: TimeGrid,
    pub model: Option<StationaryModel>,
    pub seed: Option<u64>,
    pub transform: Option<TransformRecord>,
    data: Vec<Complex64>,
    realizations: usize,
}

impl Ensemble {
    pub fn from_data(grid: TimeGrid, realizations: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != realizations * grid.count() {
            return Err(Error::DimensionMismatch {
                expected: realizations * grid.count(),
                got: data.len(),
            });
        }
        Ok(Self {
            grid,
            model: None,
            seed: None,
            transform: None,
            data,
            realizations,
        })
    }

    pub fn from_rows(grid: TimeGrid, rows: &[Vec<Complex64>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * grid.count());
        for r in rows {
            if r.len() != grid.count() {
                return Err(Error::DimensionMismatch {
                    expected: grid.count(),
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::from_data(grid, rows.len(), data)
    }

    pub fn realizations(&self) -> usize {
        self.realizations
    }

    pub fn samples(&self) -> usize {
        self.grid.count()
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn realization(&self, m: usize) -> &[Complex64] {
        let n = self.samples();
        &self.data[m * n..(m + 1) * n]
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, Complex64> {
        self.data.chunks_exact(self.samples().max(1))
    }

    pub fn signal(&self, m: usize) -> SampledSignal {
        SampledSignal::new(self.grid, self.realization(m).to_vec())
            .expect("row length matches grid")
    }

    /// Whether every sample has zero imaginary part.
    pub fn is_real_valued(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }
}

/// Per-realization sampler; `draw` fills one row from an RNG.
enum Sampler {
    White {
        mean: Complex64,
        // z = mean + a·g₁ + b·g₂
        a: Complex64,
        b: Complex64,
    },
    Embedding {
        mean: Complex64,
        sqrt_lambda: Vec<f64>,
        fft: Arc<dyn Fft<f64>>,
        real: bool,
    },
    Cholesky {
        mean: Complex64,
        factor: DMatrix<f64>,
        real: bool,
    },
}

fn normal(rng: &mut ChaCha20Rng) -> f64 {
    StandardNormal.sample(rng)
}

impl Sampler {
    fn draw(&self, rng: &mut ChaCha20Rng, out: &mut [Complex64]) {
        match self {
            Sampler::White { mean, a, b } => {
                for z in out.iter_mut() {
                    let g1 = normal(rng);
                    let g2 = normal(rng);
                    *z = mean + a * g1 + b * g2;
                }
            }
            Sampler::Embedding {
                mean,
                sqrt_lambda,
                fft,
                real,
            } => {
                let mut buf: Vec<Complex64> = sqrt_lambda
                    .iter()
                    .map(|s| {
                        let g1 = normal(rng);
                        let g2 = normal(rng);
                        Complex64::new(g1, g2) * *s
                    })
                    .collect();
                fft.process(&mut buf);
                // E{w·wᴴ} = 2C
                for (z, w) in out.iter_mut().zip(&buf) {
                    *z = if *real {
                        mean + w.re
                    } else {
                        mean + w * std::f64::consts::FRAC_1_SQRT_2
                    };
                }
            }
            Sampler::Cholesky { mean, factor, real } => {
                let n = out.len();
                let g: Vec<Complex64> = (0..n)
                    .map(|_| {
                        if *real {
                            Complex64::new(normal(rng), 0.0)
                        } else {
                            Complex64::new(normal(rng), normal(rng)) * std::f64::consts::FRAC_1_SQRT_2
                        }
                    })
                    .collect();
                for (j, z) in out.iter_mut().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (k, gk) in g.iter().enumerate().take(j + 1) {
                        acc += gk * factor[(j, k)];
                    }
                    *z = mean + acc;
                }
            }
        }
    }
}

/// Eigenvalues of the circulant with first row `row`, which must be even.
fn circulant_spectrum(row: &[f64], planner: &mut FftPlanner<f64>) -> Vec<f64> {
    let mut buf: Vec<Complex64> = row.iter().map(|&r| Complex64::new(r, 0.0)).collect();
    planner.plan_fft_forward(buf.len()).process(&mut buf);
    buf.iter().map(|z| z.re).collect()
}

fn spectrum_ok(lambda: &[f64]) -> bool {
    let max = lambda.iter().cloned().fold(0.0, f64::max);
    let min = lambda.iter().cloned().fold(f64::INFINITY, f64::min);
    min >= -EIGEN_NEGATIVE_TOL * max.max(f64::MIN_POSITIVE)
}

fn embedding_sampler(
    mean: Complex64,
    lambda: Vec<f64>,
    planner: &mut FftPlanner<f64>,
    real: bool,
) -> Sampler {
    let p = lambda.len() as f64;
    let sqrt_lambda = lambda.iter().map(|l| (l.max(0.0) / p).sqrt()).collect();
    Sampler::Embedding {
        mean,
        sqrt_lambda,
        fft: planner.plan_fft_forward(lambda.len()),
        real,
    }
}

fn build_sampler(model: &StationaryModel, grid: &TimeGrid) -> Result<Sampler> {
    let n = grid.count();
    let dt = grid.step();
    match model.process {
        ProcessKind::WhiteReal { noise_level } => {
            let s = (0.5 * noise_level / dt).sqrt();
            Ok(Sampler::White {
                mean: model.mean,
                a: Complex64::new(s, 0.0),
                b: Complex64::new(0.0, 0.0),
            })
        }
        ProcessKind::WhiteProperComplex { noise_level } => {
            let s = (0.25 * noise_level / dt).sqrt();
            Ok(Sampler::White {
                mean: model.mean,
                a: Complex64::new(s, 0.0),
                b: Complex64::new(0.0, s),
            })
        }
        ProcessKind::WhiteImproperComplex { noise_level, rho } => {
            // rotate by θ/2 so the pseudo-variance r·σ² lands on the real axis
            let var = 0.5 * noise_level / dt;
            let r = rho.norm().min(1.0);
            let rot = Complex64::from_polar(1.0, 0.5 * rho.arg());
            let sx = (0.5 * var * (1.0 + r)).sqrt();
            let sy = (0.5 * var * (1.0 - r)).sqrt();
            Ok(Sampler::White {
                mean: model.mean,
                a: rot * sx,
                b: rot * Complex64::new(0.0, sy),
            })
        }
        ProcessKind::ColoredGaussian {
            acf,
            field,
            covariance,
        } => {
            let real = field == Field::Real;
            let mut planner = FftPlanner::new();
            match covariance {
                CovarianceStructure::Circulant => {
                    let row: Vec<f64> = (0..n).map(|k| acf.eval(k.min(n - k) as f64 * dt)).collect();
                    let lambda = circulant_spectrum(&row, &mut planner);
                    if !spectrum_ok(&lambda) {
                        return Err(Error::NotPsd(
                            "circulant covariance has negative eigenvalues".into(),
                        ));
                    }
                    Ok(embedding_sampler(model.mean, lambda, &mut planner, real))
                }
                CovarianceStructure::Toeplitz => {
                    let mut p = (2 * n.saturating_sub(1)).max(2).next_power_of_two();
                    for _ in 0..=EMBEDDING_DOUBLINGS {
                        let row: Vec<f64> = (0..p).map(|k| acf.eval(k.min(p - k) as f64 * dt)).collect();
                        let lambda = circulant_spectrum(&row, &mut planner);
                        if spectrum_ok(&lambda) {
                            return Ok(embedding_sampler(model.mean, lambda, &mut planner, real));
                        }
                        p *= 2;
                    }
                    log::debug!("circulant embedding indefinite; falling back to Cholesky");
                    if n > CHOLESKY_FALLBACK_MAX {
                        return Err(Error::NotPsd(format!(
                            "embedding indefinite and N = {n} exceeds the Cholesky limit"
                        )));
                    }
                    let c = DMatrix::from_fn(n, n, |j, k| acf.eval(j.abs_diff(k) as f64 * dt));
                    // tiny jitter absorbs round-off on the semidefinite boundary
                    let jitter = 1e-12 * acf.eval(0.0);
                    let c = c + DMatrix::from_diagonal_element(n, n, jitter);
                    let factor = c
                        .cholesky()
                        .ok_or_else(|| Error::NotPsd("Toeplitz covariance is indefinite".into()))?
                        .l();
                    Ok(Sampler::Cholesky {
                        mean: model.mean,
                        factor,
                        real,
                    })
                }
            }
        }
    }
}

/// Draw `realizations` independent sample paths of `model` on `grid`.
pub fn generate(
    model: &StationaryModel,
    grid: TimeGrid,
    realizations: usize,
    seed: u64,
) -> Result<Ensemble> {
    let data = generate_mapped(model, grid, realizations, seed, grid.count(), |z, out| {
        out.copy_from_slice(z)
    })?;
    let mut ens = Ensemble::from_data(grid, realizations, data)?;
    ens.model = Some(*model);
    ens.seed = Some(seed);
    Ok(ens)
}

/// Like [`generate`], but each realization is passed through `map` as soon as
/// it is drawn and only the mapped rows (`out_len` values each) are kept.
/// Row `m` of the result is `map` applied to row `m` of [`generate`].
pub fn generate_mapped<F>(
    model: &StationaryModel,
    grid: TimeGrid,
    realizations: usize,
    seed: u64,
    out_len: usize,
    map: F,
) -> Result<Vec<Complex64>>
where
    F: Fn(&[Complex64], &mut [Complex64]) + Sync,
{
    model.validate()?;
    if realizations == 0 {
        return Err(Error::TooFewRealizations {
            needed: 1,
            got: 0,
        });
    }
    let sampler = build_sampler(model, &grid)?;
    let n = grid.count();
    let mut data = vec![Complex64::new(0.0, 0.0); out_len * realizations];
    data.par_chunks_mut(out_len.max(1))
        .enumerate()
        .for_each_init(
            || vec![Complex64::new(0.0, 0.0); n],
            |buf, (m, row)| {
                let mut rng = ChaCha20Rng::seed_from_u64(seed);
                rng.set_stream(m as u64);
                sampler.draw(&mut rng, buf);
                map(buf, row);
            },
        );
    Ok(data)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_cov(ens: &Ensemble) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
        let n = ens.samples();
        let m = ens.realizations() as f64;
        let mut c = DMatrix::zeros(n, n);
        let mut p = DMatrix::zeros(n, n);
        for row in ens.rows() {
            for j in 0..n {
                for k in 0..n {
                    c[(j, k)] += row[j] * row[k].conj() / m;
                    p[(j, k)] += row[j] * row[k] / m;
                }
            }
        }
        (c, p)
    }

    #[test]
    fn acf_shapes_and_spectra() {
        let e = AcfShape::Exponential { variance: 2.0, scale: 0.5 };
        assert_eq!(e.eval(0.0), 2.0);
        assert!((e.eval(-0.5) - 2.0 / std::f64::consts::E).abs() < 1e-15);
        assert!((e.psd(0.0) - 2.0).abs() < 1e-15);
        let g = AcfShape::Gaussian { variance: 1.0, width: 1.0 };
        assert!((g.psd(0.0) - std::f64::consts::TAU.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn validation() {
        let bad = StationaryModel::zero_mean(ProcessKind::WhiteImproperComplex {
            noise_level: 1.0,
            rho: Complex64::new(0.9, 0.9),
        });
        assert!(matches!(bad, Err(Error::InvalidParameter(_))));
        assert!(StationaryModel::zero_mean(ProcessKind::WhiteReal { noise_level: -1.0 }).is_err());
        assert!(StationaryModel::new(
            Complex64::new(0.0, 1.0),
            ProcessKind::WhiteReal { noise_level: 1.0 }
        )
        .is_err());
        let g = TimeGrid::indices(4).unwrap();
        let m = StationaryModel::zero_mean(ProcessKind::WhiteReal { noise_level: 1.0 }).unwrap();
        assert!(matches!(generate(&m, g, 0, 1), Err(Error::TooFewRealizations { .. })));
    }

    #[test]
    fn model_acf_conventions() {
        let m = StationaryModel::zero_mean(ProcessKind::WhiteImproperComplex {
            noise_level: 2.0,
            rho: Complex64::new(0.0, 0.5),
        })
        .unwrap();
        assert_eq!(m.acf(0.0), AcfValue::DeltaWeight(Complex64::new(1.0, 0.0)));
        assert_eq!(m.acf(0.1), AcfValue::DeltaWeight(Complex64::new(0.0, 0.0)));
        assert_eq!(m.pseudo_acf(0.0), AcfValue::DeltaWeight(Complex64::new(0.0, 0.5)));
        let c = StationaryModel::zero_mean(ProcessKind::ColoredGaussian {
            acf: AcfShape::Exponential { variance: 1.0, scale: 1.0 },
            field: Field::ProperComplex,
            covariance: CovarianceStructure::Toeplitz,
        })
        .unwrap();
        assert_eq!(c.pseudo_acf(0.3).into_inner(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn same_seed_same_ensemble_different_seed_differs() {
        let g = TimeGrid::new(0.0, 0.1, 32).unwrap();
        let m = StationaryModel::zero_mean(ProcessKind::ColoredGaussian {
            acf: AcfShape::Gaussian { variance: 1.0, width: 0.4 },
            field: Field::Real,
            covariance: CovarianceStructure::Toeplitz,
        })
        .unwrap();
        let a = generate(&m, g, 20, 7).unwrap();
        let b = generate(&m, g, 20, 7).unwrap();
        let c = generate(&m, g, 20, 8).unwrap();
        assert_eq!(a.data(), b.data());
        assert_ne!(a.data(), c.data());
        assert!(a.is_real_valued());
        // a prefix of realizations does not depend on M
        let d = generate(&m, g, 5, 7).unwrap();
        assert_eq!(d.data(), &a.data()[..5 * 32]);
    }

    #[test]
    fn zero_noise_gives_constant_mean() {
        let g = TimeGrid::indices(8).unwrap();
        let m = StationaryModel::new(
            Complex64::new(1.5, -0.5),
            ProcessKind::WhiteProperComplex { noise_level: 0.0 },
        )
        .unwrap();
        let e = generate(&m, g, 3, 0).unwrap();
        assert!(e.data().iter().all(|z| *z == Complex64::new(1.5, -0.5)));
    }

    #[test]
    fn improper_white_sample_statistics() {
        let g = TimeGrid::new(0.0, 0.5, 4).unwrap();
        let rho = Complex64::from_polar(0.6, 1.0);
        let m = StationaryModel::zero_mean(ProcessKind::WhiteImproperComplex {
            noise_level: 1.0,
            rho,
        })
        .unwrap();
        let e = generate(&m, g, 40_000, 3).unwrap();
        let (c, p) = sample_cov(&e);
        let var = 0.5 / 0.5;
        for j in 0..4 {
            assert!((c[(j, j)].re - var).abs() < 0.04);
            assert!((p[(j, j)] - rho * var).norm() < 0.04);
            for k in 0..4 {
                if j != k {
                    assert!(c[(j, k)].norm() < 0.04);
                }
            }
        }
    }

    #[test]
    fn colored_sample_covariance_matches_model() {
        let g = TimeGrid::new(0.0, 0.25, 16).unwrap();
        for field in [Field::Real, Field::ProperComplex] {
            let m = StationaryModel::zero_mean(ProcessKind::ColoredGaussian {
                acf: AcfShape::Exponential { variance: 1.0, scale: 1.0 },
                field,
                covariance: CovarianceStructure::Toeplitz,
            })
            .unwrap();
            let e = generate(&m, g, 30_000, 11).unwrap();
            let (c, p) = sample_cov(&e);
            let exact = m.sampled_statistics(&g).unwrap();
            let dc = crate::linalg::max_abs_diff(&c, &exact.covariance);
            let dp = crate::linalg::max_abs_diff(&p, &exact.pseudo);
            assert!(dc < 0.05 && dp < 0.05, "{field:?}: {dc} {dp}");
        }
    }

    #[test]
    fn circulant_structure_is_honoured() {
        let g = TimeGrid::indices(8).unwrap();
        let m = StationaryModel::zero_mean(ProcessKind::ColoredGaussian {
            acf: AcfShape::Exponential { variance: 1.0, scale: 1.5 },
            field: Field::ProperComplex,
            covariance: CovarianceStructure::Circulant,
        })
        .unwrap();
        let e = generate(&m, g, 40_000, 5).unwrap();
        let (c, _) = sample_cov(&e);
        let exact = m.sampled_statistics(&g).unwrap();
        assert!((exact.covariance[(0, 7)].re - (-1.0f64 / 1.5).exp()).abs() < 1e-15);
        assert!(crate::linalg::max_abs_diff(&c, &exact.covariance) < 0.04);
    }

    #[test]
    fn gaussian_acf_needs_larger_embedding_or_fallback() {
        // a very smooth ACF over a short window stresses the embedding
        let g = TimeGrid::new(0.0, 0.05, 64).unwrap();
        let m = StationaryModel::zero_mean(ProcessKind::ColoredGaussian {
            acf: AcfShape::Gaussian { variance: 1.0, width: 1.0 },
            field: Field::Real,
            covariance: CovarianceStructure::Toeplitz,
        })
        .unwrap();
        let e = generate(&m, g, 4000, 2).unwrap();
        let (c, _) = sample_cov(&e);
        let exact = m.sampled_statistics(&g).unwrap();
        assert!(crate::linalg::max_abs_diff(&c, &exact.covariance) < 0.12);
    }
}
