//! Fractional Fourier series on a finite interval `[−T/2, T/2]`.
//!
//! The basis is a family of chirps
//! `φ_{α,n}(t) = K_{−α}(t, n·t₀) / √(T·|csc α|/2π)` with `t₀ = 2π·sin α / T`,
//! orthonormal on the interval. Coefficients are samples of the continuous
//! transform, `C_{α,n} = √(2π·|sin α|/T)·Z_α(n·t₀)`.
//!
//! Some texts put the interval at `[0, T]`; here it is always centred.

use std::f64::consts::{FRAC_PI_2, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{SampledSignal, TimeGrid};
use crate::kernel::{self, frft_at};
use crate::order::FractionalOrder;
use crate::surface::CorrelationField;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrfsConfig {
    order: FractionalOrder,
    interval_width: f64,
    n_min: i64,
    n_max: i64,
}

impl FrfsConfig {
    pub fn new(order: FractionalOrder, interval_width: f64, n_min: i64, n_max: i64) -> Result<Self> {
        order.require_generic()?;
        if interval_width.is_nan() || interval_width <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "interval width must be positive, got {interval_width}"
            )));
        }
        if n_min > n_max {
            return Err(Error::InvalidParameter(format!(
                "empty index range [{n_min}, {n_max}]"
            )));
        }
        Ok(Self {
            order,
            interval_width,
            n_min,
            n_max,
        })
    }

    /// Index range `[−N/2, N/2]` for `N` samples.
    pub fn with_default_range(order: FractionalOrder, interval_width: f64, samples: usize) -> Result<Self> {
        let h = (samples / 2) as i64;
        Self::new(order, interval_width, -h, h)
    }

    pub fn order(&self) -> FractionalOrder {
        self.order
    }

    pub fn interval_width(&self) -> f64 {
        self.interval_width
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    pub fn n_max(&self) -> i64 {
        self.n_max
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<i64> {
        self.n_min..=self.n_max
    }

    pub fn len(&self) -> usize {
        (self.n_max - self.n_min + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `t₀ = 2π·sin α / T`.
    pub fn central_frequency(&self) -> f64 {
        TAU * self.order.alpha().sin() / self.interval_width
    }

    /// `2π·|sin α| / T`, the factor relating coefficient and transform
    /// second-order statistics.
    pub fn correlation_scale(&self) -> f64 {
        TAU * self.order.alpha().sin().abs() / self.interval_width
    }

    /// Same interval and index range, angle `α + π/2`.
    pub fn quarter_turned(&self) -> Result<Self> {
        Self::new(
            self.order.shifted_by_angle(FRAC_PI_2),
            self.interval_width,
            self.n_min,
            self.n_max,
        )
    }

    fn check_in_interval(&self, t: f64) -> Result<()> {
        let half = 0.5 * self.interval_width;
        if t.abs() > half * (1.0 + 1e-12) {
            return Err(Error::OutOfInterval(t));
        }
        Ok(())
    }

    fn basis_norm(&self) -> f64 {
        (self.interval_width * self.order.csc().abs() / TAU).sqrt()
    }
}

/// Coefficients `C_{α,n}` for `n` in the config's index range.
#[derive(Debug, Clone, PartialEq)]
pub struct FrfsCoefficients {
    pub config: FrfsConfig,
    pub values: Vec<Complex64>,
}

impl FrfsCoefficients {
    pub fn new(config: FrfsConfig, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != config.len() {
            return Err(Error::DimensionMismatch {
                expected: config.len(),
                got: values.len(),
            });
        }
        Ok(Self { config, values })
    }

    pub fn get(&self, n: i64) -> Option<Complex64> {
        if n < self.config.n_min || n > self.config.n_max {
            None
        } else {
            Some(self.values[(n - self.config.n_min) as usize])
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.config.indices().zip(self.values.iter().copied())
    }
}

/// `φ_{α,n}(t)`.
pub fn frfs_basis(config: &FrfsConfig, n: i64, t: f64) -> Result<Complex64> {
    config.check_in_interval(t)?;
    let u = n as f64 * config.central_frequency();
    Ok(kernel::kernel_value(&config.order.negated(), t, u)? / config.basis_norm())
}

fn check_spans_interval(grid: &TimeGrid, config: &FrfsConfig) -> Result<()> {
    let half = 0.5 * config.interval_width;
    let tol = 1e-9 * config.interval_width.max(1.0);
    if (grid.start() + half).abs() > tol || (grid.end() - half).abs() > tol {
        return Err(Error::GridMismatch(format!(
            "signal grid [{}, {}] does not span [−{half}, {half}]",
            grid.start(),
            grid.end()
        )));
    }
    Ok(())
}

/// The linear map from samples on `grid` to coefficients, as a row-major
/// `len × grid.count()` matrix.
pub fn analysis_operator(config: &FrfsConfig, grid: &TimeGrid) -> Result<kernel::FrftOperator> {
    check_spans_interval(grid, config)?;
    let t0 = config.central_frequency();
    let points = config.indices().map(|n| n as f64 * t0).collect();
    kernel::FrftOperator::new(config.order, *grid, points)
}

/// Coefficients of a signal sampled on `[−T/2, T/2]`.
pub fn frfs_analyze(signal: &SampledSignal, config: &FrfsConfig) -> Result<FrfsCoefficients> {
    check_spans_interval(signal.grid(), config)?;
    let t0 = config.central_frequency();
    let points: Vec<f64> = config.indices().map(|n| n as f64 * t0).collect();
    let scale = config.correlation_scale().sqrt();
    let values = frft_at(signal, config.order, &points)?
        .into_iter()
        .map(|z| z * scale)
        .collect();
    FrfsCoefficients::new(*config, values)
}

/// Truncated series `Σ_n C_{α,n}·φ_{α,n}(t)` on `out_grid`.
pub fn frfs_synthesize(coeffs: &FrfsCoefficients, out_grid: TimeGrid) -> Result<SampledSignal> {
    let config = &coeffs.config;
    for t in [out_grid.start(), out_grid.end()] {
        config.check_in_interval(t)?;
    }
    let values = out_grid
        .points()
        .map(|t| {
            coeffs
                .iter()
                .map(|(n, c)| frfs_basis(config, n, t).map(|phi| c * phi))
                .sum::<Result<Complex64>>()
        })
        .collect::<Result<Vec<_>>>()?;
    SampledSignal::new(out_grid, values)
}

/// Discrete-time fractional transform: the series coefficients at angle
/// `α + π/2`. `config` carries `α`; the result carries the turned config.
pub fn dtfrft(signal: &SampledSignal, config: &FrfsConfig) -> Result<FrfsCoefficients> {
    let turned = config.quarter_turned()?;
    frfs_analyze(signal, &turned)
}

/// `M[n][ℓ] = (2π·|sin α|/T)·R(n·t₀, ℓ·t₀)` for an autocorrelation (or, with a
/// pseudo-surface, pseudo-autocorrelation) field.
pub fn coeff_correlations(
    field: &impl CorrelationField,
    config: &FrfsConfig,
) -> Result<DMatrix<Complex64>> {
    let t0 = config.central_frequency();
    let scale = config.correlation_scale();
    let idx: Vec<i64> = config.indices().collect();
    let mut out = DMatrix::zeros(idx.len(), idx.len());
    for (r, &n) in idx.iter().enumerate() {
        for (c, &l) in idx.iter().enumerate() {
            out[(r, c)] = field.lattice_value(n as f64 * t0, l as f64 * t0, t0)? * scale;
        }
    }
    Ok(out)
}
