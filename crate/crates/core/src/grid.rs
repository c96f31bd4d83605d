//! Uniform sampling grids and complex signals sampled on them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A uniform grid `start + n·step` for `n = 0..count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    start: f64,
    step: f64,
    count: usize,
}

impl TimeGrid {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self> {
        if !step.is_finite() || step <= 0.0 {
            return Err(Error::InvalidGrid(format!("step must be positive, got {step}")));
        }
        if count < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 samples, got {count}")));
        }
        if !start.is_finite() {
            return Err(Error::InvalidGrid("start must be finite".into()));
        }
        Ok(Self { start, step, count })
    }

    /// Grid on `[−half_width, half_width]` with the given step. The half width
    /// is rounded to a whole number of steps.
    pub fn symmetric(half_width: f64, step: f64) -> Result<Self> {
        if half_width.is_nan() || half_width <= 0.0 {
            return Err(Error::InvalidGrid(format!(
                "half width must be positive, got {half_width}"
            )));
        }
        let half = (half_width / step).round() as usize;
        Self::new(-(half as f64) * step, step, 2 * half + 1)
    }

    /// `count` points spanning `[a, b]` inclusive.
    pub fn spanning(a: f64, b: f64, count: usize) -> Result<Self> {
        if count < 2 || a.is_nan() || b.is_nan() || b <= a {
            return Err(Error::InvalidGrid(format!("cannot span [{a}, {b}] with {count} points")));
        }
        Self::new(a, (b - a) / (count - 1) as f64, count)
    }

    /// Index grid `0, 1, …, n − 1` used for discrete transforms.
    pub fn indices(n: usize) -> Result<Self> {
        Self::new(0.0, 1.0, n)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn end(&self) -> f64 {
        self.point(self.count - 1)
    }

    pub fn point(&self, n: usize) -> f64 {
        self.start + n as f64 * self.step
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.count).map(|n| self.point(n))
    }

    /// Largest `|t|` on the grid.
    pub fn max_abs(&self) -> f64 {
        self.start.abs().max(self.end().abs())
    }

    /// Trapezoid weights: `step` everywhere except `step/2` at the two ends.
    pub fn trapezoid_weights(&self) -> Vec<f64> {
        let mut w = vec![self.step; self.count];
        w[0] *= 0.5;
        w[self.count - 1] *= 0.5;
        w
    }

    pub fn contains(&self, t: f64) -> bool {
        let eps = 1e-9 * self.step;
        t >= self.start - eps && t <= self.end() + eps
    }

    /// Fractional index of `t` (may lie outside `[0, count − 1]`).
    pub fn locate(&self, t: f64) -> f64 {
        (t - self.start) / self.step
    }

    pub fn approx_eq(&self, other: &TimeGrid) -> bool {
        self.count == other.count
            && (self.start - other.start).abs() <= 1e-9 * self.step.max(1.0)
            && (self.step - other.step).abs() <= 1e-12 * self.step.max(1.0)
    }
}

/// Complex samples on a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    grid: TimeGrid,
    values: Vec<Complex64>,
}

impl SampledSignal {
    pub fn new(grid: TimeGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.count() {
            return Err(Error::DimensionMismatch {
                expected: grid.count(),
                got: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: TimeGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.points().map(f).collect();
        Self { grid, values }
    }

    pub fn zeros(grid: TimeGrid) -> Self {
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.count()],
        }
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Trapezoid L² norm `(∫ |z|²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        self.grid
            .trapezoid_weights()
            .iter()
            .zip(&self.values)
            .map(|(w, z)| w * z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-norm distance to another signal on the same grid.
    pub fn max_abs_diff(&self, other: &SampledSignal) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|z| z * c).collect(),
        }
    }
}
