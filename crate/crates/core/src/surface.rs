//! Two-index correlation surfaces `R(u₁, u₂)` on a square grid, and the
//! trait used to evaluate estimated, gridded or closed-form surfaces alike.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::TimeGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceKind {
    /// `E{Z(u₁)·Z*(u₂)}`, Hermitian.
    Auto,
    /// `E{Z(u₁)·Z(u₂)}`, symmetric.
    Pseudo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceSource {
    MonteCarlo,
    Theory,
}

/// Anything that can be evaluated as a correlation function of two
/// fractional-domain coordinates.
pub trait CorrelationField {
    fn value(&self, u1: f64, u2: f64) -> Result<Complex64>;

    /// Value used when the field is sampled on a lattice of the given spacing.
    /// Smooth fields return [`CorrelationField::value`]; delta-like fields
    /// return their lattice surrogate (`weight/spacing` on the diagonal).
    fn lattice_value(&self, u1: f64, u2: f64, _spacing: f64) -> Result<Complex64> {
        self.value(u1, u2)
    }

    /// `Some(w)` if the field is exactly `w·δ(u₁ − u₂)`.
    fn delta_weight(&self) -> Option<Complex64> {
        None
    }
}

impl<F: Fn(f64, f64) -> Complex64> CorrelationField for F {
    fn value(&self, u1: f64, u2: f64) -> Result<Complex64> {
        Ok(self(u1, u2))
    }
}

/// `weight·δ(u₁ − u₂)`: the white-noise surface, handled through its weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaSurface {
    pub weight: Complex64,
}

impl DeltaSurface {
    pub fn new(weight: Complex64) -> Self {
        Self { weight }
    }
}

impl CorrelationField for DeltaSurface {
    fn value(&self, u1: f64, u2: f64) -> Result<Complex64> {
        if u1 != u2 || self.weight == Complex64::new(0.0, 0.0) {
            Ok(Complex64::new(0.0, 0.0))
        } else {
            Err(Error::Domain(
                "a delta surface has no pointwise value on its diagonal; use its weight".into(),
            ))
        }
    }

    fn lattice_value(&self, u1: f64, u2: f64, spacing: f64) -> Result<Complex64> {
        if (u1 - u2).abs() <= 1e-9 * spacing.abs() {
            Ok(self.weight / spacing.abs())
        } else {
            Ok(Complex64::new(0.0, 0.0))
        }
    }

    fn delta_weight(&self) -> Option<Complex64> {
        Some(self.weight)
    }
}

/// Estimated or predicted correlation values on `u_grid × u_grid`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSurface {
    pub u_grid: TimeGrid,
    pub values: DMatrix<Complex64>,
    /// Per-entry standard error; zero for theory surfaces.
    pub stderr: DMatrix<f64>,
    pub kind: SurfaceKind,
    pub source: SurfaceSource,
}

impl CorrelationSurface {
    pub fn new(
        u_grid: TimeGrid,
        values: DMatrix<Complex64>,
        stderr: DMatrix<f64>,
        kind: SurfaceKind,
        source: SurfaceSource,
    ) -> Result<Self> {
        let n = u_grid.count();
        if values.shape() != (n, n) || stderr.shape() != (n, n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: values.nrows(),
            });
        }
        Ok(Self {
            u_grid,
            values,
            stderr,
            kind,
            source,
        })
    }

    /// Theory surface sampled from a field on `u_grid`.
    pub fn from_field(
        u_grid: TimeGrid,
        kind: SurfaceKind,
        field: &impl CorrelationField,
    ) -> Result<Self> {
        let n = u_grid.count();
        let mut values = DMatrix::zeros(n, n);
        for j in 0..n {
            for k in 0..n {
                values[(j, k)] = field.value(u_grid.point(j), u_grid.point(k))?;
            }
        }
        Self::new(
            u_grid,
            values,
            DMatrix::zeros(n, n),
            kind,
            SurfaceSource::Theory,
        )
    }

    pub fn n(&self) -> usize {
        self.u_grid.count()
    }

    /// Max deviation from the structural symmetry of the kind (Hermitian for
    /// `Auto`, symmetric for `Pseudo`).
    pub fn structure_defect(&self) -> f64 {
        let n = self.n();
        let mut worst = 0.0_f64;
        for j in 0..n {
            for k in 0..n {
                let mirror = match self.kind {
                    SurfaceKind::Auto => self.values[(k, j)].conj(),
                    SurfaceKind::Pseudo => self.values[(k, j)],
                };
                worst = worst.max((self.values[(j, k)] - mirror).norm());
            }
        }
        worst
    }

    fn interpolate(&self, u1: f64, u2: f64) -> Result<Complex64> {
        let n = self.n();
        let locate = |u: f64| -> Result<(usize, f64)> {
            if !self.u_grid.contains(u) {
                return Err(Error::Domain(format!(
                    "u = {u} outside the surface grid [{}, {}]",
                    self.u_grid.start(),
                    self.u_grid.end()
                )));
            }
            let x = self.u_grid.locate(u).clamp(0.0, (n - 1) as f64);
            let i = (x.floor() as usize).min(n - 2);
            Ok((i, x - i as f64))
        };
        let (j, fj) = locate(u1)?;
        let (k, fk) = locate(u2)?;
        let v = &self.values;
        Ok(v[(j, k)] * ((1.0 - fj) * (1.0 - fk))
            + v[(j + 1, k)] * (fj * (1.0 - fk))
            + v[(j, k + 1)] * ((1.0 - fj) * fk)
            + v[(j + 1, k + 1)] * (fj * fk))
    }
}

impl CorrelationField for CorrelationSurface {
    /// Bilinear interpolation; errors outside the grid.
    fn value(&self, u1: f64, u2: f64) -> Result<Complex64> {
        self.interpolate(u1, u2)
    }
}
