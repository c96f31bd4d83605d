//! Experiment configuration: one JSON document, with command-line flags
//! taking precedence over its fields.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use frft_stoch::grid::TimeGrid;
use frft_stoch::order::FractionalOrder;
use frft_stoch::pipeline::{TransformKind, TransformSpec};
use frft_stoch::processes::StationaryModel;
use frft_stoch::theory::OracleWindow;

use crate::CliError;

/// Upper bound on realizations accepted from a config.
pub const MAX_REALIZATIONS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub start: f64,
    pub step: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn build(&self) -> Result<TimeGrid, CliError> {
        Ok(TimeGrid::new(self.start, self.step, self.count)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TheorySettings {
    /// Output grid for continuous predictions; defaults to `out_grid`.
    pub u_grid: Option<GridSpec>,
    pub oracle_half_width: Option<f64>,
    pub oracle_step: Option<f64>,
    /// Interior `|u| ≤ h` used when comparing Monte Carlo to the closed form.
    pub interior_half_width: Option<f64>,
}

impl TheorySettings {
    pub fn oracle_window(&self) -> Option<OracleWindow> {
        match (self.oracle_half_width, self.oracle_step) {
            (Some(h), Some(s)) => Some(OracleWindow::new(h, s)),
            (Some(h), None) => Some(OracleWindow::auto(h)),
            (None, Some(s)) => Some(OracleWindow::new(frft_stoch::theory::DEFAULT_ORACLE_HALF_WIDTH, s)),
            (None, None) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: StationaryModel,
    pub grid: GridSpec,
    pub order: Option<f64>,
    #[serde(default = "default_transform")]
    pub transform: TransformKind,
    /// Output grid for `FRFT_QUAD`; defaults to the input grid.
    pub out_grid: Option<GridSpec>,
    /// Coefficient range `[n_min, n_max]` for `FRFS` and `DTFRFT`.
    pub index_range: Option<(i64, i64)>,
    #[serde(alias = "M")]
    pub realizations: Option<usize>,
    pub seed: Option<u64>,
    /// Ensemble manifest read by `transform` and `estimate`.
    pub input: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub tol_sigma: Option<f64>,
    #[serde(default)]
    pub theory: TheorySettings,
}

fn default_transform() -> TransformKind {
    TransformKind::Dfrft
}

/// Flag values that override the config.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub order: Option<f64>,
    pub out: Option<PathBuf>,
    pub tol_sigma: Option<f64>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
    }

    pub fn apply(&mut self, o: &Overrides) {
        if o.seed.is_some() {
            self.seed = o.seed;
        }
        if o.order.is_some() {
            self.order = o.order;
        }
        if o.out.is_some() {
            self.out = o.out.clone();
        }
        if o.tol_sigma.is_some() {
            self.tol_sigma = o.tol_sigma;
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.model.validate()?;
        self.grid.build()?;
        if let Some(g) = self.out_grid {
            g.build()?;
        }
        if let Some(a) = self.order {
            if !a.is_finite() {
                return Err(CliError::Validation(format!("order must be finite, got {a}")));
            }
        }
        if let Some(m) = self.realizations {
            if m == 0 || m > MAX_REALIZATIONS {
                return Err(CliError::Validation(format!(
                    "realizations must be in 1..={MAX_REALIZATIONS}, got {m}"
                )));
            }
        }
        if let Some(t) = self.tol_sigma {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Validation(format!("tol_sigma must be positive, got {t}")));
            }
        }
        Ok(())
    }

    pub fn seed(&self) -> Result<u64, CliError> {
        self.seed
            .ok_or_else(|| CliError::Validation("no seed: set \"seed\" in the config or pass --seed".into()))
    }

    pub fn realizations(&self) -> Result<usize, CliError> {
        self.realizations
            .ok_or_else(|| CliError::Validation("no realization count: set \"realizations\" (or \"M\")".into()))
    }

    pub fn order(&self) -> Result<FractionalOrder, CliError> {
        self.order
            .map(FractionalOrder::new)
            .ok_or_else(|| CliError::Validation("no order: set \"order\" in the config or pass --order".into()))
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("out"))
    }

    pub fn tol_sigma(&self) -> f64 {
        self.tol_sigma.unwrap_or(4.0)
    }

    pub fn transform_spec(&self) -> Result<TransformSpec, CliError> {
        let mut spec = TransformSpec::new(self.transform, self.order()?);
        if let Some(g) = self.out_grid {
            spec = spec.with_out_grid(g.build()?);
        }
        if let Some((lo, hi)) = self.index_range {
            spec = spec.with_index_range(lo, hi);
        }
        Ok(spec)
    }

    /// Grid for continuous predictions.
    pub fn u_grid(&self) -> Result<TimeGrid, CliError> {
        match self.theory.u_grid.or(self.out_grid) {
            Some(g) => g.build(),
            None => self.grid.build(),
        }
    }
}
