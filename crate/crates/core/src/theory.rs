//! Closed-form second-order statistics of transformed stationary processes,
//! each paired with a numeric double-quadrature oracle.
//!
//! For a stationary input with autocorrelation `R(τ)` and a generic angle
//! with `cos α ≠ 0`,
//!
//! ```text
//! μ_α(u)      = μ·√(1 + i tan α)·exp(−i u² tan α / 2)
//! R_α(u₁, u₂) = |sec α|·R(sec α·(u₁ − u₂))·exp(i (u₂² − u₁²) tan α / 2)
//! ```
//!
//! Both follow from the Gaussian chirp integral of the kernel. The oracle
//! evaluates `∬ R(t − s)·K_α(t, u₁)·K*_α(s, u₂) dt ds` by trapezoid sums on a
//! finite window and is what every closed form here is tested against.
//!
//! White inputs never go through quadrature: a delta autocorrelation is
//! carried as its weight and substituted analytically.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dfrft::CovariancePair;
use crate::error::{Error, Result};
use crate::grid::{SampledSignal, TimeGrid};
use crate::kernel::{self, FrftOperator};
use crate::linalg::toeplitz_matvec;
use crate::order::FractionalOrder;
use crate::processes::StationaryModel;
use crate::surface::{CorrelationField, CorrelationSurface, DeltaSurface, SurfaceKind};

/// Default half-width of the oracle integration window.
pub const DEFAULT_ORACLE_HALF_WIDTH: f64 = 12.0;
const MAX_AUTO_STEP: f64 = 1.0 / 32.0;

/// A stationary correlation function of the lag, `R(τ)`.
pub type LagFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

pub fn lag_fn(f: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> LagFn {
    Arc::new(f)
}

pub fn real_lag_fn(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> LagFn {
    Arc::new(move |t| Complex64::new(f(t), 0.0))
}

/// `μ·√(1 + i tan α)·e^{−i u² tan α/2}`, the transform of a constant.
pub fn predicted_mean(mu: Complex64, order: FractionalOrder, u: f64) -> Result<Complex64> {
    order.require_finite_tangent()?;
    let tan = order.tan();
    Ok(mu * Complex64::new(1.0, tan).sqrt() * Complex64::cis(-0.5 * u * u * tan))
}

/// Closed-form output autocorrelation of a stationary input.
pub fn predicted_autocorr(r: &dyn Fn(f64) -> Complex64, order: FractionalOrder, u1: f64, u2: f64) -> Result<Complex64> {
    order.require_finite_tangent()?;
    let sec = order.sec();
    let phase = 0.5 * (u2 * u2 - u1 * u1) * order.tan();
    Ok(r(sec * (u1 - u2)) * sec.abs() * Complex64::cis(phase))
}

/// The closed form as a field, for gridding and recovery.
#[derive(Clone)]
pub struct PredictedAutocorr {
    r: LagFn,
    order: FractionalOrder,
}

impl PredictedAutocorr {
    pub fn new(r: LagFn, order: FractionalOrder) -> Result<Self> {
        order.require_finite_tangent()?;
        Ok(Self { r, order })
    }
}

impl CorrelationField for PredictedAutocorr {
    fn value(&self, u1: f64, u2: f64) -> Result<Complex64> {
        predicted_autocorr(&*self.r, self.order, u1, u2)
    }
}

/// Predicted output autocorrelation of a model's fluctuation.
#[derive(Clone)]
pub enum PredictedSurface {
    Smooth(PredictedAutocorr),
    Delta(DeltaSurface),
}

impl CorrelationField for PredictedSurface {
    fn value(&self, u1: f64, u2: f64) -> Result<Complex64> {
        match self {
            PredictedSurface::Smooth(s) => s.value(u1, u2),
            PredictedSurface::Delta(d) => d.value(u1, u2),
        }
    }

    fn lattice_value(&self, u1: f64, u2: f64, spacing: f64) -> Result<Complex64> {
        match self {
            PredictedSurface::Smooth(s) => s.lattice_value(u1, u2, spacing),
            PredictedSurface::Delta(d) => d.lattice_value(u1, u2, spacing),
        }
    }

    fn delta_weight(&self) -> Option<Complex64> {
        match self {
            PredictedSurface::Smooth(_) => None,
            PredictedSurface::Delta(d) => Some(d.weight),
        }
    }
}

/// For white inputs the prediction collapses to `(N₀/2)·δ(u₁ − u₂)`, since
/// `|sec α|·δ(sec α·x) = δ(x)`; the chirp factor is one on the diagonal.
pub fn predicted_output_autocorr(model: &StationaryModel, order: FractionalOrder) -> Result<PredictedSurface> {
    order.require_finite_tangent()?;
    if let Some(w) = model.white_weight() {
        return Ok(PredictedSurface::Delta(DeltaSurface::new(Complex64::new(w, 0.0))));
    }
    let acf = model.acf_shape().expect("colored model has an ACF");
    Ok(PredictedSurface::Smooth(PredictedAutocorr::new(
        real_lag_fn(move |t| acf.eval(t)),
        order,
    )?))
}

/// Output pseudo-autocorrelation for a white input with pseudo weight `w`:
/// `w·∫ K_α(t, u₁)·K_α(t, u₂) dt`, a smooth chirp (not a delta) whenever
/// `cot α ≠ 0`.
pub fn white_output_pseudo_autocorr(
    weight: Complex64,
    order: FractionalOrder,
    u1: f64,
    u2: f64,
) -> Result<Complex64> {
    order.require_generic()?;
    order.require_finite_tangent()?;
    let cot = order.cot();
    let csc = order.csc();
    let amp2 = Complex64::new(1.0, -cot) / (2.0 * PI);
    let gauss = (Complex64::new(0.0, PI) / cot).sqrt();
    let b = (u1 + u2) * csc;
    let phase = 0.5 * (u1 * u1 + u2 * u2) * cot - b * b / (4.0 * cot);
    Ok(weight * amp2 * gauss * Complex64::cis(phase))
}

/// Integration window of the double-quadrature oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleWindow {
    pub half_width: f64,
    /// `None` picks half the chirp-validity limit, capped at 1/32.
    pub step: Option<f64>,
}

impl Default for OracleWindow {
    fn default() -> Self {
        Self {
            half_width: DEFAULT_ORACLE_HALF_WIDTH,
            step: None,
        }
    }
}

impl OracleWindow {
    pub fn new(half_width: f64, step: f64) -> Self {
        Self {
            half_width,
            step: Some(step),
        }
    }

    pub fn auto(half_width: f64) -> Self {
        Self {
            half_width,
            step: None,
        }
    }

    /// Symmetric grid `[−L, L]` for outputs up to `max_abs_u`.
    pub fn grid(&self, order: &FractionalOrder, max_abs_u: f64) -> Result<TimeGrid> {
        if self.half_width.is_nan() || self.half_width <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "oracle half-width must be positive, got {}",
                self.half_width
            )));
        }
        let step = match self.step {
            Some(h) => h,
            None => (0.5 * kernel::chirp_step_limit(order, self.half_width, max_abs_u)).min(MAX_AUTO_STEP),
        };
        let intervals = (2.0 * self.half_width / step).ceil() as usize;
        TimeGrid::spanning(-self.half_width, self.half_width, intervals + 1)
    }
}

fn max_abs(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// `out[j][k] = Σ_{n,m} a_j[n]·R(t_n − t_m)·b_k[m]` with `b = conj(a)` for the
/// autocorrelation and `b = a` for the pseudo-autocorrelation.
fn oracle_lattice(
    r: &LagFn,
    order: FractionalOrder,
    us1: &[f64],
    us2: &[f64],
    window: OracleWindow,
    conjugate: bool,
) -> Result<DMatrix<Complex64>> {
    order.require_generic()?;
    let grid = window.grid(&order, max_abs(us1).max(max_abs(us2)))?;
    let h = grid.step();
    let op1 = FrftOperator::new(order, grid, us1.to_vec())?;
    let op2 = FrftOperator::new(order, grid, us2.to_vec())?;
    let cols: Vec<Vec<Complex64>> = (0..us2.len())
        .into_par_iter()
        .map(|k| {
            let b: Vec<Complex64> = if conjugate {
                op2.row(k).iter().map(|z| z.conj()).collect()
            } else {
                op2.row(k).to_vec()
            };
            let y = toeplitz_matvec(|d| r(d as f64 * h), &b);
            (0..us1.len())
                .map(|j| op1.row(j).iter().zip(&y).map(|(a, y)| a * y).sum())
                .collect()
        })
        .collect();
    Ok(DMatrix::from_fn(us1.len(), us2.len(), |j, k| cols[k][j]))
}

/// Double-quadrature value of the output autocorrelation.
pub fn numeric_output_autocorr(
    r: &LagFn,
    order: FractionalOrder,
    u1: f64,
    u2: f64,
    window: OracleWindow,
) -> Result<Complex64> {
    Ok(oracle_lattice(r, order, &[u1], &[u2], window, true)?[(0, 0)])
}

/// Double-quadrature value of the output pseudo-autocorrelation.
pub fn numeric_output_pseudo_autocorr(
    r_hat: &LagFn,
    order: FractionalOrder,
    u1: f64,
    u2: f64,
    window: OracleWindow,
) -> Result<Complex64> {
    Ok(oracle_lattice(r_hat, order, &[u1], &[u2], window, false)?[(0, 0)])
}

/// Oracle surface on `u_grid × u_grid`, with `source = Theory`.
pub fn numeric_output_surface(
    r: &LagFn,
    order: FractionalOrder,
    u_grid: TimeGrid,
    kind: SurfaceKind,
    window: OracleWindow,
) -> Result<CorrelationSurface> {
    let us: Vec<f64> = u_grid.points().collect();
    let values = oracle_lattice(r, order, &us, &us, window, kind == SurfaceKind::Auto)?;
    let n = us.len();
    CorrelationSurface::new(
        u_grid,
        values,
        DMatrix::zeros(n, n),
        kind,
        crate::surface::SurfaceSource::Theory,
    )
}

/// Closed-form surface on `u_grid × u_grid`.
pub fn predicted_surface(field: &impl CorrelationField, u_grid: TimeGrid) -> Result<CorrelationSurface> {
    CorrelationSurface::from_field(u_grid, SurfaceKind::Auto, field)
}

/// Constants of the pseudo-autocorrelation chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PseudoAcfParams {
    pub order: FractionalOrder,
    /// `sin α·cos α + cot α`.
    pub c: f64,
    /// `arctan(c²·tan α)`.
    pub beta: f64,
}

impl PseudoAcfParams {
    pub fn new(order: FractionalOrder) -> Result<Self> {
        order.require_generic()?;
        order.require_finite_tangent()?;
        let a = order.alpha();
        let c = a.sin() * a.cos() + order.cot();
        let beta = (c * c * order.tan()).atan();
        Ok(Self { order, c, beta })
    }

    /// `√(c / cot α)`; real since `c / cot α = 1 + sin² α`.
    pub fn root(&self) -> f64 {
        (self.c / self.order.cot()).sqrt()
    }

    /// `Γ_α(u₁, u₂) = (u₁ sin α − u₂ csc α)·√(c/cot α) + u₂ csc α`.
    pub fn gamma(&self, u1: f64, u2: f64) -> f64 {
        let a = self.order.alpha();
        let csc = self.order.csc();
        (u1 * a.sin() - u2 * csc) * self.root() + u2 * csc
    }

    /// Angle `2β` at which `R̂` is transformed.
    pub fn doubled(&self) -> FractionalOrder {
        FractionalOrder::from_angle(2.0 * self.beta)
    }

    /// Argument of `Ĝ_{2β}` in the chain.
    fn g_argument(&self, u1: f64, u2: f64) -> f64 {
        let a = self.order.alpha();
        let g = self.gamma(u1, u2);
        (u2 - g * g * a.sin()) * self.beta.sin() / (self.c * a.sin()) + u1 * self.beta.cos()
    }

    /// Everything in the chain except `Ĝ_{2β}(·)`.
    fn prefactor(&self, u1: f64, u2: f64) -> Complex64 {
        let a = self.order.alpha();
        let (sa, ca) = a.sin_cos();
        let (sb, cb) = self.beta.sin_cos();
        let cot = self.order.cot();
        let g = self.gamma(u1, u2);
        let amp = (Complex64::new(1.0, -cot) / Complex64::new(self.c * self.c, -cot)).sqrt();
        let phase = cot * (1.0 - cb * cb / (ca * ca))
            - u1 * (u2 - g * g * sa) * sb
            + sb * cb * u1 * u1 / 2.0
            - sa * ca * g * g / 2.0
            + g * u2 * ca;
        amp * Complex64::cis(phase)
    }
}

/// One row of the closed-form vs oracle table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PseudoComparison {
    pub u1: f64,
    pub u2: f64,
    pub closed_form: Complex64,
    pub oracle: Complex64,
    pub discrepancy: f64,
}

/// `Ĝ_{2β} = F_{2β}{R̂}` by quadrature at the given points.
fn g_hat(r_hat: &LagFn, params: &PseudoAcfParams, points: &[f64], window: OracleWindow) -> Result<Vec<Complex64>> {
    let order = params.doubled();
    let grid = window.grid(&order, max_abs(points))?;
    let sig = SampledSignal::from_fn(grid, |t| r_hat(t));
    kernel::frft_at(&sig, order, points)
}

/// The pseudo-autocorrelation closed-form chain, evaluated as written. It is
/// experimental: trust [`numeric_output_pseudo_autocorr`] where they differ.
pub fn closed_form_pseudo_autocorr(
    r_hat: &LagFn,
    order: FractionalOrder,
    u1: f64,
    u2: f64,
    window: OracleWindow,
) -> Result<Complex64> {
    let params = PseudoAcfParams::new(order)?;
    let x = params.g_argument(u1, u2);
    let g = g_hat(r_hat, &params, &[x], window)?[0];
    Ok(params.prefactor(u1, u2) * g)
}

/// Closed form and oracle side by side on `us × us`.
pub fn pseudo_discrepancy_table(
    r_hat: &LagFn,
    order: FractionalOrder,
    us: &[f64],
    window: OracleWindow,
) -> Result<Vec<PseudoComparison>> {
    let params = PseudoAcfParams::new(order)?;
    let pairs: Vec<(f64, f64)> = us.iter().flat_map(|&a| us.iter().map(move |&b| (a, b))).collect();
    let xs: Vec<f64> = pairs.iter().map(|&(a, b)| params.g_argument(a, b)).collect();
    let gs = g_hat(r_hat, &params, &xs, window)?;
    let oracle = oracle_lattice(r_hat, order, us, us, window, false)?;
    Ok(pairs
        .iter()
        .zip(gs)
        .enumerate()
        .map(|(i, (&(u1, u2), g))| {
            let closed_form = params.prefactor(u1, u2) * g;
            let o = oracle[(i / us.len(), i % us.len())];
            PseudoComparison {
                u1,
                u2,
                closed_form,
                oracle: o,
                discrepancy: (closed_form - o).norm(),
            }
        })
        .collect())
}

/// `S_{z,α}(u) = F_α{R}(u)` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalPsd {
    pub order: FractionalOrder,
    pub u_grid: TimeGrid,
    pub values: Vec<Complex64>,
}

pub fn fractional_psd(
    r: &LagFn,
    order: FractionalOrder,
    u_grid: TimeGrid,
    window: OracleWindow,
) -> Result<FractionalPsd> {
    order.require_generic()?;
    let grid = window.grid(&order, u_grid.max_abs())?;
    let sig = SampledSignal::from_fn(grid, |t| r(t));
    let out = kernel::frft_quadrature(&sig, order, u_grid)?;
    Ok(FractionalPsd {
        order,
        u_grid,
        values: out.into_values(),
    })
}

/// Fractional PSD of `weight·δ(τ)`: `weight·K_α(0, u)`.
pub fn white_fractional_psd(weight: Complex64, order: FractionalOrder, u: f64) -> Result<Complex64> {
    Ok(weight * kernel::kernel_value(&order, 0.0, u)?)
}

/// The PSD recovered from an output autocorrelation, one estimate per `s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveredPsd {
    pub omega: f64,
    pub value: Complex64,
    pub per_s: Vec<(f64, Complex64)>,
    /// `max_s |S_s − S̄| / |S̄|`.
    pub spread: f64,
}

/// `S_{z,α}(ω) = F_{α,u₂→s}{R_α(ω + cos α·s, u₂)}·e^{i cos α sin α s²/2}·e^{i sin α ω s}`,
/// which holds for every `s`; the estimates are averaged and their spread
/// reported. `u2_window` is centred on `ω + cos α·s`. Delta surfaces are
/// substituted analytically.
pub fn recover_psd_from_output(
    surface: &impl CorrelationField,
    order: FractionalOrder,
    omega: f64,
    s_values: &[f64],
    u2_window: OracleWindow,
) -> Result<RecoveredPsd> {
    order.require_generic()?;
    if s_values.is_empty() {
        return Err(Error::InvalidParameter("no s values given".into()));
    }
    let (sa, ca) = order.alpha().sin_cos();
    let per_s = s_values
        .iter()
        .map(|&s| {
            let u1 = omega + ca * s;
            let transformed = match surface.delta_weight() {
                Some(w) => w * kernel::kernel_value(&order, u1, s)?,
                None => {
                    let local = window_around(u2_window, &order, u1, s)?;
                    let w = local.trapezoid_weights();
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (u2, w) in local.points().zip(w) {
                        acc += surface.value(u1, u2)? * kernel::kernel_value(&order, u2, s)? * w;
                    }
                    acc
                }
            };
            let chirp = Complex64::cis(0.5 * ca * sa * s * s + sa * omega * s);
            Ok((s, transformed * chirp))
        })
        .collect::<Result<Vec<_>>>()?;
    let value = per_s.iter().map(|(_, v)| v).sum::<Complex64>() / per_s.len() as f64;
    let spread = if value.norm() > 0.0 {
        per_s.iter().map(|(_, v)| (v - value).norm()).fold(0.0, f64::max) / value.norm()
    } else {
        per_s.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max)
    };
    Ok(RecoveredPsd {
        omega,
        value,
        per_s,
        spread,
    })
}

fn window_around(window: OracleWindow, order: &FractionalOrder, centre: f64, s: f64) -> Result<TimeGrid> {
    let local = window.grid(order, s.abs() + centre.abs())?;
    TimeGrid::new(centre + local.start(), local.step(), local.count())
}

/// `(A·μ, A·C·Aᴴ, A·P·Aᵀ)` for any linear map `A` (rows = outputs).
pub fn propagate_statistics(a: &DMatrix<Complex64>, input: &CovariancePair) -> Result<CovariancePair> {
    if a.ncols() != input.n() {
        return Err(Error::DimensionMismatch {
            expected: input.n(),
            got: a.ncols(),
        });
    }
    CovariancePair::new(
        a * &input.mean,
        a * &input.covariance * a.adjoint(),
        a * &input.pseudo * a.transpose(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

    fn gauss() -> LagFn {
        real_lag_fn(|t| (-0.5 * t * t).exp())
    }

    fn expo() -> LagFn {
        real_lag_fn(|t: f64| (-t.abs()).exp())
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    /// Direct O(N²) double sum, independent of the FFT path.
    fn naive_oracle(r: &LagFn, order: FractionalOrder, u1: f64, u2: f64, grid: TimeGrid, conj: bool) -> Complex64 {
        let w = grid.trapezoid_weights();
        let ts: Vec<f64> = grid.points().collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, t) in ts.iter().enumerate() {
            let kt = kernel::kernel_value(&order, *t, u1).unwrap() * w[n];
            for (m, s) in ts.iter().enumerate() {
                let ks = kernel::kernel_value(&order, *s, u2).unwrap() * w[m];
                let ks = if conj { ks.conj() } else { ks };
                acc += kt * r(t - s) * ks;
            }
        }
        acc
    }

    #[test]
    fn mean_values() {
        let o = FractionalOrder::from_angle(FRAC_PI_4);
        assert_eq!(predicted_mean(Complex64::new(0.0, 0.0), o, 1.3).unwrap(), Complex64::new(0.0, 0.0));
        let m = predicted_mean(Complex64::new(1.0, 0.0), o, 0.0).unwrap();
        assert!((m.norm() - 2f64.powf(0.25)).abs() < 1e-14);
        assert!((m.arg() - PI / 8.0).abs() < 1e-14);
        for u in [-3.0, 0.5, 2.0] {
            let v = predicted_mean(Complex64::new(1.0, 0.0), o, u).unwrap();
            assert!((v.norm() - m.norm()).abs() < 1e-14);
        }
        assert!(predicted_mean(Complex64::new(1.0, 0.0), FractionalOrder::new(1.0), 0.0).is_err());
    }

    #[test]
    fn mean_matches_windowed_quadrature_of_a_constant() {
        // a long flat window approximates the transform of 1 near u = 0
        let o = FractionalOrder::from_angle(FRAC_PI_4);
        let grid = TimeGrid::symmetric(40.0, 1.0 / 16.0).unwrap();
        let sig = SampledSignal::from_fn(grid, |t| {
            let x = (t.abs() - 30.0).max(0.0) / 10.0;
            Complex64::new(0.5 * (1.0 + (PI * x.min(1.0)).cos()), 0.0)
        });
        for u in [-1.0, 0.0, 1.5] {
            let q = kernel::frft_at(&sig, o, &[u]).unwrap()[0];
            let p = predicted_mean(Complex64::new(1.0, 0.0), o, u).unwrap();
            assert!(rel(q, p) < 1e-2, "u = {u}: {q} vs {p}");
        }
    }

    #[test]
    fn autocorr_closed_form_values() {
        let o = FractionalOrder::from_angle(FRAC_PI_4);
        let r = expo();
        let v = predicted_autocorr(&*r, o, 1.0, 0.0).unwrap();
        let expect = Complex64::from_polar(2f64.sqrt() * (-(2f64.sqrt())).exp(), -0.5);
        assert!((v - expect).norm() < 1e-14);
        let d = predicted_autocorr(&*r, FractionalOrder::from_angle(FRAC_PI_3), 0.7, 0.7).unwrap();
        assert!((d - Complex64::new(2.0, 0.0)).norm() < 1e-14);
        assert!(predicted_autocorr(&*r, FractionalOrder::from_angle(FRAC_PI_2), 0.0, 0.0).is_err());
    }

    #[test]
    fn modulus_depends_only_on_difference() {
        let o = FractionalOrder::from_angle(FRAC_PI_6);
        let r = gauss();
        let a = predicted_autocorr(&*r, o, 0.3, -0.2).unwrap().norm();
        let b = predicted_autocorr(&*r, o, 2.3, 1.8).unwrap().norm();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn fft_oracle_matches_naive_double_sum() {
        let o = FractionalOrder::from_angle(FRAC_PI_3);
        let window = OracleWindow::new(4.0, 1.0 / 16.0);
        let grid = window.grid(&o, 1.0).unwrap();
        let r = gauss();
        for (u1, u2) in [(0.0, 0.0), (0.5, -1.0)] {
            let fast = numeric_output_autocorr(&r, o, u1, u2, window).unwrap();
            let slow = naive_oracle(&r, o, u1, u2, grid, true);
            assert!((fast - slow).norm() < 1e-12);
            let fastp = numeric_output_pseudo_autocorr(&r, o, u1, u2, window).unwrap();
            let slowp = naive_oracle(&r, o, u1, u2, grid, false);
            assert!((fastp - slowp).norm() < 1e-12);
        }
    }

    #[test]
    fn closed_form_agrees_with_oracle_on_lattice() {
        let r = gauss();
        let us = [-2.0, -1.0, 0.0, 1.0, 2.0];
        for alpha in [FRAC_PI_6, FRAC_PI_4, FRAC_PI_3] {
            let o = FractionalOrder::from_angle(alpha);
            let oracle = oracle_lattice(&r, o, &us, &us, OracleWindow::default(), true).unwrap();
            for (j, &u1) in us.iter().enumerate() {
                for (k, &u2) in us.iter().enumerate() {
                    let p = predicted_autocorr(&*r, o, u1, u2).unwrap();
                    let peak = o.sec().abs();
                    assert!((oracle[(j, k)] - p).norm() / peak < 0.02, "α = {alpha}, ({u1}, {u2})");
                }
            }
        }
        let o = FractionalOrder::from_angle(FRAC_PI_3);
        let v = numeric_output_autocorr(&r, o, 0.0, 0.0, OracleWindow::default()).unwrap();
        assert!(rel(v, Complex64::new(2.0, 0.0)) < 0.02);
    }

    #[test]
    fn oracle_symmetries_and_zero() {
        let o = FractionalOrder::from_angle(0.9);
        let r = expo();
        let w = OracleWindow::auto(8.0);
        let a = numeric_output_autocorr(&r, o, 0.4, -1.1, w).unwrap();
        let b = numeric_output_autocorr(&r, o, -1.1, 0.4, w).unwrap();
        assert!((a - b.conj()).norm() < 1e-6);
        let p = numeric_output_pseudo_autocorr(&r, o, 0.4, -1.1, w).unwrap();
        let q = numeric_output_pseudo_autocorr(&r, o, -1.1, 0.4, w).unwrap();
        assert!((p - q).norm() < 1e-6);
        let zero = real_lag_fn(|_| 0.0);
        assert_eq!(numeric_output_pseudo_autocorr(&zero, o, 0.1, 0.2, w).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn oracle_rejects_coarse_step() {
        let o = FractionalOrder::from_angle(FRAC_PI_6);
        let err = numeric_output_autocorr(&gauss(), o, 0.0, 0.0, OracleWindow::new(12.0, 0.5)).unwrap_err();
        assert!(matches!(err, Error::GridTooCoarse { .. }));
        assert!(numeric_output_autocorr(&gauss(), FractionalOrder::new(2.0), 0.0, 0.0, OracleWindow::default()).is_err());
    }

    #[test]
    fn pseudo_oracle_regression_value() {
        let o = FractionalOrder::from_angle(FRAC_PI_6);
        let v = numeric_output_pseudo_autocorr(&gauss(), o, 0.5, -0.5, OracleWindow::new(12.0, 1.0 / 32.0)).unwrap();
        // frozen from an independent dense double sum on the same window
        let frozen = Complex64::new(PSEUDO_FROZEN.0, PSEUDO_FROZEN.1);
        assert!((v - frozen).norm() < 1e-9, "{v}");
    }

    const PSEUDO_FROZEN: (f64, f64) = (0.6757514828556116, 0.1952426194619482);

    #[test]
    fn white_pseudo_closed_form_matches_discrete_sum() {
        // Σ_n K(t_n,u₁)·K(t_n,u₂)·w_n²/Δt ≈ ∫ K K dt for a white input
        let o = FractionalOrder::from_angle(0.7);
        let grid = TimeGrid::symmetric(30.0, 1.0 / 32.0).unwrap();
        let op = FrftOperator::new(o, grid, vec![0.3, -0.8]).unwrap();
        let h = grid.step();
        // the truncated chirp integral converges slowly; smooth the ends
        let taper: Vec<f64> = grid
            .points()
            .map(|t| {
                let x = ((t.abs() - 20.0) / 10.0).clamp(0.0, 1.0);
                0.5 * (1.0 + (PI * x).cos())
            })
            .collect();
        let sum: Complex64 = op
            .row(0)
            .iter()
            .zip(op.row(1))
            .zip(&taper)
            .map(|((a, b), tp)| a * b * *tp / h)
            .sum();
        let w = Complex64::new(0.25, 0.1);
        let cf = white_output_pseudo_autocorr(w, o, 0.3, -0.8).unwrap();
        assert!(rel(sum * w, cf) < 2e-2, "{} vs {cf}", sum * w);
    }

    #[test]
    fn pseudo_chain_constants() {
        let p = PseudoAcfParams::new(FractionalOrder::from_angle(FRAC_PI_4)).unwrap();
        assert!((p.c - 1.5).abs() < 1e-14);
        assert!((p.beta - 2.25f64.atan()).abs() < 1e-14);
        assert!((p.beta - 1.15257).abs() < 1e-5);
        assert!((p.root() * p.root() - 1.5).abs() < 1e-14);
        assert!(PseudoAcfParams::new(FractionalOrder::new(1.0)).is_err());
    }

    #[test]
    fn pseudo_chain_zero_input() {
        let zero = real_lag_fn(|_| 0.0);
        let o = FractionalOrder::from_angle(FRAC_PI_6);
        let v = closed_form_pseudo_autocorr(&zero, o, 0.3, 0.1, OracleWindow::default()).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
        let table = pseudo_discrepancy_table(&gauss(), o, &[-1.0, 0.0, 1.0], OracleWindow::default()).unwrap();
        assert_eq!(table.len(), 9);
        assert!(table.iter().all(|row| row.closed_form.re.is_finite() && row.oracle.re.is_finite()));
    }

    #[test]
    fn psd_at_quarter_turn_is_fourier_transform() {
        let o = FractionalOrder::from_angle(FRAC_PI_2);
        let ug = TimeGrid::symmetric(3.0, 0.5).unwrap();
        let psd = fractional_psd(&gauss(), o, ug, OracleWindow::default()).unwrap();
        for (u, v) in ug.points().zip(&psd.values) {
            // (1/√2π)∫e^{−τ²/2}e^{−iuτ}dτ = e^{−u²/2}
            assert!((v - Complex64::new((-0.5 * u * u).exp(), 0.0)).norm() < 1e-3);
        }
        let zero = fractional_psd(&real_lag_fn(|_| 0.0), o, ug, OracleWindow::default()).unwrap();
        assert!(zero.values.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn psd_reflection_identity() {
        let o = FractionalOrder::from_angle(0.6);
        let ug = TimeGrid::symmetric(2.0, 0.5).unwrap();
        let r = expo();
        let fwd = fractional_psd(&r, o, ug, OracleWindow::default()).unwrap();
        let back = fractional_psd(&r, o.negated(), ug, OracleWindow::default()).unwrap();
        let n = ug.count();
        for j in 0..n {
            assert!((fwd.values[n - 1 - j] - back.values[j].conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn psd_recovered_from_closed_form_surface() {
        let o = FractionalOrder::from_angle(FRAC_PI_4);
        let field = PredictedAutocorr::new(gauss(), o).unwrap();
        let ug = TimeGrid::symmetric(1.0, 1.0).unwrap();
        let psd = fractional_psd(&gauss(), o, ug, OracleWindow::default()).unwrap();
        let rec = recover_psd_from_output(&field, o, 0.0, &[-1.0, 0.0, 1.0], OracleWindow::new(12.0, 1.0 / 64.0)).unwrap();
        assert!(rel(rec.value, psd.values[1]) < 0.03, "{} vs {}", rec.value, psd.values[1]);
        assert!(rec.spread < 0.03);
    }

    #[test]
    fn white_recovery_is_flat_in_modulus() {
        let o = FractionalOrder::from_angle(FRAC_PI_3);
        let d = DeltaSurface::new(Complex64::new(0.5, 0.0));
        let mut mags = Vec::new();
        for omega in [-2.0, -0.5, 0.0, 1.0, 2.5] {
            let r = recover_psd_from_output(&d, o, omega, &[-1.0, 0.0, 2.0], OracleWindow::default()).unwrap();
            assert!(r.spread < 1e-12);
            let direct = white_fractional_psd(Complex64::new(0.5, 0.0), o, omega).unwrap();
            assert!((r.value - direct).norm() < 1e-12);
            mags.push(r.value.norm());
        }
        assert!(mags.iter().all(|m| (m - mags[0]).abs() < 1e-12));
    }

    #[test]
    fn recovery_from_zero_and_out_of_range_surfaces() {
        let o = FractionalOrder::from_angle(FRAC_PI_4);
        let zero = |_: f64, _: f64| Complex64::new(0.0, 0.0);
        let r = recover_psd_from_output(&zero, o, 0.5, &[0.0, 1.0], OracleWindow::new(4.0, 1.0 / 16.0)).unwrap();
        assert_eq!(r.value, Complex64::new(0.0, 0.0));
        let g = TimeGrid::symmetric(2.0, 0.5).unwrap();
        let small = CorrelationSurface::from_field(g, SurfaceKind::Auto, &zero).unwrap();
        let err = recover_psd_from_output(&small, o, 0.0, &[0.0], OracleWindow::new(4.0, 1.0 / 16.0)).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn propagation_matches_dfrft_statistics() {
        use crate::dfrft::{transform_statistics, DfrftMatrix};
        let f = DfrftMatrix::build(6, FractionalOrder::new(0.3)).unwrap();
        let n = 6;
        let stats = CovariancePair::new(
            nalgebra::DVector::from_element(n, Complex64::new(1.0, -1.0)),
            DMatrix::from_fn(n, n, |j, k| Complex64::new((-(j.abs_diff(k) as f64)).exp(), 0.0)),
            DMatrix::from_fn(n, n, |j, k| Complex64::new(0.0, 0.1 * (j + k) as f64)),
        )
        .unwrap();
        let a = propagate_statistics(f.matrix(), &stats).unwrap();
        let b = transform_statistics(&stats, &f).unwrap();
        assert!(crate::linalg::max_abs_diff(&a.covariance, &b.covariance) < 1e-14);
        assert!(crate::linalg::max_abs_diff(&a.pseudo, &b.pseudo) < 1e-14);
    }
}
