//! Continuous fractional Fourier transform by direct quadrature.
//!
//! For a generic angle (`sin α ≠ 0`) the transform of `z` is
//!
//! ```text
//! Z_α(u) = ∫ z(t) K_α(t, u) dt,
//! K_α(t, u) = √((1 − i cot α)/2π) · exp(i u²/2 · cot α) · exp(−i t u csc α + i t²/2 · cot α)
//! ```
//!
//! Here the integral is a trapezoid sum on the input grid. This is an
//! `O(N·M)` reference implementation: it is slow, but every term is explicit,
//! which is what the statistical checks elsewhere in the crate lean on.
//!
//! The kernel is a chirp, so a grid can be too coarse to resolve it. Before
//! summing we require
//!
//! ```text
//! step ≤ π / (|cot α|·T + |csc α|·U)
//! ```
//!
//! with `T` the largest `|t|` on the input grid and `U` the largest requested
//! `|u|`, which keeps the kernel phase increment per sample below π.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{SampledSignal, TimeGrid};
use crate::order::FractionalOrder;

/// Largest Hermite degree accepted by [`hermite`].
pub const MAX_HERMITE_DEGREE: usize = 200;

/// Endpoint magnitude (relative to the peak) above which a truncation warning
/// is logged.
pub const ENDPOINT_DECAY_RATIO: f64 = 1e-6;

/// Amplitude factor `√((1 − i cot α)/2π)`, principal branch.
pub fn kernel_amplitude(order: &FractionalOrder) -> Result<Complex64> {
    order.require_generic()?;
    Ok((Complex64::new(1.0, -order.cot()) / TAU).sqrt())
}

/// Pointwise kernel `K_α(t, u)`.
pub fn kernel_value(order: &FractionalOrder, t: f64, u: f64) -> Result<Complex64> {
    let amp = kernel_amplitude(order)?;
    let cot = order.cot();
    let csc = order.csc();
    let phase = 0.5 * u * u * cot - t * u * csc + 0.5 * t * t * cot;
    Ok(amp * Complex64::cis(phase))
}

/// Normalized Hermite function `h_n(t)` with `∫ h_n² dt = 1`.
pub fn hermite(n: usize, t: f64) -> Result<f64> {
    Ok(*hermite_all(n, t)?.last().expect("non-empty"))
}

/// `h_0(t), …, h_n(t)` via
/// `h_{k+1} = t·√(2/(k+1))·h_k − √(k/(k+1))·h_{k−1}`.
pub fn hermite_all(n: usize, t: f64) -> Result<Vec<f64>> {
    if n > MAX_HERMITE_DEGREE {
        return Err(Error::DegreeOutOfRange(n));
    }
    let mut out = Vec::with_capacity(n + 1);
    let h0 = PI.powf(-0.25) * (-0.5 * t * t).exp();
    out.push(h0);
    if n == 0 {
        return Ok(out);
    }
    out.push(std::f64::consts::SQRT_2 * t * h0);
    for k in 1..n {
        let kf = k as f64;
        let next = t * (2.0 / (kf + 1.0)).sqrt() * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    Ok(out)
}

/// Hermite function sampled on a grid as a complex signal.
pub fn hermite_signal(n: usize, grid: TimeGrid) -> Result<SampledSignal> {
    let values = grid
        .points()
        .map(|t| hermite(n, t).map(|h| Complex64::new(h, 0.0)))
        .collect::<Result<Vec<_>>>()?;
    SampledSignal::new(grid, values)
}

/// Largest admissible input step for the chirp-sampling rule.
pub fn chirp_step_limit(order: &FractionalOrder, input_half_width: f64, max_abs_u: f64) -> f64 {
    let denom = order.cot().abs() * input_half_width + order.csc().abs() * max_abs_u;
    if denom == 0.0 {
        f64::INFINITY
    } else {
        PI / denom
    }
}

/// Errors with [`Error::GridTooCoarse`] if `grid` cannot resolve the kernel
/// for outputs up to `max_abs_u`.
pub fn check_chirp_sampling(order: &FractionalOrder, grid: &TimeGrid, max_abs_u: f64) -> Result<()> {
    let limit = chirp_step_limit(order, grid.max_abs(), max_abs_u);
    if grid.step() > limit {
        return Err(Error::GridTooCoarse {
            step: grid.step(),
            limit,
        });
    }
    Ok(())
}

/// A precomputed quadrature operator: row `k` holds `K_α(t_n, u_k)·w_n`.
///
/// Building it once and applying it to many realizations is how ensembles are
/// transformed; applying it to a single signal is exactly [`frft_quadrature`].
#[derive(Debug, Clone)]
pub struct FrftOperator {
    order: FractionalOrder,
    input: TimeGrid,
    outputs: Vec<f64>,
    matrix: Vec<Complex64>,
}

impl FrftOperator {
    pub fn new(order: FractionalOrder, input: TimeGrid, outputs: Vec<f64>) -> Result<Self> {
        let amp = kernel_amplitude(&order)?;
        let max_u = outputs.iter().fold(0.0_f64, |m, u| m.max(u.abs()));
        check_chirp_sampling(&order, &input, max_u)?;

        let cot = order.cot();
        let csc = order.csc();
        let weights = input.trapezoid_weights();
        let ts: Vec<f64> = input.points().collect();
        let mut matrix = Vec::with_capacity(outputs.len() * ts.len());
        for &u in &outputs {
            let u_phase = 0.5 * u * u * cot;
            for (t, w) in ts.iter().zip(&weights) {
                let phase = u_phase - t * u * csc + 0.5 * t * t * cot;
                matrix.push(amp * Complex64::cis(phase) * *w);
            }
        }
        Ok(Self {
            order,
            input,
            outputs,
            matrix,
        })
    }

    pub fn order(&self) -> FractionalOrder {
        self.order
    }

    pub fn input_grid(&self) -> &TimeGrid {
        &self.input
    }

    pub fn outputs(&self) -> &[f64] {
        &self.outputs
    }

    /// Row-major `outputs × inputs` matrix of weighted kernel values.
    pub fn matrix(&self) -> &[Complex64] {
        &self.matrix
    }

    pub fn row(&self, k: usize) -> &[Complex64] {
        let n = self.input.count();
        &self.matrix[k * n..(k + 1) * n]
    }

    pub fn apply(&self, values: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.input.count();
        if values.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: values.len(),
            });
        }
        Ok(self
            .matrix
            .chunks_exact(n)
            .map(|row| row.iter().zip(values).map(|(k, z)| k * z).sum())
            .collect())
    }
}

fn warn_if_truncated(signal: &SampledSignal) {
    let peak = signal.max_abs();
    if peak == 0.0 {
        return;
    }
    let v = signal.values();
    let edge = v[0].norm().max(v[v.len() - 1].norm());
    if edge >= ENDPOINT_DECAY_RATIO * peak {
        log::warn!(
            "signal does not decay at the grid ends (edge/peak = {:.3e}); quadrature FRFT sees a truncated input",
            edge / peak
        );
    }
}

/// Transform evaluated at arbitrary output points.
pub fn frft_at(signal: &SampledSignal, order: FractionalOrder, outputs: &[f64]) -> Result<Vec<Complex64>> {
    FrftOperator::new(order, *signal.grid(), outputs.to_vec())?.apply(signal.values())
}

/// Forward transform of a sampled signal onto `out_grid`.
pub fn frft_quadrature(
    signal: &SampledSignal,
    order: FractionalOrder,
    out_grid: TimeGrid,
) -> Result<SampledSignal> {
    warn_if_truncated(signal);
    let outputs: Vec<f64> = out_grid.points().collect();
    let values = frft_at(signal, order, &outputs)?;
    SampledSignal::new(out_grid, values)
}

/// Inverse transform: the forward transform at angle `−α`.
pub fn inverse_frft(
    signal: &SampledSignal,
    order: FractionalOrder,
    out_grid: TimeGrid,
) -> Result<SampledSignal> {
    frft_quadrature(signal, order.negated(), out_grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

    fn near(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn kernel_at_quarter_turn_origin() {
        let k = kernel_value(&FractionalOrder::from_angle(FRAC_PI_2), 0.0, 0.0).unwrap();
        assert!(near(k, Complex64::new(0.398942280401, 0.0), 1e-10));
    }

    #[test]
    fn kernel_at_eighth_turn_origin() {
        let k = kernel_value(&FractionalOrder::from_angle(FRAC_PI_4), 0.0, 0.0).unwrap();
        let expect = (Complex64::new(1.0, -1.0) / TAU).sqrt();
        assert!(near(k, expect, 1e-14));
        // principal branch: argument in (−π/2, π/2]
        assert!(k.re > 0.0);
    }

    #[test]
    fn kernel_singular_at_zero_angle() {
        let err = kernel_value(&FractionalOrder::new(0.0), 1.0, 2.0).unwrap_err();
        assert!(matches!(err, Error::SingularAngle { .. }));
        assert!(kernel_value(&FractionalOrder::new(2.0), 0.0, 0.0).is_err());
        assert!(kernel_value(&FractionalOrder::from_angle(5e-4), 0.0, 0.0).is_err());
    }

    #[test]
    fn negated_kernel_is_conjugate() {
        let o = FractionalOrder::from_angle(0.7);
        for &(t, u) in &[(0.3, -1.2), (2.0, 0.5), (-3.1, 4.4)] {
            let k = kernel_value(&o, t, u).unwrap();
            let km = kernel_value(&o.negated(), t, u).unwrap();
            assert!(near(km, k.conj(), 1e-14));
        }
    }

    #[test]
    fn hermite_values() {
        assert!((hermite(0, 0.0).unwrap() - 0.751125544464943).abs() < 1e-12);
        assert_eq!(hermite(1, 0.0).unwrap(), 0.0);
        assert!(matches!(hermite(201, 0.0), Err(Error::DegreeOutOfRange(201))));
        assert!(hermite(200, 1.0).unwrap().is_finite());
    }

    #[test]
    fn hermite_gram_is_identity() {
        let g = TimeGrid::symmetric(10.0, 0.01).unwrap();
        let w = g.trapezoid_weights();
        let h: Vec<Vec<f64>> = g.points().map(|t| hermite_all(5, t).unwrap()).collect();
        for j in 0..=5 {
            for k in 0..=5 {
                let s: f64 = h.iter().zip(&w).map(|(hv, w)| w * hv[j] * hv[k]).sum();
                let e = if j == k { 1.0 } else { 0.0 };
                assert!((s - e).abs() < 1e-6, "gram[{j}][{k}] = {s}");
            }
        }
    }

    #[test]
    fn hermite_eigenfunctions() {
        let grid = TimeGrid::symmetric(8.0, 1.0 / 64.0).unwrap();
        let order = FractionalOrder::from_angle(FRAC_PI_3);
        for n in 0..2 {
            let h = hermite_signal(n, grid).unwrap();
            let out = frft_quadrature(&h, order, grid).unwrap();
            let expect = h.scaled(Complex64::cis(-FRAC_PI_3 * n as f64));
            assert!(out.max_abs_diff(&expect) < 1e-4);
        }
    }

    #[test]
    fn zero_in_zero_out() {
        let grid = TimeGrid::symmetric(4.0, 0.05).unwrap();
        let z = SampledSignal::zeros(grid);
        let order = FractionalOrder::new(0.4);
        assert_eq!(frft_quadrature(&z, order, grid).unwrap().max_abs(), 0.0);
        assert_eq!(inverse_frft(&z, order, grid).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let grid = TimeGrid::symmetric(8.0, 0.5).unwrap();
        let h = hermite_signal(0, grid).unwrap();
        let err = frft_quadrature(&h, FractionalOrder::from_angle(0.3), grid).unwrap_err();
        assert!(matches!(err, Error::GridTooCoarse { .. }));
    }

    #[test]
    fn round_trip_recovers_gaussian() {
        let grid = TimeGrid::symmetric(8.0, 1.0 / 32.0).unwrap();
        let order = FractionalOrder::from_angle(0.9);
        let h = hermite_signal(0, grid).unwrap();
        let fwd = frft_quadrature(&h, order, grid).unwrap();
        let back = inverse_frft(&fwd, order, grid).unwrap();
        assert!(back.max_abs_diff(&h) < 1e-3);
    }
}
