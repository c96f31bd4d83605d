//! Small dense/FFT helpers shared by the oracle and the process generator.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;

/// `y = T·x` for the Toeplitz matrix `T[j][k] = lag(j − k)`, computed through a
/// circulant embedding of size `≥ 2N − 1`. `lag` is evaluated at
/// `−(N−1)..=(N−1)`.
pub fn toeplitz_matvec(lag: impl Fn(isize) -> Complex64, x: &[Complex64]) -> Vec<Complex64> {
    let n = x.len();
    if n == 0 {
        return Vec::new();
    }
    let size = (2 * n - 1).next_power_of_two();
    let mut col = vec![Complex64::new(0.0, 0.0); size];
    for (m, c) in col.iter_mut().take(n).enumerate() {
        *c = lag(m as isize);
    }
    for m in 1..n {
        col[size - m] = lag(-(m as isize));
    }
    let mut xp = vec![Complex64::new(0.0, 0.0); size];
    xp[..n].copy_from_slice(x);

    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(size);
    let inv = planner.plan_fft_inverse(size);
    fwd.process(&mut col);
    fwd.process(&mut xp);
    for (a, b) in xp.iter_mut().zip(&col) {
        *a *= b;
    }
    inv.process(&mut xp);
    let scale = 1.0 / size as f64;
    xp.truncate(n);
    xp.iter_mut().for_each(|v| *v *= scale);
    xp
}

pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `‖A·Aᴴ − I‖_max`.
pub fn unitarity_error(a: &DMatrix<Complex64>) -> f64 {
    let prod = a * a.adjoint();
    max_abs_diff(&prod, &DMatrix::identity(a.nrows(), a.ncols()))
}

pub fn to_complex(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|x| Complex64::new(x, 0.0))
}
