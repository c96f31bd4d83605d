//! Discrete fractional Fourier transform `F^a = Q·Λ^a·Qᵀ`.
//!
//! `Q` holds real, orthonormal, Hermite-like eigenvectors of the unitary DFT.
//! Because the DFT has only four distinct eigenvalues, its eigenvectors are not
//! unique; they are pinned down by diagonalizing the Dickinson–Steiglitz matrix
//!
//! ```text
//! S[j][j] = 2·cos(2πj/n) − 4,   S[j][j±1 mod n] = 1,
//! ```
//!
//! which commutes with the DFT and has a simple spectrum. `S` also commutes
//! with the index reversal `j → −j mod n`, so it is diagonalized separately on
//! the even and odd subspaces. That keeps every column of `Q` exactly even or
//! odd even when eigenvalues of the two classes nearly coincide (large `n`).
//!
//! Within each parity class, eigenvectors sorted by decreasing eigenvalue of
//! `S` play the role of Hermite orders `0, 2, 4, …` (even) and `1, 3, 5, …`
//! (odd). The eigenphase of order `k` is `exp(−i·(π/2)·a·k)`, with the top
//! even order set to `n` (rather than `n − 1`) when `n` is even, matching the
//! multiplicities of the DFT eigenvalues so that `F^1` is exactly the DFT.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;
use crate::order::FractionalOrder;

/// Unitary DFT matrix `W[j][k] = exp(−i2πjk/n)/√n`.
pub fn dft_matrix(n: usize) -> Result<DMatrix<Complex64>> {
    if n < 2 {
        return Err(Error::Size(format!("DFT size must be at least 2, got {n}")));
    }
    let scale = 1.0 / (n as f64).sqrt();
    Ok(DMatrix::from_fn(n, n, |j, k| {
        // reduce jk mod n first so large products keep full phase accuracy
        let m = (j * k) % n;
        Complex64::cis(-2.0 * PI * m as f64 / n as f64) * scale
    }))
}

/// Index reversal `z[k] → z[(−k) mod n]` as a matrix.
pub fn parity_matrix(n: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |j, k| {
        if (j + k) % n == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

fn commuting_apply(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    (0..n)
        .map(|j| {
            let d = 2.0 * (2.0 * PI * j as f64 / n as f64).cos() - 4.0;
            d * v[j] + v[(j + n - 1) % n] + v[(j + 1) % n]
        })
        .collect()
}

/// Sparse basis vector: `(index, weight)` pairs.
type SparseVec = Vec<(usize, f64)>;

fn parity_bases(n: usize) -> (Vec<SparseVec>, Vec<SparseVec>) {
    let mut even = vec![vec![(0, 1.0)]];
    let mut odd = Vec::new();
    for p in 1..=n / 2 {
        let q = n - p;
        if p == q {
            even.push(vec![(p, 1.0)]);
        } else {
            even.push(vec![(p, FRAC_1_SQRT_2), (q, FRAC_1_SQRT_2)]);
            odd.push(vec![(p, FRAC_1_SQRT_2), (q, -FRAC_1_SQRT_2)]);
        }
    }
    (even, odd)
}

/// Eigenvectors of `S` restricted to `span(basis)`, lifted back to `ℝⁿ` and
/// sorted by decreasing eigenvalue.
fn restricted_eigenvectors(n: usize, basis: &[SparseVec]) -> Vec<(f64, Vec<f64>)> {
    let m = basis.len();
    if m == 0 {
        return Vec::new();
    }
    let mut block = DMatrix::<f64>::zeros(m, m);
    for (c, b) in basis.iter().enumerate() {
        let mut dense = vec![0.0; n];
        for &(i, w) in b {
            dense[i] = w;
        }
        let sb = commuting_apply(&dense);
        for (r, br) in basis.iter().enumerate() {
            block[(r, c)] = br.iter().map(|&(i, w)| w * sb[i]).sum();
        }
    }
    let eig = SymmetricEigen::new(block);
    let mut pairs: Vec<(f64, Vec<f64>)> = (0..m)
        .map(|c| {
            let y = eig.eigenvectors.column(c);
            let mut v = vec![0.0; n];
            for (r, b) in basis.iter().enumerate() {
                for &(i, w) in b {
                    v[i] += w * y[r];
                }
            }
            (eig.eigenvalues[c], v)
        })
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    pairs
}

fn fix_sign(v: &mut [f64]) {
    let peak = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-8 * peak) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// The order-independent half of the DFRFT: Hermite-like DFT eigenvectors and
/// their Hermite order labels.
#[derive(Debug, Clone)]
pub struct DftEigenbasis {
    eigvecs: DMatrix<f64>,
    indices: Vec<usize>,
    commuting_eigenvalues: Vec<f64>,
}

impl DftEigenbasis {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Size(format!("DFRFT size must be at least 2, got {n}")));
        }
        let (even, odd) = parity_bases(n);
        let mut labeled: Vec<(usize, f64, Vec<f64>)> = Vec::with_capacity(n);
        for (i, (lam, v)) in restricted_eigenvectors(n, &even).into_iter().enumerate() {
            labeled.push((2 * i, lam, v));
        }
        for (i, (lam, v)) in restricted_eigenvectors(n, &odd).into_iter().enumerate() {
            labeled.push((2 * i + 1, lam, v));
        }
        labeled.sort_by_key(|(k, _, _)| *k);
        debug_assert_eq!(labeled.len(), n);

        let mut eigvecs = DMatrix::<f64>::zeros(n, n);
        let mut indices = Vec::with_capacity(n);
        let mut commuting_eigenvalues = Vec::with_capacity(n);
        for (c, (k, lam, mut v)) in labeled.into_iter().enumerate() {
            fix_sign(&mut v);
            eigvecs.column_mut(c).copy_from_slice(&v);
            indices.push(k);
            commuting_eigenvalues.push(lam);
        }
        Ok(Self {
            eigvecs,
            indices,
            commuting_eigenvalues,
        })
    }

    pub fn n(&self) -> usize {
        self.indices.len()
    }

    /// Columns are eigenvectors, ordered by Hermite order.
    pub fn eigvecs(&self) -> &DMatrix<f64> {
        &self.eigvecs
    }

    /// Hermite order `k` of each column: `0..n−1` for odd `n`, and
    /// `0..n−2` followed by `n` for even `n`.
    pub fn eigphase_indices(&self) -> &[usize] {
        &self.indices
    }

    /// Eigenvalue of the commuting matrix for each column.
    pub fn commuting_eigenvalues(&self) -> &[f64] {
        &self.commuting_eigenvalues
    }

    pub fn power(&self, order: FractionalOrder) -> DfrftMatrix {
        let q = linalg::to_complex(&self.eigvecs);
        let mut scaled = q.clone();
        for (c, &k) in self.indices.iter().enumerate() {
            // exponent reduced mod 4 in a·k so large k keeps its phase accuracy
            let turns = (order.a() * k as f64).rem_euclid(4.0);
            let lam = Complex64::cis(-FRAC_PI_2 * turns);
            scaled.column_mut(c).iter_mut().for_each(|z| *z *= lam);
        }
        let matrix = scaled * q.transpose();
        DfrftMatrix {
            order,
            matrix,
            basis: self.clone(),
        }
    }
}

/// An `n × n` unitary DFRFT matrix with the eigendecomposition it came from.
#[derive(Debug, Clone)]
pub struct DfrftMatrix {
    order: FractionalOrder,
    matrix: DMatrix<Complex64>,
    basis: DftEigenbasis,
}

impl DfrftMatrix {
    pub fn build(n: usize, order: FractionalOrder) -> Result<Self> {
        Ok(DftEigenbasis::new(n)?.power(order))
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn order(&self) -> FractionalOrder {
        self.order
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn eigvecs(&self) -> &DMatrix<f64> {
        self.basis.eigvecs()
    }

    pub fn eigphase_indices(&self) -> &[usize] {
        self.basis.eigphase_indices()
    }

    pub fn basis(&self) -> &DftEigenbasis {
        &self.basis
    }

    pub fn unitarity_error(&self) -> f64 {
        linalg::unitarity_error(&self.matrix)
    }

    /// `F^a·z`.
    pub fn apply(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut out = vec![Complex64::new(0.0, 0.0); z.len()];
        self.apply_into(z, &mut out)?;
        Ok(out)
    }

    pub fn apply_into(&self, z: &[Complex64], out: &mut [Complex64]) -> Result<()> {
        let n = self.n();
        if z.len() != n || out.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: z.len(),
            });
        }
        for (j, o) in out.iter_mut().enumerate() {
            let row = self.matrix.row(j);
            *o = row.iter().zip(z).map(|(f, x)| f * x).sum();
        }
        Ok(())
    }
}

/// Mean, covariance and pseudo-covariance of a complex random vector.
#[derive(Debug, Clone, PartialEq)]
pub struct CovariancePair {
    pub mean: DVector<Complex64>,
    pub covariance: DMatrix<Complex64>,
    pub pseudo: DMatrix<Complex64>,
}

impl CovariancePair {
    pub fn new(
        mean: DVector<Complex64>,
        covariance: DMatrix<Complex64>,
        pseudo: DMatrix<Complex64>,
    ) -> Result<Self> {
        let n = mean.len();
        for m in [&covariance, &pseudo] {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: m.nrows(),
                });
            }
        }
        Ok(Self {
            mean,
            covariance,
            pseudo,
        })
    }

    pub fn n(&self) -> usize {
        self.mean.len()
    }

    /// `‖C − Cᴴ‖_max`.
    pub fn hermitian_defect(&self) -> f64 {
        linalg::max_abs_diff(&self.covariance, &self.covariance.adjoint())
    }

    /// `‖P − Pᵀ‖_max`.
    pub fn symmetry_defect(&self) -> f64 {
        linalg::max_abs_diff(&self.pseudo, &self.pseudo.transpose())
    }

    /// Eigenvalues of the Hermitian part of `C`, ascending.
    pub fn covariance_eigenvalues(&self) -> Vec<f64> {
        let h = (&self.covariance + self.covariance.adjoint()) * Complex64::new(0.5, 0.0);
        let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// `(F^a·μ, F^a·C·(F^a)ᴴ, F^a·P·(F^a)ᵀ)`.
pub fn transform_statistics(stats: &CovariancePair, f: &DfrftMatrix) -> Result<CovariancePair> {
    if stats.n() != f.n() {
        return Err(Error::DimensionMismatch {
            expected: f.n(),
            got: stats.n(),
        });
    }
    let m = f.matrix();
    Ok(CovariancePair {
        mean: m * &stats.mean,
        covariance: m * &stats.covariance * m.adjoint(),
        pseudo: m * &stats.pseudo * m.transpose(),
    })
}

/// Log-density of a proper complex Gaussian `CN(μ, C)`:
/// `−n·ln π − ln det C − (z − μ)ᴴ C⁻¹ (z − μ)`.
///
/// The caller is responsible for properness; the pseudo-covariance is not
/// consulted.
pub fn gaussian_logpdf(
    z: &DVector<Complex64>,
    mean: &DVector<Complex64>,
    covariance: &DMatrix<Complex64>,
) -> Result<f64> {
    let n = z.len();
    if mean.len() != n || covariance.nrows() != n || covariance.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: mean.len(),
        });
    }
    let chol = covariance
        .clone()
        .cholesky()
        .ok_or(Error::NotPositiveDefinite)?;
    let l = chol.l();
    let mut log_det = 0.0;
    for i in 0..n {
        let d = l[(i, i)];
        // an indefinite input yields a (nearly) imaginary pivot
        if !(d.re > 0.0 && d.im.abs() <= 1e-8 * d.re) {
            return Err(Error::NotPositiveDefinite);
        }
        log_det += 2.0 * d.re.ln();
    }
    let diff = z - mean;
    let y = chol.solve(&diff);
    let quad = diff.dotc(&y).re;
    Ok(-(n as f64) * PI.ln() - log_det - quad)
}
