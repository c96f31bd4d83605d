use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use frft_stoch::dfrft::{DfrftMatrix, DftEigenbasis};
use frft_stoch::estimators::{estimate_autocorr, estimate_pseudo_autocorr};
use frft_stoch::grid::{SampledSignal, TimeGrid};
use frft_stoch::kernel::frft_quadrature;
use frft_stoch::linalg::max_abs_diff;
use frft_stoch::order::FractionalOrder;
use frft_stoch::processes::{generate, AcfShape, CovarianceStructure, Field, ProcessKind, StationaryModel};

fn complex() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0_f64, -2.0..2.0_f64).prop_map(|(re, im)| Complex64::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dfrft_is_unitary_and_additive(n in 2usize..24, a in -3.0..3.0_f64, b in -3.0..3.0_f64) {
        let basis = DftEigenbasis::new(n).unwrap();
        let fa = basis.power(FractionalOrder::new(a));
        let fb = basis.power(FractionalOrder::new(b));
        let fab = basis.power(FractionalOrder::new(a + b));
        prop_assert!(fa.unitarity_error() < 1e-10);
        prop_assert!(max_abs_diff(&(fa.matrix() * fb.matrix()), fab.matrix()) < 1e-9);
    }

    #[test]
    fn dfrft_inverse_is_negated_order(n in 2usize..20, a in -2.0..2.0_f64) {
        let f = DfrftMatrix::build(n, FractionalOrder::new(a)).unwrap();
        let g = DfrftMatrix::build(n, FractionalOrder::new(-a)).unwrap();
        prop_assert!(max_abs_diff(&(f.matrix() * g.matrix()), &DMatrix::identity(n, n)) < 1e-10);
    }

    #[test]
    fn quadrature_transform_is_linear(alpha in 0.2..1.4_f64, p in complex(), q in complex()) {
        let grid = TimeGrid::symmetric(6.0, 1.0 / 16.0).unwrap();
        let out = TimeGrid::symmetric(2.0, 0.5).unwrap();
        let order = FractionalOrder::from_angle(alpha);
        let x = SampledSignal::from_fn(grid, |t| Complex64::new((-t * t).exp(), 0.0));
        let y = SampledSignal::from_fn(grid, |t| Complex64::new(0.0, t * (-t * t / 2.0).exp()));
        let mix = SampledSignal::from_fn(grid, |t| {
            p * Complex64::new((-t * t).exp(), 0.0) + q * Complex64::new(0.0, t * (-t * t / 2.0).exp())
        });
        let fx = frft_quadrature(&x, order, out).unwrap();
        let fy = frft_quadrature(&y, order, out).unwrap();
        let fm = frft_quadrature(&mix, order, out).unwrap();
        for ((a, b), m) in fx.values().iter().zip(fy.values()).zip(fm.values()) {
            prop_assert!((p * a + q * b - m).norm() < 1e-12);
        }
    }

    #[test]
    fn generation_is_seed_deterministic(seed in any::<u64>(), m in 1usize..6) {
        let model = StationaryModel::zero_mean(ProcessKind::ColoredGaussian {
            acf: AcfShape::Exponential { variance: 1.0, scale: 2.0 },
            field: Field::ProperComplex,
            covariance: CovarianceStructure::Toeplitz,
        }).unwrap();
        let grid = TimeGrid::indices(16).unwrap();
        let a = generate(&model, grid, m, seed).unwrap();
        let b = generate(&model, grid, m, seed).unwrap();
        let c = generate(&model, grid, m, seed.wrapping_add(1)).unwrap();
        prop_assert_eq!(a.data(), b.data());
        prop_assert_ne!(a.data(), c.data());
    }

    #[test]
    fn estimated_surfaces_have_exact_structure(seed in any::<u64>(), rho in 0.0..0.9_f64) {
        let model = StationaryModel::zero_mean(ProcessKind::WhiteImproperComplex { noise_level: 2.0, rho: Complex64::new(rho, 0.0) }).unwrap();
        let ens = generate(&model, TimeGrid::indices(12).unwrap(), 40, seed).unwrap();
        let acf = estimate_autocorr(&ens).unwrap();
        let pacf = estimate_pseudo_autocorr(&ens).unwrap();
        prop_assert_eq!(acf.structure_defect(), 0.0);
        prop_assert_eq!(pacf.structure_defect(), 0.0);
        for j in 0..acf.n() {
            prop_assert_eq!(acf.values[(j, j)].im, 0.0);
            prop_assert!(acf.values[(j, j)].re >= 0.0);
        }
    }
}
