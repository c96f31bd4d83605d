use num_complex::Complex64;

use frft_stoch::estimators::{analyze_ensemble, estimate_autocorr, estimate_mean, Verdict};
use frft_stoch::grid::TimeGrid;
use frft_stoch::order::FractionalOrder;
use frft_stoch::pipeline::{self, LinearTransform, TransformKind, TransformSpec};
use frft_stoch::processes::{generate, AcfShape, CovarianceStructure, Field, ProcessKind, StationaryModel};

fn colored(mean: Complex64, field: Field) -> StationaryModel {
    StationaryModel::new(
        mean,
        ProcessKind::ColoredGaussian {
            acf: AcfShape::Gaussian { variance: 2.0, width: 1.5 },
            field,
            covariance: CovarianceStructure::Toeplitz,
        },
    )
    .unwrap()
}

#[test]
fn estimators_are_unbiased_across_seeds() {
    let model = colored(Complex64::new(0.5, -0.25), Field::ProperComplex);
    let grid = TimeGrid::indices(24).unwrap();
    let points = [(0, 0), (3, 5), (10, 20)];
    let seeds = 10;
    let mut mean_acc = [Complex64::new(0.0, 0.0); 3];
    let mut acf_acc = [Complex64::new(0.0, 0.0); 3];
    let mut acf_err = [0.0_f64; 3];
    for seed in 0..seeds {
        let ens = generate(&model, grid, 400, seed).unwrap();
        let mean = estimate_mean(&ens).unwrap();
        let acf = estimate_autocorr(&ens).unwrap();
        for (i, &(j, k)) in points.iter().enumerate() {
            mean_acc[i] += mean.values[j];
            acf_acc[i] += acf.values[(j, k)];
            acf_err[i] += acf.stderr[(j, k)].powi(2);
        }
    }
    let s = seeds as f64;
    for (i, &(j, k)) in points.iter().enumerate() {
        let mean = mean_acc[i] / s;
        assert!((mean - model.mean).norm() < 4.0 * (2.0 / (400.0 * s)).sqrt(), "mean at {j}");
        let tau = (j as f64) - (k as f64);
        // uncentred second moment
        let truth = 2.0 * (-tau * tau / (2.0 * 1.5 * 1.5)).exp() + model.mean.norm_sqr();
        let se = acf_err[i].sqrt() / s;
        assert!((acf_acc[i] / s - truth).norm() < 4.0 * se, "acf at ({j},{k})");
    }
}

#[test]
fn verdicts_follow_the_checks() {
    let grid = TimeGrid::indices(16).unwrap();
    let zero = Complex64::new(0.0, 0.0);
    let stationary = generate(&colored(zero, Field::ProperComplex), grid, 3000, 7).unwrap();
    let (_, _, _, report) = analyze_ensemble(&stationary, true, 4.0).unwrap();
    assert_eq!(report.verdict, Verdict::Stationary);

    let improper = StationaryModel::zero_mean(ProcessKind::WhiteImproperComplex { noise_level: 2.0, rho: Complex64::new(0.0, 0.8) }).unwrap();
    let ens = generate(&improper, grid, 3000, 8).unwrap();
    let (_, _, _, report) = analyze_ensemble(&ens, true, 4.0).unwrap();
    assert_eq!(report.verdict, Verdict::ImproperOutput);

    // a nonzero mean through the DFRFT is no longer constant
    let spec = TransformSpec::new(TransformKind::Dfrft, FractionalOrder::new(0.5));
    let t = LinearTransform::new(spec, grid).unwrap();
    let ens = pipeline::simulate(&colored(Complex64::new(1.0, 0.0), Field::ProperComplex), grid, 3000, 9, &t).unwrap();
    let (_, _, _, report) = analyze_ensemble(&ens, true, 4.0).unwrap();
    assert_eq!(report.verdict, Verdict::NonstationaryMean);
}

#[test]
fn real_input_skips_the_pseudo_check() {
    let grid = TimeGrid::indices(12).unwrap();
    let ens = generate(&colored(Complex64::new(0.5, 0.0), Field::Real), grid, 2000, 3).unwrap();
    let (_, _, _, report) = analyze_ensemble(&ens, false, 4.0).unwrap();
    assert_eq!(report.verdict, Verdict::Stationary);
}
