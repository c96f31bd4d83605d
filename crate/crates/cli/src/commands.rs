use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use frft_stoch::estimators::{analyze_ensemble, MeanEstimate};
use frft_stoch::grid::{SampledSignal, TimeGrid};
use frft_stoch::io::{self, fmt12};
use frft_stoch::pipeline::{self, LinearTransform, TransformKind, VerifyOptions, VerifyReport};
use frft_stoch::processes::{generate, Ensemble, StationaryModel};
use frft_stoch::surface::{CorrelationSurface, SurfaceKind, SurfaceSource};
use frft_stoch::theory::{self, real_lag_fn, OracleWindow, PredictedSurface};

use crate::config::ExperimentConfig;
use crate::CliError;

/// Files written by a command, relative to the output directory.
#[derive(Debug, Default, Serialize)]
pub struct Artifacts {
    pub files: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<String>,
}

impl Artifacts {
    fn add(&mut self, path: &Path) {
        let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        self.files.push(name);
    }
}

fn out_dir(cfg: &ExperimentConfig) -> Result<PathBuf, CliError> {
    let dir = cfg.out_dir();
    fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    Ok(dir)
}

fn input_manifest(cfg: &ExperimentConfig, arg: Option<&Path>, fallbacks: &[&str]) -> Result<PathBuf, CliError> {
    if let Some(p) = arg.map(Path::to_path_buf).or_else(|| cfg.input.clone()) {
        return Ok(p);
    }
    let dir = cfg.out_dir();
    fallbacks
        .iter()
        .map(|f| dir.join(f))
        .find(|p| p.exists())
        .ok_or_else(|| CliError::Io(format!("no input ensemble given and none found in {}", dir.display())))
}

fn write_mean(path: &Path, mean: &MeanEstimate) -> Result<(), CliError> {
    let rows = mean.grid.points().zip(&mean.values).zip(&mean.stderr).map(|((t, v), s)| {
        vec![fmt12(t), fmt12(v.re), fmt12(v.im), fmt12(*s)]
    });
    Ok(io::write_table(path, &["t", "re", "im", "stderr"], rows)?)
}

fn write_values(path: &Path, grid: TimeGrid, values: Vec<Complex64>) -> Result<(), CliError> {
    Ok(io::write_signal_csv(path, &SampledSignal::new(grid, values)?)?)
}

pub fn gen(cfg: &ExperimentConfig) -> Result<Artifacts, CliError> {
    let grid = cfg.grid.build()?;
    let ens = generate(&cfg.model, grid, cfg.realizations()?, cfg.seed()?)?;
    let dir = out_dir(cfg)?;
    let mut art = Artifacts::default();
    art.add(&io::write_ensemble(&dir, "ensemble", &ens)?);
    art.files.push("ensemble.csv".into());
    Ok(art)
}

pub fn transform(cfg: &ExperimentConfig, input: Option<&Path>) -> Result<Artifacts, CliError> {
    let manifest = input_manifest(cfg, input, &["ensemble.json"])?;
    let ens = io::read_ensemble(&manifest)?;
    let spec = cfg.transform_spec()?;
    let t = LinearTransform::new(spec, ens.grid)?;
    let out = pipeline::transform_ensemble(&ens, spec)?;
    let dir = out_dir(cfg)?;
    let mut art = Artifacts::default();
    art.add(&io::write_ensemble(&dir, "transformed", &out)?);
    art.files.push("transformed.csv".into());
    match spec.kind {
        TransformKind::Dfrft => {
            art.add(&io::write_matrix(&dir, "dfrft_matrix", &t.matrix(), spec.order.a())?);
            art.files.push("dfrft_matrix.csv".into());
        }
        TransformKind::Frfs | TransformKind::Dtfrft => {
            let path = dir.join("coefficients.csv");
            let rows = out.grid.points().zip(out.realization(0)).map(|(n, z)| {
                vec![format!("{}", n.round() as i64), fmt12(z.re), fmt12(z.im)]
            });
            io::write_table(&path, &["n", "re", "im"], rows)?;
            art.add(&path);
        }
        TransformKind::FrftQuad => {}
    }
    Ok(art)
}

#[derive(Serialize)]
struct EstimateSummary<'a> {
    input: String,
    stationarity: &'a frft_stoch::estimators::StationarityReport,
    artifacts: &'a Artifacts,
}

fn input_is_complex(ens: &Ensemble) -> bool {
    ens.model.map(|m: StationaryModel| m.is_complex()).unwrap_or(!ens.is_real_valued())
}

pub fn estimate(cfg: &ExperimentConfig, input: Option<&Path>) -> Result<Artifacts, CliError> {
    let manifest = input_manifest(cfg, input, &["transformed.json", "ensemble.json"])?;
    let ens = io::read_ensemble(&manifest)?;
    let (mean, acf, pacf, report) = analyze_ensemble(&ens, input_is_complex(&ens), cfg.tol_sigma())?;
    let dir = out_dir(cfg)?;
    let mut art = Artifacts::default();
    let mean_path = dir.join("mean.csv");
    write_mean(&mean_path, &mean)?;
    art.add(&mean_path);
    art.add(&io::write_surface(&dir, "autocorr", &acf)?);
    art.add(&io::write_surface(&dir, "pseudo", &pacf)?);
    art.files.push("report.json".into());
    let summary = EstimateSummary {
        input: manifest.display().to_string(),
        stationarity: &report,
        artifacts: &art,
    };
    io::write_json(&dir.join("report.json"), &summary)?;
    Ok(art)
}

#[derive(Serialize)]
struct DeltaDescriptor {
    form: &'static str,
    weight: Complex64,
    kind: SurfaceKind,
    source: SurfaceSource,
}

#[derive(Serialize)]
struct TheorySummary<'a> {
    transform: &'static str,
    order: f64,
    artifacts: &'a Artifacts,
}

fn colored_lag(model: &StationaryModel) -> Option<theory::LagFn> {
    model.acf_shape().map(|acf| real_lag_fn(move |t| acf.eval(t)))
}

pub fn theory(cfg: &ExperimentConfig) -> Result<Artifacts, CliError> {
    let spec = cfg.transform_spec()?;
    let order = spec.order;
    let dir = out_dir(cfg)?;
    let mut art = Artifacts::default();
    let window = cfg.theory.oracle_window().unwrap_or_default();

    if spec.kind != TransformKind::FrftQuad {
        let t = LinearTransform::new(spec, cfg.grid.build()?)?;
        let th = pipeline::discrete_theory(&cfg.model, &t)?;
        let p = dir.join("theory_mean.csv");
        write_values(&p, t.out_grid, th.mean)?;
        art.add(&p);
        art.add(&io::write_surface(&dir, "theory_autocorr", &th.autocorr)?);
        art.add(&io::write_surface(&dir, "theory_pseudo", &th.pseudo)?);
    } else {
        let u_grid = cfg.u_grid()?;
        if cfg.model.mean != Complex64::new(0.0, 0.0) {
            let values = u_grid
                .points()
                .map(|u| theory::predicted_mean(cfg.model.mean, order, u))
                .collect::<frft_stoch::Result<Vec<_>>>()?;
            let p = dir.join("theory_mean.csv");
            write_values(&p, u_grid, values)?;
            art.add(&p);
        }
        match theory::predicted_output_autocorr(&cfg.model, order) {
            Ok(PredictedSurface::Delta(d)) => {
                let p = dir.join("theory_autocorr.json");
                let desc = DeltaDescriptor {
                    form: "delta",
                    weight: d.weight,
                    kind: SurfaceKind::Auto,
                    source: SurfaceSource::Theory,
                };
                io::write_json(&p, &desc)?;
                art.add(&p);
            }
            Ok(PredictedSurface::Smooth(field)) => {
                let s = theory::predicted_surface(&field, u_grid)?;
                art.add(&io::write_surface(&dir, "theory_autocorr", &s)?);
            }
            Err(e) if e.is_numerical() => {
                log::warn!("autocorrelation surface skipped: {e}");
                art.skipped.push(format!("theory_autocorr: {e}"));
            }
            Err(e) => return Err(e.into()),
        }
        if let Some(w) = cfg.model.white_pseudo_weight().filter(|w| w.norm() > 0.0) {
            let n = u_grid.count();
            let mut values = DMatrix::zeros(n, n);
            for j in 0..n {
                for k in 0..n {
                    values[(j, k)] = theory::white_output_pseudo_autocorr(w, order, u_grid.point(j), u_grid.point(k))?;
                }
            }
            let s = CorrelationSurface::new(u_grid, values, DMatrix::zeros(n, n), SurfaceKind::Pseudo, SurfaceSource::Theory)?;
            art.add(&io::write_surface(&dir, "theory_pseudo", &s)?);
        } else if let (true, Some(r)) = (cfg.model.is_real(), colored_lag(&cfg.model)) {
            let s = theory::numeric_output_surface(&r, order, u_grid, SurfaceKind::Pseudo, window)?;
            art.add(&io::write_surface(&dir, "theory_pseudo", &s)?);
        }
        let psd = match colored_lag(&cfg.model) {
            Some(r) => theory::fractional_psd(&r, order, u_grid, window)?.values,
            None => {
                let w = Complex64::new(cfg.model.white_weight().unwrap_or(0.0), 0.0);
                u_grid
                    .points()
                    .map(|u| theory::white_fractional_psd(w, order, u))
                    .collect::<frft_stoch::Result<Vec<_>>>()?
            }
        };
        let p = dir.join("theory_psd.csv");
        write_values(&p, u_grid, psd)?;
        art.add(&p);
    }
    art.files.push("theory.json".into());
    let summary = TheorySummary {
        transform: spec.kind.name(),
        order: order.a(),
        artifacts: &art,
    };
    io::write_json(&dir.join("theory.json"), &summary)?;
    Ok(art)
}

#[derive(Serialize)]
struct VerifySummary<'a> {
    #[serde(flatten)]
    report: &'a VerifyReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pseudo_chain_max_discrepancy: Option<f64>,
    artifacts: &'a Artifacts,
}

fn surface_rows<'a>(
    mc: &'a CorrelationSurface,
    others: &'a [&'a CorrelationSurface],
) -> impl Iterator<Item = Vec<String>> + 'a {
    let n = mc.n();
    let us: Vec<f64> = mc.u_grid.points().collect();
    (0..n).flat_map(move |j| {
        let us = us.clone();
        (0..n).map(move |k| {
            let mut row = vec![j.to_string(), k.to_string(), fmt12(us[j]), fmt12(us[k])];
            let v = mc.values[(j, k)];
            row.extend([fmt12(v.re), fmt12(v.im), fmt12(mc.stderr[(j, k)])]);
            for o in others {
                let w = o.values[(j, k)];
                row.extend([fmt12(w.re), fmt12(w.im)]);
            }
            row
        })
    })
}

pub fn verify(cfg: &ExperimentConfig) -> Result<Artifacts, CliError> {
    let grid = cfg.grid.build()?;
    let spec = cfg.transform_spec()?;
    let opts = VerifyOptions {
        tol_sigma: cfg.tol_sigma(),
        interior_half_width: cfg.theory.interior_half_width,
        oracle_window: cfg.theory.oracle_window(),
    };
    let out = pipeline::verify(&cfg.model, grid, spec, cfg.realizations()?, cfg.seed()?, opts)?;
    let dir = out_dir(cfg)?;
    let mut art = Artifacts::default();

    let p = dir.join("mean.csv");
    write_mean(&p, &out.mean)?;
    art.add(&p);
    let p = dir.join("theory_mean.csv");
    write_values(&p, out.autocorr.u_grid, out.theory.mean.clone())?;
    art.add(&p);
    art.add(&io::write_surface(&dir, "autocorr", &out.autocorr)?);
    art.add(&io::write_surface(&dir, "pseudo", &out.pseudo)?);
    art.add(&io::write_surface(&dir, "theory_autocorr", &out.theory.autocorr)?);
    art.add(&io::write_surface(&dir, "theory_pseudo", &out.theory.pseudo)?);

    let header = ["j", "k", "u1", "u2", "mc_re", "mc_im", "stderr", "theory_re", "theory_im"];
    let p = dir.join("comparison_autocorr.csv");
    io::write_table(&p, &header, surface_rows(&out.autocorr, &[&out.theory.autocorr]))?;
    art.add(&p);
    let p = dir.join("comparison_pseudo.csv");
    io::write_table(&p, &header, surface_rows(&out.pseudo, &[&out.theory.pseudo]))?;
    art.add(&p);

    if let Some((closed, oracle)) = &out.overlay {
        art.add(&io::write_surface(&dir, "closed_form_autocorr", closed)?);
        art.add(&io::write_surface(&dir, "oracle_autocorr", oracle)?);
        let p = dir.join("overlay.csv");
        let header = [
            "j", "k", "u1", "u2", "mc_re", "mc_im", "stderr", "closed_re", "closed_im", "oracle_re", "oracle_im",
        ];
        io::write_table(&p, &header, surface_rows(&out.autocorr, &[closed, oracle]))?;
        art.add(&p);
    }

    let mut pseudo_chain_max_discrepancy = None;
    if let (TransformKind::FrftQuad, true, Some(r)) = (spec.kind, cfg.model.is_real(), colored_lag(&cfg.model)) {
        let us: Vec<f64> = out.pseudo.u_grid.points().collect();
        let window = cfg.theory.oracle_window().unwrap_or_else(|| OracleWindow::new(grid.max_abs(), grid.step()));
        let table = theory::pseudo_discrepancy_table(&r, spec.order, &us, window)?;
        pseudo_chain_max_discrepancy = Some(table.iter().map(|row| row.discrepancy).fold(0.0, f64::max));
        let p = dir.join("pseudo_discrepancy.csv");
        let rows = table.iter().map(|row| {
            vec![
                fmt12(row.u1),
                fmt12(row.u2),
                fmt12(row.closed_form.re),
                fmt12(row.closed_form.im),
                fmt12(row.oracle.re),
                fmt12(row.oracle.im),
                fmt12(row.discrepancy),
            ]
        });
        io::write_table(&p, &["u1", "u2", "closed_re", "closed_im", "oracle_re", "oracle_im", "discrepancy"], rows)?;
        art.add(&p);
    }

    art.files.push("report.json".into());
    let summary = VerifySummary {
        report: &out.report,
        pseudo_chain_max_discrepancy,
        artifacts: &art,
    };
    io::write_json(&dir.join("report.json"), &summary)?;
    log::info!("verdict: {:?}", out.report.stationarity.verdict);
    Ok(art)
}
