use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use super::csv::{g12, CsvWriter};
use super::{Scenario, SWEEP_AXES};
use crate::coefficients::{
    frequency_shifts, late_time_shift, master_coefficients, saturation_time, RELAXED_POPULATION,
};
use crate::entanglement::{log_negativity, symplectic_spectrum};
use crate::error::{Error, Result};
use crate::gaussian::{covariance_from_moments, initial_normal_moments, propagate_moments};
use crate::propagator::{assemble_trajectory, halving_check, solve_center_amplitude, ConvergenceReport};

pub const FORMAT_VERSION: u32 = 1;

/// Un-transposed `ν_min` below `½ - PHYSICALITY_SLACK` is counted as a violation.
const PHYSICALITY_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct Diagnostics {
    pub steps: usize,
    pub dt_convergence: ConvergenceReport,
    /// First time `|s| < 1e-12`, after which coefficients are carried over.
    pub saturation_time: Option<f64>,
    /// First time `|s|² < 1e-4`.
    pub relaxation_time: Option<f64>,
    pub final_e_n: f64,
    pub asymptotic_delta_omega: Option<f64>,
    pub min_nu_untransposed: f64,
    pub physicality_violations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Artifacts {
    pub coefficients: PathBuf,
    pub negativity: PathBuf,
    pub propagator: PathBuf,
    pub run_json: PathBuf,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub format_version: u32,
    pub scenario: Scenario,
    pub diagnostics: Diagnostics,
    pub wall_clock_seconds: f64,
    pub artifacts: Artifacts,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Solve, derive coefficients and entanglement, and write the CSVs plus
/// `run.json` into `sc.out`.
pub fn run_scenario(sc: &Scenario) -> Result<RunRecord> {
    sc.validate()?;
    let start = Instant::now();
    let sd = sc.spectral_density()?;
    let cfg = sc.model_config()?;
    let r = sc.squeezing()?;

    std::fs::create_dir_all(&sc.out).map_err(io_err(&sc.out))?;

    let sol = solve_center_amplitude(&sd, &cfg)?;
    let convergence = halving_check(&sd, &cfg, &sol.s)?;
    let traj = assemble_trajectory(sol.s, sol.sdot, &cfg)?;
    let coeffs = master_coefficients(&traj)?;
    let shifts = frequency_shifts(&coeffs, cfg.omega0(), cfg.kappa());

    let artifacts = Artifacts {
        coefficients: sc.out.join("coefficients.csv"),
        negativity: sc.out.join("negativity.csv"),
        propagator: sc.out.join("propagator.csv"),
        run_json: sc.out.join("run.json"),
    };
    let mut coeff_csv = CsvWriter::create(&artifacts.coefficients, &["t", "delta_omega", "gamma"])?;
    let mut neg_csv = CsvWriter::create(&artifacts.negativity, &["t", "e_n", "nu_min"])?;
    let mut prop_csv = CsvWriter::create(
        &artifacts.propagator,
        &["t", "re_u", "im_u", "re_v", "im_v", "abs_s"],
    )?;

    let m0 = initial_normal_moments(r);
    let last = traj.len() - 1;
    let mut min_nu = f64::INFINITY;
    let mut violations = 0;
    let mut final_e_n = 0.0;
    for k in (0..=last).filter(|k| k % sc.stride == 0 || *k == last) {
        let t = traj.times()[k];
        let moments = propagate_moments(&m0, traj.s()[k], traj.c()[k]);
        let v = covariance_from_moments(&moments)?;
        let e_n = log_negativity(&v)?;
        let nu = symplectic_spectrum(&v)?.nu_min;
        min_nu = min_nu.min(nu);
        if nu < 0.5 - PHYSICALITY_SLACK {
            violations += 1;
        }
        final_e_n = e_n;
        coeff_csv.row(&[t, shifts[k].delta_omega, coeffs[k].gamma])?;
        neg_csv.row(&[t, e_n, nu])?;
        let (u, w) = (traj.u()[k], traj.v()[k]);
        prop_csv.row(&[t, u.re, u.im, w.re, w.im, traj.s()[k].norm()])?;
    }
    coeff_csv.finish()?;
    neg_csv.finish()?;
    prop_csv.finish()?;

    let relaxation_time = traj
        .s()
        .iter()
        .position(|s| s.norm_sqr() < RELAXED_POPULATION)
        .map(|k| traj.times()[k]);
    let record = RunRecord {
        format_version: FORMAT_VERSION,
        scenario: sc.clone(),
        diagnostics: Diagnostics {
            steps: cfg.steps(),
            dt_convergence: convergence,
            saturation_time: saturation_time(&coeffs),
            relaxation_time,
            final_e_n,
            asymptotic_delta_omega: late_time_shift(&shifts, traj.s()),
            min_nu_untransposed: min_nu,
            physicality_violations: violations,
        },
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        artifacts,
    };
    let json = serde_json::to_string_pretty(&record).expect("record serialises");
    std::fs::write(&record.artifacts.run_json, json + "\n").map_err(io_err(&record.artifacts.run_json))?;
    Ok(record)
}

/// Run `base` once per value of `axis`, each into `<out>/<axis>_<value>`,
/// and summarise the runs in `<out>/index.csv`.
pub fn sweep(base: &Scenario, axis: &str, values: &[f64]) -> Result<Vec<RunRecord>> {
    if !SWEEP_AXES.contains(&axis) {
        return Err(Error::UnknownAxis(axis.to_string()));
    }
    if values.is_empty() {
        return Err(Error::Usage("sweep needs at least one value".into()));
    }
    let scenarios = values
        .iter()
        .map(|&v| {
            let mut sc = base.with_axis(axis, v)?;
            sc.out = base.out.join(format!("{axis}_{}", g12(v)));
            sc.validate()?;
            Ok(sc)
        })
        .collect::<Result<Vec<_>>>()?;
    std::fs::create_dir_all(&base.out).map_err(io_err(&base.out))?;
    let mut records = Vec::with_capacity(values.len());
    for sc in &scenarios {
        records.push(run_scenario(sc)?);
    }
    let index = base.out.join("index.csv");
    let mut csv = CsvWriter::create(&index, &["value", "final_e_n", "asymptotic_delta_omega"])?;
    for (v, rec) in values.iter().zip(&records) {
        let d = &rec.diagnostics;
        csv.row(&[*v, d.final_e_n, d.asymptotic_delta_omega.unwrap_or(f64::NAN)])?;
    }
    csv.finish()?;
    Ok(records)
}
