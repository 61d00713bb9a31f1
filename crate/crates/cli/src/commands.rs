use std::path::{Path, PathBuf};

use akns_spps::direct::{solve_direct, wronskian_phi_phitil, DirectOptions, DirectSolution, ScatteringData};
use akns_spps::formats::{
    fmt_float, read_discrete_json, read_scattering_csv, write_coefficients_csv, write_discrete_json,
    write_potential_csv, write_residual_csv, write_scattering_csv,
};
use akns_spps::inverse::{solve_inverse, InverseSolution};
use akns_spps::potential::{sample_model, PotentialModel, PotentialPair, DEFAULT_DECAY_TOL};
use akns_spps::seed::SeedOptions;
use akns_spps::spps::Family;
use akns_spps::Error;
use serde::Serialize;

use crate::config::{RunConfig, DEFAULT_VALIDATE_TOL};
use crate::CliError;

pub const SCATTERING_FILE: &str = "scattering.csv";
pub const DISCRETE_FILE: &str = "discrete.json";
pub const COEFFICIENTS_FILE: &str = "coefficients.csv";
pub const RECOVERED_FILE: &str = "recovered.csv";
pub const RESIDUALS_FILE: &str = "residuals.csv";
pub const ERRORS_FILE: &str = "errors.csv";
pub const REPORT_FILE: &str = "report.json";
pub const UNITARITY_FILE: &str = "unitarity.csv";
pub const CONFIG_ECHO: &str = "config.toml";

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(io_err(path))
}

/// Creates `out` and drops the resolved config into it.
fn prepare_output(cfg: &RunConfig, out: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(out).map_err(io_err(out))?;
    let mut echo = cfg.clone();
    echo.output_dir = out.to_path_buf();
    write_text(&out.join(CONFIG_ECHO), &echo.to_toml())
}

fn load_potential(cfg: &RunConfig) -> Result<(PotentialModel, PotentialPair), CliError> {
    let model = cfg.potential.load().map_err(CliError::stage("potential"))?;
    let grid = cfg.grid.build().map_err(CliError::stage("grid"))?;
    let pair = sample_model(&model, grid, DEFAULT_DECAY_TOL).map_err(CliError::stage("potential"))?;
    Ok((model, pair))
}

fn direct_stage(e: &Error) -> &'static str {
    match e {
        Error::NonvanishingAssumptionViolated { .. } | Error::SolverDivergence { .. } => "seed",
        Error::Overflow { .. } => "spps",
        _ => "direct",
    }
}

fn run_direct(cfg: &RunConfig, pair: &PotentialPair) -> Result<DirectSolution, CliError> {
    let rhos = cfg.direct.rho_sampling.points().map_err(CliError::stage("config"))?;
    solve_direct(
        pair,
        cfg.direct.order,
        &rhos,
        &SeedOptions::default(),
        &DirectOptions::default(),
    )
    .map_err(|e| CliError::Stage {
        stage: direct_stage(&e),
        source: e,
    })
}

fn write_direct(sol: &DirectSolution, out: &Path) -> Result<(), CliError> {
    let d = &sol.data;
    write_scattering_csv(&out.join(SCATTERING_FILE), &d.samples).map_err(CliError::stage("write"))?;
    write_discrete_json(&out.join(DISCRETE_FILE), &d.upper, &d.lower).map_err(CliError::stage("write"))?;
    // How fast the coefficients fall off at the origin, family A.
    let table = sol.tables.get(Family::A);
    let rows = table
        .coefficients_at(table.grid().zero_index())
        .map_err(CliError::stage("direct"))?;
    write_coefficients_csv(&out.join(COEFFICIENTS_FILE), &rows).map_err(CliError::stage("write"))
}

fn run_inverse(cfg: &RunConfig, data: &ScatteringData) -> Result<InverseSolution, CliError> {
    let mut icfg = cfg.inverse_section()?.to_config();
    icfg.residual_report = true;
    let sol = solve_inverse(data, &icfg).map_err(CliError::stage("inverse"))?;
    for w in &sol.warnings {
        eprintln!("warning: {w}");
    }
    Ok(sol)
}

fn write_inverse(sol: &InverseSolution, out: &Path) -> Result<(), CliError> {
    let rec = &sol.recovered;
    write_potential_csv(&out.join(RECOVERED_FILE), &rec.x, &rec.q, &rec.r).map_err(CliError::stage("write"))?;
    write_residual_csv(&out.join(RESIDUALS_FILE), &sol.vectors).map_err(CliError::stage("write"))
}

pub fn cmd_direct(cfg: &RunConfig, out: &Path) -> Result<DirectSolution, CliError> {
    let (_, pair) = load_potential(cfg)?;
    let sol = run_direct(cfg, &pair)?;
    prepare_output(cfg, out)?;
    write_direct(&sol, out)?;
    Ok(sol)
}

/// Reads continuum data from `scattering` and discrete data from
/// `discrete`, falling back to `discrete.json` beside the continuum file.
/// Missing discrete data is not fatal: the run uses the continuum only.
pub fn load_scattering(scattering: &Path, discrete: Option<&Path>) -> Result<ScatteringData, CliError> {
    let samples = read_scattering_csv(scattering).map_err(CliError::stage("read"))?;
    let discrete: PathBuf = match discrete {
        Some(p) => p.to_path_buf(),
        None => scattering.with_file_name(DISCRETE_FILE),
    };
    let (upper, lower) = if discrete.exists() {
        read_discrete_json(&discrete).map_err(CliError::stage("read"))?
    } else {
        eprintln!(
            "warning: no discrete data at {}; continuing with the continuous spectrum only",
            discrete.display()
        );
        (Vec::new(), Vec::new())
    };
    let data = ScatteringData { samples, upper, lower };
    data.check().map_err(CliError::stage("read"))?;
    Ok(data)
}

pub fn cmd_inverse(
    cfg: &RunConfig,
    scattering: &Path,
    discrete: Option<&Path>,
    out: &Path,
) -> Result<InverseSolution, CliError> {
    let data = load_scattering(scattering, discrete)?;
    let sol = run_inverse(cfg, &data)?;
    prepare_output(cfg, out)?;
    write_inverse(&sol, out)?;
    Ok(sol)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundtripReport {
    pub max_abs_err_q: f64,
    pub max_abs_err_r: f64,
}

/// Direct solve, inverse solve on its output, and the error against the
/// true potential on the reconstruction nodes.
pub fn cmd_roundtrip(cfg: &RunConfig, out: &Path) -> Result<RoundtripReport, CliError> {
    cfg.inverse_section()?;
    let (model, pair) = load_potential(cfg)?;
    let direct = run_direct(cfg, &pair)?;
    let inverse = run_inverse(cfg, &direct.data)?;
    prepare_output(cfg, out)?;
    write_direct(&direct, out)?;
    write_inverse(&inverse, out)?;

    let rec = &inverse.recovered;
    let mut report = RoundtripReport {
        max_abs_err_q: 0.0,
        max_abs_err_r: 0.0,
    };
    let mut csv = String::from("x,err_q,err_r\n");
    for i in 0..rec.x.len() {
        let (q, r) = model.eval(rec.x[i]);
        let (eq, er) = ((rec.q[i] - q).norm(), (rec.r[i] - r).norm());
        report.max_abs_err_q = report.max_abs_err_q.max(eq);
        report.max_abs_err_r = report.max_abs_err_r.max(er);
        csv.push_str(&format!("{},{},{}\n", fmt_float(rec.x[i]), fmt_float(eq), fmt_float(er)));
    }
    write_text(&out.join(ERRORS_FILE), &csv)?;
    let json = serde_json::to_string_pretty(&report).expect("plain numbers serialize");
    write_text(&out.join(REPORT_FILE), &(json + "\n"))?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidateReport {
    pub rho: Vec<f64>,
    pub unitarity: Vec<f64>,
    /// `|W[φ, φ̃] + 1|` per sample, only when a config is supplied.
    pub wronskian: Option<Vec<f64>>,
    pub tolerance: f64,
}

impl ValidateReport {
    pub fn max_unitarity(&self) -> f64 {
        self.unitarity.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_wronskian(&self) -> Option<f64> {
        self.wronskian.as_ref().map(|w| w.iter().copied().fold(0.0, f64::max))
    }

    pub fn worst(&self) -> f64 {
        self.max_unitarity().max(self.max_wronskian().unwrap_or(0.0))
    }

    pub fn passed(&self) -> bool {
        self.worst() <= self.tolerance
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(if self.wronskian.is_some() {
            "rho,unitarity,wronskian\n"
        } else {
            "rho,unitarity\n"
        });
        for i in 0..self.rho.len() {
            s.push_str(&fmt_float(self.rho[i]));
            s.push(',');
            s.push_str(&fmt_float(self.unitarity[i]));
            if let Some(w) = &self.wronskian {
                s.push(',');
                s.push_str(&fmt_float(w[i]));
            }
            s.push('\n');
        }
        s
    }
}

/// Unitarity residuals of a scattering file. With a config, the Jost
/// solutions are rebuilt from the potential and `W[φ, φ̃] = −1` is checked
/// at the same points. The report is returned whether or not it passes;
/// the caller decides what to do with a failure.
pub fn cmd_validate(
    cfg: Option<&RunConfig>,
    scattering: &Path,
    out: Option<&Path>,
) -> Result<ValidateReport, CliError> {
    let samples = read_scattering_csv(scattering).map_err(CliError::stage("read"))?;
    let rho: Vec<f64> = samples.iter().map(|s| s.rho).collect();
    let unitarity = samples.iter().map(|s| s.unitarity_residual()).collect();
    let wronskian = match cfg {
        Some(cfg) => {
            let (_, pair) = load_potential(cfg)?;
            let sol = run_direct(cfg, &pair)?;
            let w = rho
                .iter()
                .map(|&r| wronskian_phi_phitil(&sol.tables, r).map(|w| (w + 1.0).norm()))
                .collect::<Result<Vec<f64>, Error>>()
                .map_err(CliError::stage("direct"))?;
            Some(w)
        }
        None => None,
    };
    let report = ValidateReport {
        rho,
        unitarity,
        wronskian,
        tolerance: cfg.map_or(DEFAULT_VALIDATE_TOL, |c| c.validate.tolerance),
    };
    if let Some(out) = out {
        std::fs::create_dir_all(out).map_err(io_err(out))?;
        if let Some(cfg) = cfg {
            prepare_output(cfg, out)?;
        }
        write_text(&out.join(UNITARITY_FILE), &report.to_csv())?;
    }
    Ok(report)
}
