//! Parameter sweeps and the built-in figure presets.
//!
//! A sweep is the Cartesian product `models × ν × γ_f × γ_c × κ_a`, each
//! point evolved over the same time grid. Points run in parallel; rows come
//! out in nested-loop order of the `SweepSpec` lists regardless of completion
//! order.

use std::io::Write;

use rayon::prelude::*;

use crate::basis::DIM;
use crate::dynamics::{build_channels, evolve_closed, evolve_open, IntegratorConfig};
use crate::error::{Error, Result};
use crate::hamiltonian::{build_effective, build_exact};
use crate::observables::{fidelity_f1, fidelity_f2, fidelity_f3};
use crate::params::SystemParams;
use crate::state::{pure_density, StateVector};

use super::config::FlatConfig;
use super::{format_input, format_value, time_grid, Model, T_STAR};

pub const CSV_HEADER: &str = "nu_over_lambda,gamma_f,gamma_c,kappa_a,model,t,F";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub models: Vec<Model>,
    /// `ν/λ` values.
    pub nu_values: Vec<f64>,
    pub gamma_f_values: Vec<f64>,
    pub gamma_c_values: Vec<f64>,
    pub kappa_a_values: Vec<f64>,
    pub t_max: f64,
    pub n_time_samples: usize,
    pub output_path: Option<String>,
    /// Initial open-model step; defaults per point to `0.02/max(1, ν)`.
    pub dt: Option<f64>,
}

/// One parameter point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub model: Model,
    pub nu: f64,
    pub gamma_f: f64,
    pub gamma_c: f64,
    pub kappa_a: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub point: SweepPoint,
    pub t: f64,
    /// F1, F2 or F3 according to `point.model`.
    pub fidelity: f64,
}

impl SweepRow {
    pub fn to_csv_line(&self) -> String {
        let p = &self.point;
        [
            format_input(p.nu),
            format_input(p.gamma_f),
            format_input(p.gamma_c),
            format_input(p.kappa_a),
            p.model.to_string(),
            format_input(self.t),
            format_value(self.fidelity),
        ]
        .join(",")
    }
}

fn check_list(name: &str, values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::InvalidSpec(format!("{name} is empty")));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(Error::InvalidSpec(format!("{name} contains {v}; values must be >= 0")));
    }
    Ok(())
}

fn list_text(values: &[f64]) -> String {
    values.iter().map(|v| format_input(*v)).collect::<Vec<_>>().join(", ")
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.models.is_empty() {
            return Err(Error::InvalidSpec("model list is empty".into()));
        }
        check_list("nu_values", &self.nu_values)?;
        check_list("gamma_f_values", &self.gamma_f_values)?;
        check_list("gamma_c_values", &self.gamma_c_values)?;
        check_list("kappa_a_values", &self.kappa_a_values)?;
        if self.n_time_samples < 2 {
            return Err(Error::InvalidSpec(format!(
                "n_time_samples = {} must be >= 2",
                self.n_time_samples
            )));
        }
        if !self.t_max.is_finite() || self.t_max <= 0.0 {
            return Err(Error::InvalidSpec(format!("t_max = {} must be > 0", self.t_max)));
        }
        let has_rates = [&self.gamma_f_values, &self.gamma_c_values, &self.kappa_a_values]
            .iter()
            .any(|l| l.iter().any(|v| *v != 0.0));
        if has_rates {
            if let Some(m) = self.models.iter().find(|m| **m != Model::Open) {
                return Err(Error::InvalidSpec(format!("model {m} cannot take nonzero decay rates")));
            }
        }
        if let Some(dt) = self.dt {
            if dt.is_nan() || dt <= 0.0 {
                return Err(Error::InvalidSpec(format!("dt = {dt} must be > 0")));
            }
        }
        Ok(())
    }

    pub fn times(&self) -> Result<Vec<f64>> {
        time_grid(self.t_max, self.n_time_samples)
    }

    /// Parameter points in output order.
    pub fn points(&self) -> Vec<SweepPoint> {
        let mut out = Vec::new();
        for &model in &self.models {
            for &nu in &self.nu_values {
                for &gamma_f in &self.gamma_f_values {
                    for &gamma_c in &self.gamma_c_values {
                        for &kappa_a in &self.kappa_a_values {
                            out.push(SweepPoint {
                                model,
                                nu,
                                gamma_f,
                                gamma_c,
                                kappa_a,
                            });
                        }
                    }
                }
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = FlatConfig::parse(text)?;
        let models = match cfg.take("model") {
            Some((line, v)) => v
                .split(',')
                .map(|m| m.trim().parse::<Model>())
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::Config {
                    line,
                    msg: e.to_string(),
                })?,
            None => return Err(Error::InvalidSpec("missing key `model`".into())),
        };
        let nu = cfg.take_list("nu_values")?;
        let nu_sq = cfg.take_list("nu_sq_values")?;
        let nu_values = match (nu, nu_sq) {
            (Some(_), Some(_)) => {
                return Err(Error::InvalidSpec(
                    "give either nu_values or nu_sq_values, not both".into(),
                ))
            }
            (Some(v), None) => v,
            (None, Some(sq)) => sq.iter().map(|x| x.sqrt()).collect(),
            (None, None) => return Err(Error::InvalidSpec("missing nu_values or nu_sq_values".into())),
        };
        let zero = || vec![0.0];
        let gamma_f_values = cfg.take_list("gamma_f_values")?.unwrap_or_else(zero);
        let gamma_c_values = cfg.take_list("gamma_c_values")?.unwrap_or_else(zero);
        let kappa_a_values = cfg.take_list("kappa_a_values")?.unwrap_or_else(zero);
        let t_max = cfg
            .take_f64("t_max")?
            .ok_or_else(|| Error::InvalidSpec("missing key `t_max`".into()))?;
        let n_time_samples = match cfg.take("n_time_samples") {
            Some((line, v)) => v.parse().map_err(|_| Error::Config {
                line,
                msg: format!("n_time_samples: {v:?} is not an integer"),
            })?,
            None => return Err(Error::InvalidSpec("missing key `n_time_samples`".into())),
        };
        let output_path = cfg.take("output_path").map(|(_, v)| v);
        let dt = cfg.take_f64("dt")?;
        cfg.finish()?;
        let spec = SweepSpec {
            models,
            nu_values,
            gamma_f_values,
            gamma_c_values,
            kappa_a_values,
            t_max,
            n_time_samples,
            output_path,
            dt,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Config text that [`SweepSpec::parse`] reads back to an equal spec.
    pub fn to_config_text(&self) -> String {
        let models: Vec<_> = self.models.iter().map(|m| m.as_str()).collect();
        let mut out = format!("model = {}\n", models.join(", "));
        out += &format!("nu_values = {}\n", list_text(&self.nu_values));
        out += &format!("gamma_f_values = {}\n", list_text(&self.gamma_f_values));
        out += &format!("gamma_c_values = {}\n", list_text(&self.gamma_c_values));
        out += &format!("kappa_a_values = {}\n", list_text(&self.kappa_a_values));
        out += &format!("t_max = {}\n", format_input(self.t_max));
        out += &format!("n_time_samples = {}\n", self.n_time_samples);
        if let Some(p) = &self.output_path {
            out += &format!("output_path = {p}\n");
        }
        if let Some(dt) = self.dt {
            out += &format!("dt = {}\n", format_input(dt));
        }
        out
    }
}

/// Evolves one point over `times` and returns its fidelity series.
pub fn run_point(point: &SweepPoint, times: &[f64], dt: Option<f64>) -> Result<Vec<f64>> {
    let params = SystemParams::new(1.0, point.nu)?.with_decay(point.gamma_c, point.gamma_f, point.kappa_a)?;
    match point.model {
        Model::Exact => {
            let traj = evolve_closed(&build_exact(&params), &StateVector::basis(DIM, 0), times)?;
            traj.states().unwrap().iter().map(fidelity_f1).collect()
        }
        Model::Effective => {
            let h = build_effective(&params);
            let traj = evolve_closed(&h, &StateVector::basis(h.dim(), 0), times)?;
            traj.states().unwrap().iter().map(fidelity_f2).collect()
        }
        Model::Open => {
            let t_max = *times.last().expect("nonempty grid");
            let mut config = IntegratorConfig::default_for(&params, t_max)?;
            if let Some(dt) = dt {
                config = IntegratorConfig::new(&params, dt, t_max, config.convergence_tol(), config.max_halvings())?;
            }
            let rho0 = pure_density(&StateVector::basis(DIM, 0))?;
            let traj = evolve_open(&build_exact(&params), &build_channels(&params), &rho0, &config, times)?;
            traj.densities().unwrap().iter().map(fidelity_f3).collect()
        }
    }
}

/// Runs every point of `spec` (in parallel) and returns rows in fixed order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let times = spec.times()?;
    let per_point: Vec<(SweepPoint, Vec<f64>)> = spec
        .points()
        .into_par_iter()
        .map(|p| run_point(&p, &times, spec.dt).map(|f| (p, f)))
        .collect::<Result<_>>()?;
    Ok(per_point
        .into_iter()
        .flat_map(|(point, fs)| {
            times
                .iter()
                .zip(fs)
                .map(move |(&t, fidelity)| SweepRow { point, t, fidelity })
                .collect::<Vec<_>>()
        })
        .collect())
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut w: W) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(w, "{}", row.to_csv_line())?;
    }
    Ok(())
}

/// Built-in figure reproduction.
#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub spec: SweepSpec,
}

fn sqrt_all(sq: &[f64]) -> Vec<f64> {
    sq.iter().map(|x| x.sqrt()).collect()
}

const DECAY_LADDER: [f64; 4] = [0.001, 0.01, 0.1, 1.0];

/// `fig2`, `fig3`, `fig4`. Each covers `t ∈ [0, 2t*]` with 201 samples, so
/// `t*` is sample 100.
pub fn presets() -> Vec<Preset> {
    let base = SweepSpec {
        models: vec![Model::Exact, Model::Effective],
        nu_values: sqrt_all(&[8.0, 24.0, 80.0, 120.0]),
        gamma_f_values: vec![0.0],
        gamma_c_values: vec![0.0],
        kappa_a_values: vec![0.0],
        t_max: 2.0 * T_STAR,
        n_time_samples: 201,
        output_path: None,
        dt: None,
    };
    vec![
        Preset {
            name: "fig2",
            description: "lossless F1 (exact) vs F2 (effective), nu^2 in {8, 24, 80, 120}",
            spec: base.clone(),
        },
        Preset {
            name: "fig3",
            description: "F3 with fibre loss only, nu^2 in {3, 8, 99, 120}, gamma_f in {0.001, 0.01, 0.1, 1}",
            spec: SweepSpec {
                models: vec![Model::Open],
                nu_values: sqrt_all(&[3.0, 8.0, 99.0, 120.0]),
                gamma_f_values: DECAY_LADDER.to_vec(),
                ..base.clone()
            },
        },
        Preset {
            name: "fig4",
            description: "F3 at nu^2 = 399 without fibre loss; panels over gamma_c, curves over kappa_a (panel rate read as gamma_c)",
            spec: SweepSpec {
                models: vec![Model::Open],
                nu_values: sqrt_all(&[399.0]),
                gamma_c_values: DECAY_LADDER.to_vec(),
                kappa_a_values: DECAY_LADDER.to_vec(),
                ..base
            },
        },
    ]
}

pub fn preset(name: &str) -> Option<Preset> {
    presets().into_iter().find(|p| p.name == name)
}
