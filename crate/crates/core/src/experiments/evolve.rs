//! Single runs: one parameter point, one model, a time grid.

use std::io::Write;

use crate::basis::DIM;
use crate::dynamics::{build_channels, evolve_closed, evolve_open, steady_trace_check, IntegratorConfig};
use crate::error::{Error, Result};
use crate::hamiltonian::{build_effective, build_exact};
use crate::observables::{fidelity_f1, fidelity_f2, fidelity_f3, populations};
use crate::params::SystemParams;
use crate::state::{pure_density, StateVector};
use crate::trajectory::{IntegratorDiagnostics, Trajectory};

use super::config::FlatConfig;
use super::{format_input, format_value, time_grid, Model, T_STAR};

/// Everything needed to reproduce one run.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolveRequest {
    pub model: Model,
    /// `ν²/λ²`; required for the exact and open models, absent for the
    /// effective one.
    pub nu_sq: Option<f64>,
    pub gamma_f: f64,
    pub gamma_c: f64,
    pub kappa_a: f64,
    pub t_max: f64,
    pub samples: usize,
    /// Open model only; defaults to `0.02/max(1, ν)`.
    pub dt: Option<f64>,
    /// Emit per-state populations in the CSV.
    pub populations: bool,
}

impl EvolveRequest {
    pub fn new(model: Model) -> Self {
        EvolveRequest {
            model,
            nu_sq: None,
            gamma_f: 0.0,
            gamma_c: 0.0,
            kappa_a: 0.0,
            t_max: T_STAR,
            samples: 201,
            dt: None,
            populations: false,
        }
    }

    /// Rejects flag combinations that do not make sense for the model.
    pub fn validate(&self) -> Result<()> {
        let has_rates = self.gamma_f != 0.0 || self.gamma_c != 0.0 || self.kappa_a != 0.0;
        match self.model {
            Model::Exact | Model::Effective if has_rates => {
                return Err(Error::InvalidArgument(format!(
                    "decay rates need --model open, not {}",
                    self.model
                )))
            }
            Model::Exact | Model::Effective if self.dt.is_some() => {
                return Err(Error::InvalidArgument("--dt only applies to --model open".into()))
            }
            Model::Effective if self.nu_sq.is_some() => {
                return Err(Error::InvalidArgument(
                    "the effective model has no fibre coupling; drop --nu-sq".into(),
                ))
            }
            Model::Exact | Model::Open if self.nu_sq.is_none() => {
                return Err(Error::InvalidArgument(format!("--model {} needs --nu-sq", self.model)))
            }
            _ => {}
        }
        self.params()?;
        time_grid(self.t_max, self.samples)?;
        Ok(())
    }

    pub fn params(&self) -> Result<SystemParams> {
        SystemParams::unit(self.nu_sq.unwrap_or(0.0))?.with_decay(self.gamma_c, self.gamma_f, self.kappa_a)
    }

    /// The sampling grid plus `t*` whenever it falls inside `[0, t_max]`.
    pub fn times(&self) -> Result<Vec<f64>> {
        let mut times = time_grid(self.t_max, self.samples)?;
        if T_STAR <= self.t_max && !times.iter().any(|t| (t - T_STAR).abs() < 1e-12) {
            times.push(T_STAR);
            times.sort_by(f64::total_cmp);
        }
        Ok(times)
    }

    pub fn integrator(&self, params: &SystemParams) -> Result<IntegratorConfig> {
        let dt = self.dt.unwrap_or_else(|| IntegratorConfig::default_dt(params));
        IntegratorConfig::new(
            params,
            dt,
            self.t_max,
            IntegratorConfig::DEFAULT_TOL,
            IntegratorConfig::DEFAULT_MAX_HALVINGS,
        )
    }

    /// Flat `key = value` text that [`EvolveRequest::from_echo`] reads back
    /// exactly.
    pub fn to_echo(&self) -> String {
        let mut out = format!("model = {}\n", self.model);
        if let Some(nu_sq) = self.nu_sq {
            out += &format!("nu_sq = {}\n", format_input(nu_sq));
        }
        out += &format!("gamma_f = {}\n", format_input(self.gamma_f));
        out += &format!("gamma_c = {}\n", format_input(self.gamma_c));
        out += &format!("kappa_a = {}\n", format_input(self.kappa_a));
        out += &format!("t_max = {}\n", format_input(self.t_max));
        out += &format!("samples = {}\n", self.samples);
        if let Some(dt) = self.dt {
            out += &format!("dt = {}\n", format_input(dt));
        }
        out += &format!("populations = {}\n", self.populations);
        out
    }

    pub fn from_echo(text: &str) -> Result<Self> {
        let mut cfg = FlatConfig::parse(text)?;
        let (line, model) = cfg.take("model").ok_or_else(|| Error::Config {
            line: 0,
            msg: "missing model".into(),
        })?;
        let model: Model = model.parse().map_err(|e: Error| Error::Config {
            line,
            msg: e.to_string(),
        })?;
        let mut req = EvolveRequest::new(model);
        req.nu_sq = cfg.take_f64("nu_sq")?;
        req.gamma_f = cfg.take_f64("gamma_f")?.unwrap_or(0.0);
        req.gamma_c = cfg.take_f64("gamma_c")?.unwrap_or(0.0);
        req.kappa_a = cfg.take_f64("kappa_a")?.unwrap_or(0.0);
        if let Some(t) = cfg.take_f64("t_max")? {
            req.t_max = t;
        }
        if let Some((line, v)) = cfg.take("samples") {
            req.samples = v.parse().map_err(|_| Error::Config {
                line,
                msg: format!("samples: {v:?} is not an integer"),
            })?;
        }
        req.dt = cfg.take_f64("dt")?;
        if let Some((line, v)) = cfg.take("populations") {
            req.populations = v.parse().map_err(|_| Error::Config {
                line,
                msg: format!("populations: {v:?} is not a bool"),
            })?;
        }
        cfg.finish()?;
        Ok(req)
    }
}

/// Result of one run: the request, the observable series and integrator
/// diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub request: EvolveRequest,
    pub times: Vec<f64>,
    /// F1, F2 or F3 depending on the model.
    pub fidelity: Vec<f64>,
    pub populations: Vec<Vec<f64>>,
    /// Norm deviation for closed runs, trace deviation for open runs.
    pub trace_dev: Vec<f64>,
    pub diagnostics: Option<IntegratorDiagnostics>,
}

impl RunRecord {
    pub fn max_trace_dev(&self) -> f64 {
        self.trace_dev.iter().copied().fold(0.0, f64::max)
    }

    /// Fidelity at `t*`, if the run covered it.
    pub fn fidelity_at_t_star(&self) -> Option<f64> {
        self.times
            .iter()
            .position(|t| (t - T_STAR).abs() < 1e-12)
            .map(|k| self.fidelity[k])
    }

    pub fn final_fidelity(&self) -> f64 {
        *self.fidelity.last().expect("runs have at least one sample")
    }

    pub fn csv_header(&self) -> String {
        let mut cols = vec!["t".to_string(), self.request.model.fidelity_name().to_string()];
        if self.request.populations {
            let n = self.populations.first().map_or(0, Vec::len);
            cols.extend((1..=n).map(|k| format!("p{k}")));
        }
        cols.push("trace_dev".into());
        cols.join(",")
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{}", self.csv_header())?;
        for k in 0..self.times.len() {
            let mut row = vec![format_input(self.times[k]), format_value(self.fidelity[k])];
            if self.request.populations {
                row.extend(self.populations[k].iter().map(|p| format_value(*p)));
            }
            row.push(format_value(self.trace_dev[k]));
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    /// Parameter echo followed by diagnostics as comments.
    pub fn echo(&self) -> String {
        let mut out = self.request.to_echo();
        if let Some(d) = &self.diagnostics {
            out += &format!("# dt_used = {}\n", format_input(d.dt_used));
            out += &format!("# halvings = {}\n", d.halvings);
            out += &format!("# steps = {}\n", d.steps);
            out += &format!("# final_change = {}\n", format_value(d.final_change));
        }
        out += &format!("# max_trace_dev = {}\n", format_value(self.max_trace_dev()));
        out
    }
}

fn closed_record(
    request: &EvolveRequest,
    traj: &Trajectory,
    fidelity: fn(&StateVector) -> Result<f64>,
) -> Result<RunRecord> {
    let states = traj.states().expect("closed runs store states");
    Ok(RunRecord {
        request: request.clone(),
        times: traj.times().to_vec(),
        fidelity: states.iter().map(fidelity).collect::<Result<_>>()?,
        populations: states.iter().map(populations).collect(),
        trace_dev: states
            .iter()
            .map(|s| (s.amplitudes().norm_squared() - 1.0).abs())
            .collect(),
        diagnostics: None,
    })
}

/// Runs one request.
pub fn run_evolve(request: &EvolveRequest) -> Result<RunRecord> {
    request.validate()?;
    let params = request.params()?;
    let times = request.times()?;
    match request.model {
        Model::Exact => {
            let traj = evolve_closed(&build_exact(&params), &StateVector::basis(DIM, 0), &times)?;
            closed_record(request, &traj, fidelity_f1)
        }
        Model::Effective => {
            let h = build_effective(&params);
            let traj = evolve_closed(&h, &StateVector::basis(h.dim(), 0), &times)?;
            closed_record(request, &traj, fidelity_f2)
        }
        Model::Open => {
            let config = request.integrator(&params)?;
            let rho0 = pure_density(&StateVector::basis(DIM, 0))?;
            let traj = evolve_open(&build_exact(&params), &build_channels(&params), &rho0, &config, &times)?;
            steady_trace_check(&traj)?;
            let densities = traj.densities().expect("open runs store densities");
            Ok(RunRecord {
                request: request.clone(),
                times: traj.times().to_vec(),
                fidelity: densities.iter().map(fidelity_f3).collect::<Result<_>>()?,
                populations: densities.iter().map(populations).collect(),
                trace_dev: densities.iter().map(|r| r.trace_deviation()).collect(),
                diagnostics: traj.diagnostics().copied(),
            })
        }
    }
}
