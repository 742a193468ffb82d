use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::state::{DensityMatrix, StateVector};

#[derive(Debug, Clone, PartialEq)]
pub enum Snapshots {
    States(Vec<StateVector>),
    Densities(Vec<DensityMatrix>),
}

impl Snapshots {
    pub fn len(&self) -> usize {
        match self {
            Snapshots::States(v) => v.len(),
            Snapshots::Densities(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// What the open-system integrator actually did.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorDiagnostics {
    /// Step size of the returned (finest) run.
    pub dt_used: f64,
    /// Number of halvings performed, at least one.
    pub halvings: u32,
    /// `|ΔF3|` at the final time between the last two step sizes.
    pub final_change: f64,
    /// RK4 steps taken by the returned run.
    pub steps: usize,
}

/// Time series of states or density matrices plus named observables.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    snapshots: Snapshots,
    observables: BTreeMap<String, Vec<f64>>,
    diagnostics: Option<IntegratorDiagnostics>,
}

/// Requested output times must be finite, nonnegative and strictly
/// increasing.
pub fn validate_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::InvalidTimes("no times requested".into()));
    }
    if let Some(t) = times.iter().find(|t| !t.is_finite() || **t < 0.0) {
        return Err(Error::InvalidTimes(format!("time {t} is negative or not finite")));
    }
    if let Some(w) = times.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::InvalidTimes(format!(
            "times not strictly increasing at {} -> {}",
            w[0], w[1]
        )));
    }
    Ok(())
}

impl Trajectory {
    pub fn new(times: Vec<f64>, snapshots: Snapshots) -> Result<Self> {
        validate_times(&times)?;
        if snapshots.len() != times.len() {
            return Err(Error::InvalidTimes(format!(
                "{} snapshots for {} times",
                snapshots.len(),
                times.len()
            )));
        }
        Ok(Trajectory {
            times,
            snapshots,
            observables: BTreeMap::new(),
            diagnostics: None,
        })
    }

    pub(crate) fn with_diagnostics(mut self, diagnostics: IntegratorDiagnostics) -> Self {
        self.diagnostics = Some(diagnostics);
        self
    }

    /// Attaches a named series; its length must match the time grid.
    pub fn add_observable(&mut self, name: &str, values: Vec<f64>) -> Result<()> {
        if values.len() != self.times.len() {
            return Err(Error::InvalidArgument(format!(
                "observable {name} has {} values for {} times",
                values.len(),
                self.times.len()
            )));
        }
        self.observables.insert(name.to_string(), values);
        Ok(())
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn snapshots(&self) -> &Snapshots {
        &self.snapshots
    }

    pub fn states(&self) -> Option<&[StateVector]> {
        match &self.snapshots {
            Snapshots::States(v) => Some(v),
            Snapshots::Densities(_) => None,
        }
    }

    pub fn densities(&self) -> Option<&[DensityMatrix]> {
        match &self.snapshots {
            Snapshots::Densities(v) => Some(v),
            Snapshots::States(_) => None,
        }
    }

    pub fn observable(&self, name: &str) -> Option<&[f64]> {
        self.observables.get(name).map(Vec::as_slice)
    }

    pub fn observables(&self) -> &BTreeMap<String, Vec<f64>> {
        &self.observables
    }

    pub fn diagnostics(&self) -> Option<&IntegratorDiagnostics> {
        self.diagnostics.as_ref()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}
