//! Runs, sweeps and the validation suite behind the `fibrelink` binary.
//!
//! All inputs are dimensionless with `lambda_a = 1`; times are in units of
//! `1/lambda_a`.

mod config;
pub mod evolve;
pub mod sweep;
pub mod validate;

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use evolve::{run_evolve, EvolveRequest, RunRecord};
pub use sweep::{preset, presets, run_sweep, Preset, SweepRow, SweepSpec};
pub use validate::{run_checks, CheckResult};

/// First entanglement time `π/√2` for `lambda_a = 1`.
pub const T_STAR: f64 = PI / SQRT_2;

/// Which dynamics a run uses, and therefore which fidelity it reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    /// Closed exact model, reports F1.
    Exact,
    /// Closed normal-mode model, reports F2.
    Effective,
    /// Lindblad evolution of the exact model, reports F3.
    Open,
}

impl Model {
    pub fn fidelity_name(self) -> &'static str {
        match self {
            Model::Exact => "F1",
            Model::Effective => "F2",
            Model::Open => "F3",
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Model::Exact => "exact",
            Model::Effective => "effective",
            Model::Open => "open",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Model::Exact),
            "effective" => Ok(Model::Effective),
            "open" => Ok(Model::Open),
            other => Err(Error::InvalidArgument(format!("unknown model {other:?}"))),
        }
    }
}

/// Observable value with 9 significant digits, locale independent.
pub fn format_value(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.8e}")
}

/// Shortest representation that parses back to the same `f64`; used for
/// inputs so a row can be re-run exactly.
pub fn format_input(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x}")
}

/// `n` evenly spaced times on `[0, t_max]`; a single `0` when `t_max = 0`.
pub fn time_grid(t_max: f64, n: usize) -> Result<Vec<f64>> {
    if !t_max.is_finite() || t_max < 0.0 {
        return Err(Error::InvalidArgument(format!("t_max = {t_max} must be >= 0")));
    }
    if t_max == 0.0 {
        return Ok(vec![0.0]);
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 time samples, got {n}")));
    }
    let last = (n - 1) as f64;
    Ok((0..n)
        .map(|k| if k == n - 1 { t_max } else { t_max * k as f64 / last })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(time_grid(0.0, 1).unwrap(), vec![0.0]);
        let g = time_grid(2.0, 5).unwrap();
        assert_eq!(g, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        assert!(time_grid(1.0, 1).is_err());
        assert!(time_grid(-1.0, 3).is_err());
        let g = time_grid(2.0 * T_STAR, 201).unwrap();
        assert_eq!(g[100], T_STAR);
    }

    #[test]
    fn formatting() {
        assert_eq!(format_value(1.0), "1.00000000e0");
        assert_eq!(format_value(-0.0), "0.00000000e0");
        assert_eq!(format_value(0.123456789123), "1.23456789e-1");
        let x = 3f64.sqrt();
        assert_eq!(format_input(x).parse::<f64>().unwrap(), x);
        assert_eq!(format_input(-0.0), "0");
    }

    #[test]
    fn model_names() {
        for m in [Model::Exact, Model::Effective, Model::Open] {
            assert_eq!(m.to_string().parse::<Model>().unwrap(), m);
        }
        assert!("closed".parse::<Model>().is_err());
    }
}
