use crate::error::{Error, Result};

/// Couplings and decay rates of the cavity–fibre–cavity system.
///
/// Both polarizations share the same values. `lambda_b` is always
/// `√2 · lambda_a`, the balance condition under which the emitted photon is
/// fully absorbed by atom B.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    lambda_a: f64,
    lambda_b: f64,
    nu: f64,
    gamma_c: f64,
    gamma_f: f64,
    kappa_a: f64,
}

fn check_rate(name: &str, value: f64) -> Result<()> {
    if !value.is_finite() || value < 0.0 {
        return Err(Error::InvalidParams(format!(
            "{name} must be finite and >= 0, got {value}"
        )));
    }
    Ok(())
}

impl SystemParams {
    /// Lossless system with atom–cavity coupling `lambda_a` and
    /// cavity–fibre coupling `nu`.
    pub fn new(lambda_a: f64, nu: f64) -> Result<Self> {
        if !lambda_a.is_finite() || lambda_a <= 0.0 {
            return Err(Error::InvalidParams(format!("lambda_a must be > 0, got {lambda_a}")));
        }
        check_rate("nu", nu)?;
        Ok(SystemParams {
            lambda_a,
            lambda_b: std::f64::consts::SQRT_2 * lambda_a,
            nu,
            gamma_c: 0.0,
            gamma_f: 0.0,
            kappa_a: 0.0,
        })
    }

    /// `lambda_a = 1` and `nu = sqrt(nu_sq)`.
    pub fn unit(nu_sq: f64) -> Result<Self> {
        check_rate("nu^2", nu_sq)?;
        SystemParams::new(1.0, nu_sq.sqrt())
    }

    /// Sets the cavity, fibre and atomic decay rates.
    pub fn with_decay(mut self, gamma_c: f64, gamma_f: f64, kappa_a: f64) -> Result<Self> {
        check_rate("gamma_c", gamma_c)?;
        check_rate("gamma_f", gamma_f)?;
        check_rate("kappa_a", kappa_a)?;
        self.gamma_c = gamma_c;
        self.gamma_f = gamma_f;
        self.kappa_a = kappa_a;
        Ok(self)
    }

    pub fn lambda_a(&self) -> f64 {
        self.lambda_a
    }

    pub fn lambda_b(&self) -> f64 {
        self.lambda_b
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn gamma_c(&self) -> f64 {
        self.gamma_c
    }

    pub fn gamma_f(&self) -> f64 {
        self.gamma_f
    }

    pub fn kappa_a(&self) -> f64 {
        self.kappa_a
    }

    pub fn has_decay(&self) -> bool {
        self.gamma_c > 0.0 || self.gamma_f > 0.0 || self.kappa_a > 0.0
    }

    /// Largest coupling, which bounds the integrator step.
    pub fn max_coupling(&self) -> f64 {
        self.lambda_a.max(self.nu)
    }
}
