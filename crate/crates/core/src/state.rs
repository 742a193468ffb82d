//! Pure states and density matrices over the truncated basis.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::C64;

/// Largest accepted norm deviation for a state vector handed in by a caller.
pub const NORM_TOL: f64 = 1e-6;
/// Largest accepted `|ρ - ρ†|` element.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Largest accepted `|tr ρ - 1|`.
pub const TRACE_TOL: f64 = 1e-8;
/// Most negative accepted eigenvalue.
pub const POSITIVITY_TOL: f64 = 1e-8;

/// Normalized amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(DVector<C64>);

impl StateVector {
    /// Wraps `amplitudes`, rejecting vectors whose norm differs from 1 by
    /// more than [`NORM_TOL`].
    pub fn new(amplitudes: DVector<C64>) -> Result<Self> {
        let deviation = (amplitudes.norm() - 1.0).abs();
        if deviation.is_nan() || deviation > NORM_TOL {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(StateVector(amplitudes))
    }

    pub fn from_slice(amplitudes: &[C64]) -> Result<Self> {
        StateVector::new(DVector::from_column_slice(amplitudes))
    }

    /// Basis vector at 0-based `position` in a space of dimension `dim`.
    pub fn basis(dim: usize, position: usize) -> Self {
        assert!(position < dim, "basis position {position} out of range for dim {dim}");
        let mut v = DVector::zeros(dim);
        v[position] = C64::new(1.0, 0.0);
        StateVector(v)
    }

    pub(crate) fn from_raw(amplitudes: DVector<C64>) -> Self {
        StateVector(amplitudes)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.0
    }

    pub fn norm_deviation(&self) -> f64 {
        (self.0.norm() - 1.0).abs()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.0.iter().map(|a| a.norm_sqr()).collect()
    }
}

impl std::ops::Index<usize> for StateVector {
    type Output = C64;

    fn index(&self, i: usize) -> &C64 {
        &self.0[i]
    }
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(DMatrix<C64>);

impl DensityMatrix {
    /// Validates and wraps `entries`.
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::InvalidDensity(format!(
                "matrix is {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let rho = DensityMatrix(entries);
        rho.check()?;
        Ok(rho)
    }

    /// Skips validation; used for integrator snapshots, which are audited
    /// separately.
    pub(crate) fn from_raw(entries: DMatrix<C64>) -> Self {
        DensityMatrix(entries)
    }

    /// `n × n` identity divided by `n`.
    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix(DMatrix::identity(dim, dim).map(|x: C64| x / dim as f64))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_entries(self) -> DMatrix<C64> {
        self.0
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn trace_deviation(&self) -> f64 {
        (self.trace() - C64::new(1.0, 0.0)).norm()
    }

    /// `max |ρ_ij - conj(ρ_ji)|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        hermiticity_deviation(&self.0)
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.0 + self.0.adjoint()).map(|x| x * 0.5);
        herm.symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        (&self.0 * &self.0).trace().re
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.0[(i, i)].re).collect()
    }

    /// Checks Hermiticity, trace and positivity against the crate tolerances.
    pub fn check(&self) -> Result<()> {
        let herm = self.hermiticity_deviation();
        if herm.is_nan() || herm >= HERMITIAN_TOL {
            return Err(Error::InvalidDensity(format!("Hermiticity deviation {herm:.3e}")));
        }
        let tr = self.trace_deviation();
        if tr.is_nan() || tr > TRACE_TOL {
            return Err(Error::InvalidDensity(format!("trace deviation {tr:.3e}")));
        }
        let min = self.min_eigenvalue();
        if min.is_nan() || min < -POSITIVITY_TOL {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(())
    }
}

pub(crate) fn hermiticity_deviation(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut max: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            max = max.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    max
}

/// `|ψ><ψ|`; rejects states whose norm is off by more than [`NORM_TOL`].
pub fn pure_density(psi: &StateVector) -> Result<DensityMatrix> {
    let deviation = psi.norm_deviation();
    if deviation.is_nan() || deviation > NORM_TOL {
        return Err(Error::NotNormalized { deviation });
    }
    let v = psi.amplitudes();
    Ok(DensityMatrix(v * v.adjoint()))
}
