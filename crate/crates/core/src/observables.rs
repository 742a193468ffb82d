//! Fidelities with the target entangled state and basis populations.
//!
//! The target is `|Ψt> = (|g-1>_A|e-1>_B + |g+1>_A|e+1>_B)/√2` with every
//! field mode in vacuum. F1 and F2 are squared overlaps of pure states from
//! the exact and effective models; F3 is the expectation value of the target
//! projector in a density matrix.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DVector;

use crate::basis::{pos, DIM, EFFECTIVE_DIM};
use crate::error::{Error, Result};
use crate::hamiltonian::effective_pos;
use crate::state::{DensityMatrix, StateVector};
use crate::C64;

/// The target state in either basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetState(StateVector);

impl TargetState {
    /// `(e5 + e9)/√2` in the 11-state basis.
    pub fn exact() -> Self {
        TargetState::from_positions(DIM, pos::EXCITED_B)
    }

    /// `(e4 + e5)/√2` in the effective basis.
    pub fn effective() -> Self {
        TargetState::from_positions(EFFECTIVE_DIM, effective_pos::EXCITED_B)
    }

    fn from_positions(dim: usize, positions: [usize; 2]) -> Self {
        let mut v = DVector::zeros(dim);
        for p in positions {
            v[p] = C64::new(FRAC_1_SQRT_2, 0.0);
        }
        TargetState(StateVector::from_raw(v))
    }

    pub fn state(&self) -> &StateVector {
        &self.0
    }

    /// `<target|ψ>`.
    pub fn overlap(&self, psi: &StateVector) -> Result<C64> {
        check_dim(self.0.dim(), psi.dim())?;
        Ok(self.0.amplitudes().dotc(psi.amplitudes()))
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// F1: `|<Ψt, vacuum|ψ>|²` for an exact-model state.
pub fn fidelity_f1(psi: &StateVector) -> Result<f64> {
    Ok(TargetState::exact().overlap(psi)?.norm_sqr())
}

/// F2: the same overlap for an effective-model state.
pub fn fidelity_f2(psi: &StateVector) -> Result<f64> {
    Ok(TargetState::effective().overlap(psi)?.norm_sqr())
}

/// F3: `<Ψt, vacuum|ρ|Ψt, vacuum>`.
pub fn fidelity_f3(rho: &DensityMatrix) -> Result<f64> {
    check_dim(DIM, rho.dim())?;
    Ok(f3_entries(rho.entries()))
}

/// F3 straight from the matrix entries; only the 2×2 block on the two
/// excited-B states contributes.
pub(crate) fn f3_entries<M>(rho: &M) -> f64
where
    M: std::ops::Index<(usize, usize), Output = C64>,
{
    let [m, p] = pos::EXCITED_B;
    0.5 * (rho[(m, m)] + rho[(p, p)] + rho[(m, p)] + rho[(p, m)]).re
}

/// Anything with a diagonal in the computational basis.
pub trait Populations {
    fn populations(&self) -> Vec<f64>;
}

impl Populations for StateVector {
    fn populations(&self) -> Vec<f64> {
        self.probabilities()
    }
}

impl Populations for DensityMatrix {
    fn populations(&self) -> Vec<f64> {
        DensityMatrix::populations(self)
    }
}

/// Diagonal probabilities of a state or density matrix.
pub fn populations<S: Populations + ?Sized>(snapshot: &S) -> Vec<f64> {
    snapshot.populations()
}
