//! Interaction-picture Hamiltonians.
//!
//! [`build_exact`] is the full resonant Hamiltonian on the 11-state basis:
//! two five-site hopping chains (one per polarization) sharing the excited
//! state of atom A,
//!
//! ```text
//!   e_A --λa-- cavA(j) --ν-- fibre(j) --ν-- cavB(j) --λb-- e_B(j)
//! ```
//!
//! [`build_effective`] keeps only the resonant normal mode
//! `c0 = (a_A - a_B)/√2`, which has no fibre component. It is the
//! `ν → ∞` limit of the exact model.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::fmt;

use nalgebra::{DMatrix, Matrix3};

use crate::basis::{self, pos, Polarization, DIM, EFFECTIVE_DIM};
use crate::params::SystemParams;
use crate::state::hermiticity_deviation;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelTag {
    /// Full cavity–fibre–cavity model on the 11-state basis.
    Exact11,
    /// Resonant normal-mode model on the 5-state basis.
    Effective5,
}

impl ModelTag {
    pub fn dim(self) -> usize {
        match self {
            ModelTag::Exact11 => DIM,
            ModelTag::Effective5 => EFFECTIVE_DIM,
        }
    }
}

/// Hermitian Hamiltonian in units of `lambda_a`.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianMatrix {
    entries: DMatrix<C64>,
    model: ModelTag,
}

impl HamiltonianMatrix {
    /// Wraps an arbitrary square matrix. Hermiticity is checked when a
    /// propagator is built from it.
    pub fn from_entries(entries: DMatrix<C64>, model: ModelTag) -> Self {
        assert_eq!(entries.nrows(), model.dim(), "matrix size does not match model");
        assert!(entries.is_square());
        HamiltonianMatrix { entries, model }
    }

    /// The zero Hamiltonian.
    pub fn zero(model: ModelTag) -> Self {
        let n = model.dim();
        HamiltonianMatrix {
            entries: DMatrix::zeros(n, n),
            model,
        }
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn model(&self) -> ModelTag {
        self.model
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        hermiticity_deviation(&self.entries)
    }

    fn couple(&mut self, i: usize, j: usize, value: f64) {
        self.entries[(i, j)] = C64::new(value, 0.0);
        self.entries[(j, i)] = C64::new(value, 0.0);
    }
}

/// Row-major plain-text dump, one row per line, entries as `re+imi`.
impl fmt::Display for HamiltonianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.entries.nrows() {
            let row: Vec<String> = (0..self.entries.ncols())
                .map(|j| {
                    let z = self.entries[(i, j)];
                    format!("{:.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Exact resonant interaction Hamiltonian on the 11-state basis.
///
/// All couplings are real and positive; the diagonal vanishes on resonance
/// and the two sink states are decoupled.
pub fn build_exact(params: &SystemParams) -> HamiltonianMatrix {
    let mut h = HamiltonianMatrix::zero(ModelTag::Exact11);
    for p in Polarization::ALL {
        let c = basis::chain(p);
        h.couple(pos::EXCITED_A, pos::CAVITY_A[c], params.lambda_a());
        h.couple(pos::CAVITY_A[c], pos::FIBRE[c], params.nu());
        h.couple(pos::FIBRE[c], pos::CAVITY_B[c], params.nu());
        h.couple(pos::CAVITY_B[c], pos::EXCITED_B[c], params.lambda_b());
    }
    h
}

/// Positions in the effective basis.
pub mod effective_pos {
    pub const EXCITED_A: usize = 0;
    pub const PHOTON: [usize; 2] = [1, 2];
    pub const EXCITED_B: [usize; 2] = [3, 4];
}

/// Normal-mode Hamiltonian on the 5-state basis
/// `{|e,0_c,g>, |g-1,1_c,g>, |g+1,1_c,g>, |g-1,0_c,e-1>, |g+1,0_c,e+1>}`.
///
/// Atom A couples to the `c0` photon with `lambda_a/√2`; atom B couples with
/// `-lambda_b/√2` because `c0` enters with the opposite sign of `a_B`.
pub fn build_effective(params: &SystemParams) -> HamiltonianMatrix {
    let mut h = HamiltonianMatrix::zero(ModelTag::Effective5);
    for c in 0..2 {
        h.couple(
            effective_pos::EXCITED_A,
            effective_pos::PHOTON[c],
            params.lambda_a() * FRAC_1_SQRT_2,
        );
        h.couple(
            effective_pos::PHOTON[c],
            effective_pos::EXCITED_B[c],
            -params.lambda_b() * FRAC_1_SQRT_2,
        );
    }
    h
}

/// Basis change from the local modes `(a_A, a_B, b)` to the normal modes
/// `(c0, c+, c-)` of one polarization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalModeMap {
    coefficients: Matrix3<C64>,
}

impl NormalModeMap {
    /// Rows are `c0, c+, c-`; columns are `a_A, a_B, b`.
    pub fn coefficients(&self) -> &Matrix3<C64> {
        &self.coefficients
    }

    /// Normal-mode amplitudes of a single photon spread over the local modes.
    pub fn apply(&self, local: [C64; 3]) -> [C64; 3] {
        let v = self.coefficients * nalgebra::Vector3::from(local);
        [v[0], v[1], v[2]]
    }

    /// `max |U U† - 1|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let prod = self.coefficients * self.coefficients.adjoint();
        (prod - Matrix3::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// Orthonormal normal modes: `c0 = (a_A - a_B)/√2`,
/// `c± = (a_A + a_B ± √2 b)/2`.
pub fn normal_mode_map() -> NormalModeMap {
    let r = |x: f64| C64::new(x, 0.0);
    let s = FRAC_1_SQRT_2;
    #[rustfmt::skip]
    let coefficients = Matrix3::new(
        r(s),   r(-s),  r(0.0),
        r(0.5), r(0.5), r(SQRT_2 / 2.0),
        r(0.5), r(0.5), r(-SQRT_2 / 2.0),
    );
    NormalModeMap { coefficients }
}
