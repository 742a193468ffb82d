//! Simulation of a Λ-type atom and a V-type atom trapped in two cavities
//! joined by a short optical fibre.
//!
//! The atom in cavity A starts excited and emits a circularly polarized
//! photon; the photon crosses the fibre and is absorbed by the atom in
//! cavity B, leaving the two atoms in the polarization-entangled state
//! `(|g-1>|e-1> + |g+1>|e+1>)/√2`.
//!
//! The crate covers:
//!
//! * the 11-state single-excitation Hilbert space ([`basis`], [`state`]),
//! * the resonant interaction Hamiltonian and its normal-mode effective
//!   form ([`hamiltonian`]),
//! * closed-form amplitude solutions used as an oracle ([`analytic`]),
//! * spectral closed evolution and RK4 Lindblad evolution ([`dynamics`]),
//! * the fidelities F1, F2, F3 ([`observables`]),
//! * presets, sweeps, CSV output and the validation suite ([`experiments`]).
//!
//! Units: the atom–cavity coupling of atom A sets the scale, so in practice
//! `lambda_a = 1` and times are measured in `1/lambda_a`.

pub mod analytic;
pub mod basis;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod hamiltonian;
pub mod observables;
pub mod params;
pub mod state;
pub mod trajectory;

pub use error::{Error, Result};
pub use params::SystemParams;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
