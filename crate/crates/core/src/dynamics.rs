//! Closed and open time evolution.
//!
//! Closed evolution diagonalizes the Hamiltonian once and applies
//! `V exp(-iΛt) V†` at each requested time, so it carries no stepping error.
//! Open evolution integrates the Lindblad equation
//!
//! ```text
//!   dρ/dt = -i[H, ρ] + Σ_k γ_k (L_k ρ L_k† - ½{L_k† L_k, ρ})
//! ```
//!
//! directly on the 11×11 density matrix with classical RK4, then repeats
//! the run with half the step until the final-time F3 stops moving.

use std::fmt;

use nalgebra::{DMatrix, DVector, SMatrix};

use crate::basis::{self, AtomA, AtomB, BasisState, Mode, Polarization, DIM};
use crate::error::{Error, Result};
use crate::hamiltonian::{HamiltonianMatrix, ModelTag};
use crate::observables::f3_entries;
use crate::params::SystemParams;
use crate::state::{pure_density, DensityMatrix, StateVector, NORM_TOL};
use crate::trajectory::{validate_times, IntegratorDiagnostics, Snapshots, Trajectory};
use crate::C64;

const HERMITIAN_INPUT_TOL: f64 = 1e-12;
const RECONSTRUCTION_TOL: f64 = 1e-10;

/// Hamiltonian with its cached spectral decomposition `H = V Λ V†`.
#[derive(Debug, Clone)]
pub struct Propagator {
    hamiltonian: HamiltonianMatrix,
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<C64>,
}

impl Propagator {
    /// Diagonalizes `hamiltonian`; rejects non-Hermitian input and
    /// decompositions that do not reconstruct the matrix.
    pub fn new(hamiltonian: HamiltonianMatrix) -> Result<Self> {
        let scale = hamiltonian.entries().iter().map(|z| z.norm()).fold(1.0, f64::max);
        let deviation = hamiltonian.hermiticity_deviation();
        if deviation > HERMITIAN_INPUT_TOL * scale {
            return Err(Error::NotHermitian { deviation });
        }
        let eig = hamiltonian.entries().clone().symmetric_eigen();
        let prop = Propagator {
            eigenvalues: eig.eigenvalues,
            eigenvectors: eig.eigenvectors,
            hamiltonian,
        };
        let error = prop.reconstruction_error();
        if error.is_nan() || error >= RECONSTRUCTION_TOL * scale {
            return Err(Error::Eigendecomposition { error });
        }
        Ok(prop)
    }

    pub fn hamiltonian(&self) -> &HamiltonianMatrix {
        &self.hamiltonian
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<C64> {
        &self.eigenvectors
    }

    /// `max |V Λ V† - H|`.
    pub fn reconstruction_error(&self) -> f64 {
        let lambda = DMatrix::from_diagonal(&self.eigenvalues.map(|x| C64::new(x, 0.0)));
        let rebuilt = &self.eigenvectors * lambda * self.eigenvectors.adjoint();
        (rebuilt - self.hamiltonian.entries())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// `exp(-iHt) ψ`.
    pub fn propagate(&self, psi: &StateVector, t: f64) -> Result<StateVector> {
        if psi.dim() != self.hamiltonian.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.hamiltonian.dim(),
                found: psi.dim(),
            });
        }
        let mut coeffs = self.eigenvectors.adjoint() * psi.amplitudes();
        for (c, e) in coeffs.iter_mut().zip(self.eigenvalues.iter()) {
            *c *= C64::from_polar(1.0, -e * t);
        }
        Ok(StateVector::from_raw(&self.eigenvectors * coeffs))
    }
}

/// Closed Schrödinger evolution of `psi0` sampled at `times`.
pub fn evolve_closed(h: &HamiltonianMatrix, psi0: &StateVector, times: &[f64]) -> Result<Trajectory> {
    validate_times(times)?;
    let deviation = psi0.norm_deviation();
    if deviation.is_nan() || deviation > NORM_TOL {
        return Err(Error::NotNormalized { deviation });
    }
    let prop = Propagator::new(h.clone())?;
    let states = times
        .iter()
        .map(|&t| prop.propagate(psi0, t))
        .collect::<Result<Vec<_>>>()?;
    Trajectory::new(times.to_vec(), Snapshots::States(states))
}

/// The decaying subsystem of a Lindblad channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    CavityA,
    CavityB,
    Fibre,
    AtomA,
    AtomB,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChannelLabel {
    pub kind: ChannelKind,
    pub polarization: Polarization,
}

impl fmt::Display for ChannelLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            ChannelKind::CavityA => "cavityA",
            ChannelKind::CavityB => "cavityB",
            ChannelKind::Fibre => "fibre",
            ChannelKind::AtomA => "atomA",
            ChannelKind::AtomB => "atomB",
        };
        let sign = match self.polarization {
            Polarization::Minus => '-',
            Polarization::Plus => '+',
        };
        write!(f, "{name}{sign}")
    }
}

impl ChannelLabel {
    /// Image of a basis state under the channel's lowering operator.
    fn lower(&self, s: &BasisState) -> Option<BasisState> {
        let p = self.polarization;
        let mut out = *s;
        match self.kind {
            ChannelKind::CavityA if s.cavity_a == Mode::Photon(p) => out.cavity_a = Mode::Vacuum,
            ChannelKind::CavityB if s.cavity_b == Mode::Photon(p) => out.cavity_b = Mode::Vacuum,
            ChannelKind::Fibre if s.fibre == Mode::Photon(p) => out.fibre = Mode::Vacuum,
            ChannelKind::AtomA if s.atom_a == AtomA::Excited => out.atom_a = AtomA::Ground(p),
            ChannelKind::AtomB if s.atom_b == AtomB::Excited(p) => out.atom_b = AtomB::Ground,
            _ => return None,
        }
        Some(out)
    }
}

/// Jump operator with its rate.
#[derive(Debug, Clone, PartialEq)]
pub struct LindbladChannel {
    pub label: ChannelLabel,
    pub rate: f64,
    pub operator: DMatrix<C64>,
}

impl LindbladChannel {
    /// Builds the channel's jump operator by lowering every basis state.
    pub fn new(label: ChannelLabel, rate: f64) -> Result<Self> {
        if !rate.is_finite() || rate < 0.0 {
            return Err(Error::InvalidParams(format!(
                "rate of {label} must be >= 0, got {rate}"
            )));
        }
        let basis = basis::enumerate_basis();
        let mut operator = DMatrix::zeros(DIM, DIM);
        for (col, s) in basis.iter().enumerate() {
            if let Some(image) = label.lower(s) {
                let row = image.position().expect("lowering stays inside the truncated space");
                operator[(row, col)] = C64::new(1.0, 0.0);
            }
        }
        Ok(LindbladChannel { label, rate, operator })
    }
}

/// The ten decay channels: cavity A, cavity B, fibre, atom A, atom B, each
/// for both polarizations.
pub fn build_channels(params: &SystemParams) -> Vec<LindbladChannel> {
    let families = [
        (ChannelKind::CavityA, params.gamma_c()),
        (ChannelKind::CavityB, params.gamma_c()),
        (ChannelKind::Fibre, params.gamma_f()),
        (ChannelKind::AtomA, params.kappa_a()),
        (ChannelKind::AtomB, params.kappa_a()),
    ];
    families
        .iter()
        .flat_map(|&(kind, rate)| {
            Polarization::ALL.into_iter().map(move |polarization| {
                LindbladChannel::new(ChannelLabel { kind, polarization }, rate).expect("params rates are validated")
            })
        })
        .collect()
}

/// Step size and convergence control for [`evolve_open`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    dt: f64,
    t_max: f64,
    convergence_tol: f64,
    max_halvings: u32,
}

impl IntegratorConfig {
    pub const DEFAULT_TOL: f64 = 1e-8;
    pub const DEFAULT_MAX_HALVINGS: u32 = 6;

    /// `dt` may not exceed `0.1 / max(lambda_a, nu)`.
    pub fn new(params: &SystemParams, dt: f64, t_max: f64, convergence_tol: f64, max_halvings: u32) -> Result<Self> {
        let limit = 0.1 / params.max_coupling();
        if dt.is_nan() || dt <= 0.0 || dt > limit {
            return Err(Error::InvalidConfig(format!("dt = {dt} outside (0, {limit}]")));
        }
        if !t_max.is_finite() || t_max < 0.0 {
            return Err(Error::InvalidConfig(format!("t_max = {t_max} must be >= 0")));
        }
        if convergence_tol.is_nan() || convergence_tol <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "convergence_tol = {convergence_tol} must be > 0"
            )));
        }
        if max_halvings == 0 {
            return Err(Error::InvalidConfig("max_halvings must be >= 1".into()));
        }
        Ok(IntegratorConfig {
            dt,
            t_max,
            convergence_tol,
            max_halvings,
        })
    }

    /// `dt = 0.02 / max(lambda_a, nu)` with the default tolerance.
    pub fn default_for(params: &SystemParams, t_max: f64) -> Result<Self> {
        IntegratorConfig::new(
            params,
            Self::default_dt(params),
            t_max,
            Self::DEFAULT_TOL,
            Self::DEFAULT_MAX_HALVINGS,
        )
    }

    pub fn default_dt(params: &SystemParams) -> f64 {
        0.02 / params.max_coupling()
    }

    pub fn with_tolerance(mut self, convergence_tol: f64) -> Result<Self> {
        if convergence_tol.is_nan() || convergence_tol <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "convergence_tol = {convergence_tol} must be > 0"
            )));
        }
        self.convergence_tol = convergence_tol;
        Ok(self)
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn convergence_tol(&self) -> f64 {
        self.convergence_tol
    }

    pub fn max_halvings(&self) -> u32 {
        self.max_halvings
    }
}

type Mat = SMatrix<C64, DIM, DIM>;

/// A channel's rate and the nonzero `(row, col, value)` entries of its operator.
type Jump = (f64, Vec<(usize, usize, C64)>);

/// Right-hand side of the master equation, precompiled for the fixed
/// dimension: `dρ/dt = Gρ + ρG† + Σ γ LρL†` with `G = -iH - ½Σ γ L†L`.
struct Liouvillian {
    generator: Mat,
    generator_adj: Mat,
    jumps: Vec<Jump>,
}

impl Liouvillian {
    fn new(h: &HamiltonianMatrix, channels: &[LindbladChannel]) -> Self {
        let mut generator = Mat::from_fn(|i, j| -C64::i() * h.entries()[(i, j)]);
        let mut jumps = Vec::new();
        for ch in channels.iter().filter(|c| c.rate > 0.0) {
            let l = Mat::from_fn(|i, j| ch.operator[(i, j)]);
            generator -= (l.adjoint() * l).map(|z| z * (0.5 * ch.rate));
            let nonzero = (0..DIM)
                .flat_map(|i| (0..DIM).map(move |j| (i, j)))
                .filter(|&(i, j)| l[(i, j)].norm() > 0.0)
                .map(|(i, j)| (i, j, l[(i, j)]))
                .collect();
            jumps.push((ch.rate, nonzero));
        }
        Liouvillian {
            generator,
            generator_adj: generator.adjoint(),
            jumps,
        }
    }

    fn apply(&self, rho: &Mat) -> Mat {
        let mut out = self.generator * rho + rho * self.generator_adj;
        for (rate, entries) in &self.jumps {
            for &(a, i, la) in entries {
                for &(b, j, lb) in entries {
                    out[(a, b)] += la * rho[(i, j)] * lb.conj() * *rate;
                }
            }
        }
        out
    }

    fn rk4_step(&self, rho: &Mat, dt: f64) -> Mat {
        let k1 = self.apply(rho);
        let k2 = self.apply(&(rho + k1 * C64::new(dt / 2.0, 0.0)));
        let k3 = self.apply(&(rho + k2 * C64::new(dt / 2.0, 0.0)));
        let k4 = self.apply(&(rho + k3 * C64::new(dt, 0.0)));
        rho + (k1 + k2 * C64::new(2.0, 0.0) + k3 * C64::new(2.0, 0.0) + k4) * C64::new(dt / 6.0, 0.0)
    }

    /// Integrates from `t = 0` and samples at `times`. Each interval between
    /// samples is split into equal steps no longer than `dt`.
    fn integrate(&self, rho0: &Mat, times: &[f64], dt: f64) -> (Vec<Mat>, usize) {
        let mut rho = *rho0;
        let mut t = 0.0;
        let mut steps = 0;
        let mut out = Vec::with_capacity(times.len());
        for &target in times {
            let span = target - t;
            if span > 0.0 {
                let n = (span / dt - 1e-9).ceil().max(1.0) as usize;
                let h = span / n as f64;
                for _ in 0..n {
                    rho = self.rk4_step(&rho, h);
                }
                steps += n;
            }
            t = target;
            out.push(rho);
        }
        (out, steps)
    }
}

/// Lindblad evolution of `rho0` (taken at `t = 0`) sampled at `times`.
///
/// After the first run the step is halved and the run repeated; the result
/// is accepted once the final-time F3 changes by less than
/// `config.convergence_tol()`. The returned trajectory is the finest run.
pub fn evolve_open(
    h: &HamiltonianMatrix,
    channels: &[LindbladChannel],
    rho0: &DensityMatrix,
    config: &IntegratorConfig,
    times: &[f64],
) -> Result<Trajectory> {
    if h.model() != ModelTag::Exact11 {
        return Err(Error::DimensionMismatch {
            expected: DIM,
            found: h.dim(),
        });
    }
    if rho0.dim() != DIM {
        return Err(Error::DimensionMismatch {
            expected: DIM,
            found: rho0.dim(),
        });
    }
    if let Some(ch) = channels
        .iter()
        .find(|c| c.operator.nrows() != DIM || c.operator.ncols() != DIM)
    {
        return Err(Error::DimensionMismatch {
            expected: DIM,
            found: ch.operator.nrows(),
        });
    }
    rho0.check()?;
    validate_times(times)?;
    let last = *times.last().expect("validated nonempty");
    if last > config.t_max() * (1.0 + 1e-12) {
        return Err(Error::InvalidTimes(format!(
            "last requested time {last} exceeds t_max = {}",
            config.t_max()
        )));
    }

    let liouvillian = Liouvillian::new(h, channels);
    let start = Mat::from_fn(|i, j| rho0.entries()[(i, j)]);
    let fidelity = |snaps: &[Mat]| f3_entries(snaps.last().expect("nonempty"));

    let mut dt = config.dt();
    let (mut coarse, _) = liouvillian.integrate(&start, times, dt);
    for halving in 1..=config.max_halvings() {
        let (fine, steps) = liouvillian.integrate(&start, times, dt / 2.0);
        let (f_coarse, f_fine) = (fidelity(&coarse), fidelity(&fine));
        let change = (f_fine - f_coarse).abs();
        if change < config.convergence_tol() {
            let snapshots = fine
                .iter()
                .map(|m| DensityMatrix::from_raw(DMatrix::from_fn(DIM, DIM, |i, j| m[(i, j)])))
                .collect();
            let diagnostics = IntegratorDiagnostics {
                dt_used: dt / 2.0,
                halvings: halving,
                final_change: change,
                steps,
            };
            return Ok(Trajectory::new(times.to_vec(), Snapshots::Densities(snapshots))?.with_diagnostics(diagnostics));
        }
        if halving == config.max_halvings() {
            return Err(Error::Convergence {
                halvings: halving,
                coarse: f_coarse,
                fine: f_fine,
                coarse_dt: dt,
                fine_dt: dt / 2.0,
            });
        }
        coarse = fine;
        dt /= 2.0;
    }
    unreachable!("max_halvings >= 1")
}

/// Worst-case density-matrix health over a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrityReport {
    pub max_trace_deviation: f64,
    pub max_hermiticity_deviation: f64,
    pub min_eigenvalue: f64,
}

/// Audits every snapshot; pure-state snapshots are checked as `|ψ><ψ|`.
pub fn steady_trace_check(traj: &Trajectory) -> Result<IntegrityReport> {
    if traj.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    let densities: Vec<DensityMatrix> = match traj.snapshots() {
        Snapshots::Densities(d) => d.clone(),
        Snapshots::States(states) => states
            .iter()
            .map(|s| {
                pure_density(s).unwrap_or_else(|_| DensityMatrix::from_raw(s.amplitudes() * s.amplitudes().adjoint()))
            })
            .collect(),
    };
    let mut report = IntegrityReport {
        max_trace_deviation: 0.0,
        max_hermiticity_deviation: 0.0,
        min_eigenvalue: f64::INFINITY,
    };
    for rho in &densities {
        report.max_trace_deviation = report.max_trace_deviation.max(rho.trace_deviation());
        report.max_hermiticity_deviation = report.max_hermiticity_deviation.max(rho.hermiticity_deviation());
        report.min_eigenvalue = report.min_eigenvalue.min(rho.min_eigenvalue());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{driven_frequencies, exact_amplitudes};
    use crate::basis::pos;
    use crate::hamiltonian::{build_effective, build_exact};
    use crate::observables::{fidelity_f1, fidelity_f3};
    use std::f64::consts::{PI, SQRT_2};

    const T_STAR: f64 = PI / SQRT_2;

    fn max_diff(a: &StateVector, b: &StateVector) -> f64 {
        (a.amplitudes() - b.amplitudes())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn closed_matches_oracle_at_entanglement_time() {
        let params = SystemParams::unit(3.0).unwrap();
        let traj = evolve_closed(&build_exact(&params), &StateVector::basis(DIM, 0), &[T_STAR]).unwrap();
        let psi = &traj.states().unwrap()[0];
        let oracle = exact_amplitudes(1.0, params.nu(), T_STAR).to_state();
        assert!(max_diff(psi, &oracle) < 1e-10);
    }

    #[test]
    fn zero_hamiltonian_is_identity() {
        let psi0 = StateVector::basis(DIM, 3);
        let traj = evolve_closed(&HamiltonianMatrix::zero(ModelTag::Exact11), &psi0, &[0.0, 1.0, 50.0]).unwrap();
        for psi in traj.states().unwrap() {
            assert_eq!(max_diff(psi, &psi0), 0.0);
        }
    }

    #[test]
    fn closed_rejects_bad_input() {
        let h = build_exact(&SystemParams::unit(3.0).unwrap());
        let mut bad = h.entries().clone();
        bad[(0, 1)] = C64::new(1.0, 0.5);
        let non_herm = HamiltonianMatrix::from_entries(bad, ModelTag::Exact11);
        assert!(matches!(Propagator::new(non_herm), Err(Error::NotHermitian { .. })));
        let unnormalized = StateVector::from_raw(DVector::from_element(DIM, C64::new(1.0, 0.0)));
        assert!(evolve_closed(&h, &unnormalized, &[0.0]).is_err());
        assert!(evolve_closed(&h, &StateVector::basis(5, 0), &[0.0]).is_err());
        assert!(evolve_closed(&h, &StateVector::basis(DIM, 0), &[]).is_err());
    }

    #[test]
    fn spectral_weights_of_initial_state() {
        // only the five frequencies of the closed forms carry weight from |e>_A
        for nu_sq in [3.0, 8.0, 24.0, 120.0] {
            let params = SystemParams::unit(nu_sq).unwrap();
            let prop = Propagator::new(build_exact(&params)).unwrap();
            assert!(prop.reconstruction_error() < 1e-12);
            let mut driven: Vec<f64> = prop
                .eigenvalues()
                .iter()
                .enumerate()
                .filter(|&(k, _)| prop.eigenvectors()[(0, k)].norm_sqr() > 1e-12)
                .map(|(_, e)| *e)
                .collect();
            driven.sort_by(f64::total_cmp);
            let expected = driven_frequencies(1.0, params.nu());
            assert_eq!(driven.len(), expected.len(), "nu^2 = {nu_sq}");
            for (got, want) in driven.iter().zip(expected) {
                assert!((got - want).abs() < 1e-10, "nu^2 = {nu_sq}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn effective_dynamics_has_period_of_slow_frequency() {
        let h = build_effective(&SystemParams::unit(1.0).unwrap());
        let period = 2.0 * PI / SQRT_2;
        let times = [0.3, 1.1, 0.3 + period, 1.1 + period];
        let traj = evolve_closed(&h, &StateVector::basis(5, 0), &times).unwrap();
        let states = traj.states().unwrap();
        for k in 0..2 {
            let (a, b) = (states[k].probabilities(), states[k + 2].probabilities());
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn channel_operators() {
        let params = SystemParams::unit(3.0).unwrap().with_decay(0.2, 0.3, 0.4).unwrap();
        let channels = build_channels(&params);
        assert_eq!(channels.len(), 10);
        let find = |name: &str| channels.iter().find(|c| c.label.to_string() == name).unwrap();
        let one = C64::new(1.0, 0.0);

        let a = find("atomA-");
        assert_eq!(a.operator[(9, 0)], one);
        assert_eq!(a.rate, 0.4);
        let f = find("fibre+");
        assert_eq!(f.operator[(10, 6)], one);
        assert_eq!(f.rate, 0.3);
        let f = find("fibre-");
        assert_eq!(f.operator[(9, 2)], one);
        let cb = find("cavityB+");
        assert_eq!(cb.operator[(10, 7)], one);
        assert_eq!(cb.rate, 0.2);
        assert_eq!(find("atomB+").operator[(10, 8)], one);
        assert_eq!(find("cavityA-").operator[(9, 1)], one);

        let basis = basis::enumerate_basis();
        for ch in &channels {
            let nonzero: Vec<_> = (0..DIM)
                .flat_map(|i| (0..DIM).map(move |j| (i, j)))
                .filter(|&(i, j)| ch.operator[(i, j)].norm() > 0.0)
                .collect();
            assert_eq!(nonzero.len(), 1, "{}", ch.label);
            let (to, from) = nonzero[0];
            assert_eq!(basis[from].excitation_number(), 1);
            assert_eq!(basis[to].excitation_number(), 0);
            assert!(pos::SINK.contains(&to));
        }

        let zero = build_channels(&SystemParams::unit(3.0).unwrap());
        assert!(zero.iter().all(|c| c.rate == 0.0));
    }

    #[test]
    fn integrator_config_guards() {
        let p = SystemParams::unit(399.0).unwrap();
        let limit = 0.1 / 399f64.sqrt();
        assert!(IntegratorConfig::new(&p, limit * 1.01, 1.0, 1e-8, 3).is_err());
        assert!(IntegratorConfig::new(&p, 0.0, 1.0, 1e-8, 3).is_err());
        assert!(IntegratorConfig::new(&p, limit, -1.0, 1e-8, 3).is_err());
        assert!(IntegratorConfig::new(&p, limit, 1.0, 0.0, 3).is_err());
        assert!(IntegratorConfig::new(&p, limit, 1.0, 1e-8, 0).is_err());
        let c = IntegratorConfig::default_for(&p, 2.0).unwrap();
        assert!((c.dt() - 0.02 / 399f64.sqrt()).abs() < 1e-18);
    }

    #[test]
    fn zero_rates_reduce_to_closed_evolution() {
        let params = SystemParams::unit(3.0).unwrap();
        let h = build_exact(&params);
        let times: Vec<f64> = (0..=20).map(|k| k as f64 * 0.2).collect();
        let psi0 = StateVector::basis(DIM, 0);
        let closed = evolve_closed(&h, &psi0, &times).unwrap();
        let config = IntegratorConfig::default_for(&params, 4.0).unwrap();
        let open = evolve_open(
            &h,
            &build_channels(&params),
            &pure_density(&psi0).unwrap(),
            &config,
            &times,
        )
        .unwrap();
        for (psi, rho) in closed.states().unwrap().iter().zip(open.densities().unwrap()) {
            let expected = pure_density(psi).unwrap();
            let diff = (rho.entries() - expected.entries())
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            assert!(diff < 1e-8, "diff {diff}");
            assert!((fidelity_f3(rho).unwrap() - fidelity_f1(psi).unwrap()).abs() < 1e-8);
        }
    }

    #[test]
    fn strong_atomic_decay_fills_sinks() {
        let params = SystemParams::unit(3.0).unwrap().with_decay(0.0, 0.0, 20.0).unwrap();
        let config = IntegratorConfig::default_for(&params, 3.0).unwrap();
        let rho0 = pure_density(&StateVector::basis(DIM, 0)).unwrap();
        let traj = evolve_open(
            &build_exact(&params),
            &build_channels(&params),
            &rho0,
            &config,
            &[0.5, 3.0],
        )
        .unwrap();
        let last = traj.densities().unwrap().last().unwrap();
        let p = last.populations();
        assert!(p[9] + p[10] > 0.99, "sink population {}", p[9] + p[10]);
        let report = steady_trace_check(&traj).unwrap();
        assert!(report.max_trace_deviation < 1e-8);
        assert!(report.min_eigenvalue >= -1e-6);
    }

    #[test]
    fn open_rejects_bad_input() {
        let params = SystemParams::unit(3.0).unwrap();
        let config = IntegratorConfig::default_for(&params, 1.0).unwrap();
        let channels = build_channels(&params);
        let rho0 = pure_density(&StateVector::basis(DIM, 0)).unwrap();
        let h = build_exact(&params);
        assert!(evolve_open(&h, &channels, &rho0, &config, &[2.0]).is_err());
        assert!(evolve_open(&build_effective(&params), &channels, &rho0, &config, &[0.5]).is_err());
        let bad = DensityMatrix::from_raw(rho0.entries() * C64::new(2.0, 0.0));
        assert!(evolve_open(&h, &channels, &bad, &config, &[0.5]).is_err());
    }

    #[test]
    fn convergence_failure_carries_both_estimates() {
        let params = SystemParams::unit(3.0).unwrap().with_decay(0.1, 0.1, 0.1).unwrap();
        let config = IntegratorConfig::new(&params, 0.05, 2.0, 1e-30, 1).unwrap();
        let rho0 = pure_density(&StateVector::basis(DIM, 0)).unwrap();
        let err = evolve_open(&build_exact(&params), &build_channels(&params), &rho0, &config, &[2.0]).unwrap_err();
        match err {
            Error::Convergence {
                halvings,
                coarse,
                fine,
                coarse_dt,
                fine_dt,
            } => {
                assert_eq!(halvings, 1);
                assert_eq!(coarse_dt, 0.05);
                assert_eq!(fine_dt, 0.025);
                assert!(coarse > 0.0 && fine > 0.0);
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn empty_trajectory_rejected() {
        // Trajectory::new refuses empty grids, so an empty one cannot be built
        assert!(Trajectory::new(vec![], Snapshots::States(vec![])).is_err());
    }
}
