//! Lindblad integrator against an independent matrix-exponential oracle,
//! plus probability bookkeeping and step-halving behaviour.

use fibrelink::basis::{pos, DIM};
use fibrelink::dynamics::{build_channels, evolve_open, IntegratorConfig, LindbladChannel};
use fibrelink::experiments::{preset, T_STAR};
use fibrelink::hamiltonian::{build_exact, HamiltonianMatrix};
use fibrelink::observables::fidelity_f3;
use fibrelink::state::{pure_density, DensityMatrix, StateVector};
use fibrelink::{SystemParams, C64};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

/// Column-major vectorisation: `vec(A X B) = (B^T ⊗ A) vec(X)`.
fn superoperator(h: &HamiltonianMatrix, channels: &[LindbladChannel]) -> DMatrix<C64> {
    let id = DMatrix::<C64>::identity(DIM, DIM);
    let i = C64::new(0.0, 1.0);
    let hm = h.entries();
    let mut l = (id.kronecker(hm) - hm.transpose().kronecker(&id)) * (-i);
    for ch in channels {
        let a = &ch.operator;
        let ada = a.adjoint() * a;
        let g = C64::from(ch.rate);
        l += (a.conjugate().kronecker(a)
            - id.kronecker(&ada) * C64::from(0.5)
            - ada.transpose().kronecker(&id) * C64::from(0.5))
            * g;
    }
    l
}

fn expm_evolve(params: &SystemParams, rho0: &DensityMatrix, t: f64) -> DMatrix<C64> {
    let l = superoperator(&build_exact(params), &build_channels(params));
    let v = DVector::from_column_slice(rho0.entries().as_slice());
    let out = (l * C64::from(t)).exp() * v;
    DMatrix::from_column_slice(DIM, DIM, out.as_slice())
}

fn max_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    (a - b).iter().fold(0.0, |m, z| m.max(z.norm()))
}

fn ground_rho() -> DensityMatrix {
    pure_density(&StateVector::basis(DIM, 0)).unwrap()
}

#[test]
fn integrator_matches_matrix_exponential() {
    let cases = [
        (3.0, 0.05, 0.02, 0.01),
        (8.0, 1.0, 0.0, 0.0),
        (399.0, 0.0, 0.1, 0.01),
        (24.0, 0.3, 0.3, 0.3),
    ];
    for (nu_sq, gamma_f, gamma_c, kappa_a) in cases {
        let params = SystemParams::unit(nu_sq)
            .unwrap()
            .with_decay(gamma_c, gamma_f, kappa_a)
            .unwrap();
        let times = [0.5, T_STAR, 2.0 * T_STAR];
        let config = IntegratorConfig::default_for(&params, 2.0 * T_STAR).unwrap();
        let traj = evolve_open(
            &build_exact(&params),
            &build_channels(&params),
            &ground_rho(),
            &config,
            &times,
        )
        .unwrap();
        for (&t, rho) in times.iter().zip(traj.densities().unwrap()) {
            let oracle = expm_evolve(&params, &ground_rho(), t);
            let err = max_diff(rho.entries(), &oracle);
            assert!(
                err < 1e-7,
                "nu^2={nu_sq} rates=({gamma_f},{gamma_c},{kappa_a}) t={t}: {err:.3e}"
            );
        }
    }
}

#[test]
fn oracle_reproduces_experimental_fidelity() {
    let params = SystemParams::unit(399.0)
        .unwrap()
        .with_decay(3.5 / 750.0, 0.0, 2.62 / 750.0)
        .unwrap();
    let rho = DensityMatrix::new(expm_evolve(&params, &ground_rho(), T_STAR)).unwrap();
    let f = fidelity_f3(&rho).unwrap();
    assert!((f - 0.988765).abs() < 1e-6, "{f}");
}

#[test]
fn oracle_agrees_on_decay_budget_values() {
    let f = |gamma_c: f64, kappa_a: f64| {
        let params = SystemParams::unit(399.0)
            .unwrap()
            .with_decay(gamma_c, 0.0, kappa_a)
            .unwrap();
        let rho = DensityMatrix::new(expm_evolve(&params, &ground_rho(), T_STAR)).unwrap();
        fidelity_f3(&rho).unwrap()
    };
    let edge = f(0.1, 0.01);
    let half = f(0.05, 0.005);
    assert!((edge - 0.923094).abs() < 1e-6, "{edge}");
    assert!((half - 0.960644).abs() < 1e-6, "{half}");
    // Cavity loss dominates the budget: at gamma_c = kappa_a = 0.01 the
    // fidelity is just under 0.97.
    let tight = f(0.01, 0.01);
    assert!((0.965..0.975).contains(&tight), "{tight}");
}

#[test]
fn decay_only_feeds_the_sinks() {
    let params = SystemParams::unit(8.0).unwrap().with_decay(0.1, 0.2, 0.05).unwrap();
    let times: Vec<f64> = (0..=60).map(|k| 3.0 * T_STAR * k as f64 / 60.0).collect();
    let config = IntegratorConfig::default_for(&params, 3.0 * T_STAR).unwrap();
    let traj = evolve_open(
        &build_exact(&params),
        &build_channels(&params),
        &ground_rho(),
        &config,
        &times,
    )
    .unwrap();
    let mut last_sink = 0.0;
    for rho in traj.densities().unwrap() {
        let p = rho.populations();
        let total: f64 = p.iter().sum();
        assert!((total - 1.0).abs() < 1e-10);
        let sink = p[pos::SINK[0]] + p[pos::SINK[1]];
        assert!(sink >= last_sink - 1e-12, "sink population must not decrease");
        // Both chains are driven symmetrically, so the sinks fill equally.
        assert!((p[pos::SINK[0]] - p[pos::SINK[1]]).abs() < 1e-10);
        // No coherence ever forms between the excited manifold and the sinks.
        for s in pos::SINK {
            for k in 0..9 {
                assert!(rho.entries()[(s, k)].norm() < 1e-10);
            }
        }
        last_sink = sink;
    }
    assert!(last_sink > 0.1);
}

#[test]
fn fibre_loss_starts_with_zero_slope() {
    // The fibre starts empty, so fibre loss cannot act at first order.
    let params = SystemParams::unit(3.0).unwrap().with_decay(0.0, 1.0, 0.0).unwrap();
    let h = 1e-3;
    let config = IntegratorConfig::default_for(&params, h).unwrap();
    let traj = evolve_open(
        &build_exact(&params),
        &build_channels(&params),
        &ground_rho(),
        &config,
        &[h],
    )
    .unwrap();
    let p = traj.densities().unwrap()[0].populations();
    let sink = p[pos::SINK[0]] + p[pos::SINK[1]];
    assert!(sink < 1e-9, "{sink}");
}

#[test]
fn figure_four_points_converge_under_halving() {
    let spec = preset("fig4").unwrap().spec;
    let times = spec.times().unwrap();
    for &gamma_c in &spec.gamma_c_values {
        for &kappa_a in &spec.kappa_a_values {
            let params = SystemParams::new(1.0, spec.nu_values[0])
                .unwrap()
                .with_decay(gamma_c, 0.0, kappa_a)
                .unwrap();
            let config = IntegratorConfig::default_for(&params, spec.t_max).unwrap();
            let traj = evolve_open(
                &build_exact(&params),
                &build_channels(&params),
                &ground_rho(),
                &config,
                &times,
            )
            .unwrap();
            let d = traj.diagnostics().unwrap();
            assert!(d.final_change < 1e-8, "gamma_c={gamma_c} kappa_a={kappa_a}: {d:?}");
            assert!(d.halvings >= 1);
        }
    }
}

#[test]
fn times_beyond_configured_horizon_are_rejected() {
    let params = SystemParams::unit(3.0).unwrap();
    let config = IntegratorConfig::default_for(&params, 1.0).unwrap();
    let err = evolve_open(
        &build_exact(&params),
        &build_channels(&params),
        &ground_rho(),
        &config,
        &[0.5, 2.0],
    );
    assert!(err.is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn random_rates_match_oracle(
        nu_sq in 1.0f64..50.0,
        gamma_f in 0.0f64..0.5,
        gamma_c in 0.0f64..0.5,
        kappa_a in 0.0f64..0.5,
        t in 0.1f64..4.0,
    ) {
        let params = SystemParams::unit(nu_sq).unwrap().with_decay(gamma_c, gamma_f, kappa_a).unwrap();
        let config = IntegratorConfig::default_for(&params, t).unwrap();
        let traj = evolve_open(&build_exact(&params), &build_channels(&params), &ground_rho(), &config, &[t]).unwrap();
        let rho = &traj.densities().unwrap()[0];
        let oracle = expm_evolve(&params, &ground_rho(), t);
        prop_assert!(max_diff(rho.entries(), &oracle) < 1e-7);
        prop_assert!(rho.min_eigenvalue() > -1e-8);
    }
}
