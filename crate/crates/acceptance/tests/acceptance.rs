//! Release gate: one PASS/FAIL line per criterion, nonzero exit if any fail.
//!
//! Runs without the libtest harness so every line is printed even when an
//! earlier criterion fails.

use std::f64::consts::{PI, SQRT_2};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::process::ExitCode;
use std::time::Instant;

use fibrelink::analytic::exact_amplitudes;
use fibrelink::basis::DIM;
use fibrelink::dynamics::{build_channels, evolve_closed, evolve_open, steady_trace_check, IntegratorConfig};
use fibrelink::experiments::sweep::write_sweep_csv;
use fibrelink::experiments::validate::effective_gap;
use fibrelink::experiments::{preset, run_sweep, T_STAR};
use fibrelink::hamiltonian::build_exact;
use fibrelink::observables::{fidelity_f1, fidelity_f3};
use fibrelink::state::{pure_density, StateVector};
use fibrelink::{Result, SystemParams};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { passed, detail })
}

/// Open-system F3 at `t*`, starting from `|e>_A`.
fn f3_at_t_star(nu_sq: f64, gamma_f: f64, gamma_c: f64, kappa_a: f64) -> Result<f64> {
    let params = SystemParams::unit(nu_sq)?.with_decay(gamma_c, gamma_f, kappa_a)?;
    let config = IntegratorConfig::default_for(&params, T_STAR)?;
    let rho0 = pure_density(&StateVector::basis(DIM, 0))?;
    let traj = evolve_open(
        &build_exact(&params),
        &build_channels(&params),
        &rho0,
        &config,
        &[0.0, T_STAR],
    )?;
    fidelity_f3(&traj.densities().unwrap()[1])
}

fn entanglement_condition() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for n in [2_i64, 4, 6] {
        let params = SystemParams::unit((n * n - 1) as f64)?;
        let times: Vec<f64> = [1.0, 3.0].iter().map(|m| m * PI / SQRT_2).collect();
        let traj = evolve_closed(&build_exact(&params), &StateVector::basis(DIM, 0), &times)?;
        for psi in traj.states().unwrap() {
            worst = worst.max((fidelity_f1(psi)? - 1.0).abs());
        }
    }
    outcome(worst <= 1e-8, format!("max |F1 - 1| = {worst:.3e} (<= 1e-8)"))
}

fn oracle_equivalence() -> Result<Outcome> {
    let times: Vec<f64> = (0..50).map(|k| 2.0 * T_STAR * k as f64 / 49.0).collect();
    let mut worst: f64 = 0.0;
    for nu_sq in [3.0, 8.0, 24.0, 120.0] {
        let params = SystemParams::unit(nu_sq)?;
        let traj = evolve_closed(&build_exact(&params), &StateVector::basis(DIM, 0), &times)?;
        for (&t, psi) in times.iter().zip(traj.states().unwrap()) {
            let oracle = exact_amplitudes(1.0, params.nu(), t);
            for k in 0..9 {
                worst = worst.max((psi[k] - oracle.d(k + 1)).norm());
            }
        }
    }
    outcome(worst <= 1e-6, format!("max amplitude error = {worst:.3e} (<= 1e-6)"))
}

fn effective_convergence() -> Result<Outcome> {
    let gaps = [8.0, 24.0, 80.0, 120.0]
        .iter()
        .map(|&nu_sq| effective_gap(nu_sq, 1001))
        .collect::<Result<Vec<_>>>()?;
    let monotone = gaps.windows(2).all(|w| w[1] < w[0]);
    let passed = gaps[3] <= 0.02 && gaps[0] > gaps[3] && monotone;
    outcome(
        passed,
        format!(
            "max|F1 - F2| at nu^2 = 8, 24, 80, 120: {:.4}, {:.4}, {:.4}, {:.4} (last <= 0.02, decreasing)",
            gaps[0], gaps[1], gaps[2], gaps[3]
        ),
    )
}

fn experimental_parameters() -> Result<Outcome> {
    let f = f3_at_t_star(399.0, 0.0, 3.5 / 750.0, 2.62 / 750.0)?;
    outcome((0.98..1.0).contains(&f), format!("F3(t*) = {f:.6} (in [0.98, 1))"))
}

fn decay_budget() -> Result<Outcome> {
    let edge = f3_at_t_star(399.0, 0.0, 0.1, 0.01)?;
    let inside = f3_at_t_star(399.0, 0.0, 0.05, 0.005)?;
    outcome(
        edge >= 0.965 && inside >= 0.97,
        format!("F3(t*) at budget edge = {edge:.6} (>= 0.965), at half budget = {inside:.6} (>= 0.97)"),
    )
}

fn fibre_loss_suppression() -> Result<Outcome> {
    let n2 = f3_at_t_star(3.0, 0.05, 0.0, 0.0)?;
    let n3 = f3_at_t_star(8.0, 0.05, 0.0, 0.0)?;
    let large = f3_at_t_star(120.0, 1.0, 0.0, 0.0)?;
    outcome(
        n2 > n3 && large >= 0.9,
        format!("gamma_f = 0.05: F3(nu^2=3) = {n2:.6} > F3(nu^2=8) = {n3:.6}; gamma_f = 1, nu^2 = 120: F3 = {large:.6} (>= 0.9)"),
    )
}

fn relative_sensitivity() -> Result<Outcome> {
    let atomic = f3_at_t_star(399.0, 0.0, 0.0, 0.01)?;
    let cavity = f3_at_t_star(399.0, 0.0, 0.01, 0.0)?;
    outcome(
        atomic < cavity,
        format!("F3(kappa_a = 0.01) = {atomic:.6} < F3(gamma_c = 0.01) = {cavity:.6}"),
    )
}

fn cptp_suite() -> Result<Outcome> {
    let rates = [0.0, 0.01, 0.1];
    let times: Vec<f64> = (0..=100).map(|k| 2.0 * T_STAR * k as f64 / 100.0).collect();
    let psi0 = StateVector::basis(DIM, 0);
    let rho0 = pure_density(&psi0)?;
    let (mut trace, mut herm, mut min_eig): (f64, f64, f64) = (0.0, 0.0, f64::INFINITY);
    let mut corner: f64 = 0.0;
    for &gamma_f in &rates {
        for &gamma_c in &rates {
            for &kappa_a in &rates {
                let params = SystemParams::unit(3.0)?.with_decay(gamma_c, gamma_f, kappa_a)?;
                let h = build_exact(&params);
                let config = IntegratorConfig::default_for(&params, 2.0 * T_STAR)?;
                let traj = evolve_open(&h, &build_channels(&params), &rho0, &config, &times)?;
                let report = steady_trace_check(&traj)?;
                trace = trace.max(report.max_trace_deviation);
                herm = herm.max(report.max_hermiticity_deviation);
                min_eig = min_eig.min(report.min_eigenvalue);
                if !params.has_decay() {
                    let closed = evolve_closed(&h, &psi0, &times)?;
                    for (psi, rho) in closed.states().unwrap().iter().zip(traj.densities().unwrap()) {
                        let expected = pure_density(psi)?;
                        let diff = (rho.entries() - expected.entries())
                            .iter()
                            .fold(0.0_f64, |m, z| m.max(z.norm()));
                        corner = corner.max(diff);
                    }
                }
            }
        }
    }
    let passed = trace < 1e-8 && herm < 1e-10 && min_eig >= -1e-6 && corner <= 1e-8;
    outcome(
        passed,
        format!(
            "27 points: trace dev = {trace:.2e} (< 1e-8), hermiticity dev = {herm:.2e} (< 1e-10), \
             min eigenvalue = {min_eig:.2e} (>= -1e-6), zero-rate vs closed = {corner:.2e} (<= 1e-8)"
        ),
    )
}

fn determinism() -> Result<Outcome> {
    let dir = tempfile::tempdir()?;
    let spec = preset("fig2").expect("built-in preset").spec;
    let mut outputs = Vec::new();
    for run in ["a.csv", "b.csv"] {
        let path = dir.path().join(run);
        let rows = run_sweep(&spec)?;
        let mut w = BufWriter::new(File::create(&path)?);
        write_sweep_csv(&rows, &mut w)?;
        w.flush()?;
        outputs.push(std::fs::read(&path)?);
    }
    outcome(
        outputs[0] == outputs[1] && !outputs[0].is_empty(),
        format!(
            "two fig2 sweeps, {} bytes each, identical = {}",
            outputs[0].len(),
            outputs[0] == outputs[1]
        ),
    )
}

fn main() -> ExitCode {
    type Criterion = fn() -> Result<Outcome>;
    let criteria: [(&str, Criterion); 9] = [
        ("maximal-entanglement condition", entanglement_condition),
        ("oracle equivalence", oracle_equivalence),
        ("effective-model convergence", effective_convergence),
        ("experimental-parameter fidelity", experimental_parameters),
        ("decay budget", decay_budget),
        ("fibre-loss suppression", fibre_loss_suppression),
        ("atomic vs cavity decay sensitivity", relative_sensitivity),
        ("CPTP property suite", cptp_suite),
        ("sweep determinism", determinism),
    ];
    let mut failures = 0;
    for (idx, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (passed, detail) = match run() {
            Ok(o) => (o.passed, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let secs = start.elapsed().as_secs_f64();
        let verdict = if passed { "PASS" } else { "FAIL" };
        println!("criterion {} {verdict} {name}: {detail} [{secs:.2} s]", idx + 1);
        failures += usize::from(!passed);
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
