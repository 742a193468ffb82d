//! Lindblad evolution with the experimental decay rates.
//!
//! `lambda/2π = 750 MHz`, `kappa_a/2π = 2.62 MHz`, `gamma_c/2π = 3.5 MHz`
//! and `nu^2 = 399`, with rates in units of `lambda`.

use fibrelink::basis::{pos, DIM};
use fibrelink::dynamics::{build_channels, evolve_open, steady_trace_check, IntegratorConfig};
use fibrelink::experiments::{time_grid, T_STAR};
use fibrelink::hamiltonian::build_exact;
use fibrelink::observables::fidelity_f3;
use fibrelink::state::{pure_density, StateVector};
use fibrelink::SystemParams;

fn main() -> fibrelink::Result<()> {
    let params = SystemParams::unit(399.0)?.with_decay(3.5 / 750.0, 0.0, 2.62 / 750.0)?;
    let channels = build_channels(&params);
    for ch in channels.iter().filter(|c| c.rate > 0.0) {
        println!("channel {:<9} rate {:.6}", ch.label.to_string(), ch.rate);
    }

    let times = time_grid(T_STAR, 11)?;
    let config = IntegratorConfig::default_for(&params, T_STAR)?;
    let rho0 = pure_density(&StateVector::basis(DIM, 0))?;
    let traj = evolve_open(&build_exact(&params), &channels, &rho0, &config, &times)?;

    println!("\n{:>8} {:>10} {:>10} {:>10}", "t", "F3", "sinks", "purity");
    for (&t, rho) in times.iter().zip(traj.densities().unwrap()) {
        let p = rho.populations();
        let sinks = p[pos::SINK[0]] + p[pos::SINK[1]];
        println!(
            "{t:>8.4} {:>10.6} {sinks:>10.6} {:>10.6}",
            fidelity_f3(rho)?,
            rho.purity()
        );
    }

    let d = traj.diagnostics().unwrap();
    println!(
        "\nstep {:.3e} after {} halvings, {} steps, last change {:.2e}",
        d.dt_used, d.halvings, d.steps, d.final_change
    );
    let report = steady_trace_check(&traj)?;
    println!(
        "trace dev {:.2e}, hermiticity dev {:.2e}, min eigenvalue {:.2e}",
        report.max_trace_deviation, report.max_hermiticity_deviation, report.min_eigenvalue
    );
    Ok(())
}
