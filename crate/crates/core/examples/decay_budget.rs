//! F3(t*) over a grid of cavity and atomic decay rates at `nu^2 = 399`.
//!
//! Shows which `(gamma_c, kappa_a)` pairs keep the fidelity above 0.97.

use fibrelink::basis::DIM;
use fibrelink::dynamics::{build_channels, evolve_open, IntegratorConfig};
use fibrelink::experiments::T_STAR;
use fibrelink::hamiltonian::build_exact;
use fibrelink::observables::fidelity_f3;
use fibrelink::state::{pure_density, StateVector};
use fibrelink::SystemParams;

fn f3_at_t_star(gamma_c: f64, kappa_a: f64) -> fibrelink::Result<f64> {
    let params = SystemParams::unit(399.0)?.with_decay(gamma_c, 0.0, kappa_a)?;
    let config = IntegratorConfig::default_for(&params, T_STAR)?;
    let rho0 = pure_density(&StateVector::basis(DIM, 0))?;
    let traj = evolve_open(
        &build_exact(&params),
        &build_channels(&params),
        &rho0,
        &config,
        &[T_STAR],
    )?;
    fidelity_f3(&traj.densities().unwrap()[0])
}

fn main() -> fibrelink::Result<()> {
    let gamma_c = [0.0, 0.005, 0.01, 0.02, 0.05, 0.1];
    let kappa_a = [0.0, 0.0025, 0.005, 0.01];
    print!("{:>14}", "gamma_c\\kappa_a");
    for k in kappa_a {
        print!(" {k:>9}");
    }
    println!();
    for g in gamma_c {
        print!("{g:>15}");
        for k in kappa_a {
            let f = f3_at_t_star(g, k)?;
            let mark = if f > 0.97 { '*' } else { ' ' };
            print!(" {f:>8.5}{mark}");
        }
        println!();
    }
    println!("\n* marks F3(t*) > 0.97");
    Ok(())
}
