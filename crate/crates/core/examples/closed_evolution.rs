//! Lossless evolution of the full 11-state model from `|e>_A`.
//!
//! With `nu^2 = 3` the fibre photon is fully reabsorbed at `t*`, so the
//! atoms end in `(|g-1,e-1> + |g+1,e+1>)/√2` with unit fidelity.
//!
//! ```text
//! cargo run --example closed_evolution [nu_sq]
//! ```

use fibrelink::basis::{enumerate_basis, DIM, LABELS};
use fibrelink::dynamics::evolve_closed;
use fibrelink::experiments::{time_grid, T_STAR};
use fibrelink::hamiltonian::build_exact;
use fibrelink::observables::fidelity_f1;
use fibrelink::state::StateVector;
use fibrelink::SystemParams;

fn main() -> fibrelink::Result<()> {
    let nu_sq: f64 = std::env::args()
        .nth(1)
        .map_or(Ok(3.0), |s| s.parse())
        .expect("nu_sq must be a number");
    let params = SystemParams::unit(nu_sq)?;
    let h = build_exact(&params);
    println!("H (nu^2 = {nu_sq}):\n{h}");

    let times = time_grid(T_STAR, 9)?;
    let traj = evolve_closed(&h, &StateVector::basis(DIM, 0), &times)?;
    print!("{:>8} {:>10}", "t", "F1");
    for label in &LABELS[..9] {
        print!(" {label:>7}");
    }
    println!();
    for (&t, psi) in times.iter().zip(traj.states().unwrap()) {
        print!("{t:>8.4} {:>10.6}", fidelity_f1(psi)?);
        for p in &psi.probabilities()[..9] {
            print!(" {p:>7.4}");
        }
        println!();
    }

    println!("\nbasis:");
    for (label, state) in LABELS.iter().zip(enumerate_basis()) {
        println!("  {label:>3} = {state}");
    }
    Ok(())
}
