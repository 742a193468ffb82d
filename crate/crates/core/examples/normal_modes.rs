//! Spectrum of the exact Hamiltonian and its normal-mode structure.
//!
//! The driven frequencies are `0`, `±√2 λ` and `±√2 λ √(1 + ν²/λ²)`; the
//! fibre is empty at `t*` when the fast and slow ones realign, which
//! happens for `ν² = n² - 1` with even `n`.

use fibrelink::analytic::{driven_frequencies, entanglement_time, resonance_ratio};
use fibrelink::basis::DIM;
use fibrelink::dynamics::Propagator;
use fibrelink::hamiltonian::build_exact;
use fibrelink::observables::fidelity_f1;
use fibrelink::state::StateVector;
use fibrelink::SystemParams;

fn main() -> fibrelink::Result<()> {
    let params = SystemParams::unit(8.0)?;
    let prop = Propagator::new(build_exact(&params))?;
    let mut eig: Vec<f64> = prop.eigenvalues().iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    println!("nu^2 = 8 eigenvalues: {eig:.5?}");
    println!("driven frequencies:   {:.5?}", driven_frequencies(1.0, params.nu()));
    println!("reconstruction error: {:.2e}\n", prop.reconstruction_error());

    let t_star = entanglement_time(1.0, 1)?;
    let psi0 = StateVector::basis(DIM, 0);
    println!("{:>3} {:>10} {:>12}", "n", "nu/lambda", "F1(t*)");
    for n in [2, 4, 6, 8, 20] {
        let nu = resonance_ratio(n)?;
        let prop = Propagator::new(build_exact(&SystemParams::new(1.0, nu)?))?;
        println!(
            "{n:>3} {nu:>10.5} {:>12.9}",
            fidelity_f1(&prop.propagate(&psi0, t_star)?)?
        );
    }
    Ok(())
}
