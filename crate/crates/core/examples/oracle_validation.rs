//! The release checks behind `fibrelink validate`, plus a direct
//! comparison of the numerical propagator with the closed-form amplitudes.

use fibrelink::analytic::exact_amplitudes;
use fibrelink::basis::DIM;
use fibrelink::dynamics::Propagator;
use fibrelink::experiments::run_checks;
use fibrelink::hamiltonian::build_exact;
use fibrelink::state::StateVector;
use fibrelink::SystemParams;

fn main() -> fibrelink::Result<()> {
    let nu_sq = 24.0;
    let params = SystemParams::unit(nu_sq)?;
    let prop = Propagator::new(build_exact(&params))?;
    let psi0 = StateVector::basis(DIM, 0);
    println!("nu^2 = {nu_sq}: propagator vs closed form");
    for t in [0.5, 1.0, 2.0, 4.0] {
        let psi = prop.propagate(&psi0, t)?;
        let oracle = exact_amplitudes(1.0, params.nu(), t);
        let err = (0..9).map(|k| (psi[k] - oracle.d(k + 1)).norm()).fold(0.0, f64::max);
        println!(
            "  t = {t:<4} d1 = {:+.6} {:+.6}i  max error {err:.2e}",
            oracle.d(1).re,
            oracle.d(1).im
        );
    }

    println!();
    let results = run_checks(None);
    for r in &results {
        println!("{r}");
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} checks, {failed} failed", results.len());
    Ok(())
}
