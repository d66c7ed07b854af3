//! The thermal position density P_T(x) against a Monte Carlo average of
//! |ψ(x)|² over thermal-field realizations.

use sedlab::montecarlo::density_estimate;
use sedlab::observables::{thermal_density, thermal_density_variance, uniform_grid};
use sedlab::{run_ensemble, Bath, RunConfig};

fn main() -> sedlab::Result<()> {
    for theta in [0.0, 0.5, 2.0] {
        println!(
            "θ = {theta}: variance (1/2)coth(1/2θ) = {:.6}",
            thermal_density_variance(theta)?
        );
    }

    let theta = 1.0;
    let cfg = RunConfig {
        kind: Bath::Thermal,
        theta,
        gamma_ratio: 1e-2,
        n_modes: 1024,
        realizations: 2000,
        seed: 5,
        estimators: vec![],
        ..RunConfig::default()
    };
    let out = run_ensemble(&cfg)?;
    let x = uniform_grid(-4.0, 4.0, 17);
    let mc = density_estimate(&out.samples, &x)?;
    println!("\nθ = {theta}, {} realizations", cfg.realizations);
    println!("{:>6} {:>12} {:>12} {:>10}", "x", "P_T", "MC", "SE");
    for (x, (mean, se)) in x.iter().zip(mc) {
        println!(
            "{x:>6.2} {:>12.6} {mean:>12.6} {se:>10.6}",
            thermal_density(*x, theta)?
        );
    }
    Ok(())
}
