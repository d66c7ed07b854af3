//! A full ensemble run: variance, Gaussian moments, characteristic function and
//! a χ² test of the center-coordinate distribution.

use sedlab::montecarlo::Sampling;
use sedlab::{run_ensemble, Bath, RunConfig};

fn main() -> sedlab::Result<()> {
    let cfg = RunConfig {
        gamma_ratio: 2e-2,
        kind: Bath::ZeroPoint,
        n_modes: 2048,
        realizations: 400,
        seed: 2024,
        sampling: Sampling::TimeAverage {
            start: 0.0,
            span: 2000.0,
            samples: 16,
        },
        ..RunConfig::default()
    };
    let out = run_ensemble(&cfg)?;
    let est = &out.estimates;

    for r in &out.reports {
        let mc = r.monte_carlo.expect("variance estimator is on");
        println!(
            "{:<8} closed {:.5}  quadrature {:.5}  band-limited {:.5}  MC {:.5} ± {:.5}",
            r.label,
            r.closed_form,
            r.quadrature,
            r.band_limited.unwrap_or(f64::NAN),
            mc.value,
            mc.standard_error
        );
    }
    println!(
        "effective samples: {:.0}",
        est.variance.as_ref().unwrap().effective_samples
    );

    println!("\nmoments vs (2n)!/(n!2ⁿ)σ^{{2n}}:");
    for m in &est.moments {
        println!(
            "  {:<9} {:>10.5} ± {:.5}  ref {:.5}",
            m.name,
            m.value,
            m.standard_error,
            m.reference.unwrap()
        );
    }
    println!("characteristic function:");
    for c in &est.characteristic {
        println!(
            "  k = {:<4} Re {:.5} ± {:.5}  ref {:.5}",
            c.k,
            c.real.value,
            c.real.standard_error,
            c.real.reference.unwrap()
        );
    }
    if let Some(chi) = &est.chi_square {
        println!(
            "χ² = {:.1} on {} dof, p = {:.3}",
            chi.statistic, chi.dof, chi.p_value
        );
    }
    println!("flagged: {:?}", est.flagged());
    Ok(())
}
