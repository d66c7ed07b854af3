//! Thermal radiation alone gives the Planck part of ⟨x²⟩; adding the
//! ground-state width recovers (1/2)coth(1/2θ).

use sedlab::observables::{mean_square_x, Route};
use sedlab::{QuadSpec, SpectrumKind};

fn main() -> sedlab::Result<()> {
    let g = 1e-3;
    let route = Route::Quadrature(QuadSpec::default());
    println!(
        "{:>10} {:>14} {:>14} {:>12}",
        "θ", "<x²>", "coth/2", "rel. diff"
    );
    for theta in [0.1, 0.5, 1.0 / 3f64.ln(), 1.0, 2.0, 10.0] {
        let x2 = mean_square_x(SpectrumKind::Thermal { theta }, g, route)?;
        let target = 0.5 / (0.5 / theta).tanh();
        println!(
            "{theta:>10.6} {x2:>14.10} {target:>14.10} {:>12.2e}",
            (x2 - target) / target
        );
    }

    // Zero-point plus thermal double-counts the ground state again.
    let both = mean_square_x(SpectrumKind::ZeroPointPlusThermal { theta: 1.0 }, g, route)?;
    println!("\nzero-point + thermal at θ = 1: <x²> = {both:.10}");
    Ok(())
}
