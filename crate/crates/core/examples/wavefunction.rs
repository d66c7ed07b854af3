//! The displaced ground state ψ(x, t) for one field realization: its density is
//! the rigid Gaussian φ₀²(x − q_c) while the phase carries p_c + eA/c.

use sedlab::observables::{uniform_grid, ClassicalPath, PathSource};
use sedlab::{sample_modes, GridStrategy, OscillatorParams, SpectrumKind, SusceptibilityVariant};

fn main() -> sedlab::Result<()> {
    let p = OscillatorParams::reduced(1e-2)?;
    let kind = SpectrumKind::ZeroPoint;
    let ens = sample_modes(kind, &p, 1024, GridStrategy::default_for(kind, &p), 9)?;
    let path = ClassicalPath::build(
        &ens,
        &p,
        PathSource::Stationary(SusceptibilityVariant::Exact),
        20.0,
        Some(0.05),
    )?;
    let x = uniform_grid(-8.0, 8.0, 801);

    println!(
        "{:>8} {:>10} {:>12} {:>12} {:>10} {:>10}",
        "t", "q_c", "p_c + eA/c", "g", "<x>", "norm"
    );
    for k in (0..path.len()).step_by(50) {
        let psi = path.wavefunction_at(k, &x, &p)?;
        let h = x[1] - x[0];
        let mean_x: f64 = psi
            .density()
            .iter()
            .zip(&x)
            .map(|(d, x)| d * x)
            .sum::<f64>()
            * h;
        println!(
            "{:>8.2} {:>10.5} {:>12.5} {:>12.5} {:>10.5} {:>10.8}",
            psi.t, psi.center, psi.kinetic_phase, psi.g, mean_x, psi.norm
        );
    }
    Ok(())
}
