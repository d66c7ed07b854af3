//! |[x, p]| computed from the field correlations of the stationary solution.

use sedlab::observables::{commutator_integral, commutator_physical};
use sedlab::{OscillatorParams, QuadSpec};

fn main() -> sedlab::Result<()> {
    println!("{:>8} {:>14} {:>14}", "γ̃", "resonant", "full");
    for g in [1e-4, 1e-3, 1e-2, 1e-1] {
        let resonant = commutator_integral(g, &QuadSpec::default())?;
        let full = commutator_integral(g, &QuadSpec::exact())?;
        println!("{g:>8.0e} {resonant:>14.10} {full:>14.10}");
    }

    // Gaussian units: an electron bound at an optical frequency.
    let p = OscillatorParams::new(
        9.109_383_7e-28,
        3.0e15,
        4.803_204_7e-10,
        1.054_571_817e-27,
        2.997_924_58e10,
        1.380_649e-16,
    )?;
    println!("\nelectron at ω₀ = 3e15 rad/s: γ̃ = {:.3e}", p.gamma_ratio());
    println!(
        "|[x,p]| = {:.6e} erg·s (ħ = {:.6e})",
        commutator_physical(&p, &QuadSpec::default())?,
        p.hbar()
    );
    Ok(())
}
