//! The zero-point bath alone already supplies the full ground-state spread of
//! the center coordinate, so adding the ground-state width of ψ doubles ⟨x²⟩.

use sedlab::observables::{mean_square_x, Route};
use sedlab::response::{variance_closed_form, variance_quadrature, variance_series};
use sedlab::{QuadSpec, SpectrumKind};

fn main() -> sedlab::Result<()> {
    println!(
        "{:>8} {:>14} {:>14} {:>14} {:>10}",
        "γ̃", "<q²> closed", "<q²> quad", "<x²>", "ratio"
    );
    for g in [1e-10, 1e-4, 1e-3, 1e-2, 1e-1] {
        let closed = variance_closed_form(SpectrumKind::ZeroPoint, g)?;
        let quad = variance_quadrature(SpectrumKind::ZeroPoint, g, &QuadSpec::default())?;
        let x2 = mean_square_x(SpectrumKind::ZeroPoint, g, Route::Closed)?;
        println!(
            "{g:>8.0e} {closed:>14.10} {quad:>14.10} {x2:>14.10} {:>10.6}",
            x2 / 0.5
        );
    }

    println!("\nsmall-γ̃ expansion at γ̃ = 1e-2:");
    for order in 0..=3 {
        println!("  order {order}: {:.16}", variance_series(1e-2, order)?);
    }

    // Keeping the full radiation-reaction denominator adds a γ̃ ln(1/γ̃) tail.
    let exact = variance_quadrature(SpectrumKind::ZeroPoint, 1e-3, &QuadSpec::exact())?;
    println!("\nfull lineshape at γ̃ = 1e-3: <q²> = {exact:.12}");
    Ok(())
}
