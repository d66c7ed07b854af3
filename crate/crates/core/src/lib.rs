//! A laboratory for the nonrelativistic charged harmonic oscillator driven by
//! classical random radiation (zero-point and thermal) and damped by radiation
//! reaction.
//!
//! Every stationary quantity is available by three independent routes:
//! closed forms, adaptive quadrature of the spectral integrals, and Monte Carlo
//! averages over random-phase mode ensembles. Internally everything runs in
//! reduced units `ħ = m = ω₀ = c = k = 1`, so that the only free parameters are
//! the damping ratio `γ̃ = γ/ω₀` and the temperature `θ = kT/ħω₀`.
//!
//! The modules build on one another:
//!
//! * [`model`]: physical and reduced parameters.
//! * [`spectra`]: spectral densities of the radiation baths.
//! * [`fieldgen`]: random-phase mode ensembles, the driving field and vector potential.
//! * [`response`]: susceptibility, stationary and integrated center trajectories, variances.
//! * [`observables`]: wavefunction, position moments, thermal density, commutator.
//! * [`montecarlo`]: seeded ensemble runs with error bars.
//! * [`cli`]: the `sedlab` command line.

// `!(x > 0.0)` is the idiom used throughout to reject NaN along with bad values;
// quadrature nodes and reference constants keep their full tabulated digits.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod cli;
pub mod error;
pub mod fieldgen;
pub mod model;
pub mod montecarlo;
pub mod observables;
pub mod output;
pub mod quadrature;
pub mod response;
pub mod spectra;

pub use error::{Error, Result};
pub use fieldgen::{sample_modes, GridStrategy, Mode, ModeEnsemble};
pub use model::{reduce, restore, OscillatorParams, ReducedParams};
pub use montecarlo::{run_ensemble, EnsembleOutcome, EstimateSet, RunConfig};
pub use observables::VarianceReport;
pub use quadrature::{Lineshape, QuadSpec};
pub use response::{Susceptibility, SusceptibilityVariant, Trajectory};
pub use spectra::{Bath, SpectrumKind};
