//! Quantum-mechanical observables of the driven oscillator.
//!
//! In the long-wavelength approximation the Schrödinger equation
//!
//! ```text
//! iħ ∂ψ/∂t = [(−iħ∂ₓ − (e/c)A(t))²/2m + mω₀²x²/2] ψ
//! ```
//!
//! has the exact solution
//!
//! ```text
//! ψ(x,t) = φ₀(x − q(t)) exp{(i/ħ)[(p(t) + (e/c)A(t))x − g(t)]},
//! g(t)   = ħω₀t/2 + (m/2)∫₀ᵗ (q̇² − ω₀²q²) dt′,
//! ```
//!
//! whenever `(q, p = mq̇)` obeys the classical equation of motion with
//! `−(1/c)dA/dt` as the total field. The center `q` therefore carries the field
//! fluctuations, while `φ₀` carries ħ/2mω₀ of spread on its own.
//!
//! Position moments, the characteristic function and the thermal density are
//! given in reduced units (lengths in `√(ħ/mω₀)`), except where a function takes
//! an [`OscillatorParams`].

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fieldgen::{field_at, vector_potential_at, ModeEnsemble};
use crate::model::{check_gamma_ratio, check_theta, OscillatorParams};
use crate::output::Table;
use crate::quadrature::{integrate, Lineshape, QuadSpec};
use crate::response::{
    exact_denominator, integrate_trajectory, resonance_breaks, variance_closed_form,
    variance_quadrature, IntegrationSpec, Scheme, StationaryResponse, SusceptibilityVariant,
    Transient,
};
use crate::spectra::{coth, SpectrumKind};

/// Tolerance on the grid normalization `Σ|ψ|²Δx`.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;

/// Oscillator ground state `φ₀(x) = (mω₀/πħ)^{1/4} exp(−mω₀x²/2ħ)`.
pub fn ground_gaussian(x: f64, p: &OscillatorParams) -> f64 {
    let alpha = p.mass() * p.natural_frequency() / p.hbar();
    (alpha / PI).powf(0.25) * (-0.5 * alpha * x * x).exp()
}

/// Where the classical center `(q, p)` comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathSource {
    /// The stationary solution, evaluated in closed form at each time.
    Stationary(SusceptibilityVariant),
    /// The order-reduced equation of motion integrated from rest at `t = 0`.
    Integrated(Scheme),
}

impl Default for PathSource {
    fn default() -> Self {
        PathSource::Stationary(SusceptibilityVariant::Exact)
    }
}

/// Classical center, vector potential and phase on a uniform time grid starting at 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassicalPath {
    pub source: PathSource,
    pub times: Vec<f64>,
    pub q: Vec<f64>,
    pub p: Vec<f64>,
    /// Total `A(t)`: bath part plus radiation-reaction part.
    pub vector_potential: Vec<f64>,
    pub g: Vec<f64>,
}

impl ClassicalPath {
    /// Samples `[0, t_end]` with step at most `dt` (default `2π/(100·ω_hi)`).
    pub fn build(
        ens: &ModeEnsemble,
        p: &OscillatorParams,
        source: PathSource,
        t_end: f64,
        dt: Option<f64>,
    ) -> Result<Self> {
        if !(t_end >= 0.0 && t_end.is_finite()) {
            return Err(Error::invalid(
                "t",
                format!("must be finite and >= 0, got {t_end}"),
            ));
        }
        let fastest = p.natural_frequency().max(ens.max_frequency());
        let dt_max = dt.unwrap_or(2.0 * PI / (100.0 * fastest));
        if !(dt_max > 0.0) {
            return Err(Error::invalid("dt", format!("must be > 0, got {dt_max}")));
        }
        let steps = (t_end / dt_max).ceil().max(1.0) as usize;
        let dt = t_end / steps as f64;
        let coupling = 2.0 * p.charge() / (3.0 * p.light_speed().powi(2));
        let w0sq = p.natural_frequency().powi(2);
        let e_over_m = p.charge() / p.mass();

        let (times, q, mom, a_rr): (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>) = match source {
            PathSource::Stationary(variant) => {
                let response = StationaryResponse::new(ens, p, variant)?;
                let mut out = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
                for k in 0..=steps {
                    let t = if t_end == 0.0 { 0.0 } else { k as f64 * dt };
                    let d = response.derivatives(t);
                    out.0.push(t);
                    out.1.push(d[0]);
                    out.2.push(p.mass() * d[1]);
                    // −(2e/3c²) q̈: antiderivative of the τ d³q/dt³ field term.
                    out.3.push(-coupling * d[2]);
                    if t_end == 0.0 {
                        break;
                    }
                }
                out
            }
            PathSource::Integrated(scheme) => {
                if t_end == 0.0 {
                    let e0 = field_at(ens, 0.0);
                    (
                        vec![0.0],
                        vec![0.0],
                        vec![0.0],
                        vec![-coupling * e_over_m * e0],
                    )
                } else {
                    let spec = IntegrationSpec {
                        t_start: 0.0,
                        t_end,
                        dt: Some(dt),
                        scheme,
                        initial_position: 0.0,
                        initial_momentum: 0.0,
                        transient: Transient::None,
                        stride: 1,
                    };
                    let traj = integrate_trajectory(ens, p, &spec)?;
                    // −(2e/3c²)(−ω₀²q + (e/m)E): antiderivative of the order-reduced field term.
                    let a_rr = traj
                        .times
                        .iter()
                        .zip(&traj.q)
                        .map(|(&t, &q)| -coupling * (-w0sq * q + e_over_m * field_at(ens, t)))
                        .collect();
                    (traj.times, traj.q, traj.p, a_rr)
                }
            }
        };

        let mut vector_potential = Vec::with_capacity(times.len());
        for (&t, rr) in times.iter().zip(&a_rr) {
            vector_potential.push(vector_potential_at(ens, p, t)? + rr);
        }

        let lagrangian = |q: f64, mom: f64| {
            let v = mom / p.mass();
            0.5 * p.hbar() * p.natural_frequency() + 0.5 * p.mass() * (v * v - w0sq * q * q)
        };
        let mut g = Vec::with_capacity(times.len());
        g.push(0.0);
        for k in 1..times.len() {
            let h = times[k] - times[k - 1];
            let step = 0.5 * h * (lagrangian(q[k - 1], mom[k - 1]) + lagrangian(q[k], mom[k]));
            g.push(g[k - 1] + step);
        }

        Ok(Self {
            source,
            times,
            q,
            p: mom,
            vector_potential,
            g,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Wavefunction at the `k`-th sample time.
    pub fn wavefunction_at(
        &self,
        k: usize,
        xgrid: &[f64],
        p: &OscillatorParams,
    ) -> Result<WavefunctionSample> {
        let t = *self
            .times
            .get(k)
            .ok_or_else(|| Error::invalid("k", format!("path has {} samples", self.len())))?;
        let kinetic = self.p[k] + p.charge() / p.light_speed() * self.vector_potential[k];
        WavefunctionSample::new(xgrid, t, self.q[k], kinetic, self.g[k], p)
    }
}

/// `ψ(x,t)` on a position grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WavefunctionSample {
    pub x: Vec<f64>,
    pub psi: Vec<Complex64>,
    pub t: f64,
    pub center: f64,
    /// `p + (e/c)A`.
    pub kinetic_phase: f64,
    pub g: f64,
    /// `Σ|ψ|²Δx` (trapezoid weights).
    pub norm: f64,
}

impl WavefunctionSample {
    fn new(
        xgrid: &[f64],
        t: f64,
        center: f64,
        kinetic_phase: f64,
        g: f64,
        p: &OscillatorParams,
    ) -> Result<Self> {
        check_grid(xgrid)?;
        let hbar = p.hbar();
        let psi: Vec<Complex64> = xgrid
            .par_iter()
            .map(|&x| {
                let amplitude = ground_gaussian(x - center, p);
                Complex64::from_polar(amplitude, (kinetic_phase * x - g) / hbar)
            })
            .collect();
        let density: Vec<f64> = psi.iter().map(|z| z.norm_sqr()).collect();
        let norm = trapezoid(xgrid, &density);
        if (norm - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::GridTooCoarse {
                norm,
                tolerance: NORMALIZATION_TOLERANCE,
            });
        }
        Ok(Self {
            x: xgrid.to_vec(),
            psi,
            t,
            center,
            kinetic_phase,
            g,
            norm,
        })
    }

    pub fn density(&self) -> Vec<f64> {
        self.psi.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Columns `x, re_psi, im_psi, abs2`.
    pub fn to_table(&self) -> Table {
        let mut table = Table::new(["x", "re_psi", "im_psi", "abs2"]);
        for (x, z) in self.x.iter().zip(&self.psi) {
            table.push(vec![*x, z.re, z.im, z.norm_sqr()]);
        }
        table
    }
}

fn check_grid(xgrid: &[f64]) -> Result<()> {
    if xgrid.len() < 2 {
        return Err(Error::invalid("xgrid", "needs at least two points"));
    }
    if xgrid.windows(2).any(|w| !(w[1] > w[0])) || xgrid.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid(
            "xgrid",
            "must be finite and strictly increasing",
        ));
    }
    Ok(())
}

fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xw, yw)| 0.5 * (xw[1] - xw[0]) * (yw[0] + yw[1]))
        .sum()
}

/// `n` equally spaced points on `[lo, hi]`.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n.max(2) - 1) as f64;
    (0..n).map(|i| lo + i as f64 * step).collect()
}

/// Wavefunction at time `t` for the field realization `ens`, with the center
/// taken from `source`.
pub fn wavefunction(
    xgrid: &[f64],
    t: f64,
    ens: &ModeEnsemble,
    p: &OscillatorParams,
    source: PathSource,
) -> Result<WavefunctionSample> {
    let path = ClassicalPath::build(ens, p, source, t, None)?;
    path.wavefunction_at(path.len() - 1, xgrid, p)
}

/// How to evaluate `⟨q²⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Closed,
    Quadrature(QuadSpec),
}

/// `⟨x²⟩ = ħ/2mω₀ + ⟨q²⟩` in units of `ħ/mω₀`.
///
/// For the zero-point bath this is `≈ 1`, twice the quantum ground-state value
/// `1/2`: the field fluctuations are counted once by the operator algebra and
/// once more through the driven center. For the thermal bath it is
/// `(1/2)coth(1/2θ)`, the correct quantum result.
pub fn mean_square_x(kind: SpectrumKind, gamma_ratio: f64, route: Route) -> Result<f64> {
    let variance = match route {
        Route::Closed => variance_closed_form(kind, gamma_ratio)?,
        Route::Quadrature(quad) => variance_quadrature(kind, gamma_ratio, &quad)?,
    };
    Ok(0.5 + variance)
}

/// `⟨q^{2n}⟩ = (2n)!/(n!2ⁿ) σ^{2n}` for a centered Gaussian.
pub fn gaussian_moment(n: u32, variance: f64) -> f64 {
    // (2n)!/(n!2ⁿ) = (2n − 1)!!
    (1..=n).fold(1.0, |acc, j| acc * (2 * j - 1) as f64 * variance)
}

/// `⟨e^{ikq}⟩ = e^{−k²σ²/2}`.
pub fn characteristic_function(k: f64, variance: f64) -> Complex64 {
    Complex64::new((-0.5 * k * k * variance).exp(), 0.0)
}

/// The moment series `Σₙ (−1)ⁿ k^{2n} ⟨q^{2n}⟩/(2n)!`, stopped once a term drops
/// below `10⁻¹⁶` or after `max_terms` terms. Returns the sum and the number of terms used.
pub fn characteristic_function_series(k: f64, variance: f64, max_terms: u32) -> (Complex64, u32) {
    let mut term = 1.0;
    let mut sum = term;
    let mut used = 1;
    for n in 1..max_terms {
        // t_n / t_{n−1} = −k² (2n−1)σ² / ((2n)(2n−1))
        let two_n = 2.0 * n as f64;
        term *= -k * k * (two_n - 1.0) * variance / (two_n * (two_n - 1.0));
        sum += term;
        used += 1;
        if term.abs() < 1e-16 {
            break;
        }
    }
    (Complex64::new(sum, 0.0), used)
}

/// `coth(1/2θ)`, the thermal widening of `⟨x²⟩` relative to the ground state.
fn thermal_width(theta: f64) -> f64 {
    if theta == 0.0 {
        1.0
    } else {
        coth(0.5 / theta)
    }
}

/// Probability density at any temperature,
/// `P_T(x) = (π C)^{−1/2} exp(−x²/C)` with `C = coth(1/2θ)`; at θ = 0 it is `φ₀²`.
pub fn thermal_density(x: f64, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    let c = thermal_width(theta);
    // Squared amplitude, so that θ = 0 reproduces φ₀² bit for bit.
    let amplitude = (1.0 / (PI * c)).powf(0.25) * (-0.5 * x * x / c).exp();
    Ok(amplitude * amplitude)
}

/// Variance of [`thermal_density`]: `(1/2)coth(1/2θ)`.
pub fn thermal_density_variance(theta: f64) -> Result<f64> {
    check_theta(theta)?;
    Ok(0.5 * thermal_width(theta))
}

/// [`thermal_density`] at a physical position `x` (density per unit length).
pub fn thermal_density_physical(x: f64, theta: f64, p: &OscillatorParams) -> Result<f64> {
    let l = p.length_unit();
    Ok(thermal_density(x / l, theta)? / l)
}

/// Table with columns `x, density` on a uniform grid.
pub fn thermal_density_table(theta: f64, lo: f64, hi: f64, n: usize) -> Result<Table> {
    let mut table = Table::new(["x", "density"]);
    for x in uniform_grid(lo, hi, n) {
        table.push(vec![x, thermal_density(x, theta)?]);
    }
    Ok(table)
}

/// `|[x, p]|/ħ` from the field correlations:
/// `(e²/m)(8π/3) ∫₀^∞ ω ρ₀(ω) / ((ω² − ω₀²)² + τ²ω⁶) dω`, in reduced units
///
/// * exact: `(2γ̃/π) ∫ ω⁴ / ((ω² − 1)² + γ̃²ω⁶) dω`
/// * resonant: `(2γ̃/π) ∫ 1 / (4(ω − 1)² + γ̃²) dω`.
pub fn commutator_integral(gamma_ratio: f64, quad: &QuadSpec) -> Result<f64> {
    check_gamma_ratio(gamma_ratio)?;
    if gamma_ratio == 0.0 {
        return Err(Error::invalid("gamma_ratio", "must be > 0"));
    }
    let g = gamma_ratio;
    let breaks = resonance_breaks(g, quad.lineshape);
    let q = match quad.lineshape {
        Lineshape::Exact => {
            let f = |u: f64| 2.0 * g / PI * (1.0 + u).powi(4) / exact_denominator(u, g);
            integrate(
                f,
                &breaks,
                true,
                quad.rel_tol,
                quad.abs_tol,
                quad.max_intervals,
            )?
        }
        Lineshape::Resonant => {
            let f = |u: f64| 2.0 * g / PI / (4.0 * u * u + g * g);
            integrate(
                f,
                &breaks,
                true,
                quad.rel_tol,
                quad.abs_tol,
                quad.max_intervals,
            )?
        }
    };
    Ok(q.value)
}

/// [`commutator_integral`] in action units (scales linearly with ħ).
pub fn commutator_physical(p: &OscillatorParams, quad: &QuadSpec) -> Result<f64> {
    Ok(p.hbar() * commutator_integral(p.gamma_ratio(), quad)?)
}

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McValue {
    pub value: f64,
    pub standard_error: f64,
    pub samples: usize,
}

impl McValue {
    /// `(value − reference)/SE`; infinite if SE = 0 and they differ.
    pub fn z_score(&self, reference: f64) -> f64 {
        let diff = self.value - reference;
        if diff == 0.0 {
            0.0
        } else {
            diff / self.standard_error
        }
    }
}

/// One quantity by closed form, quadrature and (optionally) Monte Carlo.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarianceReport {
    pub label: String,
    pub description: String,
    pub gamma_ratio: f64,
    pub theta: Option<f64>,
    pub closed_form: f64,
    pub quadrature: f64,
    pub lineshape: Lineshape,
    pub monte_carlo: Option<McValue>,
    /// The quadrature restricted to the sampled band, the unbiased MC target.
    pub band_limited: Option<f64>,
    /// True when the MC estimate lies more than 4 SE from its reference.
    pub flagged: bool,
}

impl VarianceReport {
    /// `⟨q²⟩` by closed form and quadrature.
    pub fn center_variance(kind: SpectrumKind, gamma_ratio: f64, quad: &QuadSpec) -> Result<Self> {
        Ok(Self {
            label: "<q_c^2>".into(),
            description: format!("center variance, {kind} bath [ħ/mω₀]"),
            gamma_ratio,
            theta: kind.theta(),
            closed_form: variance_closed_form(kind, gamma_ratio)?,
            quadrature: variance_quadrature(kind, gamma_ratio, quad)?,
            lineshape: quad.lineshape,
            monte_carlo: None,
            band_limited: None,
            flagged: false,
        })
    }

    /// `⟨x²⟩ = 1/2 + ⟨q²⟩` by closed form and quadrature.
    pub fn mean_square_x(kind: SpectrumKind, gamma_ratio: f64, quad: &QuadSpec) -> Result<Self> {
        let mut report = Self::center_variance(kind, gamma_ratio, quad)?;
        report.label = "<x^2>".into();
        report.description = format!("position second moment, {kind} bath [ħ/mω₀]");
        report.closed_form += 0.5;
        report.quadrature += 0.5;
        Ok(report)
    }

    /// Attaches a Monte Carlo estimate and flags it against `reference`
    /// (the band-limited value when given, else the quadrature).
    pub fn with_monte_carlo(mut self, mc: McValue, band_limited: Option<f64>) -> Self {
        let reference = band_limited.unwrap_or(self.quadrature);
        self.flagged = !(mc.z_score(reference).abs() <= 4.0);
        self.monte_carlo = Some(mc);
        self.band_limited = band_limited;
        self
    }

    /// Relative difference between the closed form and the quadrature.
    pub fn closed_vs_quadrature(&self) -> f64 {
        (self.quadrature - self.closed_form).abs() / self.closed_form.abs().max(f64::MIN_POSITIVE)
    }
}
