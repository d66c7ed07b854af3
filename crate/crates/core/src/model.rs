//! Physical parameters of the charged oscillator and the reduced unit system.
//!
//! All heavy computations in this crate run in reduced units where
//! `ħ = m = ω₀ = c = k = 1`. In those units the radiation-reaction time
//! `τ = 2e²/3mc³` equals the damping ratio `γ̃ = γ/ω₀`, so the charge is
//! `e = √(3γ̃/2)`. Results are in units of `ħ/mω₀` for squared lengths and
//! can be restored with [`OscillatorParams::length_unit`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper bound on `γ/ω₀` for the nonrelativistic treatment to be trusted.
pub const DEFAULT_VALIDITY_BOUND: f64 = 1e-2;

/// Physical constants of the oscillator in any consistent (Gaussian-style) unit system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorParams {
    mass: f64,
    natural_frequency: f64,
    charge: f64,
    hbar: f64,
    light_speed: f64,
    boltzmann: f64,
    validity_bound: f64,
}

fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            name,
            format!("must be finite and > 0, got {value}"),
        ))
    }
}

impl OscillatorParams {
    pub fn new(
        mass: f64,
        natural_frequency: f64,
        charge: f64,
        hbar: f64,
        light_speed: f64,
        boltzmann: f64,
    ) -> Result<Self> {
        require_positive("mass", mass)?;
        require_positive("natural_frequency", natural_frequency)?;
        require_positive("hbar", hbar)?;
        require_positive("light_speed", light_speed)?;
        require_positive("boltzmann", boltzmann)?;
        if !charge.is_finite() {
            return Err(Error::invalid("charge", "must be finite"));
        }
        Ok(Self {
            mass,
            natural_frequency,
            charge,
            hbar,
            light_speed,
            boltzmann,
            validity_bound: DEFAULT_VALIDITY_BOUND,
        })
    }

    /// Reduced-unit parameters (`ħ = m = ω₀ = c = k = 1`) with the given `γ̃`.
    pub fn reduced(gamma_ratio: f64) -> Result<Self> {
        check_gamma_ratio(gamma_ratio)?;
        Self::new(1.0, 1.0, (1.5 * gamma_ratio).sqrt(), 1.0, 1.0, 1.0)
    }

    /// Same parameters with a different bound for [`Self::is_nonrelativistic`].
    pub fn with_validity_bound(mut self, bound: f64) -> Result<Self> {
        require_positive("validity_bound", bound)?;
        self.validity_bound = bound;
        Ok(self)
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn natural_frequency(&self) -> f64 {
        self.natural_frequency
    }

    pub fn charge(&self) -> f64 {
        self.charge
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn light_speed(&self) -> f64 {
        self.light_speed
    }

    pub fn boltzmann(&self) -> f64 {
        self.boltzmann
    }

    /// Radiation-reaction time `τ = 2e²/3mc³`.
    pub fn tau(&self) -> f64 {
        2.0 * self.charge * self.charge / (3.0 * self.mass * self.light_speed.powi(3))
    }

    /// Radiative damping rate `γ = τω₀²`.
    pub fn gamma(&self) -> f64 {
        self.tau() * self.natural_frequency * self.natural_frequency
    }

    pub fn gamma_ratio(&self) -> f64 {
        self.gamma() / self.natural_frequency
    }

    /// Whether `γ/ω₀` is below the configured validity bound. Exceeding it is
    /// allowed; the narrow-resonance approximations simply degrade.
    pub fn is_nonrelativistic(&self) -> bool {
        self.gamma_ratio() < self.validity_bound
    }

    pub fn validity_bound(&self) -> f64 {
        self.validity_bound
    }

    /// Ground-state length scale `√(ħ/mω₀)`.
    pub fn length_unit(&self) -> f64 {
        (self.hbar / (self.mass * self.natural_frequency)).sqrt()
    }

    /// Coefficient of the radiation-reaction field, `E_RR = (2e/3c³) d³q/dt³`.
    pub fn radiation_reaction_coefficient(&self) -> f64 {
        2.0 * self.charge / (3.0 * self.light_speed.powi(3))
    }
}

pub(crate) fn check_gamma_ratio(gamma_ratio: f64) -> Result<()> {
    if gamma_ratio.is_finite() && gamma_ratio >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            "gamma_ratio",
            format!("must be finite and >= 0, got {gamma_ratio}"),
        ))
    }
}

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    if theta.is_finite() && theta >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            "theta",
            format!("must be finite and >= 0, got {theta}"),
        ))
    }
}

/// The two dimensionless knobs: damping ratio `γ̃ = γ/ω₀` and temperature `θ = kT/ħω₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedParams {
    gamma_ratio: f64,
    theta: f64,
}

impl ReducedParams {
    pub fn new(gamma_ratio: f64, theta: f64) -> Result<Self> {
        check_gamma_ratio(gamma_ratio)?;
        check_theta(theta)?;
        Ok(Self { gamma_ratio, theta })
    }

    pub fn gamma_ratio(&self) -> f64 {
        self.gamma_ratio
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Reduced-unit oscillator (`ħ = m = ω₀ = c = k = 1`) with this damping ratio.
    pub fn oscillator(&self) -> OscillatorParams {
        OscillatorParams::reduced(self.gamma_ratio).expect("validated on construction")
    }

    /// Absolute temperature for a given physical reference.
    pub fn temperature(&self, reference: &OscillatorParams) -> f64 {
        self.theta * reference.hbar() * reference.natural_frequency() / reference.boltzmann()
    }
}

/// Nondimensionalizes a physical oscillator at temperature `temperature`.
pub fn reduce(p: &OscillatorParams, temperature: f64) -> Result<ReducedParams> {
    if !(temperature.is_finite() && temperature >= 0.0) {
        return Err(Error::invalid(
            "temperature",
            format!("must be finite and >= 0, got {temperature}"),
        ));
    }
    let gamma_ratio = p.tau() * p.natural_frequency();
    let theta = p.boltzmann() * temperature / (p.hbar() * p.natural_frequency());
    ReducedParams::new(gamma_ratio, theta)
}

/// Inverse of [`reduce`]: keeps the reference mass, frequency, ħ, c and k and
/// solves `e² = 3mc³γ̃/2ω₀` for the charge (sign taken from the reference).
pub fn restore(r: &ReducedParams, reference: &OscillatorParams) -> OscillatorParams {
    let m = reference.mass();
    let w0 = reference.natural_frequency();
    let c = reference.light_speed();
    let magnitude = (3.0 * m * c.powi(3) * r.gamma_ratio() / (2.0 * w0)).sqrt();
    let charge = if reference.charge() < 0.0 {
        -magnitude
    } else {
        magnitude
    };
    OscillatorParams {
        charge,
        ..*reference
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Gaussian (CGS) electron constants.
    const E_CHARGE: f64 = 4.803_204_71e-10;
    const E_MASS: f64 = 9.109_383_7e-28;
    const C_LIGHT: f64 = 2.997_924_58e10;
    const HBAR: f64 = 1.054_571_817e-27;
    const K_B: f64 = 1.380_649e-16;

    fn electron(omega0: f64) -> OscillatorParams {
        OscillatorParams::new(E_MASS, omega0, E_CHARGE, HBAR, C_LIGHT, K_B).unwrap()
    }

    #[test]
    fn uncharged_cold_limit() {
        let p = OscillatorParams::new(2.0, 3.0, 0.0, 1.0, 5.0, 1.0).unwrap();
        let r = reduce(&p, 0.0).unwrap();
        assert_eq!(r.gamma_ratio(), 0.0);
        assert_eq!(r.theta(), 0.0);
    }

    #[test]
    fn gamma_ratio_from_tau() {
        // τω₀ = 1e-3 with ω₀ = 2: e² = 3mc³τ/2.
        let (m, w0, c): (f64, f64, f64) = (1.5, 2.0, 3.0);
        let tau = 1e-3 / w0;
        let e = (1.5 * m * c * c * c * tau).sqrt();
        let p = OscillatorParams::new(m, w0, e, 1.0, c, 1.0).unwrap();
        let r = reduce(&p, 0.0).unwrap();
        assert!((r.gamma_ratio() - 1e-3).abs() < 1e-15);
        assert_eq!(r.theta(), 0.0);
    }

    #[test]
    fn atomic_oscillator_is_nonrelativistic() {
        // ω₀ chosen so that τω₀ ≈ 1e-10.
        let tau = electron(1.0).tau();
        let p = electron(1e-10 / tau);
        let r = reduce(&p, 300.0).unwrap();
        assert!((r.gamma_ratio() - 1e-10).abs() < 1e-22);
        assert!(p.is_nonrelativistic());
    }

    #[test]
    fn validity_flag_is_a_warning_not_an_error() {
        let p = OscillatorParams::reduced(0.05).unwrap();
        assert!(!p.is_nonrelativistic());
        let loose = p.with_validity_bound(0.1).unwrap();
        assert!(loose.is_nonrelativistic());
    }

    #[test]
    fn rejects_negative_temperature_and_bad_constants() {
        let p = electron(1e13);
        assert!(reduce(&p, -1.0).is_err());
        assert!(OscillatorParams::new(-1.0, 1.0, 0.0, 1.0, 1.0, 1.0).is_err());
        assert!(OscillatorParams::new(1.0, 0.0, 0.0, 1.0, 1.0, 1.0).is_err());
        assert!(ReducedParams::new(-1e-3, 0.0).is_err());
        assert!(ReducedParams::new(1e-3, f64::NAN).is_err());
    }

    #[test]
    fn restore_round_trip() {
        let p = electron(3.7e14);
        let t = 412.0;
        let r = reduce(&p, t).unwrap();
        let back = restore(&r, &p);
        assert!((back.charge() - p.charge()).abs() <= 1e-14 * p.charge().abs());
        assert_eq!(back.mass(), p.mass());
        assert!((r.temperature(&back) - t).abs() < 1e-12 * t);
    }

    #[test]
    fn restore_zero_damping_gives_zero_charge() {
        let r = ReducedParams::new(0.0, 1.0).unwrap();
        let back = restore(&r, &electron(1e14));
        assert_eq!(back.charge(), 0.0);
    }

    #[test]
    fn restore_inverts_charge_formula() {
        let (m, w0, c) = (2.5, 1.7, 4.0);
        let reference = OscillatorParams::new(m, w0, 1.0, 1.0, c, 1.0).unwrap();
        let r = ReducedParams::new(4.5e-3, 0.0).unwrap();
        let back = restore(&r, &reference);
        let expected_e2 = 3.0 * m * c.powi(3) * 4.5e-3 / (2.0 * w0);
        assert!((back.charge().powi(2) - expected_e2).abs() < 1e-14 * expected_e2);
    }

    #[test]
    fn negative_reference_charge_keeps_sign() {
        let reference = OscillatorParams::new(1.0, 1.0, -0.1, 1.0, 1.0, 1.0).unwrap();
        let r = reduce(&reference, 0.0).unwrap();
        let back = restore(&r, &reference);
        assert!((back.charge() + 0.1).abs() < 1e-15);
    }

    #[test]
    fn gamma_two_ways() {
        let p = electron(2.1e15);
        let r = reduce(&p, 0.0).unwrap();
        let via_ratio = r.gamma_ratio() * p.natural_frequency();
        assert!((via_ratio - p.gamma()).abs() <= 1e-12 * p.gamma());
    }

    #[test]
    fn reduced_units_have_tau_equal_gamma_ratio() {
        let p = OscillatorParams::reduced(3e-3).unwrap();
        assert!((p.tau() - 3e-3).abs() < 1e-17);
        assert!((p.gamma() - 3e-3).abs() < 1e-17);
        assert_eq!(p.length_unit(), 1.0);
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn reduce_restore_reduce(g in 0.0f64..0.5, theta in 0.0f64..50.0,
                                     m in 0.1f64..10.0, w0 in 0.1f64..10.0, c in 0.5f64..20.0) {
                let reference = OscillatorParams::new(m, w0, 1.0, 1.3, c, 0.7).unwrap();
                let r = ReducedParams::new(g, theta).unwrap();
                let p = restore(&r, &reference);
                let t = r.temperature(&p);
                let again = reduce(&p, t).unwrap();
                prop_assert!((again.gamma_ratio() - g).abs() <= 4.0 * f64::EPSILON * g.max(f64::MIN_POSITIVE));
                prop_assert!((again.theta() - theta).abs() <= 4.0 * f64::EPSILON * theta.max(f64::MIN_POSITIVE));
            }
        }
    }
}
