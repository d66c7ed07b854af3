//! Spectral densities of the random radiation baths.
//!
//! Only the one-dimensional projection of the field matters for a
//! dipole-coupled oscillator along `x`, so the polarization and angular
//! structure of the three-dimensional field is folded into
//! [`effective_field_psd`]. Its normalization is fixed by requiring that
//! `(e²/m²)∫S_E(ω)|χ(ω)|²dω` is the stationary center variance.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{check_theta, OscillatorParams};

const LAURENT_CUTOFF: f64 = 1e-8;

/// Radiation bath without a temperature attached (CLI and config files).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bath {
    ZeroPoint,
    Thermal,
    Combined,
}

impl Bath {
    pub fn with_theta(self, theta: f64) -> SpectrumKind {
        match self {
            Bath::ZeroPoint => SpectrumKind::ZeroPoint,
            Bath::Thermal => SpectrumKind::Thermal { theta },
            Bath::Combined => SpectrumKind::ZeroPointPlusThermal { theta },
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Bath::ZeroPoint => "zero-point",
            Bath::Thermal => "thermal",
            Bath::Combined => "combined",
        }
    }
}

impl fmt::Display for Bath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Bath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero-point" | "zp" => Ok(Bath::ZeroPoint),
            "thermal" => Ok(Bath::Thermal),
            "combined" | "zero-point-plus-thermal" => Ok(Bath::Combined),
            other => Err(Error::invalid(
                "kind",
                format!("unknown bath `{other}` (zero-point, thermal, combined)"),
            )),
        }
    }
}

/// A radiation bath; `theta = kT/ħω₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "bath", rename_all = "kebab-case")]
pub enum SpectrumKind {
    ZeroPoint,
    Thermal { theta: f64 },
    ZeroPointPlusThermal { theta: f64 },
}

impl SpectrumKind {
    pub fn bath(&self) -> Bath {
        match self {
            SpectrumKind::ZeroPoint => Bath::ZeroPoint,
            SpectrumKind::Thermal { .. } => Bath::Thermal,
            SpectrumKind::ZeroPointPlusThermal { .. } => Bath::Combined,
        }
    }

    pub fn theta(&self) -> Option<f64> {
        match *self {
            SpectrumKind::ZeroPoint => None,
            SpectrumKind::Thermal { theta } | SpectrumKind::ZeroPointPlusThermal { theta } => {
                Some(theta)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.theta() {
            Some(theta) => check_theta(theta),
            None => Ok(()),
        }
    }

    /// True when the bath carries no power at all (thermal at θ = 0).
    pub fn is_silent(&self) -> bool {
        matches!(self, SpectrumKind::Thermal { theta } if *theta == 0.0)
    }

    /// Multiplier of the zero-point spectrum at frequency ratio `u = ω/ω₀`:
    /// 1, `coth(u/2θ) − 1`, or `coth(u/2θ)`.
    pub fn bath_weight(&self, u: f64) -> f64 {
        match *self {
            SpectrumKind::ZeroPoint => 1.0,
            SpectrumKind::Thermal { theta } => thermal_excess(u, theta),
            SpectrumKind::ZeroPointPlusThermal { theta } => 1.0 + thermal_excess(u, theta),
        }
    }

    /// `u³ · bath_weight(u)`, continuous at `u = 0`.
    pub fn weighted_cube(&self, u: f64) -> f64 {
        if u == 0.0 {
            return 0.0;
        }
        u * u * u * self.bath_weight(u)
    }
}

impl fmt::Display for SpectrumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.theta() {
            Some(theta) => write!(f, "{}(θ={theta})", self.bath()),
            None => write!(f, "{}", self.bath()),
        }
    }
}

// coth(u/2θ) − 1, with the θ → 0 limit 0.
fn thermal_excess(u: f64, theta: f64) -> f64 {
    if theta == 0.0 {
        return 0.0;
    }
    coth_minus_one(u / (2.0 * theta))
}

/// `coth(x) − 1 = 2/(e^{2x} − 1)` for `x > 0`.
pub fn coth_minus_one(x: f64) -> f64 {
    if x < LAURENT_CUTOFF {
        1.0 / x - 1.0 + x / 3.0
    } else {
        2.0 / (2.0 * x).exp_m1()
    }
}

pub fn coth(x: f64) -> f64 {
    if x < LAURENT_CUTOFF {
        1.0 / x + x / 3.0
    } else {
        1.0 + 2.0 / (2.0 * x).exp_m1()
    }
}

/// Bose–Einstein occupation `1/(e^x − 1)`; zero for `x = ∞`.
pub fn planck_occupation(x: f64) -> f64 {
    1.0 / x.exp_m1()
}

fn check_frequency(omega: f64) -> Result<()> {
    if omega.is_finite() && omega >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            "omega",
            format!("must be finite and >= 0, got {omega}"),
        ))
    }
}

/// Zero-point energy density per unit angular frequency, `ħω³/2π²c³`.
pub fn zero_point_density(omega: f64, p: &OscillatorParams) -> Result<f64> {
    check_frequency(omega)?;
    Ok(p.hbar() * omega.powi(3) / (2.0 * PI * PI * p.light_speed().powi(3)))
}

/// Planck (thermal) energy density per unit angular frequency,
/// `(ħω³/π²c³)/(e^{ħω/kT} − 1)`.
pub fn thermal_density(omega: f64, theta: f64, p: &OscillatorParams) -> Result<f64> {
    check_frequency(omega)?;
    check_theta(theta)?;
    if omega == 0.0 || theta == 0.0 {
        return Ok(0.0);
    }
    let x = omega / (theta * p.natural_frequency());
    Ok(p.hbar() * omega.powi(3) / (PI * PI * p.light_speed().powi(3)) * planck_occupation(x))
}

/// Thermal mode amplitude `h(ω,T) = √((ħω/2)[coth(ħω/2kT) − 1])`.
pub fn thermal_amplitude(omega: f64, theta: f64, p: &OscillatorParams) -> Result<f64> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::invalid(
            "omega",
            format!("must be finite and > 0, got {omega}"),
        ));
    }
    check_theta(theta)?;
    if theta == 0.0 {
        return Ok(0.0);
    }
    let x = omega / (2.0 * theta * p.natural_frequency());
    Ok((0.5 * p.hbar() * omega * coth_minus_one(x)).sqrt())
}

/// One-sided power spectral density of the scalar driving field,
/// `S_E(ω) = (2ħω³/3πc³)·w(ω)` with bath weight `w` (1, `coth−1` or `coth`).
pub fn effective_field_psd(omega: f64, kind: SpectrumKind, p: &OscillatorParams) -> Result<f64> {
    check_frequency(omega)?;
    kind.validate()?;
    let u = omega / p.natural_frequency();
    let scale =
        2.0 * p.hbar() * p.natural_frequency().powi(3) / (3.0 * PI * p.light_speed().powi(3));
    Ok(scale * kind.weighted_cube(u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::LN_2;

    fn reduced() -> OscillatorParams {
        OscillatorParams::reduced(1e-3).unwrap()
    }

    #[test]
    fn zero_point_examples() {
        let p = reduced();
        assert_eq!(zero_point_density(0.0, &p).unwrap(), 0.0);
        let v = zero_point_density(1.0, &p).unwrap();
        assert!((v - 0.050_660_591_821_168_89).abs() < 1e-15);
        let r = zero_point_density(2.6, &p).unwrap() / zero_point_density(1.3, &p).unwrap();
        assert!((r - 8.0).abs() < 1e-13);
        assert!(zero_point_density(-1.0, &p).is_err());
    }

    #[test]
    fn thermal_examples() {
        let p = reduced();
        assert_eq!(thermal_density(2.0, 0.0, &p).unwrap(), 0.0);
        assert_eq!(thermal_density(0.0, 1.0, &p).unwrap(), 0.0);
        let v = thermal_density(1.0, 1.0 / LN_2, &p).unwrap();
        assert!((v - 1.0 / (PI * PI)).abs() < 1e-15);
        assert!(thermal_density(200.0, 1.0, &p).unwrap() < 1e-80);
    }

    #[test]
    fn thermal_amplitude_examples() {
        let p = reduced();
        assert_eq!(thermal_amplitude(3.0, 0.0, &p).unwrap(), 0.0);
        let h = thermal_amplitude(1.0, 1.0 / LN_2, &p).unwrap();
        assert!((h - 1.0).abs() < 1e-14);
        for (w, th) in [(0.3, 0.2), (1.0, 1.0), (4.0, 7.5)] {
            let h = thermal_amplitude(w, th, &p).unwrap();
            let lhs = h * h * 2.0 / w + 1.0;
            let x: f64 = w / (2.0 * th);
            assert!((lhs - x.cosh() / x.sinh()).abs() < 1e-13 * lhs);
        }
        assert!(thermal_amplitude(0.0, 1.0, &p).is_err());
    }

    #[test]
    fn effective_psd_examples() {
        let p = reduced();
        let s = effective_field_psd(1.0, SpectrumKind::ZeroPoint, &p).unwrap();
        assert!((s - 2.0 / (3.0 * PI)).abs() < 1e-15);
        for w in [0.1, 1.0, 5.0] {
            assert_eq!(
                effective_field_psd(w, SpectrumKind::Thermal { theta: 0.0 }, &p).unwrap(),
                0.0
            );
        }
        // S_E = (4π/3)ρ₀ for the zero-point bath.
        let rho = zero_point_density(2.2, &p).unwrap();
        let s = effective_field_psd(2.2, SpectrumKind::ZeroPoint, &p).unwrap();
        assert!((s - 4.0 * PI / 3.0 * rho).abs() < 1e-14 * s);
    }

    #[test]
    fn combined_is_coth_weighted() {
        let p = OscillatorParams::new(2.0, 1.5, 0.3, 0.7, 3.0, 1.1).unwrap();
        for (w, th) in [(0.5, 0.3), (1.5, 1.0), (4.0, 2.0)] {
            let zp = effective_field_psd(w, SpectrumKind::ZeroPoint, &p).unwrap();
            let both = effective_field_psd(w, SpectrumKind::ZeroPointPlusThermal { theta: th }, &p)
                .unwrap();
            let x: f64 = w / (2.0 * th * 1.5);
            assert!((both - zp * x.cosh() / x.sinh()).abs() < 1e-13 * both);
        }
    }

    #[test]
    fn coth_branches_are_continuous() {
        let below = coth_minus_one(LAURENT_CUTOFF * (1.0 - 1e-9));
        let above = coth_minus_one(LAURENT_CUTOFF * (1.0 + 1e-9));
        assert!((below - above).abs() < 1e-6 * above);
        assert_eq!(coth_minus_one(f64::INFINITY), 0.0);
        assert!((coth(1.0) - 1.0f64.cosh() / 1.0f64.sinh()).abs() < 1e-15);
    }

    #[test]
    fn parse_bath() {
        assert_eq!("zero-point".parse::<Bath>().unwrap(), Bath::ZeroPoint);
        assert_eq!("combined".parse::<Bath>().unwrap(), Bath::Combined);
        assert!("vacuum".parse::<Bath>().is_err());
        assert!(SpectrumKind::Thermal { theta: -1.0 }.validate().is_err());
    }

    proptest! {
        #[test]
        fn thermal_to_zero_point_ratio(w in 1e-3f64..50.0, th in 1e-2f64..20.0) {
            let p = reduced();
            let r = thermal_density(w, th, &p).unwrap() / zero_point_density(w, &p).unwrap();
            let expected = 2.0 / (w / th).exp_m1();
            prop_assert!((r - expected).abs() <= 1e-12 * expected.max(1e-300));
        }

        #[test]
        fn amplitude_monotone_in_theta(w in 1e-2f64..20.0, th in 1e-2f64..20.0, dt in 1e-3f64..5.0) {
            let p = reduced();
            let lo = thermal_amplitude(w, th, &p).unwrap();
            let hi = thermal_amplitude(w, th + dt, &p).unwrap();
            prop_assert!(hi >= lo);
        }

        #[test]
        fn combined_tends_to_zero_point(w in 0.05f64..20.0) {
            let p = reduced();
            let zp = effective_field_psd(w, SpectrumKind::ZeroPoint, &p).unwrap();
            let cold = effective_field_psd(w, SpectrumKind::ZeroPointPlusThermal { theta: 1e-4 }, &p).unwrap();
            prop_assert!((cold - zp).abs() <= 1e-12 * zp);
        }
    }
}
