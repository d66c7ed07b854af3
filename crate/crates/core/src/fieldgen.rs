//! Random-phase mode ensembles that realize a radiation bath as a finite sum
//! `E(t) = Σ_j a_j cos(ω_j t + θ_j)`.
//!
//! Amplitudes are deterministic, `a_j = √(2 S_E(ω_j) Δω_j)`, so that
//! `Σ a_j²/2 = ∫ S_E dω` over the grid. The phases are the only random input;
//! they are drawn independently and uniformly on `[0, 2π)` from a ChaCha8
//! generator seeded with a 64-bit seed, which makes every ensemble a pure
//! function of `(seed, kind, grid)`.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::OscillatorParams;
use crate::spectra::{effective_field_psd, SpectrumKind};

/// Name of the phase generator, recorded in output metadata.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.9, seed_from_u64)";

/// Minimum number of modes inside `ω₀ ± 5γ`.
pub const MIN_RESONANT_MODES: usize = 10;

pub const DEFAULT_RESONANT_FRACTION: f64 = 0.7;

/// Mixes a base seed and a realization index into an independent 64-bit seed:
/// `splitmix64(splitmix64(base) ^ splitmix64(index))`.
pub fn split_seed(base: u64, index: u64) -> u64 {
    splitmix64(splitmix64(base) ^ splitmix64(index.wrapping_add(0x6A09_E667_F3BC_C909)))
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// How the frequency axis `[0, ω_max]` is divided into mode cells.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "kebab-case")]
pub enum GridStrategy {
    /// Equal cells on `[0, ω_max]`.
    Uniform { omega_max: f64 },
    /// A fraction of the modes placed at equal Lorentzian quantiles inside a
    /// window around `ω₀`, the rest in uniform cells on either side.
    Stratified {
        omega_max: f64,
        resonant_fraction: f64,
    },
}

impl GridStrategy {
    pub fn uniform(omega_max: f64) -> Self {
        GridStrategy::Uniform { omega_max }
    }

    pub fn stratified(omega_max: f64) -> Self {
        GridStrategy::Stratified {
            omega_max,
            resonant_fraction: DEFAULT_RESONANT_FRACTION,
        }
    }

    /// `10ω₀` for zero-point baths, `ω₀·max(10, 20θ)` when a thermal part is present.
    pub fn default_omega_max(kind: SpectrumKind, p: &OscillatorParams) -> f64 {
        let w0 = p.natural_frequency();
        match kind.theta() {
            None => 10.0 * w0,
            Some(theta) => w0 * (20.0 * theta).max(10.0),
        }
    }

    pub fn default_for(kind: SpectrumKind, p: &OscillatorParams) -> Self {
        Self::stratified(Self::default_omega_max(kind, p))
    }

    pub fn omega_max(&self) -> f64 {
        match *self {
            GridStrategy::Uniform { omega_max } | GridStrategy::Stratified { omega_max, .. } => {
                omega_max
            }
        }
    }
}

/// Cell centers and widths of a frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeGrid {
    strategy: GridStrategy,
    omega: Vec<f64>,
    width: Vec<f64>,
}

impl ModeGrid {
    pub fn build(strategy: GridStrategy, n_modes: usize, p: &OscillatorParams) -> Result<Self> {
        if n_modes < 2 {
            return Err(Error::invalid(
                "n_modes",
                format!("need at least 2, got {n_modes}"),
            ));
        }
        let omega_max = strategy.omega_max();
        if !(omega_max.is_finite() && omega_max > 0.0) {
            return Err(Error::invalid(
                "omega_max",
                format!("must be > 0, got {omega_max}"),
            ));
        }
        let (omega, width) = match strategy {
            GridStrategy::Uniform { omega_max } => uniform_cells(0.0, omega_max, n_modes),
            GridStrategy::Stratified {
                omega_max,
                resonant_fraction,
            } => stratified_cells(omega_max, resonant_fraction, n_modes, p)?,
        };
        let grid = Self {
            strategy,
            omega,
            width,
        };
        let gamma = p.gamma();
        if gamma > 0.0 {
            let found = grid.modes_within(p.natural_frequency(), 5.0 * gamma);
            if found < MIN_RESONANT_MODES {
                return Err(Error::UnresolvedResonance {
                    found,
                    required: MIN_RESONANT_MODES,
                });
            }
        }
        Ok(grid)
    }

    pub fn strategy(&self) -> GridStrategy {
        self.strategy
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn width(&self) -> &[f64] {
        &self.width
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    /// Number of cell centers inside `[center − half_width, center + half_width]`.
    pub fn modes_within(&self, center: f64, half_width: f64) -> usize {
        let lo = self.omega.partition_point(|&w| w < center - half_width);
        let hi = self.omega.partition_point(|&w| w <= center + half_width);
        hi - lo
    }

    /// Deterministic amplitudes `√(2 S_E(ω_j) Δω_j)`.
    pub fn amplitudes(&self, kind: SpectrumKind, p: &OscillatorParams) -> Result<Vec<f64>> {
        self.omega
            .iter()
            .zip(&self.width)
            .map(|(&w, &dw)| Ok((2.0 * effective_field_psd(w, kind, p)? * dw).sqrt()))
            .collect()
    }
}

fn uniform_cells(lo: f64, hi: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let step = (hi - lo) / n as f64;
    let omega = (0..n).map(|k| lo + (k as f64 + 0.5) * step).collect();
    (omega, vec![step; n])
}

fn stratified_cells(
    omega_max: f64,
    resonant_fraction: f64,
    n_modes: usize,
    p: &OscillatorParams,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(resonant_fraction > 0.0 && resonant_fraction < 1.0) {
        return Err(Error::invalid(
            "resonant_fraction",
            format!("must lie in (0, 1), got {resonant_fraction}"),
        ));
    }
    let w0 = p.natural_frequency();
    let gamma = p.gamma();
    if gamma <= 0.0 {
        return Err(Error::invalid(
            "grid",
            "a resonance-stratified grid needs a damped (charged) oscillator",
        ));
    }
    let half_window = (0.5 * w0).min(100.0 * gamma);
    let (lo_edge, hi_edge) = (w0 - half_window, w0 + half_window);
    if omega_max <= hi_edge {
        return Err(Error::invalid(
            "omega_max",
            format!("must exceed the resonance window edge {hi_edge}"),
        ));
    }
    let n_res =
        ((resonant_fraction * n_modes as f64).round() as usize).min(n_modes.saturating_sub(2));
    let n_tail = n_modes - n_res;
    if n_res == 0 || n_tail < 2 {
        return Err(Error::invalid(
            "n_modes",
            format!("{n_modes} modes cannot be split into resonance and tail cells"),
        ));
    }
    let (len_lo, len_hi) = (lo_edge, omega_max - hi_edge);
    let n_lo = ((n_tail as f64 * len_lo / (len_lo + len_hi)).round() as usize).clamp(1, n_tail - 1);
    let n_hi = n_tail - n_lo;

    let (mut omega, mut width) = uniform_cells(0.0, lo_edge, n_lo);

    // Lorentzian quantiles of half-width γ/2 around ω₀.
    let cdf = |w: f64| 0.5 + (2.0 * (w - w0) / gamma).atan() / PI;
    let quantile = |u: f64| w0 + 0.5 * gamma * (PI * (u - 0.5)).tan();
    let (u_lo, u_hi) = (cdf(lo_edge), cdf(hi_edge));
    let du = (u_hi - u_lo) / n_res as f64;
    let mut left = lo_edge;
    for k in 0..n_res {
        let right = if k + 1 == n_res {
            hi_edge
        } else {
            quantile(u_lo + (k + 1) as f64 * du)
        };
        omega.push(quantile(u_lo + (k as f64 + 0.5) * du));
        width.push(right - left);
        left = right;
    }

    let (hi_omega, hi_width) = uniform_cells(hi_edge, omega_max, n_hi);
    omega.extend(hi_omega);
    width.extend(hi_width);
    Ok((omega, width))
}

/// One field mode: `a cos(ωt + θ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub omega: f64,
    pub amplitude: f64,
    pub phase: f64,
}

/// A finite random-phase realization of a radiation bath.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeEnsemble {
    kind: SpectrumKind,
    seed: u64,
    grid: Option<GridStrategy>,
    modes: Vec<Mode>,
}

/// Grid and amplitudes shared by every realization of one bath; only the
/// phases change from seed to seed.
#[derive(Debug, Clone)]
pub struct ModeTemplate {
    kind: SpectrumKind,
    grid: ModeGrid,
    amplitudes: Vec<f64>,
}

impl ModeTemplate {
    pub fn new(
        kind: SpectrumKind,
        p: &OscillatorParams,
        n_modes: usize,
        strategy: GridStrategy,
    ) -> Result<Self> {
        kind.validate()?;
        let grid = ModeGrid::build(strategy, n_modes, p)?;
        let amplitudes = grid.amplitudes(kind, p)?;
        Ok(Self {
            kind,
            grid,
            amplitudes,
        })
    }

    pub fn grid(&self) -> &ModeGrid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    /// Draws phases for one realization.
    pub fn realize(&self, seed: u64) -> ModeEnsemble {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let modes = self
            .grid
            .omega()
            .iter()
            .zip(&self.amplitudes)
            .map(|(&omega, &amplitude)| Mode {
                omega,
                amplitude,
                phase: rng.random_range(0.0..TAU),
            })
            .collect();
        ModeEnsemble {
            kind: self.kind,
            seed,
            grid: Some(self.grid.strategy()),
            modes,
        }
    }
}

/// Builds one seeded ensemble for `kind` on the requested grid.
pub fn sample_modes(
    kind: SpectrumKind,
    p: &OscillatorParams,
    n_modes: usize,
    grid: GridStrategy,
    seed: u64,
) -> Result<ModeEnsemble> {
    Ok(ModeTemplate::new(kind, p, n_modes, grid)?.realize(seed))
}

impl ModeEnsemble {
    /// Hand-built ensemble (toy baths, single modes). Frequencies must be
    /// strictly increasing and non-negative, amplitudes non-negative and
    /// phases in `[0, 2π)`.
    pub fn from_modes(kind: SpectrumKind, seed: u64, modes: Vec<Mode>) -> Result<Self> {
        kind.validate()?;
        if modes.is_empty() {
            return Err(Error::invalid("modes", "ensemble needs at least one mode"));
        }
        for (j, m) in modes.iter().enumerate() {
            if !(m.omega.is_finite() && m.omega >= 0.0) {
                return Err(Error::invalid(
                    "modes",
                    format!("mode {j}: bad frequency {}", m.omega),
                ));
            }
            if !(m.amplitude.is_finite() && m.amplitude >= 0.0) {
                return Err(Error::invalid(
                    "modes",
                    format!("mode {j}: bad amplitude {}", m.amplitude),
                ));
            }
            if !(0.0..TAU).contains(&m.phase) {
                return Err(Error::invalid(
                    "modes",
                    format!("mode {j}: phase {} outside [0, 2π)", m.phase),
                ));
            }
        }
        if modes.windows(2).any(|w| !(w[1].omega > w[0].omega)) {
            return Err(Error::invalid(
                "modes",
                "frequencies must be strictly increasing",
            ));
        }
        Ok(Self {
            kind,
            seed,
            grid: None,
            modes,
        })
    }

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `None` for hand-built ensembles.
    pub fn grid(&self) -> Option<GridStrategy> {
        self.grid
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn omega_max(&self) -> f64 {
        match self.grid {
            Some(g) => g.omega_max(),
            None => self.max_frequency(),
        }
    }

    pub fn max_frequency(&self) -> f64 {
        self.modes.last().map_or(0.0, |m| m.omega)
    }

    pub fn is_silent(&self) -> bool {
        self.modes.iter().all(|m| m.amplitude == 0.0)
    }

    /// `Σ a_j²/2`, the time-averaged `E²`.
    pub fn field_variance(&self) -> f64 {
        self.modes
            .iter()
            .map(|m| 0.5 * m.amplitude * m.amplitude)
            .sum()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&EnsembleDocument::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: EnsembleDocument = serde_json::from_str(text)?;
        let n = doc.omega.len();
        if doc.amplitude.len() != n || doc.phase.len() != n {
            return Err(Error::invalid(
                "modes",
                "omega, amplitude and phase arrays differ in length",
            ));
        }
        let modes = (0..n)
            .map(|j| Mode {
                omega: doc.omega[j],
                amplitude: doc.amplitude[j],
                phase: doc.phase[j],
            })
            .collect();
        let mut ens = Self::from_modes(doc.kind, doc.seed, modes)?;
        ens.grid = doc.grid;
        Ok(ens)
    }
}

#[derive(Serialize, Deserialize)]
struct EnsembleDocument {
    kind: SpectrumKind,
    seed: u64,
    rng: String,
    grid: Option<GridStrategy>,
    omega: Vec<f64>,
    amplitude: Vec<f64>,
    phase: Vec<f64>,
}

impl From<&ModeEnsemble> for EnsembleDocument {
    fn from(e: &ModeEnsemble) -> Self {
        Self {
            kind: e.kind,
            seed: e.seed,
            rng: RNG_ALGORITHM.to_string(),
            grid: e.grid,
            omega: e.modes.iter().map(|m| m.omega).collect(),
            amplitude: e.modes.iter().map(|m| m.amplitude).collect(),
            phase: e.modes.iter().map(|m| m.phase).collect(),
        }
    }
}

/// `E(t) = Σ a_j cos(ω_j t + θ_j)`.
pub fn field_at(ens: &ModeEnsemble, t: f64) -> f64 {
    ens.modes
        .iter()
        .map(|m| m.amplitude * (m.omega * t + m.phase).cos())
        .sum()
}

/// `dE/dt`.
pub fn field_rate_at(ens: &ModeEnsemble, t: f64) -> f64 {
    ens.modes
        .iter()
        .map(|m| -m.amplitude * m.omega * (m.omega * t + m.phase).sin())
        .sum()
}

/// Bath part of the vector potential, `A(t) = −c Σ (a_j/ω_j) sin(ω_j t + θ_j)`,
/// so that `−(1/c) dA/dt = E(t)`.
pub fn vector_potential_at(ens: &ModeEnsemble, p: &OscillatorParams, t: f64) -> Result<f64> {
    if let Some(index) = ens.modes.iter().position(|m| m.omega == 0.0) {
        return Err(Error::ZeroFrequencyMode { index });
    }
    let sum: f64 = ens
        .modes
        .iter()
        .map(|m| m.amplitude / m.omega * (m.omega * t + m.phase).sin())
        .sum();
    Ok(-p.light_speed() * sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate;

    fn single(omega: f64, amplitude: f64, phase: f64) -> ModeEnsemble {
        ModeEnsemble::from_modes(
            SpectrumKind::ZeroPoint,
            0,
            vec![Mode {
                omega,
                amplitude,
                phase,
            }],
        )
        .unwrap()
    }

    #[test]
    fn cold_thermal_bath_has_no_amplitude() {
        let p = OscillatorParams::reduced(1e-2).unwrap();
        let kind = SpectrumKind::Thermal { theta: 0.0 };
        let ens = sample_modes(kind, &p, 256, GridStrategy::default_for(kind, &p), 3).unwrap();
        assert!(ens.modes().iter().all(|m| m.amplitude == 0.0));
        assert!(ens.is_silent());
    }

    #[test]
    fn same_seed_same_phases() {
        let p = OscillatorParams::reduced(1e-2).unwrap();
        let g = GridStrategy::stratified(10.0);
        let a = sample_modes(SpectrumKind::ZeroPoint, &p, 512, g, 99).unwrap();
        let b = sample_modes(SpectrumKind::ZeroPoint, &p, 512, g, 99).unwrap();
        let c = sample_modes(SpectrumKind::ZeroPoint, &p, 512, g, 100).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.modes()[0].phase, c.modes()[0].phase);
    }

    #[test]
    fn variance_bookkeeping_matches_psd_integral() {
        let p = OscillatorParams::reduced(1e-2).unwrap();
        let ens = sample_modes(
            SpectrumKind::ZeroPoint,
            &p,
            4096,
            GridStrategy::stratified(10.0),
            1,
        )
        .unwrap();
        let psd = |w: f64| effective_field_psd(w, SpectrumKind::ZeroPoint, &p).unwrap();
        let q = integrate(psd, &[0.0, 1.0, 10.0], false, 1e-12, 0.0, 100).unwrap();
        let rel = (ens.field_variance() - q.value).abs() / q.value;
        assert!(rel < 1e-3, "relative mismatch {rel}");
    }

    #[test]
    fn stratified_grid_invariants() {
        let p = OscillatorParams::reduced(1e-3).unwrap();
        let ens = sample_modes(
            SpectrumKind::ZeroPoint,
            &p,
            4096,
            GridStrategy::stratified(10.0),
            5,
        )
        .unwrap();
        assert_eq!(ens.len(), 4096);
        for w in ens.modes().windows(2) {
            assert!(w[1].omega > w[0].omega);
        }
        for m in ens.modes() {
            assert!(m.amplitude >= 0.0);
            assert!((0.0..TAU).contains(&m.phase));
        }
        let grid = ModeGrid::build(GridStrategy::stratified(10.0), 4096, &p).unwrap();
        assert!(grid.modes_within(1.0, 5.0 * 1e-3) > 2000);
        let total: f64 = grid.width().iter().sum();
        assert!((total - 10.0).abs() < 1e-10);
    }

    #[test]
    fn uniform_grid_cannot_resolve_narrow_resonance() {
        let p = OscillatorParams::reduced(1e-3).unwrap();
        let err = sample_modes(
            SpectrumKind::ZeroPoint,
            &p,
            4096,
            GridStrategy::uniform(10.0),
            0,
        )
        .unwrap_err();
        assert!(
            matches!(err, Error::UnresolvedResonance { found, .. } if found < MIN_RESONANT_MODES)
        );
        // At γ̃ = 1e-2 the same grid is fine.
        let p = OscillatorParams::reduced(1e-2).unwrap();
        assert!(sample_modes(
            SpectrumKind::ZeroPoint,
            &p,
            4096,
            GridStrategy::uniform(10.0),
            0
        )
        .is_ok());
    }

    #[test]
    fn field_examples() {
        let silent = ModeEnsemble::from_modes(
            SpectrumKind::ZeroPoint,
            0,
            vec![
                Mode {
                    omega: 1.0,
                    amplitude: 0.0,
                    phase: 0.3,
                },
                Mode {
                    omega: 2.0,
                    amplitude: 0.0,
                    phase: 1.3,
                },
            ],
        )
        .unwrap();
        let p = OscillatorParams::reduced(1e-2).unwrap();
        for t in [0.0, 1.7, 40.0] {
            assert_eq!(field_at(&silent, t), 0.0);
            assert_eq!(vector_potential_at(&silent, &p, t).unwrap(), 0.0);
        }
        let one = single(1.0, 1.0, 0.0);
        assert_eq!(field_at(&one, 0.0), 1.0);
        assert!((field_at(&one, PI) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn vector_potential_derivative_is_field() {
        let p = OscillatorParams::new(1.0, 1.0, 0.1, 1.0, 2.5, 1.0).unwrap();
        let one = single(1.0, 1.0, 0.0);
        let (t, h) = (0.3, 1e-5);
        let deriv = (vector_potential_at(&one, &p, t + h).unwrap()
            - vector_potential_at(&one, &p, t - h).unwrap())
            / (2.0 * h);
        assert!((-deriv / p.light_speed() - field_at(&one, t)).abs() < 1e-8);
    }

    #[test]
    fn vector_potential_bounded_and_rejects_zero_frequency() {
        let p = OscillatorParams::reduced(1e-2).unwrap();
        let ens = sample_modes(
            SpectrumKind::ZeroPoint,
            &p,
            64,
            GridStrategy::uniform(4.0),
            8,
        );
        // 64 uniform modes cannot resolve γ̃ = 1e-2 (needs 10 in ±0.05).
        assert!(ens.is_err());
        let p = OscillatorParams::reduced(0.2).unwrap();
        let ens = sample_modes(
            SpectrumKind::ZeroPoint,
            &p,
            64,
            GridStrategy::uniform(4.0),
            8,
        )
        .unwrap();
        let bound: f64 = ens.modes().iter().map(|m| m.amplitude / m.omega).sum();
        for k in 0..200 {
            let a = vector_potential_at(&ens, &p, 0.37 * k as f64).unwrap();
            assert!(a.abs() <= bound * (1.0 + 1e-12));
        }
        let zero = ModeEnsemble::from_modes(
            SpectrumKind::ZeroPoint,
            0,
            vec![Mode {
                omega: 0.0,
                amplitude: 1.0,
                phase: 0.0,
            }],
        )
        .unwrap();
        assert!(matches!(
            vector_potential_at(&zero, &p, 1.0),
            Err(Error::ZeroFrequencyMode { index: 0 })
        ));
    }

    #[test]
    fn long_time_average_of_field_squared() {
        let p = OscillatorParams::reduced(0.2).unwrap();
        let ens = sample_modes(
            SpectrumKind::ZeroPoint,
            &p,
            64,
            GridStrategy::uniform(4.0),
            21,
        )
        .unwrap();
        // Mode spacing 1/16 → beat period ~100; average over many beat periods.
        let n = 200_000;
        let dt = 0.05;
        let mean: f64 = (0..n)
            .map(|k| field_at(&ens, k as f64 * dt).powi(2))
            .sum::<f64>()
            / n as f64;
        let target = ens.field_variance();
        assert!((mean - target).abs() < 0.01 * target, "{mean} vs {target}");
    }

    #[test]
    fn phase_factor_statistics() {
        let p = OscillatorParams::reduced(0.2).unwrap();
        let template =
            ModeTemplate::new(SpectrumKind::ZeroPoint, &p, 32, GridStrategy::uniform(4.0)).unwrap();
        let m = 4000;
        let ensembles: Vec<_> = (0..m).map(|i| template.realize(split_seed(7, i))).collect();
        let bound = 4.0 / (m as f64).sqrt();
        for (j, k) in [(0usize, 1usize), (3, 17), (5, 5), (30, 31)] {
            let (mut same, mut conj) = (
                num_complex::Complex64::new(0.0, 0.0),
                num_complex::Complex64::new(0.0, 0.0),
            );
            for e in &ensembles {
                let (a, b) = (e.modes()[j].phase, e.modes()[k].phase);
                same += num_complex::Complex64::from_polar(1.0, a + b);
                conj += num_complex::Complex64::from_polar(1.0, a - b);
            }
            same /= m as f64;
            conj /= m as f64;
            assert!(same.norm() <= bound, "⟨e^iθj e^iθk⟩ = {same}");
            let delta = if j == k { 1.0 } else { 0.0 };
            assert!((conj - delta).norm() <= bound, "⟨e^iθj e^-iθk⟩ = {conj}");
        }
    }

    #[test]
    fn json_round_trip_is_exact() {
        let p = OscillatorParams::reduced(1e-2).unwrap();
        let ens = sample_modes(
            SpectrumKind::ZeroPointPlusThermal { theta: 0.7 },
            &p,
            300,
            GridStrategy::stratified(14.0),
            12345,
        )
        .unwrap();
        let text = ens.to_json().unwrap();
        let back = ModeEnsemble::from_json(&text).unwrap();
        assert_eq!(back, ens);
    }

    #[test]
    fn split_seed_is_deterministic_and_spreads() {
        assert_eq!(split_seed(1, 2), split_seed(1, 2));
        assert_ne!(split_seed(1, 2), split_seed(2, 1));
        assert_ne!(split_seed(0, 0), split_seed(0, 1));
    }

    #[test]
    fn rejects_malformed_modes() {
        let bad = |modes| ModeEnsemble::from_modes(SpectrumKind::ZeroPoint, 0, modes).is_err();
        assert!(bad(vec![]));
        assert!(bad(vec![Mode {
            omega: 1.0,
            amplitude: -1.0,
            phase: 0.0
        }]));
        assert!(bad(vec![Mode {
            omega: 1.0,
            amplitude: 1.0,
            phase: TAU
        }]));
        assert!(bad(vec![
            Mode {
                omega: 2.0,
                amplitude: 1.0,
                phase: 0.0
            },
            Mode {
                omega: 1.0,
                amplitude: 1.0,
                phase: 0.0
            },
        ]));
    }
}
