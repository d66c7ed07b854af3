//! Seeded Monte Carlo over random-phase realizations of the bath.
//!
//! Realization `i` of a run with base seed `s` uses the phase seed
//! [`split_seed`]`(s, i)`. Realizations are evaluated in parallel and collected
//! in index order before any aggregation, so a run is bit-reproducible
//! regardless of thread scheduling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::fieldgen::{split_seed, GridStrategy, ModeTemplate, DEFAULT_RESONANT_FRACTION};
use crate::model::{check_gamma_ratio, check_theta, OscillatorParams};
use crate::observables::{gaussian_moment, McValue, PathSource, VarianceReport};
use crate::quadrature::{Lineshape, QuadSpec};
use crate::response::{
    integrate_trajectory, susceptibility, variance_band_limited, IntegrationSpec, ResponseModel,
    StationaryResponse, Transient,
};
use crate::spectra::{Bath, SpectrumKind};

pub const MIN_MODES: usize = 16;

/// Frequency grid family; the cutoff is [`RunConfig::omega_max`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum GridKind {
    #[default]
    Stratified,
    Uniform,
}

/// When `q` is sampled in each realization. Times are measured from the end
/// of the transient for integrated paths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum Sampling {
    /// One sample per realization.
    FixedTime { t: f64 },
    /// `samples` equally spaced times on `[start, start + span]`.
    TimeAverage {
        start: f64,
        span: f64,
        samples: usize,
    },
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling::FixedTime { t: 0.0 }
    }
}

impl Sampling {
    fn times(&self) -> Vec<f64> {
        match *self {
            Sampling::FixedTime { t } => vec![t],
            Sampling::TimeAverage {
                start,
                span,
                samples,
            } => {
                let step = if samples > 1 {
                    span / (samples - 1) as f64
                } else {
                    0.0
                };
                (0..samples).map(|j| start + j as f64 * step).collect()
            }
        }
    }

    /// Shifts every sample time by `dt`.
    pub fn shifted(self, dt: f64) -> Self {
        match self {
            Sampling::FixedTime { t } => Sampling::FixedTime { t: t + dt },
            Sampling::TimeAverage {
                start,
                span,
                samples,
            } => Sampling::TimeAverage {
                start: start + dt,
                span,
                samples,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Estimator {
    Variance,
    Moments,
    Characteristic,
    Histogram,
}

/// A Monte Carlo run; every field has a default so config files may be partial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub gamma_ratio: f64,
    /// Ignored for the zero-point bath.
    pub theta: f64,
    pub kind: Bath,
    pub n_modes: usize,
    pub grid: GridKind,
    /// Frequency cutoff in units of ω₀; defaults per bath (see [`GridStrategy::default_omega_max`]).
    pub omega_max: Option<f64>,
    pub realizations: usize,
    pub seed: u64,
    pub source: PathSource,
    pub sampling: Sampling,
    pub estimators: Vec<Estimator>,
    /// Wavenumbers (inverse reduced length) for the characteristic function.
    pub k_grid: Vec<f64>,
    pub histogram_bins: usize,
    /// Lineshape of the reference quadrature in the reports.
    pub lineshape: Lineshape,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            gamma_ratio: 1e-2,
            theta: 1.0,
            kind: Bath::ZeroPoint,
            n_modes: 4096,
            grid: GridKind::Stratified,
            omega_max: None,
            realizations: 200,
            seed: 0,
            source: PathSource::default(),
            sampling: Sampling::default(),
            estimators: vec![
                Estimator::Variance,
                Estimator::Moments,
                Estimator::Characteristic,
                Estimator::Histogram,
            ],
            k_grid: vec![0.5, 1.0, 2.0],
            histogram_bins: 50,
            lineshape: Lineshape::Resonant,
        }
    }
}

impl RunConfig {
    pub fn spectrum(&self) -> SpectrumKind {
        self.kind.with_theta(self.theta)
    }

    pub fn params(&self) -> Result<OscillatorParams> {
        OscillatorParams::reduced(self.gamma_ratio)
    }

    pub fn grid_strategy(&self) -> Result<GridStrategy> {
        let p = self.params()?;
        let omega_max = self
            .omega_max
            .unwrap_or_else(|| GridStrategy::default_omega_max(self.spectrum(), &p));
        Ok(match self.grid {
            GridKind::Stratified => GridStrategy::Stratified {
                omega_max,
                resonant_fraction: DEFAULT_RESONANT_FRACTION,
            },
            GridKind::Uniform => GridStrategy::Uniform { omega_max },
        })
    }

    pub fn validate(&self) -> Result<()> {
        check_gamma_ratio(self.gamma_ratio)?;
        if self.gamma_ratio == 0.0 {
            return Err(Error::invalid(
                "gamma_ratio",
                "must be > 0 for a Monte Carlo run",
            ));
        }
        check_theta(self.theta)?;
        if self.n_modes < MIN_MODES {
            return Err(Error::invalid(
                "n_modes",
                format!("must be >= {MIN_MODES}, got {}", self.n_modes),
            ));
        }
        if self.realizations < 2 {
            return Err(Error::invalid(
                "realizations",
                "need at least 2 for error bars",
            ));
        }
        match self.sampling {
            Sampling::FixedTime { t } if !t.is_finite() => {
                return Err(Error::invalid("sampling", "time must be finite"))
            }
            Sampling::TimeAverage {
                start,
                span,
                samples,
            } if !(start.is_finite() && span.is_finite() && span > 0.0 && samples >= 2) => {
                return Err(Error::invalid(
                    "sampling",
                    "time average needs span > 0 and >= 2 samples",
                ))
            }
            _ => {}
        }
        if let PathSource::Integrated(_) = self.source {
            let min_t = match self.sampling {
                Sampling::FixedTime { t } => t,
                Sampling::TimeAverage { start, .. } => start,
            };
            if min_t < 0.0 {
                return Err(Error::invalid(
                    "sampling",
                    "integrated paths are sampled after the transient (t >= 0)",
                ));
            }
        }
        if self.k_grid.iter().any(|k| !k.is_finite()) {
            return Err(Error::invalid("k_grid", "wavenumbers must be finite"));
        }
        if self.histogram_bins < 2 {
            return Err(Error::invalid("histogram_bins", "need at least 2 bins"));
        }
        Ok(())
    }

    fn response_model(&self) -> ResponseModel {
        match self.source {
            PathSource::Stationary(variant) => ResponseModel::Stationary(variant),
            PathSource::Integrated(_) => ResponseModel::OrderReduced,
        }
    }

    fn wants(&self, e: Estimator) -> bool {
        self.estimators.contains(&e)
    }
}

/// A point estimate with its standard error.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate {
    pub name: String,
    pub value: f64,
    pub standard_error: f64,
    /// Number of realizations.
    pub realizations: usize,
    pub effective_samples: f64,
    pub autocorrelation_adjusted: bool,
    pub reference: Option<f64>,
    /// More than 4 SE from `reference`.
    pub flagged: bool,
}

impl Estimate {
    fn with_reference(mut self, reference: f64) -> Self {
        let diff = (self.value - reference).abs();
        self.flagged = diff > 0.0 && !(diff <= 4.0 * self.standard_error);
        self.reference = Some(reference);
        self
    }

    pub fn z_score(&self) -> Option<f64> {
        let reference = self.reference?;
        Some(McValue::from(self).z_score(reference))
    }
}

impl From<&Estimate> for McValue {
    fn from(e: &Estimate) -> Self {
        McValue {
            value: e.value,
            standard_error: e.standard_error,
            samples: e.realizations,
        }
    }
}

/// `⟨e^{ikq}⟩` at one wavenumber.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharacteristicPoint {
    pub k: f64,
    pub real: Estimate,
    pub imag: Estimate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// `counts / (N·width)`.
    pub density: Vec<f64>,
    /// Centered Gaussian with the reference variance, at bin centers.
    pub reference_density: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct EstimateSet {
    pub variance: Option<Estimate>,
    pub mean: Option<Estimate>,
    /// `⟨q^{2n}⟩`, n = 1..4.
    pub moments: Vec<Estimate>,
    pub characteristic: Vec<CharacteristicPoint>,
    pub histogram: Option<Histogram>,
    /// Equal-probability binning against the reference Gaussian.
    pub chi_square: Option<ChiSquare>,
}

impl EstimateSet {
    pub fn flagged(&self) -> Vec<&str> {
        self.variance
            .iter()
            .chain(&self.mean)
            .chain(&self.moments)
            .chain(self.characteristic.iter().flat_map(|c| [&c.real, &c.imag]))
            .filter(|e| e.flagged)
            .map(|e| e.name.as_str())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleOutcome {
    pub config: RunConfig,
    pub estimates: EstimateSet,
    /// `⟨q²⟩` and `⟨x²⟩` by every route.
    pub reports: Vec<VarianceReport>,
    /// Exact expectation of `q²` for this finite mode grid (stationary source).
    pub grid_expectation: Option<f64>,
    /// All samples of `q`, realization-major.
    pub samples: Vec<f64>,
    pub samples_per_realization: usize,
}

/// Plain sample mean of `x^{2n}` with a leave-one-out jackknife standard error.
pub fn estimate_moment(samples: &[f64], n: u32) -> Result<(f64, f64)> {
    let values: Vec<f64> = samples.iter().map(|x| x.powi(2 * n as i32)).collect();
    jackknife_mean(&values)
}

fn jackknife_mean(values: &[f64]) -> Result<(f64, f64)> {
    let m = values.len();
    if m < 2 {
        return Err(Error::invalid(
            "samples",
            "need at least 2 samples for an error bar",
        ));
    }
    let total: f64 = values.iter().sum();
    let mean = total / m as f64;
    let nm1 = (m - 1) as f64;
    let spread: f64 = values
        .iter()
        .map(|v| {
            // θ₍ᵢ₎ − θ̄ = (mean − vᵢ)/(m − 1)
            let d = (mean - v) / nm1;
            d * d
        })
        .sum();
    Ok((mean, (nm1 / m as f64 * spread).sqrt()))
}

/// χ² of `samples` against `N(0, variance)` on `bins` equal-probability bins.
pub fn chi_square_gaussian(samples: &[f64], variance: f64, bins: usize) -> Result<ChiSquare> {
    if !(variance > 0.0) || bins < 2 || samples.is_empty() {
        return Err(Error::invalid(
            "chi_square",
            "needs variance > 0, >= 2 bins and samples",
        ));
    }
    let normal = Normal::new(0.0, variance.sqrt()).expect("positive sd");
    let inner: Vec<f64> = (1..bins)
        .map(|j| normal.inverse_cdf(j as f64 / bins as f64))
        .collect();
    let mut counts = vec![0u64; bins];
    for &x in samples {
        counts[inner.partition_point(|&e| e <= x)] += 1;
    }
    let expected = samples.len() as f64 / bins as f64;
    let statistic = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    let dof = bins - 1;
    let p_value = ChiSquared::new(dof as f64).expect("dof > 0").sf(statistic);
    Ok(ChiSquare {
        statistic,
        dof,
        p_value,
    })
}

fn histogram(samples: &[f64], bins: usize, reference_variance: f64) -> Histogram {
    let sd = if reference_variance > 0.0 {
        reference_variance.sqrt()
    } else {
        1.0
    };
    let (lo, hi) = (-5.0 * sd, 5.0 * sd);
    let width = (hi - lo) / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|j| lo + j as f64 * width).collect();
    let mut counts = vec![0u64; bins];
    for &x in samples {
        if x >= lo && x < hi {
            counts[(((x - lo) / width) as usize).min(bins - 1)] += 1;
        }
    }
    let n = samples.len() as f64;
    let density = counts.iter().map(|&c| c as f64 / (n * width)).collect();
    let reference_density = edges
        .windows(2)
        .map(|e| {
            let x = 0.5 * (e[0] + e[1]);
            if reference_variance > 0.0 {
                (-0.5 * x * x / reference_variance).exp()
                    / (2.0 * std::f64::consts::PI * reference_variance).sqrt()
            } else {
                0.0
            }
        })
        .collect();
    Histogram {
        edges,
        counts,
        density,
        reference_density,
    }
}

/// Samples `q` at the configured times for realization `index`.
fn realization(
    cfg: &RunConfig,
    template: &ModeTemplate,
    p: &OscillatorParams,
    index: u64,
) -> Result<Vec<f64>> {
    let ens = template.realize(split_seed(cfg.seed, index));
    let times = cfg.sampling.times();
    match cfg.source {
        PathSource::Stationary(variant) => {
            let response = StationaryResponse::new(&ens, p, variant)?;
            Ok(times.iter().map(|&t| response.position(t)).collect())
        }
        PathSource::Integrated(scheme) => {
            let transient = 10.0 / p.gamma();
            let last = times.iter().cloned().fold(0.0, f64::max);
            let mut spec = IntegrationSpec::new(transient + last);
            spec.scheme = scheme;
            spec.transient = Transient::Duration(transient);
            let traj = integrate_trajectory(&ens, p, &spec)?;
            let first = traj.times[0];
            let step = traj.dt;
            Ok(times
                .iter()
                .map(|&t| {
                    let k = (((transient + t) - first) / step).round() as usize;
                    traj.q[k.min(traj.len() - 1)]
                })
                .collect())
        }
    }
}

/// `Σ (e/m)² a_j² |χ_j|²/2`: the expectation of `q²` on a finite grid.
fn grid_expectation(
    cfg: &RunConfig,
    template: &ModeTemplate,
    p: &OscillatorParams,
) -> Result<Option<f64>> {
    let PathSource::Stationary(variant) = cfg.source else {
        return Ok(None);
    };
    let gain = p.charge() / p.mass();
    let mut sum = 0.0;
    for (&w, &a) in template.grid().omega().iter().zip(template.amplitudes()) {
        sum += 0.5 * (gain * a).powi(2) * susceptibility(w, p, variant)?.norm_sqr();
    }
    Ok(Some(sum))
}

/// Runs every realization of `cfg` and aggregates the requested estimators.
pub fn run_ensemble(cfg: &RunConfig) -> Result<EnsembleOutcome> {
    cfg.validate()?;
    let p = cfg.params()?;
    let kind = cfg.spectrum();
    let strategy = cfg.grid_strategy()?;
    let template = ModeTemplate::new(kind, &p, cfg.n_modes, strategy)?;

    let per_realization: Vec<Vec<f64>> = (0..cfg.realizations as u64)
        .into_par_iter()
        .map(|i| realization(cfg, &template, &p, i))
        .collect::<Result<_>>()?;
    let m = cfg.realizations;
    let per = per_realization[0].len();
    let samples: Vec<f64> = per_realization.into_iter().flatten().collect();

    let band_limited = variance_band_limited(
        kind,
        cfg.gamma_ratio,
        strategy.omega_max(),
        cfg.response_model(),
        &QuadSpec::exact(),
    )?;

    // Realizations are independent; within one, samples decorrelate over 2/γ.
    let (effective, adjusted) = match cfg.sampling {
        Sampling::FixedTime { .. } => (m as f64, false),
        Sampling::TimeAverage { span, samples, .. } => {
            let per_path = (span * p.gamma() / 2.0).clamp(1.0, samples as f64);
            (m as f64 * per_path, true)
        }
    };
    let estimate = |name: String, values: &[f64]| -> Result<Estimate> {
        let (value, se) = jackknife_mean(values)?;
        // Jackknife treats every pooled sample as independent; rescale to the effective count.
        let se = se * (values.len() as f64 / effective).sqrt();
        Ok(Estimate {
            name,
            value,
            standard_error: se,
            realizations: m,
            effective_samples: effective,
            autocorrelation_adjusted: adjusted,
            reference: None,
            flagged: false,
        })
    };

    let mut estimates = EstimateSet::default();
    if cfg.wants(Estimator::Variance) {
        let sq: Vec<f64> = samples.iter().map(|q| q * q).collect();
        estimates.variance = Some(estimate("variance".into(), &sq)?.with_reference(band_limited));
        estimates.mean = Some(estimate("mean".into(), &samples)?.with_reference(0.0));
    }
    if cfg.wants(Estimator::Moments) {
        for n in 1..=4u32 {
            let values: Vec<f64> = samples.iter().map(|q| q.powi(2 * n as i32)).collect();
            estimates.moments.push(
                estimate(format!("moment_{}", 2 * n), &values)?
                    .with_reference(gaussian_moment(n, band_limited)),
            );
        }
    }
    if cfg.wants(Estimator::Characteristic) {
        for &k in &cfg.k_grid {
            let re: Vec<f64> = samples.iter().map(|q| (k * q).cos()).collect();
            let im: Vec<f64> = samples.iter().map(|q| (k * q).sin()).collect();
            let reference = (-0.5 * k * k * band_limited).exp();
            estimates.characteristic.push(CharacteristicPoint {
                k,
                real: estimate(format!("char_re(k={k})"), &re)?.with_reference(reference),
                imag: estimate(format!("char_im(k={k})"), &im)?.with_reference(0.0),
            });
        }
    }
    if cfg.wants(Estimator::Histogram) {
        let reference = if kind.is_silent() { 0.0 } else { band_limited };
        estimates.histogram = Some(histogram(&samples, cfg.histogram_bins, reference));
        if reference > 0.0 {
            estimates.chi_square = Some(chi_square_gaussian(
                &samples,
                reference,
                cfg.histogram_bins,
            )?);
        }
    }

    let quad = QuadSpec::default().with_lineshape(cfg.lineshape);
    let mut reports = vec![
        VarianceReport::center_variance(kind, cfg.gamma_ratio, &quad)?,
        VarianceReport::mean_square_x(kind, cfg.gamma_ratio, &quad)?,
    ];
    if let Some(var) = &estimates.variance {
        let mc = McValue::from(var);
        reports[0] = reports[0].clone().with_monte_carlo(mc, Some(band_limited));
        let shifted = McValue {
            value: mc.value + 0.5,
            ..mc
        };
        reports[1] = reports[1]
            .clone()
            .with_monte_carlo(shifted, Some(band_limited + 0.5));
    }

    Ok(EnsembleOutcome {
        config: cfg.clone(),
        estimates,
        reports,
        grid_expectation: grid_expectation(cfg, &template, &p)?,
        samples,
        samples_per_realization: per,
    })
}

/// Realization average of `|ψ(x)|² = φ₀²(x − q)` with its standard error: the
/// Monte Carlo estimate of the position density (reduced units).
pub fn density_estimate(samples: &[f64], xgrid: &[f64]) -> Result<Vec<(f64, f64)>> {
    let p = OscillatorParams::reduced(0.0)?;
    xgrid
        .iter()
        .map(|&x| {
            let values: Vec<f64> = samples
                .iter()
                .map(|q| crate::observables::ground_gaussian(x - q, &p).powi(2))
                .collect();
            jackknife_mean(&values)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::response::{Scheme, SusceptibilityVariant};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn small(kind: Bath) -> RunConfig {
        RunConfig {
            gamma_ratio: 5e-2,
            theta: 1.0,
            kind,
            n_modes: 512,
            realizations: 400,
            seed: 3,
            ..RunConfig::default()
        }
    }

    #[test]
    fn moment_examples() {
        assert_eq!(estimate_moment(&[0.0; 10], 2).unwrap(), (0.0, 0.0));
        assert_eq!(estimate_moment(&[-1.0, 1.0], 1).unwrap(), (1.0, 0.0));
        assert!(estimate_moment(&[1.0], 1).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let draws: Vec<f64> = (0..100_000)
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        let (m4, se) = estimate_moment(&draws, 2).unwrap();
        assert!((m4 - 3.0).abs() < 0.05, "{m4} ± {se}");
        assert!((se - (96.0f64 / 1e5).sqrt()).abs() < 0.01);
    }

    #[test]
    fn jackknife_equals_standard_error_of_mean() {
        let x = [0.3, -1.2, 2.5, 0.7, 0.0, 4.1];
        let (mean, se) = jackknife_mean(&x).unwrap();
        let n = x.len() as f64;
        let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!((se - (var / n).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn chi_square_accepts_gaussian_and_rejects_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let draws: Vec<f64> = (0..20_000)
            .map(|_| {
                let z: f64 = StandardNormal.sample(&mut rng);
                2.0 * z
            })
            .collect();
        let fit = chi_square_gaussian(&draws, 4.0, 50).unwrap();
        assert_eq!(fit.dof, 49);
        assert!(fit.p_value > 1e-3, "{fit:?}");
        let wrong = chi_square_gaussian(&draws, 5.0, 50).unwrap();
        assert!(wrong.p_value < 1e-6);
    }

    #[test]
    fn silent_bath_gives_exact_zeros() {
        let cfg = RunConfig {
            theta: 0.0,
            realizations: 8,
            ..small(Bath::Thermal)
        };
        let out = run_ensemble(&cfg).unwrap();
        assert!(out.samples.iter().all(|&q| q == 0.0));
        let var = out.estimates.variance.as_ref().unwrap();
        assert_eq!((var.value, var.standard_error), (0.0, 0.0));
        assert!(out.estimates.flagged().is_empty());
        assert!(out.reports.iter().all(|r| !r.flagged));
        assert_eq!(out.reports[0].closed_form, 0.0);
        assert!(out.estimates.chi_square.is_none());
    }

    #[test]
    fn runs_are_bit_reproducible() {
        let cfg = RunConfig {
            realizations: 64,
            ..small(Bath::Combined)
        };
        let a = run_ensemble(&cfg).unwrap();
        let b = run_ensemble(&cfg).unwrap();
        assert_eq!(a, b);
        let other = run_ensemble(&RunConfig { seed: 4, ..cfg }).unwrap();
        assert_ne!(a.samples, other.samples);
    }

    #[test]
    fn variance_matches_band_limited_target() {
        for kind in [Bath::ZeroPoint, Bath::Thermal] {
            let out = run_ensemble(&small(kind)).unwrap();
            let var = out.estimates.variance.as_ref().unwrap();
            assert!(var.z_score().unwrap().abs() < 4.0, "{kind:?}: {var:?}");
            let exact = out.grid_expectation.unwrap();
            assert!(
                (exact / var.reference.unwrap() - 1.0).abs() < 1e-2,
                "grid bias {exact}"
            );
        }
    }

    #[test]
    fn standard_error_scales_inverse_sqrt() {
        let mut ratios = Vec::new();
        for trial in 0..5 {
            let base = RunConfig {
                n_modes: 128,
                realizations: 500,
                seed: 100 + trial,
                ..small(Bath::ZeroPoint)
            };
            let se = |m: usize| {
                run_ensemble(&RunConfig {
                    realizations: m,
                    ..base.clone()
                })
                .unwrap()
                .estimates
                .variance
                .unwrap()
                .standard_error
            };
            ratios.push(se(500) / se(1000));
        }
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        assert!((mean / 2f64.sqrt() - 1.0).abs() < 0.2, "{ratios:?}");
    }

    #[test]
    fn time_shift_preserves_statistics() {
        let cfg = small(Bath::ZeroPoint);
        let a = run_ensemble(&cfg).unwrap().estimates.variance.unwrap();
        let shifted = RunConfig {
            sampling: cfg.sampling.shifted(123.4),
            ..cfg
        };
        let b = run_ensemble(&shifted).unwrap().estimates.variance.unwrap();
        let combined = (a.standard_error.powi(2) + b.standard_error.powi(2)).sqrt();
        assert!((a.value - b.value).abs() < 4.0 * combined);
    }

    #[test]
    fn time_average_adjusts_error() {
        let cfg = RunConfig {
            realizations: 50,
            sampling: Sampling::TimeAverage {
                start: 0.0,
                span: 400.0,
                samples: 200,
            },
            ..small(Bath::ZeroPoint)
        };
        let out = run_ensemble(&cfg).unwrap();
        assert_eq!(out.samples.len(), 50 * 200);
        let var = out.estimates.variance.unwrap();
        assert!(var.autocorrelation_adjusted);
        assert!((var.effective_samples - 50.0 * 10.0).abs() < 1e-9);
        assert!(var.z_score().unwrap().abs() < 4.0);
    }

    #[test]
    fn integrated_and_stationary_agree() {
        let base = RunConfig {
            n_modes: 256,
            realizations: 200,
            omega_max: Some(4.0),
            ..small(Bath::ZeroPoint)
        };
        let st = run_ensemble(&base).unwrap().estimates.variance.unwrap();
        let int = run_ensemble(&RunConfig {
            source: PathSource::Integrated(Scheme::Rk4),
            ..base
        })
        .unwrap()
        .estimates
        .variance
        .unwrap();
        let combined = (st.standard_error.powi(2) + int.standard_error.powi(2)).sqrt();
        assert!(
            (st.value - int.value).abs() < 4.0 * combined,
            "{st:?} vs {int:?}"
        );
    }

    #[test]
    fn characteristic_function_within_four_over_root_m() {
        let out = run_ensemble(&RunConfig {
            realizations: 2000,
            ..small(Bath::Thermal)
        })
        .unwrap();
        let sigma = out
            .estimates
            .variance
            .as_ref()
            .unwrap()
            .reference
            .unwrap()
            .sqrt();
        for c in &out.estimates.characteristic {
            if c.k * sigma <= 2.0 {
                let reference = c.real.reference.unwrap();
                assert!((c.real.value - reference).abs() < 4.0 / (2000f64).sqrt());
            }
        }
    }

    #[test]
    fn config_validation_and_json() {
        assert!(run_ensemble(&RunConfig {
            realizations: 1,
            ..RunConfig::default()
        })
        .is_err());
        assert!(run_ensemble(&RunConfig {
            n_modes: 8,
            ..RunConfig::default()
        })
        .is_err());
        assert!(run_ensemble(&RunConfig {
            gamma_ratio: 0.0,
            ..RunConfig::default()
        })
        .is_err());
        let cfg: RunConfig = serde_json::from_str(
            r#"{"gamma_ratio": 0.01, "kind": "thermal", "source": {"stationary": "lorentzian"},
                "sampling": {"mode": "time-average", "start": 0, "span": 10, "samples": 5}}"#,
        )
        .unwrap();
        assert_eq!(cfg.kind, Bath::Thermal);
        assert_eq!(
            cfg.source,
            PathSource::Stationary(SusceptibilityVariant::Lorentzian)
        );
        assert_eq!(cfg.n_modes, 4096);
        let back: RunConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
        assert!(serde_json::from_str::<RunConfig>(r#"{"modes": 3}"#).is_err());
    }

    #[test]
    fn density_estimate_tracks_thermal_density() {
        let out = run_ensemble(&RunConfig {
            realizations: 2000,
            ..small(Bath::Thermal)
        })
        .unwrap();
        let x = [-1.5, 0.0, 0.8];
        let est = density_estimate(&out.samples, &x).unwrap();
        let theta_eff = 1.0;
        for (xi, (mean, se)) in x.iter().zip(est) {
            let target = crate::observables::thermal_density(*xi, theta_eff).unwrap();
            // Small O(γ̃) offset between the sampled and closed-form widths.
            assert!(
                (mean - target).abs() < 4.0 * se + 0.01 * target,
                "x={xi}: {mean} vs {target}"
            );
        }
    }
}
