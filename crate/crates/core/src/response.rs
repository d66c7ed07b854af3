//! The driven, radiation-damped oscillator.
//!
//! Equation of motion of the wave-packet center:
//!
//! ```text
//! q̈ + ω₀² q = (e/m) E(t) + τ d³q/dt³,      τ = 2e²/3mc³
//! ```
//!
//! The stationary (non-runaway) solution is a linear filter of the field with
//! susceptibility `χ(ω) = 1/(ω₀² − ω² − iτω³)`. Time-domain integration uses the
//! order-reduced form `q̈ + γq̇ + ω₀²q = (e/m)(E + τĖ)`, obtained by substituting
//! `d³q/dt³ ≈ −ω₀²q̇ + (e/m)Ė`, which has no runaway branch.

use std::f64::consts::{PI, TAU};
use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fieldgen::ModeEnsemble;
use crate::model::{check_gamma_ratio, OscillatorParams};
use crate::output::Table;
use crate::quadrature::{integrate, Lineshape, QuadSpec};
use crate::spectra::{planck_occupation, SpectrumKind};

/// Damping form in the susceptibility denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SusceptibilityVariant {
    /// `ω₀² − ω² − iτω³` (radiation reaction).
    #[default]
    Exact,
    /// `ω₀² − ω² − iγω`.
    Lorentzian,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Susceptibility {
    omega0: f64,
    tau: f64,
    variant: SusceptibilityVariant,
}

impl Susceptibility {
    pub fn new(p: &OscillatorParams, variant: SusceptibilityVariant) -> Self {
        Self {
            omega0: p.natural_frequency(),
            tau: p.tau(),
            variant,
        }
    }

    pub fn variant(&self) -> SusceptibilityVariant {
        self.variant
    }

    pub fn denominator(&self, omega: f64) -> Complex64 {
        let damping = match self.variant {
            SusceptibilityVariant::Exact => self.tau * omega.powi(3),
            SusceptibilityVariant::Lorentzian => self.tau * self.omega0 * self.omega0 * omega,
        };
        Complex64::new(self.omega0 * self.omega0 - omega * omega, -damping)
    }

    pub fn eval(&self, omega: f64) -> Result<Complex64> {
        if !(omega.is_finite() && omega >= 0.0) {
            return Err(Error::invalid(
                "omega",
                format!("must be finite and >= 0, got {omega}"),
            ));
        }
        let d = self.denominator(omega);
        if d.norm_sqr() == 0.0 {
            return Err(Error::ResonancePole);
        }
        Ok(d.inv())
    }
}

pub fn susceptibility(
    omega: f64,
    p: &OscillatorParams,
    variant: SusceptibilityVariant,
) -> Result<Complex64> {
    Susceptibility::new(p, variant).eval(omega)
}

/// Stationary center coordinate `q(t) = Re Σ_j c_j e^{−iω_j t}` with
/// `c_j = (e/m) a_j χ(ω_j) e^{−iθ_j}`, plus its time derivatives.
#[derive(Debug, Clone)]
pub struct StationaryResponse {
    omega: Vec<f64>,
    coeff: Vec<Complex64>,
}

impl StationaryResponse {
    pub fn new(
        ens: &ModeEnsemble,
        p: &OscillatorParams,
        variant: SusceptibilityVariant,
    ) -> Result<Self> {
        if p.charge() == 0.0 {
            return Err(Error::NoStationarySolution);
        }
        let chi = Susceptibility::new(p, variant);
        let gain = p.charge() / p.mass();
        let mut omega = Vec::with_capacity(ens.len());
        let mut coeff = Vec::with_capacity(ens.len());
        for m in ens.modes() {
            omega.push(m.omega);
            coeff.push(
                gain * m.amplitude * chi.eval(m.omega)? * Complex64::from_polar(1.0, -m.phase),
            );
        }
        Ok(Self { omega, coeff })
    }

    pub fn position(&self, t: f64) -> f64 {
        self.omega
            .iter()
            .zip(&self.coeff)
            .map(|(&w, c)| (c * Complex64::from_polar(1.0, -w * t)).re)
            .sum()
    }

    /// `[q, q̇, q̈, d³q/dt³]` at time `t`.
    pub fn derivatives(&self, t: f64) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (&w, c) in self.omega.iter().zip(&self.coeff) {
            let z = c * Complex64::from_polar(1.0, -w * t);
            // d/dt → −iω
            out[0] += z.re;
            out[1] += w * z.im;
            out[2] -= w * w * z.re;
            out[3] -= w * w * w * z.im;
        }
        out
    }
}

/// Stationary solution of the radiation-damped equation at time `t` (exact damping form).
pub fn stationary_position(ens: &ModeEnsemble, p: &OscillatorParams, t: f64) -> Result<f64> {
    Ok(StationaryResponse::new(ens, p, SusceptibilityVariant::Exact)?.position(t))
}

fn check_positive_gamma(gamma_ratio: f64) -> Result<()> {
    check_gamma_ratio(gamma_ratio)?;
    if gamma_ratio == 0.0 {
        return Err(Error::invalid(
            "gamma_ratio",
            "must be > 0 (an uncharged oscillator has no stationary state)",
        ));
    }
    Ok(())
}

/// Breakpoints in the detuning `u = ω − 1` (reduced units) bracketing the
/// resonance, and for the exact lineshape a geometric ladder across the slowly
/// decaying off-resonance region. Integrating in `u` keeps nodes resolvable
/// when `γ̃` is far below machine epsilon relative to 1.
pub(crate) fn resonance_breaks(gamma_ratio: f64, lineshape: Lineshape) -> Vec<f64> {
    let g = gamma_ratio;
    let mut pts = vec![-1.0, -10.0 * g, -g, 0.0, g, 10.0 * g, 1.0];
    if lineshape == Lineshape::Exact {
        let mut w = 4.0;
        while w < 10.0 / g && w < 1e12 {
            pts.push(w - 1.0);
            w *= 4.0;
        }
    }
    pts.retain(|&u| u >= -1.0 && u.is_finite());
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// `(ω² − 1)² + γ̃²ω⁶` written in the detuning, free of cancellation near ω = 1.
pub(crate) fn exact_denominator(u: f64, gamma_ratio: f64) -> f64 {
    let w = 1.0 + u;
    (u * (2.0 + u)).powi(2) + (gamma_ratio * w.powi(3)).powi(2)
}

/// Center variance `⟨q²⟩` by adaptive quadrature of the spectral integral, in
/// units of `ħ/mω₀`:
///
/// * exact: `(γ̃/π) ∫₀^∞ ω³ w(ω) / ((ω² − 1)² + γ̃²ω⁶) dω`
/// * resonant: `(γ̃/π) ∫₀^∞ w(1) / (4(ω − 1)² + γ̃²) dω`
///
/// with bath weight `w` = 1, `coth(ω/2θ) − 1` or `coth(ω/2θ)`.
pub fn variance_quadrature(kind: SpectrumKind, gamma_ratio: f64, quad: &QuadSpec) -> Result<f64> {
    check_positive_gamma(gamma_ratio)?;
    kind.validate()?;
    if kind.is_silent() {
        return Ok(0.0);
    }
    let g = gamma_ratio;
    let breaks = resonance_breaks(g, quad.lineshape);
    let q = match quad.lineshape {
        Lineshape::Exact => {
            let f = |u: f64| g / PI * kind.weighted_cube(1.0 + u) / exact_denominator(u, g);
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
            let weight = kind.bath_weight(1.0);
            let f = |u: f64| g / PI * weight / (4.0 * u * u + g * g);
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

/// Response used to form a band-limited variance target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResponseModel {
    Stationary(SusceptibilityVariant),
    /// The order-reduced integrator: `|1 − iτω|² / ((ω₀² − ω²)² + γ²ω²)`.
    OrderReduced,
}

/// `⟨q²⟩` restricted to `[0, ω_max]` (reduced units): what a mode ensemble on
/// that band estimates.
pub fn variance_band_limited(
    kind: SpectrumKind,
    gamma_ratio: f64,
    omega_max: f64,
    model: ResponseModel,
    quad: &QuadSpec,
) -> Result<f64> {
    check_positive_gamma(gamma_ratio)?;
    kind.validate()?;
    if !(omega_max > 0.0 && omega_max.is_finite()) {
        return Err(Error::invalid(
            "omega_max",
            format!("must be finite and > 0, got {omega_max}"),
        ));
    }
    let g = gamma_ratio;
    let gain2 = |w: f64| -> f64 {
        let detuning = (1.0 - w * w).powi(2);
        match model {
            ResponseModel::Stationary(SusceptibilityVariant::Exact) => {
                1.0 / (detuning + g * g * w.powi(6))
            }
            ResponseModel::Stationary(SusceptibilityVariant::Lorentzian) => {
                1.0 / (detuning + g * g * w * w)
            }
            ResponseModel::OrderReduced => (1.0 + g * g * w * w) / (detuning + g * g * w * w),
        }
    };
    let mut breaks: Vec<f64> = resonance_breaks(g, Lineshape::Exact)
        .into_iter()
        .map(|u| 1.0 + u)
        .filter(|&w| w < omega_max)
        .collect();
    breaks.push(omega_max);
    let f = |w: f64| g / PI * kind.weighted_cube(w) * gain2(w);
    Ok(integrate(
        f,
        &breaks,
        false,
        quad.rel_tol,
        quad.abs_tol,
        quad.max_intervals,
    )?
    .value)
}

/// `1 − (1/π)(γ̃/2) + (1/3π)(γ̃/2)³`, the series factor common to both baths.
fn damping_factor_cubic(gamma_ratio: f64) -> f64 {
    let x = 0.5 * gamma_ratio;
    1.0 - x / PI + x.powi(3) / (3.0 * PI)
}

/// Closed forms for `⟨q²⟩` in units of `ħ/mω₀`:
///
/// * zero-point: `(1/2π)[π/2 + arctan(2/γ̃)]`
/// * thermal: `(e^{1/θ} − 1)⁻¹ · [1 − (1/π)(γ̃/2) + (1/3π)(γ̃/2)³]`
/// * combined: the sum.
pub fn variance_closed_form(kind: SpectrumKind, gamma_ratio: f64) -> Result<f64> {
    kind.validate()?;
    let zero_point = |g: f64| -> Result<f64> {
        check_positive_gamma(g)?;
        Ok((0.5 * PI + (2.0 / g).atan()) / (2.0 * PI))
    };
    let thermal = |g: f64, theta: f64| -> Result<f64> {
        check_gamma_ratio(g)?;
        if theta == 0.0 {
            return Ok(0.0);
        }
        Ok(planck_occupation(1.0 / theta) * damping_factor_cubic(g))
    };
    match kind {
        SpectrumKind::ZeroPoint => zero_point(gamma_ratio),
        SpectrumKind::Thermal { theta } => thermal(gamma_ratio, theta),
        SpectrumKind::ZeroPointPlusThermal { theta } => {
            Ok(zero_point(gamma_ratio)? + thermal(gamma_ratio, theta)?)
        }
    }
}

/// Partial sums of the zero-point variance in powers of `γ̃/2` (orders 0–3).
pub fn variance_series(gamma_ratio: f64, order: u32) -> Result<f64> {
    check_gamma_ratio(gamma_ratio)?;
    if gamma_ratio >= 1.0 {
        return Err(Error::invalid("gamma_ratio", "series needs γ̃ < 1"));
    }
    if order > 3 {
        return Err(Error::invalid(
            "order",
            format!("series is known to order 3, got {order}"),
        ));
    }
    let x = 0.5 * gamma_ratio;
    let mut sum = 1.0;
    if order >= 1 {
        sum -= x / PI;
    }
    if order >= 3 {
        sum += x.powi(3) / (3.0 * PI);
    }
    Ok(0.5 * sum)
}

/// Time-stepping scheme for [`integrate_trajectory`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Classical fourth-order Runge–Kutta.
    #[default]
    Rk4,
    /// Velocity Verlet with the damping term treated implicitly (second order,
    /// symplectic when undamped and undriven).
    Verlet,
}

/// Warm-up period dropped from a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Transient {
    /// Ten damping times `10/γ` (nothing when γ = 0).
    #[default]
    Auto,
    None,
    Duration(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrationSpec {
    pub t_start: f64,
    pub t_end: f64,
    /// Defaults to `2π/(100·max(ω₀, max ω_j))`.
    pub dt: Option<f64>,
    pub scheme: Scheme,
    pub initial_position: f64,
    pub initial_momentum: f64,
    pub transient: Transient,
    /// Record every `stride`-th step.
    pub stride: usize,
}

impl IntegrationSpec {
    pub fn new(t_end: f64) -> Self {
        Self {
            t_start: 0.0,
            t_end,
            dt: None,
            scheme: Scheme::Rk4,
            initial_position: 0.0,
            initial_momentum: 0.0,
            transient: Transient::Auto,
            stride: 1,
        }
    }
}

/// Sampled center coordinate and momentum `p = m q̇`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub q: Vec<f64>,
    pub p: Vec<f64>,
    pub ensemble_seed: u64,
    pub scheme: Option<Scheme>,
    pub dt: f64,
    pub transient: f64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Index of the sample at time `t` (to within a millionth of a step).
    pub fn index_of(&self, t: f64) -> Result<usize> {
        let first = *self.times.first().ok_or(Error::TimeNotOnGrid { time: t })?;
        let step = self.dt * self.stride_steps();
        let k = ((t - first) / step).round();
        if k < 0.0 || k as usize >= self.len() {
            return Err(Error::TimeNotOnGrid { time: t });
        }
        let k = k as usize;
        if (self.times[k] - t).abs() > 1e-6 * step {
            return Err(Error::TimeNotOnGrid { time: t });
        }
        Ok(k)
    }

    fn stride_steps(&self) -> f64 {
        if self.times.len() < 2 {
            1.0
        } else {
            ((self.times[1] - self.times[0]) / self.dt).round().max(1.0)
        }
    }

    pub fn to_table(&self) -> Table {
        let mut table = Table::new(["t", "q", "p"]);
        for k in 0..self.len() {
            table.push(vec![self.times[k], self.q[k], self.p[k]]);
        }
        table
    }

    /// CSV with columns `t,q,p`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        self.to_table().write_csv(writer)
    }
}

/// Samples the stationary solution on `t_start + k·dt`, `k = 0..n`.
pub fn stationary_trajectory(
    ens: &ModeEnsemble,
    p: &OscillatorParams,
    variant: SusceptibilityVariant,
    t_start: f64,
    dt: f64,
    n: usize,
) -> Result<Trajectory> {
    let response = StationaryResponse::new(ens, p, variant)?;
    let mut traj = Trajectory {
        times: Vec::with_capacity(n),
        q: Vec::with_capacity(n),
        p: Vec::with_capacity(n),
        ensemble_seed: ens.seed(),
        scheme: None,
        dt,
        transient: 0.0,
    };
    for k in 0..n {
        let t = t_start + k as f64 * dt;
        let d = response.derivatives(t);
        traj.times.push(t);
        traj.q.push(d[0]);
        traj.p.push(p.mass() * d[1]);
    }
    Ok(traj)
}

/// Forcing `(e/m)(E + τĖ) = Re Σ_j b_j e^{i(ω_j t + θ_j)}`, `b_j = (e/m)a_j(1 + iτω_j)`,
/// advanced by phasor rotation and periodically resynchronized.
struct Forcing {
    base: Vec<Complex64>,
    omega: Vec<f64>,
    phase: Vec<f64>,
    current: Vec<Complex64>,
    half_step: Vec<Complex64>,
    rotations: usize,
}

const RESYNC_EVERY: usize = 1024;

impl Forcing {
    fn new(ens: &ModeEnsemble, p: &OscillatorParams, h: f64) -> Self {
        let gain = p.charge() / p.mass();
        let tau = p.tau();
        let base = ens
            .modes()
            .iter()
            .map(|m| gain * m.amplitude * Complex64::new(1.0, tau * m.omega))
            .collect();
        let omega: Vec<f64> = ens.modes().iter().map(|m| m.omega).collect();
        let half_step = omega
            .iter()
            .map(|&w| Complex64::from_polar(1.0, 0.5 * w * h))
            .collect();
        Self {
            base,
            phase: ens.modes().iter().map(|m| m.phase).collect(),
            current: Vec::new(),
            half_step,
            omega,
            rotations: 0,
        }
    }

    fn sync(&mut self, t: f64) -> f64 {
        self.current = self
            .base
            .iter()
            .zip(self.omega.iter().zip(&self.phase))
            .map(|(b, (&w, &th))| b * Complex64::from_polar(1.0, (w * t + th) % TAU))
            .collect();
        self.rotations = 0;
        self.current.iter().map(|z| z.re).sum()
    }

    /// Advances by half a step and returns the forcing there.
    fn advance_half(&mut self, t_new: f64) -> f64 {
        self.rotations += 1;
        if self.rotations >= RESYNC_EVERY {
            return self.sync(t_new);
        }
        let mut sum = 0.0;
        for (z, r) in self.current.iter_mut().zip(&self.half_step) {
            *z *= r;
            sum += z.re;
        }
        sum
    }
}

/// Integrates the order-reduced equation of motion
/// `q̈ + γq̇ + ω₀²q = (e/m)(E + τĖ)` driven by the ensemble.
pub fn integrate_trajectory(
    ens: &ModeEnsemble,
    p: &OscillatorParams,
    spec: &IntegrationSpec,
) -> Result<Trajectory> {
    let w0 = p.natural_frequency();
    let gamma = p.gamma();
    let fastest = w0.max(ens.max_frequency());
    let dt = spec.dt.unwrap_or(TAU / (100.0 * fastest));
    if !(dt > 0.0 && dt <= TAU / (50.0 * fastest) * (1.0 + 1e-12)) {
        return Err(Error::invalid(
            "dt",
            format!(
                "must lie in (0, 2π/(50·ω_max)] = (0, {}], got {dt}",
                TAU / (50.0 * fastest)
            ),
        ));
    }
    if !(spec.t_end > spec.t_start) {
        return Err(Error::invalid("t_end", "must exceed t_start"));
    }
    if spec.stride == 0 {
        return Err(Error::invalid("stride", "must be >= 1"));
    }
    let transient = match spec.transient {
        Transient::Auto if gamma > 0.0 => 10.0 / gamma,
        Transient::Auto | Transient::None => 0.0,
        Transient::Duration(d) if d >= 0.0 => d,
        Transient::Duration(d) => {
            return Err(Error::invalid(
                "transient",
                format!("must be >= 0, got {d}"),
            ))
        }
    };
    let record_from = spec.t_start + transient;
    if record_from > spec.t_end {
        return Err(Error::invalid(
            "t_end",
            format!("span is shorter than the {transient} transient"),
        ));
    }

    let mass = p.mass();
    // Rounded up so that the last sample reaches t_end.
    let steps = ((spec.t_end - spec.t_start) / dt - 1e-9).ceil().max(1.0) as usize;
    let silent = ens.is_silent();
    let energy = |q: f64, v: f64| 0.5 * mass * (v * v + w0 * w0 * q * q);
    let mut q = spec.initial_position;
    let mut v = spec.initial_momentum / mass;
    let initial_energy = energy(q, v);

    let accel = |q: f64, v: f64, f: f64| -w0 * w0 * q - gamma * v + f;
    let mut forcing = Forcing::new(ens, p, dt);
    let mut f_now = forcing.sync(spec.t_start);

    let mut traj = Trajectory {
        times: Vec::new(),
        q: Vec::new(),
        p: Vec::new(),
        ensemble_seed: ens.seed(),
        scheme: Some(spec.scheme),
        dt,
        transient,
    };
    let record = |k: usize, t: f64, q: f64, v: f64, traj: &mut Trajectory| {
        if t >= record_from - 1e-9 * dt && k.is_multiple_of(spec.stride) {
            traj.times.push(t);
            traj.q.push(q);
            traj.p.push(mass * v);
        }
    };
    record(0, spec.t_start, q, v, &mut traj);

    for k in 0..steps {
        let t = spec.t_start + k as f64 * dt;
        let t_next = spec.t_start + (k + 1) as f64 * dt;
        let f_mid = forcing.advance_half(t + 0.5 * dt);
        let f_next = forcing.advance_half(t_next);
        match spec.scheme {
            Scheme::Rk4 => {
                let (k1q, k1v) = (v, accel(q, v, f_now));
                let (q2, v2) = (q + 0.5 * dt * k1q, v + 0.5 * dt * k1v);
                let (k2q, k2v) = (v2, accel(q2, v2, f_mid));
                let (q3, v3) = (q + 0.5 * dt * k2q, v + 0.5 * dt * k2v);
                let (k3q, k3v) = (v3, accel(q3, v3, f_mid));
                let (q4, v4) = (q + dt * k3q, v + dt * k3v);
                let (k4q, k4v) = (v4, accel(q4, v4, f_next));
                q += dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
                v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
            }
            Scheme::Verlet => {
                let v_half = v + 0.5 * dt * accel(q, v, f_now);
                q += dt * v_half;
                v = (v_half + 0.5 * dt * (-w0 * w0 * q + f_next)) / (1.0 + 0.5 * gamma * dt);
            }
        }
        f_now = f_next;
        if !(q.is_finite() && v.is_finite()) {
            return Err(Error::NonFinite { time: t_next });
        }
        if silent {
            let e = energy(q, v);
            if e > 2.0 * initial_energy && e > f64::MIN_POSITIVE {
                return Err(Error::Instability {
                    time: t_next,
                    initial: initial_energy,
                    current: e,
                });
            }
        }
        record(k + 1, t_next, q, v, &mut traj);
    }
    Ok(traj)
}
