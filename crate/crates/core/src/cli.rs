//! The `sedlab` command line.
//!
//! Every subcommand writes one primary table. With `--format csv` (default) it
//! goes to `<out>/<command>.csv` with a `<command>.meta.json` sidecar; with
//! `--format json` both land in `<out>/<command>.json`. `--out -` prints the
//! primary output to stdout instead. The output directory defaults to
//! `$SEDLAB_OUT_DIR`, else the working directory.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 invalid input (or a failed
//! `report` check), 3 numerical failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::fieldgen::sample_modes;
use crate::montecarlo::{density_estimate, run_ensemble, RunConfig, Sampling};
use crate::observables::{
    commutator_integral, mean_square_x, thermal_density, thermal_density_variance, uniform_grid,
    wavefunction, PathSource, Route,
};
use crate::output::{Metadata, Table};
use crate::quadrature::{Lineshape, QuadSpec};
use crate::response::{
    integrate_trajectory, stationary_trajectory, variance_closed_form, variance_quadrature,
    IntegrationSpec, Scheme, SusceptibilityVariant,
};
use crate::spectra::{
    effective_field_psd, thermal_density as planck_density, zero_point_density, Bath,
};
use crate::OscillatorParams;

pub const OUT_DIR_ENV: &str = "SEDLAB_OUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "sedlab",
    version,
    about = "Charged oscillator in zero-point and thermal radiation"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Damping ratio γ/ω₀.
    #[arg(long, global = true, allow_hyphen_values = true)]
    gamma_ratio: Option<f64>,
    /// Temperature kT/ħω₀.
    #[arg(long, global = true, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// Radiation bath: zero-point, thermal or combined.
    #[arg(long, global = true)]
    kind: Option<Bath>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of field modes.
    #[arg(long, global = true)]
    modes: Option<usize>,
    /// Monte Carlo realizations.
    #[arg(long, global = true)]
    realizations: Option<usize>,
    /// Output directory, or `-` for stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SourceArg {
    Stationary,
    Integrated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LineshapeArg {
    Resonant,
    Exact,
}

impl From<LineshapeArg> for Lineshape {
    fn from(l: LineshapeArg) -> Self {
        match l {
            LineshapeArg::Resonant => Lineshape::Resonant,
            LineshapeArg::Exact => Lineshape::Exact,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate ρ₀(ω), ρ_T(ω) and the driving-field PSD S_E(ω).
    Spectrum {
        #[arg(long, default_value_t = 5.0)]
        omega_max: f64,
        #[arg(long, default_value_t = 501)]
        points: usize,
    },
    /// ⟨q²⟩ and ⟨x²⟩ by closed form, quadrature and optionally Monte Carlo.
    Variance {
        #[arg(long, value_enum, default_value_t = LineshapeArg::Resonant)]
        lineshape: LineshapeArg,
        /// Add a Monte Carlo estimate (implied by --realizations).
        #[arg(long)]
        mc: bool,
    },
    /// Thermal position density P_T(x) with a Monte Carlo estimate.
    Density {
        /// Half-width of the x grid in units of √(ħ/mω₀).
        #[arg(long, default_value_t = 6.0)]
        x_max: f64,
        #[arg(long, default_value_t = 241)]
        points: usize,
    },
    /// |[x,p]|/ħ from the field correlations, swept over γ̃.
    Commutator {
        /// Damping ratios to evaluate (ignored when --gamma-ratio is given).
        #[arg(long, value_delimiter = ',', default_value = "1e-4,1e-3,1e-2,1e-1")]
        sweep: Vec<f64>,
    },
    /// One center trajectory q(t), p(t).
    Simulate {
        #[arg(long, value_enum, default_value_t = SourceArg::Integrated)]
        source: SourceArg,
        #[arg(long, default_value_t = 200.0)]
        t_end: f64,
        #[arg(long)]
        dt: Option<f64>,
        /// Record every n-th step.
        #[arg(long, default_value_t = 10)]
        stride: usize,
    },
    /// ψ(x, t) on a position grid for one field realization.
    Wavefunction {
        #[arg(long, default_value_t = 10.0)]
        t: f64,
        #[arg(long, default_value_t = 8.0)]
        x_max: f64,
        #[arg(long, default_value_t = 512)]
        points: usize,
        #[arg(long, value_enum, default_value_t = SourceArg::Stationary)]
        source: SourceArg,
    },
    /// Pass/fail table of the main results at the chosen γ̃ and θ.
    Report,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Spectrum { .. } => "spectrum",
            Command::Variance { .. } => "variance",
            Command::Density { .. } => "density",
            Command::Commutator { .. } => "commutator",
            Command::Simulate { .. } => "simulate",
            Command::Wavefunction { .. } => "wavefunction",
            Command::Report => "report",
        }
    }
}

/// Parses `argv` (including the program name), runs the command and returns the exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(Outcome::Success) => 0,
        Ok(Outcome::ChecksFailed(n)) => {
            eprintln!("sedlab: {n} report check(s) failed");
            2
        }
        Err(e) => {
            eprintln!("sedlab: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        _ if e.is_numerical() => 3,
        Error::Io(_) | Error::Csv(_) => 1,
        _ => 2,
    }
}

enum Outcome {
    Success,
    ChecksFailed(usize),
}

/// Config file (if any) overlaid with the command-line flags.
fn effective_config(common: &Common) -> Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(path) => serde_json::from_str(&fs::read_to_string(path)?)?,
        None => RunConfig::default(),
    };
    if let Some(v) = common.gamma_ratio {
        cfg.gamma_ratio = v;
    }
    if let Some(v) = common.theta {
        cfg.theta = v;
    }
    if let Some(v) = common.kind {
        cfg.kind = v;
    }
    if let Some(v) = common.seed {
        cfg.seed = v;
    }
    if let Some(v) = common.modes {
        cfg.n_modes = v;
    }
    if let Some(v) = common.realizations {
        cfg.realizations = v;
    }
    Ok(cfg)
}

fn out_dir(common: &Common) -> Option<PathBuf> {
    match &common.out {
        Some(p) if p.as_os_str() == "-" => None,
        Some(p) => Some(p.clone()),
        None => Some(
            std::env::var_os(OUT_DIR_ENV)
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from(".")),
        ),
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let cfg = effective_config(&cli.common)?;
    let name = cli.command.name();
    let mut meta = Metadata::new(name, serde_json::to_value(&cfg)?, Some(cfg.seed));
    let mut extra = serde_json::Value::Null;
    let mut outcome = Outcome::Success;

    let table = match &cli.command {
        Command::Spectrum { omega_max, points } => {
            meta = meta
                .label(
                    "rho_zero_point",
                    "zero-point energy density per unit ω, ħω³/2π²c³",
                )
                .label(
                    "rho_thermal",
                    "Planck energy density per unit ω, (ħω³/π²c³)/(e^{ħω/kT}−1)",
                )
                .label(
                    "field_psd",
                    "one-sided driving-field PSD S_E(ω) of the selected bath",
                );
            spectrum_table(&cfg, *omega_max, *points)?
        }
        Command::Variance { lineshape, mc } => {
            meta = meta
                .label("q2", "center variance ⟨q_c²⟩ [ħ/mω₀]")
                .label(
                    "x2",
                    "position second moment ⟨x²⟩ = ħ/2mω₀ + ⟨q_c²⟩ [ħ/mω₀]",
                )
                .label(
                    "band_limited",
                    "⟨q_c²⟩ restricted to the sampled band (Monte Carlo target)",
                );
            let with_mc = *mc || cli.common.realizations.is_some();
            let (table, reports) = variance_table(&cfg, (*lineshape).into(), with_mc)?;
            extra = json!({ "reports": reports });
            table
        }
        Command::Density { x_max, points } => {
            meta = meta
                .label(
                    "density",
                    "thermal position density P_T(x), Gaussian of variance (ħ/2mω₀)coth(ħω₀/2kT)",
                )
                .label(
                    "mc_density",
                    "realization average of |ψ(x)|² = φ₀²(x − q_c)",
                );
            density_table(&cfg, *x_max, *points)?
        }
        Command::Commutator { sweep } => {
            meta = meta
                .label("resonant", "|[x,p]|/ħ, narrow-resonance integrand")
                .label("exact", "|[x,p]|/ħ, full radiation-reaction integrand")
                .label("closed_form", "(1/π)(π/2 + arctan(2/γ̃))");
            let gammas = match cli.common.gamma_ratio {
                Some(g) => vec![g],
                None => sweep.clone(),
            };
            commutator_table(&gammas)?
        }
        Command::Simulate {
            source,
            t_end,
            dt,
            stride,
        } => {
            meta = meta
                .label("q", "center coordinate q_c(t)")
                .label("p", "center momentum p_c = m q̇_c");
            simulate_table(&cfg, *source, *t_end, *dt, *stride)?
        }
        Command::Wavefunction {
            t,
            x_max,
            points,
            source,
        } => {
            meta = meta.label(
                "psi",
                "φ₀(x − q_c) exp{(i/ħ)[(p_c + eA/c)x − g(t)]}, exact solution of the driven Schrödinger equation",
            );
            let (table, info) = wavefunction_table(&cfg, *t, *x_max, *points, *source)?;
            extra = info;
            table
        }
        Command::Report => {
            meta = meta
                .label(
                    "anomaly",
                    "⟨x²⟩ for the zero-point bath: twice the ground-state value",
                )
                .label("thermal", "⟨x²⟩ for the thermal bath vs (1/2)coth(1/2θ)")
                .label("commutator", "|[x,p]|/ħ vs 1");
            let table = report_table(&cfg)?;
            let failed = table
                .column("pass")
                .map(|c| c.iter().filter(|&&v| v == 0.0).count());
            if let Some(n) = failed.filter(|&n| n > 0) {
                outcome = Outcome::ChecksFailed(n);
            }
            table
        }
    };

    emit(&cli.common, name, &table, &meta, extra)?;
    Ok(outcome)
}

#[derive(Serialize)]
struct JsonDocument<'a> {
    metadata: &'a Metadata,
    table: &'a Table,
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    extra: serde_json::Value,
}

fn emit(
    common: &Common,
    name: &str,
    table: &Table,
    meta: &Metadata,
    extra: serde_json::Value,
) -> Result<()> {
    let doc = JsonDocument {
        metadata: meta,
        table,
        extra,
    };
    match (out_dir(common), common.format) {
        (None, Format::Csv) => table.write_csv(std::io::stdout().lock()),
        (None, Format::Json) => {
            let mut out = std::io::stdout().lock();
            serde_json::to_writer_pretty(&mut out, &doc)?;
            writeln!(out)?;
            Ok(())
        }
        (Some(dir), format) => {
            fs::create_dir_all(&dir)?;
            match format {
                Format::Csv => {
                    table.write_csv(fs::File::create(dir.join(format!("{name}.csv")))?)?;
                    write_json(
                        &dir.join(format!("{name}.meta.json")),
                        &json!({ "metadata": meta, "extra": doc.extra }),
                    )
                }
                Format::Json => write_json(&dir.join(format!("{name}.json")), &doc),
            }
        }
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn spectrum_table(cfg: &RunConfig, omega_max: f64, points: usize) -> Result<Table> {
    if !(omega_max > 0.0) || points < 2 {
        return Err(Error::invalid(
            "omega_max",
            "need omega_max > 0 and at least 2 points",
        ));
    }
    let p = cfg.params()?;
    let kind = cfg.spectrum();
    kind.validate()?;
    let mut table = Table::new(["omega", "rho_zero_point", "rho_thermal", "field_psd"]);
    for w in uniform_grid(0.0, omega_max, points) {
        table.push(vec![
            w,
            zero_point_density(w, &p)?,
            planck_density(w, cfg.theta, &p)?,
            effective_field_psd(w, kind, &p)?,
        ]);
    }
    Ok(table)
}

fn variance_table(
    cfg: &RunConfig,
    lineshape: Lineshape,
    with_mc: bool,
) -> Result<(Table, Vec<crate::VarianceReport>)> {
    let kind = cfg.spectrum();
    let g = cfg.gamma_ratio;
    let quad = QuadSpec::default().with_lineshape(lineshape);
    let mut columns = vec![
        "gamma_ratio",
        "theta",
        "q2_closed_form",
        "q2_quadrature",
        "q2_quadrature_exact",
        "x2_closed_form",
        "x2_quadrature",
    ];
    let q2_closed = variance_closed_form(kind, g)?;
    let q2_quad = variance_quadrature(kind, g, &quad)?;
    let q2_exact = variance_quadrature(kind, g, &QuadSpec::exact())?;
    let mut row = vec![
        g,
        kind.theta().unwrap_or(0.0),
        q2_closed,
        q2_quad,
        q2_exact,
        q2_closed + 0.5,
        q2_quad + 0.5,
    ];
    let reports = if with_mc {
        let out = run_ensemble(&RunConfig {
            lineshape,
            ..cfg.clone()
        })?;
        let mc = out.reports[0]
            .monte_carlo
            .expect("variance estimator is on");
        columns.extend([
            "q2_monte_carlo",
            "q2_standard_error",
            "q2_band_limited",
            "realizations",
        ]);
        row.extend([
            mc.value,
            mc.standard_error,
            out.reports[0].band_limited.unwrap_or(f64::NAN),
            mc.samples as f64,
        ]);
        out.reports
    } else {
        vec![
            crate::VarianceReport::center_variance(kind, g, &quad)?,
            crate::VarianceReport::mean_square_x(kind, g, &quad)?,
        ]
    };
    let mut table = Table::new(columns);
    table.push(row);
    Ok((table, reports))
}

fn density_table(cfg: &RunConfig, x_max: f64, points: usize) -> Result<Table> {
    if !(x_max > 0.0) || points < 2 {
        return Err(Error::invalid(
            "x_max",
            "need x_max > 0 and at least 2 points",
        ));
    }
    let x = uniform_grid(-x_max, x_max, points);
    let mc_cfg = RunConfig {
        kind: Bath::Thermal,
        estimators: vec![],
        sampling: Sampling::FixedTime { t: 0.0 },
        ..cfg.clone()
    };
    let out = run_ensemble(&mc_cfg)?;
    let mc = density_estimate(&out.samples, &x)?;
    let mut table = Table::new(["x", "density", "mc_density", "mc_standard_error"]);
    for (xi, (mean, se)) in x.iter().zip(mc) {
        table.push(vec![*xi, thermal_density(*xi, cfg.theta)?, mean, se]);
    }
    Ok(table)
}

fn commutator_table(gammas: &[f64]) -> Result<Table> {
    let mut table = Table::new(["gamma_ratio", "resonant", "exact", "closed_form"]);
    for &g in gammas {
        let closed = (0.5 * std::f64::consts::PI + (2.0 / g).atan()) / std::f64::consts::PI;
        table.push(vec![
            g,
            commutator_integral(g, &QuadSpec::default())?,
            commutator_integral(g, &QuadSpec::exact())?,
            closed,
        ]);
    }
    Ok(table)
}

fn one_realization(cfg: &RunConfig) -> Result<(crate::ModeEnsemble, OscillatorParams)> {
    let p = cfg.params()?;
    let ens = sample_modes(
        cfg.spectrum(),
        &p,
        cfg.n_modes,
        cfg.grid_strategy()?,
        cfg.seed,
    )?;
    Ok((ens, p))
}

fn simulate_table(
    cfg: &RunConfig,
    source: SourceArg,
    t_end: f64,
    dt: Option<f64>,
    stride: usize,
) -> Result<Table> {
    let (ens, p) = one_realization(cfg)?;
    let traj = match source {
        SourceArg::Stationary => {
            let dt =
                dt.unwrap_or(2.0 * std::f64::consts::PI / (100.0 * ens.max_frequency().max(1.0)));
            if !(dt > 0.0 && t_end > 0.0) || stride == 0 {
                return Err(Error::invalid(
                    "t_end",
                    "need t_end > 0, dt > 0 and stride >= 1",
                ));
            }
            let n = (t_end / dt).floor() as usize + 1;
            let mut traj =
                stationary_trajectory(&ens, &p, SusceptibilityVariant::Exact, 0.0, dt, n)?;
            let keep = |v: &mut Vec<f64>| *v = v.iter().step_by(stride).copied().collect();
            keep(&mut traj.times);
            keep(&mut traj.q);
            keep(&mut traj.p);
            traj
        }
        SourceArg::Integrated => {
            let mut spec = IntegrationSpec::new(t_end);
            spec.dt = dt;
            spec.stride = stride;
            spec.transient = crate::response::Transient::None;
            spec.scheme = Scheme::Rk4;
            integrate_trajectory(&ens, &p, &spec)?
        }
    };
    Ok(traj.to_table())
}

fn wavefunction_table(
    cfg: &RunConfig,
    t: f64,
    x_max: f64,
    points: usize,
    source: SourceArg,
) -> Result<(Table, serde_json::Value)> {
    let (ens, p) = one_realization(cfg)?;
    let source = match source {
        SourceArg::Stationary => PathSource::Stationary(SusceptibilityVariant::Exact),
        SourceArg::Integrated => PathSource::Integrated(Scheme::Rk4),
    };
    let psi = wavefunction(&uniform_grid(-x_max, x_max, points), t, &ens, &p, source)?;
    let info = json!({
        "t": psi.t,
        "center": psi.center,
        "kinetic_phase": psi.kinetic_phase,
        "g": psi.g,
        "norm": psi.norm,
    });
    Ok((psi.to_table(), info))
}

/// Pass/fail rows for the anomaly, the thermal result, closed form vs
/// quadrature, the commutator, the thermal density and a Monte Carlo check.
fn report_table(cfg: &RunConfig) -> Result<Table> {
    let g = cfg.gamma_ratio;
    let theta = cfg.theta;
    let resonant = QuadSpec::default();
    let mut table = Table::labeled(
        "check",
        [
            "gamma_ratio",
            "theta",
            "value",
            "target",
            "tolerance",
            "pass",
        ],
    );
    let mut check =
        |label: &str, theta: f64, value: f64, target: f64, tolerance: f64, relative: bool| {
            let diff = (value - target).abs();
            let scale = if relative { target.abs() } else { 1.0 };
            let pass = diff <= tolerance * scale;
            table.push_labeled(
                label,
                vec![
                    g,
                    theta,
                    value,
                    target,
                    tolerance,
                    f64::from(u8::from(pass)),
                ],
            );
        };

    let zp = mean_square_x(
        crate::SpectrumKind::ZeroPoint,
        g,
        Route::Quadrature(resonant),
    )?;
    check("zero_point_x2", 0.0, zp, 1.0, 2e-3, true);
    check("zero_point_ratio_to_ground", 0.0, zp / 0.5, 2.0, 2e-3, true);
    let closed = variance_closed_form(crate::SpectrumKind::ZeroPoint, g)?;
    let quad = variance_quadrature(crate::SpectrumKind::ZeroPoint, g, &resonant)?;
    check(
        "closed_vs_quadrature",
        0.0,
        (quad - closed).abs() / closed,
        0.0,
        1e-2 * g + 1e-8,
        false,
    );

    let thermal_kind = crate::SpectrumKind::Thermal { theta };
    let thermal = mean_square_x(thermal_kind, g, Route::Quadrature(resonant))?;
    let target = thermal_density_variance(theta)?;
    check("thermal_x2", theta, thermal, target, 5e-3, true);

    let comm = commutator_integral(g, &resonant)?;
    check("commutator", 0.0, comm, 1.0, 2.0 * g, false);

    let sd = target.sqrt();
    let x = uniform_grid(-12.0 * sd, 12.0 * sd, 4001);
    let h = x[1] - x[0];
    let rho: Vec<f64> = x
        .iter()
        .map(|&x| thermal_density(x, theta))
        .collect::<Result<_>>()?;
    let norm: f64 = rho.iter().sum::<f64>() * h;
    let var: f64 = x.iter().zip(&rho).map(|(x, r)| x * x * r).sum::<f64>() * h;
    check("density_normalization", theta, norm, 1.0, 1e-6, false);
    check("density_variance", theta, var, target, 1e-4, true);

    for (label, kind) in [
        ("mc_zero_point_q2", crate::Bath::ZeroPoint),
        ("mc_thermal_q2", crate::Bath::Thermal),
    ] {
        let run = RunConfig {
            kind,
            estimators: vec![crate::montecarlo::Estimator::Variance],
            ..cfg.clone()
        };
        let out = run_ensemble(&run)?;
        let var = out.estimates.variance.as_ref().expect("variance requested");
        let reference = out.reports[0].quadrature;
        let tolerance = 3.0 * var.standard_error;
        let theta = if kind == crate::Bath::ZeroPoint {
            0.0
        } else {
            theta
        };
        check(label, theta, var.value, reference, tolerance, false);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("sedlab").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn flags_override_config_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        fs::write(&path, r#"{"gamma_ratio": 0.05, "seed": 9, "n_modes": 64}"#).unwrap();
        let cli = parse(&[
            "variance",
            "--config",
            path.to_str().unwrap(),
            "--seed",
            "4",
        ]);
        let cfg = effective_config(&cli.common).unwrap();
        assert_eq!(cfg.gamma_ratio, 0.05);
        assert_eq!(cfg.seed, 4);
        assert_eq!(cfg.n_modes, 64);
    }

    #[test]
    fn global_flags_after_subcommand() {
        let cli = parse(&["density", "--theta", "0", "--out", "-"]);
        assert_eq!(cli.common.theta, Some(0.0));
        assert!(out_dir(&cli.common).is_none());
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(dispatch(["sedlab", "variance", "--bogus"]), 1);
        assert_eq!(dispatch(["sedlab"]), 1);
        assert_eq!(dispatch(["sedlab", "--help"]), 0);
    }

    #[test]
    fn exit_codes_by_error_class() {
        assert_eq!(exit_code(&Error::invalid("x", "bad")), 2);
        assert_eq!(exit_code(&Error::NonFinite { time: 1.0 }), 3);
        let nc = Error::NonConvergence {
            achieved: 1.0,
            requested: 0.1,
            intervals: 3,
        };
        assert_eq!(exit_code(&nc), 3);
    }

    #[test]
    fn variance_table_closed_form_column() {
        let cfg = RunConfig {
            gamma_ratio: 1e-3,
            ..RunConfig::default()
        };
        let (table, _) = variance_table(&cfg, Lineshape::Resonant, false).unwrap();
        let closed = table.column("q2_closed_form").unwrap()[0];
        assert!((closed - 0.499_920_4).abs() < 1e-7);
    }

    #[test]
    fn density_at_zero_temperature_is_ground_state() {
        let cfg = RunConfig {
            theta: 0.0,
            realizations: 4,
            n_modes: 64,
            ..RunConfig::default()
        };
        let table = density_table(&cfg, 4.0, 41).unwrap();
        let p = OscillatorParams::reduced(0.0).unwrap();
        for row in &table.rows {
            let phi2 = crate::observables::ground_gaussian(row[0], &p).powi(2);
            assert_eq!(row[1], phi2);
            assert_eq!(row[2], phi2);
            assert_eq!(row[3], 0.0);
        }
    }

    #[test]
    fn report_passes_at_thermal_unit_point() {
        let cfg = RunConfig {
            gamma_ratio: 1e-3,
            theta: 0.910239,
            n_modes: 1024,
            ..RunConfig::default()
        };
        let table = report_table(&cfg).unwrap();
        let labels = &table.labels.as_ref().unwrap().1;
        let thermal = labels.iter().position(|l| l == "thermal_x2").unwrap();
        assert!((table.rows[thermal][2] - 1.0).abs() < 1e-3);
        assert!(
            table.column("pass").unwrap().iter().all(|&p| p == 1.0),
            "{table:?}"
        );
    }
}
