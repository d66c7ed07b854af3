//! Globally adaptive 21-point Gauss–Kronrod quadrature over a union of finite
//! panels and an optional semi-infinite tail.
//!
//! The resonance integrands in this crate have widths down to `10⁻¹⁰` of their
//! domain, so callers always pass breakpoints that bracket the peak; the
//! adaptive bisection then only has to resolve each panel.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which form of the spectral integrand to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Lineshape {
    /// Narrow-resonance reduction: the denominator is replaced by
    /// `4ω₀²(ω−ω₀)² + τ²ω₀⁶` and every slowly varying factor (powers of ω and the
    /// bath weight) is frozen at `ω₀`.
    #[default]
    Resonant,
    /// The full `(ω²−ω₀²)² + τ²ω⁶` denominator with the spectral numerator evaluated at ω.
    Exact,
}

/// Tolerances and integrand choice for the spectral quadratures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
    pub lineshape: Lineshape,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-11,
            abs_tol: 1e-15,
            max_intervals: 4000,
            lineshape: Lineshape::Resonant,
        }
    }
}

impl QuadSpec {
    pub fn exact() -> Self {
        Self {
            lineshape: Lineshape::Exact,
            ..Self::default()
        }
    }

    pub fn with_lineshape(self, lineshape: Lineshape) -> Self {
        Self { lineshape, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub abs_error: f64,
    pub intervals: usize,
    pub evaluations: usize,
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_334_010_755,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// One Gauss–Kronrod panel: (integral, error estimate).
fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    let mut abs_sum = WGK[10] * fc.abs();
    let mut fv = [(0.0, 0.0); 10];
    for (j, &x) in XGK[..10].iter().enumerate() {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[j] = (f1, f2);
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[10] * (fc - mean).abs();
    for (j, &(f1, f2)) in fv.iter().enumerate() {
        asc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
    }
    let result = kronrod * half;
    let res_abs = abs_sum * half.abs();
    let res_asc = asc * half.abs();
    let mut err = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (result, err)
}

#[derive(Clone, Copy)]
enum Panel {
    Finite,
    // ω = origin + s/(1−s), s ∈ [0, 1)
    Tail { origin: f64 },
}

struct Interval {
    a: f64,
    b: f64,
    panel: Panel,
    value: f64,
    error: f64,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Interval {}

impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn evaluate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panel: Panel) -> Interval {
    let (value, error) = match panel {
        Panel::Finite => gauss_kronrod(f, a, b),
        Panel::Tail { origin } => {
            let g = |s: f64| {
                let one_minus = 1.0 - s;
                let w = origin + s / one_minus;
                f(w) / (one_minus * one_minus)
            };
            gauss_kronrod(&g, a, b)
        }
    };
    Interval {
        a,
        b,
        panel,
        value,
        error,
    }
}

/// Integrates `f` over `[breaks[0], breaks[last]]`, plus `[breaks[last], ∞)` when
/// `tail` is set. Breakpoints must be strictly increasing.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    tail: bool,
    rel_tol: f64,
    abs_tol: f64,
    max_intervals: usize,
) -> Result<Quadrature> {
    if breaks.is_empty() || (breaks.len() < 2 && !tail) {
        return Err(Error::invalid(
            "breaks",
            "need an interval to integrate over",
        ));
    }
    if breaks.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("breaks", "must be strictly increasing"));
    }
    let mut heap = BinaryHeap::new();
    for w in breaks.windows(2) {
        heap.push(evaluate(&f, w[0], w[1], Panel::Finite));
    }
    if tail {
        let origin = *breaks.last().expect("non-empty");
        heap.push(evaluate(&f, 0.0, 1.0, Panel::Tail { origin }));
    }
    let mut evaluations = 21 * heap.len();
    loop {
        let (value, error) = heap
            .iter()
            .fold((0.0, 0.0), |(v, e), iv| (v + iv.value, e + iv.error));
        let tolerance = abs_tol.max(rel_tol * value.abs());
        if !value.is_finite() {
            return Err(Error::NonConvergence {
                achieved: f64::INFINITY,
                requested: tolerance,
                intervals: heap.len(),
            });
        }
        if error <= tolerance {
            return Ok(Quadrature {
                value,
                abs_error: error,
                intervals: heap.len(),
                evaluations,
            });
        }
        let worst = heap.peek().expect("non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        let resolvable = mid > worst.a && mid < worst.b;
        if heap.len() >= max_intervals || !resolvable {
            return Err(Error::NonConvergence {
                achieved: error,
                requested: tolerance,
                intervals: heap.len(),
            });
        }
        let worst = heap.pop().expect("non-empty");
        heap.push(evaluate(&f, worst.a, mid, worst.panel));
        heap.push(evaluate(&f, mid, worst.b, worst.panel));
        evaluations += 42;
    }
}
