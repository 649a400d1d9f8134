//! Adaptive Gauss-Kronrod integration.
//!
//! Every engine here is built on one global-adaptive loop over G7/K15
//! panels: the panel with the largest `|K15 - G7|` is bisected until the
//! summed estimate falls below `max(abs_tolerance, rel_tolerance * |I|)`.
//! Semi-infinite pieces use `x = a + (1 - u)/u` on `u ∈ (0, 1]`, which keeps
//! the far tail (u → 0) resolvable down to the smallest doubles.
//!
//! On top of that loop sit
//! - [`integrate_1d`] / [`integrate_with_breakpoints`] for plain integrals,
//! - [`integrate_radial`] for spherically symmetric integrands on ℝⁿ,
//! - [`integrate_nd`] for iterated (tensor) integrals with n ≤ 3,
//! - [`fourier_integral`] for cosine transforms of even functions.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::specfun::{self, SpecialFunctionError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid integration interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error(
        "no convergence after {subdivisions} subdivisions (value {value:e}, error estimate {error_estimate:e})"
    )]
    NonConvergence {
        value: f64,
        error_estimate: f64,
        subdivisions: usize,
    },
    #[error("integrand returned {value} at x = {at}")]
    NonFinite { at: f64, value: f64 },
    #[error("tensor-product integration supports n = 1, 2, 3; got n = {0}")]
    Dimension(usize),
    #[error("integrand decays too slowly for an untruncated radial integral; a tail bound is required")]
    MissingTailBound,
    #[error("tail bound never dropped below {0:e}")]
    TailBoundUnreachable(f64),
    #[error(transparent)]
    Special(#[from] SpecialFunctionError),
}

/// Tolerances and limits shared by all integrators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    pub abs_tolerance: f64,
    pub rel_tolerance: f64,
    /// Maximum number of panel bisections per adaptive run.
    pub max_subdivisions: usize,
    /// Mass allowed beyond a truncation radius on infinite domains.
    pub tail_mass_bound: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tolerance: 1e-10,
            rel_tolerance: 1e-9,
            max_subdivisions: 2000,
            tail_mass_bound: 1e-12,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<(), QuadratureError> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.abs_tolerance) {
            return Err(QuadratureError::InvalidConfig(format!(
                "abs_tolerance must be positive, got {}",
                self.abs_tolerance
            )));
        }
        if !positive(self.rel_tolerance) {
            return Err(QuadratureError::InvalidConfig(format!(
                "rel_tolerance must be positive, got {}",
                self.rel_tolerance
            )));
        }
        if !positive(self.tail_mass_bound) {
            return Err(QuadratureError::InvalidConfig(format!(
                "tail_mass_bound must be positive, got {}",
                self.tail_mass_bound
            )));
        }
        if self.max_subdivisions < 10 {
            return Err(QuadratureError::InvalidConfig(format!(
                "max_subdivisions must be at least 10, got {}",
                self.max_subdivisions
            )));
        }
        Ok(())
    }

    /// Same limits with both tolerances multiplied by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        Self {
            abs_tolerance: self.abs_tolerance * factor,
            rel_tolerance: self.rel_tolerance * factor,
            ..*self
        }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tolerance.max(self.rel_tolerance * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegralResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

impl IntegralResult {
    fn scaled(self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            error_estimate: self.error_estimate * factor.abs(),
            evaluations: self.evaluations,
        }
    }
}

/// Integrand value plus an error density carried in from an inner
/// (nested) integration. Plain integrands carry zero.
pub(crate) type Sample = (f64, f64);

// ---------------------------------------------------------------------------
// G7/K15 rule
// ---------------------------------------------------------------------------

/// Kronrod abscissae, descending; odd indices are the Gauss nodes, the last is 0.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// How a panel coordinate maps onto the integration variable.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Mapping {
    Identity,
    /// `x = origin + (1-u)/u` on `(0, 1]`.
    RightTail(f64),
    /// `x = origin - (1-u)/u` on `(0, 1]`.
    LeftTail(f64),
}

impl Mapping {
    /// Returns `(x, |dx/du|)`, or `None` at the unreachable endpoint u = 0.
    fn apply(self, s: f64) -> Option<(f64, f64)> {
        match self {
            Mapping::Identity => Some((s, 1.0)),
            Mapping::RightTail(origin) | Mapping::LeftTail(origin) => {
                let q = s;
                if q <= 0.0 {
                    return None;
                }
                let offset = (1.0 - q) / q;
                let x = if matches!(self, Mapping::RightTail(_)) {
                    origin + offset
                } else {
                    origin - offset
                };
                Some((x, 1.0 / (q * q)))
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    mapping: Mapping,
    value: f64,
    error: f64,
    carried: f64,
    splittable: bool,
}

fn gk15<F>(f: &mut F, a: f64, b: f64, mapping: Mapping, evals: &mut usize) -> Result<Panel, QuadratureError>
where
    F: FnMut(f64) -> Result<Sample, QuadratureError>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut eval = |s: f64| -> Result<Sample, QuadratureError> {
        match mapping.apply(s) {
            Some((x, jac)) => {
                *evals += 1;
                let (v, e) = f(x)?;
                Ok((v * jac, e * jac))
            }
            None => Ok((0.0, 0.0)),
        }
    };

    let mut values = [0.0; 15];
    let (fc, ec) = eval(center)?;
    values[14] = fc;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut absolute = WGK[7] * fc.abs();
    let mut carried = WGK[7] * ec.abs();
    for i in 0..7 {
        let dx = half * XGK[i];
        let (f1, e1) = eval(center - dx)?;
        let (f2, e2) = eval(center + dx)?;
        values[2 * i] = f1;
        values[2 * i + 1] = f2;
        kronrod += WGK[i] * (f1 + f2);
        absolute += WGK[i] * (f1.abs() + f2.abs());
        carried += WGK[i] * (e1.abs() + e2.abs());
        if i % 2 == 1 {
            gauss += WG[i / 2] * (f1 + f2);
        }
    }
    // QUADPACK's pessimistic scaling of |K15 - G7|.
    let mean = 0.5 * kronrod;
    let mut spread = WGK[7] * (fc - mean).abs();
    for i in 0..7 {
        spread += WGK[i] * ((values[2 * i] - mean).abs() + (values[2 * i + 1] - mean).abs());
    }
    let h = half.abs();
    let (spread, absolute) = (spread * h, absolute * h);
    let mut error = ((kronrod - gauss) * half).abs();
    if spread != 0.0 && error != 0.0 {
        error = spread * (200.0 * error / spread).powf(1.5).min(1.0);
    }
    if absolute > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * absolute);
    }
    let mid = center;
    Ok(Panel {
        a,
        b,
        mapping,
        value: kronrod * half,
        error,
        carried: carried * half.abs(),
        splittable: mid > a && mid < b,
    })
}

#[derive(PartialEq)]
struct ByError(f64, usize);

impl Eq for ByError {}

impl PartialOrd for ByError {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ByError {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then_with(|| other.1.cmp(&self.1))
    }
}

/// Builds the initial panel list for sorted breakpoints whose ends may be infinite.
fn initial_segments(points: &[f64]) -> Result<Vec<(f64, f64, Mapping)>, QuadratureError> {
    if points.len() < 2 {
        return Err(QuadratureError::InvalidConfig(
            "at least two breakpoints are required".into(),
        ));
    }
    let first = points[0];
    let last = points[points.len() - 1];
    if first.is_nan() || last.is_nan() || !(first < last) {
        return Err(QuadratureError::InvalidInterval { a: first, b: last });
    }
    let mut finite: Vec<f64> = points.iter().copied().filter(|p| p.is_finite()).collect();
    if points[1..points.len() - 1].iter().any(|p| !p.is_finite()) {
        return Err(QuadratureError::InvalidInterval { a: first, b: last });
    }
    if finite.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(QuadratureError::InvalidConfig(
            "breakpoints must be sorted".into(),
        ));
    }
    finite.dedup();
    if finite.is_empty() {
        finite.push(0.0);
    }
    if first == f64::INFINITY || last == f64::NEG_INFINITY {
        return Err(QuadratureError::InvalidInterval { a: first, b: last });
    }

    let mut segments = Vec::new();
    if first == f64::NEG_INFINITY {
        segments.push((0.0, 1.0, Mapping::LeftTail(finite[0])));
    }
    for w in finite.windows(2) {
        if w[1] > w[0] {
            segments.push((w[0], w[1], Mapping::Identity));
        }
    }
    if last == f64::INFINITY {
        segments.push((0.0, 1.0, Mapping::RightTail(finite[finite.len() - 1])));
    }
    if segments.is_empty() {
        return Err(QuadratureError::InvalidInterval { a: first, b: last });
    }
    Ok(segments)
}

/// Global adaptive loop. `points` are sorted breakpoints; the first and last
/// may be infinite.
pub(crate) fn integrate_samples<F>(
    f: &mut F,
    points: &[f64],
    cfg: &QuadratureConfig,
) -> Result<IntegralResult, QuadratureError>
where
    F: FnMut(f64) -> Result<Sample, QuadratureError>,
{
    cfg.validate()?;
    let segments = initial_segments(points)?;
    // Both tails are integrated over u ∈ (0, 1] with weight 1/u², e.g.
    // ∫_{-∞}^{p} f dx = ∫_0^1 f(p - (1-u)/u) du/u².
    let mut evals = 0;
    let mut panels = Vec::with_capacity(segments.len() + 2 * cfg.max_subdivisions);
    for (a, b, mapping) in segments {
        panels.push(gk15(f, a, b, mapping, &mut evals)?);
    }
    let mut heap: BinaryHeap<ByError> = panels
        .iter()
        .enumerate()
        .filter(|(_, p)| p.splittable)
        .map(|(i, p)| ByError(p.error, i))
        .collect();

    let mut subdivisions = 0;
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        if error <= cfg.target(value) {
            let carried: f64 = panels.iter().map(|p| p.carried).sum();
            return Ok(IntegralResult {
                value,
                error_estimate: error + carried,
                evaluations: evals,
            });
        }
        let Some(ByError(_, index)) = heap.pop() else {
            return Err(QuadratureError::NonConvergence {
                value,
                error_estimate: error,
                subdivisions,
            });
        };
        if subdivisions >= cfg.max_subdivisions {
            return Err(QuadratureError::NonConvergence {
                value,
                error_estimate: error,
                subdivisions,
            });
        }
        subdivisions += 1;
        let parent = panels[index];
        let mid = 0.5 * (parent.a + parent.b);
        let left = gk15(f, parent.a, mid, parent.mapping, &mut evals)?;
        let right = gk15(f, mid, parent.b, parent.mapping, &mut evals)?;
        panels[index] = left;
        panels.push(right);
        let right_index = panels.len() - 1;
        if left.splittable {
            heap.push(ByError(left.error, index));
        }
        if right.splittable {
            heap.push(ByError(right.error, right_index));
        }
    }
}

fn checked(f: impl FnMut(f64) -> f64) -> impl FnMut(f64) -> Result<Sample, QuadratureError> {
    let mut f = f;
    move |x| {
        let v = f(x);
        if v.is_finite() {
            Ok((v, 0.0))
        } else {
            Err(QuadratureError::NonFinite { at: x, value: v })
        }
    }
}

/// ∫_a^b f(x) dx; either end may be infinite.
pub fn integrate_1d<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<IntegralResult, QuadratureError>
where
    F: FnMut(f64) -> f64,
{
    integrate_with_breakpoints(f, &[a, b], cfg)
}

/// Like [`integrate_1d`] but with interior breakpoints (kinks, jumps, peaks)
/// that seed the initial partition. Points must be sorted; only the first and
/// last may be infinite.
pub fn integrate_with_breakpoints<F>(
    f: F,
    points: &[f64],
    cfg: &QuadratureConfig,
) -> Result<IntegralResult, QuadratureError>
where
    F: FnMut(f64) -> f64,
{
    let mut g = checked(f);
    integrate_samples(&mut g, points, cfg)
}

// ---------------------------------------------------------------------------
// Radial integration
// ---------------------------------------------------------------------------

/// Surface area σ_{n-1} = 2π^{n/2}/Γ(n/2) of the unit sphere in ℝⁿ.
pub fn unit_sphere_area(n: usize) -> Result<f64, QuadratureError> {
    if n == 0 {
        return Err(QuadratureError::Dimension(0));
    }
    let half = n as f64 / 2.0;
    Ok(2.0 * PI.powf(half) / specfun::gamma(half)?)
}

/// How the radial half-line is closed off.
#[derive(Clone, Copy)]
pub enum RadialTail<'a> {
    /// Integrand decays fast enough for the mapped half-line.
    Rapid,
    /// `bound(R)` is an upper bound for the mass beyond radius R; the domain
    /// is truncated where it drops below `tail_mass_bound`.
    Bounded(&'a dyn Fn(f64) -> f64),
    /// Integrand vanishes beyond this radius.
    Support(f64),
}

/// σ_{n-1} ∫₀^∞ g(r) r^{n-1} dr.
pub fn integrate_radial<G>(
    g: G,
    n: usize,
    tail: RadialTail<'_>,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult, QuadratureError>
where
    G: FnMut(f64) -> f64,
{
    integrate_radial_scaled(g, n, tail, 1.0, &[], cfg)
}

/// Radial integral with a characteristic length `scale` (used to seed a
/// geometric partition `scale·2^j`) and extra radii where g is not smooth.
pub fn integrate_radial_scaled<G>(
    g: G,
    n: usize,
    tail: RadialTail<'_>,
    scale: f64,
    features: &[f64],
    cfg: &QuadratureConfig,
) -> Result<IntegralResult, QuadratureError>
where
    G: FnMut(f64) -> f64,
{
    let mut g = checked(g);
    radial_samples(&mut g, n, tail, scale, features, cfg)
}

pub(crate) fn radial_samples<G>(
    g: &mut G,
    n: usize,
    tail: RadialTail<'_>,
    scale: f64,
    features: &[f64],
    cfg: &QuadratureConfig,
) -> Result<IntegralResult, QuadratureError>
where
    G: FnMut(f64) -> Result<Sample, QuadratureError>,
{
    cfg.validate()?;
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(QuadratureError::InvalidConfig(format!(
            "radial scale must be positive, got {scale}"
        )));
    }
    let sigma = unit_sphere_area(n)?;
    let power = (n - 1) as i32;

    let (outer, truncation_error) = match tail {
        RadialTail::Rapid => {
            let probe = 1e6 * scale;
            let (v, _) = g(probe)?;
            if sigma * probe.powi(n as i32) * v.abs() > cfg.tail_mass_bound {
                return Err(QuadratureError::MissingTailBound);
            }
            (f64::INFINITY, 0.0)
        }
        RadialTail::Bounded(bound) => {
            let mut radius = scale;
            while bound(radius) > cfg.tail_mass_bound {
                radius *= 2.0;
                if !radius.is_finite() || radius > 1e300 {
                    return Err(QuadratureError::TailBoundUnreachable(cfg.tail_mass_bound));
                }
            }
            (radius, bound(radius))
        }
        RadialTail::Support(radius) => {
            if !(radius > 0.0) {
                return Err(QuadratureError::InvalidInterval { a: 0.0, b: radius });
            }
            (radius, 0.0)
        }
    };

    let mut points = vec![0.0];
    let mut r = scale / 256.0;
    let geometric_limit = if outer.is_finite() { outer } else { 256.0 * scale };
    while r < geometric_limit {
        points.push(r);
        r *= 2.0;
    }
    points.extend(features.iter().copied().filter(|&f| f > 0.0 && f < geometric_limit));
    points.sort_by(f64::total_cmp);
    points.dedup();
    if outer.is_finite() {
        points.push(outer);
    } else {
        points.push(f64::INFINITY);
    }

    let mut integrand = |r: f64| -> Result<Sample, QuadratureError> {
        let (v, e) = g(r)?;
        let w = sigma * r.powi(power);
        Ok((v * w, e * w))
    };
    let mut result = integrate_samples(&mut integrand, &points, cfg)?;
    result.error_estimate += truncation_error;
    Ok(result)
}

// ---------------------------------------------------------------------------
// Tensor-product integration
// ---------------------------------------------------------------------------

/// ∫ over a box in ℝⁿ (n ≤ 3) as an iterated adaptive integral. Box sides may
/// be infinite.
pub fn integrate_nd<F>(f: F, bounds: &[(f64, f64)], cfg: &QuadratureConfig) -> Result<IntegralResult, QuadratureError>
where
    F: FnMut(&[f64]) -> f64,
{
    let axes: Vec<Vec<f64>> = bounds.iter().map(|&(a, b)| vec![a, b]).collect();
    integrate_nd_with_breakpoints(f, &axes, cfg)
}

/// Tensor integration with per-axis breakpoint lists.
pub fn integrate_nd_with_breakpoints<F>(
    f: F,
    axes: &[Vec<f64>],
    cfg: &QuadratureConfig,
) -> Result<IntegralResult, QuadratureError>
where
    F: FnMut(&[f64]) -> f64,
{
    let mut f = f;
    let mut g = |x: &[f64]| -> Result<Sample, QuadratureError> {
        let v = f(x);
        if v.is_finite() {
            Ok((v, 0.0))
        } else {
            Err(QuadratureError::NonFinite { at: x[0], value: v })
        }
    };
    nd_samples(&mut g, axes, cfg)
}

pub(crate) fn nd_samples<F>(f: &mut F, axes: &[Vec<f64>], cfg: &QuadratureConfig) -> Result<IntegralResult, QuadratureError>
where
    F: FnMut(&[f64]) -> Result<Sample, QuadratureError>,
{
    let n = axes.len();
    if !(1..=3).contains(&n) {
        return Err(QuadratureError::Dimension(n));
    }
    let mut point = vec![0.0; n];
    let mut evals = 0;
    let mut result = nested(f, axes, &mut point, 0, cfg, &mut evals)?;
    result.evaluations = evals;
    Ok(result)
}

fn nested<F>(
    f: &mut F,
    axes: &[Vec<f64>],
    point: &mut Vec<f64>,
    depth: usize,
    cfg: &QuadratureConfig,
    evals: &mut usize,
) -> Result<IntegralResult, QuadratureError>
where
    F: FnMut(&[f64]) -> Result<Sample, QuadratureError>,
{
    let last = depth + 1 == axes.len();
    let inner_cfg = cfg.tightened(0.1);
    let mut axis_integrand = |s: f64| -> Result<Sample, QuadratureError> {
        point[depth] = s;
        if last {
            *evals += 1;
            f(point)
        } else {
            let inner = nested(f, axes, point, depth + 1, &inner_cfg, evals)?;
            Ok((inner.value, inner.error_estimate))
        }
    };
    integrate_samples(&mut axis_integrand, &axes[depth], cfg)
}

// ---------------------------------------------------------------------------
// Fourier (cosine) integrals
// ---------------------------------------------------------------------------

const FOURIER_MAX_CELLS: usize = 2000;
const FOURIER_WINDOW: usize = 40;

/// ∫_ℝ g(x) e^{ixt} dx for even g, computed as `2 ∫₀^∞ g(x) cos(tx) dx`.
///
/// The half-line is cut into half-period cells `[jπ/|t|, (j+1)π/|t|]`, each
/// split at its quarter point and integrated adaptively. The partial sums form
/// an alternating sequence that is accelerated with Wynn's ε-algorithm.
pub fn fourier_integral<G>(g: G, t: f64, cfg: &QuadratureConfig) -> Result<IntegralResult, QuadratureError>
where
    G: FnMut(f64) -> f64,
{
    cfg.validate()?;
    if !t.is_finite() {
        return Err(QuadratureError::InvalidConfig(format!("frequency must be finite, got {t}")));
    }
    let mut g = g;
    if t == 0.0 {
        return Ok(integrate_1d(g, 0.0, f64::INFINITY, cfg)?.scaled(2.0));
    }
    let w = t.abs();
    let cell = PI / w;
    let cell_cfg = cfg.tightened(0.01);

    let mut partial_sums = Vec::new();
    let mut sum = 0.0;
    let mut cell_errors = 0.0;
    let mut evaluations = 0;
    let mut previous_estimate: Option<f64> = None;
    let mut settled = 0;
    let mut negligible = 0;
    for j in 0..FOURIER_MAX_CELLS {
        let a = j as f64 * cell;
        let points = [a, a + 0.5 * cell, a + cell];
        let piece = integrate_with_breakpoints(|x| g(x) * (w * x).cos(), &points, &cell_cfg)?;
        sum += piece.value;
        cell_errors += piece.error_estimate;
        evaluations += piece.evaluations;
        partial_sums.push(sum);

        let tol = cfg.target(2.0 * sum);
        if piece.value.abs() * 2.0 <= 1e-3 * tol {
            negligible += 1;
            if negligible >= 3 {
                return Ok(IntegralResult {
                    value: 2.0 * sum,
                    error_estimate: 2.0 * cell_errors,
                    evaluations,
                });
            }
        } else {
            negligible = 0;
        }

        if j >= 6 {
            let start = partial_sums.len().saturating_sub(FOURIER_WINDOW);
            let (estimate, spread) = wynn_epsilon(&partial_sums[start..]);
            if let Some(prev) = previous_estimate {
                let change = (estimate - prev).abs().max(spread);
                if 2.0 * change <= 0.1 * cfg.target(2.0 * estimate) {
                    settled += 1;
                    if settled >= 2 {
                        return Ok(IntegralResult {
                            value: 2.0 * estimate,
                            error_estimate: 2.0 * (change + cell_errors),
                            evaluations,
                        });
                    }
                } else {
                    settled = 0;
                }
            }
            previous_estimate = Some(estimate);
        }
    }
    Err(QuadratureError::NonConvergence {
        value: 2.0 * previous_estimate.unwrap_or(sum),
        error_estimate: f64::NAN,
        subdivisions: FOURIER_MAX_CELLS,
    })
}

/// Wynn's ε-algorithm on a sequence of partial sums. Returns the deepest
/// even-column estimate and its distance to the previous even-column estimate.
pub(crate) fn wynn_epsilon(seq: &[f64]) -> (f64, f64) {
    let n = seq.len();
    if n == 0 {
        return (0.0, f64::INFINITY);
    }
    if n < 3 {
        let last = seq[n - 1];
        let spread = if n == 2 { (seq[1] - seq[0]).abs() } else { f64::INFINITY };
        return (last, spread);
    }
    // prev = column k-1, curr = column k; column 0 is the sequence itself.
    let mut prev = vec![0.0; n + 1];
    let mut curr: Vec<f64> = seq.to_vec();
    let mut best = seq[n - 1];
    let mut best_prev = seq[n - 2];
    let mut k = 0;
    while curr.len() >= 2 {
        let mut next = Vec::with_capacity(curr.len() - 1);
        for i in 0..curr.len() - 1 {
            let diff = curr[i + 1] - curr[i];
            if diff == 0.0 || !diff.is_finite() {
                if k % 2 == 0 && diff == 0.0 {
                    // Exact convergence in an estimate column.
                    return (curr[i + 1], 0.0);
                }
                return (best, (best - best_prev).abs());
            }
            next.push(prev[i + 1] + 1.0 / diff);
        }
        k += 1;
        prev = curr;
        curr = next;
        if k % 2 == 0 && !curr.is_empty() {
            let candidate = curr[curr.len() - 1];
            if !candidate.is_finite() {
                break;
            }
            best_prev = best;
            best = candidate;
        }
    }
    (best, (best - best_prev).abs())
}
