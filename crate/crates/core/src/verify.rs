//! Numerical checks of the kernel's analytic properties.
//!
//! Each check returns a [`VerificationReport`] with a measured discrepancy and
//! the threshold it is judged against; `pass` is exactly
//! `discrepancy <= threshold`. Reports serialize to one JSON object per line.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};
use thiserror::Error;

use crate::kernel::{KernelError, KernelEvaluator, ProblemParams};
use crate::quadrature::{self, QuadratureConfig, QuadratureError, RadialTail};
use crate::solver::{BoundaryFunction, Solver, SolverError};
use crate::specfun::{self, SpecialFunctionAccuracy, SpecialFunctionError};

pub const NORMALIZATION_THRESHOLD: f64 = 1e-8;
pub const PDE_RESIDUAL_THRESHOLD: f64 = 1e-6;
pub const DELTA_THRESHOLD: f64 = 1e-3;
pub const FOURIER_THRESHOLD: f64 = 1e-6;
pub const HANKEL_THRESHOLD: f64 = 1e-6;
pub const WEAK_CONVERGENCE_THRESHOLD: f64 = 1e-2;
pub const ODE_THRESHOLD: f64 = 1e-10;
pub const AIRY_MACDONALD_THRESHOLD: f64 = 1e-10;

/// Default finite-difference scale, ε^{1/6}. Balances the O(h⁴) error left
/// after one Richardson step against the ε/h² roundoff of a second difference.
pub fn default_fd_scale() -> f64 {
    f64::EPSILON.powf(1.0 / 6.0)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Special(#[from] SpecialFunctionError),
    #[error("finite-difference step underflows at x = {x:?}, y = {y}")]
    StepUnderflow { x: Vec<f64>, y: f64 },
    #[error("invalid check input: {0}")]
    InvalidInput(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub params: Value,
    #[serde(serialize_with = "finite_or_string")]
    pub discrepancy: f64,
    pub threshold: f64,
    pub pass: bool,
}

fn finite_or_string<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_str(&v.to_string())
    }
}

impl VerificationReport {
    pub fn new(check: &str, params: Value, discrepancy: f64, threshold: f64) -> Self {
        Self {
            check: check.to_string(),
            params,
            discrepancy,
            threshold,
            pass: discrepancy <= threshold,
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Strictly decreasing positive sequence check.
fn check_sequence(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] < w[0])
}

fn check_heights(ys: &[f64]) -> Result<(), VerifyError> {
    if ys.is_empty() || ys.iter().any(|&y| !(y > 0.0 && y.is_finite())) || !check_sequence(ys) {
        return Err(VerifyError::InvalidInput(format!(
            "heights must be positive and strictly decreasing, got {ys:?}"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Sample points
// ---------------------------------------------------------------------------

fn radical_inverse(mut i: usize, base: usize) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut x = 0.0;
    while i > 0 {
        x += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    x
}

/// Deterministic low-discrepancy points with x ∈ [-3, 3]ⁿ and y ∈ [0.1, 3].
pub fn interior_points(n: usize, count: usize) -> Vec<(Vec<f64>, f64)> {
    const PRIMES: [usize; 5] = [2, 3, 5, 7, 11];
    (1..=count)
        .map(|i| {
            let x = (0..n.min(4)).map(|d| -3.0 + 6.0 * radical_inverse(i, PRIMES[d + 1])).collect();
            let y = 0.1 + 2.9 * radical_inverse(i, PRIMES[0]);
            (x, y)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Property 2: unit mass
// ---------------------------------------------------------------------------

/// Numerical ∫ k_{nm}(x, y) dx.
pub fn kernel_mass(params: ProblemParams, y: f64, cfg: &QuadratureConfig) -> Result<quadrature::IntegralResult, VerifyError> {
    let kernel = KernelEvaluator::new(params)?;
    kernel.value_at_radius(0.0, y)?;
    let tail = |radius: f64| kernel.tail_mass(radius, y);
    Ok(quadrature::integrate_radial_scaled(
        |r| kernel.radial_unchecked(r, y),
        params.n(),
        RadialTail::Bounded(&tail),
        kernel.width(y),
        &[],
        cfg,
    )?)
}

pub fn check_normalization(params: ProblemParams, y: f64, cfg: &QuadratureConfig) -> Result<VerificationReport, VerifyError> {
    let mass = kernel_mass(params, y, cfg)?;
    Ok(VerificationReport::new(
        "normalization",
        json!({ "n": params.n(), "m": params.m(), "y": y, "mass": mass.value }),
        (mass.value - 1.0).abs(),
        NORMALIZATION_THRESHOLD,
    ))
}

// ---------------------------------------------------------------------------
// PDE residual
// ---------------------------------------------------------------------------

/// Relative residual of `y^m Δ_x k + k_yy` at one point by central second
/// differences with steps `scale·max(|x|, y^k)` and `scale·y`, optionally with
/// one Richardson step.
pub fn pde_residual_at(
    kernel: &KernelEvaluator,
    x: &[f64],
    y: f64,
    scale: f64,
    richardson: bool,
) -> Result<f64, VerifyError> {
    let params = kernel.params();
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let hx = scale * norm.max(kernel.width(y));
    let hy = scale * y;
    let underflow = || VerifyError::StepUnderflow { x: x.to_vec(), y };
    if !(hx >= f64::MIN_POSITIVE && hy >= f64::MIN_POSITIVE) || y - hy <= 0.0 {
        return Err(underflow());
    }
    let k0 = kernel.value(x, y)?;

    let mut point = x.to_vec();
    let mut second_x = |d: usize, h: f64| -> Result<f64, VerifyError> {
        let orig = point[d];
        point[d] = orig + h;
        if point[d] == orig {
            return Err(underflow());
        }
        let plus = kernel.value(&point, y)?;
        point[d] = orig - h;
        let minus = kernel.value(&point, y)?;
        point[d] = orig;
        Ok((plus - 2.0 * k0 + minus) / (h * h))
    };
    let mut laplacian = 0.0;
    for d in 0..x.len() {
        laplacian += if richardson {
            (4.0 * second_x(d, 0.5 * hx)? - second_x(d, hx)?) / 3.0
        } else {
            second_x(d, hx)?
        };
    }
    let second_y = |h: f64| -> Result<f64, VerifyError> {
        Ok((kernel.value(x, y + h)? - 2.0 * k0 + kernel.value(x, y - h)?) / (h * h))
    };
    let kyy = if richardson {
        (4.0 * second_y(0.5 * hy)? - second_y(hy)?) / 3.0
    } else {
        second_y(hy)?
    };
    let lx = y.powf(params.m()) * laplacian;
    Ok((lx + kyy).abs() / (lx.abs() + kyy.abs() + 1e-300))
}

pub fn check_pde_residual(params: ProblemParams, points: &[(Vec<f64>, f64)]) -> Result<VerificationReport, VerifyError> {
    check_pde_residual_with(params, points, default_fd_scale(), true)
}

/// Residual check with an explicit step scale and Richardson switch.
pub fn check_pde_residual_with(
    params: ProblemParams,
    points: &[(Vec<f64>, f64)],
    scale: f64,
    richardson: bool,
) -> Result<VerificationReport, VerifyError> {
    if points.is_empty() {
        return Err(VerifyError::InvalidInput("no sample points".into()));
    }
    let kernel = KernelEvaluator::new(params)?;
    let mut worst: f64 = 0.0;
    for (x, y) in points {
        worst = worst.max(pde_residual_at(&kernel, x, *y, scale, richardson)?);
    }
    Ok(VerificationReport::new(
        "pde_residual",
        json!({
            "n": params.n(),
            "m": params.m(),
            "points": points.len(),
            "step_scale": scale,
            "richardson": richardson,
        }),
        worst,
        PDE_RESIDUAL_THRESHOLD,
    ))
}

// ---------------------------------------------------------------------------
// Property 3: concentration
// ---------------------------------------------------------------------------

/// sup_{|x| ≥ δ} k_{nm}(x, y) along `ys`. The sup is the value at |x| = δ;
/// the report fails if that is contradicted by sampling further out, if the
/// sups are not strictly decreasing, or if the last one exceeds the threshold.
pub fn check_delta_concentration(params: ProblemParams, delta: f64, ys: &[f64]) -> Result<VerificationReport, VerifyError> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(VerifyError::InvalidInput(format!("delta must be positive, got {delta}")));
    }
    check_heights(ys)?;
    let kernel = KernelEvaluator::new(params)?;
    let mut sups = Vec::with_capacity(ys.len());
    let mut attained = true;
    for &y in ys {
        let at_delta = kernel.value_at_radius(delta, y)?;
        for factor in [1.0 + 1e-9, 1.001, 1.1, 2.0, 10.0, 1e3] {
            if kernel.value_at_radius(delta * factor, y)? > at_delta {
                attained = false;
            }
        }
        sups.push(at_delta);
    }
    let decreasing = check_sequence(&sups);
    let last = *sups.last().expect("heights are non-empty");
    let discrepancy = if decreasing && attained { last } else { f64::INFINITY };
    Ok(VerificationReport::new(
        "delta_concentration",
        json!({
            "n": params.n(),
            "m": params.m(),
            "delta": delta,
            "y": ys,
            "sups": sups,
            "strictly_decreasing": decreasing,
            "sup_at_delta": attained,
        }),
        discrepancy,
        DELTA_THRESHOLD,
    ))
}

// ---------------------------------------------------------------------------
// Fourier transform of k_{11} and the Airy function
// ---------------------------------------------------------------------------

/// 3^{2/3} Γ(2/3) Ai(|t|^{2/3} y).
pub fn airy_transform(t: f64, y: f64) -> Result<f64, VerifyError> {
    let c = 3f64.powf(2.0 / 3.0) * specfun::gamma(2.0 / 3.0)?;
    Ok(c * specfun::airy_ai(t.abs().powf(2.0 / 3.0) * y)?)
}

/// Numerical ∫ k_{11}(x, y) e^{ixt} dx.
pub fn kernel_fourier_transform(t: f64, y: f64, cfg: &QuadratureConfig) -> Result<f64, VerifyError> {
    let kernel = KernelEvaluator::new(ProblemParams::new(1, 1.0)?)?;
    kernel.value_at_radius(0.0, y)?;
    Ok(quadrature::fourier_integral(|x| kernel.radial_unchecked(x.abs(), y), t, cfg)?.value)
}

pub fn check_fourier_airy(y: f64, t_values: &[f64], cfg: &QuadratureConfig) -> Result<VerificationReport, VerifyError> {
    if t_values.is_empty() {
        return Err(VerifyError::InvalidInput("no frequencies".into()));
    }
    let mut worst: f64 = 0.0;
    let mut rows = Vec::new();
    for &t in t_values {
        let numeric = kernel_fourier_transform(t, y, cfg)?;
        let closed = airy_transform(t, y)?;
        worst = worst.max((numeric - closed).abs());
        rows.push(json!({ "t": t, "numeric": numeric, "airy": closed }));
    }
    Ok(VerificationReport::new(
        "fourier_airy",
        json!({ "n": 1, "m": 1, "y": y, "values": rows }),
        worst,
        FOURIER_THRESHOLD,
    ))
}

/// Max relative gap between Ai(z) and (1/π)√(z/3) K_{1/3}((2/3) z^{3/2}).
pub fn check_airy_macdonald(zs: &[f64]) -> Result<VerificationReport, VerifyError> {
    if zs.is_empty() || zs.iter().any(|&z| !(z > 0.0 && z.is_finite())) {
        return Err(VerifyError::InvalidInput(format!("points must be positive, got {zs:?}")));
    }
    let acc = SpecialFunctionAccuracy::default();
    let mut worst: f64 = 0.0;
    for &z in zs {
        let ai = specfun::airy_ai(z)?;
        let k = specfun::macdonald_k13_with(2.0 / 3.0 * z.powf(1.5), &acc)?;
        let via_k = (z / 3.0).sqrt() * k / PI;
        worst = worst.max((ai - via_k).abs() / ai.abs());
    }
    Ok(VerificationReport::new(
        "airy_macdonald",
        json!({ "z": zs }),
        worst,
        AIRY_MACDONALD_THRESHOLD,
    ))
}

// ---------------------------------------------------------------------------
// Hankel reduction
// ---------------------------------------------------------------------------

/// Bessel J₀: power series for |z| ≤ 8, Hankel asymptotic expansion beyond.
pub fn bessel_j0(z: f64) -> f64 {
    let z = z.abs();
    if z <= 8.0 {
        let q = -0.25 * z * z;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..200 {
            term *= q / (k as f64 * k as f64);
            sum += term;
            if term.abs() <= 1e-17 * sum.abs().max(1e-300) {
                break;
            }
        }
        return sum;
    }
    // a_k = Π_{j≤k} (-(2j-1)²) / (k! 8^k); summed to the smallest term.
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut previous = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        a *= -odd * odd / (k as f64 * 8.0 * z);
        if a.abs() >= previous {
            break;
        }
        previous = a.abs();
        // a now holds a_k / z^k; even k feed P, odd k feed Q, with alternating signs.
        match k % 4 {
            1 => q += a,
            2 => p -= a,
            3 => q -= a,
            _ => p += a,
        }
    }
    let chi = z - 0.25 * PI;
    (2.0 / (PI * z)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// J_{n/2-1}(z) for n ∈ {1, 2, 3}.
pub fn bessel_j_radial(n: usize, z: f64) -> Result<f64, VerifyError> {
    match n {
        1 => Ok((2.0 / (PI * z)).sqrt() * z.cos()),
        2 => Ok(bessel_j0(z)),
        3 => Ok((2.0 / (PI * z)).sqrt() * z.sin()),
        _ => Err(VerifyError::InvalidInput(format!("Bessel order is tabulated for n = 1, 2, 3, got {n}"))),
    }
}

/// ∫₀^∞ K_{1/3}((2/3) y^{3/2} ρ) ρ^{1/3 + n/2} J_{n/2-1}(rρ) dρ by quadrature.
pub fn hankel_integral(n: usize, y: f64, r: f64, cfg: &QuadratureConfig) -> Result<f64, VerifyError> {
    if !(1..=3).contains(&n) {
        return Err(VerifyError::InvalidInput(format!("n must be 1, 2 or 3, got {n}")));
    }
    if !(y > 0.0 && r > 0.0 && y.is_finite() && r.is_finite()) {
        return Err(VerifyError::InvalidInput(format!("y and r must be positive, got y = {y}, r = {r}")));
    }
    let a = 2.0 / 3.0 * y.powf(1.5);
    let acc = SpecialFunctionAccuracy::default();
    let power = 1.0 / 3.0 + n as f64 / 2.0;
    // e^{-aρ} is below 1e-30 of its start well before aρ = 80.
    let end = 80.0 / a;
    let step = (PI / r).min(1.0 / a);
    let cells = ((end / step).ceil() as usize).min(4000);
    let points: Vec<f64> = (0..=cells).map(|i| end * i as f64 / cells as f64).collect();
    let mut failure = None;
    let result = quadrature::integrate_with_breakpoints(
        |rho| {
            let k = match specfun::macdonald_k13_with(a * rho, &acc) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    return 0.0;
                }
            };
            let j = bessel_j_radial(n, r * rho).unwrap_or(f64::NAN);
            k * rho.powf(power) * j
        },
        &points,
        &cfg.tightened(0.01),
    )?;
    if let Some(e) = failure {
        return Err(e.into());
    }
    Ok(result.value)
}

/// Reduction formula as usually printed: 3^{n+1/3} Γ(n/2+1/3) / (2^{n/2+1} y^{3n/2+1/2}) · (1 + 9r²/(4y³))^{-n/2-1/3}.
pub fn hankel_closed_form(n: usize, y: f64, r: f64) -> Result<f64, VerifyError> {
    let nf = n as f64;
    let lead = 3f64.powf(nf + 1.0 / 3.0) * specfun::gamma(nf / 2.0 + 1.0 / 3.0)?
        / (2f64.powf(nf / 2.0 + 1.0) * y.powf(1.5 * nf + 0.5));
    Ok(lead * (1.0 + 9.0 * r * r / (4.0 * y.powi(3))).powf(-nf / 2.0 - 1.0 / 3.0))
}

/// Compares the quadrature with `r^{n/2-1}` times [`hankel_closed_form`];
/// the extra power of r is what the integral actually produces.
pub fn check_hankel_reduction(n: usize, y: f64, r: f64, cfg: &QuadratureConfig) -> Result<VerificationReport, VerifyError> {
    let numeric = hankel_integral(n, y, r, cfg)?;
    let closed = r.powf(n as f64 / 2.0 - 1.0) * hankel_closed_form(n, y, r)?;
    Ok(VerificationReport::new(
        "hankel_reduction",
        json!({ "n": n, "y": y, "r": r, "numeric": numeric, "closed_form": closed }),
        (numeric - closed).abs() / closed.abs(),
        HANKEL_THRESHOLD,
    ))
}

// ---------------------------------------------------------------------------
// Weak convergence to δ
// ---------------------------------------------------------------------------

/// Smooth, rapidly decaying test functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TestFunction {
    /// exp(-|x|²)
    Gaussian { dim: usize },
    /// exp(1 - 1/(1 - |x|²)) on |x| < 1, zero outside.
    Bump { dim: usize },
    /// Π x_i · exp(-|x|²), odd in every coordinate.
    OddGaussian { dim: usize },
}

impl BoundaryFunction for TestFunction {
    fn dim(&self) -> usize {
        match *self {
            TestFunction::Gaussian { dim } | TestFunction::Bump { dim } | TestFunction::OddGaussian { dim } => dim,
        }
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        match self {
            TestFunction::Gaussian { .. } => (-r2).exp(),
            TestFunction::Bump { .. } => {
                if r2 < 1.0 {
                    (1.0 - 1.0 / (1.0 - r2)).exp()
                } else {
                    0.0
                }
            }
            TestFunction::OddGaussian { .. } => x.iter().product::<f64>() * (-r2).exp(),
        }
    }

    fn bound(&self) -> f64 {
        match *self {
            TestFunction::Gaussian { .. } | TestFunction::Bump { .. } => 1.0,
            // max of x e^{-x²} is (2e)^{-1/2} per coordinate
            TestFunction::OddGaussian { dim } => (2.0 * std::f64::consts::E).powf(-0.5 * dim as f64),
        }
    }

    fn feature_radii(&self, x: &[f64]) -> Vec<f64> {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        match self {
            TestFunction::Bump { .. } => vec![(1.0 - r).abs(), 1.0 + r],
            _ => vec![r + 1.0],
        }
    }
}

/// d(y) = |∫ k(x, y) f(x) dx - f(0)| for each y.
pub fn weak_discrepancies(
    params: ProblemParams,
    f: &TestFunction,
    ys: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Vec<f64>, VerifyError> {
    let solver = Solver::new(params, *cfg)?;
    let origin = vec![0.0; params.n()];
    let f0 = f.evaluate(&origin);
    ys.iter()
        .map(|&y| Ok((solver.convolve(f, &origin, y)?.value - f0).abs()))
        .collect()
}

pub fn check_weak_convergence(
    params: ProblemParams,
    f: &TestFunction,
    ys: &[f64],
    cfg: &QuadratureConfig,
) -> Result<VerificationReport, VerifyError> {
    check_heights(ys)?;
    let d = weak_discrepancies(params, f, ys, cfg)?;
    let decreasing = check_sequence(&d);
    let last = *d.last().expect("heights are non-empty");
    Ok(VerificationReport::new(
        "weak_convergence",
        json!({
            "n": params.n(),
            "m": params.m(),
            "test_function": f,
            "y": ys,
            "d": d,
            "strictly_decreasing": decreasing,
        }),
        if decreasing { last } else { f64::INFINITY },
        WEAK_CONVERGENCE_THRESHOLD,
    ))
}

// ---------------------------------------------------------------------------
// Ordinary differential equations for the profile
// ---------------------------------------------------------------------------

/// Relative residual of
/// `(1 + k²r²)φ'' + ((n-1)/r + 2k²nr + k²r + kr)φ' + kn(kn+1)φ = 0`
/// with φ and its derivatives in closed form.
pub fn radial_ode_residual(kernel: &KernelEvaluator, r: f64) -> f64 {
    let p = kernel.params();
    let (k, n) = (p.k(), p.n() as f64);
    let (phi, d1, d2) = kernel.profile_derivatives(r);
    let terms = [
        (1.0 + k * k * r * r) * d2,
        ((n - 1.0) / r + 2.0 * k * k * n * r + k * k * r + k * r) * d1,
        k * n * (k * n + 1.0) * phi,
    ];
    let scale: f64 = terms.iter().map(|t| t.abs()).sum();
    terms.iter().sum::<f64>().abs() / (scale + 1e-300)
}

pub fn check_radial_ode(params: ProblemParams, rs: &[f64]) -> Result<VerificationReport, VerifyError> {
    if rs.is_empty() || rs.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
        return Err(VerifyError::InvalidInput(format!("radii must be positive, got {rs:?}")));
    }
    let kernel = KernelEvaluator::new(params)?;
    let worst = rs.iter().map(|&r| radial_ode_residual(&kernel, r)).fold(0.0, f64::max);
    Ok(VerificationReport::new(
        "radial_ode",
        json!({ "n": params.n(), "m": params.m(), "r": rs }),
        worst,
        ODE_THRESHOLD,
    ))
}

/// Relative residual of `ξ(1-ξ)w'' + (c - (a+b+1)ξ)w' - ab w = 0` for
/// w = ξ^{-b}, with a = n/2, b = n/2 + 1/(2k), c = b + 1.
pub fn hypergeometric_residual(params: &ProblemParams, xi: f64) -> f64 {
    let (n, k) = (params.n() as f64, params.k());
    let (a, b) = (n / 2.0, n / 2.0 + 1.0 / (2.0 * k));
    let c = n / 2.0 + 1.0 + 1.0 / (2.0 * k);
    let w = xi.powf(-b);
    let d1 = -b * w / xi;
    let d2 = b * (b + 1.0) * w / (xi * xi);
    let terms = [xi * (1.0 - xi) * d2, (c - (a + b + 1.0) * xi) * d1, -a * b * w];
    let scale: f64 = terms.iter().map(|t| t.abs()).sum();
    terms.iter().sum::<f64>().abs() / (scale + 1e-300)
}

/// Hypergeometric residual at ξ = 1 + k²r².
pub fn check_hypergeometric(params: ProblemParams, rs: &[f64]) -> Result<VerificationReport, VerifyError> {
    if rs.is_empty() || rs.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
        return Err(VerifyError::InvalidInput(format!("radii must be positive, got {rs:?}")));
    }
    let k = params.k();
    let worst = rs
        .iter()
        .map(|&r| hypergeometric_residual(&params, 1.0 + k * k * r * r))
        .fold(0.0, f64::max);
    Ok(VerificationReport::new(
        "hypergeometric",
        json!({ "n": params.n(), "m": params.m(), "r": rs }),
        worst,
        ODE_THRESHOLD,
    ))
}

// ---------------------------------------------------------------------------
// Suite
// ---------------------------------------------------------------------------

type Check<'a> = Box<dyn Fn() -> Result<VerificationReport, VerifyError> + Send + Sync + 'a>;

/// Every check that applies to `params`, run in parallel, in a fixed order.
///
/// The m = 1 checks (Fourier transform, Airy-Macdonald, Hankel reduction) are
/// included only when `params.m() == 1`.
pub fn all_checks(params: ProblemParams, cfg: &QuadratureConfig) -> Vec<Result<VerificationReport, VerifyError>> {
    let n = params.n();
    let cfg = *cfg;
    let mut checks: Vec<Check<'_>> = Vec::new();
    for y in [0.1, 1.0, 10.0] {
        checks.push(Box::new(move || check_normalization(params, y, &cfg)));
    }
    checks.push(Box::new(move || check_pde_residual(params, &interior_points(n, 20))));
    checks.push(Box::new(move || check_radial_ode(params, &[0.1, 1.0, 10.0])));
    checks.push(Box::new(move || check_hypergeometric(params, &[0.1, 1.0, 10.0])));
    checks.push(Box::new(move || check_delta_concentration(params, 1.0, &[1.0, 0.1, 0.01, 0.001])));
    if n <= 3 {
        checks.push(Box::new(move || {
            check_weak_convergence(params, &TestFunction::Gaussian { dim: n }, &[1.0, 0.1, 0.01], &cfg)
        }));
    }
    if params.m() == 1.0 {
        if n == 1 {
            for y in [0.5, 1.0] {
                checks.push(Box::new(move || check_fourier_airy(y, &[0.0, 0.5, 1.0, 2.0], &cfg)));
            }
        }
        checks.push(Box::new(|| {
            let zs: Vec<f64> = (1..=20).map(|i| 0.5 * i as f64).collect();
            check_airy_macdonald(&zs)
        }));
        if n <= 3 {
            for r in [1.0, 0.5] {
                checks.push(Box::new(move || check_hankel_reduction(n, 1.0, r, &cfg)));
            }
        }
    }
    checks.par_iter().map(|c| c()).collect()
}
