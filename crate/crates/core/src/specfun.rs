//! Special functions on the positive real axis.
//!
//! Only what the kernel formulas and their cross-checks need:
//!
//! | Function | Method |
//! |----------|--------|
//! | [`gamma`] | Lanczos approximation (g = 7, 9 terms), upward recurrence below 1/2 |
//! | [`airy_ai`] | Maclaurin series in double-double arithmetic for z ≤ 8, asymptotic expansion beyond |
//! | [`macdonald_k13`] | `K_ν(z) = ∫₀^∞ exp(-z cosh t) cosh(νt) dt` by adaptive quadrature |
//!
//! The Airy and Macdonald evaluators share no code path, so the identity
//! `Ai(z) = √(z/3) K_{1/3}(2/3 z^{3/2}) / π` is a genuine cross-check.

use std::f64::consts::PI;

use thiserror::Error;

use crate::quadrature::{self, QuadratureConfig};

/// Errors from special function evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialFunctionError {
    #[error("{function}: argument {x} outside domain {domain}")]
    Domain {
        function: &'static str,
        x: f64,
        domain: &'static str,
    },
    #[error("{function}: result overflows f64 at argument {x}")]
    Overflow { function: &'static str, x: f64 },
    #[error("{function}: evaluation did not converge at argument {x}")]
    NonConvergence { function: &'static str, x: f64 },
    #[error("invalid accuracy request: relative tolerance {0} must lie in (0, 1e-6]")]
    InvalidAccuracy(f64),
}

/// Requested relative accuracy for evaluators that are not fixed-formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialFunctionAccuracy {
    relative_tolerance: f64,
}

impl SpecialFunctionAccuracy {
    pub fn new(relative_tolerance: f64) -> Result<Self, SpecialFunctionError> {
        if !(relative_tolerance > 0.0 && relative_tolerance <= 1e-6) {
            return Err(SpecialFunctionError::InvalidAccuracy(relative_tolerance));
        }
        Ok(Self { relative_tolerance })
    }

    pub fn relative_tolerance(&self) -> f64 {
        self.relative_tolerance
    }
}

impl Default for SpecialFunctionAccuracy {
    fn default() -> Self {
        Self {
            relative_tolerance: 1e-12,
        }
    }
}

// ---------------------------------------------------------------------------
// Gamma
// ---------------------------------------------------------------------------

const LANCZOS_G: f64 = 7.0;

/// Lanczos coefficients for g = 7, n = 9 (Godfrey). Relative accuracy about 1e-15
/// on the positive axis.
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Largest argument with a finite Γ(x) in f64.
const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

/// Euler gamma function for x > 0.
pub fn gamma(x: f64) -> Result<f64, SpecialFunctionError> {
    if !(x > 0.0) || x.is_nan() {
        return Err(SpecialFunctionError::Domain {
            function: "gamma",
            x,
            domain: "x > 0",
        });
    }
    if x > GAMMA_MAX_ARG {
        return Err(SpecialFunctionError::Overflow {
            function: "gamma",
            x,
        });
    }
    if x < 0.5 {
        // Γ(x) = Γ(x + 1) / x keeps the Lanczos sum in its accurate range.
        return Ok(lanczos(x + 1.0) / x);
    }
    Ok(lanczos(x))
}

fn lanczos(x: f64) -> f64 {
    let z = x - 1.0;
    let mut sum = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    // t^(z+1/2) is split in two so that large arguments do not overflow before e^{-t}.
    let half_power = t.powf(0.5 * (z + 0.5));
    (2.0 * PI).sqrt() * half_power * ((-t).exp() * half_power) * sum
}

// ---------------------------------------------------------------------------
// Double-double helper for the Airy series
// ---------------------------------------------------------------------------

/// Unevaluated sum `hi + lo` with |lo| ≤ ulp(hi)/2.
#[derive(Debug, Clone, Copy)]
struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl DoubleDouble {
    const fn new(hi: f64, lo: f64) -> Self {
        Self { hi, lo }
    }

    fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    fn quick_two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        Self {
            hi: s,
            lo: b - (s - a),
        }
    }

    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        (s, (a - (s - bb)) + (b - bb))
    }

    fn add(self, other: Self) -> Self {
        let (s, e) = Self::two_sum(self.hi, other.hi);
        let (t, f) = Self::two_sum(self.lo, other.lo);
        let hi_lo = Self::quick_two_sum(s, e + t);
        Self::quick_two_sum(hi_lo.hi, hi_lo.lo + f)
    }

    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    fn mul(self, other: Self) -> Self {
        let p = self.hi * other.hi;
        let e = self.hi.mul_add(other.hi, -p);
        Self::quick_two_sum(p, e + (self.hi * other.lo + self.lo * other.hi))
    }

    fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let p = q1 * b;
        let e = q1.mul_add(b, -p);
        let r = ((self.hi - p) - e) + self.lo;
        Self::quick_two_sum(q1, r / b)
    }
}

// ---------------------------------------------------------------------------
// Airy Ai on [0, ∞)
// ---------------------------------------------------------------------------

/// Ai(0) = 3^{-2/3}/Γ(2/3) split into a double-double.
const AIRY_AI_0: DoubleDouble = DoubleDouble::new(0.355_028_053_887_817_2, 2.052_336_324_362_12e-17);
/// -Ai'(0) = 3^{-1/3}/Γ(1/3) split into a double-double.
const AIRY_AIP_0: DoubleDouble = DoubleDouble::new(0.258_819_403_792_806_8, -2.522_243_111_610_832e-17);

/// Series/asymptotic crossover. At z = 8 the smallest asymptotic term is
/// below 1e-13 relative, and the series cancellation (about 13 decimal
/// digits) is absorbed by the double-double sum.
const AIRY_SERIES_LIMIT: f64 = 8.0;

/// Airy function of the first kind on the nonnegative axis.
///
/// Strictly positive and strictly decreasing on `[0, ∞)`; underflows to
/// zero only beyond z ≈ 104.
pub fn airy_ai(z: f64) -> Result<f64, SpecialFunctionError> {
    if !(z >= 0.0) {
        return Err(SpecialFunctionError::Domain {
            function: "airy_ai",
            x: z,
            domain: "z >= 0",
        });
    }
    if z.is_infinite() {
        return Ok(0.0);
    }
    if z <= AIRY_SERIES_LIMIT {
        airy_ai_series(z)
    } else {
        airy_ai_asymptotic(z)
    }
}

/// Ai(z) = Ai(0) f(z) + Ai'(0) g(z) with
/// f = Σ 1·4·…·(3k-2) z^{3k}/(3k)!, g = Σ 2·5·…·(3k-1) z^{3k+1}/(3k+1)!.
fn airy_ai_series(z: f64) -> Result<f64, SpecialFunctionError> {
    if z == 0.0 {
        return Ok(AIRY_AI_0.hi);
    }
    let zd = DoubleDouble::from_f64(z);
    let z3 = zd.mul(zd).mul(zd);

    let mut f_term = DoubleDouble::from_f64(1.0);
    let mut f_sum = f_term;
    let mut g_term = zd;
    let mut g_sum = g_term;
    let mut converged = false;
    for k in 1..200 {
        let k3 = 3.0 * k as f64;
        f_term = f_term.mul(z3).div_f64(k3 * (k3 - 1.0));
        g_term = g_term.mul(z3).div_f64((k3 + 1.0) * k3);
        f_sum = f_sum.add(f_term);
        g_sum = g_sum.add(g_term);
        if f_term.hi < 1e-33 * f_sum.hi && g_term.hi < 1e-33 * g_sum.hi {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(SpecialFunctionError::NonConvergence {
            function: "airy_ai",
            x: z,
        });
    }
    let value = AIRY_AI_0.mul(f_sum).add(AIRY_AIP_0.mul(g_sum).neg());
    Ok(value.hi + value.lo)
}

/// Ai(z) ~ e^{-ζ}/(2√π z^{1/4}) Σ (-1)^k u_k ζ^{-k}, ζ = 2/3 z^{3/2}.
/// For z > 0 the remainder is bounded by the first omitted term, so the sum
/// stops at the smallest term or once terms fall below 1e-17.
fn airy_ai_asymptotic(z: f64) -> Result<f64, SpecialFunctionError> {
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    let mut sum = 1.0;
    let mut term = 1.0_f64;
    for k in 1..100 {
        let kf = k as f64;
        let ratio = (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf)
            / zeta;
        let next = -term * ratio;
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 {
            break;
        }
    }
    Ok((-zeta).exp() / (2.0 * PI.sqrt() * z.powf(0.25)) * sum)
}

// ---------------------------------------------------------------------------
// Macdonald K_{1/3}
// ---------------------------------------------------------------------------

/// Macdonald function K_{1/3}(z) for z > 0 at the default accuracy.
pub fn macdonald_k13(z: f64) -> Result<f64, SpecialFunctionError> {
    macdonald_k13_with(z, &SpecialFunctionAccuracy::default())
}

/// K_{1/3}(z) from `e^{-z} ∫₀^∞ e^{-z(cosh t - 1)} cosh(t/3) dt`.
///
/// The half-line is walked in panels; the walk stops once the integrand at a
/// panel end drops below 1e-18 of the accumulated sum.
pub fn macdonald_k13_with(
    z: f64,
    accuracy: &SpecialFunctionAccuracy,
) -> Result<f64, SpecialFunctionError> {
    if !(z > 0.0) || z.is_infinite() {
        return Err(SpecialFunctionError::Domain {
            function: "macdonald_k13",
            x: z,
            domain: "0 < z < inf",
        });
    }
    const NU: f64 = 1.0 / 3.0;
    let integrand = |t: f64| (-z * (t.cosh() - 1.0)).exp() * (NU * t).cosh();

    let cfg = QuadratureConfig {
        abs_tolerance: 1e-300,
        rel_tolerance: 0.1 * accuracy.relative_tolerance(),
        max_subdivisions: 200,
        ..QuadratureConfig::default()
    };
    let width = if z > 1.0 { 1.0 / z.sqrt() } else { 1.0 };
    let mut sum = 0.0;
    let mut start = 0.0;
    for _ in 0..10_000 {
        let end = start + width;
        let panel = quadrature::integrate_1d(integrand, start, end, &cfg).map_err(|_| {
            SpecialFunctionError::NonConvergence {
                function: "macdonald_k13",
                x: z,
            }
        })?;
        sum += panel.value;
        if integrand(end) < 1e-18 * sum {
            return Ok((-z).exp() * sum);
        }
        start = end;
    }
    Err(SpecialFunctionError::NonConvergence {
        function: "macdonald_k13",
        x: z,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn gamma_known_values() {
        assert!(rel(gamma(1.0).unwrap(), 1.0) < 1e-14);
        assert!(rel(gamma(0.5).unwrap(), PI.sqrt()) < 1e-14);
        assert!(rel(gamma(5.0).unwrap(), 24.0) < 1e-14);
        assert!(rel(gamma(2.0 / 3.0).unwrap(), 1.354_117_939_426_400_4) < 1e-14);
    }

    #[test]
    fn gamma_recurrence() {
        for x in [0.1, 0.5, 1.5, 3.7, 10.2] {
            let lhs = gamma(x + 1.0).unwrap();
            let rhs = x * gamma(x).unwrap();
            assert!(rel(lhs, rhs) < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn gamma_domain_and_overflow() {
        assert!(matches!(gamma(0.0), Err(SpecialFunctionError::Domain { .. })));
        assert!(matches!(gamma(-1.5), Err(SpecialFunctionError::Domain { .. })));
        assert!(matches!(gamma(f64::NAN), Err(SpecialFunctionError::Domain { .. })));
        assert!(matches!(gamma(172.0), Err(SpecialFunctionError::Overflow { .. })));
        assert!(gamma(171.0).unwrap().is_finite());
    }

    #[test]
    fn airy_at_origin_matches_gamma_form() {
        let expected = 1.0 / (3f64.powf(2.0 / 3.0) * gamma(2.0 / 3.0).unwrap());
        assert!(rel(airy_ai(0.0).unwrap(), expected) < 1e-14);
    }

    #[test]
    fn airy_reference_values() {
        // 30-digit reference values (mpmath).
        let table = [
            (0.5, 0.231_693_606_480_833_49),
            (1.0, 0.135_292_416_312_881_42),
            (2.0, 0.034_924_130_423_274_379),
            (4.0, 9.515_638_512_048_018_7e-4),
            (7.9, 6.239_640_097_283_934_2e-8),
            (8.0, 4.692_207_616_099_231_6e-8),
            (8.1, 3.522_435_623_573_571_5e-8),
            (10.0, 1.104_753_255_289_868_6e-10),
            (15.0, 2.164_962_520_737_992_3e-18),
            (20.0, 1.691_672_868_670_540_3e-27),
        ];
        for (z, expected) in table {
            let got = airy_ai(z).unwrap();
            assert!(rel(got, expected) < 1e-12, "Ai({z}) = {got}, want {expected}");
        }
    }

    #[test]
    fn airy_branches_agree_at_crossover() {
        for z in [7.5, 8.0, 8.5] {
            let s = airy_ai_series(z).unwrap();
            let a = airy_ai_asymptotic(z).unwrap();
            assert!(rel(s, a) < 1e-12, "z = {z}: {s} vs {a}");
        }
    }

    #[test]
    fn airy_domain() {
        assert!(airy_ai(-0.1).is_err());
        assert!(airy_ai(f64::NAN).is_err());
    }

    #[test]
    fn k13_reference_values() {
        let table = [
            (0.001, 16.715_046_936_517_46),
            (0.1, 2.899_827_980_934_577_2),
            (0.5, 0.989_031_074_246_724_3),
            (1.0, 0.438_430_633_441_534_36),
            (2.0, 0.116_544_961_296_165_25),
            (10.0, 1.787_460_827_105_533_5e-5),
            (100.0, 4.659_203_157_021_346e-45),
        ];
        for (z, expected) in table {
            let got = macdonald_k13(z).unwrap();
            assert!(rel(got, expected) < 1e-12, "K13({z}) = {got}, want {expected}");
        }
    }

    #[test]
    fn k13_domain() {
        assert!(macdonald_k13(0.0).is_err());
        assert!(macdonald_k13(-1.0).is_err());
        for z in [0.1, 1.0, 10.0] {
            assert!(macdonald_k13(z).unwrap() > 0.0);
        }
    }

    #[test]
    fn accuracy_validation() {
        assert!(SpecialFunctionAccuracy::new(0.0).is_err());
        assert!(SpecialFunctionAccuracy::new(1e-3).is_err());
        assert!(SpecialFunctionAccuracy::new(1e-8).is_ok());
    }
}
