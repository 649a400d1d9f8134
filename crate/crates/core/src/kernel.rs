//! Self-similar Poisson-type kernel of `y^m Δ_x u + u_yy = 0` in the half-space.
//!
//! With `k = (m+2)/2` and `p = n/2 + 1/(m+2)` the kernel is
//!
//! ```text
//! k_{nm}(x, y) = y^{-kn} φ(|x| / y^k),      φ(r) = C_{nm} (1 + k² r²)^{-p}
//!              = C_{nm} y / (y^{m+2} + k² |x|²)^p
//! C_{nm}       = (m+2)^n Γ(n/2 + 1/(m+2)) / (π^{n/2} 2^n Γ(1/(m+2)))
//! ```
//!
//! `C_{nm}` makes `∫ φ(|x|) dx = 1`, hence `∫ k_{nm}(x, y) dx = 1` for every
//! `y > 0`. The special cases are the half-space Poisson kernel (m = 0) and
//! the Tricomi kernel (m = 1), which also has the closed form
//! [`kernel_value_m1`].

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::quadrature::unit_sphere_area;
use crate::specfun::{gamma, SpecialFunctionError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("dimension n must be at least 1, got {0}")]
    InvalidDimension(usize),
    #[error("degeneracy exponent m must be finite and greater than -2, got {0}")]
    InvalidExponent(f64),
    #[error("height y must be positive and finite, got {0}")]
    NonPositiveHeight(f64),
    #[error("point has {got} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Special(#[from] SpecialFunctionError),
}

/// Dimension `n` of the boundary hyperplane and degeneracy exponent `m > -2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProblemParams {
    n: usize,
    m: f64,
}

impl ProblemParams {
    pub fn new(n: usize, m: f64) -> Result<Self, KernelError> {
        if n == 0 {
            return Err(KernelError::InvalidDimension(n));
        }
        if !(m > -2.0) || !m.is_finite() {
            return Err(KernelError::InvalidExponent(m));
        }
        Ok(Self { n, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    /// Scaling exponent k = (m+2)/2 (also the radial similarity exponent β).
    pub fn k(&self) -> f64 {
        0.5 * (self.m + 2.0)
    }

    /// Amplitude exponent α = k n.
    pub fn alpha(&self) -> f64 {
        self.k() * self.n as f64
    }

    /// Decay exponent p = n/2 + 1/(m+2) of the profile.
    pub fn exponent(&self) -> f64 {
        0.5 * self.n as f64 + 1.0 / (self.m + 2.0)
    }
}

/// C_{nm}, the constant giving the profile unit mass over ℝⁿ.
pub fn normalizing_constant(params: &ProblemParams) -> Result<f64, KernelError> {
    let n = params.n as f64;
    let inv = 1.0 / (params.m + 2.0);
    let ratio = gamma(0.5 * n + inv)? / gamma(inv)?;
    let value = ((params.m + 2.0) / 2.0).powf(n) * ratio / PI.powf(0.5 * n);
    if !value.is_finite() {
        return Err(SpecialFunctionError::Overflow {
            function: "normalizing_constant",
            x: params.m,
        }
        .into());
    }
    Ok(value)
}

/// C*_{n1} = 3^{n+1/2} Γ(2/3) Γ(n/2 + 1/3) / (2^{1/3} π^{n/2+1}), the
/// prefactor of the m = 1 kernel written over `4y³ + 9|x|²`.
pub fn tricomi_constant(n: usize) -> Result<f64, KernelError> {
    if n == 0 {
        return Err(KernelError::InvalidDimension(n));
    }
    let nf = n as f64;
    Ok(3f64.powf(nf + 0.5) * gamma(2.0 / 3.0)? * gamma(0.5 * nf + 1.0 / 3.0)?
        / (2f64.powf(1.0 / 3.0) * PI.powf(0.5 * nf + 1.0)))
}

/// The m = 1 kernel in its Fourier-derived form C*_{n1} y / (4y³ + 9|x|²)^{n/2+1/3}.
pub fn kernel_value_m1(x: &[f64], y: f64, n: usize) -> Result<f64, KernelError> {
    if x.len() != n {
        return Err(KernelError::DimensionMismatch {
            expected: n,
            got: x.len(),
        });
    }
    check_height(y)?;
    let r2 = squared_norm(x);
    let p = 0.5 * n as f64 + 1.0 / 3.0;
    Ok(tricomi_constant(n)? * y / (4.0 * y * y * y + 9.0 * r2).powf(p))
}

fn check_height(y: f64) -> Result<(), KernelError> {
    if y > 0.0 && y.is_finite() {
        Ok(())
    } else {
        Err(KernelError::NonPositiveHeight(y))
    }
}

/// |x|², summed in a fixed order so that coordinate permutations and sign
/// flips give bit-identical results.
pub(crate) fn squared_norm(x: &[f64]) -> f64 {
    let mut squares: Vec<f64> = x.iter().map(|v| v * v).collect();
    squares.sort_by(f64::total_cmp);
    squares.iter().sum()
}

/// Immutable evaluator of φ and k_{nm} for one parameter pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelEvaluator {
    params: ProblemParams,
    c_nm: f64,
}

impl KernelEvaluator {
    pub fn new(params: ProblemParams) -> Result<Self, KernelError> {
        Ok(Self {
            params,
            c_nm: normalizing_constant(&params)?,
        })
    }

    pub fn params(&self) -> &ProblemParams {
        &self.params
    }

    pub fn normalizing_constant(&self) -> f64 {
        self.c_nm
    }

    /// Radial profile φ(r) = C (1 + k²r²)^{-p} for r ≥ 0.
    pub fn profile(&self, r: f64) -> f64 {
        let k = self.params.k();
        self.c_nm * (1.0 + k * k * r * r).powf(-self.params.exponent())
    }

    /// (φ, φ', φ'') from the closed form.
    pub fn profile_derivatives(&self, r: f64) -> (f64, f64, f64) {
        let k2 = self.params.k().powi(2);
        let p = self.params.exponent();
        let u = 1.0 + k2 * r * r;
        let phi = self.c_nm * u.powf(-p);
        let d1 = -2.0 * p * k2 * r * phi / u;
        let d2 = -2.0 * p * k2 * phi / u + 4.0 * p * (p + 1.0) * k2 * k2 * r * r * phi / (u * u);
        (phi, d1, d2)
    }

    /// Characteristic width y^k of the kernel slice at height y.
    pub fn width(&self, y: f64) -> f64 {
        y.powf(self.params.k())
    }

    /// k_{nm}(x, y).
    pub fn value(&self, x: &[f64], y: f64) -> Result<f64, KernelError> {
        if x.len() != self.params.n {
            return Err(KernelError::DimensionMismatch {
                expected: self.params.n,
                got: x.len(),
            });
        }
        check_height(y)?;
        Ok(self.radial_unchecked(squared_norm(x).sqrt(), y))
    }

    /// k_{nm} at a point with |x| = r.
    pub fn value_at_radius(&self, r: f64, y: f64) -> Result<f64, KernelError> {
        check_height(y)?;
        Ok(self.radial_unchecked(r.abs(), y))
    }

    /// k_{nm} through the similarity form y^{-kn} φ(|x|/y^k). Algebraically equal to
    /// [`value`](Self::value) but loses range for tiny y.
    pub fn value_similarity_form(&self, x: &[f64], y: f64) -> Result<f64, KernelError> {
        if x.len() != self.params.n {
            return Err(KernelError::DimensionMismatch {
                expected: self.params.n,
                got: x.len(),
            });
        }
        check_height(y)?;
        let k = self.params.k();
        let r = squared_norm(x).sqrt();
        Ok(y.powf(-self.params.alpha()) * self.profile(r / y.powf(k)))
    }

    /// Rational form C y / (y^{m+2} + k² r²)^p, with a logarithmic fallback
    /// when the direct form over- or underflows.
    pub(crate) fn radial_unchecked(&self, r: f64, y: f64) -> f64 {
        let k = self.params.k();
        let p = self.params.exponent();
        let m2 = self.params.m + 2.0;
        let base = y.powf(m2) + k * k * r * r;
        let direct = self.c_nm * y / base.powf(p);
        if direct.is_finite() && direct > 0.0 {
            return direct;
        }
        let ln_a = m2 * y.ln();
        let ln_b = if r > 0.0 { 2.0 * (k * r).ln() } else { f64::NEG_INFINITY };
        let (hi, lo) = if ln_a >= ln_b { (ln_a, ln_b) } else { (ln_b, ln_a) };
        let ln_base = hi + (lo - hi).exp().ln_1p();
        (self.c_nm.ln() + y.ln() - p * ln_base).exp()
    }

    /// Upper bound on ∫_{|x|>R} k_{nm}(x, y) dx from k ≤ C y (k r)^{-2p}:
    /// σ_{n-1} C y k^{-2p} R^{-2/(m+2)} (m+2)/2.
    pub fn tail_mass(&self, radius: f64, y: f64) -> f64 {
        let m2 = self.params.m + 2.0;
        self.tail_coefficient(y) * radius.powf(-2.0 / m2)
    }

    /// Smallest radius with [`tail_mass`](Self::tail_mass) ≤ `mass`.
    pub fn truncation_radius(&self, y: f64, mass: f64) -> f64 {
        let m2 = self.params.m + 2.0;
        (self.tail_coefficient(y) / mass).powf(0.5 * m2)
    }

    fn tail_coefficient(&self, y: f64) -> f64 {
        let k = self.params.k();
        let p = self.params.exponent();
        let m2 = self.params.m + 2.0;
        let sigma = unit_sphere_area(self.params.n).expect("n >= 1 is validated");
        sigma * self.c_nm * y * k.powf(-2.0 * p) * 0.5 * m2
    }
}
