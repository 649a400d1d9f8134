//! Dirichlet problem in the half-space by kernel convolution.
//!
//! `u(x, y) = ∫ ψ(t) k_{nm}(x - t, y) dt` is evaluated in polar coordinates
//! centred at `x`: the kernel slice is radial, so
//!
//! ```text
//! u(x, y) = ∫₀^R σ_{n-1} r^{n-1} k_{nm}(r, y) M(r) dr,   M(r) = mean of ψ over the sphere |t - x| = r
//! ```
//!
//! R comes from the analytic kernel tail bound scaled by the declared sup
//! bound of ψ, so the truncation error is at most `tail_mass_bound`.

use std::f64::consts::PI;
use std::io::Read;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::kernel::{KernelError, KernelEvaluator, ProblemParams};
use crate::quadrature::{self, QuadratureConfig, QuadratureError, RadialTail, Sample};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("boundary data has dimension {data}, problem has n = {problem}")]
    DimensionMismatch { problem: usize, data: usize },
    #[error("convolution over spheres is implemented for n <= 3, got n = {0}")]
    UnsupportedDimension(usize),
    #[error("invalid boundary data: {0}")]
    InvalidBoundary(String),
    #[error("cannot read boundary samples: {0}")]
    Read(String),
    #[error("{} grid point(s) failed; first: {}", .0.len(), .0[0])]
    GridFailures(Vec<PointFailure>),
}

/// A failed grid evaluation, identified by index and coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointFailure {
    pub index: usize,
    pub x: Vec<f64>,
    pub y: f64,
    pub message: String,
}

impl std::fmt::Display for PointFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "point {} (x = {:?}, y = {}): {}", self.index, self.x, self.y, self.message)
    }
}

/// A bounded function on ℝⁿ that can be convolved with the kernel.
pub trait BoundaryFunction: Sync {
    fn dim(&self) -> usize;
    fn evaluate(&self, x: &[f64]) -> f64;
    /// Declared sup-norm bound, used for truncation control.
    fn bound(&self) -> f64;
    /// Distances from `x` at which ψ restricted to spheres around `x` is not
    /// smooth or has a sharp feature. Seeds the radial partition.
    fn feature_radii(&self, _x: &[f64]) -> Vec<f64> {
        Vec::new()
    }
}

// ---------------------------------------------------------------------------
// Boundary data
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Builtin {
    Constant { value: f64 },
    /// amplitude · exp(-|x|²/width²)
    Gaussian { amplitude: f64, width: f64 },
    /// amplitude · width²/(width² + |x|²)
    Lorentzian { amplitude: f64, width: f64 },
}

impl Builtin {
    fn evaluate(&self, x: &[f64]) -> f64 {
        match *self {
            Builtin::Constant { value } => value,
            Builtin::Gaussian { amplitude, width } => {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                amplitude * (-r2 / (width * width)).exp()
            }
            Builtin::Lorentzian { amplitude, width } => {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                amplitude * width * width / (width * width + r2)
            }
        }
    }

    fn sup(&self) -> f64 {
        match *self {
            Builtin::Constant { value } => value.abs(),
            Builtin::Gaussian { amplitude, .. } | Builtin::Lorentzian { amplitude, .. } => amplitude.abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
enum Interpolant {
    /// Sorted distinct nodes, piecewise linear inside [first, last].
    Line { nodes: Vec<f64>, values: Vec<f64> },
    /// Regular tensor grid, multilinear inside the bounding box. Values are
    /// row-major with the last axis fastest.
    Grid { axes: Vec<Vec<f64>>, values: Vec<f64> },
}

/// Tabulated ψ with a constant far-field value outside the sampled region.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledBoundary {
    dim: usize,
    interpolant: Interpolant,
    far_field: f64,
}

impl SampledBoundary {
    pub fn new(samples: Vec<(Vec<f64>, f64)>, far_field: f64) -> Result<Self, SolverError> {
        let invalid = |msg: String| Err(SolverError::InvalidBoundary(msg));
        let Some(first) = samples.first() else {
            return invalid("sample table is empty".into());
        };
        let dim = first.0.len();
        if dim == 0 {
            return invalid("samples need at least one coordinate".into());
        }
        if !far_field.is_finite() {
            return invalid(format!("far-field value must be finite, got {far_field}"));
        }
        for (i, (x, v)) in samples.iter().enumerate() {
            if x.len() != dim {
                return invalid(format!("sample {i} has {} coordinates, expected {dim}", x.len()));
            }
            if !v.is_finite() || x.iter().any(|c| !c.is_finite()) {
                return invalid(format!("sample {i} is not finite"));
            }
        }

        let interpolant = if dim == 1 {
            let mut pairs: Vec<(f64, f64)> = samples.iter().map(|(x, v)| (x[0], *v)).collect();
            pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
            if let Some(w) = pairs.windows(2).find(|w| w[0].0 == w[1].0) {
                return invalid(format!("duplicate sample point x = {}", w[0].0));
            }
            Interpolant::Line {
                nodes: pairs.iter().map(|p| p.0).collect(),
                values: pairs.iter().map(|p| p.1).collect(),
            }
        } else {
            let mut axes: Vec<Vec<f64>> = (0..dim)
                .map(|d| {
                    let mut a: Vec<f64> = samples.iter().map(|(x, _)| x[d]).collect();
                    a.sort_by(f64::total_cmp);
                    a.dedup();
                    a
                })
                .collect();
            axes.shrink_to_fit();
            let expected: usize = axes.iter().map(Vec::len).product();
            if expected != samples.len() {
                return invalid(format!(
                    "samples in {dim} dimensions must form a regular grid: {} axis values give {expected} nodes, table has {}",
                    axes.iter().map(|a| a.len().to_string()).collect::<Vec<_>>().join("x"),
                    samples.len()
                ));
            }
            let mut values = vec![f64::NAN; expected];
            for (x, v) in &samples {
                let mut index = 0;
                for (d, axis) in axes.iter().enumerate() {
                    let pos = axis
                        .binary_search_by(|a| a.partial_cmp(&x[d]).expect("finite coordinates"))
                        .expect("axis built from samples");
                    index = index * axis.len() + pos;
                }
                if !values[index].is_nan() {
                    return invalid(format!("duplicate sample point {x:?}"));
                }
                values[index] = *v;
            }
            Interpolant::Grid { axes, values }
        };
        Ok(Self {
            dim,
            interpolant,
            far_field,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn far_field(&self) -> f64 {
        self.far_field
    }

    fn sup(&self) -> f64 {
        let values = match &self.interpolant {
            Interpolant::Line { values, .. } | Interpolant::Grid { values, .. } => values,
        };
        values.iter().fold(self.far_field.abs(), |acc, v| acc.max(v.abs()))
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        match &self.interpolant {
            Interpolant::Line { nodes, values } => {
                let t = x[0];
                let (lo, hi) = (nodes[0], nodes[nodes.len() - 1]);
                if t < lo || t > hi || t.is_nan() {
                    return self.far_field;
                }
                let j = nodes.partition_point(|&n| n <= t);
                if j == 0 {
                    return values[0];
                }
                if j == nodes.len() {
                    return values[nodes.len() - 1];
                }
                let (x0, x1) = (nodes[j - 1], nodes[j]);
                let w = (t - x0) / (x1 - x0);
                values[j - 1] * (1.0 - w) + values[j] * w
            }
            Interpolant::Grid { axes, values } => {
                // Per axis: lower node index and weight of the upper node.
                let mut cell = Vec::with_capacity(axes.len());
                for (d, axis) in axes.iter().enumerate() {
                    let t = x[d];
                    let (lo, hi) = (axis[0], axis[axis.len() - 1]);
                    if t < lo || t > hi || t.is_nan() {
                        return self.far_field;
                    }
                    if axis.len() == 1 {
                        cell.push((0, 0.0));
                        continue;
                    }
                    let j = axis.partition_point(|&n| n <= t).clamp(1, axis.len() - 1);
                    let w = (t - axis[j - 1]) / (axis[j] - axis[j - 1]);
                    cell.push((j - 1, w));
                }
                let mut total = 0.0;
                for corner in 0..(1usize << axes.len()) {
                    let mut weight = 1.0;
                    let mut index = 0;
                    for (d, axis) in axes.iter().enumerate() {
                        let upper = (corner >> (axes.len() - 1 - d)) & 1 == 1;
                        let (j, w) = cell[d];
                        let (pos, factor) = if upper { (j + 1, w) } else { (j, 1.0 - w) };
                        if factor == 0.0 {
                            weight = 0.0;
                            break;
                        }
                        weight *= factor;
                        index = index * axis.len() + pos;
                    }
                    if weight != 0.0 {
                        total += weight * values[index];
                    }
                }
                total
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundaryKind {
    Builtin(Builtin),
    /// ψ = a for x < 0, b for x > 0 (n = 1).
    Step { a: f64, b: f64 },
    Samples(SampledBoundary),
    /// δ(x - center); the solution is the kernel itself.
    Delta { center: Vec<f64> },
}

/// Boundary function ψ together with its declared sup-norm bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryData {
    dim: usize,
    kind: BoundaryKind,
    bound: f64,
}

impl BoundaryData {
    fn from_kind(dim: usize, kind: BoundaryKind) -> Result<Self, SolverError> {
        if dim == 0 {
            return Err(SolverError::InvalidBoundary("dimension must be at least 1".into()));
        }
        let sup = match &kind {
            BoundaryKind::Builtin(b) => b.sup(),
            BoundaryKind::Step { a, b } => a.abs().max(b.abs()),
            BoundaryKind::Samples(s) => s.sup(),
            BoundaryKind::Delta { .. } => 0.0,
        };
        if !sup.is_finite() {
            return Err(SolverError::InvalidBoundary("parameters must be finite".into()));
        }
        Ok(Self { dim, kind, bound: sup })
    }

    pub fn constant(n: usize, value: f64) -> Result<Self, SolverError> {
        Self::from_kind(n, BoundaryKind::Builtin(Builtin::Constant { value }))
    }

    pub fn gaussian(n: usize, amplitude: f64, width: f64) -> Result<Self, SolverError> {
        if !(width > 0.0) {
            return Err(SolverError::InvalidBoundary(format!("gaussian width must be positive, got {width}")));
        }
        Self::from_kind(n, BoundaryKind::Builtin(Builtin::Gaussian { amplitude, width }))
    }

    pub fn lorentzian(n: usize, amplitude: f64, width: f64) -> Result<Self, SolverError> {
        if !(width > 0.0) {
            return Err(SolverError::InvalidBoundary(format!("lorentzian width must be positive, got {width}")));
        }
        Self::from_kind(n, BoundaryKind::Builtin(Builtin::Lorentzian { amplitude, width }))
    }

    pub fn step(a: f64, b: f64) -> Result<Self, SolverError> {
        Self::from_kind(1, BoundaryKind::Step { a, b })
    }

    pub fn delta(center: Vec<f64>) -> Result<Self, SolverError> {
        if center.iter().any(|c| !c.is_finite()) {
            return Err(SolverError::InvalidBoundary("delta center must be finite".into()));
        }
        Self::from_kind(center.len(), BoundaryKind::Delta { center })
    }

    /// Sampled data with a declared far-field constant and sup bound.
    pub fn samples(samples: Vec<(Vec<f64>, f64)>, far_field: f64, bound: f64) -> Result<Self, SolverError> {
        let table = SampledBoundary::new(samples, far_field)?;
        Self::from_kind(table.dim(), BoundaryKind::Samples(table))?.with_bound(bound)
    }

    /// Reads a `x1,...,xn,psi` table.
    pub fn read_samples<R: Read>(reader: R, far_field: f64, bound: f64) -> Result<Self, SolverError> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers().map_err(|e| SolverError::Read(e.to_string()))?.clone();
        let columns = headers.len();
        if columns < 2 {
            return Err(SolverError::Read(format!(
                "header must be x1,...,xn,psi; got {} column(s)",
                columns
            )));
        }
        for (i, name) in headers.iter().enumerate() {
            let expected = if i + 1 == columns { "psi".to_string() } else { format!("x{}", i + 1) };
            if name != expected {
                return Err(SolverError::Read(format!(
                    "header column {} is '{name}', expected '{expected}'",
                    i + 1
                )));
            }
        }
        let mut samples = Vec::new();
        for (row, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| SolverError::Read(e.to_string()))?;
            let parsed: Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
            let parsed = parsed.map_err(|e| SolverError::Read(format!("row {}: {e}", row + 2)))?;
            let value = parsed[columns - 1];
            samples.push((parsed[..columns - 1].to_vec(), value));
        }
        Self::samples(samples, far_field, bound)
    }

    pub fn read_samples_file(path: &Path, far_field: f64, bound: f64) -> Result<Self, SolverError> {
        let file = std::fs::File::open(path).map_err(|e| SolverError::Read(format!("{}: {e}", path.display())))?;
        Self::read_samples(file, far_field, bound)
    }

    /// Replaces the automatically derived sup bound; must not be smaller.
    pub fn with_bound(mut self, bound: f64) -> Result<Self, SolverError> {
        if !(bound >= self.bound) || !bound.is_finite() {
            return Err(SolverError::InvalidBoundary(format!(
                "declared bound {bound} is below the data's sup norm {}",
                self.bound
            )));
        }
        self.bound = bound;
        Ok(self)
    }

    pub fn kind(&self) -> &BoundaryKind {
        &self.kind
    }

    /// ψ(x); `None` for the delta distribution.
    pub fn value(&self, x: &[f64]) -> Option<f64> {
        match &self.kind {
            BoundaryKind::Builtin(b) => Some(b.evaluate(x)),
            BoundaryKind::Step { a, b } => Some(if x[0] < 0.0 {
                *a
            } else if x[0] > 0.0 {
                *b
            } else {
                0.5 * (a + b)
            }),
            BoundaryKind::Samples(s) => Some(s.evaluate(x)),
            BoundaryKind::Delta { .. } => None,
        }
    }
}

impl BoundaryFunction for BoundaryData {
    fn dim(&self) -> usize {
        self.dim
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        self.value(x).unwrap_or(0.0)
    }

    fn bound(&self) -> f64 {
        self.bound
    }

    fn feature_radii(&self, x: &[f64]) -> Vec<f64> {
        match &self.kind {
            BoundaryKind::Step { .. } => vec![x[0].abs()],
            BoundaryKind::Builtin(Builtin::Gaussian { width, .. } | Builtin::Lorentzian { width, .. }) => {
                let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                vec![r, (r - *width).abs(), r + *width]
            }
            BoundaryKind::Samples(s) => match &s.interpolant {
                Interpolant::Line { nodes, .. } => nodes.iter().map(|n| (n - x[0]).abs()).collect(),
                Interpolant::Grid { .. } => Vec::new(),
            },
            _ => Vec::new(),
        }
    }
}

// ---------------------------------------------------------------------------
// Solutions
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridPoint {
    pub x: Vec<f64>,
    pub y: f64,
}

/// One convolution value with its accounting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointSolution {
    pub value: f64,
    /// Quadrature estimate plus the truncation bound.
    pub error_estimate: f64,
    pub truncation_radius: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionMeta {
    pub method: &'static str,
    pub params: ProblemParams,
    pub normalizing_constant: f64,
    pub quadrature: QuadratureConfig,
    pub boundary_bound: f64,
}

/// Values u(x_i, y_i) on a list of points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionField {
    pub points: Vec<GridPoint>,
    pub values: Vec<f64>,
    pub error_estimates: Vec<f64>,
    pub truncation_radii: Vec<f64>,
    pub meta: SolutionMeta,
}

impl SolutionField {
    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Tensor grid: `nx` equispaced points per coordinate on `x_range`, times the given heights.
pub fn tensor_grid(n: usize, x_range: (f64, f64), nx: usize, ys: &[f64]) -> Vec<GridPoint> {
    let axis: Vec<f64> = if nx <= 1 {
        vec![0.5 * (x_range.0 + x_range.1)]
    } else {
        (0..nx)
            .map(|i| x_range.0 + (x_range.1 - x_range.0) * i as f64 / (nx - 1) as f64)
            .collect()
    };
    let mut points = Vec::new();
    let total = axis.len().pow(n as u32);
    for &y in ys {
        for flat in 0..total {
            let mut x = vec![0.0; n];
            let mut rest = flat;
            for d in (0..n).rev() {
                x[d] = axis[rest % axis.len()];
                rest /= axis.len();
            }
            points.push(GridPoint { x, y });
        }
    }
    points
}

/// Convolution solver for one (n, m) pair.
#[derive(Debug, Clone, Copy)]
pub struct Solver {
    kernel: KernelEvaluator,
    cfg: QuadratureConfig,
}

impl Solver {
    pub fn new(params: ProblemParams, cfg: QuadratureConfig) -> Result<Self, SolverError> {
        cfg.validate()?;
        Ok(Self {
            kernel: KernelEvaluator::new(params)?,
            cfg,
        })
    }

    pub fn kernel(&self) -> &KernelEvaluator {
        &self.kernel
    }

    pub fn config(&self) -> &QuadratureConfig {
        &self.cfg
    }

    pub fn solve_pointwise(&self, psi: &BoundaryData, x: &[f64], y: f64) -> Result<f64, SolverError> {
        Ok(self.solve_point(psi, x, y)?.value)
    }

    pub fn solve_point(&self, psi: &BoundaryData, x: &[f64], y: f64) -> Result<PointSolution, SolverError> {
        if let BoundaryKind::Delta { center } = &psi.kind {
            self.check_dims(psi.dim, x)?;
            let shifted: Vec<f64> = x.iter().zip(center).map(|(a, b)| a - b).collect();
            return Ok(PointSolution {
                value: self.kernel.value(&shifted, y)?,
                error_estimate: 0.0,
                truncation_radius: 0.0,
                evaluations: 1,
            });
        }
        self.convolve(psi, x, y)
    }

    fn check_dims(&self, data_dim: usize, x: &[f64]) -> Result<(), SolverError> {
        let n = self.kernel.params().n();
        if data_dim != n {
            return Err(SolverError::DimensionMismatch { problem: n, data: data_dim });
        }
        if x.len() != n {
            return Err(KernelError::DimensionMismatch { expected: n, got: x.len() }.into());
        }
        Ok(())
    }

    /// ∫ ψ(t) k_{nm}(x - t, y) dt for any bounded ψ.
    pub fn convolve<B: BoundaryFunction + ?Sized>(&self, psi: &B, x: &[f64], y: f64) -> Result<PointSolution, SolverError> {
        self.check_dims(psi.dim(), x)?;
        let n = x.len();
        if n > 3 {
            return Err(SolverError::UnsupportedDimension(n));
        }
        self.kernel.value_at_radius(0.0, y)?;

        let scale = self.kernel.width(y);
        let bound = psi.bound();
        let radius = if bound > 0.0 {
            self.kernel.truncation_radius(y, self.cfg.tail_mass_bound / bound)
        } else {
            scale
        };
        let truncation_error = bound * self.kernel.tail_mass(radius, y);
        let features = psi.feature_radii(x);
        let angular_cfg = self.cfg.tightened(0.1);
        let kernel = &self.kernel;

        let mut integrand = |r: f64| -> Result<Sample, QuadratureError> {
            let (mean, err) = spherical_mean(psi, x, r, &angular_cfg)?;
            let k = kernel.radial_unchecked(r, y);
            Ok((k * mean, k * err))
        };
        let result = quadrature::radial_samples(
            &mut integrand,
            n,
            RadialTail::Support(radius),
            scale,
            &features,
            &self.cfg,
        )?;
        Ok(PointSolution {
            value: result.value,
            error_estimate: result.error_estimate + truncation_error,
            truncation_radius: radius,
            evaluations: result.evaluations,
        })
    }

    /// Solves at every grid point in parallel; output order matches input order.
    pub fn solve_grid(&self, psi: &BoundaryData, grid: &[GridPoint]) -> Result<SolutionField, SolverError> {
        let results: Vec<Result<PointSolution, SolverError>> =
            grid.par_iter().map(|p| self.solve_point(psi, &p.x, p.y)).collect();
        let mut failures = Vec::new();
        let mut solutions = Vec::with_capacity(grid.len());
        for (index, (point, result)) in grid.iter().zip(results).enumerate() {
            match result {
                Ok(s) => solutions.push(s),
                Err(e) => failures.push(PointFailure {
                    index,
                    x: point.x.clone(),
                    y: point.y,
                    message: e.to_string(),
                }),
            }
        }
        if !failures.is_empty() {
            return Err(SolverError::GridFailures(failures));
        }
        Ok(SolutionField {
            points: grid.to_vec(),
            values: solutions.iter().map(|s| s.value).collect(),
            error_estimates: solutions.iter().map(|s| s.error_estimate).collect(),
            truncation_radii: solutions.iter().map(|s| s.truncation_radius).collect(),
            meta: SolutionMeta {
                method: if matches!(psi.kind, BoundaryKind::Delta { .. }) {
                    "delta: kernel evaluation"
                } else {
                    "radial adaptive Gauss-Kronrod convolution"
                },
                params: *self.kernel.params(),
                normalizing_constant: self.kernel.normalizing_constant(),
                quadrature: self.cfg,
                boundary_bound: psi.bound,
            },
        })
    }
}

/// Mean of ψ over the sphere of radius r around x, with an error estimate.
fn spherical_mean<B: BoundaryFunction + ?Sized>(
    psi: &B,
    x: &[f64],
    r: f64,
    cfg: &QuadratureConfig,
) -> Result<Sample, QuadratureError> {
    let n = x.len();
    if n == 1 {
        return Ok((0.5 * (psi.evaluate(&[x[0] + r]) + psi.evaluate(&[x[0] - r])), 0.0));
    }
    let mut point = vec![0.0; n];
    let mut sample = |angles: &[f64]| -> Result<Sample, QuadratureError> {
        let weight = match n {
            2 => {
                point[0] = x[0] + r * angles[0].cos();
                point[1] = x[1] + r * angles[0].sin();
                1.0
            }
            _ => {
                let (theta, phi) = (angles[0], angles[1]);
                let s = theta.sin();
                point[0] = x[0] + r * s * phi.cos();
                point[1] = x[1] + r * s * phi.sin();
                point[2] = x[2] + r * theta.cos();
                s
            }
        };
        let v = psi.evaluate(&point);
        if !v.is_finite() {
            return Err(QuadratureError::NonFinite { at: r, value: v });
        }
        Ok((weight * v, 0.0))
    };
    let quarter = 0.5 * PI;
    let full_turn = vec![0.0, quarter, PI, 3.0 * quarter, 2.0 * PI];
    let (axes, area) = if n == 2 {
        (vec![full_turn], 2.0 * PI)
    } else {
        (vec![vec![0.0, quarter, PI], full_turn], 4.0 * PI)
    };
    let result = quadrature::nd_samples(&mut sample, &axes, cfg)?;
    Ok((result.value / area, result.error_estimate / area))
}

/// u(x, y) for ψ with the given kernel parameters.
pub fn solve_pointwise(
    psi: &BoundaryData,
    x: &[f64],
    y: f64,
    params: ProblemParams,
    cfg: &QuadratureConfig,
) -> Result<f64, SolverError> {
    Solver::new(params, *cfg)?.solve_pointwise(psi, x, y)
}

pub fn solve_grid(
    psi: &BoundaryData,
    grid: &[GridPoint],
    params: ProblemParams,
    cfg: &QuadratureConfig,
) -> Result<SolutionField, SolverError> {
    Solver::new(params, *cfg)?.solve_grid(psi, grid)
}

/// Closed-form solution of `u_xx + y u_yy = 0` (n = 1, m = -1) with step data
/// ψ = a for x < 0, b for x > 0.
pub fn step_solution_closed_form(a: f64, b: f64, x: f64, y: f64) -> f64 {
    0.5 * (a + b) + 0.5 * (b - a) * x / (4.0 * y + x * x).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solver(n: usize, m: f64) -> Solver {
        Solver::new(ProblemParams::new(n, m).unwrap(), QuadratureConfig::default()).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(step_solution_closed_form(0.0, 1.0, 0.0, 5.0), 0.5);
        for (x, y) in [(-3.0, 0.1), (0.0, 2.0), (7.0, 100.0)] {
            assert!((step_solution_closed_form(1.0, 1.0, x, y) - 1.0).abs() < 1e-15);
        }
        assert!((step_solution_closed_form(0.0, 1.0, 2.0, 1e-14) - 1.0).abs() < 1e-12);
        assert!(step_solution_closed_form(0.0, 1.0, -2.0, 1e-14).abs() < 1e-12);
    }

    #[test]
    fn step_at_discontinuity_is_midpoint() {
        let psi = BoundaryData::step(0.0, 1.0).unwrap();
        let u = solver(1, -1.0).solve_pointwise(&psi, &[0.0], 1.0).unwrap();
        assert!((u - 0.5).abs() < 1e-9);
    }

    #[test]
    fn constant_data_reproduced() {
        for (n, m) in [(1, 1.0), (2, 0.0), (3, -1.0)] {
            let psi = BoundaryData::constant(n, 2.5).unwrap();
            let x = vec![0.3; n];
            let u = solver(n, m).solve_pointwise(&psi, &x, 0.7).unwrap();
            assert!((u - 2.5).abs() < 1e-8, "(n, m) = ({n}, {m}): {u}");
        }
    }

    #[test]
    fn delta_returns_kernel() {
        let s = solver(2, 0.5);
        let psi = BoundaryData::delta(vec![1.0, -1.0]).unwrap();
        let u = s.solve_pointwise(&psi, &[0.0, 0.5], 0.3).unwrap();
        let k = s.kernel().value(&[-1.0, 1.5], 0.3).unwrap();
        assert_eq!(u, k);
    }

    #[test]
    fn poisson_lorentzian_oracle() {
        // Poisson kernels form a semigroup in y, so the harmonic extension of
        // w²/(w² + x²) is w(w + y)/((w + y)² + x²).
        let w = 0.5;
        let psi = BoundaryData::lorentzian(1, 1.0, w).unwrap();
        let s = solver(1, 0.0);
        for (x, y) in [(0.0f64, 0.5f64), (0.7, 1.0), (-1.3, 0.2), (3.0, 0.01)] {
            let u = s.solve_pointwise(&psi, &[x], y).unwrap();
            let expected = w * (w + y) / ((w + y).powi(2) + x * x);
            assert!((u - expected).abs() < 1e-7, "({x}, {y}): {u} vs {expected}");
        }
    }

    #[test]
    fn dimension_checks() {
        let s = solver(2, 0.0);
        let psi1 = BoundaryData::step(0.0, 1.0).unwrap();
        assert!(matches!(
            s.solve_pointwise(&psi1, &[0.0, 0.0], 1.0),
            Err(SolverError::DimensionMismatch { .. })
        ));
        let psi2 = BoundaryData::constant(2, 1.0).unwrap();
        assert!(s.solve_pointwise(&psi2, &[0.0], 1.0).is_err());
        assert!(matches!(
            s.solve_pointwise(&psi2, &[0.0, 0.0], 0.0),
            Err(SolverError::Kernel(KernelError::NonPositiveHeight(_)))
        ));
        let s4 = solver(4, 0.0);
        let psi4 = BoundaryData::constant(4, 1.0).unwrap();
        assert!(matches!(
            s4.solve_pointwise(&psi4, &[0.0; 4], 1.0),
            Err(SolverError::UnsupportedDimension(4))
        ));
    }

    #[test]
    fn sampled_line_interpolation() {
        let psi = BoundaryData::samples(
            vec![(vec![2.0], 4.0), (vec![0.0], 0.0), (vec![1.0], 1.0)],
            -1.0,
            4.0,
        )
        .unwrap();
        assert_eq!(psi.value(&[0.5]), Some(0.5));
        assert_eq!(psi.value(&[1.5]), Some(2.5));
        assert_eq!(psi.value(&[2.0]), Some(4.0));
        assert_eq!(psi.value(&[2.5]), Some(-1.0));
        assert_eq!(psi.value(&[-0.1]), Some(-1.0));
    }

    #[test]
    fn sampled_grid_interpolation() {
        let mut samples = Vec::new();
        for i in 0..3 {
            for j in 0..2 {
                let (x, y) = (i as f64, j as f64);
                samples.push((vec![x, y], x + 10.0 * y));
            }
        }
        let psi = BoundaryData::samples(samples, 0.0, 20.0).unwrap();
        assert!((psi.value(&[0.5, 0.5]).unwrap() - 5.5).abs() < 1e-14);
        assert!((psi.value(&[1.25, 0.1]).unwrap() - 2.25).abs() < 1e-14);
        assert_eq!(psi.value(&[2.0, 1.0]), Some(12.0));
        assert_eq!(psi.value(&[2.1, 0.5]), Some(0.0));
    }

    #[test]
    fn sampled_validation() {
        assert!(BoundaryData::samples(vec![], 0.0, 1.0).is_err());
        assert!(BoundaryData::samples(vec![(vec![0.0], 1.0), (vec![0.0], 2.0)], 0.0, 2.0).is_err());
        // Missing a grid node.
        let irregular = vec![(vec![0.0, 0.0], 1.0), (vec![1.0, 0.0], 1.0), (vec![0.0, 1.0], 1.0)];
        assert!(BoundaryData::samples(irregular, 0.0, 1.0).is_err());
        // Bound below the data.
        assert!(BoundaryData::samples(vec![(vec![0.0], 3.0)], 0.0, 1.0).is_err());
        assert!(BoundaryData::samples(vec![(vec![0.0], 0.5)], 2.0, 1.0).is_err());
    }

    #[test]
    fn csv_header_contract() {
        let data = "x1,psi\n0,1\n1,2\n";
        let psi = BoundaryData::read_samples(data.as_bytes(), 0.0, 2.0).unwrap();
        assert_eq!(psi.dim, 1);
        assert!(BoundaryData::read_samples("x,psi\n0,1\n".as_bytes(), 0.0, 2.0).is_err());
        assert!(BoundaryData::read_samples("x1,x2,value\n0,0,1\n".as_bytes(), 0.0, 2.0).is_err());
        assert!(BoundaryData::read_samples("x1,psi\n0,abc\n".as_bytes(), 0.0, 2.0).is_err());
        let grid = "x1,x2,psi\n0,0,1\n0,1,1\n1,0,1\n1,1,1\n";
        assert_eq!(BoundaryData::read_samples(grid.as_bytes(), 1.0, 1.0).unwrap().dim, 2);
    }

    #[test]
    fn tensor_grid_layout() {
        let g = tensor_grid(2, (-1.0, 1.0), 3, &[0.5, 1.0]);
        assert_eq!(g.len(), 18);
        assert_eq!(g[0].x, vec![-1.0, -1.0]);
        assert_eq!(g[1].x, vec![-1.0, 0.0]);
        assert_eq!(g[9].y, 1.0);
    }

    #[test]
    fn grid_failures_identify_points() {
        let s = solver(1, 0.0);
        let psi = BoundaryData::constant(1, 1.0).unwrap();
        let grid = vec![
            GridPoint { x: vec![0.0], y: 1.0 },
            GridPoint { x: vec![0.0], y: -1.0 },
        ];
        match s.solve_grid(&psi, &grid) {
            Err(SolverError::GridFailures(f)) => {
                assert_eq!(f.len(), 1);
                assert_eq!(f[0].index, 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
