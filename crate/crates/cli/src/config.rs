//! Flag and config-file handling. Flags override values from `--config`.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use tricomi_core::kernel::ProblemParams;
use tricomi_core::quadrature::QuadratureConfig;
use tricomi_core::solver::BoundaryData;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "tricomi", version, about = "Kernels and Dirichlet solver for y^m Δ_x u + u_yy = 0 in the half-space y > 0")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum CommandKind {
    Kernel,
    Solve,
    Verify,
    DemoStep,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate k_{nm}(x, y) on a grid
    Kernel(Flags),
    /// Solve the Dirichlet problem for boundary data ψ on a grid
    Solve(Flags),
    /// Run the verification checks for (n, m) and print one JSON report per line
    Verify(Flags),
    /// Keldysh step-data example (n = 1, m = -1): numeric and closed-form columns
    DemoStep(Flags),
}

impl Command {
    pub fn split(self) -> (CommandKind, Flags) {
        match self {
            Command::Kernel(f) => (CommandKind::Kernel, f),
            Command::Solve(f) => (CommandKind::Solve, f),
            Command::Verify(f) => (CommandKind::Verify, f),
            Command::DemoStep(f) => (CommandKind::DemoStep, f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Default, Args)]
pub struct Flags {
    /// TOML file with any of the options below; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Dimension of the boundary hyperplane
    #[arg(long)]
    pub n: Option<usize>,
    /// Degeneracy exponent, m > -2
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<f64>,
    /// x range per coordinate as "lo,hi"
    #[arg(long, allow_hyphen_values = true)]
    pub x_range: Option<String>,
    /// y range as "lo,hi", lo > 0
    #[arg(long)]
    pub y_range: Option<String>,
    /// Point counts as "nx,ny"; x points are per coordinate
    #[arg(long)]
    pub grid: Option<String>,
    /// Spacing of y values
    #[arg(long, value_enum)]
    pub y_spacing: Option<Spacing>,
    /// Built-in data: constant:c, gaussian:amp,width, lorentzian:amp,width, step:a,b, delta:c1,...,cn
    #[arg(long, allow_hyphen_values = true)]
    pub psi: Option<String>,
    /// CSV file with header x1,...,xn,psi
    #[arg(long)]
    pub psi_file: Option<PathBuf>,
    /// Value of ψ outside the sampled region
    #[arg(long, allow_hyphen_values = true)]
    pub far_field: Option<f64>,
    /// Declared sup-norm bound of ψ
    #[arg(long)]
    pub psi_bound: Option<f64>,
    /// Absolute and relative quadrature tolerance
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output file (default: standard output)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub n: Option<usize>,
    pub m: Option<f64>,
    pub x_range: Option<[f64; 2]>,
    pub y_range: Option<[f64; 2]>,
    pub grid: Option<[usize; 2]>,
    pub y_spacing: Option<Spacing>,
    pub psi: Option<String>,
    pub psi_file: Option<PathBuf>,
    pub far_field: Option<f64>,
    pub psi_bound: Option<f64>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub quadrature: Option<QuadratureConfig>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("config: cannot read {}: {e}", path.display())))?;
        let mut cfg: FileConfig =
            toml::from_str(&text).map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))?;
        // Relative data paths are taken relative to the config file.
        if let (Some(file), Some(dir)) = (&cfg.psi_file, path.parent()) {
            if file.is_relative() {
                cfg.psi_file = Some(dir.join(file));
            }
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone)]
pub enum PsiSource {
    Builtin(String),
    File { path: PathBuf, far_field: Option<f64> },
}

/// Fully resolved and validated run settings.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub params: ProblemParams,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub nx: usize,
    pub ny: usize,
    pub y_spacing: Spacing,
    pub psi: Option<PsiSource>,
    pub psi_bound: Option<f64>,
    pub quadrature: QuadratureConfig,
    pub out: Option<PathBuf>,
    pub format: Format,
}

const MAX_POINTS: usize = 10_000_000;

fn invalid(field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("{field}: {msg}"))
}

fn parse_pair<T: std::str::FromStr>(field: &str, text: &str) -> Result<[T; 2], CliError>
where
    T::Err: std::fmt::Display,
{
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(invalid(field, format!("expected two comma-separated values, got '{text}'")));
    }
    let a = parts[0].parse().map_err(|e| invalid(field, format!("'{}': {e}", parts[0])))?;
    let b = parts[1].parse().map_err(|e| invalid(field, format!("'{}': {e}", parts[1])))?;
    Ok([a, b])
}

impl RunConfig {
    pub fn resolve(command: CommandKind, flags: Flags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let demo = command == CommandKind::DemoStep;

        let n = flags.n.or(file.n).unwrap_or(1);
        let m = flags.m.or(file.m).unwrap_or(if demo { -1.0 } else { 1.0 });
        if demo && (n != 1 || m != -1.0) {
            return Err(invalid("n/m", "demo-step is defined for n = 1, m = -1 only"));
        }
        if n == 0 {
            return Err(invalid("n", "must be at least 1"));
        }
        let params = ProblemParams::new(n, m).map_err(|e| invalid("m", e))?;

        let x_range = match &flags.x_range {
            Some(t) => parse_pair::<f64>("x-range", t)?,
            None => file.x_range.unwrap_or(if demo { [-4.0, 4.0] } else { [-2.0, 2.0] }),
        };
        if !(x_range[0].is_finite() && x_range[1].is_finite() && x_range[0] <= x_range[1]) {
            return Err(invalid("x-range", format!("need finite lo <= hi, got {x_range:?}")));
        }
        let y_range = match &flags.y_range {
            Some(t) => parse_pair::<f64>("y-range", t)?,
            None => file.y_range.unwrap_or(if demo { [0.01, 100.0] } else { [0.1, 2.0] }),
        };
        if !(y_range[0] > 0.0 && y_range[1].is_finite() && y_range[0] <= y_range[1]) {
            return Err(invalid("y-range", format!("need 0 < lo <= hi, got {y_range:?}")));
        }
        let grid = match &flags.grid {
            Some(t) => parse_pair::<usize>("grid", t)?,
            None => file.grid.unwrap_or(if demo { [9, 5] } else { [21, 5] }),
        };
        if grid[0] == 0 || grid[1] == 0 {
            return Err(invalid("grid", "counts must be at least 1"));
        }
        let points = (grid[0] as f64).powi(n as i32) * grid[1] as f64;
        if points > MAX_POINTS as f64 && matches!(command, CommandKind::Kernel | CommandKind::Solve) {
            return Err(invalid("grid", format!("{points} points exceeds the limit of {MAX_POINTS}")));
        }
        let y_spacing = flags
            .y_spacing
            .or(file.y_spacing)
            .unwrap_or(if demo { Spacing::Log } else { Spacing::Linear });

        let from_flags = flags.psi.is_some() || flags.psi_file.is_some();
        let (psi, psi_file) = if from_flags {
            (flags.psi.clone(), flags.psi_file.clone())
        } else {
            (file.psi.clone(), file.psi_file.clone())
        };
        let far_field = flags.far_field.or(file.far_field);
        let psi = match (psi, psi_file) {
            (Some(_), Some(_)) => return Err(invalid("psi", "give either --psi or --psi-file, not both")),
            (Some(spec), None) => Some(PsiSource::Builtin(spec)),
            (None, Some(path)) => Some(PsiSource::File { path, far_field }),
            (None, None) => None,
        };
        if command == CommandKind::Solve && psi.is_none() {
            return Err(invalid("psi", "solve needs --psi or --psi-file"));
        }
        if command != CommandKind::Solve && psi.is_some() {
            return Err(invalid("psi", "boundary data is only used by solve"));
        }
        let psi_bound = flags.psi_bound.or(file.psi_bound);
        if let Some(b) = psi_bound {
            if !(b >= 0.0 && b.is_finite()) {
                return Err(invalid("psi-bound", format!("must be finite and non-negative, got {b}")));
            }
        }

        let mut quadrature = file.quadrature.unwrap_or_default();
        if let Some(tol) = flags.tol.or(file.tol) {
            if !(tol > 0.0 && tol < 1.0) {
                return Err(invalid("tol", format!("must lie in (0, 1), got {tol}")));
            }
            quadrature.abs_tolerance = tol;
            quadrature.rel_tolerance = tol;
        }
        quadrature.validate().map_err(|e| invalid("quadrature", e))?;

        let format = flags.format.or(file.format).unwrap_or(if command == CommandKind::Verify {
            Format::Jsonl
        } else {
            Format::Csv
        });
        if command == CommandKind::Verify && format != Format::Jsonl {
            return Err(invalid("format", "verify writes jsonl only"));
        }

        Ok(Self {
            command,
            params,
            x_range: (x_range[0], x_range[1]),
            y_range: (y_range[0], y_range[1]),
            nx: grid[0],
            ny: grid[1],
            y_spacing,
            psi,
            psi_bound,
            quadrature,
            out: flags.out.or(file.out),
            format,
        })
    }

    pub fn heights(&self) -> Vec<f64> {
        let (lo, hi) = self.y_range;
        if self.ny == 1 {
            return vec![lo];
        }
        (0..self.ny)
            .map(|j| {
                if j == 0 {
                    return lo;
                }
                if j + 1 == self.ny {
                    return hi;
                }
                let t = j as f64 / (self.ny - 1) as f64;
                match self.y_spacing {
                    Spacing::Linear => lo + (hi - lo) * t,
                    Spacing::Log => (lo.ln() + (hi.ln() - lo.ln()) * t).exp(),
                }
            })
            .collect()
    }

    pub fn boundary_data(&self) -> Result<BoundaryData, CliError> {
        let n = self.params.n();
        let data = match self.psi.as_ref().ok_or_else(|| invalid("psi", "missing"))? {
            PsiSource::Builtin(spec) => parse_builtin(spec, n)?,
            PsiSource::File { path, far_field } => {
                let far_field = far_field.ok_or_else(|| invalid("far-field", "required with --psi-file"))?;
                let bound = self.psi_bound.ok_or_else(|| invalid("psi-bound", "required with --psi-file"))?;
                let data = BoundaryData::read_samples_file(path, far_field, bound)
                    .map_err(|e| invalid("psi-file", e))?;
                if tricomi_core::BoundaryFunction::dim(&data) != n {
                    return Err(invalid(
                        "psi-file",
                        format!(
                            "{} has {} coordinate column(s), but n = {n}",
                            path.display(),
                            tricomi_core::BoundaryFunction::dim(&data)
                        ),
                    ));
                }
                return Ok(data);
            }
        };
        match self.psi_bound {
            Some(b) => data.with_bound(b).map_err(|e| invalid("psi-bound", e)),
            None => Ok(data),
        }
    }
}

fn parse_builtin(spec: &str, n: usize) -> Result<BoundaryData, CliError> {
    let (name, args) = spec.split_once(':').unwrap_or((spec, ""));
    let values: Vec<f64> = if args.trim().is_empty() {
        Vec::new()
    } else {
        args.split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|e| invalid("psi", format!("'{v}': {e}"))))
            .collect::<Result<_, _>>()?
    };
    if values.iter().any(|v| !v.is_finite()) {
        return Err(invalid("psi", "parameters must be finite"));
    }
    let arity = |k: usize| -> Result<(), CliError> {
        if values.len() == k {
            Ok(())
        } else {
            Err(invalid("psi", format!("{name} takes {k} parameter(s), got {}", values.len())))
        }
    };
    let built = match name.trim() {
        "constant" => {
            arity(1)?;
            BoundaryData::constant(n, values[0])
        }
        "gaussian" => {
            arity(2)?;
            BoundaryData::gaussian(n, values[0], values[1])
        }
        "lorentzian" => {
            arity(2)?;
            BoundaryData::lorentzian(n, values[0], values[1])
        }
        "step" => {
            arity(2)?;
            if n != 1 {
                return Err(invalid("psi", format!("step data needs n = 1, got n = {n}")));
            }
            BoundaryData::step(values[0], values[1])
        }
        "delta" => {
            arity(n)?;
            BoundaryData::delta(values.clone())
        }
        other => {
            return Err(invalid(
                "psi",
                format!("unknown data '{other}'; expected constant, gaussian, lorentzian, step or delta"),
            ))
        }
    };
    built.map_err(|e| invalid("psi", e))
}
