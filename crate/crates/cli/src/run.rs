use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use tricomi_core::kernel::KernelEvaluator;
use tricomi_core::solver::{self, tensor_grid, BoundaryData, GridPoint, Solver, SolverError};
use tricomi_core::verify;

use crate::config::{CommandKind, Format, RunConfig};
use crate::CliError;

/// 17 significant digits, scientific notation.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl Table {
    fn new(columns: Vec<String>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Csv => {
                out.push_str(&self.columns.join(","));
                out.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(|&v| num(v)).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
            }
            Format::Jsonl => {
                for row in &self.rows {
                    let fields: Vec<String> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(c, &v)| format!("\"{c}\":{}", json_num(v)))
                        .collect();
                    let _ = writeln!(out, "{{{}}}", fields.join(","));
                }
            }
        }
        out
    }
}

fn json_num(v: f64) -> String {
    if v.is_finite() {
        num(v)
    } else {
        "null".to_string()
    }
}

fn coordinate_columns(n: usize, last: &[&str]) -> Vec<String> {
    (1..=n)
        .map(|i| format!("x{i}"))
        .chain(std::iter::once("y".to_string()))
        .chain(last.iter().map(|s| s.to_string()))
        .collect()
}

fn grid(cfg: &RunConfig) -> Vec<GridPoint> {
    tensor_grid(cfg.params.n(), cfg.x_range, cfg.nx, &cfg.heights())
}

fn row(p: &GridPoint, tail: &[f64]) -> Vec<f64> {
    p.x.iter().copied().chain(std::iter::once(p.y)).chain(tail.iter().copied()).collect()
}

fn computation(e: impl std::fmt::Display) -> CliError {
    CliError::Computation(e.to_string())
}

fn solver_error(e: SolverError) -> CliError {
    match e {
        SolverError::GridFailures(failures) => {
            let mut msg = format!("{} grid point(s) failed:", failures.len());
            for f in failures.iter().take(10) {
                let _ = write!(msg, "\n  {f}");
            }
            if failures.len() > 10 {
                let _ = write!(msg, "\n  ... and {} more", failures.len() - 10);
            }
            CliError::Computation(msg)
        }
        other => computation(other),
    }
}

fn kernel_table(cfg: &RunConfig) -> Result<Table, CliError> {
    let kernel = KernelEvaluator::new(cfg.params).map_err(computation)?;
    let mut table = Table::new(coordinate_columns(cfg.params.n(), &["k"]));
    for p in grid(cfg) {
        let k = kernel
            .value(&p.x, p.y)
            .map_err(|e| CliError::Computation(format!("x = {:?}, y = {}: {e}", p.x, p.y)))?;
        table.rows.push(row(&p, &[k]));
    }
    Ok(table)
}

fn solve_table(cfg: &RunConfig, psi: &BoundaryData) -> Result<Table, CliError> {
    let points = grid(cfg);
    let field = Solver::new(cfg.params, cfg.quadrature)
        .map_err(computation)?
        .solve_grid(psi, &points)
        .map_err(solver_error)?;
    let mut table = Table::new(coordinate_columns(cfg.params.n(), &["u"]));
    for (p, u) in points.iter().zip(&field.values) {
        table.rows.push(row(p, &[*u]));
    }
    Ok(table)
}

fn demo_step_table(cfg: &RunConfig) -> Result<Table, CliError> {
    let psi = BoundaryData::step(0.0, 1.0).map_err(computation)?;
    let points = grid(cfg);
    let field = Solver::new(cfg.params, cfg.quadrature)
        .map_err(computation)?
        .solve_grid(&psi, &points)
        .map_err(solver_error)?;
    let mut table = Table::new(coordinate_columns(1, &["u", "closed_form", "abs_error"]));
    for (p, u) in points.iter().zip(&field.values) {
        let exact = solver::step_solution_closed_form(0.0, 1.0, p.x[0], p.y);
        table.rows.push(row(p, &[*u, exact, (u - exact).abs()]));
    }
    Ok(table)
}

/// Runs the command; returns the rendered output and whether every
/// verification check passed.
pub fn execute(cfg: &RunConfig) -> Result<(String, bool), CliError> {
    match cfg.command {
        CommandKind::Kernel => Ok((kernel_table(cfg)?.render(cfg.format), true)),
        CommandKind::Solve => {
            let psi = cfg.boundary_data()?;
            Ok((solve_table(cfg, &psi)?.render(cfg.format), true))
        }
        CommandKind::DemoStep => Ok((demo_step_table(cfg)?.render(cfg.format), true)),
        CommandKind::Verify => {
            let mut out = String::new();
            let mut all_pass = true;
            for result in verify::all_checks(cfg.params, &cfg.quadrature) {
                let report = result.map_err(computation)?;
                all_pass &= report.pass;
                out.push_str(&report.to_json_line());
                out.push('\n');
            }
            Ok((out, all_pass))
        }
    }
}

/// Writes to `path` through a temporary sibling file, so a failed run never
/// leaves a partial artifact.
pub fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Computation(format!("writing output: {e}"));
    let Some(path) = path else {
        let stdout = std::io::stdout();
        let mut lock = stdout.lock();
        return lock.write_all(text.as_bytes()).and_then(|_| lock.flush()).map_err(io);
    };
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| CliError::Validation(format!("out: '{}' is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    let result = std::fs::write(&tmp, text).and_then(|_| std::fs::rename(&tmp, path));
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result.map_err(io)
}
