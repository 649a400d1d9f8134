//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

use tricomi_core::kernel::{normalizing_constant, tricomi_constant, KernelEvaluator, ProblemParams};
use tricomi_core::quadrature::QuadratureConfig;
use tricomi_core::solver::{self, tensor_grid, BoundaryData, GridPoint, Solver};
use tricomi_core::verify::{self, TestFunction};

const PAIRS: [(usize, f64); 6] = [(1, -1.0), (1, 0.0), (1, 1.0), (2, 1.0), (3, 0.0), (2, -1.5)];

type Outcome = Result<String, String>;

fn params(n: usize, m: f64) -> ProblemParams {
    ProblemParams::new(n, m).expect("valid parameters")
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn within(limit: Duration, start: Instant, outcome: Outcome) -> Outcome {
    let elapsed = start.elapsed();
    match outcome {
        Ok(detail) if elapsed > limit => Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}")),
        other => other,
    }
}

fn constants() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    worst = worst.max(rel(normalizing_constant(&params(1, 0.0)).unwrap(), 1.0 / PI));
    worst = worst.max(rel(normalizing_constant(&params(1, -1.0)).unwrap(), 0.25));
    // 2/(4y + x²)^{3/2} is C_{1,-1} y/(y + x²/4)^{3/2}, i.e. C_{1,-1} = 1/4.
    let keldysh = KernelEvaluator::new(params(1, -1.0)).unwrap();
    for (x, y) in [(0.3, 0.7), (-2.0, 0.05), (4.0, 3.0)] {
        let expected = 2.0 * y / f64::powf(4.0 * y + x * x, 1.5);
        worst = worst.max(rel(keldysh.value(&[x], y).unwrap(), expected));
    }
    for n in 1..=3 {
        let c = normalizing_constant(&params(n, 1.0)).unwrap();
        worst = worst.max(rel(2f64.powf(n as f64 + 2.0 / 3.0) * c, tricomi_constant(n).unwrap()));
    }
    let outcome = if worst < 1e-12 {
        Ok(format!("max relative error {worst:.2e}"))
    } else {
        Err(format!("max relative error {worst:.2e} >= 1e-12"))
    };
    within(Duration::from_secs(1), start, outcome)
}

fn normalization() -> Outcome {
    let start = Instant::now();
    let cfg = QuadratureConfig::default();
    let mut worst: f64 = 0.0;
    for (n, m) in PAIRS {
        for y in [0.1, 1.0, 10.0] {
            let r = verify::check_normalization(params(n, m), y, &cfg).map_err(|e| format!("({n}, {m}, y={y}): {e}"))?;
            worst = worst.max(r.discrepancy);
        }
    }
    let outcome = if worst < 1e-8 {
        Ok(format!("max |mass - 1| = {worst:.2e} over 18 cases"))
    } else {
        Err(format!("max |mass - 1| = {worst:.2e} >= 1e-8"))
    };
    within(Duration::from_secs(10), start, outcome)
}

fn pde_residual() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for (n, m) in PAIRS {
        let points = verify::interior_points(n, 20);
        let r = verify::check_pde_residual(params(n, m), &points).map_err(|e| e.to_string())?;
        worst = worst.max(r.discrepancy);
    }
    let outcome = if worst < 1e-6 {
        Ok(format!("max relative residual {worst:.2e} at 6x20 points"))
    } else {
        Err(format!("max relative residual {worst:.2e} >= 1e-6"))
    };
    within(Duration::from_secs(30), start, outcome)
}

fn step_grid() -> Vec<GridPoint> {
    let xs: Vec<f64> = (0..9).map(|i| -4.0 + i as f64).collect();
    let ys = [0.01, 0.1, 1.0, 10.0, 100.0];
    let mut grid = Vec::new();
    for &y in &ys {
        for &x in &xs {
            grid.push(GridPoint { x: vec![x], y });
        }
    }
    grid
}

fn step_oracle() -> Outcome {
    let start = Instant::now();
    let psi = BoundaryData::step(0.0, 1.0).unwrap();
    let grid = step_grid();
    let field = solver::solve_grid(&psi, &grid, params(1, -1.0), &QuadratureConfig::default())
        .map_err(|e| e.to_string())?;
    let worst = grid
        .iter()
        .zip(&field.values)
        .map(|(p, u)| (u - solver::step_solution_closed_form(0.0, 1.0, p.x[0], p.y)).abs())
        .fold(0.0, f64::max);
    let outcome = if worst < 1e-6 {
        Ok(format!("max error {worst:.2e} on 9x5 grid"))
    } else {
        Err(format!("max error {worst:.2e} >= 1e-6"))
    };
    within(Duration::from_secs(10), start, outcome)
}

fn fourier_airy() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut worst: f64 = 0.0;
    for y in [0.5, 1.0] {
        let r = verify::check_fourier_airy(y, &[0.0, 0.5, 1.0, 2.0], &cfg).map_err(|e| e.to_string())?;
        worst = worst.max(r.discrepancy);
    }
    let mut worst_zero: f64 = 0.0;
    for y in [0.5, 1.0] {
        let lhs = verify::kernel_fourier_transform(0.0, y, &cfg).map_err(|e| e.to_string())?;
        let rhs = verify::airy_transform(0.0, y).map_err(|e| e.to_string())?;
        worst_zero = worst_zero.max((lhs - 1.0).abs()).max((rhs - 1.0).abs());
    }
    if worst < 1e-6 && worst_zero < 1e-10 {
        Ok(format!("max gap {worst:.2e}; at t = 0 max |side - 1| = {worst_zero:.2e}"))
    } else {
        Err(format!("max gap {worst:.2e} (limit 1e-6); t = 0 gap {worst_zero:.2e} (limit 1e-10)"))
    }
}

fn airy_macdonald() -> Outcome {
    let zs: Vec<f64> = (1..=20).map(|i| 0.5 * i as f64).collect();
    let r = verify::check_airy_macdonald(&zs).map_err(|e| e.to_string())?;
    if r.discrepancy < 1e-10 {
        Ok(format!("max relative gap {:.2e} on 20 points", r.discrepancy))
    } else {
        Err(format!("max relative gap {:.2e} >= 1e-10", r.discrepancy))
    }
}

fn hankel() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut worst: f64 = 0.0;
    for n in [1, 2] {
        for (y, r) in [(1.0, 1.0), (1.0, 0.5)] {
            let rep = verify::check_hankel_reduction(n, y, r, &cfg).map_err(|e| e.to_string())?;
            worst = worst.max(rep.discrepancy);
        }
    }
    if worst < 1e-6 {
        Ok(format!("max relative gap {worst:.2e}"))
    } else {
        Err(format!("max relative gap {worst:.2e} >= 1e-6"))
    }
}

fn radial_ode() -> Outcome {
    let mut worst: f64 = 0.0;
    for (n, m) in [(1, 1.0), (3, -1.0), (2, 0.0)] {
        let r = verify::check_radial_ode(params(n, m), &[0.1, 1.0, 10.0]).map_err(|e| e.to_string())?;
        worst = worst.max(r.discrepancy);
    }
    if worst < 1e-10 {
        Ok(format!("max relative residual {worst:.2e}"))
    } else {
        Err(format!("max relative residual {worst:.2e} >= 1e-10"))
    }
}

fn delta_concentration() -> Outcome {
    let mut details = Vec::new();
    for (n, m) in [(1, 1.0), (2, 0.0)] {
        let r = verify::check_delta_concentration(params(n, m), 1.0, &[1.0, 0.1, 0.01, 0.001])
            .map_err(|e| e.to_string())?;
        if !r.pass {
            return Err(format!("({n}, {m}): {}", r.params));
        }
        details.push(format!("({n}, {m}) final sup {:.2e}", r.discrepancy));
    }
    Ok(details.join(", "))
}

fn weak_convergence() -> Outcome {
    let r = verify::check_weak_convergence(
        params(1, 1.0),
        &TestFunction::Gaussian { dim: 1 },
        &[1.0, 0.1, 0.01],
        &QuadratureConfig::default(),
    )
    .map_err(|e| e.to_string())?;
    let d = &r.params["d"];
    if r.pass {
        Ok(format!("d(y) = {d}"))
    } else {
        Err(format!("d(y) = {d}, final must be < 1e-2 and strictly decreasing"))
    }
}

fn self_similarity() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (n, m) = PAIRS[rng.random_range(0..PAIRS.len())];
        let kernel = KernelEvaluator::new(params(n, m)).unwrap();
        let k = kernel.params().k();
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
        let y: f64 = rng.random_range(0.01..10.0);
        let lambda: f64 = rng.random_range(0.1..10.0);
        let scaled: Vec<f64> = x.iter().map(|v| lambda.powf(k) * v).collect();
        let lhs = kernel.value(&scaled, lambda * y).unwrap();
        let rhs = lambda.powf(-k * n as f64) * kernel.value(&x, y).unwrap();
        worst = worst.max(rel(lhs, rhs));
    }
    let outcome = if worst < 1e-12 {
        Ok(format!("max relative gap {worst:.2e} over 100 triples"))
    } else {
        Err(format!("max relative gap {worst:.2e} >= 1e-12"))
    };
    within(Duration::from_secs(1), start, outcome)
}

fn maximum_principle() -> Outcome {
    let cfg = QuadratureConfig::default();
    let mut runs: Vec<(String, BoundaryData, ProblemParams, Vec<GridPoint>, f64, f64)> = vec![(
        "step (1, -1)".into(),
        BoundaryData::step(0.0, 1.0).unwrap(),
        params(1, -1.0),
        step_grid(),
        0.0,
        1.0,
    )];
    for (n, m) in PAIRS {
        let nx = if n == 3 { 3 } else { 5 };
        runs.push((
            format!("constant ({n}, {m})"),
            BoundaryData::constant(n, 1.0).unwrap(),
            params(n, m),
            tensor_grid(n, (-2.0, 2.0), nx, &[0.05, 1.0]),
            1.0,
            1.0,
        ));
    }
    runs.push((
        "gaussian (2, 1)".into(),
        BoundaryData::gaussian(2, 1.0, 0.7).unwrap(),
        params(2, 1.0),
        tensor_grid(2, (-2.0, 2.0), 5, &[0.05, 0.5]),
        0.0,
        1.0,
    ));
    let samples: Vec<(Vec<f64>, f64)> = (0..21).map(|i| {
        let x = -2.0 + 0.2 * i as f64;
        (vec![x], (3.0 * x).sin())
    }).collect();
    runs.push((
        "samples (1, 0.5)".into(),
        BoundaryData::samples(samples, 0.0, 1.0).unwrap(),
        params(1, 0.5),
        tensor_grid(1, (-3.0, 3.0), 13, &[0.01, 0.3, 2.0]),
        -1.0,
        1.0,
    ));

    let mut points = 0;
    for (name, psi, p, grid, lo, hi) in &runs {
        let field = Solver::new(*p, cfg)
            .and_then(|s| s.solve_grid(psi, grid))
            .map_err(|e| format!("{name}: {e}"))?;
        let (min, max) = (field.min(), field.max());
        if min < lo - 1e-6 || max > hi + 1e-6 {
            return Err(format!("{name}: u in [{min}, {max}], data in [{lo}, {hi}]"));
        }
        points += grid.len();
    }
    Ok(format!("{} runs, {points} points inside data range", runs.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("constant identities", constants),
        ("normalization", normalization),
        ("pde residual", pde_residual),
        ("step-data oracle", step_oracle),
        ("fourier/airy identity", fourier_airy),
        ("airy/macdonald identity", airy_macdonald),
        ("hankel reduction", hankel),
        ("radial ode residual", radial_ode),
        ("delta concentration", delta_concentration),
        ("weak convergence", weak_convergence),
        ("self-similarity", self_similarity),
        ("maximum principle", maximum_principle),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("[PASS] {:>2} {name}: {detail} ({elapsed:.2?})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {:>2} {name}: {detail} ({elapsed:.2?})", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
