//! Poisson-type kernels for `y^m Δ_x u + u_yy = 0` in the half-space
//! `y > 0`, and a Dirichlet solver built on them.

pub mod kernel;
pub mod quadrature;
pub mod solver;
pub mod specfun;
pub mod verify;

pub use kernel::{KernelError, KernelEvaluator, ProblemParams};
pub use quadrature::{IntegralResult, QuadratureConfig, QuadratureError};
pub use solver::{BoundaryData, BoundaryFunction, GridPoint, SolutionField, Solver, SolverError};
