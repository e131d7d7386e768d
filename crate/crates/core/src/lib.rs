//! Ground states of discrete nonlinear Schrödinger equations on finite
//! weighted graphs.
//!
//! The equation is
//!
//! ```text
//! -Δu + (lambda a(x) + 1) u = |u|^(p-1) u        on a finite graph G,
//! ```
//!
//! with the measure-weighted graph Laplacian Δ, a nonnegative potential `a`
//! whose zero set Ω is the potential well, and p ≥ 2. Ground states are
//! found by minimizing the energy over the Nehari manifold: multistart
//! preconditioned descent on the scale-invariant Rayleigh-type quotient,
//! projection onto the manifold, then a damped Newton polish of the
//! Euler-Lagrange system. The Dirichlet variant of the problem on Ω plays
//! the role of the lambda → ∞ limit; [`experiment::lambda_sweep`] measures
//! how fast the full-graph ground state localizes into the well as the
//! coupling grows.
//!
//! Everything is deterministic for a fixed seed: random starts come from a
//! counter-based generator, and all reductions run in a fixed order.

// Comparisons written as `!(x > y)` are deliberate: they send NaN down the
// rejecting branch, where `x <= y` would silently accept it.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calculus;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod sampling;
pub mod solver;
pub mod variational;

// Compile-checks the code block in the README.
#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
struct ReadmeDoctests;

pub use calculus::{
    gamma, gradient_length_at, integrate, laplacian, lp_norm, norm_e_lambda, norm_w12,
    norm_w12_zero, VertexFunction,
};
pub use error::{Error, Result};
pub use experiment::{
    convergence_report, identity_suite, lambda_sweep, run_g9, ConvergenceReport, LambdaMetrics,
    SweepMode, SweepResult, Verdict,
};
pub use graph::{
    boundary, builtin_g9, parse_graph, potential_well, serialize_graph, validate, Domain,
    Potential, WeightedGraph,
};
pub use solver::{
    enumerate_solutions, solve_ground_state, verify_solution, GroundState, SolverConfig,
    VerificationReport,
};
pub use variational::{energy, el_residual, nehari_residual, nehari_scale, Nonlinearity, Problem};
