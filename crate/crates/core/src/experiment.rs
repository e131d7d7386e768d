//! The lambda-sweep convergence study and the built-in nine-vertex
//! reproduction, plus CSV output and the randomized identity suite behind
//! the `verify` subcommand.
//!
//! As the coupling grows, the full-graph ground state localizes into the
//! potential well: its energy `m_lambda` climbs toward the Dirichlet energy
//! `m_omega`, its values outside the well shrink, and `lambda ∫ a u^2` (the
//! price of living where the potential is positive) collapses. The sweep
//! solves the problem on an increasing lambda grid, solves the Dirichlet
//! problem on the well once, and tabulates exactly those quantities.

use std::fmt;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::calculus::{
    check_integration_by_parts, check_integration_by_parts_dirichlet, gamma_at, integrate,
    laplacian, lp_norm, norm_e_lambda, norm_w12, VertexFunction,
};
use crate::error::{Error, Result};
use crate::graph::{builtin_g9, potential_well, Domain, Potential, WeightedGraph};
use crate::sampling::{random_function, random_function_on, random_subset};
use crate::solver::{solve_ground_state, GroundState, SolverConfig};
use crate::variational::{Nonlinearity, Problem};

/// Per-lambda convergence metrics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaMetrics {
    pub lambda: f64,
    /// Ground-state energy at this lambda.
    pub m_lambda: f64,
    /// `m_omega - m_lambda`; positive all the way to the limit.
    pub m_gap: f64,
    /// `‖u_lambda - u_0‖` in the whole-graph Sobolev norm, with the
    /// Dirichlet solution extended by zero.
    pub w12_distance: f64,
    /// Largest `|u_lambda|` outside the well.
    pub outside_max: f64,
    /// `lambda ∫ a u_lambda^2 dmu`.
    pub potential_mass: f64,
}

/// A completed sweep: one converged state per lambda plus the Dirichlet
/// reference solve on the well.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub lambdas: Vec<f64>,
    pub states: Vec<GroundState>,
    pub dirichlet_state: GroundState,
    pub metrics: Vec<LambdaMetrics>,
}

impl SweepResult {
    /// The Dirichlet ground-state energy `m_omega`.
    pub fn m_omega(&self) -> f64 {
        self.dirichlet_state.energy
    }
}

/// Whether each lambda is solved fresh or started from its predecessor.
///
/// Warm starting follows the ground-state branch and is the default; cold
/// starting re-solves independently, which is how path independence of the
/// result gets tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    WarmStart,
    ColdStart,
}

/// Solves the full-graph problem across a strictly increasing lambda grid
/// and the Dirichlet problem on the potential well, then computes every
/// convergence metric. A potential without zeros, with a disconnected
/// zero set, or identically zero (no outside region to flee) is rejected.
///
/// A failed solve aborts with the failing lambda and the partial sweep.
pub fn lambda_sweep(
    graph: &WeightedGraph,
    potential: &Potential,
    p: f64,
    nonlinearity: Nonlinearity,
    lambdas: &[f64],
    config: &SolverConfig,
    mode: SweepMode,
) -> Result<SweepResult> {
    if lambdas.is_empty()
        || lambdas.iter().any(|&l| !(l.is_finite() && l > 0.0))
        || lambdas.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(Error::BadLambdaGrid);
    }
    if potential.is_zero() {
        return Err(Error::TrivialPotential);
    }
    let well = potential_well(graph, potential)?;

    let dirichlet_problem = Problem::dirichlet(graph, well.clone(), p, nonlinearity)?;
    let dirichlet_config = SolverConfig {
        // A full-graph guess does not vanish outside the well; the
        // Dirichlet reference solve always draws its own starts.
        initial_guess: None,
        ..config.clone()
    };
    let dirichlet_state = solve_ground_state(&dirichlet_problem, &dirichlet_config)?;
    let m_omega = dirichlet_state.energy;
    let u0 = &dirichlet_state.u;

    let mut states: Vec<GroundState> = Vec::with_capacity(lambdas.len());
    let mut metrics: Vec<LambdaMetrics> = Vec::with_capacity(lambdas.len());

    for (i, &lambda) in lambdas.iter().enumerate() {
        let problem =
            Problem::full_graph(graph, potential.clone(), lambda, p, nonlinearity)?;
        let step_config = match (mode, i) {
            (SweepMode::WarmStart, i) if i > 0 => SolverConfig {
                initial_guess: Some(states[i - 1].u.clone()),
                ..config.clone()
            },
            _ => config.clone(),
        };
        let state = match solve_ground_state(&problem, &step_config) {
            Ok(state) => state,
            Err(source) => {
                return Err(Error::SweepAborted {
                    lambda,
                    partial: Box::new(SweepResult {
                        lambdas: lambdas[..i].to_vec(),
                        states,
                        dirichlet_state,
                        metrics,
                    }),
                    source: Box::new(source),
                });
            }
        };

        let diff = VertexFunction::new(
            graph,
            state
                .u
                .values()
                .iter()
                .zip(u0.values())
                .map(|(a, b)| a - b)
                .collect(),
        )?;
        let w12_distance = norm_w12(graph, &diff)?;
        let outside_max = (0..graph.len())
            .filter(|&x| !well.contains(x))
            .fold(0.0_f64, |m, x| m.max(state.u.value(x).abs()));
        let potential_mass = lambda
            * (0..graph.len())
                .map(|x| {
                    let ux = state.u.value(x);
                    graph.mu(x) * potential.value(x) * ux * ux
                })
                .sum::<f64>();
        metrics.push(LambdaMetrics {
            lambda,
            m_lambda: state.energy,
            m_gap: m_omega - state.energy,
            w12_distance,
            outside_max,
            potential_mass,
        });
        states.push(state);
    }

    Ok(SweepResult {
        lambdas: lambdas.to_vec(),
        states,
        dirichlet_state,
        metrics,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Converged,
    NotConverged,
    /// Fewer than two sweep points; a trend needs at least two.
    Withheld,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Converged => write!(f, "converged"),
            Verdict::NotConverged => write!(f, "not converged"),
            Verdict::Withheld => write!(f, "withheld (needs at least 2 sweep points)"),
        }
    }
}

/// The per-lambda metric table plus a verdict: converged when the last
/// row's `w12_distance` and `potential_mass` both fall under the
/// tolerance.
#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub tolerance: f64,
    pub m_omega: f64,
    pub rows: Vec<LambdaMetrics>,
    pub verdict: Verdict,
}

pub fn convergence_report(sweep: &SweepResult, tolerance: f64) -> ConvergenceReport {
    let rows = sweep.metrics.clone();
    let verdict = if rows.len() < 2 {
        Verdict::Withheld
    } else {
        let last = rows.last().expect("rows checked non-empty");
        if last.w12_distance <= tolerance && last.potential_mass <= tolerance {
            Verdict::Converged
        } else {
            Verdict::NotConverged
        }
    };
    ConvergenceReport {
        tolerance,
        m_omega: sweep.m_omega(),
        rows,
        verdict,
    }
}

impl fmt::Display for ConvergenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>10}  {:>13}  {:>13}  {:>13}  {:>13}  {:>14}",
            "lambda", "m_lambda", "m_gap", "w12_distance", "outside_max", "potential_mass"
        )?;
        for row in &self.rows {
            writeln!(
                f,
                "{:>10.1e}  {:>13.6e}  {:>13.6e}  {:>13.6e}  {:>13.6e}  {:>14.6e}",
                row.lambda,
                row.m_lambda,
                row.m_gap,
                row.w12_distance,
                row.outside_max,
                row.potential_mass
            )?;
        }
        writeln!(f, "m_omega = {:.12e}", self.m_omega)?;
        write!(
            f,
            "verdict: {} (tolerance {:.1e} on the last row)",
            self.verdict, self.tolerance
        )
    }
}

/// Initial vector for the nine-vertex study, indexed by vertex.
pub const G9_INITIAL_GUESS: [f64; 9] = [
    8.1472, 9.0579, 1.2699, 9.1338, 6.3236, 0.9754, 2.7850, 5.4688, 9.5751,
];

/// Default report tolerance quantifying "almost zero" in the study.
pub const G9_REPORT_TOLERANCE: f64 = 1e-3;

/// The decade grid `10^0 .. 10^9`.
pub fn g9_lambdas() -> Vec<f64> {
    (0..=9).map(|k| 10f64.powi(k)).collect()
}

/// Runs the built-in nine-vertex study: p = 2, positive-part nonlinearity,
/// the fixed initial vector as the first start, decade lambda grid, warm
/// continuation. Writes `sweep.csv` and `trend.csv` into `out_dir` when
/// given.
pub fn run_g9(
    config: &SolverConfig,
    report_tolerance: f64,
    out_dir: Option<&Path>,
) -> Result<(SweepResult, ConvergenceReport)> {
    let (graph, potential) = builtin_g9();
    let guess = VertexFunction::new(&graph, G9_INITIAL_GUESS.to_vec())?;
    let g9_config = SolverConfig {
        initial_guess: Some(guess),
        ..config.clone()
    };
    let sweep = lambda_sweep(
        &graph,
        &potential,
        2.0,
        Nonlinearity::PositivePart,
        &g9_lambdas(),
        &g9_config,
        SweepMode::WarmStart,
    )?;
    let report = convergence_report(&sweep, report_tolerance);
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir)?;
        write_sweep_csv(&dir.join("sweep.csv"), &sweep)?;
        write_trend_csv(&dir.join("trend.csv"), &sweep)?;
    }
    Ok((sweep, report))
}

/// 17 significant digits; enough to reproduce the f64 bit pattern.
fn csv_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// `solution.csv`: one row per vertex with the solution value, the
/// potential, and the Euler-Lagrange residual.
pub fn write_solution_csv(
    path: &Path,
    graph: &WeightedGraph,
    potential: &Potential,
    u: &VertexFunction,
    residual: &VertexFunction,
) -> Result<()> {
    let mut out = String::from("vertex,u,a,residual\n");
    for x in 0..graph.len() {
        writeln!(
            out,
            "{},{},{},{}",
            graph.id(x),
            csv_float(u.value(x)),
            csv_float(potential.value(x)),
            csv_float(residual.value(x))
        )
        .expect("writing to a String cannot fail");
    }
    fs::write(path, out)?;
    Ok(())
}

/// `sweep.csv`: the metric table, one row per lambda.
pub fn write_sweep_csv(path: &Path, sweep: &SweepResult) -> Result<()> {
    let mut out = String::from("lambda,m_lambda,m_gap,w12_distance,outside_max,potential_mass\n");
    for row in &sweep.metrics {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            csv_float(row.lambda),
            csv_float(row.m_lambda),
            csv_float(row.m_gap),
            csv_float(row.w12_distance),
            csv_float(row.outside_max),
            csv_float(row.potential_mass)
        )
        .expect("writing to a String cannot fail");
    }
    fs::write(path, out)?;
    Ok(())
}

/// `trend.csv`: per-lambda solution values, one column per vertex.
pub fn write_trend_csv(path: &Path, sweep: &SweepResult) -> Result<()> {
    let n = sweep
        .states
        .first()
        .map(|s| s.u.len())
        .unwrap_or(0);
    let mut out = String::from("lambda");
    for i in 1..=n {
        write!(out, ",u{i}").expect("writing to a String cannot fail");
    }
    out.push('\n');
    for (lambda, state) in sweep.lambdas.iter().zip(&sweep.states) {
        write!(out, "{}", csv_float(*lambda)).expect("writing to a String cannot fail");
        for x in 0..n {
            write!(out, ",{}", csv_float(state.u.value(x)))
                .expect("writing to a String cannot fail");
        }
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

/// Outcome of the randomized identity and embedding suite. Gaps are the
/// worst relative discrepancies seen; the violation field is signed, so
/// anything at or below roundoff scale means the inequalities held.
#[derive(Debug, Clone, Copy)]
pub struct IdentitySuiteReport {
    pub trials: usize,
    pub max_parts_gap: f64,
    pub max_parts_dirichlet_gap: f64,
    pub max_gamma_symmetry_gap: f64,
    pub max_divergence_gap: f64,
    pub max_embedding_violation: f64,
    pub passed: bool,
}

/// Tolerances the suite enforces.
pub const PARTS_TOLERANCE: f64 = 1e-12;
pub const GAMMA_SYMMETRY_TOLERANCE: f64 = 1e-13;
pub const DIVERGENCE_TOLERANCE: f64 = 1e-13;
pub const EMBEDDING_TOLERANCE: f64 = 1e-12;

/// Runs `trials` seeded rounds of the summation-by-parts identities (whole
/// graph and random Dirichlet domains), gradient-form symmetry, the
/// divergence theorem (`∫ Δu = 0`), and the sup-norm and interpolation
/// embedding inequalities on the given graph.
pub fn identity_suite(
    graph: &WeightedGraph,
    potential: &Potential,
    trials: usize,
    seed: u64,
) -> Result<IdentitySuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_parts_gap = 0.0_f64;
    let mut max_parts_dirichlet_gap = 0.0_f64;
    let mut max_gamma_symmetry_gap = 0.0_f64;
    let mut max_divergence_gap = 0.0_f64;
    let mut max_embedding_violation = f64::NEG_INFINITY;

    for _ in 0..trials {
        let u = random_function(&mut rng, graph, -2.0, 2.0);
        let v = random_function(&mut rng, graph, -2.0, 2.0);

        let parts = check_integration_by_parts(graph, &u, &v)?;
        max_parts_gap = max_parts_gap.max(parts.relative());

        for x in 0..graph.len() {
            let gap = (gamma_at(graph, &u, &v, x) - gamma_at(graph, &v, &u, x)).abs();
            max_gamma_symmetry_gap = max_gamma_symmetry_gap.max(gap);
        }

        let lap = laplacian(graph, &u)?;
        let total = integrate(graph, &lap)?;
        let lap_abs = VertexFunction::from_fn(graph, |x| lap.value(x).abs());
        let scale = integrate(graph, &lap_abs)?.max(1.0);
        max_divergence_gap = max_divergence_gap.max(total.abs() / scale);

        let interior = random_subset(&mut rng, graph.len());
        let domain = Domain::from_interior(graph, &interior)?;
        let us = random_function_on(&mut rng, graph, &domain, -2.0, 2.0);
        let vs = random_function_on(&mut rng, graph, &domain, -2.0, 2.0);
        let dparts = check_integration_by_parts_dirichlet(graph, &domain, &us, &vs)?;
        max_parts_dirichlet_gap = max_parts_dirichlet_gap.max(dparts.relative());

        let sup = lp_norm(graph, &u, f64::INFINITY)?;
        let l2 = lp_norm(graph, &u, 2.0)?;
        let mu_min = graph.mu_min();
        for lambda in [1.0, 10.0] {
            let norm = norm_e_lambda(graph, &u, potential, lambda)?;
            let bound = mu_min.powf(-0.5) * norm;
            let violation = (sup - bound) / bound.max(1.0);
            max_embedding_violation = max_embedding_violation.max(violation);
        }
        for q in [3.0, 4.0, 6.0] {
            let lq = lp_norm(graph, &u, q)?;
            let lhs = lq.powf(q);
            let rhs = sup.powf(q - 2.0) * l2 * l2;
            let violation = (lhs - rhs) / rhs.max(1.0);
            max_embedding_violation = max_embedding_violation.max(violation);
        }
    }

    let passed = max_parts_gap <= PARTS_TOLERANCE
        && max_parts_dirichlet_gap <= PARTS_TOLERANCE
        && max_gamma_symmetry_gap <= GAMMA_SYMMETRY_TOLERANCE
        && max_divergence_gap <= DIVERGENCE_TOLERANCE
        && max_embedding_violation <= EMBEDDING_TOLERANCE;

    Ok(IdentitySuiteReport {
        trials,
        max_parts_gap,
        max_parts_dirichlet_gap,
        max_gamma_symmetry_gap,
        max_divergence_gap,
        max_embedding_violation,
        passed,
    })
}

impl fmt::Display for IdentitySuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "identity suite: {} trials", self.trials)?;
        writeln!(
            f,
            "  summation by parts (whole graph)  max rel gap {:.3e}  (tol {:.0e})",
            self.max_parts_gap, PARTS_TOLERANCE
        )?;
        writeln!(
            f,
            "  summation by parts (Dirichlet)    max rel gap {:.3e}  (tol {:.0e})",
            self.max_parts_dirichlet_gap, PARTS_TOLERANCE
        )?;
        writeln!(
            f,
            "  gradient-form symmetry            max abs gap {:.3e}  (tol {:.0e})",
            self.max_gamma_symmetry_gap, GAMMA_SYMMETRY_TOLERANCE
        )?;
        writeln!(
            f,
            "  divergence theorem                max rel gap {:.3e}  (tol {:.0e})",
            self.max_divergence_gap, DIVERGENCE_TOLERANCE
        )?;
        writeln!(
            f,
            "  embedding inequalities            max violation {:.3e}  (tol {:.0e})",
            self.max_embedding_violation, EMBEDDING_TOLERANCE
        )?;
        write!(f, "result: {}", if self.passed { "PASS" } else { "FAIL" })
    }
}
