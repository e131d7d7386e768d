//! Command-line front end: single-shot solves, Dirichlet solves on a
//! subdomain, lambda sweeps with the convergence table, the built-in
//! nine-vertex study, and the randomized identity suite.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};

use nehari::error::{Error, Result};
use nehari::experiment::{
    convergence_report, identity_suite, lambda_sweep, run_g9, write_solution_csv, write_sweep_csv,
    write_trend_csv, SweepMode, G9_REPORT_TOLERANCE,
};
use nehari::graph::{parse_graph, potential_well, Domain, Potential, WeightedGraph};
use nehari::solver::{solve_ground_state, verify_solution, GroundState, SolverConfig};
use nehari::variational::{el_residual, Nonlinearity, Problem};

#[derive(Parser)]
#[command(
    name = "nehari",
    version,
    about = "Ground states of nonlinear Schrödinger equations on finite weighted graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the ground state on the whole graph at one coupling value.
    Solve {
        /// Graph file (vertex/edge lines; vertices carry mu and the potential).
        #[arg(long)]
        graph: PathBuf,
        /// Coupling constant in front of the potential; must be positive.
        #[arg(long)]
        lambda: f64,
        /// Nonlinearity exponent; must be at least 2.
        #[arg(long)]
        p: f64,
        /// Use the positive-part nonlinearity (u+)^p instead of |u|^(p-1) u.
        #[arg(long)]
        positive: bool,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Number of random multistart attempts.
        #[arg(long, default_value_t = 8)]
        starts: usize,
        /// Euler-Lagrange residual tolerance (sup norm).
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Output CSV file (vertex,u,a,residual).
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve the Dirichlet ground state on a subdomain, zero outside.
    #[command(group(ArgGroup::new("omega_source").required(true).args(["omega", "omega_from_well"])))]
    Dirichlet {
        #[arg(long)]
        graph: PathBuf,
        /// Interior vertices of the domain, by id.
        #[arg(long, value_delimiter = ',')]
        omega: Option<Vec<String>>,
        /// Take the domain to be the zero set of the graph file's potential.
        #[arg(long)]
        omega_from_well: bool,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        positive: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sweep the coupling over a grid and tabulate localization metrics.
    Sweep {
        #[arg(long)]
        graph: PathBuf,
        /// Grid spec: geometric `START:END:xFACTOR` (e.g. 1e0:1e9:x10) or a
        /// comma list (e.g. 1,10,100).
        #[arg(long)]
        lambdas: String,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        positive: bool,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Solve every lambda independently instead of warm-starting from
        /// the previous one.
        #[arg(long)]
        cold: bool,
        /// Tolerance the convergence verdict applies to the last row.
        #[arg(long, default_value_t = G9_REPORT_TOLERANCE)]
        report_tol: f64,
        /// Output directory for sweep.csv and trend.csv.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the built-in nine-vertex localization study.
    G9 {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Output directory for sweep.csv and trend.csv.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Tolerance the convergence verdict applies to the last row.
        #[arg(long, default_value_t = G9_REPORT_TOLERANCE)]
        report_tol: f64,
    },
    /// Run the randomized calculus identity and embedding suites.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            let mut source = std::error::Error::source(&err);
            while let Some(cause) = source {
                eprintln!("  caused by: {cause}");
                source = cause.source();
            }
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Solve {
            graph,
            lambda,
            p,
            positive,
            seed,
            starts,
            tol,
            out,
        } => {
            let (g, a) = load_graph(&graph)?;
            let problem =
                Problem::full_graph(&g, a.clone(), lambda, p, nonlinearity(positive))?;
            let config = SolverConfig {
                seed,
                n_starts: starts,
                el_tolerance: tol,
                ..SolverConfig::default()
            };
            let state = solve_ground_state(&problem, &config)?;
            report_state(&problem, &state);
            write_solution(&out, &g, &a, &problem, &state)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Dirichlet {
            graph,
            omega,
            omega_from_well,
            p,
            positive,
            out,
        } => {
            let (g, a) = load_graph(&graph)?;
            let domain = if omega_from_well {
                potential_well(&g, &a)?
            } else {
                let ids = omega.expect("clap enforces one domain source");
                let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
                Domain::from_interior_ids(&g, &refs)?
            };
            let problem = Problem::dirichlet(&g, domain, p, nonlinearity(positive))?;
            let state = solve_ground_state(&problem, &SolverConfig::default())?;
            report_state(&problem, &state);
            write_solution(&out, &g, &a, &problem, &state)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep {
            graph,
            lambdas,
            p,
            positive,
            seed,
            cold,
            report_tol,
            out,
        } => {
            let (g, a) = load_graph(&graph)?;
            let grid = parse_lambda_grid(&lambdas)?;
            let config = SolverConfig {
                seed,
                ..SolverConfig::default()
            };
            let mode = if cold {
                SweepMode::ColdStart
            } else {
                SweepMode::WarmStart
            };
            let sweep = lambda_sweep(&g, &a, p, nonlinearity(positive), &grid, &config, mode)?;
            fs::create_dir_all(&out)?;
            write_sweep_csv(&out.join("sweep.csv"), &sweep)?;
            write_trend_csv(&out.join("trend.csv"), &sweep)?;
            println!("{}", convergence_report(&sweep, report_tol));
            println!(
                "wrote {} and {}",
                out.join("sweep.csv").display(),
                out.join("trend.csv").display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::G9 {
            seed,
            out,
            report_tol,
        } => {
            let config = SolverConfig {
                seed,
                ..SolverConfig::default()
            };
            let (_, report) = run_g9(&config, report_tol, out.as_deref())?;
            println!("{report}");
            if let Some(dir) = out {
                println!(
                    "wrote {} and {}",
                    dir.join("sweep.csv").display(),
                    dir.join("trend.csv").display()
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            graph,
            trials,
            seed,
        } => {
            let (g, a) = load_graph(&graph)?;
            let report = identity_suite(&g, &a, trials, seed)?;
            println!("{report}");
            Ok(if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}

fn nonlinearity(positive: bool) -> Nonlinearity {
    if positive {
        Nonlinearity::PositivePart
    } else {
        Nonlinearity::Signed
    }
}

fn load_graph(path: &Path) -> Result<(WeightedGraph, Potential)> {
    let text = fs::read_to_string(path)
        .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
    parse_graph(&text)
}

/// Parses `START:END:xFACTOR` into a geometric grid, or a comma list of
/// values taken verbatim.
fn parse_lambda_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = |why: &str| Error::BadConfig(format!("lambda grid '{spec}': {why}"));
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected START:END:xFACTOR"));
        }
        let start: f64 = parts[0].parse().map_err(|_| bad("bad start value"))?;
        let end: f64 = parts[1].parse().map_err(|_| bad("bad end value"))?;
        let factor: f64 = parts[2]
            .strip_prefix('x')
            .ok_or_else(|| bad("factor must look like x10"))?
            .parse()
            .map_err(|_| bad("bad factor value"))?;
        if !(start > 0.0 && start.is_finite()) || !(end >= start && end.is_finite()) {
            return Err(bad("need 0 < START <= END"));
        }
        if !(factor > 1.0 && factor.is_finite()) {
            return Err(bad("need FACTOR > 1"));
        }
        let mut grid = Vec::new();
        let mut value = start;
        // The slack keeps END itself in the grid when the last multiply
        // rounds a hair above it.
        while value <= end * (1.0 + 1e-12) {
            grid.push(value);
            value *= factor;
        }
        Ok(grid)
    } else {
        spec.split(',')
            .map(|tok| tok.trim().parse::<f64>().map_err(|_| bad("bad value")))
            .collect()
    }
}

fn report_state(problem: &Problem, state: &GroundState) {
    println!("ground state found");
    println!("  energy          = {:.12e}", state.energy);
    println!("  el residual sup = {:.3e}", state.el_residual_inf);
    println!("  nehari residual = {:.3e}", state.nehari_residual);
    println!(
        "  iterations      = {} (starts used: {}, seed: {})",
        state.iterations, state.starts_used, state.seed
    );
    match verify_solution(problem, &state.u) {
        Ok(check) => {
            let status = if check.structural_ok() { "ok" } else { "FAILED" };
            println!(
                "  verifier        = {status} (energy identity gap {:.3e}, sigma bound {}, embeddings {})",
                check.energy_identity_gap,
                if check.sigma_bound_ok { "ok" } else { "violated" },
                if check.embedding_ok { "ok" } else { "violated" },
            );
        }
        Err(err) => println!("  verifier        = unavailable ({err})"),
    }
}

fn write_solution(
    out: &Path,
    g: &WeightedGraph,
    a: &Potential,
    problem: &Problem,
    state: &GroundState,
) -> Result<()> {
    let residual = el_residual(problem, &state.u)?;
    write_solution_csv(out, g, a, &state.u, &residual)?;
    println!("wrote {}", out.display());
    Ok(())
}
