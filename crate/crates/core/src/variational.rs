//! The variational formulation: energy functionals, Euler-Lagrange
//! residuals, and the Nehari projection.
//!
//! Two problems share one shape. On the full graph the equation is
//! `-Δu + (lambda a(x) + 1) u = N(u)` with quadratic part
//! `A(u) = ∫ (|∇u|^2 + (lambda a + 1) u^2)`; on a domain with zero Dirichlet
//! boundary values it is `-Δu + u = N(u)` inside the domain with
//! `A(u) = ∫_{Ω ∪ ∂Ω} |∇u|^2 + ∫_Ω u^2` and `u` extended by zero. In both
//! cases the energy is `J(u) = A(u)/2 - B(u)/(p+1)` where `B` integrates
//! `|u|^{p+1}` or `(u_+)^{p+1}` depending on the nonlinearity, and critical
//! points with `A = B` make up the Nehari manifold.

use crate::calculus::{gamma_at, laplacian_at, VertexFunction};
use crate::error::{Error, Result};
use crate::graph::{potential_well, Domain, Potential, WeightedGraph};

/// Right-hand side of the equation.
///
/// `Signed` uses `N(u) = |u|^{p-1} u`, the classical odd nonlinearity.
/// `PositivePart` uses `N(u) = (u_+)^p`, which kills the negative part in
/// the forcing term (the quadratic part of the energy is unchanged); its
/// nontrivial solutions are automatically nonnegative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nonlinearity {
    Signed,
    PositivePart,
}

impl Nonlinearity {
    /// `N(u)`.
    pub fn forcing(self, p: f64, u: f64) -> f64 {
        match self {
            // signum(0) is 1 in Rust, but |0|^p = 0 keeps the product right.
            Nonlinearity::Signed => u.signum() * u.abs().powf(p),
            Nonlinearity::PositivePart => u.max(0.0).powf(p),
        }
    }

    /// `N'(u) = p |u|^{p-1}` or `p (u_+)^{p-1}`.
    pub fn forcing_derivative(self, p: f64, u: f64) -> f64 {
        match self {
            Nonlinearity::Signed => p * u.abs().powf(p - 1.0),
            Nonlinearity::PositivePart => p * u.max(0.0).powf(p - 1.0),
        }
    }

    /// Integrand of `B`: `|u|^{p+1}` or `(u_+)^{p+1}`, the antiderivative of
    /// `(p+1) N`.
    pub fn mass_density(self, p: f64, u: f64) -> f64 {
        match self {
            Nonlinearity::Signed => u.abs().powf(p + 1.0),
            Nonlinearity::PositivePart => u.max(0.0).powf(p + 1.0),
        }
    }
}

/// Which equation is being solved.
#[derive(Debug, Clone, PartialEq)]
pub enum ProblemKind {
    /// `-Δu + (lambda a + 1) u = N(u)` on the whole vertex set.
    FullGraph { potential: Potential, lambda: f64 },
    /// `-Δu + u = N(u)` on the domain interior, zero outside.
    Dirichlet { domain: Domain },
}

/// A fully specified instance: graph, equation, exponent, nonlinearity.
///
/// Construction validates everything the solvers later rely on, so a
/// `Problem` in hand means the graph is connected, `p >= 2`, and for the
/// full-graph equation that `lambda > 0` and the potential vanishes on a
/// non-empty connected well.
#[derive(Debug, Clone)]
pub struct Problem<'g> {
    graph: &'g WeightedGraph,
    kind: ProblemKind,
    p: f64,
    nonlinearity: Nonlinearity,
    active: Vec<usize>,
}

impl<'g> Problem<'g> {
    pub fn full_graph(
        graph: &'g WeightedGraph,
        potential: Potential,
        lambda: f64,
        p: f64,
        nonlinearity: Nonlinearity,
    ) -> Result<Self> {
        if !graph.is_connected() {
            return Err(Error::Disconnected);
        }
        if potential.values().len() != graph.len() {
            return Err(Error::LengthMismatch {
                got: potential.values().len(),
                expected: graph.len(),
            });
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::NonPositiveLambda(lambda));
        }
        check_power(p)?;
        potential_well(graph, &potential)?;
        Ok(Problem {
            graph,
            kind: ProblemKind::FullGraph { potential, lambda },
            p,
            nonlinearity,
            active: (0..graph.len()).collect(),
        })
    }

    pub fn dirichlet(
        graph: &'g WeightedGraph,
        domain: Domain,
        p: f64,
        nonlinearity: Nonlinearity,
    ) -> Result<Self> {
        if !graph.is_connected() {
            return Err(Error::Disconnected);
        }
        if domain.ambient_len() != graph.len() {
            return Err(Error::LengthMismatch {
                got: domain.ambient_len(),
                expected: graph.len(),
            });
        }
        check_power(p)?;
        let active = domain.interior().to_vec();
        Ok(Problem {
            graph,
            kind: ProblemKind::Dirichlet { domain },
            p,
            nonlinearity,
            active,
        })
    }

    pub fn graph(&self) -> &'g WeightedGraph {
        self.graph
    }

    pub fn kind(&self) -> &ProblemKind {
        &self.kind
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn nonlinearity(&self) -> Nonlinearity {
        self.nonlinearity
    }

    pub fn lambda(&self) -> Option<f64> {
        match &self.kind {
            ProblemKind::FullGraph { lambda, .. } => Some(*lambda),
            ProblemKind::Dirichlet { .. } => None,
        }
    }

    pub fn potential(&self) -> Option<&Potential> {
        match &self.kind {
            ProblemKind::FullGraph { potential, .. } => Some(potential),
            ProblemKind::Dirichlet { .. } => None,
        }
    }

    pub fn domain(&self) -> Option<&Domain> {
        match &self.kind {
            ProblemKind::FullGraph { .. } => None,
            ProblemKind::Dirichlet { domain } => Some(domain),
        }
    }

    /// Vertices the unknown actually lives on: all of them for the
    /// full-graph equation, the domain interior for the Dirichlet one.
    pub fn active(&self) -> &[usize] {
        &self.active
    }

    /// Coefficient of the zeroth-order term at a vertex: `lambda a(x) + 1`
    /// or `1`.
    pub fn coefficient(&self, x: usize) -> f64 {
        match &self.kind {
            ProblemKind::FullGraph { potential, lambda } => lambda * potential.value(x) + 1.0,
            ProblemKind::Dirichlet { .. } => 1.0,
        }
    }

    /// Checks that `u` matches the graph and, for the Dirichlet problem,
    /// vanishes exactly outside the interior.
    pub fn check_function(&self, u: &VertexFunction) -> Result<()> {
        if u.len() != self.graph.len() {
            return Err(Error::LengthMismatch {
                got: u.len(),
                expected: self.graph.len(),
            });
        }
        if let ProblemKind::Dirichlet { domain } = &self.kind {
            crate::calculus::check_support(self.graph, domain, u)?;
        }
        Ok(())
    }

    /// Quadratic part `A(u)`, the square of the problem norm.
    pub fn quad_form(&self, u: &VertexFunction) -> Result<f64> {
        self.check_function(u)?;
        let g = self.graph;
        Ok(match &self.kind {
            ProblemKind::FullGraph { potential, lambda } => (0..g.len())
                .map(|x| {
                    let ux = u.value(x);
                    g.mu(x)
                        * (gamma_at(g, u, u, x) + (lambda * potential.value(x) + 1.0) * ux * ux)
                })
                .sum(),
            ProblemKind::Dirichlet { domain } => {
                let grad: f64 = domain
                    .closure()
                    .iter()
                    .map(|&x| g.mu(x) * gamma_at(g, u, u, x))
                    .sum();
                let mass: f64 = domain
                    .interior()
                    .iter()
                    .map(|&x| {
                        let ux = u.value(x);
                        g.mu(x) * ux * ux
                    })
                    .sum();
                grad + mass
            }
        })
    }

    /// The norm the problem's own energy space carries: `sqrt(A(u))`.
    pub fn problem_norm(&self, u: &VertexFunction) -> Result<f64> {
        Ok(self.quad_form(u)?.sqrt())
    }

    /// Nonlinear mass `B(u) = ∫ |u|^{p+1}` (or `(u_+)^{p+1}`) over the
    /// active vertices.
    pub fn nonlinear_mass(&self, u: &VertexFunction) -> Result<f64> {
        self.check_function(u)?;
        let g = self.graph;
        Ok(self
            .active
            .iter()
            .map(|&x| g.mu(x) * self.nonlinearity.mass_density(self.p, u.value(x)))
            .sum())
    }
}

fn check_power(p: f64) -> Result<()> {
    if p.is_finite() && p >= 2.0 {
        Ok(())
    } else {
        Err(Error::BadPower(p))
    }
}

/// Energy `J(u) = A(u)/2 - B(u)/(p+1)`.
pub fn energy(problem: &Problem, u: &VertexFunction) -> Result<f64> {
    let a = problem.quad_form(u)?;
    let b = problem.nonlinear_mass(u)?;
    Ok(a / 2.0 - b / (problem.p() + 1.0))
}

/// Euler-Lagrange residual `r(x) = -Δu(x) + c(x) u(x) - N(u(x))` on the
/// active vertices, zero elsewhere. The gradient of the energy is the
/// residual weighted by the measure: `∂J/∂u(x) = mu(x) r(x)`.
///
/// For the Dirichlet problem the Laplacian still sums over all graph
/// neighbors, so boundary vertices are felt through the zero extension.
pub fn el_residual(problem: &Problem, u: &VertexFunction) -> Result<VertexFunction> {
    problem.check_function(u)?;
    let g = problem.graph();
    let p = problem.p();
    let nl = problem.nonlinearity();
    let mut values = vec![0.0; g.len()];
    for &x in problem.active() {
        let ux = u.value(x);
        values[x] = -laplacian_at(g, u, x) + problem.coefficient(x) * ux - nl.forcing(p, ux);
    }
    VertexFunction::new(g, values)
}

/// Nehari residual `A(u) - B(u)`; zero exactly on the Nehari manifold.
pub fn nehari_residual(problem: &Problem, u: &VertexFunction) -> Result<f64> {
    Ok(problem.quad_form(u)? - problem.nonlinear_mass(u)?)
}

/// The scale `t* = (A/B)^(1/(p-1))` that puts `t* u` on the Nehari
/// manifold. Fails on the zero function and when the nonlinear mass
/// vanishes (for the positive-part variant this means `u <= 0` everywhere).
pub fn nehari_scale(problem: &Problem, u: &VertexFunction) -> Result<f64> {
    problem.check_function(u)?;
    if u.sup_norm() == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let b = problem.nonlinear_mass(u)?;
    if b == 0.0 {
        return Err(Error::ZeroNonlinearMass);
    }
    let a = problem.quad_form(u)?;
    Ok((a / b).powf(1.0 / (problem.p() - 1.0)))
}
