//! Discrete calculus on weighted graphs: the mu-Laplacian, the gradient
//! form, integrals against the vertex measure, and the norms built from
//! them.
//!
//! Conventions, for a graph with measure `mu` and weights `w`:
//!
//! * `Δu(x) = (1/mu(x)) Σ_{y~x} w_xy (u(y) - u(x))`
//! * `Γ(u,v)(x) = (1/(2 mu(x))) Σ_{y~x} w_xy (u(y) - u(x)) (v(y) - v(x))`
//! * `∫_V f dmu = Σ_x mu(x) f(x)`, and `|∇u|(x) = sqrt(Γ(u,u)(x))`
//!
//! Every sum runs in vertex order and, within a vertex, in edge declaration
//! order, so repeated evaluations are reproducible bit for bit.

use crate::error::{Error, Result};
use crate::graph::{Domain, Potential, WeightedGraph};

/// A real-valued function on the vertices of a fixed graph, stored in vertex
/// order. Values are always finite; constructors reject NaN and infinities.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexFunction {
    values: Vec<f64>,
}

impl VertexFunction {
    pub fn new(graph: &WeightedGraph, values: Vec<f64>) -> Result<Self> {
        if values.len() != graph.len() {
            return Err(Error::LengthMismatch {
                got: values.len(),
                expected: graph.len(),
            });
        }
        for (x, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    vertex: graph.id(x).to_owned(),
                    value: v,
                });
            }
        }
        Ok(VertexFunction { values })
    }

    pub fn zeros(graph: &WeightedGraph) -> Self {
        VertexFunction {
            values: vec![0.0; graph.len()],
        }
    }

    /// Constant function. Panics on a non-finite constant; use
    /// [`VertexFunction::new`] for untrusted input.
    pub fn constant(graph: &WeightedGraph, c: f64) -> Self {
        assert!(c.is_finite(), "constant must be finite");
        VertexFunction {
            values: vec![c; graph.len()],
        }
    }

    /// Indicator of a single vertex.
    pub fn indicator(graph: &WeightedGraph, index: usize) -> Result<Self> {
        graph.check_vertex(index)?;
        let mut values = vec![0.0; graph.len()];
        values[index] = 1.0;
        Ok(VertexFunction { values })
    }

    /// Builds a function by evaluating `f` at every vertex index. Panics if
    /// `f` produces a non-finite value; use [`VertexFunction::new`] for
    /// untrusted input.
    pub fn from_fn(graph: &WeightedGraph, mut f: impl FnMut(usize) -> f64) -> Self {
        let values: Vec<f64> = (0..graph.len()).map(&mut f).collect();
        assert!(
            values.iter().all(|v| v.is_finite()),
            "vertex function must be finite"
        );
        VertexFunction { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, index: usize) -> f64 {
        self.values[index]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// The function scaled pointwise by `t`. Panics on a non-finite scale.
    pub fn scaled(&self, t: f64) -> Self {
        assert!(t.is_finite(), "scaling factor must be finite");
        Self {
            values: self.values.iter().map(|v| t * v).collect(),
        }
    }
}

/// `Δu(x)`, the mu-Laplacian at one vertex.
pub fn laplacian_at(graph: &WeightedGraph, u: &VertexFunction, x: usize) -> f64 {
    let ux = u.value(x);
    let sum: f64 = graph
        .neighbors(x)
        .iter()
        .map(|&(y, w)| w * (u.value(y) - ux))
        .sum();
    sum / graph.mu(x)
}

/// `Δu` on the whole graph.
pub fn laplacian(graph: &WeightedGraph, u: &VertexFunction) -> Result<VertexFunction> {
    check_len(graph, u)?;
    Ok(VertexFunction::from_fn(graph, |x| laplacian_at(graph, u, x)))
}

/// `Γ(u,v)(x)`, the gradient form at one vertex.
pub fn gamma_at(graph: &WeightedGraph, u: &VertexFunction, v: &VertexFunction, x: usize) -> f64 {
    let ux = u.value(x);
    let vx = v.value(x);
    let sum: f64 = graph
        .neighbors(x)
        .iter()
        .map(|&(y, w)| w * (u.value(y) - ux) * (v.value(y) - vx))
        .sum();
    sum / (2.0 * graph.mu(x))
}

/// `Γ(u,v)` on the whole graph.
pub fn gamma(
    graph: &WeightedGraph,
    u: &VertexFunction,
    v: &VertexFunction,
) -> Result<VertexFunction> {
    check_len(graph, u)?;
    check_len(graph, v)?;
    Ok(VertexFunction::from_fn(graph, |x| gamma_at(graph, u, v, x)))
}

/// `|∇u|(x) = sqrt(Γ(u,u)(x))`.
pub fn gradient_length_at(graph: &WeightedGraph, u: &VertexFunction, x: usize) -> f64 {
    gamma_at(graph, u, u, x).sqrt()
}

/// `∫_V f dmu`.
pub fn integrate(graph: &WeightedGraph, f: &VertexFunction) -> Result<f64> {
    check_len(graph, f)?;
    Ok((0..graph.len()).map(|x| graph.mu(x) * f.value(x)).sum())
}

/// `∫_R f dmu` over a set of vertex indices.
pub fn integrate_over(graph: &WeightedGraph, f: &VertexFunction, region: &[usize]) -> Result<f64> {
    check_len(graph, f)?;
    for &x in region {
        graph.check_vertex(x)?;
    }
    Ok(region.iter().map(|&x| graph.mu(x) * f.value(x)).sum())
}

/// `L^q` norm over the whole vertex set. `q` may be `f64::INFINITY`, which
/// gives the plain maximum of `|u|`; otherwise `q >= 1` is required.
pub fn lp_norm(graph: &WeightedGraph, u: &VertexFunction, q: f64) -> Result<f64> {
    let all: Vec<usize> = (0..graph.len()).collect();
    lp_norm_over(graph, u, q, &all)
}

/// `L^q` norm over a region. For finite `q` this is
/// `(Σ_{x in R} mu(x) |u(x)|^q)^(1/q)`; for `q = infinity` it is
/// `max_{x in R} |u(x)|` with no measure factor.
pub fn lp_norm_over(
    graph: &WeightedGraph,
    u: &VertexFunction,
    q: f64,
    region: &[usize],
) -> Result<f64> {
    check_len(graph, u)?;
    for &x in region {
        graph.check_vertex(x)?;
    }
    if q == f64::INFINITY {
        return Ok(region.iter().fold(0.0, |m, &x| m.max(u.value(x).abs())));
    }
    if !(q >= 1.0) {
        return Err(Error::BadExponent(q));
    }
    let sum: f64 = region
        .iter()
        .map(|&x| graph.mu(x) * u.value(x).abs().powf(q))
        .sum();
    Ok(sum.powf(1.0 / q))
}

/// Sobolev norm `sqrt(∫_V (|∇u|^2 + u^2) dmu)`.
pub fn norm_w12(graph: &WeightedGraph, u: &VertexFunction) -> Result<f64> {
    check_len(graph, u)?;
    let sum: f64 = (0..graph.len())
        .map(|x| {
            let ux = u.value(x);
            graph.mu(x) * (gamma_at(graph, u, u, x) + ux * ux)
        })
        .sum();
    Ok(sum.sqrt())
}

/// Problem norm `sqrt(∫_V (|∇u|^2 + (lambda a + 1) u^2) dmu)` for the
/// full-graph equation with potential `a` and coupling `lambda > 0`.
pub fn norm_e_lambda(
    graph: &WeightedGraph,
    u: &VertexFunction,
    a: &Potential,
    lambda: f64,
) -> Result<f64> {
    check_len(graph, u)?;
    if a.values().len() != graph.len() {
        return Err(Error::LengthMismatch {
            got: a.values().len(),
            expected: graph.len(),
        });
    }
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::NonPositiveLambda(lambda));
    }
    let sum: f64 = (0..graph.len())
        .map(|x| {
            let ux = u.value(x);
            graph.mu(x) * (gamma_at(graph, u, u, x) + (lambda * a.value(x) + 1.0) * ux * ux)
        })
        .sum();
    Ok(sum.sqrt())
}

/// Dirichlet norm `sqrt(∫_{Ω ∪ ∂Ω} |∇u|^2 dmu + ∫_Ω u^2 dmu)` for functions
/// that vanish outside the interior. The support condition is checked
/// exactly; the gradient term sees the zero extension across the boundary.
pub fn norm_w12_zero(
    graph: &WeightedGraph,
    domain: &Domain,
    u: &VertexFunction,
) -> Result<f64> {
    check_len(graph, u)?;
    check_support(graph, domain, u)?;
    let grad: f64 = domain
        .closure()
        .iter()
        .map(|&x| graph.mu(x) * gamma_at(graph, u, u, x))
        .sum();
    let mass: f64 = domain
        .interior()
        .iter()
        .map(|&x| {
            let ux = u.value(x);
            graph.mu(x) * ux * ux
        })
        .sum();
    Ok((grad + mass).sqrt())
}

/// Checks that `u` vanishes exactly outside the domain interior.
pub fn check_support(graph: &WeightedGraph, domain: &Domain, u: &VertexFunction) -> Result<()> {
    for x in 0..graph.len() {
        if !domain.contains(x) && u.value(x) != 0.0 {
            return Err(Error::SupportViolation {
                vertex: graph.id(x).to_owned(),
                value: u.value(x),
            });
        }
    }
    Ok(())
}

/// The absolute gap between two quantities that are equal in exact
/// arithmetic, together with the scale they live on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Discrepancy {
    pub absolute: f64,
    /// `max(1, |lhs|, |rhs|)`; dividing by it turns the gap into a relative
    /// error that is still meaningful when both sides are near zero.
    pub scale: f64,
}

impl Discrepancy {
    fn between(lhs: f64, rhs: f64) -> Self {
        Discrepancy {
            absolute: (lhs - rhs).abs(),
            scale: 1.0_f64.max(lhs.abs()).max(rhs.abs()),
        }
    }

    pub fn relative(&self) -> f64 {
        self.absolute / self.scale
    }
}

/// Gap in the summation-by-parts identity on the whole graph,
/// `∫_V Γ(u,v) dmu = -∫_V v Δu dmu`.
pub fn check_integration_by_parts(
    graph: &WeightedGraph,
    u: &VertexFunction,
    v: &VertexFunction,
) -> Result<Discrepancy> {
    check_len(graph, u)?;
    check_len(graph, v)?;
    let lhs: f64 = (0..graph.len())
        .map(|x| graph.mu(x) * gamma_at(graph, u, v, x))
        .sum();
    let rhs: f64 = -(0..graph.len())
        .map(|x| graph.mu(x) * v.value(x) * laplacian_at(graph, u, x))
        .sum::<f64>();
    Ok(Discrepancy::between(lhs, rhs))
}

/// Gap in the Dirichlet summation-by-parts identity,
/// `∫_{Ω ∪ ∂Ω} Γ(u,v) dmu = -∫_Ω v Δu dmu`, for `u`, `v` vanishing outside
/// the interior. The Laplacian side only runs over the interior but still
/// sees the zero extension through its neighbor sums.
pub fn check_integration_by_parts_dirichlet(
    graph: &WeightedGraph,
    domain: &Domain,
    u: &VertexFunction,
    v: &VertexFunction,
) -> Result<Discrepancy> {
    check_len(graph, u)?;
    check_len(graph, v)?;
    check_support(graph, domain, u)?;
    check_support(graph, domain, v)?;
    let lhs: f64 = domain
        .closure()
        .iter()
        .map(|&x| graph.mu(x) * gamma_at(graph, u, v, x))
        .sum();
    let rhs: f64 = -domain
        .interior()
        .iter()
        .map(|&x| graph.mu(x) * v.value(x) * laplacian_at(graph, u, x))
        .sum::<f64>();
    Ok(Discrepancy::between(lhs, rhs))
}

fn check_len(graph: &WeightedGraph, u: &VertexFunction) -> Result<()> {
    if u.len() != graph.len() {
        return Err(Error::LengthMismatch {
            got: u.len(),
            expected: graph.len(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{builtin_g9, potential_well};

    fn p3() -> WeightedGraph {
        WeightedGraph::new(
            vec![("x1".into(), 1.0), ("x2".into(), 1.0), ("x3".into(), 1.0)],
            vec![
                ("x1".into(), "x2".into(), 1.0),
                ("x2".into(), "x3".into(), 1.0),
            ],
        )
        .unwrap()
    }

    fn k2_weighted() -> WeightedGraph {
        WeightedGraph::new(
            vec![("x1".into(), 1.0), ("x2".into(), 2.0)],
            vec![("x1".into(), "x2".into(), 3.0)],
        )
        .unwrap()
    }

    #[test]
    fn laplacian_on_a_path() {
        let g = p3();
        let u = VertexFunction::new(&g, vec![0.0, 1.0, 4.0]).unwrap();
        assert_eq!(laplacian_at(&g, &u, 0), 1.0);
        assert_eq!(laplacian_at(&g, &u, 1), 2.0);
        assert_eq!(laplacian_at(&g, &u, 2), -3.0);
    }

    #[test]
    fn laplacian_annihilates_constants() {
        let (g, _) = builtin_g9();
        let c = VertexFunction::constant(&g, 4.25);
        let lap = laplacian(&g, &c).unwrap();
        assert!(lap.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn laplacian_respects_measure_and_weight() {
        let g = k2_weighted();
        let u = VertexFunction::new(&g, vec![0.0, 1.0]).unwrap();
        assert_eq!(laplacian_at(&g, &u, 0), 3.0);
        assert_eq!(laplacian_at(&g, &u, 1), -1.5);
    }

    #[test]
    fn gamma_matches_hand_computation() {
        let g = k2_weighted();
        let u = VertexFunction::new(&g, vec![0.0, 1.0]).unwrap();
        let v = VertexFunction::new(&g, vec![2.0, -1.0]).unwrap();
        // At x1: (1/2) * 3 * (1 - 0) * (-1 - 2) = -4.5
        assert_eq!(gamma_at(&g, &u, &v, 0), -4.5);
        // At x2: (1/4) * 3 * (0 - 1) * (2 + 1) = -2.25
        assert_eq!(gamma_at(&g, &u, &v, 1), -2.25);
        assert_eq!(gradient_length_at(&g, &u, 0), (1.5_f64).sqrt());
    }

    #[test]
    fn gamma_is_symmetric_and_bilinear() {
        let (g, _) = builtin_g9();
        let u = VertexFunction::from_fn(&g, |x| (x as f64 * 0.7).sin());
        let v = VertexFunction::from_fn(&g, |x| (x as f64 - 3.5).cos());
        let w = VertexFunction::from_fn(&g, |x| 0.3 * x as f64 - 1.0);
        for x in 0..g.len() {
            let uv = gamma_at(&g, &u, &v, x);
            let vu = gamma_at(&g, &v, &u, x);
            assert_eq!(uv, vu);

            let combo = VertexFunction::from_fn(&g, |y| 2.0 * u.value(y) + 0.5 * w.value(y));
            let lhs = gamma_at(&g, &combo, &v, x);
            let rhs = 2.0 * uv + 0.5 * gamma_at(&g, &w, &v, x);
            assert!((lhs - rhs).abs() <= 1e-13 * (1.0 + lhs.abs().max(rhs.abs())));
        }
    }

    #[test]
    fn integral_of_laplacian_vanishes() {
        let (g, _) = builtin_g9();
        let u = VertexFunction::from_fn(&g, |x| ((x * x) as f64).sqrt() - 2.0);
        let lap = laplacian(&g, &u).unwrap();
        let total = integrate(&g, &lap).unwrap();
        assert!(total.abs() <= 1e-13);
    }

    #[test]
    fn integration_uses_the_measure() {
        let g = k2_weighted();
        let u = VertexFunction::new(&g, vec![3.0, 5.0]).unwrap();
        assert_eq!(integrate(&g, &u).unwrap(), 13.0);
        assert_eq!(integrate_over(&g, &u, &[1]).unwrap(), 10.0);
    }

    #[test]
    fn lp_norms() {
        let g = k2_weighted();
        let u = VertexFunction::new(&g, vec![-3.0, 1.0]).unwrap();
        assert_eq!(lp_norm(&g, &u, 1.0).unwrap(), 5.0);
        assert_eq!(lp_norm(&g, &u, 2.0).unwrap(), 11.0_f64.sqrt());
        assert_eq!(lp_norm(&g, &u, f64::INFINITY).unwrap(), 3.0);
        assert_eq!(lp_norm_over(&g, &u, f64::INFINITY, &[1]).unwrap(), 1.0);
        assert!(matches!(
            lp_norm(&g, &u, 0.5),
            Err(Error::BadExponent(_))
        ));
        assert!(matches!(
            lp_norm(&g, &u, f64::NAN),
            Err(Error::BadExponent(_))
        ));
    }

    #[test]
    fn w12_norm_of_an_indicator() {
        let (g, _) = builtin_g9();
        // x1 has weighted degree 6, so |∇u|^2 sums to 6 across the graph
        // and the mass term adds 1.
        let u = VertexFunction::indicator(&g, 0).unwrap();
        let norm = norm_w12(&g, &u).unwrap();
        assert!((norm - 7.0_f64.sqrt()).abs() <= 1e-15);
    }

    #[test]
    fn e_lambda_norm_reduces_to_w12_for_zero_potential() {
        let (g, _) = builtin_g9();
        let a0 = Potential::zeros(&g);
        let u = VertexFunction::from_fn(&g, |x| (x as f64).cos());
        let lhs = norm_e_lambda(&g, &u, &a0, 123.0).unwrap();
        let rhs = norm_w12(&g, &u).unwrap();
        assert!((lhs - rhs).abs() <= 1e-14 * rhs.max(1.0));
    }

    #[test]
    fn e_lambda_norm_single_vertex() {
        let g = WeightedGraph::new(vec![("x1".into(), 1.0)], vec![]).unwrap();
        let a = Potential::new(&g, vec![1.0]).unwrap();
        let u = VertexFunction::new(&g, vec![2.0]).unwrap();
        // No edges, so the norm is sqrt((3*1 + 1) * 4) = 4.
        assert_eq!(norm_e_lambda(&g, &u, &a, 3.0).unwrap(), 4.0);
        assert!(matches!(
            norm_e_lambda(&g, &u, &a, 0.0),
            Err(Error::NonPositiveLambda(_))
        ));
    }

    #[test]
    fn e_lambda_norm_is_monotone_in_lambda_on_the_potential_support() {
        let (g, a) = builtin_g9();
        let x7 = g.index_of("x7").unwrap();
        let u = VertexFunction::indicator(&g, x7).unwrap();
        let n1 = norm_e_lambda(&g, &u, &a, 1.0).unwrap();
        let n10 = norm_e_lambda(&g, &u, &a, 10.0).unwrap();
        assert!(n10 > n1);
    }

    #[test]
    fn dirichlet_norm_on_a_path() {
        let g = p3();
        let domain = Domain::from_interior(&g, &[1]).unwrap();
        let u = VertexFunction::new(&g, vec![0.0, 3.0, 0.0]).unwrap();
        // Gradient part: x1 contributes 9/2, x2 contributes 9, x3
        // contributes 9/2; mass adds 9. Total 27, norm sqrt(27).
        let norm = norm_w12_zero(&g, &domain, &u).unwrap();
        assert!((norm - 27.0_f64.sqrt()).abs() <= 1e-15);

        let bad = VertexFunction::new(&g, vec![0.5, 3.0, 0.0]).unwrap();
        assert!(matches!(
            norm_w12_zero(&g, &domain, &bad),
            Err(Error::SupportViolation { .. })
        ));
    }

    #[test]
    fn parts_identity_on_k2() {
        let g = k2_weighted();
        let u = VertexFunction::new(&g, vec![1.0, -2.0]).unwrap();
        let v = VertexFunction::new(&g, vec![0.5, 4.0]).unwrap();
        let d = check_integration_by_parts(&g, &u, &v).unwrap();
        assert!(d.relative() <= 1e-15, "gap {}", d.absolute);
    }

    #[test]
    fn parts_identity_dirichlet_on_the_reference_graph() {
        let (g, a) = builtin_g9();
        let domain = potential_well(&g, &a).unwrap();
        let u = VertexFunction::from_fn(&g, |x| {
            if domain.contains(x) {
                (x as f64 + 1.0).sin()
            } else {
                0.0
            }
        });
        let v = VertexFunction::from_fn(&g, |x| {
            if domain.contains(x) {
                1.0 / (x as f64 + 2.0)
            } else {
                0.0
            }
        });
        let d = check_integration_by_parts_dirichlet(&g, &domain, &u, &v).unwrap();
        assert!(d.relative() <= 1e-13, "gap {}", d.absolute);
    }

    #[test]
    fn function_constructors_validate() {
        let g = p3();
        assert!(matches!(
            VertexFunction::new(&g, vec![1.0]),
            Err(Error::LengthMismatch { got: 1, expected: 3 })
        ));
        assert!(matches!(
            VertexFunction::new(&g, vec![1.0, f64::NAN, 0.0]),
            Err(Error::NonFinite { .. })
        ));
        assert!(VertexFunction::indicator(&g, 7).is_err());
        assert_eq!(VertexFunction::zeros(&g).sup_norm(), 0.0);
    }
}
