//! Finite weighted graphs with a vertex measure, potentials on them, and
//! subdomains with their vertex boundary.
//!
//! A graph here is a finite, simple, undirected graph where every vertex `x`
//! carries a positive measure `mu(x)` and every edge `xy` a positive
//! symmetric weight `w_xy`. Vertices keep their declaration order; every
//! iteration in this crate walks that order so results are reproducible
//! bit for bit.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// An undirected edge between two vertex indices with its weight.
///
/// `a < b` always holds after construction; the pair is stored in normalized
/// orientation regardless of declaration order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub weight: f64,
}

/// A connected-or-not finite weighted graph. Structural rules (positive
/// measures and weights, no self-loops, no duplicate edges) are enforced at
/// construction; connectivity is reported by [`validate`] and enforced where
/// a problem actually needs it.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    mu: Vec<f64>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(usize, f64)>>,
    weighted_degree: Vec<f64>,
}

impl WeightedGraph {
    /// Builds a graph from `(id, mu)` vertex declarations and
    /// `(id1, id2, w)` edge declarations, kept in declaration order.
    pub fn new(
        vertices: Vec<(String, f64)>,
        edge_list: Vec<(String, String, f64)>,
    ) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut ids = Vec::with_capacity(vertices.len());
        let mut mu = Vec::with_capacity(vertices.len());
        let mut index = HashMap::with_capacity(vertices.len());
        for (id, m) in vertices {
            if index.contains_key(&id) {
                return Err(Error::DuplicateVertex(id));
            }
            if !(m.is_finite() && m > 0.0) {
                return Err(Error::NonPositiveMeasure { id, value: m });
            }
            index.insert(id.clone(), ids.len());
            ids.push(id);
            mu.push(m);
        }

        let n = ids.len();
        let mut edges = Vec::with_capacity(edge_list.len());
        let mut adjacency = vec![Vec::new(); n];
        let mut weighted_degree = vec![0.0; n];
        let mut seen = HashMap::new();
        for (ida, idb, w) in edge_list {
            let a = *index
                .get(&ida)
                .ok_or_else(|| Error::UnknownVertex(ida.clone()))?;
            let b = *index
                .get(&idb)
                .ok_or_else(|| Error::UnknownVertex(idb.clone()))?;
            if a == b {
                return Err(Error::SelfLoop(ida));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::NonPositiveWeight {
                    a: ida,
                    b: idb,
                    value: w,
                });
            }
            let key = (a.min(b), a.max(b));
            if seen.insert(key, ()).is_some() {
                return Err(Error::DuplicateEdge(ida, idb));
            }
            edges.push(Edge {
                a: key.0,
                b: key.1,
                weight: w,
            });
            adjacency[a].push((b, w));
            adjacency[b].push((a, w));
            weighted_degree[a] += w;
            weighted_degree[b] += w;
        }

        Ok(WeightedGraph {
            ids,
            index,
            mu,
            edges,
            adjacency,
            weighted_degree,
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, index: usize) -> &str {
        &self.ids[index]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn mu(&self, index: usize) -> f64 {
        self.mu[index]
    }

    pub fn mu_values(&self) -> &[f64] {
        &self.mu
    }

    /// Smallest vertex measure; the constant in the `L^infinity` embedding.
    pub fn mu_min(&self) -> f64 {
        self.mu.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn total_measure(&self) -> f64 {
        self.mu.iter().sum()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbors of a vertex with the connecting weights, in the order the
    /// incident edges were declared.
    pub fn neighbors(&self, index: usize) -> &[(usize, f64)] {
        &self.adjacency[index]
    }

    /// Sum of the weights incident to a vertex.
    pub fn weighted_degree(&self, index: usize) -> f64 {
        self.weighted_degree[index]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].iter().any(|&(y, _)| y == b)
    }

    /// Weight of the edge `a`-`b`, or `None` if the vertices are not adjacent.
    pub fn edge_weight(&self, a: usize, b: usize) -> Option<f64> {
        self.adjacency[a]
            .iter()
            .find(|&&(y, _)| y == b)
            .map(|&(_, w)| w)
    }

    pub fn is_connected(&self) -> bool {
        connected_within(self, None)
    }

    pub(crate) fn check_vertex(&self, index: usize) -> Result<()> {
        if index < self.len() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                index,
                len: self.len(),
            })
        }
    }

    pub(crate) fn resolve(&self, id: &str) -> Result<usize> {
        self.index_of(id)
            .ok_or_else(|| Error::UnknownVertex(id.to_owned()))
    }
}

/// Breadth-first reachability, restricted to `within` when given.
fn connected_within(graph: &WeightedGraph, within: Option<&[bool]>) -> bool {
    let allowed = |x: usize| within.is_none_or(|m| m[x]);
    let start = match (0..graph.len()).find(|&x| allowed(x)) {
        Some(x) => x,
        None => return false,
    };
    let mut seen = vec![false; graph.len()];
    let mut queue = std::collections::VecDeque::from([start]);
    seen[start] = true;
    let mut count = 1;
    while let Some(x) = queue.pop_front() {
        for &(y, _) in graph.neighbors(x) {
            if allowed(y) && !seen[y] {
                seen[y] = true;
                count += 1;
                queue.push_back(y);
            }
        }
    }
    count == (0..graph.len()).filter(|&x| allowed(x)).count()
}

/// A nonnegative potential `a(x)` stored alongside the graph's vertex order.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    values: Vec<f64>,
}

impl Potential {
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
            if v < 0.0 {
                return Err(Error::NegativePotential {
                    id: graph.id(x).to_owned(),
                    value: v,
                });
            }
        }
        Ok(Potential { values })
    }

    pub fn zeros(graph: &WeightedGraph) -> Self {
        Potential {
            values: vec![0.0; graph.len()],
        }
    }

    pub fn value(&self, index: usize) -> f64 {
        self.values[index]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// Indices where the potential vanishes exactly, in vertex order.
    pub fn zero_set(&self) -> Vec<usize> {
        self.values
            .iter()
            .enumerate()
            .filter(|&(_, &v)| v == 0.0)
            .map(|(x, _)| x)
            .collect()
    }
}

/// A subdomain `Omega` of the vertex set together with its vertex boundary.
///
/// The boundary consists of the vertices outside the interior that have at
/// least one neighbor inside; interior and boundary are disjoint and their
/// union is the closure. All three lists are sorted by vertex index.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    interior: Vec<usize>,
    boundary: Vec<usize>,
    closure: Vec<usize>,
    in_interior: Vec<bool>,
    in_closure: Vec<bool>,
}

impl Domain {
    /// Builds the domain with interior given by vertex indices. Duplicates
    /// are collapsed; the interior must be non-empty.
    pub fn from_interior(graph: &WeightedGraph, interior: &[usize]) -> Result<Self> {
        let mut in_interior = vec![false; graph.len()];
        for &x in interior {
            graph.check_vertex(x)?;
            in_interior[x] = true;
        }
        let interior: Vec<usize> = (0..graph.len()).filter(|&x| in_interior[x]).collect();
        if interior.is_empty() {
            return Err(Error::EmptyInterior);
        }

        let mut in_closure = in_interior.clone();
        let mut boundary = Vec::new();
        for x in 0..graph.len() {
            if in_interior[x] {
                continue;
            }
            if graph.neighbors(x).iter().any(|&(y, _)| in_interior[y]) {
                boundary.push(x);
                in_closure[x] = true;
            }
        }
        let closure: Vec<usize> = (0..graph.len()).filter(|&x| in_closure[x]).collect();

        Ok(Domain {
            interior,
            boundary,
            closure,
            in_interior,
            in_closure,
        })
    }

    /// Same as [`Domain::from_interior`] but takes vertex ids.
    pub fn from_interior_ids<S: AsRef<str>>(graph: &WeightedGraph, ids: &[S]) -> Result<Self> {
        let indices = ids
            .iter()
            .map(|id| graph.resolve(id.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Domain::from_interior(graph, &indices)
    }

    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub fn closure(&self) -> &[usize] {
        &self.closure
    }

    pub fn contains(&self, index: usize) -> bool {
        self.in_interior[index]
    }

    pub fn closure_contains(&self, index: usize) -> bool {
        self.in_closure[index]
    }

    /// Number of vertices of the graph this domain was built on.
    pub fn ambient_len(&self) -> usize {
        self.in_interior.len()
    }
}

/// Computes the vertex boundary of `interior`: the outside vertices with a
/// neighbor inside.
pub fn boundary(graph: &WeightedGraph, interior: &[usize]) -> Result<Vec<usize>> {
    Ok(Domain::from_interior(graph, interior)?.boundary().to_vec())
}

/// The zero set of the potential as a domain. Fails if the potential never
/// vanishes or if the zero set is disconnected, since the localization
/// arguments need a single well.
pub fn potential_well(graph: &WeightedGraph, potential: &Potential) -> Result<Domain> {
    debug_assert_eq!(potential.values().len(), graph.len());
    let zero_set = potential.zero_set();
    if zero_set.is_empty() {
        return Err(Error::EmptyWell);
    }
    let mut mask = vec![false; graph.len()];
    for &x in &zero_set {
        mask[x] = true;
    }
    if !connected_within(graph, Some(&mask)) {
        return Err(Error::DisconnectedWell);
    }
    Domain::from_interior(graph, &zero_set)
}

/// Outcome of the structural checks on a graph. Construction already rules
/// out most defects, so on constructed graphs only `connected` can be false.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidationReport {
    pub mu_positive: bool,
    pub weights_positive: bool,
    pub no_self_loops: bool,
    pub connected: bool,
}

impl ValidationReport {
    pub fn all_ok(&self) -> bool {
        self.mu_positive && self.weights_positive && self.no_self_loops && self.connected
    }
}

pub fn validate(graph: &WeightedGraph) -> ValidationReport {
    ValidationReport {
        mu_positive: graph.mu_values().iter().all(|&m| m > 0.0),
        weights_positive: graph.edges().iter().all(|e| e.weight > 0.0),
        no_self_loops: graph.edges().iter().all(|e| e.a != e.b),
        connected: graph.is_connected(),
    }
}

/// Parses the plain-text graph format.
///
/// Lines are `vertex <id> <mu> <a>` or `edge <id1> <id2> <w>`; blank lines
/// are skipped and `#` starts a comment that runs to the end of the line.
/// Scientific notation is accepted anywhere a number is. The parsed graph
/// must be connected; every structural error is reported with its line
/// number.
pub fn parse_graph(text: &str) -> Result<(WeightedGraph, Potential)> {
    let mut vertices: Vec<(String, f64)> = Vec::new();
    let mut potentials: Vec<f64> = Vec::new();
    let mut edges: Vec<(String, String, f64)> = Vec::new();
    let mut vertex_lines: HashMap<String, usize> = HashMap::new();
    let mut edge_lines: HashMap<(String, String), usize> = HashMap::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens[0] {
            "vertex" => {
                if tokens.len() != 4 {
                    return Err(Error::Syntax(format!(
                        "vertex takes 3 fields, got {}",
                        tokens.len() - 1
                    ))
                    .at_line(line));
                }
                let id = tokens[1].to_owned();
                let mu = parse_number(tokens[2], "mu").map_err(|e| e.at_line(line))?;
                let a = parse_number(tokens[3], "a").map_err(|e| e.at_line(line))?;
                if vertex_lines.insert(id.clone(), line).is_some() {
                    return Err(Error::DuplicateVertex(id).at_line(line));
                }
                if !(mu > 0.0) {
                    return Err(Error::NonPositiveMeasure { id, value: mu }.at_line(line));
                }
                if a < 0.0 {
                    return Err(Error::NegativePotential { id, value: a }.at_line(line));
                }
                vertices.push((id, mu));
                potentials.push(a);
            }
            "edge" => {
                if tokens.len() != 4 {
                    return Err(Error::Syntax(format!(
                        "edge takes 3 fields, got {}",
                        tokens.len() - 1
                    ))
                    .at_line(line));
                }
                let ida = tokens[1].to_owned();
                let idb = tokens[2].to_owned();
                let w = parse_number(tokens[3], "w").map_err(|e| e.at_line(line))?;
                if !vertex_lines.contains_key(&ida) {
                    return Err(Error::UnknownVertex(ida).at_line(line));
                }
                if !vertex_lines.contains_key(&idb) {
                    return Err(Error::UnknownVertex(idb).at_line(line));
                }
                if ida == idb {
                    return Err(Error::SelfLoop(ida).at_line(line));
                }
                let key = if ida <= idb {
                    (ida.clone(), idb.clone())
                } else {
                    (idb.clone(), ida.clone())
                };
                if edge_lines.insert(key, line).is_some() {
                    return Err(Error::DuplicateEdge(ida, idb).at_line(line));
                }
                if !(w > 0.0) {
                    return Err(Error::NonPositiveWeight {
                        a: ida,
                        b: idb,
                        value: w,
                    }
                    .at_line(line));
                }
                edges.push((ida, idb, w));
            }
            other => {
                return Err(Error::Syntax(format!("unknown directive `{other}`")).at_line(line));
            }
        }
    }

    let graph = WeightedGraph::new(vertices, edges)?;
    let potential = Potential::new(&graph, potentials)?;
    if !graph.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok((graph, potential))
}

fn parse_number(token: &str, field: &str) -> Result<f64> {
    match token.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::Syntax(format!("invalid {field} value `{token}`"))),
    }
}

/// Writes a graph and potential back into the text format. Numbers use the
/// shortest representation that round-trips, so
/// `parse_graph(serialize_graph(g, a))` reproduces both bit for bit.
pub fn serialize_graph(graph: &WeightedGraph, potential: &Potential) -> String {
    let mut out = String::new();
    for x in 0..graph.len() {
        writeln!(
            out,
            "vertex {} {} {}",
            graph.id(x),
            graph.mu(x),
            potential.value(x)
        )
        .expect("writing to a String cannot fail");
    }
    for e in graph.edges() {
        writeln!(out, "edge {} {} {}", graph.id(e.a), graph.id(e.b), e.weight)
            .expect("writing to a String cannot fail");
    }
    out
}

/// The nine-vertex reference graph used by the built-in experiment.
///
/// Vertices `x1..x9` all have measure 1; every edge has weight 1. The
/// potential vanishes exactly on the 6-clique `x1..x6` and equals 1 on
/// `x7, x8, x9`, so the well is the clique and its vertex boundary is
/// `{x7, x8}`.
pub fn builtin_g9() -> (WeightedGraph, Potential) {
    let vertices: Vec<(String, f64)> = (1..=9).map(|i| (format!("x{i}"), 1.0)).collect();
    let pairs = [
        (1, 2),
        (1, 3),
        (1, 4),
        (1, 5),
        (1, 6),
        (1, 7),
        (2, 3),
        (2, 4),
        (2, 5),
        (2, 6),
        (3, 4),
        (3, 5),
        (3, 6),
        (4, 5),
        (4, 6),
        (5, 6),
        (6, 8),
        (7, 9),
        (8, 9),
    ];
    let edges: Vec<(String, String, f64)> = pairs
        .iter()
        .map(|&(i, j)| (format!("x{i}"), format!("x{j}"), 1.0))
        .collect();
    let graph = WeightedGraph::new(vertices, edges).expect("reference graph is valid");
    let mut a = vec![0.0; 9];
    a[6] = 1.0;
    a[7] = 1.0;
    a[8] = 1.0;
    let potential = Potential::new(&graph, a).expect("reference potential is valid");
    (graph, potential)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k2() -> WeightedGraph {
        WeightedGraph::new(
            vec![("x1".into(), 1.0), ("x2".into(), 1.0)],
            vec![("x1".into(), "x2".into(), 1.0)],
        )
        .unwrap()
    }

    #[test]
    fn parses_vertices_edges_and_comments() {
        let text = "# sample\nvertex x1 1.0 0.0\nvertex x2 2.5 1e-1 # trailing\n\nedge x1 x2 2e0\n";
        let (g, a) = parse_graph(text).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.ids(), &["x1".to_owned(), "x2".to_owned()]);
        assert_eq!(g.mu(1), 2.5);
        assert_eq!(a.value(1), 0.1);
        assert_eq!(g.edges().len(), 1);
        assert_eq!(g.edge_weight(0, 1), Some(2.0));
    }

    #[test]
    fn parse_reports_line_numbers() {
        type Case = (&'static str, fn(&Error) -> bool, usize);
        let cases: Vec<Case> = vec![
            (
                "vertex x1 1 0\nedge x1 x1 1\n",
                |e| matches!(e, Error::SelfLoop(id) if id == "x1"),
                2,
            ),
            (
                "vertex x1 1 0\nvertex x2 1 0\nedge x1 x2 1\nedge x2 x1 2\n",
                |e| matches!(e, Error::DuplicateEdge(..)),
                4,
            ),
            (
                "vertex x1 1 0\nvertex x1 2 0\n",
                |e| matches!(e, Error::DuplicateVertex(id) if id == "x1"),
                2,
            ),
            (
                "vertex x1 0 0\n",
                |e| matches!(e, Error::NonPositiveMeasure { value, .. } if *value == 0.0),
                1,
            ),
            (
                "vertex x1 1 -0.5\n",
                |e| matches!(e, Error::NegativePotential { .. }),
                1,
            ),
            (
                "vertex x1 1 0\nvertex x2 1 0\nedge x1 x2 -1\n",
                |e| matches!(e, Error::NonPositiveWeight { .. }),
                3,
            ),
            (
                "vertex x1 1 0\nedge x1 x9 1\n",
                |e| matches!(e, Error::UnknownVertex(id) if id == "x9"),
                2,
            ),
            (
                "vertex x1 1\n",
                |e| matches!(e, Error::Syntax(_)),
                1,
            ),
            (
                "vertex x1 1 zero\n",
                |e| matches!(e, Error::Syntax(_)),
                1,
            ),
        ];
        for (text, matcher, want_line) in cases {
            let err = parse_graph(text).unwrap_err();
            match &err {
                Error::AtLine { line, source } => {
                    assert_eq!(*line, want_line, "wrong line for {text:?}");
                    assert!(matcher(source), "wrong kind for {text:?}: {source:?}");
                }
                other => panic!("expected line-tagged error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn parse_rejects_disconnected_graphs() {
        let text = "vertex x1 1 0\nvertex x2 1 0\n";
        assert!(matches!(parse_graph(text), Err(Error::Disconnected)));
    }

    #[test]
    fn parse_rejects_empty_input() {
        assert!(matches!(parse_graph("# nothing\n"), Err(Error::EmptyGraph)));
    }

    #[test]
    fn serialization_round_trips_a_literal() {
        let (g, a) = builtin_g9();
        let text = serialize_graph(&g, &a);
        let (g2, a2) = parse_graph(&text).unwrap();
        assert_eq!(g, g2);
        assert_eq!(a, a2);
    }

    #[test]
    fn builtin_reference_graph_matches_hand_written_file() {
        let text = "\
vertex x1 1 0
vertex x2 1 0
vertex x3 1 0
vertex x4 1 0
vertex x5 1 0
vertex x6 1 0
vertex x7 1 1
vertex x8 1 1
vertex x9 1 1
edge x1 x2 1
edge x1 x3 1
edge x1 x4 1
edge x1 x5 1
edge x1 x6 1
edge x1 x7 1
edge x2 x3 1
edge x2 x4 1
edge x2 x5 1
edge x2 x6 1
edge x3 x4 1
edge x3 x5 1
edge x3 x6 1
edge x4 x5 1
edge x4 x6 1
edge x5 x6 1
edge x6 x8 1
edge x7 x9 1
edge x8 x9 1
";
        let (g, a) = parse_graph(text).unwrap();
        let (gb, ab) = builtin_g9();
        assert_eq!(g, gb);
        assert_eq!(a, ab);
        assert_eq!(g.len(), 9);
        assert_eq!(g.edges().len(), 19);
    }

    #[test]
    fn boundary_of_the_well_is_x7_x8() {
        let (g, a) = builtin_g9();
        let domain = potential_well(&g, &a).unwrap();
        assert_eq!(domain.interior(), &[0, 1, 2, 3, 4, 5]);
        assert_eq!(domain.boundary(), &[6, 7]);
        assert_eq!(domain.closure(), &[0, 1, 2, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn boundary_of_the_full_vertex_set_is_empty() {
        let (g, _) = builtin_g9();
        let all: Vec<usize> = (0..g.len()).collect();
        assert_eq!(boundary(&g, &all).unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn boundary_of_a_singleton() {
        let (g, _) = builtin_g9();
        let x9 = g.index_of("x9").unwrap();
        assert_eq!(boundary(&g, &[x9]).unwrap(), vec![6, 7]);
    }

    #[test]
    fn boundary_is_determined_by_the_interior_alone() {
        let (g, _) = builtin_g9();
        let d1 = Domain::from_interior(&g, &[0, 1, 2]).unwrap();
        let d2 = Domain::from_interior(&g, &[2, 1, 0, 1]).unwrap();
        assert_eq!(d1, d2);
    }

    #[test]
    fn domain_rejects_empty_interior_and_bad_indices() {
        let g = k2();
        assert!(matches!(
            Domain::from_interior(&g, &[]),
            Err(Error::EmptyInterior)
        ));
        assert!(matches!(
            Domain::from_interior(&g, &[5]),
            Err(Error::VertexOutOfRange { index: 5, len: 2 })
        ));
        assert!(matches!(
            Domain::from_interior_ids(&g, &["nope"]),
            Err(Error::UnknownVertex(_))
        ));
    }

    #[test]
    fn well_requires_zeros_and_connectivity() {
        let g = k2();
        let all_positive = Potential::new(&g, vec![1.0, 2.0]).unwrap();
        assert!(matches!(
            potential_well(&g, &all_positive),
            Err(Error::EmptyWell)
        ));

        let p3 = WeightedGraph::new(
            vec![("x1".into(), 1.0), ("x2".into(), 1.0), ("x3".into(), 1.0)],
            vec![
                ("x1".into(), "x2".into(), 1.0),
                ("x2".into(), "x3".into(), 1.0),
            ],
        )
        .unwrap();
        let split = Potential::new(&p3, vec![0.0, 1.0, 0.0]).unwrap();
        assert!(matches!(
            potential_well(&p3, &split),
            Err(Error::DisconnectedWell)
        ));
    }

    #[test]
    fn construction_rejects_structural_defects() {
        let dup = WeightedGraph::new(
            vec![("x1".into(), 1.0), ("x1".into(), 1.0)],
            vec![],
        );
        assert!(matches!(dup, Err(Error::DuplicateVertex(_))));

        let loopy = WeightedGraph::new(
            vec![("x1".into(), 1.0)],
            vec![("x1".into(), "x1".into(), 1.0)],
        );
        assert!(matches!(loopy, Err(Error::SelfLoop(_))));

        let negw = WeightedGraph::new(
            vec![("x1".into(), 1.0), ("x2".into(), 1.0)],
            vec![("x1".into(), "x2".into(), 0.0)],
        );
        assert!(matches!(negw, Err(Error::NonPositiveWeight { .. })));
    }

    #[test]
    fn validate_reports_connectivity() {
        let disconnected =
            WeightedGraph::new(vec![("x1".into(), 1.0), ("x2".into(), 1.0)], vec![]).unwrap();
        let report = validate(&disconnected);
        assert!(report.mu_positive && report.weights_positive && report.no_self_loops);
        assert!(!report.connected);
        assert!(!report.all_ok());

        let (g, _) = builtin_g9();
        assert!(validate(&g).all_ok());
    }

    #[test]
    fn mu_min_and_degrees() {
        let g = WeightedGraph::new(
            vec![("x1".into(), 0.5), ("x2".into(), 2.0)],
            vec![("x1".into(), "x2".into(), 3.0)],
        )
        .unwrap();
        assert_eq!(g.mu_min(), 0.5);
        assert_eq!(g.total_measure(), 2.5);
        assert_eq!(g.weighted_degree(0), 3.0);
        assert_eq!(g.weighted_degree(1), 3.0);
    }
}
