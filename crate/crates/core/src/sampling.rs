//! Seeded random generators for graphs, vertex functions, subsets, and
//! well-shaped potentials.
//!
//! These feed the randomized identity checks and the solver's test
//! families. Everything is driven by a caller-supplied RNG so that a fixed
//! seed reproduces the exact same objects.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::calculus::VertexFunction;
use crate::graph::{Domain, Potential, WeightedGraph};

/// A connected graph on `n` vertices named `x1..xn`, with measures and
/// weights drawn uniformly from the given ranges. A random spanning tree
/// guarantees connectivity; each remaining pair becomes an edge with
/// probability 0.3.
pub fn random_connected_graph(
    rng: &mut impl Rng,
    n: usize,
    mu_range: (f64, f64),
    w_range: (f64, f64),
) -> WeightedGraph {
    assert!(n >= 1, "graph needs at least one vertex");
    let vertices: Vec<(String, f64)> = (1..=n)
        .map(|i| (format!("x{i}"), rng.random_range(mu_range.0..=mu_range.1)))
        .collect();
    let mut present = vec![false; n * n];
    let mut edges: Vec<(String, String, f64)> = Vec::new();
    for i in 1..n {
        let j = rng.random_range(0..i);
        present[i * n + j] = true;
        let w = rng.random_range(w_range.0..=w_range.1);
        edges.push((format!("x{}", j + 1), format!("x{}", i + 1), w));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if present[j * n + i] || present[i * n + j] {
                continue;
            }
            if rng.random_bool(0.3) {
                let w = rng.random_range(w_range.0..=w_range.1);
                edges.push((format!("x{}", i + 1), format!("x{}", j + 1), w));
            }
        }
    }
    WeightedGraph::new(vertices, edges).expect("generated graph is structurally valid")
}

/// A function with values uniform in `[lo, hi]` at every vertex.
pub fn random_function(
    rng: &mut impl Rng,
    graph: &WeightedGraph,
    lo: f64,
    hi: f64,
) -> VertexFunction {
    VertexFunction::from_fn(graph, |_| rng.random_range(lo..=hi))
}

/// A function with values uniform in `[lo, hi]` on the domain interior and
/// exactly zero elsewhere.
pub fn random_function_on(
    rng: &mut impl Rng,
    graph: &WeightedGraph,
    domain: &Domain,
    lo: f64,
    hi: f64,
) -> VertexFunction {
    VertexFunction::from_fn(graph, |x| {
        if domain.contains(x) {
            rng.random_range(lo..=hi)
        } else {
            0.0
        }
    })
}

/// A non-empty subset of `0..n`, sorted ascending.
pub fn random_subset(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    assert!(n >= 1, "cannot sample a non-empty subset of nothing");
    let size = rng.random_range(1..=n);
    let mut indices: Vec<usize> = (0..n).collect();
    indices.shuffle(rng);
    indices.truncate(size);
    indices.sort_unstable();
    indices
}

/// A potential vanishing on a random connected subset of the vertices (the
/// well) and uniform in `amp_range` elsewhere. The well is grown one random
/// frontier vertex at a time, so it is connected by construction.
pub fn random_well_potential(
    rng: &mut impl Rng,
    graph: &WeightedGraph,
    amp_range: (f64, f64),
) -> Potential {
    let n = graph.len();
    let target = rng.random_range(1..=n);
    let mut in_well = vec![false; n];
    let seed_vertex = rng.random_range(0..n);
    in_well[seed_vertex] = true;
    let mut well_size = 1;
    while well_size < target {
        let frontier: Vec<usize> = (0..n)
            .filter(|&x| !in_well[x] && graph.neighbors(x).iter().any(|&(y, _)| in_well[y]))
            .collect();
        match frontier.as_slice() {
            [] => break,
            choices => {
                let pick = choices[rng.random_range(0..choices.len())];
                in_well[pick] = true;
                well_size += 1;
            }
        }
    }
    let values: Vec<f64> = (0..n)
        .map(|x| {
            if in_well[x] {
                0.0
            } else {
                rng.random_range(amp_range.0..=amp_range.1)
            }
        })
        .collect();
    Potential::new(graph, values).expect("generated potential is valid")
}
