//! Seeded instance generators. Every instance draws from its own ChaCha
//! stream, so instance `i` does not depend on how many others are drawn or
//! on the order they are evaluated in.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{DiscreteGraph, Edge, MetricGraph, VertexId};

pub const MAX_VERTICES: usize = 6;
pub const MAX_EDGES: usize = 9;
pub const MIN_LENGTH: f64 = 0.3;
pub const MAX_LENGTH: f64 = 3.0;
pub const MAX_DISCRETE_VERTICES: usize = 8;

/// Generator for instance `index` of a run seeded with `seed`.
pub fn instance_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Connected metric graph with at most `max_vertices` vertices and
/// `max_edges` edges, lengths uniform in `[MIN_LENGTH, MAX_LENGTH]`.
/// A random spanning tree is drawn first; the remaining edges join
/// arbitrary endpoints, so loops and parallel edges occur.
pub fn metric_graph_with(
    rng: &mut impl Rng,
    max_vertices: usize,
    max_edges: usize,
) -> Result<MetricGraph> {
    if max_vertices == 0 || max_edges == 0 || max_edges + 1 < max_vertices {
        return Err(Error::OutOfRange {
            what: "graph size",
            value: max_edges as f64,
            range: format!("[{}, inf)", max_vertices.saturating_sub(1).max(1)),
        });
    }
    let m = rng.random_range(1..=max_vertices);
    let n = rng.random_range((m - 1).max(1)..=max_edges);
    let lengths: Vec<f64> = (0..n)
        .map(|_| rng.random_range(MIN_LENGTH..=MAX_LENGTH))
        .collect();
    let mut pairs: Vec<(usize, usize)> = (1..m).map(|v| (rng.random_range(0..v), v)).collect();
    while pairs.len() < n {
        let a = rng.random_range(0..m);
        let b = rng.random_range(0..m);
        pairs.push((a, b));
    }
    let vertices = (0..m as u64).map(VertexId).collect();
    let edges = pairs
        .iter()
        .zip(lengths)
        .map(|(&(a, b), l)| Edge::new(VertexId(a as u64), VertexId(b as u64), l))
        .collect();
    MetricGraph::new(vertices, edges)
}

pub fn metric_graph(rng: &mut impl Rng) -> MetricGraph {
    metric_graph_with(rng, MAX_VERTICES, MAX_EDGES).expect("default sizes are valid")
}

/// Erdos-Renyi graph on `2..=max_vertices` vertices, redrawn until
/// connected.
pub fn discrete_graph_with(rng: &mut impl Rng, max_vertices: usize) -> Result<DiscreteGraph> {
    if max_vertices < 2 {
        return Err(Error::OutOfRange {
            what: "vertex count",
            value: max_vertices as f64,
            range: "[2, inf)".into(),
        });
    }
    let m = rng.random_range(2..=max_vertices);
    let p = rng.random_range(0.2..=0.8);
    loop {
        let mut edges = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                if rng.random_bool(p) {
                    edges.push((a, b));
                }
            }
        }
        let g = DiscreteGraph::new(m, edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
}

pub fn discrete_graph(rng: &mut impl Rng) -> DiscreteGraph {
    discrete_graph_with(rng, MAX_DISCRETE_VERTICES).expect("default size is valid")
}

/// The given edge lengths with freshly drawn endpoints on `1..=N+1`
/// vertices, redrawn until connected.
pub fn pairing(rng: &mut impl Rng, lengths: &[f64]) -> Result<MetricGraph> {
    if lengths.is_empty() {
        return Err(Error::Empty("pairing needs at least one edge"));
    }
    loop {
        let m = rng.random_range(1..=lengths.len() + 1);
        let ids: Vec<u64> = (0..m as u64).collect();
        let edges = lengths
            .iter()
            .map(|&l| {
                let a = *ids.choose(rng).expect("nonempty");
                let b = *ids.choose(rng).expect("nonempty");
                Edge::new(VertexId(a), VertexId(b), l)
            })
            .collect();
        let g = MetricGraph::new(ids.into_iter().map(VertexId).collect(), edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metric_graphs_respect_bounds() {
        for i in 0..300 {
            let g = metric_graph(&mut instance_rng(7, i));
            assert!(g.is_connected());
            assert!(g.vertex_count() <= MAX_VERTICES);
            assert!((1..=MAX_EDGES).contains(&g.edge_count()));
            for e in g.edges() {
                assert!((MIN_LENGTH..=MAX_LENGTH).contains(&e.length));
            }
        }
    }

    #[test]
    fn loops_and_parallel_edges_occur() {
        let graphs: Vec<_> = (0..200)
            .map(|i| metric_graph(&mut instance_rng(3, i)))
            .collect();
        assert!(graphs.iter().any(|g| g.edges().iter().any(Edge::is_loop)));
        assert!(graphs.iter().any(|g| {
            let e = g.edges();
            (0..e.len()).any(|i| {
                (i + 1..e.len()).any(|j| {
                    let (x, y) = (&e[i], &e[j]);
                    !x.is_loop() && ((x.a, x.b) == (y.a, y.b) || (x.a, x.b) == (y.b, y.a))
                })
            })
        }));
    }

    #[test]
    fn streams_are_reproducible_and_independent() {
        let a = metric_graph(&mut instance_rng(11, 5));
        let b = metric_graph(&mut instance_rng(11, 5));
        assert_eq!(a, b);
        let c = metric_graph(&mut instance_rng(11, 6));
        assert_ne!(a, c);
    }

    #[test]
    fn discrete_graphs_are_connected_and_simple() {
        for i in 0..100 {
            let g = discrete_graph(&mut instance_rng(1, i));
            assert!(g.is_connected());
            assert!((2..=MAX_DISCRETE_VERTICES).contains(&g.vertex_count()));
        }
    }

    #[test]
    fn pairings_keep_the_length_multiset() {
        let lengths = [1.0, 2.0, 3.0];
        for i in 0..50 {
            let g = pairing(&mut instance_rng(9, i), &lengths).unwrap();
            assert!(g.is_connected());
            let mut got: Vec<f64> = g.edges().iter().map(|e| e.length).collect();
            got.sort_by(f64::total_cmp);
            assert_eq!(got, lengths);
        }
        assert!(pairing(&mut instance_rng(0, 0), &[]).is_err());
    }
}
