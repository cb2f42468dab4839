//! Metric and discrete graphs, surgeries and the on-disk graph format.

mod format;
mod surgery;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub use format::{
    parse_discrete, parse_document, parse_graph, write_discrete, write_graph, Document,
};
pub use surgery::{flower, Glued, SurgeryOp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct VertexId(pub u64);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Position of an edge in its graph's edge list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct EdgeId(pub usize);

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An edge parameterized as `[0, length]`, coordinate 0 at `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub a: VertexId,
    pub b: VertexId,
    pub length: f64,
    pub name: Option<String>,
    /// Decimal text of the length as read from a file, reused on output.
    pub(crate) length_literal: Option<String>,
}

impl Edge {
    pub fn new(a: VertexId, b: VertexId, length: f64) -> Self {
        Edge {
            a,
            b,
            length,
            name: None,
            length_literal: None,
        }
    }

    pub fn is_loop(&self) -> bool {
        self.a == self.b
    }
}

/// Compact metric graph. Loops and parallel edges are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricGraph {
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
    index: HashMap<VertexId, usize>,
}

fn check_length(len: f64) -> Result<()> {
    if len.is_finite() && len > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveLength(len))
    }
}

impl MetricGraph {
    pub fn new(vertices: Vec<VertexId>, edges: Vec<Edge>) -> Result<Self> {
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            if index.insert(v, i).is_some() {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("duplicate vertex id {v}"),
                });
            }
        }
        for e in &edges {
            check_length(e.length)?;
            for end in [e.a, e.b] {
                if !index.contains_key(&end) {
                    return Err(Error::MissingVertex(end));
                }
            }
        }
        Ok(MetricGraph {
            vertices,
            edges,
            index,
        })
    }

    /// Convenience constructor from `(a, b, length)` triples; vertices are
    /// the ids that appear, sorted.
    pub fn from_edges(edges: &[(u64, u64, f64)]) -> Result<Self> {
        let ids: BTreeSet<u64> = edges.iter().flat_map(|&(a, b, _)| [a, b]).collect();
        MetricGraph::new(
            ids.into_iter().map(VertexId).collect(),
            edges
                .iter()
                .map(|&(a, b, l)| Edge::new(VertexId(a), VertexId(b), l))
                .collect(),
        )
    }

    /// Single edge `[0, length]` between vertices 0 and 1.
    pub fn interval(length: f64) -> Result<Self> {
        MetricGraph::from_edges(&[(0, 1, length)])
    }

    /// One loop of the given length on vertex 0.
    pub fn circle(length: f64) -> Result<Self> {
        MetricGraph::from_edges(&[(0, 0, length)])
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.index.contains_key(&v)
    }

    /// Dense index of a vertex in `vertices()`.
    pub fn vertex_index(&self, v: VertexId) -> Result<usize> {
        self.index.get(&v).copied().ok_or(Error::MissingVertex(v))
    }

    pub fn edge(&self, e: EdgeId) -> Result<&Edge> {
        self.edges.get(e.0).ok_or(Error::MissingEdge(e))
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).sum()
    }

    pub fn min_edge_length(&self) -> f64 {
        self.edges
            .iter()
            .map(|e| e.length)
            .fold(f64::INFINITY, f64::min)
    }

    /// Number of edge ends at `v`; a loop counts twice.
    pub fn degree(&self, v: VertexId) -> usize {
        self.edges
            .iter()
            .map(|e| usize::from(e.a == v) + usize::from(e.b == v))
            .sum()
    }

    /// Euler characteristic `M - N`.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64
    }

    pub(crate) fn next_vertex_id(&self) -> VertexId {
        VertexId(self.vertices.iter().map(|v| v.0 + 1).max().unwrap_or(0))
    }

    /// Connected components counted over vertices; isolated vertices are
    /// components of their own.
    pub fn component_count(&self) -> usize {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut components = n;
        for e in &self.edges {
            let (ra, rb) = (
                find(&mut parent, self.index[&e.a]),
                find(&mut parent, self.index[&e.b]),
            );
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
                components -= 1;
            }
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        !self.vertices.is_empty() && self.component_count() == 1
    }

    /// Short stable digest used to tag reports.
    pub fn digest(&self) -> String {
        // FNV-1a over the canonical text form
        let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
        for byte in write_graph(self).bytes() {
            hash ^= u64::from(byte);
            hash = hash.wrapping_mul(0x0100_0000_01b3);
        }
        format!("{hash:016x}")
    }
}

/// Simple undirected graph on vertices `0..vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteGraph {
    vertex_count: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl DiscreteGraph {
    pub fn new(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::Empty("discrete graph needs at least one vertex"));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= vertex_count || b >= vertex_count {
                return Err(Error::NotSimple(format!(
                    "edge ({a}, {b}) out of range for {vertex_count} vertices"
                )));
            }
            if a == b {
                return Err(Error::NotSimple(format!("loop at vertex {a}")));
            }
            if !set.insert((a.min(b), a.max(b))) {
                return Err(Error::NotSimple(format!("parallel edge ({a}, {b})")));
            }
        }
        Ok(DiscreteGraph {
            vertex_count,
            edges: set,
        })
    }

    pub fn path(m: usize) -> Self {
        DiscreteGraph::new(m, (1..m).map(|i| (i - 1, i))).expect("path is simple")
    }

    pub fn cycle(m: usize) -> Self {
        assert!(m >= 3, "cycle needs three vertices");
        DiscreteGraph::new(m, (0..m).map(|i| (i, (i + 1) % m))).expect("cycle is simple")
    }

    pub fn complete(m: usize) -> Self {
        DiscreteGraph::new(m, (0..m).flat_map(|i| ((i + 1)..m).map(move |j| (i, j))))
            .expect("complete graph is simple")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn valency(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.vertex_count];
        let mut components = 0;
        for start in 0..self.vertex_count {
            if seen[start] {
                continue;
            }
            components += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                for &(a, b) in &self.edges {
                    let next = if a == v {
                        b
                    } else if b == v {
                        a
                    } else {
                        continue;
                    };
                    if !seen[next] {
                        seen[next] = true;
                        stack.push(next);
                    }
                }
            }
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Copy with one more edge.
    pub fn with_edge(&self, a: usize, b: usize) -> Result<Self> {
        DiscreteGraph::new(self.vertex_count, self.edges().chain([(a, b)]))
    }

    /// Copy with a new vertex joined to `v` by a single edge.
    pub fn with_pendant(&self, v: usize) -> Result<Self> {
        if v >= self.vertex_count {
            return Err(Error::OutOfRange {
                what: "vertex",
                value: v as f64,
                range: format!("[0, {})", self.vertex_count),
            });
        }
        DiscreteGraph::new(
            self.vertex_count + 1,
            self.edges().chain([(v, self.vertex_count)]),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn total_length_examples() {
        assert_eq!(
            MetricGraph::from_edges(&[(0, 1, 1.0), (1, 2, 3.0)])
                .unwrap()
                .total_length(),
            4.0
        );
        assert_eq!(MetricGraph::interval(2.5).unwrap().total_length(), 2.5);
        assert_eq!(flower(&[1.0, 1.0, 1.0]).unwrap().total_length(), 3.0);
    }

    #[test]
    fn connectivity_examples() {
        assert!(MetricGraph::interval(1.0).unwrap().is_connected());
        let two = MetricGraph::from_edges(&[(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        assert!(!two.is_connected());
        assert_eq!(two.component_count(), 2);
        let eight = MetricGraph::from_edges(&[(0, 0, 1.0), (0, 0, 1.0)]).unwrap();
        assert!(eight.is_connected());
        let isolated = MetricGraph::new(
            vec![VertexId(0), VertexId(1), VertexId(2)],
            vec![Edge::new(VertexId(0), VertexId(1), 1.0)],
        )
        .unwrap();
        assert!(!isolated.is_connected());
    }

    #[test]
    fn rejects_bad_lengths_and_dangling_ends() {
        assert_eq!(
            MetricGraph::interval(-1.0),
            Err(Error::NonPositiveLength(-1.0))
        );
        assert_eq!(
            MetricGraph::interval(0.0),
            Err(Error::NonPositiveLength(0.0))
        );
        assert!(MetricGraph::interval(f64::NAN).is_err());
        let dangling = MetricGraph::new(
            vec![VertexId(0)],
            vec![Edge::new(VertexId(0), VertexId(7), 1.0)],
        );
        assert_eq!(dangling, Err(Error::MissingVertex(VertexId(7))));
    }

    #[test]
    fn loop_degree_counts_twice() {
        let g = MetricGraph::from_edges(&[(0, 0, 1.0), (0, 1, 0.5)]).unwrap();
        assert_eq!(g.degree(VertexId(0)), 3);
        assert_eq!(g.degree(VertexId(1)), 1);
    }

    #[test]
    fn discrete_graph_must_be_simple() {
        assert!(matches!(
            DiscreteGraph::new(2, [(0, 0)]),
            Err(Error::NotSimple(_))
        ));
        assert!(matches!(
            DiscreteGraph::new(2, [(0, 1), (1, 0)]),
            Err(Error::NotSimple(_))
        ));
        assert!(matches!(
            DiscreteGraph::new(2, [(0, 2)]),
            Err(Error::NotSimple(_))
        ));
        let p3 = DiscreteGraph::path(3);
        assert_eq!(p3.valency(1), 2);
        assert!(p3.is_connected());
        assert!(!DiscreteGraph::new(3, [(0, 1)]).unwrap().is_connected());
    }
}
