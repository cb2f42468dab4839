use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::{check_length, Edge, EdgeId, MetricGraph, VertexId};
use crate::error::{Error, Result};

/// Result of merging two vertices: the new graph and where every old vertex
/// went. The merged vertex keeps the smaller id.
#[derive(Debug, Clone, PartialEq)]
pub struct Glued {
    pub graph: MetricGraph,
    pub relabel: BTreeMap<VertexId, VertexId>,
}

impl MetricGraph {
    pub fn glue_vertices(&self, v1: VertexId, v2: VertexId) -> Result<Glued> {
        self.vertex_index(v1)?;
        self.vertex_index(v2)?;
        if v1 == v2 {
            return Err(Error::IdenticalVertices(v1));
        }
        let (keep, gone) = (v1.min(v2), v1.max(v2));
        let map = |v: VertexId| if v == gone { keep } else { v };
        let relabel = self.vertices.iter().map(|&v| (v, map(v))).collect();
        let vertices = self
            .vertices
            .iter()
            .copied()
            .filter(|&v| v != gone)
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                a: map(e.a),
                b: map(e.b),
                ..e.clone()
            })
            .collect();
        Ok(Glued {
            graph: MetricGraph::new(vertices, edges)?,
            relabel,
        })
    }

    /// New edge `[0, length]` from `v1` to `v2`; `v1 == v2` makes a loop.
    pub fn add_edge(&self, v1: VertexId, v2: VertexId, length: f64) -> Result<MetricGraph> {
        check_length(length)?;
        self.vertex_index(v1)?;
        self.vertex_index(v2)?;
        let mut edges = self.edges.clone();
        edges.push(Edge::new(v1, v2, length));
        MetricGraph::new(self.vertices.clone(), edges)
    }

    /// Attaches a new degree-one vertex to `v` by an edge of `length`.
    pub fn add_pendant(&self, v: VertexId, length: f64) -> Result<MetricGraph> {
        check_length(length)?;
        self.vertex_index(v)?;
        let w = self.next_vertex_id();
        let mut vertices = self.vertices.clone();
        vertices.push(w);
        let mut edges = self.edges.clone();
        edges.push(Edge::new(v, w, length));
        MetricGraph::new(vertices, edges)
    }

    /// Splits edge `e` at coordinate `t` into two pieces ending at two new,
    /// unjoined leaves. The first piece `[a, leaf1]` keeps the id `e`, the
    /// second `[leaf2, b]` is appended. Returns the graph and the two leaves.
    pub fn cut_edge_with_leaves(
        &self,
        e: EdgeId,
        t: f64,
    ) -> Result<(MetricGraph, VertexId, VertexId)> {
        let edge = self.edge(e)?;
        if !(t > 0.0 && t < edge.length) {
            return Err(Error::OutOfRange {
                what: "cut point",
                value: t,
                range: format!("(0, {})", edge.length),
            });
        }
        self.split_edge(e, t, edge.length - t)
    }

    pub fn cut_edge(&self, e: EdgeId, t: f64) -> Result<MetricGraph> {
        self.cut_edge_with_leaves(e, t).map(|(g, _, _)| g)
    }

    /// Inserts a degree-two vertex at coordinate `t` of edge `e`. The
    /// spectrum is unchanged; used to address interior points as vertices.
    pub fn subdivide_edge(&self, e: EdgeId, t: f64) -> Result<(MetricGraph, VertexId)> {
        let (cut, l1, l2) = self.cut_edge_with_leaves(e, t)?;
        let glued = cut.glue_vertices(l1, l2)?;
        Ok((glued.graph, l1.min(l2)))
    }

    fn split_edge(
        &self,
        e: EdgeId,
        first: f64,
        second: f64,
    ) -> Result<(MetricGraph, VertexId, VertexId)> {
        let edge = &self.edges[e.0];
        let w1 = self.next_vertex_id();
        let w2 = VertexId(w1.0 + 1);
        let mut vertices = self.vertices.clone();
        vertices.extend([w1, w2]);
        let mut edges = self.edges.clone();
        edges[e.0] = Edge {
            b: w1,
            length: first,
            length_literal: None,
            ..edge.clone()
        };
        edges.push(Edge {
            a: w2,
            length: second,
            length_literal: None,
            ..edge.clone()
        });
        Ok((MetricGraph::new(vertices, edges)?, w1, w2))
    }

    /// Removes edge `e`, keeping its endpoints. Deletions that disconnect
    /// the graph (including stranding an endpoint) are refused.
    pub fn delete_edge(&self, e: EdgeId) -> Result<MetricGraph> {
        self.edge(e)?;
        let mut edges = self.edges.clone();
        edges.remove(e.0);
        let g = MetricGraph::new(self.vertices.clone(), edges)?;
        if !g.is_connected() {
            return Err(Error::Disconnects);
        }
        if g.edge_count() == 0 {
            return Err(Error::Empty("deleting the only edge leaves no edges"));
        }
        Ok(g)
    }

    /// Cuts away `[x_star - length/2, x_star + length/2]` from edge `e`,
    /// leaving two pendant stubs of positive length.
    pub fn remove_interval(&self, e: EdgeId, x_star: f64, length: f64) -> Result<MetricGraph> {
        let edge = self.edge(e)?;
        check_length(length)?;
        let first = x_star - 0.5 * length;
        let second = edge.length - x_star - 0.5 * length;
        if !(first > 0.0 && second > 0.0) {
            return Err(Error::OutOfRange {
                what: "removed interval centre",
                value: x_star,
                range: format!("({}, {})", 0.5 * length, edge.length - 0.5 * length),
            });
        }
        let (g, _, _) = self.split_edge(e, first, second)?;
        if !g.is_connected() {
            return Err(Error::Disconnects);
        }
        Ok(g)
    }
}

/// One vertex carrying one loop per length.
pub fn flower(lengths: &[f64]) -> Result<MetricGraph> {
    if lengths.is_empty() {
        return Err(Error::Empty("flower needs at least one petal"));
    }
    let edges = lengths
        .iter()
        .map(|&l| {
            check_length(l)?;
            Ok(Edge::new(VertexId(0), VertexId(0), l))
        })
        .collect::<Result<Vec<_>>>()?;
    MetricGraph::new(vec![VertexId(0)], edges)
}

/// A single graph surgery with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SurgeryOp {
    Glue(VertexId, VertexId),
    AddEdge(VertexId, VertexId, f64),
    Pendant(VertexId, f64),
    Cut(EdgeId, f64),
    Delete(EdgeId),
    RemoveInterval(EdgeId, f64, f64),
}

impl SurgeryOp {
    pub fn apply(&self, g: &MetricGraph) -> Result<MetricGraph> {
        match *self {
            SurgeryOp::Glue(a, b) => g.glue_vertices(a, b).map(|r| r.graph),
            SurgeryOp::AddEdge(a, b, l) => g.add_edge(a, b, l),
            SurgeryOp::Pendant(v, l) => g.add_pendant(v, l),
            SurgeryOp::Cut(e, t) => g.cut_edge(e, t),
            SurgeryOp::Delete(e) => g.delete_edge(e),
            SurgeryOp::RemoveInterval(e, x, l) => g.remove_interval(e, x, l),
        }
    }
}

impl fmt::Display for SurgeryOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurgeryOp::Glue(a, b) => write!(f, "glue:{a},{b}"),
            SurgeryOp::AddEdge(a, b, l) => write!(f, "add:{a},{b},{l}"),
            SurgeryOp::Pendant(v, l) => write!(f, "pendant:{v},{l}"),
            SurgeryOp::Cut(e, t) => write!(f, "cut:{e},{t}"),
            SurgeryOp::Delete(e) => write!(f, "delete:{e}"),
            SurgeryOp::RemoveInterval(e, x, l) => write!(f, "cutout:{e},{x},{l}"),
        }
    }
}

/// Parses the command-line form, e.g. `glue:0,2` or `cutout:1,0.5,0.1`.
impl FromStr for SurgeryOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::Parse {
            line: 1,
            message: msg,
        };
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| bad(format!("surgery `{s}` lacks a `kind:` prefix")))?;
        let args: Vec<&str> = rest.split(',').map(str::trim).collect();
        let want = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(bad(format!(
                    "`{kind}` takes {n} arguments, got {}",
                    args.len()
                )))
            }
        };
        let vertex = |i: usize| {
            args[i]
                .parse::<u64>()
                .map(VertexId)
                .map_err(|_| bad(format!("bad vertex id `{}`", args[i])))
        };
        let edge = |i: usize| {
            args[i]
                .parse::<usize>()
                .map(EdgeId)
                .map_err(|_| bad(format!("bad edge id `{}`", args[i])))
        };
        let real = |i: usize| {
            args[i]
                .parse::<f64>()
                .map_err(|_| bad(format!("bad number `{}`", args[i])))
        };
        match kind {
            "glue" => {
                want(2)?;
                Ok(SurgeryOp::Glue(vertex(0)?, vertex(1)?))
            }
            "add" => {
                want(3)?;
                Ok(SurgeryOp::AddEdge(vertex(0)?, vertex(1)?, real(2)?))
            }
            "pendant" => {
                want(2)?;
                Ok(SurgeryOp::Pendant(vertex(0)?, real(1)?))
            }
            "cut" => {
                want(2)?;
                Ok(SurgeryOp::Cut(edge(0)?, real(1)?))
            }
            "delete" => {
                want(1)?;
                Ok(SurgeryOp::Delete(edge(0)?))
            }
            "cutout" => {
                want(3)?;
                Ok(SurgeryOp::RemoveInterval(edge(0)?, real(1)?, real(2)?))
            }
            other => Err(bad(format!("unknown surgery `{other}`"))),
        }
    }
}
