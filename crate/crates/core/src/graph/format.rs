//! Text graph format (TOML):
//!
//! ```toml
//! vertices = [0, 1]
//!
//! [[edges]]
//! a = 0
//! b = 1
//! len = 1.0
//! name = "e0"      # optional
//! ```
//!
//! A top-level `discrete = true` marks a simple discrete graph; its edge
//! lengths are optional and ignored.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Deserialize;
use toml::Spanned;

use super::{DiscreteGraph, Edge, MetricGraph, VertexId};
use crate::error::{Error, Result};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    #[serde(default)]
    discrete: bool,
    vertices: Vec<Spanned<i64>>,
    #[serde(default)]
    edges: Vec<Spanned<RawEdge>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEdge {
    a: Spanned<i64>,
    b: Spanned<i64>,
    len: Option<Spanned<toml::Value>>,
    name: Option<String>,
}

/// A parsed graph file.
#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Metric(MetricGraph),
    Discrete(DiscreteGraph),
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())]
        .bytes()
        .filter(|&b| b == b'\n')
        .count()
        + 1
}

fn err_at(text: &str, offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line: line_of(text, offset),
        message: message.into(),
    }
}

fn vertex_id(text: &str, raw: &Spanned<i64>) -> Result<VertexId> {
    u64::try_from(*raw.get_ref()).map(VertexId).map_err(|_| {
        err_at(
            text,
            raw.span().start,
            format!("negative vertex id {}", raw.get_ref()),
        )
    })
}

pub fn parse_document(text: &str) -> Result<Document> {
    let raw: RawDocument = toml::from_str(text).map_err(|e| Error::Parse {
        line: e.span().map_or(1, |s| line_of(text, s.start)),
        message: e.message().trim().to_string(),
    })?;

    let mut index = HashMap::new();
    let mut vertices = Vec::with_capacity(raw.vertices.len());
    for spanned in &raw.vertices {
        let v = vertex_id(text, spanned)?;
        if index.insert(v, vertices.len()).is_some() {
            return Err(err_at(
                text,
                spanned.span().start,
                format!("duplicate vertex id {v}"),
            ));
        }
        vertices.push(v);
    }

    let mut edges = Vec::with_capacity(raw.edges.len());
    for spanned in &raw.edges {
        let record = spanned.get_ref();
        let line_start = spanned.span().start;
        let mut ends = [VertexId(0); 2];
        for (slot, end) in ends.iter_mut().zip([&record.a, &record.b]) {
            let v = vertex_id(text, end)?;
            if !index.contains_key(&v) {
                return Err(err_at(
                    text,
                    end.span().start,
                    format!("dangling endpoint id {v}"),
                ));
            }
            *slot = v;
        }
        let (length, literal) = match &record.len {
            Some(len) => {
                let value = match len.get_ref() {
                    toml::Value::Float(x) => *x,
                    toml::Value::Integer(i) => *i as f64,
                    other => {
                        return Err(err_at(
                            text,
                            len.span().start,
                            format!("length must be a number, got {}", other.type_str()),
                        ))
                    }
                };
                if !(value.is_finite() && value > 0.0) {
                    return Err(err_at(
                        text,
                        len.span().start,
                        format!("non-positive length {value}"),
                    ));
                }
                (value, Some(text[len.span()].trim().to_string()))
            }
            None if raw.discrete => (1.0, None),
            None => return Err(err_at(text, line_start, "edge without `len`")),
        };
        edges.push(Edge {
            a: ends[0],
            b: ends[1],
            length,
            name: record.name.clone(),
            length_literal: literal,
        });
    }

    if raw.discrete {
        let pairs = edges.iter().map(|e| (index[&e.a], index[&e.b]));
        return DiscreteGraph::new(vertices.len(), pairs).map(Document::Discrete);
    }
    MetricGraph::new(vertices, edges).map(Document::Metric)
}

/// Parses a metric graph file; discrete files are rejected.
pub fn parse_graph(text: &str) -> Result<MetricGraph> {
    match parse_document(text)? {
        Document::Metric(g) => Ok(g),
        Document::Discrete(_) => Err(Error::Parse {
            line: 1,
            message: "expected a metric graph, found `discrete = true`".into(),
        }),
    }
}

/// Parses a discrete graph; vertices are renumbered `0..M` in file order.
/// A metric file is accepted as well when its edges form a simple graph.
pub fn parse_discrete(text: &str) -> Result<DiscreteGraph> {
    match parse_document(text)? {
        Document::Discrete(g) => Ok(g),
        Document::Metric(g) => {
            let pairs = g
                .edges()
                .iter()
                .map(|e| (g.vertex_index(e.a).unwrap(), g.vertex_index(e.b).unwrap()))
                .collect::<Vec<_>>();
            DiscreteGraph::new(g.vertex_count(), pairs)
        }
    }
}

fn format_length(edge: &Edge) -> String {
    match &edge.length_literal {
        Some(lit) => lit.clone(),
        None => format!("{:?}", edge.length),
    }
}

pub fn write_graph(g: &MetricGraph) -> String {
    let mut out = String::new();
    let ids: Vec<String> = g.vertices().iter().map(|v| v.to_string()).collect();
    writeln!(out, "vertices = [{}]", ids.join(", ")).unwrap();
    for e in g.edges() {
        writeln!(
            out,
            "\n[[edges]]\na = {}\nb = {}\nlen = {}",
            e.a,
            e.b,
            format_length(e)
        )
        .unwrap();
        if let Some(name) = &e.name {
            writeln!(out, "name = {}", toml::Value::String(name.clone())).unwrap();
        }
    }
    out
}

pub fn write_discrete(g: &DiscreteGraph) -> String {
    let mut out = String::from("discrete = true\n");
    let ids: Vec<String> = (0..g.vertex_count()).map(|v| v.to_string()).collect();
    writeln!(out, "vertices = [{}]", ids.join(", ")).unwrap();
    for (a, b) in g.edges() {
        writeln!(out, "\n[[edges]]\na = {a}\nb = {b}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_interval() {
        let g = parse_graph("vertices = [0, 1]\n[[edges]]\na = 0\nb = 1\nlen = 1.0\n").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.total_length(), 1.0);
    }

    #[test]
    fn loop_is_permitted() {
        let g = parse_graph("vertices = [0]\n[[edges]]\na = 0\nb = 0\nlen = 2.0\n").unwrap();
        assert!(g.edges()[0].is_loop());
        assert_eq!(g.total_length(), 2.0);
    }

    #[test]
    fn negative_length_reports_line() {
        let text = "vertices = [0, 1]\n\n[[edges]]\na = 0\nb = 1\nlen = -1.0\n";
        let err = parse_graph(text).unwrap_err();
        match err {
            Error::Parse { line, message } => {
                assert_eq!(line, 6);
                assert!(message.contains("non-positive length"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dangling_endpoint_reports_line() {
        let text = "vertices = [0, 1]\n[[edges]]\na = 0\nb = 4\nlen = 1\n";
        let err = parse_graph(text).unwrap_err();
        assert!(
            matches!(err, Error::Parse { line: 4, ref message } if message.contains("dangling"))
        );
    }

    #[test]
    fn syntax_error_reports_line() {
        let text = "vertices = [0, 1]\n[[edges]]\na = 0\nb = = 1\n";
        assert!(matches!(
            parse_graph(text),
            Err(Error::Parse { line: 4, .. })
        ));
    }

    #[test]
    fn round_trip_preserves_literals_ids_and_order() {
        let text = "vertices = [7, 3, 11]\n\n[[edges]]\na = 7\nb = 3\nlen = 1.2500\nname = \"left\"\n\n[[edges]]\na = 3\nb = 11\nlen = 0.1000000000000000055511151231257827\n\n[[edges]]\na = 11\nb = 11\nlen = 2\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(write_graph(&g), text);
        assert_eq!(g.vertices(), &[VertexId(7), VertexId(3), VertexId(11)]);
        assert_eq!(g.edges()[0].name.as_deref(), Some("left"));
    }

    #[test]
    fn discrete_flag() {
        let text = "discrete = true\nvertices = [0, 1, 2]\n[[edges]]\na = 0\nb = 1\n[[edges]]\na = 1\nb = 2\nlen = 5.0\n";
        let g = parse_discrete(text).unwrap();
        assert_eq!(g, DiscreteGraph::path(3));
        assert!(parse_graph(text).is_err());
        assert_eq!(parse_discrete(&write_discrete(&g)).unwrap(), g);
    }

    #[test]
    fn discrete_rejects_parallel_edges() {
        let text = "discrete = true\nvertices = [0, 1]\n[[edges]]\na = 0\nb = 1\n[[edges]]\na = 1\nb = 0\n";
        assert!(matches!(parse_document(text), Err(Error::NotSimple(_))));
    }
}
