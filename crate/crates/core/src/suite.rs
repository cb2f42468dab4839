//! Seeded property suite: every surgery check on random connected metric
//! graphs plus both discrete propositions on random simple graphs.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::discrete::{check_discrete_add, check_discrete_pendant};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MetricGraph, VertexId};
use crate::random::{discrete_graph, instance_rng, metric_graph};
use crate::verify::{
    interval_criterion, lower_bound_check, spectral_gap, verify_add_edge, verify_cut,
    verify_delete, verify_join, verify_pendant, Summary, VerificationReport,
};

/// Discrete instances draw from streams offset by this much.
const DISCRETE_STREAM: u64 = 1 << 32;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub seed: u64,
    pub metric_instances: usize,
    pub discrete_instances: usize,
    pub overall: Summary,
    pub by_theorem: BTreeMap<String, Summary>,
}

#[derive(Debug, Clone)]
pub struct SuiteOutput {
    pub reports: Vec<VerificationReport>,
    pub summary: SuiteSummary,
}

impl SuiteOutput {
    /// One JSON record per line, then the summary as the last line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.reports {
            writeln!(out, "{}", r.to_record()).unwrap();
        }
        #[derive(Serialize)]
        struct Block<'a> {
            summary: &'a SuiteSummary,
        }
        writeln!(
            out,
            "{}",
            serde_json::to_string(&Block {
                summary: &self.summary
            })
            .unwrap()
        )
        .unwrap();
        out
    }
}

fn pick_vertex(rng: &mut impl Rng, g: &MetricGraph) -> VertexId {
    g.vertices()[rng.random_range(0..g.vertex_count())]
}

fn pick_edge(rng: &mut impl Rng, g: &MetricGraph) -> EdgeId {
    EdgeId(rng.random_range(0..g.edge_count()))
}

/// All metric checks on instance `index`.
pub fn metric_instance(seed: u64, index: u64) -> Result<Vec<VerificationReport>> {
    let mut rng = instance_rng(seed, index);
    let g = metric_graph(&mut rng);
    let total = g.total_length();
    let mut reports = vec![lower_bound_check(&g)?];

    let join = if g.vertex_count() >= 2 {
        let v1 = pick_vertex(&mut rng, &g);
        let v2 = loop {
            let v = pick_vertex(&mut rng, &g);
            if v != v1 {
                break v;
            }
        };
        verify_join(&g, v1, v2)?
    } else {
        // a single vertex: give the join a second point to work with
        let e = pick_edge(&mut rng, &g);
        let t = g.edges()[e.0].length * rng.random_range(0.1..0.9);
        let (h, w) = g.subdivide_edge(e, t)?;
        verify_join(&h, g.vertices()[0], w)?
    };
    reports.push(join);

    let v = pick_vertex(&mut rng, &g);
    reports.push(verify_pendant(&g, v, rng.random_range(0.3..=3.0))?);

    let e = pick_edge(&mut rng, &g);
    let t = g.edges()[e.0].length * rng.random_range(0.1..0.9);
    reports.push(verify_cut(&g, e, t)?);

    let (v1, v2) = (pick_vertex(&mut rng, &g), pick_vertex(&mut rng, &g));
    reports.push(verify_add_edge(
        &g,
        v1,
        v2,
        total * rng.random_range(1.01..=2.0),
    )?);

    let e = pick_edge(&mut rng, &g);
    reports.push(verify_delete(&g, e)?);

    let e = pick_edge(&mut rng, &g);
    let edge_len = g.edges()[e.0].length;
    let gate = PI / (2.0 * spectral_gap(&g)?.k);
    let len = (gate * rng.random_range(0.05..1.0)).min(0.8 * edge_len);
    let x_star = 0.5 * len + (edge_len - len) * rng.random_range(0.01..0.99);
    reports.push(interval_criterion(&g, e, x_star, len)?);

    Ok(reports
        .into_iter()
        .map(|r| {
            let mut r = r.with_seed(seed);
            r.notes.push(format!("metric instance {index}"));
            r
        })
        .collect())
}

/// Both discrete propositions on instance `index`; the edge-adding check
/// is skipped on complete graphs.
pub fn discrete_instance(seed: u64, index: u64) -> Result<Vec<VerificationReport>> {
    let mut rng = instance_rng(seed, DISCRETE_STREAM + index);
    let g = discrete_graph(&mut rng);
    let m = g.vertex_count();
    let mut reports = vec![check_discrete_pendant(&g, rng.random_range(0..m))?];
    let missing: Vec<(usize, usize)> = (0..m)
        .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
        .filter(|&(a, b)| !g.is_adjacent(a, b))
        .collect();
    if !missing.is_empty() {
        let (a, b) = missing[rng.random_range(0..missing.len())];
        reports.push(check_discrete_add(&g, a, b)?);
    }
    Ok(reports
        .into_iter()
        .map(|r| {
            let mut r = r.with_seed(seed);
            r.notes.push(format!("discrete instance {index}"));
            r
        })
        .collect())
}

/// Runs `n` metric instances and `ceil(n / 2)` discrete ones. Output
/// order follows the instance index, whatever the thread count.
pub fn run_suite(seed: u64, n: usize) -> Result<SuiteOutput> {
    if n == 0 {
        return Err(Error::OutOfRange {
            what: "instance count",
            value: 0.0,
            range: "[1, inf)".into(),
        });
    }
    let discrete = n.div_ceil(2);
    let metric: Vec<Vec<VerificationReport>> = (0..n as u64)
        .into_par_iter()
        .map(|i| metric_instance(seed, i))
        .collect::<Result<_>>()?;
    let disc: Vec<Vec<VerificationReport>> = (0..discrete as u64)
        .into_par_iter()
        .map(|i| discrete_instance(seed, i))
        .collect::<Result<_>>()?;
    let reports: Vec<VerificationReport> = metric.into_iter().chain(disc).flatten().collect();

    let mut by_theorem: BTreeMap<String, Vec<&VerificationReport>> = BTreeMap::new();
    for r in &reports {
        by_theorem.entry(r.theorem.clone()).or_default().push(r);
    }
    let summary = SuiteSummary {
        seed,
        metric_instances: n,
        discrete_instances: discrete,
        overall: Summary::from_reports(&reports),
        by_theorem: by_theorem
            .into_iter()
            .map(|(k, v)| (k, Summary::from_reports(v)))
            .collect(),
    };
    Ok(SuiteOutput { reports, summary })
}
