use std::f64::consts::PI;

use rayon::prelude::*;

use super::report::{Claim, Hypothesis, VerificationReport};
use super::{flag, norm, spectral_gap, GapSpace};
use crate::error::{Error, Result};
use crate::graph::{flower, EdgeId, MetricGraph, SurgeryOp, VertexId};
use crate::random::{instance_rng, pairing};

/// Gluing two vertices never lowers the gap; equality iff some gap
/// eigenfunction takes equal values at them.
pub fn verify_join(g: &MetricGraph, v1: VertexId, v2: VertexId) -> Result<VerificationReport> {
    let glued = g.glue_vertices(v1, v2)?.graph;
    let before = GapSpace::of(g)?;
    let after = spectral_gap(&glued)?;
    let diffs = before.functional(|f| Ok(f.vertex_value(g, v1)? - f.vertex_value(g, v2)?))?;
    let diagnostic = before.has_kernel(&diffs);

    let mut r = VerificationReport::new(
        "join",
        g.digest(),
        SurgeryOp::Glue(v1, v2).to_string(),
        before.gap.pair(),
        after.pair(),
        Claim::NonDecreasing,
        Hypothesis::Satisfied,
    )
    .with_quantity("eigenspace_dim", before.basis.len() as f64)
    .with_quantity("value_difference_norm", norm(&diffs));
    r.equality_diagnostic = Some(diagnostic);
    r.diagnostic_consistent = Some(diagnostic == r.equality_observed);
    Ok(r)
}

/// A pendant edge never raises the gap. The stated equality condition is
/// that every gap eigenfunction vanishes at the attachment vertex.
pub fn verify_pendant(g: &MetricGraph, v: VertexId, length: f64) -> Result<VerificationReport> {
    let extended = g.add_pendant(v, length)?;
    let before = GapSpace::of(g)?;
    let after = spectral_gap(&extended)?;
    let values = before.functional(|f| f.vertex_value(g, v))?;
    let diagnostic = norm(&values) <= before.tol();

    let mut r = VerificationReport::new(
        "pendant",
        g.digest(),
        SurgeryOp::Pendant(v, length).to_string(),
        before.gap.pair(),
        after.pair(),
        Claim::NonIncreasing,
        Hypothesis::Satisfied,
    )
    .with_quantity("eigenspace_dim", before.basis.len() as f64)
    .with_quantity("vertex_value_norm", norm(&values));
    r.equality_diagnostic = Some(diagnostic);
    r.diagnostic_consistent = Some(diagnostic == r.equality_observed);
    Ok(r)
}

fn add_edge_report(
    theorem: &str,
    g: &MetricGraph,
    v1: VertexId,
    v2: VertexId,
    length: f64,
    use_values: bool,
) -> Result<VerificationReport> {
    let extended = g.add_edge(v1, v2, length)?;
    let before = GapSpace::of(g)?;
    let after = spectral_gap(&extended)?;
    let diffs = before.functional(|f| Ok(f.vertex_value(g, v1)? - f.vertex_value(g, v2)?))?;
    let equal_values = before.has_kernel(&diffs);
    let long_edge = length > g.total_length();
    let satisfied = long_edge || (use_values && equal_values);

    let mut r = VerificationReport::new(
        theorem,
        g.digest(),
        SurgeryOp::AddEdge(v1, v2, length).to_string(),
        before.gap.pair(),
        after.pair(),
        Claim::NonIncreasing,
        if satisfied {
            Hypothesis::Satisfied
        } else {
            Hypothesis::NotSatisfied
        },
    )
    .with_quantity("long_edge", flag(long_edge))
    .with_quantity("total_length", g.total_length())
    .with_quantity("edge_length", length);
    if use_values {
        r = r
            .with_quantity("equal_values", flag(equal_values))
            .with_quantity("value_difference_norm", norm(&diffs));
    }
    Ok(r)
}

/// Adding an edge lowers or keeps the gap when some gap eigenfunction
/// agrees at the two endpoints, or when the new edge is longer than the
/// whole graph. Both hypotheses are evaluated and reported.
pub fn verify_add_edge(
    g: &MetricGraph,
    v1: VertexId,
    v2: VertexId,
    length: f64,
) -> Result<VerificationReport> {
    add_edge_report("add", g, v1, v2, length, true)
}

/// Only the length hypothesis `length > total_length(g)`.
pub fn verify_long_edge(
    g: &MetricGraph,
    v1: VertexId,
    v2: VertexId,
    length: f64,
) -> Result<VerificationReport> {
    add_edge_report("long-edge", g, v1, v2, length, false)
}

/// Cutting an edge never raises the gap. Equality forces a Neumann point
/// at the cut for every gap eigenfunction; a gap eigenfunction of the cut
/// graph that agrees at the two new leaves forces equality.
pub fn verify_cut(g: &MetricGraph, e: EdgeId, t: f64) -> Result<VerificationReport> {
    let (cut, leaf1, leaf2) = g.cut_edge_with_leaves(e, t)?;
    let op = SurgeryOp::Cut(e, t).to_string();
    let before = GapSpace::of(g)?;
    if !cut.is_connected() {
        return Ok(VerificationReport::not_applicable(
            "cut",
            g.digest(),
            op,
            before.gap.pair(),
            "cut disconnects the graph",
        ));
    }
    let after = GapSpace::of(&cut)?;
    // edge_trace alpha is psi'(x*) / k
    let slopes = before.functional(|f| f.edge_trace(g, e, t).map(|tr| tr.alpha))?;
    let neumann = norm(&slopes) <= before.tol();
    let leaf_diffs =
        after.functional(|f| Ok(f.vertex_value(&cut, leaf1)? - f.vertex_value(&cut, leaf2)?))?;
    let leaves_match = after.has_kernel(&leaf_diffs);

    let mut r = VerificationReport::new(
        "cut",
        g.digest(),
        op,
        before.gap.pair(),
        after.gap.pair(),
        Claim::NonIncreasing,
        Hypothesis::Satisfied,
    )
    .with_quantity("slope_norm", norm(&slopes))
    .with_quantity("leaves_match", flag(leaves_match));
    r.equality_diagnostic = Some(neumann);
    let eq = r.equality_observed;
    r.diagnostic_consistent = Some((!eq || neumann) && (!leaves_match || eq));
    Ok(r)
}

/// `lambda_1 >= (pi / total_length)^2`.
pub fn lower_bound_check(g: &MetricGraph) -> Result<VerificationReport> {
    let gap = spectral_gap(g)?;
    let bound = (PI / g.total_length()).powi(2);
    Ok(VerificationReport::new(
        "lower-bound",
        g.digest(),
        "none".into(),
        gap.pair(),
        (bound, 0),
        Claim::NonIncreasing,
        Hypothesis::Satisfied,
    )
    .with_quantity("bound", bound))
}

/// Compares the flower on `lengths` with `trials` random connected
/// pairings of the same edges; the flower must have the largest gap.
pub fn flower_probe(lengths: &[f64], trials: usize, seed: u64) -> Result<VerificationReport> {
    if trials == 0 {
        return Err(Error::OutOfRange {
            what: "trials",
            value: 0.0,
            range: "[1, inf)".into(),
        });
    }
    let petals = flower(lengths)?;
    let best = spectral_gap(&petals)?;
    let candidates = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let g = pairing(&mut instance_rng(seed, i), lengths)?;
            Ok((spectral_gap(&g)?, g.digest()))
        })
        .collect::<Result<Vec<_>>>()?;
    let (top, digest) = candidates
        .iter()
        .max_by(|a, b| a.0.lambda.total_cmp(&b.0.lambda))
        .expect("at least one trial");

    let mut r = VerificationReport::new(
        "flower",
        petals.digest(),
        format!("pairings:{trials}"),
        best.pair(),
        top.pair(),
        Claim::NonIncreasing,
        Hypothesis::Satisfied,
    )
    .with_quantity("trials", trials as f64)
    .with_seed(seed);
    r.notes
        .push(format!("largest candidate gap from graph {digest}"));
    Ok(r)
}
