use std::f64::consts::PI;

use super::report::{Claim, Hypothesis, VerificationReport};
use super::{flag, ratio, spectral_gap, GapSpace, Ratio};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MetricGraph, SurgeryOp};

/// `sin(k l / 2)` or `cos(k l / 2)` below this counts as zero.
pub const TRIG_TOL: f64 = 1e-8;

/// Sufficient condition for deleting an edge of length `l` not to raise
/// the gap:
///
/// `(R cot^2(k l/2) - 1) (k/2) cot(k l/2) >= 1 / (L - l)` with
/// `R = (psi(V1) - psi(V2))^2 / (psi(V1) + psi(V2))^2`
///
/// for some gap eigenfunction `psi`. `lhs` is the supremum of the left
/// side over the eigenspace.
#[derive(Debug, Clone, PartialEq)]
pub struct DeleteCriterion {
    pub lhs: f64,
    pub rhs: f64,
    pub hypothesis: Hypothesis,
    pub notes: Vec<String>,
}

impl DeleteCriterion {
    pub fn satisfied(&self) -> bool {
        self.hypothesis == Hypothesis::Satisfied
    }

    fn not_applicable(rhs: f64, note: &str) -> Self {
        DeleteCriterion {
            lhs: f64::NAN,
            rhs,
            hypothesis: Hypothesis::NotApplicable,
            notes: vec![note.to_string()],
        }
    }
}

fn criterion_on(g: &MetricGraph, before: &GapSpace, e: EdgeId) -> Result<DeleteCriterion> {
    let edge = g.edge(e)?;
    let l = edge.length;
    let rhs = 1.0 / (g.total_length() - l);
    match g.delete_edge(e) {
        Err(Error::Disconnects) => {
            return Ok(DeleteCriterion::not_applicable(
                rhs,
                "deletion disconnects the graph",
            ))
        }
        Err(Error::Empty(why)) => return Ok(DeleteCriterion::not_applicable(rhs, why)),
        _ => {}
    }
    let k = before.gap.k;
    let (s, c) = (0.5 * k * l).sin_cos();
    if s.abs() < TRIG_TOL || c.abs() < TRIG_TOL {
        return Ok(DeleteCriterion::not_applicable(
            rhs,
            "cot(k l / 2) is zero or infinite",
        ));
    }
    let cot = c / s;
    let (v1, v2) = (edge.a, edge.b);
    let u = before.functional(|f| Ok(f.vertex_value(g, v1)? - f.vertex_value(g, v2)?))?;
    let w = before.functional(|f| Ok(f.vertex_value(g, v1)? + f.vertex_value(g, v2)?))?;
    let mut notes = Vec::new();
    let lhs = match ratio(&u, &w, before.tol()) {
        Ratio::Undefined => {
            return Ok(DeleteCriterion::not_applicable(
                rhs,
                "psi(V1) + psi(V2) vanishes on the whole eigenspace",
            ))
        }
        Ratio::Constant(r) => (r * cot * cot - 1.0) * 0.5 * k * cot,
        Ratio::Unbounded => {
            notes.push("value ratio ranges over [0, inf) on the eigenspace".to_string());
            if cot > 0.0 {
                f64::INFINITY
            } else {
                // decreasing in the ratio, so the supremum sits at ratio 0
                -0.5 * k * cot
            }
        }
    };
    Ok(DeleteCriterion {
        lhs,
        rhs,
        hypothesis: if lhs >= rhs {
            Hypothesis::Satisfied
        } else {
            Hypothesis::NotSatisfied
        },
        notes,
    })
}

pub fn delete_criterion(g: &MetricGraph, e: EdgeId) -> Result<DeleteCriterion> {
    criterion_on(g, &GapSpace::of(g)?, e)
}

/// Deleting an edge does not raise the gap when the criterion holds.
pub fn verify_delete(g: &MetricGraph, e: EdgeId) -> Result<VerificationReport> {
    let before = GapSpace::of(g)?;
    let crit = criterion_on(g, &before, e)?;
    let op = SurgeryOp::Delete(e).to_string();
    let after_graph = match g.delete_edge(e) {
        Ok(h) => h,
        Err(Error::Disconnects) => {
            return Ok(VerificationReport::not_applicable(
                "delete",
                g.digest(),
                op,
                before.gap.pair(),
                "deletion disconnects the graph",
            ))
        }
        Err(Error::Empty(why)) => {
            return Ok(VerificationReport::not_applicable(
                "delete",
                g.digest(),
                op,
                before.gap.pair(),
                why,
            ))
        }
        Err(err) => return Err(err),
    };
    let after = spectral_gap(&after_graph)?;
    let mut r = VerificationReport::new(
        "delete",
        g.digest(),
        op,
        before.gap.pair(),
        after.pair(),
        Claim::NonIncreasing,
        crit.hypothesis,
    )
    .with_quantity("lhs", crit.lhs)
    .with_quantity("rhs", crit.rhs)
    .with_quantity("k1", before.gap.k);
    r.notes.extend(crit.notes);
    Ok(r)
}

/// Removing an interval of length `l` centred at `x_star` on edge `e`
/// does not raise the gap when, for some gap eigenfunction written as
/// `alpha sin k(x - x*) + beta cos k(x - x*)` on `e`,
///
/// `l < pi / (2 k)`, `|alpha| > |beta|` and
/// `l <= (pi / 4) (L - l) (alpha^2 / beta^2 - 1)`.
pub fn interval_criterion(
    g: &MetricGraph,
    e: EdgeId,
    x_star: f64,
    length: f64,
) -> Result<VerificationReport> {
    let op = SurgeryOp::RemoveInterval(e, x_star, length).to_string();
    let removed = g.remove_interval(e, x_star, length);
    let before = GapSpace::of(g)?;
    let after_graph = match removed {
        Ok(h) => h,
        Err(Error::Disconnects) => {
            return Ok(VerificationReport::not_applicable(
                "interval",
                g.digest(),
                op,
                before.gap.pair(),
                "removal disconnects the graph",
            ))
        }
        Err(err) => return Err(err),
    };
    let after = spectral_gap(&after_graph)?;
    let k = before.gap.k;
    let gate = PI / (2.0 * k);
    let alpha = before.functional(|f| f.edge_trace(g, e, x_star).map(|t| t.alpha))?;
    let beta = before.functional(|f| f.edge_trace(g, e, x_star).map(|t| t.beta))?;
    let tol = before.tol();

    let mut notes = Vec::new();
    let max_ratio = match ratio(&alpha, &beta, tol) {
        Ratio::Undefined if super::norm(&alpha) <= tol => None,
        Ratio::Undefined | Ratio::Unbounded => {
            notes.push("criterion trivially satisfied by unbounded ratio".to_string());
            Some(f64::INFINITY)
        }
        Ratio::Constant(r) => Some(r),
    };
    let short = length < gate;
    let (hypothesis, bound) = match max_ratio {
        None => {
            notes.push("alpha and beta vanish on the whole eigenspace".to_string());
            (Hypothesis::NotApplicable, f64::NAN)
        }
        Some(r) => {
            let bound = 0.25 * PI * (g.total_length() - length) * (r - 1.0);
            let ok = short && r > 1.0 && length <= bound;
            (
                if ok {
                    Hypothesis::Satisfied
                } else {
                    Hypothesis::NotSatisfied
                },
                bound,
            )
        }
    };

    let mut r = VerificationReport::new(
        "interval",
        g.digest(),
        op,
        before.gap.pair(),
        after.pair(),
        Claim::NonIncreasing,
        hypothesis,
    )
    .with_quantity("k1", k)
    .with_quantity("length_gate", gate)
    .with_quantity("short_enough", flag(short))
    .with_quantity("max_ratio", max_ratio.unwrap_or(f64::NAN))
    .with_quantity("length_bound", bound);
    r.notes.extend(notes);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::report::Verdict;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-8 * (1.0 + b.abs())
    }

    #[test]
    fn delete_from_equal_parallel_pair_is_degenerate() {
        let g = MetricGraph::from_edges(&[(0, 1, 1.0), (0, 1, 1.0)]).unwrap();
        let c = delete_criterion(&g, EdgeId(1)).unwrap();
        assert_eq!(c.hypothesis, Hypothesis::NotApplicable);
        assert!(close(c.rhs, 1.0));
        let r = verify_delete(&g, EdgeId(1)).unwrap();
        assert!(close(r.lambda1_before, PI * PI));
        assert!(close(r.lambda1_after, PI * PI));
        assert_eq!(r.verdict, Verdict::NoClaim);
    }

    #[test]
    fn delete_long_parallel_edge() {
        let g = MetricGraph::from_edges(&[(0, 1, 1.0), (0, 1, 3.0)]).unwrap();
        let c = delete_criterion(&g, EdgeId(1)).unwrap();
        // cot(3 pi / 4) = -1; the supremum over the circle eigenspace is
        // k / 2 = pi / 4, short of 1 / (4 - 3)
        assert!(close(c.lhs, PI / 4.0), "{}", c.lhs);
        assert!(close(c.rhs, 1.0));
        assert!(!c.satisfied());
        let r = verify_delete(&g, EdgeId(1)).unwrap();
        assert!(close(r.lambda1_before, PI * PI / 4.0));
        assert!(close(r.lambda1_after, PI * PI));
        assert_eq!(r.verdict, Verdict::NoClaim);
    }

    #[test]
    fn delete_errors_and_bridges() {
        let star = MetricGraph::from_edges(&[(0, 1, 1.0), (0, 2, 1.0)]).unwrap();
        let r = verify_delete(&star, EdgeId(0)).unwrap();
        assert_eq!(r.hypothesis, Hypothesis::NotApplicable);
        assert!(matches!(
            verify_delete(&star, EdgeId(5)),
            Err(Error::MissingEdge(_))
        ));
        let lone = MetricGraph::circle(1.5).unwrap();
        assert_eq!(
            verify_delete(&lone, EdgeId(0)).unwrap().hypothesis,
            Hypothesis::NotApplicable
        );
    }

    #[test]
    fn interval_on_circle_is_unbounded() {
        let g = MetricGraph::from_edges(&[(0, 1, 1.0), (0, 1, 1.0)]).unwrap();
        let r = interval_criterion(&g, EdgeId(0), 0.5, 0.1).unwrap();
        assert_eq!(r.quantities["max_ratio"], f64::INFINITY);
        assert_eq!(r.hypothesis, Hypothesis::Satisfied);
        assert_eq!(r.verdict, Verdict::InequalityHolds);
        assert!(r.notes.iter().any(|n| n.contains("unbounded ratio")));
    }

    #[test]
    fn interval_length_gate() {
        let g = MetricGraph::from_edges(&[(0, 1, 1.0), (0, 1, 1.0)]).unwrap();
        // pi / (2 k) = 1/2 here
        let r = interval_criterion(&g, EdgeId(0), 0.5, 0.6).unwrap();
        assert_eq!(r.quantities["short_enough"], 0.0);
        assert_eq!(r.verdict, Verdict::NoClaim);
    }

    #[test]
    fn interval_errors() {
        let g = MetricGraph::from_edges(&[(0, 1, 1.0), (0, 1, 1.0)]).unwrap();
        assert!(matches!(
            interval_criterion(&g, EdgeId(0), 0.05, 0.2),
            Err(Error::OutOfRange { .. })
        ));
        let path = MetricGraph::interval(1.0).unwrap();
        let r = interval_criterion(&path, EdgeId(0), 0.5, 0.1).unwrap();
        assert_eq!(r.hypothesis, Hypothesis::NotApplicable);
    }
}
