use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::MetricGraph;
use crate::linalg::{det_sign, svd, Svd};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum End {
    /// coordinate 0
    Start,
    /// coordinate `length`
    Finish,
}

/// Edge ends grouped by vertex, in vertex order. A loop contributes both
/// of its ends to the same vertex.
pub(crate) fn ends_by_vertex(g: &MetricGraph) -> Vec<Vec<(usize, End)>> {
    let mut ends = vec![Vec::new(); g.vertex_count()];
    for (n, e) in g.edges().iter().enumerate() {
        ends[g.vertex_index(e.a).expect("valid graph")].push((n, End::Start));
        ends[g.vertex_index(e.b).expect("valid graph")].push((n, End::Finish));
    }
    ends
}

/// Coefficients of `(a, b)` giving the value at an edge end.
pub(crate) fn value_row(end: End, k: f64, length: f64) -> (f64, f64) {
    match end {
        End::Start => (1.0, 0.0),
        End::Finish => ((k * length).cos(), (k * length).sin()),
    }
}

/// Coefficients of `(a, b)` giving the derivative into the edge, divided
/// by `k`.
pub(crate) fn derivative_row(end: End, k: f64, length: f64) -> (f64, f64) {
    match end {
        End::Start => (0.0, 1.0),
        End::Finish => ((k * length).sin(), -(k * length).cos()),
    }
}

/// Matching conditions at wavenumber `k` acting on the per-edge
/// coefficients `(a_n, b_n)` of `a cos(kx) + b sin(kx)`. Column `2n` holds
/// `a_n`, column `2n + 1` holds `b_n`. Each vertex of degree `d`
/// contributes `d - 1` continuity rows followed by one Kirchhoff row.
#[derive(Debug, Clone)]
pub struct SecularMatrix {
    pub k: f64,
    pub matrix: DMatrix<f64>,
}

pub fn secular_matrix(g: &MetricGraph, k: f64) -> Result<SecularMatrix> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::NonPositiveWavenumber(k));
    }
    let n = g.edge_count();
    let mut m = DMatrix::<f64>::zeros(2 * n, 2 * n);
    let mut row = 0;
    for ends in ends_by_vertex(g) {
        let Some(&(first, first_end)) = ends.first() else {
            continue;
        };
        let (fa, fb) = value_row(first_end, k, g.edges()[first].length);
        for &(edge, end) in &ends[1..] {
            let (ca, cb) = value_row(end, k, g.edges()[edge].length);
            m[(row, 2 * first)] += fa;
            m[(row, 2 * first + 1)] += fb;
            m[(row, 2 * edge)] -= ca;
            m[(row, 2 * edge + 1)] -= cb;
            row += 1;
        }
        for &(edge, end) in &ends {
            let (da, db) = derivative_row(end, k, g.edges()[edge].length);
            m[(row, 2 * edge)] += da;
            m[(row, 2 * edge + 1)] += db;
        }
        row += 1;
    }
    debug_assert_eq!(row, 2 * n);
    Ok(SecularMatrix { k, matrix: m })
}

/// Root detector for `det M(k) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecularIndicator {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub det_sign: i8,
}

pub fn secular_indicator(g: &MetricGraph, k: f64) -> Result<SecularIndicator> {
    let m = secular_matrix(g, k)?;
    let s = svd(&m.matrix);
    Ok(SecularIndicator {
        sigma_min: s.sigma_min(),
        sigma_max: s.sigma_max(),
        det_sign: det_sign(&m.matrix),
    })
}

/// Reference scale for null-space decisions. Entries of `M(k)` are O(1);
/// the floor of 1 covers a lone loop, whose matrix vanishes entirely at
/// its eigenvalues.
pub(crate) fn null_scale(s: &Svd) -> f64 {
    s.sigma_max().max(1.0)
}

pub(crate) fn secular_svd(g: &MetricGraph, k: f64) -> Result<Svd> {
    Ok(svd(&secular_matrix(g, k)?.matrix))
}
