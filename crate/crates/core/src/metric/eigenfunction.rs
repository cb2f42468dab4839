use std::fmt::Write as _;

use nalgebra::DVector;

use super::secular::{ends_by_vertex, null_scale, secular_matrix, secular_svd, value_row};
use super::spectrum::NULL_TOL;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MetricGraph, VertexId};

/// Residual tolerance for matching conditions, relative to the
/// coefficient scale.
pub const RESIDUAL_TOL: f64 = 1e-7;

/// `psi(x) = a cos(kx) + b sin(kx)` on every edge `[0, length]`,
/// normalized in `L^2` of the whole graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenfunction {
    pub k: f64,
    /// `(a_n, b_n)` per edge, in edge order.
    pub coefficients: Vec<(f64, f64)>,
}

/// Local expansion `psi(x) = alpha sin k(x - x*) + beta cos k(x - x*)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeTrace {
    pub alpha: f64,
    pub beta: f64,
}

fn edge_gram(k: f64, len: f64) -> (f64, f64, f64) {
    let s2 = (2.0 * k * len).sin() / (4.0 * k);
    let cc = 0.5 * len + s2;
    let ss = 0.5 * len - s2;
    let cs = (k * len).sin().powi(2) / (2.0 * k);
    (cc, cs, ss)
}

/// Closed-form `L^2(Gamma)` inner product of two coefficient vectors at the
/// same `k`.
fn inner(g: &MetricGraph, k: f64, u: &[(f64, f64)], v: &[(f64, f64)]) -> f64 {
    g.edges()
        .iter()
        .zip(u.iter().zip(v))
        .map(|(e, (&(a1, b1), &(a2, b2)))| {
            let (cc, cs, ss) = edge_gram(k, e.length);
            a1 * a2 * cc + (a1 * b2 + a2 * b1) * cs + b1 * b2 * ss
        })
        .sum()
}

impl Eigenfunction {
    pub fn lambda(&self) -> f64 {
        self.k * self.k
    }

    /// Largest coefficient magnitude.
    pub(crate) fn scale(&self) -> f64 {
        self.coefficients
            .iter()
            .flat_map(|&(a, b)| [a.abs(), b.abs()])
            .fold(0.0, f64::max)
    }

    pub fn value(&self, g: &MetricGraph, e: EdgeId, x: f64) -> Result<f64> {
        g.edge(e)?;
        let (a, b) = self.coefficients[e.0];
        Ok(a * (self.k * x).cos() + b * (self.k * x).sin())
    }

    pub fn derivative(&self, g: &MetricGraph, e: EdgeId, x: f64) -> Result<f64> {
        g.edge(e)?;
        let (a, b) = self.coefficients[e.0];
        Ok(self.k * (-a * (self.k * x).sin() + b * (self.k * x).cos()))
    }

    pub fn norm_squared(&self, g: &MetricGraph) -> f64 {
        inner(g, self.k, &self.coefficients, &self.coefficients)
    }

    /// `integral over Gamma of psi`.
    pub fn integral(&self, g: &MetricGraph) -> f64 {
        g.edges()
            .iter()
            .zip(&self.coefficients)
            .map(|(e, &(a, b))| {
                let kl = self.k * e.length;
                (a * kl.sin() + b * (1.0 - kl.cos())) / self.k
            })
            .sum()
    }

    /// `|M(k) c| / max|c|`: continuity mismatches and Kirchhoff sums.
    pub fn residual(&self, g: &MetricGraph) -> Result<f64> {
        let m = secular_matrix(g, self.k)?.matrix;
        let c = DVector::from_iterator(
            2 * self.coefficients.len(),
            self.coefficients.iter().flat_map(|&(a, b)| [a, b]),
        );
        Ok((m * c).norm() / self.scale().max(f64::MIN_POSITIVE))
    }

    /// Common value at `v` of all incident edge ends.
    pub fn vertex_value(&self, g: &MetricGraph, v: VertexId) -> Result<f64> {
        let idx = g.vertex_index(v)?;
        let ends = &ends_by_vertex(g)[idx];
        if ends.is_empty() {
            return Err(Error::MissingVertex(v));
        }
        let values: Vec<f64> = ends
            .iter()
            .map(|&(edge, end)| {
                let (ca, cb) = value_row(end, self.k, g.edges()[edge].length);
                let (a, b) = self.coefficients[edge];
                ca * a + cb * b
            })
            .collect();
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let spread = values.iter().map(|x| (x - mean).abs()).fold(0.0, f64::max);
        if spread > RESIDUAL_TOL * self.scale() {
            return Err(Error::Residual(spread));
        }
        Ok(mean)
    }

    /// Expansion about an interior point `x_star` of edge `e`:
    /// `beta = psi(x*)`, `alpha = psi'(x*) / k`.
    pub fn edge_trace(&self, g: &MetricGraph, e: EdgeId, x_star: f64) -> Result<EdgeTrace> {
        let edge = g.edge(e)?;
        if !(x_star > 0.0 && x_star < edge.length) {
            return Err(Error::OutOfRange {
                what: "x_star",
                value: x_star,
                range: format!("(0, {})", edge.length),
            });
        }
        let (a, b) = self.coefficients[e.0];
        let (s, c) = (self.k * x_star).sin_cos();
        Ok(EdgeTrace {
            alpha: -a * s + b * c,
            beta: a * c + b * s,
        })
    }

    /// CSV records `edge,a,b,k`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("edge,a,b,k\n");
        for (n, (a, b)) in self.coefficients.iter().enumerate() {
            writeln!(out, "{n},{a},{b},{}", self.k).unwrap();
        }
        out
    }
}

/// `L^2`-orthonormal basis of the eigenspace at `k`, built from the null
/// space of `M(k)`. Each member is signed so that its coefficient of
/// largest magnitude is positive.
pub fn eigenspace(g: &MetricGraph, k: f64) -> Result<Vec<Eigenfunction>> {
    let svd = secular_svd(g, k)?;
    let tol = NULL_TOL * null_scale(&svd);
    let rel = svd.sigma_min() / null_scale(&svd);
    if rel > NULL_TOL {
        return Err(Error::NotEigenvalue { k, sigma: rel });
    }
    let n = g.edge_count();
    let mut basis: Vec<Vec<(f64, f64)>> = Vec::new();
    for (col, &sigma) in svd.singular_values.iter().enumerate() {
        if sigma > tol {
            break;
        }
        let mut v: Vec<(f64, f64)> = (0..n)
            .map(|e| (svd.right[(2 * e, col)], svd.right[(2 * e + 1, col)]))
            .collect();
        // Gram-Schmidt in L^2(Gamma), twice for stability
        for _ in 0..2 {
            for u in &basis {
                let p = inner(g, k, &v, u);
                for (x, y) in v.iter_mut().zip(u) {
                    x.0 -= p * y.0;
                    x.1 -= p * y.1;
                }
            }
        }
        let norm = inner(g, k, &v, &v).sqrt();
        for x in v.iter_mut() {
            x.0 /= norm;
            x.1 /= norm;
        }
        basis.push(v);
    }

    let functions: Vec<Eigenfunction> = basis
        .into_iter()
        .map(|mut c| {
            let (mut best, mut pivot) = (0.0f64, 1.0);
            for &(a, b) in &c {
                for x in [a, b] {
                    if x.abs() > best {
                        best = x.abs();
                        pivot = x;
                    }
                }
            }
            if pivot < 0.0 {
                for x in c.iter_mut() {
                    x.0 = -x.0;
                    x.1 = -x.1;
                }
            }
            Eigenfunction { k, coefficients: c }
        })
        .collect();
    for f in &functions {
        let r = f.residual(g)?;
        if r > RESIDUAL_TOL {
            return Err(Error::Residual(r));
        }
    }
    Ok(functions)
}
