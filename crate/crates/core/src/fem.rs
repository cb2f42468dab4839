//! Piecewise-linear finite elements on a metric graph: an oracle for the
//! secular solver built on the quadratic form `|u'|^2 / |u|^2` over
//! functions continuous at the vertices.
//!
//! Vertex nodes are shared by all incident edges, so continuity holds by
//! construction and the Kirchhoff condition comes out as the natural
//! boundary condition of the weak form.

use nalgebra::{Cholesky, DMatrix};

use crate::error::{Error, Result};
use crate::graph::MetricGraph;
use crate::linalg::{eigenvalues_sym, symmetric_eigen};
use crate::metric;

/// Meshes up to this many nodes are solved densely (Cholesky of the mass
/// matrix plus Jacobi); larger ones by inertia counting.
pub const DENSE_NODE_LIMIT: usize = 200;

/// Elements per edge. Vertex nodes come first (`0..M`), then the interior
/// nodes of each edge in edge order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mesh {
    pub elements: Vec<usize>,
    vertex_count: usize,
}

impl Mesh {
    /// `max(2, ceil(length / h))` elements per edge.
    pub fn new(g: &MetricGraph, h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::OutOfRange {
                what: "mesh size",
                value: h,
                range: "(0, inf)".into(),
            });
        }
        let elements = g
            .edges()
            .iter()
            .map(|e| ((e.length / h).ceil() as usize).max(2))
            .collect();
        Ok(Mesh {
            elements,
            vertex_count: g.vertex_count(),
        })
    }

    /// Every element split in two; the finer space contains the coarser.
    pub fn refined(&self) -> Self {
        Mesh {
            elements: self.elements.iter().map(|n| 2 * n).collect(),
            vertex_count: self.vertex_count,
        }
    }

    pub fn node_count(&self) -> usize {
        self.vertex_count + self.elements.iter().map(|n| n - 1).sum::<usize>()
    }

    /// Global node indices along edge `n`, from its `a` end to its `b` end.
    fn chain(&self, g: &MetricGraph, n: usize) -> Vec<usize> {
        let edge = &g.edges()[n];
        let first_interior =
            self.vertex_count + self.elements[..n].iter().map(|m| m - 1).sum::<usize>();
        let mut nodes = Vec::with_capacity(self.elements[n] + 1);
        nodes.push(g.vertex_index(edge.a).expect("valid graph"));
        nodes.extend(first_interior..first_interior + self.elements[n] - 1);
        nodes.push(g.vertex_index(edge.b).expect("valid graph"));
        nodes
    }
}

/// Dense stiffness and mass matrices of a mesh.
#[derive(Debug, Clone)]
pub struct MeshedGraph {
    pub mesh: Mesh,
    pub stiffness: DMatrix<f64>,
    pub mass: DMatrix<f64>,
}

pub fn assemble(g: &MetricGraph, h: f64) -> Result<MeshedGraph> {
    assemble_mesh(g, Mesh::new(g, h)?)
}

pub fn assemble_mesh(g: &MetricGraph, mesh: Mesh) -> Result<MeshedGraph> {
    let n = mesh.node_count();
    let mut k = DMatrix::<f64>::zeros(n, n);
    let mut b = DMatrix::<f64>::zeros(n, n);
    for (e, edge) in g.edges().iter().enumerate() {
        let he = edge.length / mesh.elements[e] as f64;
        let nodes = mesh.chain(g, e);
        for w in nodes.windows(2) {
            let (i, j) = (w[0], w[1]);
            k[(i, i)] += 1.0 / he;
            k[(j, j)] += 1.0 / he;
            k[(i, j)] -= 1.0 / he;
            k[(j, i)] -= 1.0 / he;
            b[(i, i)] += he / 3.0;
            b[(j, j)] += he / 3.0;
            b[(i, j)] += he / 6.0;
            b[(j, i)] += he / 6.0;
        }
    }
    Ok(MeshedGraph {
        mesh,
        stiffness: k,
        mass: b,
    })
}

/// Generalized eigenvalues of `K u = lambda B u` via `B = L L^T`.
fn dense_eigenvalues(m: &MeshedGraph) -> Result<Vec<f64>> {
    let chol = Cholesky::new(m.mass.clone()).ok_or(Error::NotPositiveDefinite)?;
    let l = chol.l();
    // C = L^{-1} K L^{-T}
    let y = l
        .solve_lower_triangular(&m.stiffness)
        .ok_or(Error::NotPositiveDefinite)?;
    let c = l
        .solve_lower_triangular(&y.transpose())
        .ok_or(Error::NotPositiveDefinite)?;
    let n = c.nrows();
    let sym = DMatrix::from_fn(n, n, |i, j| 0.5 * (c[(i, j)] + c[(j, i)]));
    Ok(symmetric_eigen(&sym)?.values)
}

/// Number of generalized eigenvalues strictly below `sigma`, from the
/// inertia of `K - sigma B` (Sylvester). Interior nodes of every edge are
/// eliminated along the edge; what remains is a small dense block on the
/// vertex nodes.
pub fn count_below(g: &MetricGraph, mesh: &Mesh, sigma: f64) -> Result<usize> {
    let m = g.vertex_count();
    let mut schur = DMatrix::<f64>::zeros(m, m);
    let mut negative = 0;
    for (e, edge) in g.edges().iter().enumerate() {
        let n = mesh.elements[e];
        let he = edge.length / n as f64;
        let diag = 1.0 / he - sigma * he / 3.0;
        let off = -1.0 / he - sigma * he / 6.0;
        let a = g.vertex_index(edge.a)?;
        let b = g.vertex_index(edge.b)?;
        schur[(a, a)] += diag;
        schur[(b, b)] += diag;

        let tiny = f64::EPSILON * off.abs().max(diag.abs()).max(f64::MIN_POSITIVE);
        let mut coupling = off;
        let mut pivot = 2.0 * diag;
        for i in 1..n {
            if pivot.abs() < tiny {
                pivot = -tiny;
            }
            if pivot < 0.0 {
                negative += 1;
            }
            schur[(a, a)] -= coupling * coupling / pivot;
            if i + 1 < n {
                coupling = -coupling * off / pivot;
                pivot = 2.0 * diag - off * off / pivot;
            } else {
                let cross = coupling * off / pivot;
                schur[(a, b)] -= cross;
                schur[(b, a)] -= cross;
                schur[(b, b)] -= off * off / pivot;
            }
        }
    }
    let block = eigenvalues_sym(&schur)?;
    Ok(negative + block.iter().filter(|&&x| x < 0.0).count())
}

fn bisect_eigenvalue(g: &MetricGraph, mesh: &Mesh, index: usize) -> Result<f64> {
    let mut lo = -1.0;
    let mut hi = 1.0;
    while count_below(g, mesh, hi)? <= index {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        if hi - lo <= 1e-14 * hi.abs().max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if count_below(g, mesh, mid)? > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The `count` smallest eigenvalues on a given mesh, ascending.
pub fn mesh_eigenvalues(g: &MetricGraph, mesh: &Mesh, count: usize) -> Result<Vec<f64>> {
    let nodes = mesh.node_count();
    if count + 1 > nodes {
        return Err(Error::CountTooLarge {
            requested: count,
            available: nodes.saturating_sub(1),
        });
    }
    if nodes <= DENSE_NODE_LIMIT {
        let mut all = dense_eigenvalues(&assemble_mesh(g, mesh.clone())?)?;
        all.truncate(count);
        return Ok(all);
    }
    (0..count).map(|i| bisect_eigenvalue(g, mesh, i)).collect()
}

/// The `count` smallest eigenvalues of the FEM discretization with mesh
/// size `h`, including `lambda_0 ~ 0`.
pub fn oracle_eigenvalues(g: &MetricGraph, h: f64, count: usize) -> Result<Vec<f64>> {
    mesh_eigenvalues(g, &Mesh::new(g, h)?, count)
}

/// Observed order of convergence of one eigenvalue under `h -> h/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConvergenceOrder {
    Order(f64),
    /// Both errors at round-off level; no order can be measured.
    RoundOff,
}

/// `log2(err(h) / err(h/2))` for eigenvalue `index` (0 = ground state),
/// using the secular solver as reference and a nested refinement.
pub fn convergence_order(g: &MetricGraph, h: f64, index: usize) -> Result<ConvergenceOrder> {
    let reference = metric::lowest_eigenvalues(g, index.max(1))?.lambdas_with_multiplicity()[index];
    let coarse = Mesh::new(g, h)?;
    let fine = coarse.refined();
    let e1 = mesh_eigenvalues(g, &coarse, index + 1)?[index] - reference;
    let e2 = mesh_eigenvalues(g, &fine, index + 1)?[index] - reference;
    let floor = 1e-10 * (1.0 + reference.abs());
    if e1.abs() <= floor || e2.abs() <= floor {
        return Ok(ConvergenceOrder::RoundOff);
    }
    Ok(ConvergenceOrder::Order((e1 / e2).abs().log2()))
}
