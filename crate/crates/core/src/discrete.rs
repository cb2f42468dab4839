//! Laplacian matrices of simple discrete graphs and the algebraic
//! connectivity under edge and pendant additions.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::DiscreteGraph;
use crate::linalg::{symmetric_eigen, SymmetricEigen};
use crate::verify::report::{Claim, Hypothesis, VerificationReport};

/// Eigenvalues within `EIGENSPACE_TOL * (1 + |lambda|)` are one eigenspace.
pub const EIGENSPACE_TOL: f64 = 1e-8;

/// Threshold on unit-vector entries for "vanishes" / "equal values".
pub const VECTOR_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaplacianKind {
    /// `L = V - C`
    Standard,
    /// `V^{-1/2} L V^{-1/2}`
    Normalized,
    /// `V^{-1} L`, not symmetric in general.
    Averaging,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianMatrix {
    pub kind: LaplacianKind,
    pub matrix: DMatrix<f64>,
}

pub fn laplacian(g: &DiscreteGraph, kind: LaplacianKind) -> Result<LaplacianMatrix> {
    let m = g.vertex_count();
    let mut l = DMatrix::<f64>::zeros(m, m);
    for (a, b) in g.edges() {
        l[(a, b)] -= 1.0;
        l[(b, a)] -= 1.0;
        l[(a, a)] += 1.0;
        l[(b, b)] += 1.0;
    }
    if kind != LaplacianKind::Standard {
        if let Some(v) = (0..m).find(|&v| l[(v, v)] == 0.0) {
            return Err(Error::IsolatedVertex(v));
        }
    }
    let valency: Vec<f64> = (0..m).map(|v| l[(v, v)]).collect();
    let matrix = match kind {
        LaplacianKind::Standard => l,
        LaplacianKind::Normalized => {
            DMatrix::from_fn(m, m, |i, j| l[(i, j)] / (valency[i] * valency[j]).sqrt())
        }
        LaplacianKind::Averaging => DMatrix::from_fn(m, m, |i, j| l[(i, j)] / valency[i]),
    };
    Ok(LaplacianMatrix { kind, matrix })
}

/// Eigenvalues ascending with orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct DiscreteSpectrum {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

impl DiscreteSpectrum {
    pub fn gap(&self) -> f64 {
        self.values.get(1).copied().unwrap_or(0.0)
    }

    /// Columns spanning the eigenspace of `values[1]`.
    pub fn gap_eigenspace(&self) -> Vec<DVector<f64>> {
        let lam = self.gap();
        self.values
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, &x)| (x - lam).abs() <= EIGENSPACE_TOL * (1.0 + lam.abs()))
            .map(|(i, _)| self.vectors.column(i).into_owned())
            .collect()
    }

    /// Number of eigenvalues within tolerance of zero.
    pub fn zero_multiplicity(&self) -> usize {
        self.values
            .iter()
            .filter(|&&x| x.abs() <= EIGENSPACE_TOL)
            .count()
    }
}

/// Spectrum of the standard Laplacian `L = V - C`.
pub fn spectrum(g: &DiscreteGraph) -> Result<DiscreteSpectrum> {
    let l = laplacian(g, LaplacianKind::Standard)?;
    let SymmetricEigen { values, vectors } = symmetric_eigen(&l.matrix)?;
    Ok(DiscreteSpectrum { values, vectors })
}

/// Largest residual `|A v - mu v| / |v|` over the vectors `v = V^{-1/2} u`
/// built from normalized-Laplacian eigenpairs `(mu, u)`. A small value
/// shows the averaging and normalized Laplacians share their spectrum.
pub fn averaging_similarity_residual(g: &DiscreteGraph) -> Result<f64> {
    let normalized = laplacian(g, LaplacianKind::Normalized)?;
    let averaging = laplacian(g, LaplacianKind::Averaging)?;
    let eig = symmetric_eigen(&normalized.matrix)?;
    let m = g.vertex_count();
    let mut worst = 0.0f64;
    for (c, &mu) in eig.values.iter().enumerate() {
        let v = DVector::from_fn(m, |i, _| eig.vectors[(i, c)] / (g.valency(i) as f64).sqrt());
        let r = &averaging.matrix * &v - &v * mu;
        worst = worst.max(r.norm() / v.norm());
    }
    Ok(worst)
}

fn require_connected(g: &DiscreteGraph) -> Result<()> {
    if g.is_connected() {
        Ok(())
    } else {
        Err(Error::Disconnected)
    }
}

fn digest(g: &DiscreteGraph) -> String {
    let edges: Vec<String> = g.edges().map(|(a, b)| format!("{a}-{b}")).collect();
    format!("M{}:{}", g.vertex_count(), edges.join(","))
}

fn gap_multiplicity(s: &DiscreteSpectrum) -> usize {
    s.gap_eigenspace().len()
}

/// Adding the edge `m1 m2` cannot lower the gap; equality iff some gap
/// eigenvector takes equal values at `m1` and `m2`.
pub fn check_discrete_add(g: &DiscreteGraph, m1: usize, m2: usize) -> Result<VerificationReport> {
    require_connected(g)?;
    if m1 != m2 && g.is_adjacent(m1, m2) {
        return Err(Error::AlreadyAdjacent(m1, m2));
    }
    let after_graph = g.with_edge(m1, m2)?;
    let before = spectrum(g)?;
    let after = spectrum(&after_graph)?;
    let space = before.gap_eigenspace();
    // the functional psi -> psi(m1) - psi(m2) has a nontrivial kernel on
    // any space of dimension >= 2
    let max_diff = space
        .iter()
        .map(|v| (v[m1] - v[m2]).abs())
        .fold(0.0, f64::max);
    let diagnostic = space.len() >= 2 || max_diff < VECTOR_TOL;

    let mut report = VerificationReport::new(
        "discrete-add",
        digest(g),
        format!("add:{m1},{m2}"),
        (before.gap(), gap_multiplicity(&before)),
        (after.gap(), gap_multiplicity(&after)),
        Claim::NonDecreasing,
        Hypothesis::Satisfied,
    )
    .with_quantity("eigenspace_dim", space.len() as f64)
    .with_quantity("max_abs_value_difference", max_diff);
    report.equality_observed = equal_discrete(before.gap(), after.gap());
    report.equality_diagnostic = Some(diagnostic);
    report.diagnostic_consistent = Some(diagnostic == report.equality_observed);
    Ok(report)
}

/// A pendant vertex at `m1` cannot raise the gap; equality iff every gap
/// eigenvector vanishes at `m1`.
pub fn check_discrete_pendant(g: &DiscreteGraph, m1: usize) -> Result<VerificationReport> {
    require_connected(g)?;
    let after_graph = g.with_pendant(m1)?;
    let before = spectrum(g)?;
    let after = spectrum(&after_graph)?;
    let space = before.gap_eigenspace();
    let max_value = space.iter().map(|v| v[m1].abs()).fold(0.0, f64::max);
    let diagnostic = max_value < VECTOR_TOL;

    let mut report = VerificationReport::new(
        "discrete-pendant",
        digest(g),
        format!("pendant:{m1}"),
        (before.gap(), gap_multiplicity(&before)),
        (after.gap(), gap_multiplicity(&after)),
        Claim::NonIncreasing,
        Hypothesis::Satisfied,
    )
    .with_quantity("eigenspace_dim", space.len() as f64)
    .with_quantity("max_abs_value_at_vertex", max_value);
    report.equality_observed = equal_discrete(before.gap(), after.gap());
    report.equality_diagnostic = Some(diagnostic);
    report.diagnostic_consistent = Some(diagnostic == report.equality_observed);
    Ok(report)
}

fn equal_discrete(a: f64, b: f64) -> bool {
    (a - b).abs() <= EIGENSPACE_TOL * (1.0 + a.abs())
}
