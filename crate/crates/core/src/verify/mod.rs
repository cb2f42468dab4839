//! Mechanical checks of how the spectral gap `lambda_1` responds to each
//! graph surgery. Eigenspace-wide conditions are evaluated on an
//! orthonormal basis; "can be chosen" conditions become kernel questions
//! for linear functionals on that basis.

mod deletion;
pub mod report;
mod surgery;

pub use deletion::{
    delete_criterion, interval_criterion, verify_delete, DeleteCriterion, TRIG_TOL,
};
pub use report::{
    gaps_equal, Claim, Hypothesis, Summary, Verdict, VerificationReport, EQUALITY_TOL,
    INEQUALITY_TOL,
};
pub use surgery::{
    flower_probe, lower_bound_check, verify_add_edge, verify_cut, verify_join, verify_long_edge,
    verify_pendant,
};

use crate::error::Result;
use crate::graph::MetricGraph;
use crate::metric::{eigenspace, lowest_eigenvalues, Eigenfunction};

/// Tolerance on eigenfunction values and traces, relative to the largest
/// coefficient in the basis.
pub const VALUE_TOL: f64 = 1e-7;

/// First positive eigenvalue with its wavenumber and multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gap {
    pub lambda: f64,
    pub k: f64,
    pub multiplicity: usize,
}

impl Gap {
    fn pair(&self) -> (f64, usize) {
        (self.lambda, self.multiplicity)
    }
}

pub fn spectral_gap(g: &MetricGraph) -> Result<Gap> {
    let s = lowest_eigenvalues(g, 1)?;
    let e = s.entries[1];
    Ok(Gap {
        lambda: e.lambda,
        k: e.k,
        multiplicity: e.multiplicity,
    })
}

/// The gap together with an orthonormal basis of its eigenspace.
struct GapSpace {
    gap: Gap,
    basis: Vec<Eigenfunction>,
}

impl GapSpace {
    fn of(g: &MetricGraph) -> Result<Self> {
        let gap = spectral_gap(g)?;
        let basis = eigenspace(g, gap.k)?;
        Ok(GapSpace { gap, basis })
    }

    /// Values of a linear functional on the basis members.
    fn functional(&self, f: impl Fn(&Eigenfunction) -> Result<f64>) -> Result<Vec<f64>> {
        self.basis.iter().map(f).collect()
    }

    fn tol(&self) -> f64 {
        VALUE_TOL
            * self
                .basis
                .iter()
                .map(Eigenfunction::scale)
                .fold(1.0, f64::max)
    }

    /// Whether some nonzero member of the space annihilates the
    /// functional with values `v` on the basis.
    fn has_kernel(&self, v: &[f64]) -> bool {
        v.len() >= 2 || norm(v) <= self.tol()
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// How a second functional `u` relates to `w` on the eigenspace, which
/// decides the range of `u^2 / w^2` over members with `w != 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Ratio {
    /// `w` vanishes on the whole space.
    Undefined,
    /// `u = t w`, so the ratio is the constant `t^2`.
    Constant(f64),
    /// `u` and `w` independent: every value in `[0, inf)` is attained.
    Unbounded,
}

fn ratio(u: &[f64], w: &[f64], tol: f64) -> Ratio {
    let nw = norm(w);
    if nw <= tol {
        return Ratio::Undefined;
    }
    let t = u.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() / (nw * nw);
    let residual = norm(&u.iter().zip(w).map(|(a, b)| a - t * b).collect::<Vec<_>>());
    if residual <= tol {
        Ratio::Constant(t * t)
    } else {
        Ratio::Unbounded
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn gap_examples() {
        let g = spectral_gap(&MetricGraph::interval(1.0).unwrap()).unwrap();
        assert!((g.lambda - PI * PI).abs() < 1e-9);
        assert_eq!(g.multiplicity, 1);
        let g = spectral_gap(&MetricGraph::circle(2.0 * PI).unwrap()).unwrap();
        assert!((g.lambda - 1.0).abs() < 1e-9);
        assert_eq!(g.multiplicity, 2);
        assert!(
            spectral_gap(&MetricGraph::from_edges(&[(0, 1, 1.0), (2, 3, 1.0)]).unwrap()).is_err()
        );
    }

    #[test]
    fn ratio_cases() {
        assert_eq!(ratio(&[1.0], &[0.0], 1e-9), Ratio::Undefined);
        match ratio(&[1.0, 2.0], &[2.0, 4.0], 1e-9) {
            Ratio::Constant(r) => assert!((r - 0.25).abs() < 1e-15),
            other => panic!("{other:?}"),
        }
        assert_eq!(ratio(&[1.0, 0.0], &[0.0, 1.0], 1e-9), Ratio::Unbounded);
    }
}
