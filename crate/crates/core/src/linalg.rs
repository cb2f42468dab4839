//! Small dense kernels: cyclic Jacobi for symmetric eigenproblems, one-sided
//! Jacobi SVD and a determinant sign. Matrices here are at most a few dozen
//! rows (secular matrices, discrete Laplacians) or moderate FEM blocks.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a symmetric matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in the order of `values`.
    pub vectors: DMatrix<f64>,
}

fn frobenius(a: &DMatrix<f64>) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Rejects matrices whose asymmetry exceeds `1e-12 * ||A||_F`.
pub fn check_symmetric(a: &DMatrix<f64>) -> Result<()> {
    assert!(a.is_square(), "symmetric check on a non-square matrix");
    let n = a.nrows();
    let norm = frobenius(a);
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((a[(i, j)] - a[(j, i)]).abs());
        }
    }
    if worst > 1e-12 * norm {
        return Err(Error::NotSymmetric(worst));
    }
    Ok(())
}

/// Cyclic Jacobi rotations until the off-diagonal norm drops below
/// `1e-15 * ||A||_F`.
pub fn symmetric_eigen(a: &DMatrix<f64>) -> Result<SymmetricEigen> {
    check_symmetric(a)?;
    let n = a.nrows();
    // symmetrize exactly so rotations act on a truly symmetric matrix
    let mut m = DMatrix::from_fn(n, n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)]));
    let mut v = DMatrix::<f64>::identity(n, n);
    let norm = frobenius(&m);
    if norm == 0.0 {
        return Ok(SymmetricEigen {
            values: vec![0.0; n],
            vectors: v,
        });
    }

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[(p, q)] * m[(p, q)];
            }
        }
        if off.sqrt() <= 1e-15 * norm {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(SymmetricEigen { values, vectors })
}

/// All eigenvalues of a symmetric matrix, ascending.
pub fn eigenvalues_sym(a: &DMatrix<f64>) -> Result<Vec<f64>> {
    symmetric_eigen(a).map(|e| e.values)
}

/// Singular values (ascending) and the matching right singular vectors.
#[derive(Debug, Clone)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    /// Right singular vectors as columns, in the order of `singular_values`.
    pub right: DMatrix<f64>,
}

impl Svd {
    pub fn sigma_min(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    pub fn sigma_max(&self) -> f64 {
        self.singular_values.last().copied().unwrap_or(0.0)
    }
}

/// One-sided (Hestenes) Jacobi SVD. Small singular values come out with
/// absolute accuracy of order `eps * sigma_max`, which the secular root
/// refinement relies on.
pub fn svd(a: &DMatrix<f64>) -> Svd {
    let (rows, cols) = a.shape();
    let mut u = a.clone();
    let mut v = DMatrix::<f64>::identity(cols, cols);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..cols {
            for j in (i + 1)..cols {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = 0.0;
                for r in 0..rows {
                    let x = u[(r, i)];
                    let y = u[(r, j)];
                    alpha += x * x;
                    beta += y * y;
                    gamma += x * y;
                }
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for r in 0..rows {
                    let x = u[(r, i)];
                    let y = u[(r, j)];
                    u[(r, i)] = c * x - s * y;
                    u[(r, j)] = s * x + c * y;
                }
                for r in 0..cols {
                    let x = v[(r, i)];
                    let y = v[(r, j)];
                    v[(r, i)] = c * x - s * y;
                    v[(r, j)] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..cols).map(|c| u.column(c).norm()).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| norms[i].total_cmp(&norms[j]).then(i.cmp(&j)));
    Svd {
        singular_values: order.iter().map(|&i| norms[i]).collect(),
        right: DMatrix::from_fn(cols, cols, |r, c| v[(r, order[c])]),
    }
}

/// Sign of the determinant via LU with partial pivoting: -1, 0 or +1.
pub fn det_sign(a: &DMatrix<f64>) -> i8 {
    let det = a.clone().lu().determinant();
    if det > 0.0 {
        1
    } else if det < 0.0 {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_char_poly_roots_3x3(a: &DMatrix<f64>) -> Vec<f64> {
        // scan det(A - x I) on a fine grid and bisect sign changes
        let det = |x: f64| (a - DMatrix::identity(3, 3) * x).determinant();
        let mut roots = Vec::new();
        let mut lo = -10.0;
        let step = 1e-3;
        while lo < 10.0 {
            let hi = lo + step;
            let (flo, fhi) = (det(lo), det(hi));
            if flo == 0.0 {
                roots.push(lo);
            } else if flo * fhi < 0.0 {
                let (mut l, mut h) = (lo, hi);
                for _ in 0..80 {
                    let mid = 0.5 * (l + h);
                    if det(l) * det(mid) <= 0.0 {
                        h = mid;
                    } else {
                        l = mid;
                    }
                }
                roots.push(0.5 * (l + h));
            }
            lo = hi;
        }
        roots
    }

    #[test]
    fn path_p3_eigenvalues() {
        let l = DMatrix::from_row_slice(3, 3, &[1.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 1.0]);
        let oracle = brute_char_poly_roots_3x3(&l);
        assert_eq!(oracle.len(), 3);
        let vals = eigenvalues_sym(&l).unwrap();
        for (got, want) in vals.iter().zip([0.0, 1.0, 3.0]) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        for (got, want) in vals.iter().zip(&oracle) {
            assert!((got - want).abs() < 1e-9);
        }
    }

    #[test]
    fn complete_k3_has_double_eigenvalue() {
        let l = DMatrix::from_row_slice(3, 3, &[2.0, -1.0, -1.0, -1.0, 2.0, -1.0, -1.0, -1.0, 2.0]);
        let vals = eigenvalues_sym(&l).unwrap();
        assert!(vals[0].abs() < 1e-12);
        assert!((vals[1] - 3.0).abs() < 1e-12);
        assert!((vals[2] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn zero_matrix() {
        let vals = eigenvalues_sym(&DMatrix::zeros(4, 4)).unwrap();
        assert_eq!(vals, vec![0.0; 4]);
    }

    #[test]
    fn rejects_asymmetric_input() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(eigenvalues_sym(&a), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn eigenvectors_are_orthonormal_and_diagonalize() {
        let a = DMatrix::from_row_slice(
            4,
            4,
            &[
                4.0, 1.0, 0.5, 0.0, 1.0, 3.0, 0.2, 0.1, 0.5, 0.2, 2.0, 0.3, 0.0, 0.1, 0.3, 1.0,
            ],
        );
        let e = symmetric_eigen(&a).unwrap();
        let vt_v = e.vectors.transpose() * &e.vectors;
        assert!((vt_v - DMatrix::identity(4, 4)).norm() < 1e-12);
        let d = e.vectors.transpose() * &a * &e.vectors;
        for i in 0..4 {
            assert!((d[(i, i)] - e.values[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn svd_matches_symmetric_eigen_of_gram() {
        let a = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 0.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0]);
        let s = svd(&a);
        let gram = a.transpose() * &a;
        let ev = eigenvalues_sym(&gram).unwrap();
        for (sig, lam) in s.singular_values.iter().zip(ev) {
            assert!((sig * sig - lam).abs() < 1e-10);
        }
        // A v = sigma u with |u| = 1
        for c in 0..3 {
            let av = &a * s.right.column(c);
            assert!((av.norm() - s.singular_values[c]).abs() < 1e-12);
        }
    }

    #[test]
    fn svd_detects_rank_deficiency() {
        let a = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 1.0, 0.0, 1.0]);
        let s = svd(&a);
        assert!(s.sigma_min() < 1e-14 * s.sigma_max());
        let null = s.right.column(0);
        assert!((&a * null).norm() < 1e-13);
    }

    #[test]
    fn det_sign_basics() {
        assert_eq!(det_sign(&DMatrix::identity(3, 3)), 1);
        assert_eq!(
            det_sign(&DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])),
            -1
        );
        assert_eq!(det_sign(&DMatrix::zeros(2, 2)), 0);
    }
}
