//! Standard Laplacian on metric graphs through the secular matrix.

mod eigenfunction;
mod secular;
mod spectrum;

pub use eigenfunction::{eigenspace, EdgeTrace, Eigenfunction, RESIDUAL_TOL};
pub use secular::{secular_indicator, secular_matrix, SecularIndicator, SecularMatrix};
pub use spectrum::{
    eigenvalues, lowest_eigenvalues, weyl_count_check, Spectrum, SpectrumEntry, K_GROUND, K_MIN,
    MERGE_TOL, NULL_TOL,
};
