use thiserror::Error;

use crate::graph::{EdgeId, VertexId};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("non-positive length {0}")]
    NonPositiveLength(f64),

    #[error("vertex {0} does not exist")]
    MissingVertex(VertexId),

    #[error("edge {0} does not exist")]
    MissingEdge(EdgeId),

    #[error("cannot glue vertex {0} to itself")]
    IdenticalVertices(VertexId),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("operation disconnects the graph")]
    Disconnects,

    #[error("{what} = {value} lies outside the admissible range {range}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        range: String,
    },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("matrix is not symmetric (asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("vertex {0} is isolated; normalized Laplacians need positive valencies")]
    IsolatedVertex(usize),

    #[error("vertices {0} and {1} are already adjacent")]
    AlreadyAdjacent(usize, usize),

    #[error("discrete graph is not simple: {0}")]
    NotSimple(String),

    #[error("wavenumber must be positive, got {0}")]
    NonPositiveWavenumber(f64),

    #[error("k = {k} is not an eigenvalue (relative sigma_min {sigma:e})")]
    NotEigenvalue { k: f64, sigma: f64 },

    #[error("secular scan failed to resolve a root in [{lo}, {hi}]")]
    ScanFailure { lo: f64, hi: f64 },

    #[error("eigenfunction residual {0:e} exceeds tolerance")]
    Residual(f64),

    #[error("requested {requested} eigenvalues but only {available} are available")]
    CountTooLarge { requested: usize, available: usize },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
}
