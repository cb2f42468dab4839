//! Spectra of standard (Kirchhoff) Laplacians on compact metric graphs and
//! of discrete graph Laplacians, graph surgeries, and numerical checks of
//! how the spectral gap responds to each surgery.

pub mod discrete;
pub mod error;
pub mod fem;
pub mod graph;
pub mod linalg;
pub mod metric;
pub mod random;
pub mod suite;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{DiscreteGraph, Edge, EdgeId, MetricGraph, SurgeryOp, VertexId};
