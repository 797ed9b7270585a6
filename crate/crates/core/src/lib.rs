//! Symbolic verification of Jacobi, contact and locally conformally
//! symplectic geometry on a single coordinate chart.
//!
//! Scalar fields are exact expression DAGs ([`ScalarField`]); tensors are
//! arrays of them ([`TensorField`], [`MatrixField`]). Every identity is
//! checked by building its defect symbolically and evaluating it at seeded
//! random points of the chart box.

pub mod builtin;
pub mod chart;
pub mod compat;
pub mod contact_lcs;
pub mod defect;
pub mod error;
pub mod expr;
pub mod frame;
pub mod jacobi;
pub mod matrix;
pub mod metric;
pub mod parse;
pub mod random;
pub mod structure;
pub mod tensor;

pub use chart::{Chart, Sampler, DEFAULT_POINTS, DEFAULT_SEED};
pub use defect::{Measurement, Tolerance};
pub use error::{Error, Result};
pub use expr::ScalarField;
pub use jacobi::{AlgebroidData, JacobiPair};
pub use matrix::{MatrixField, MatrixRole};
pub use metric::{ConnectionPack, ContravariantPack, MetricStructure};
pub use parse::parse_scalar;
pub use structure::{Entry, EntrySource, Kind, StructureSet};
pub use tensor::{TensorField, Variance};
