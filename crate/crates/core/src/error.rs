use crate::chart::ChartError;
use crate::defect::DefectError;
use crate::matrix::MatrixError;
use crate::parse::ParseError;
use crate::structure::StructureError;
use crate::tensor::TensorError;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Defect(#[from] DefectError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("{0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
