use bkm_grid::GridError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KakeyaError {
    #[error("degenerate rectangle: {0}")]
    DegenerateRectangle(String),
    #[error("bad parameter {name} = {value}")]
    BadParameter { name: &'static str, value: f64 },
    #[error("direction set is empty")]
    EmptyDirections,
    #[error("direction ({0}, {1}) cannot be normalized")]
    BadDirection(f64, f64),
    #[error(transparent)]
    Grid(#[from] GridError),
}
