//! Uniform cell-centred grids, sampled functions on them, and the scalar
//! quantities every other crate in the workspace builds on: Lebesgue and
//! weak Lebesgue norms and the Hardy-Littlewood maximal function.

mod error;
mod generator;
mod maximal;
mod norms;
mod sampled;

pub use error::GridError;
pub use generator::{parse_function_spec, parse_function_spec_2d, FunctionSpec, Generator};
pub use maximal::{centered_maximal, hl_maximal, hl_maximal_with, HlMode};
pub use norms::{lp_norm, weak_lp_quasinorm};
pub use sampled::{Grid, Sampled2d, SampledFunction};

pub type Result<T> = std::result::Result<T, GridError>;
