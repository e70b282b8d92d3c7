//! Planar convex bodies containing the origin: gauges, supporting lines,
//! boundary caps and covering numbers, and the chart/partition machinery
//! used to decompose the boundary into pieces of controlled curvature.

mod chart;
mod cover;
mod domain;
mod error;
pub mod geom;
mod smooth;

pub use chart::{boundary_chart, boundary_partition, chart_directions, BoundaryChart, BoundaryPartition, ChartShape, RefinedInterval};
pub use cover::{covering_number, minkowski_dimension_estimate, Cap, Cover};
pub use domain::{minkowski_functional, BoundaryPoint, ConvexDomain, DomainKind};
pub use error::ConvexError;
pub use smooth::smooth_approximation;

pub type Result<T> = std::result::Result<T, ConvexError>;
