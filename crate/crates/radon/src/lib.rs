//! Spatial link discovery: computes DE-9IM topological relations between a
//! source and a target set of vector geometries using ETH-based swapping,
//! optimized sparse space tiling, and bounding-box filtering, with a
//! brute-force oracle and a parallel execution mode.

pub mod dataset;
pub mod executor;
pub mod geom;
pub mod io;
pub mod linker;
#[cfg(feature = "oracle")]
pub mod oracle;
pub mod relation;
pub mod tiling;

pub use dataset::{Dataset, Resource, Role};
pub use executor::ExecutorConfig;
pub use geom::{parse_wkt, De9imMatrix, Geometry, Mbb, Point, EPS};
pub use linker::{brute_force_link, link, LinkConfig, Mapping, RunStats};
pub use relation::{test_mbb, FilterVerdict, Relation};
