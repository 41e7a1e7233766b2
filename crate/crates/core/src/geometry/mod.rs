//! Finite-window analysis of Delone sets contained in Z^d.

mod distance_transform;
pub mod feasibility;
mod pointset;
mod radii;
mod voronoi;
mod word_metric;

pub use distance_transform::HalfGridField;
pub use pointset::{PointSet, SpatialIndex};
pub use radii::{covering_estimate, packing_covering_radii, CoveringEstimate, DeloneRadii};
pub use voronoi::{
    first_return_vectors, first_return_vectors_with, voronoi_neighbors, voronoi_neighbors_with, FirstReturnSet,
    NeighborDiagnostics, NeighborGraph,
};
pub use word_metric::{f_diameter, f_distance, word_distance, word_distances};
