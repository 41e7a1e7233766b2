//! Combinatorial data of a nested sequence of return sets: Voronoi patch
//! partitions, patch diameters, well-distributedness and recursive
//! addressing.

mod address;
mod data;
mod partition;

pub use partition::{voronoi_partition, voronoi_partition_with, Partition, TieBreak};
pub use address::{address, composite_patch, reachable, verify_address, Address};
pub use data::{
    build_data, check_well_distributed, k_constant, linear_recurrence_from, linear_recurrence_report,
    thin_to_well_distributed, CombinatorialData, HierarchyOptions, Level, LinearRecurrenceReport, ThinningReport,
    WellDistributedLevel, WellDistributedReport,
};
