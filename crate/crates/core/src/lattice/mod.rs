//! Site percolation samples on a rectangular grid and their clusters.
//!
//! Sites are addressed row-major with row 0 at the bottom edge, where the
//! two anchor sites live: `index = row * width + col`.

mod boundary;
mod labels;
mod occupancy;
mod spec;
mod union_find;

pub use boundary::{boundary_partition, BoundaryPartition, PerimeterClass};
pub use labels::{label_clusters, ClusterFlags, ClusterLabeler, ClusterLabels, Run};
pub use occupancy::{sample_occupancy, OccupancyGrid, SampleSeed};
pub use spec::{BoundaryMode, LatticeSpec};
pub use union_find::UnionFind;
