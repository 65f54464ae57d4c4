//! Clustering-based fusion that stays consistent when nodes see different
//! parts of the surveillance region.
//!
//! Plain GCI multiplies densities, so a target seen by only one node is
//! annihilated; plain AA averages, so the same target has its weight halved.
//! Both failures come from fusing regions that only one node can observe.
//! The pipeline here avoids that:
//!
//! 1. [`cluster_components`] groups the Gaussian components of all nodes so
//!    that components from different groups are far apart in corrected
//!    Mahalanobis distance.
//! 2. [`split_by_clusters`] turns every group into a small IID cluster
//!    density per node, with a multi-Bernoulli cardinality reconstructed from
//!    the component weights.
//! 3. [`fuse_cluster`] fuses a group when two nodes populate it and passes it
//!    through untouched when only one does.
//! 4. The fused groups are summed (intensity) and convolved (cardinality).
//!
//! [`robust_fuse`] runs all four steps. The [`bound`] module quantifies the
//! approximation error introduced by splitting a mixture along the clusters.

pub mod bound;
mod clustering;
mod distance;
mod pipeline;
mod split;

pub use bound::{chi2_cdf, error_bound_report, split_error_bound, BoundEntry, Ellipsoid, ErrorBoundReport};
pub use clustering::{cluster_components, ClusterPartition};
pub use distance::{corrected_mahalanobis, GcIndex};
pub use pipeline::{fuse_cluster, robust_fuse, RobustFusion};
pub use split::{split_by_clusters, SubCardinality, SubIidCluster};
