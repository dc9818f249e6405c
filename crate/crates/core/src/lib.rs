//! Exact computation of Tukey depth for points and flats, depth histograms,
//! feasibility of candidate histograms, counting and enumeration of feasible
//! histograms, and construction of point sets realizing them.
//!
//! Everything runs on arbitrary-precision rational arithmetic; there are no
//! floating-point predicates and no epsilons. Inputs are desk-scale point
//! sets (up to a few dozen points), for which exhaustive exact enumeration
//! beats clever approximate algorithms.

pub mod depth;
pub mod error;
pub mod geometry;
pub mod histogram;
mod linalg;
pub mod oracle;
pub mod rational;
pub mod realize;

pub use depth::{
    affine_depth, convex_depth, depth_histogram, tukey_depth, tukey_depth_multiset, DepthHistogram,
    DepthMode, FlatSpec, MultisetPoint,
};
pub use error::{Error, Result};
pub use geometry::{
    approx_regular_polygon, is_general_position, orientation, random_point_set, side_partition,
    Direction, Point, PointSet, SidePartition, Sign,
};
pub use histogram::{
    binomial, check_convex_cross_necessary, check_kflat_necessary, count_recurrence,
    count_recurrence_size_sum, count_total, count_with_max_depth, enumerate_valid,
    max_depth_bound, simplesum_identity_check, truncate, validate_point_histogram,
    CandidateHistogram, CountValue,
};
pub use oracle::{
    directed_j_edge_histogram, sweep_depth_oracle_2d, tukey_depth_oracle_3d, DepthQuery,
};
pub use rational::{format_rational, parse_rational, Rational};
pub use realize::{
    classify_configuration, find_push_directions, induced_spherical, push_to_depth, realize,
    stereographic_to_lower, ConfigKind, PushEvent, RealizationStep, RealizationTrace,
};
