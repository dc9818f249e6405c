//! Shared fixtures for the benchmark targets.

use tukey_core::{random_point_set, PointSet};

/// Deterministic general-position benchmark instance.
pub fn fixture(n: usize, d: usize, seed: u64) -> PointSet {
    random_point_set(n, d, seed, 1000).expect("benchmark fixture exists")
}
