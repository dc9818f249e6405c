//! Exact Tukey depth of points and of flats spanned by subsets, plus full
//! depth histograms.
//!
//! Point depth is computed combinatorially: the minimum over hyperplanes
//! through the query and `d-1` other points of one plus the smaller open
//! side count. Flat depth reduces to a multiset point depth in the
//! orthogonal complement of the flat's direction space. The multiset and
//! convex cases share one exact minimization kernel over candidate
//! directions, with boundary ties resolved by recursing into the orthogonal
//! complement (an exact symbolic perturbation).

use std::collections::{HashMap, HashSet};

use itertools::Itertools;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::geometry::{
    canonical_integer_vector, is_general_position, orientation, rot90, Point, PointSet, Sign,
};
use crate::linalg;
use crate::rational::Rational;

/// Whether a flat query measures halfspaces containing the whole affine
/// hull or just the convex hull of the spanning points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DepthMode {
    Affine,
    Convex,
}

impl std::fmt::Display for DepthMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DepthMode::Affine => write!(f, "affine"),
            DepthMode::Convex => write!(f, "convex"),
        }
    }
}

/// A `(k+1)`-subset of point indices spanning a `k`-flat.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FlatSpec {
    indices: Vec<usize>,
}

impl FlatSpec {
    pub fn new(mut indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::input("a flat needs at least one spanning point"));
        }
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::input("flat indices must be distinct"));
        }
        Ok(FlatSpec { indices })
    }

    /// Dimension of the spanned flat.
    pub fn k(&self) -> usize {
        self.indices.len() - 1
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    fn validate(&self, set: &PointSet) -> Result<()> {
        for &i in &self.indices {
            set.check_index(i)?;
        }
        if self.k() >= set.dim() {
            return Err(Error::input(format!(
                "flat dimension {} must be below the ambient dimension {}",
                self.k(),
                set.dim()
            )));
        }
        Ok(())
    }
}

/// A point location with a positive multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultisetPoint {
    pub point: Point,
    pub multiplicity: u64,
}

impl MultisetPoint {
    pub fn new(point: Point, multiplicity: u64) -> Result<Self> {
        if multiplicity == 0 {
            return Err(Error::input("multiplicity must be at least 1"));
        }
        Ok(MultisetPoint { point, multiplicity })
    }
}

/// Depth histogram: `entries[i]` counts the flats of depth `i+1` (depths are
/// 1-indexed). Canonical form keeps the last entry nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthHistogram {
    entries: Vec<u64>,
    k: usize,
    d: usize,
    mode: DepthMode,
}

impl DepthHistogram {
    fn from_buckets(buckets: &HashMap<u32, u64>, k: usize, d: usize, mode: DepthMode) -> Self {
        let max_depth = buckets.keys().copied().max().unwrap_or(0) as usize;
        let mut entries = vec![0u64; max_depth];
        for (&depth, &count) in buckets {
            entries[depth as usize - 1] = count;
        }
        DepthHistogram { entries, k, d, mode }
    }

    /// Entries indexed from depth 1; the last entry is nonzero.
    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    /// Count of flats at the given 1-indexed depth.
    pub fn at_depth(&self, depth: u32) -> u64 {
        self.entries.get(depth as usize - 1).copied().unwrap_or(0)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn mode(&self) -> DepthMode {
        self.mode
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().sum()
    }

    pub fn max_depth(&self) -> u32 {
        self.entries.len() as u32
    }
}

fn ensure_general_position(set: &PointSet) -> Result<()> {
    if !is_general_position(set) {
        return Err(Error::degenerate("point set is not in general position"));
    }
    Ok(())
}

/// Tukey depth of the point `set[q_index]`: the minimum number of points of
/// the set in a closed halfspace containing it.
pub fn tukey_depth(set: &PointSet, q_index: usize) -> Result<u32> {
    set.check_index(q_index)?;
    ensure_general_position(set)?;
    tukey_depth_unchecked(set, q_index)
}

/// Depth without the general-position precheck; callers guarantee it.
pub(crate) fn tukey_depth_unchecked(set: &PointSet, q_index: usize) -> Result<u32> {
    let d = set.dim();
    let n = set.len();
    if n <= d {
        return Ok(1);
    }
    let q = set.point(q_index);
    let others: Vec<usize> = (0..n).filter(|&i| i != q_index).collect();
    let mut best = u32::MAX;
    for subset in others.iter().copied().combinations(d - 1) {
        let mut simplex: Vec<&Point> = Vec::with_capacity(d + 1);
        simplex.push(q);
        for &i in &subset {
            simplex.push(set.point(i));
        }
        simplex.push(q); // placeholder, replaced per point below
        let (mut above, mut below) = (0u32, 0u32);
        for &i in &others {
            if subset.contains(&i) {
                continue;
            }
            simplex[d] = set.point(i);
            match orientation(&simplex)? {
                Sign::Positive => above += 1,
                Sign::Negative => below += 1,
                Sign::Zero => {
                    return Err(Error::degenerate(
                        "point on a query hyperplane; set is not in general position",
                    ))
                }
            }
        }
        best = best.min(1 + above.min(below));
    }
    Ok(best)
}

/// Minimum over nonzero directions `v` of the total multiplicity of points
/// `p` with `<v,p> >= min_a <v,a>` over the anchors. Ties on the boundary
/// are resolved exactly by minimizing recursively inside the boundary
/// hyperplane. Anchors themselves are not counted.
fn min_halfspace_count(
    points: &[(Vec<Rational>, u64)],
    anchors: &[Vec<Rational>],
    dim: usize,
) -> u64 {
    debug_assert!(!anchors.is_empty());
    if points.is_empty() {
        return 0;
    }
    if dim == 1 {
        let lo = anchors.iter().map(|a| a[0].clone()).min().unwrap();
        let hi = anchors.iter().map(|a| a[0].clone()).max().unwrap();
        let up: u64 = points.iter().filter(|(p, _)| p[0] >= lo).map(|(_, m)| m).sum();
        let down: u64 = points.iter().filter(|(p, _)| p[0] <= hi).map(|(_, m)| m).sum();
        return up.min(down);
    }

    // Directions only matter through their signs against these differences.
    let mut diffs: Vec<Vec<Rational>> = Vec::new();
    let mut seen_diff: HashSet<Vec<Rational>> = HashSet::new();
    {
        let locations = points
            .iter()
            .map(|(p, _)| p)
            .chain(anchors.iter())
            .collect::<Vec<_>>();
        for a in anchors {
            for x in &locations {
                let delta = linalg::sub(x, a);
                if linalg::is_zero_vec(&delta) {
                    continue;
                }
                let mut canon = canonical_integer_vector(&delta);
                if let Some(first) = canon.iter().find(|c| !c.is_zero()) {
                    if *first < Rational::zero() {
                        canon = linalg::neg(&canon);
                    }
                }
                if seen_diff.insert(canon.clone()) {
                    diffs.push(canon);
                }
            }
        }
    }
    debug_assert!(!diffs.is_empty());

    let r = linalg::rank(&diffs);
    if r < dim {
        // All relevant geometry lives in a proper subspace; restrict to it.
        let mut basis: Vec<Vec<Rational>> = Vec::new();
        for v in &diffs {
            let mut trial = basis.clone();
            trial.push(v.clone());
            if linalg::rank(&trial) > basis.len() {
                basis = trial;
                if basis.len() == r {
                    break;
                }
            }
        }
        let origin = anchors[0].clone();
        let to_coords = |x: &[Rational]| -> Vec<Rational> {
            let delta = linalg::sub(x, &origin);
            solve_in_basis(&basis, &delta)
        };
        let sub_points: Vec<(Vec<Rational>, u64)> =
            points.iter().map(|(p, m)| (to_coords(p), *m)).collect();
        let sub_anchors: Vec<Vec<Rational>> = anchors.iter().map(|a| to_coords(a)).collect();
        return min_halfspace_count(&sub_points, &sub_anchors, r);
    }

    let mut candidates: HashSet<Vec<Rational>> = HashSet::new();
    for subset in diffs.iter().combinations(dim - 1) {
        let rows: Vec<Vec<Rational>> = subset.iter().map(|v| (*v).clone()).collect();
        if linalg::rank(&rows) != dim - 1 {
            continue;
        }
        let normal = linalg::nullspace(&rows)
            .into_iter()
            .next()
            .expect("rank dim-1 leaves a one-dimensional null space");
        let mut canon = canonical_integer_vector(&normal);
        if let Some(first) = canon.iter().find(|c| !c.is_zero()) {
            if *first < Rational::zero() {
                canon = linalg::neg(&canon);
            }
        }
        candidates.insert(canon);
    }

    let mut best = u64::MAX;
    for base in &candidates {
        for v in [base.clone(), linalg::neg(base)] {
            let anchor_vals: Vec<Rational> = anchors.iter().map(|a| linalg::dot(&v, a)).collect();
            let threshold = anchor_vals.iter().min().unwrap().clone();
            let mut strict = 0u64;
            let mut tied_points: Vec<(Vec<Rational>, u64)> = Vec::new();
            for (p, m) in points {
                let val = linalg::dot(&v, p);
                if val > threshold {
                    strict += m;
                } else if val == threshold {
                    tied_points.push((p.clone(), *m));
                }
            }
            let value = if tied_points.is_empty() {
                strict
            } else {
                let tied_anchors: Vec<Vec<Rational>> = anchors
                    .iter()
                    .zip(&anchor_vals)
                    .filter(|(_, val)| **val == threshold)
                    .map(|(a, _)| a.clone())
                    .collect();
                let basis = linalg::nullspace(std::slice::from_ref(&v));
                let origin = tied_anchors[0].clone();
                let to_coords = |x: &[Rational]| -> Vec<Rational> {
                    let delta = linalg::sub(x, &origin);
                    solve_in_basis(&basis, &delta)
                };
                let sub_points: Vec<(Vec<Rational>, u64)> =
                    tied_points.iter().map(|(p, m)| (to_coords(p), *m)).collect();
                let sub_anchors: Vec<Vec<Rational>> =
                    tied_anchors.iter().map(|a| to_coords(a)).collect();
                strict + min_halfspace_count(&sub_points, &sub_anchors, dim - 1)
            };
            best = best.min(value);
        }
    }
    debug_assert_ne!(best, u64::MAX);
    best
}

/// Coordinates of `x` in the given independent basis (rows); `x` must lie in
/// the span.
fn solve_in_basis(basis: &[Vec<Rational>], x: &[Rational]) -> Vec<Rational> {
    let dim = x.len();
    let cols = basis.len();
    let mut matrix = vec![vec![Rational::zero(); cols]; dim];
    for (j, b) in basis.iter().enumerate() {
        for i in 0..dim {
            matrix[i][j] = b[i].clone();
        }
    }
    linalg::solve(&matrix, x).expect("vector lies in the span of the basis")
}

/// Tukey depth of `q` in a multiset of weighted locations: the minimum total
/// multiplicity of a closed halfspace containing `q`.
pub fn tukey_depth_multiset(multiset: &[MultisetPoint], q: &Point) -> Result<u32> {
    if multiset.is_empty() {
        return Err(Error::input("empty multiset"));
    }
    let dim = q.dim();
    if dim == 0 {
        return Err(Error::input("dimension must be at least 1"));
    }
    let mut merged: Vec<(Point, u64)> = Vec::new();
    for mp in multiset {
        if mp.point.dim() != dim {
            return Err(Error::input("multiset points of mixed dimension"));
        }
        if mp.multiplicity == 0 {
            return Err(Error::input("multiplicity must be at least 1"));
        }
        match merged.iter_mut().find(|(p, _)| p == &mp.point) {
            Some((_, m)) => *m += mp.multiplicity,
            None => merged.push((mp.point.clone(), mp.multiplicity)),
        }
    }
    let Some(base) = merged.iter().find(|(p, _)| p == q).map(|(_, m)| *m) else {
        return Err(Error::input("query point does not occur in the multiset"));
    };
    let vectors: Vec<(Vec<Rational>, u64)> = merged
        .iter()
        .filter(|(p, _)| p != q)
        .map(|(p, m)| (p.diff(q), *m))
        .collect();
    let origin = vec![Rational::zero(); dim];
    Ok(base as u32 + min_halfspace_count(&vectors, &[origin], dim) as u32)
}

/// Affine Tukey depth of the flat spanned by `flat`: the minimum number of
/// points of the set in a closed halfspace containing the whole flat.
/// Computed by orthogonal projection onto the complement of the flat's
/// direction space, which collapses the spanning points to one weighted
/// location.
pub fn affine_depth(set: &PointSet, flat: &FlatSpec) -> Result<u32> {
    flat.validate(set)?;
    ensure_general_position(set)?;
    affine_depth_unchecked(set, flat)
}

pub(crate) fn affine_depth_unchecked(set: &PointSet, flat: &FlatSpec) -> Result<u32> {
    let d = set.dim();
    let k = flat.k();
    let base = set.point(flat.indices()[0]);

    // Direction-space basis of the flat, one column per extra spanning point.
    let dirs: Vec<Vec<Rational>> = flat.indices()[1..]
        .iter()
        .map(|&i| set.point(i).diff(base))
        .collect();
    if linalg::rank(&dirs) != k {
        return Err(Error::degenerate("flat spanning points are affinely dependent"));
    }

    let project = |x: &Point| -> Vec<Rational> {
        let delta = x.diff(base);
        if k == 0 {
            return delta;
        }
        // Normal equations of the direction basis A: (A^T A) z = A^T delta,
        // projection residual delta - A z lands in the orthogonal complement.
        let mut gram = vec![vec![Rational::zero(); k]; k];
        for i in 0..k {
            for j in 0..k {
                gram[i][j] = linalg::dot(&dirs[i], &dirs[j]);
            }
        }
        let rhs: Vec<Rational> = dirs.iter().map(|a| linalg::dot(a, &delta)).collect();
        let z = linalg::solve(&gram, &rhs).expect("Gram matrix of independent vectors");
        let mut residual = delta;
        for (c, a) in z.iter().zip(&dirs) {
            residual = linalg::sub(&residual, &linalg::scale(a, c));
        }
        residual
    };

    let mut grouped: Vec<(Vec<Rational>, u64)> = Vec::new();
    for (i, p) in set.points().iter().enumerate() {
        if flat.contains(i) {
            continue;
        }
        let image = project(p);
        if linalg::is_zero_vec(&image) {
            return Err(Error::degenerate(
                "a point outside the spanning set lies on the flat",
            ));
        }
        match grouped.iter_mut().find(|(v, _)| *v == image) {
            Some((_, m)) => *m += 1,
            None => grouped.push((image, 1)),
        }
    }
    let origin = vec![Rational::zero(); d];
    Ok((k as u32 + 1) + min_halfspace_count(&grouped, &[origin], d) as u32)
}

/// Convex Tukey depth of `flat`: the minimum number of points of the set in
/// a closed halfspace containing the convex hull of the spanning points.
pub fn convex_depth(set: &PointSet, flat: &FlatSpec) -> Result<u32> {
    flat.validate(set)?;
    ensure_general_position(set)?;
    convex_depth_unchecked(set, flat)
}

pub(crate) fn convex_depth_unchecked(set: &PointSet, flat: &FlatSpec) -> Result<u32> {
    let d = set.dim();
    let k = flat.k();
    let base = set.point(flat.indices()[0]);
    {
        let dirs: Vec<Vec<Rational>> = flat.indices()[1..]
            .iter()
            .map(|&i| set.point(i).diff(base))
            .collect();
        if linalg::rank(&dirs) != k {
            return Err(Error::degenerate("flat spanning points are affinely dependent"));
        }
    }
    if d == 2 {
        return Ok(convex_sweep_2d(set, flat));
    }
    let anchors: Vec<Vec<Rational>> = flat
        .indices()
        .iter()
        .map(|&i| set.point(i).diff(base))
        .collect();
    let points: Vec<(Vec<Rational>, u64)> = set
        .points()
        .iter()
        .enumerate()
        .filter(|(i, _)| !flat.contains(*i))
        .map(|(_, p)| (p.diff(base), 1))
        .collect();
    Ok((k as u32 + 1) + min_halfspace_count(&points, &anchors, d) as u32)
}

/// Sorted deduplicated event directions plus a generic representative
/// strictly inside each arc between consecutive events.
pub(crate) fn sweep_arc_representatives(events: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    use crate::geometry::{circular_cmp, cross2};
    let mut dirs: Vec<Vec<Rational>> = Vec::new();
    let mut seen = HashSet::new();
    for e in events {
        let canon = canonical_integer_vector(&e);
        if seen.insert(canon.clone()) {
            dirs.push(canon);
        }
    }
    dirs.sort_by(|a, b| circular_cmp(a, b));
    let m = dirs.len();
    let mut reps = Vec::with_capacity(m);
    for i in 0..m {
        let a = &dirs[i];
        let b = &dirs[(i + 1) % m];
        let mut rep = linalg::add(a, b);
        if linalg::is_zero_vec(&rep) {
            rep = rot90(a);
        }
        debug_assert!(cross2(a, &rep) > Rational::zero());
        debug_assert!(cross2(&rep, b) > Rational::zero());
        reps.push(rep);
    }
    reps
}

/// Exact circular sweep for planar convex depth: event directions are the
/// normals of all pairwise differences, counts are evaluated at one generic
/// direction per arc.
fn convex_sweep_2d(set: &PointSet, flat: &FlatSpec) -> u32 {
    let n = set.len();
    if n == 1 {
        return 1;
    }
    let mut events = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let delta = set.point(j).diff(set.point(i));
            let normal = rot90(&delta);
            events.push(normal.clone());
            events.push(linalg::neg(&normal));
        }
    }
    let mut best = u64::MAX;
    for v in sweep_arc_representatives(events) {
        let threshold = flat
            .indices()
            .iter()
            .map(|&i| linalg::dot(&v, set.point(i).coords()))
            .min()
            .unwrap();
        let count = set
            .points()
            .iter()
            .filter(|p| linalg::dot(&v, p.coords()) >= threshold)
            .count() as u64;
        best = best.min(count);
    }
    best as u32
}

/// Depth histogram of the `k`-flats spanned by `(k+1)`-subsets.
pub fn depth_histogram(set: &PointSet, k: usize, mode: DepthMode) -> Result<DepthHistogram> {
    let d = set.dim();
    if k >= d {
        return Err(Error::input(format!(
            "flat dimension {k} must be below the ambient dimension {d}"
        )));
    }
    ensure_general_position(set)?;
    let mut buckets: HashMap<u32, u64> = HashMap::new();
    for subset in (0..set.len()).combinations(k + 1) {
        let flat = FlatSpec::new(subset)?;
        let depth = match mode {
            DepthMode::Affine => affine_depth_unchecked(set, &flat)?,
            DepthMode::Convex => convex_depth_unchecked(set, &flat)?,
        };
        *buckets.entry(depth).or_insert(0) += 1;
    }
    Ok(DepthHistogram::from_buckets(&buckets, k, d, mode))
}
