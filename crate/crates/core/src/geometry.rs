//! Points, point sets and the exact predicates everything else trusts:
//! orientation of a simplex, sidedness against a spanned hyperplane,
//! general-position checks and seeded random instance generation.

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{sign_of, Rational};

/// Exact sign of a predicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Sign::Zero
    }

    pub(crate) fn of(x: &Rational) -> Sign {
        match sign_of(x) {
            0 => Sign::Zero,
            s if s > 0 => Sign::Positive,
            _ => Sign::Negative,
        }
    }
}

/// A point with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point {
    coords: Vec<Rational>,
}

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point::new(coords.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn origin(dim: usize) -> Self {
        Point::new(vec![Rational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Rational {
        &self.coords[i]
    }

    /// Coordinate vector of `self - other`.
    pub fn diff(&self, other: &Point) -> Vec<Rational> {
        linalg::sub(&self.coords, &other.coords)
    }

    pub fn translate(&self, delta: &[Rational]) -> Point {
        Point::new(linalg::add(&self.coords, delta))
    }
}

/// An ordered set of pairwise distinct points of a common dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    dim: usize,
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(dim: usize, points: Vec<Point>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::input("dimension must be at least 1"));
        }
        for p in &points {
            if p.dim() != dim {
                return Err(Error::input(format!(
                    "point of dimension {} in a set of dimension {dim}",
                    p.dim()
                )));
            }
        }
        for (i, p) in points.iter().enumerate() {
            for q in points.iter().skip(i + 1) {
                if p == q {
                    return Err(Error::input("points must be pairwise distinct"));
                }
            }
        }
        Ok(PointSet { dim, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.len() {
            return Err(Error::input(format!(
                "point index {i} out of range for a set of {} points",
                self.len()
            )));
        }
        Ok(())
    }

    /// A copy with point `i` removed.
    pub fn without(&self, i: usize) -> PointSet {
        let mut points = self.points.clone();
        points.remove(i);
        PointSet { dim: self.dim, points }
    }

    /// A copy with `p` appended; fails on coordinate collisions.
    pub fn with_point(&self, p: Point) -> Result<PointSet> {
        let mut points = self.points.clone();
        points.push(p);
        PointSet::new(self.dim, points)
    }

    pub(crate) fn replace_point(&self, i: usize, p: Point) -> PointSet {
        let mut points = self.points.clone();
        points[i] = p;
        PointSet { dim: self.dim, points }
    }
}

/// A nonzero direction, canonicalized to coprime integer coordinates with
/// its orientation preserved.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Direction {
    vector: Vec<Rational>,
}

impl Direction {
    pub fn new(vector: Vec<Rational>) -> Result<Self> {
        if vector.iter().all(|x| x.is_zero()) {
            return Err(Error::input("direction must be nonzero"));
        }
        Ok(Direction { vector: canonical_integer_vector(&vector) })
    }

    pub fn from_ints(v: &[i64]) -> Result<Self> {
        Direction::new(v.iter().map(|&x| Rational::from_integer(x.into())).collect())
    }

    pub fn dim(&self) -> usize {
        self.vector.len()
    }

    pub fn vector(&self) -> &[Rational] {
        &self.vector
    }

    pub fn negated(&self) -> Direction {
        Direction { vector: linalg::neg(&self.vector) }
    }
}

pub(crate) fn cross2(a: &[Rational], b: &[Rational]) -> Rational {
    &a[0] * &b[1] - &a[1] * &b[0]
}

pub(crate) fn rot90(v: &[Rational]) -> Vec<Rational> {
    vec![-v[1].clone(), v[0].clone()]
}

/// Counterclockwise order of nonzero plane vectors starting at the positive
/// x-axis; scale-independent.
pub(crate) fn circular_cmp(a: &[Rational], b: &[Rational]) -> std::cmp::Ordering {
    let half = |v: &[Rational]| -> u8 {
        if v[1] > Rational::zero() || (v[1].is_zero() && v[0] > Rational::zero()) {
            0
        } else {
            1
        }
    };
    half(a).cmp(&half(b)).then_with(|| {
        let c = cross2(a, b);
        if c > Rational::zero() {
            std::cmp::Ordering::Less
        } else if c < Rational::zero() {
            std::cmp::Ordering::Greater
        } else {
            std::cmp::Ordering::Equal
        }
    })
}

/// Clears denominators and divides by the gcd, preserving orientation.
pub(crate) fn canonical_integer_vector(v: &[Rational]) -> Vec<Rational> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut gcd = BigInt::zero();
    for i in &ints {
        gcd = gcd.gcd(i);
    }
    if gcd.is_zero() {
        gcd = BigInt::one();
    }
    ints.into_iter()
        .map(|i| Rational::from_integer(i / &gcd))
        .collect()
}

/// Orientation of `d+1` points in dimension `d`: the sign of the determinant
/// of the difference vectors `p_1 - p_0, ..., p_d - p_0`, taken in argument
/// order. Zero exactly when the points are affinely dependent.
pub fn orientation(simplex: &[&Point]) -> Result<Sign> {
    if simplex.is_empty() {
        return Err(Error::input("orientation of an empty simplex"));
    }
    let d = simplex[0].dim();
    if simplex.len() != d + 1 {
        return Err(Error::input(format!(
            "orientation in dimension {d} needs {} points, got {}",
            d + 1,
            simplex.len()
        )));
    }
    for p in simplex {
        if p.dim() != d {
            return Err(Error::input("orientation arguments of mixed dimension"));
        }
    }
    let base = simplex[0];
    let rows: Vec<Vec<Rational>> = simplex[1..].iter().map(|p| p.diff(base)).collect();
    Ok(Sign::of(&linalg::determinant(&rows)))
}

/// Index partition of a point set against the hyperplane spanned by the
/// `anchors` (given in order; their order fixes which side is "above").
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SidePartition {
    pub below: Vec<usize>,
    pub on: Vec<usize>,
    pub above: Vec<usize>,
}

/// Classifies every point of `set` against the hyperplane through the `d`
/// anchor points. The anchors themselves land in `on`.
pub fn side_partition(set: &PointSet, anchors: &[usize]) -> Result<SidePartition> {
    let d = set.dim();
    if anchors.len() != d {
        return Err(Error::input(format!(
            "need {d} anchor indices in dimension {d}, got {}",
            anchors.len()
        )));
    }
    for &a in anchors {
        set.check_index(a)?;
    }
    if anchors.iter().duplicates().next().is_some() {
        return Err(Error::input("anchor indices must be distinct"));
    }
    let anchor_pts: Vec<&Point> = anchors.iter().map(|&a| set.point(a)).collect();
    // The anchors span a hyperplane only if they are affinely independent.
    let rows: Vec<Vec<Rational>> = anchor_pts[1..]
        .iter()
        .map(|p| p.diff(anchor_pts[0]))
        .collect();
    if linalg::rank(&rows) != d - 1 {
        return Err(Error::degenerate(
            "anchor points are affinely dependent and span no hyperplane",
        ));
    }
    let mut partition = SidePartition { below: vec![], on: vec![], above: vec![] };
    for (i, p) in set.points().iter().enumerate() {
        if anchors.contains(&i) {
            partition.on.push(i);
            continue;
        }
        let mut simplex = anchor_pts.clone();
        simplex.push(p);
        match orientation(&simplex)? {
            Sign::Positive => partition.above.push(i),
            Sign::Negative => partition.below.push(i),
            Sign::Zero => partition.on.push(i),
        }
    }
    Ok(partition)
}

/// True iff no `d+1` points of the set are affinely dependent (exhaustively
/// checked over all `(d+1)`-subsets; vacuously true for `n <= d`).
pub fn is_general_position(set: &PointSet) -> bool {
    let d = set.dim();
    if set.len() <= d {
        return true;
    }
    (0..set.len()).combinations(d + 1).all(|subset| {
        let pts: Vec<&Point> = subset.iter().map(|&i| set.point(i)).collect();
        !orientation(&pts).expect("validated dimensions").is_zero()
    })
}

const REJECTION_LIMIT: usize = 1000;

/// `n` points with integer coordinates drawn uniformly from
/// `[-coord_bound, coord_bound]^d`, resampled until the set is in general
/// position. Deterministic for a fixed seed.
pub fn random_point_set(n: usize, d: usize, seed: u64, coord_bound: i64) -> Result<PointSet> {
    if n == 0 || d == 0 {
        return Err(Error::input("need n >= 1 and d >= 1"));
    }
    if coord_bound < 0 {
        return Err(Error::input("coordinate bound must be nonnegative"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..REJECTION_LIMIT {
        let points: Vec<Point> = (0..n)
            .map(|_| {
                Point::new(
                    (0..d)
                        .map(|_| {
                            let c: i64 = rng.gen_range(-coord_bound..=coord_bound);
                            Rational::from_integer(c.into())
                        })
                        .collect(),
                )
            })
            .collect();
        let Ok(set) = PointSet::new(d, points) else {
            continue; // coordinate collision, resample
        };
        if is_general_position(&set) {
            return Ok(set);
        }
    }
    Err(Error::RejectionLimit(format!(
        "no general-position set of {n} points in [-{coord_bound},{coord_bound}]^{d} after {REJECTION_LIMIT} samples"
    )))
}

/// Rational points lying exactly on the unit circle, approximately at the
/// vertices of the regular `m`-gon. Uses the tangent half-angle
/// parametrization, so the points are on the circle exactly while the angles
/// are only approximate.
pub fn approx_regular_polygon(m: usize) -> Result<Vec<Point>> {
    if m < 3 {
        return Err(Error::input("polygon needs at least 3 vertices"));
    }
    const SCALE: i64 = 1 << 20;
    let mut points = Vec::with_capacity(m);
    for k in 0..m {
        let angle = std::f64::consts::PI * (k as f64) / (m as f64); // theta/2
        let t = angle.tan();
        let tr = if t.abs() > 1e15 {
            // Straight up: use the exact top of the circle.
            points.push(Point::from_ints(&[-1, 0]));
            continue;
        } else {
            Rational::new(BigInt::from((t * SCALE as f64).round() as i64), BigInt::from(SCALE))
        };
        let t2 = &tr * &tr;
        let denom = Rational::one() + &t2;
        let x = (Rational::one() - &t2) / &denom;
        let y = (Rational::from_integer(2.into()) * &tr) / &denom;
        points.push(Point::new(vec![x, y]));
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    fn pset(d: usize, pts: &[&[i64]]) -> PointSet {
        PointSet::new(d, pts.iter().map(|p| Point::from_ints(p)).collect()).unwrap()
    }

    #[test]
    fn orientation_examples() {
        let a = Point::from_ints(&[0, 0]);
        let b = Point::from_ints(&[1, 0]);
        let c = Point::from_ints(&[0, 1]);
        assert_eq!(orientation(&[&a, &b, &c]).unwrap(), Sign::Positive);

        let p = Point::from_ints(&[0, 0]);
        let q = Point::from_ints(&[1, 1]);
        let r = Point::from_ints(&[2, 2]);
        assert_eq!(orientation(&[&p, &q, &r]).unwrap(), Sign::Zero);

        let o = Point::from_ints(&[0, 0, 0]);
        let x = Point::from_ints(&[1, 0, 0]);
        let y = Point::from_ints(&[0, 1, 0]);
        let z = Point::from_ints(&[0, 0, 1]);
        assert_eq!(orientation(&[&o, &x, &y, &z]).unwrap(), Sign::Positive);
    }

    #[test]
    fn orientation_antisymmetry_and_translation_invariance() {
        let a = Point::from_ints(&[1, 2]);
        let b = Point::from_ints(&[4, -1]);
        let c = Point::from_ints(&[2, 5]);
        let s1 = orientation(&[&a, &b, &c]).unwrap();
        let s2 = orientation(&[&b, &a, &c]).unwrap();
        assert_eq!(s1.as_i32(), -s2.as_i32());

        let delta = [rat(7), rat(-3)];
        let (ta, tb, tc) = (a.translate(&delta), b.translate(&delta), c.translate(&delta));
        assert_eq!(orientation(&[&ta, &tb, &tc]).unwrap(), s1);
    }

    #[test]
    fn orientation_dimension_mismatch() {
        let a = Point::from_ints(&[0, 0]);
        let b = Point::from_ints(&[1, 0]);
        assert!(orientation(&[&a, &b]).is_err());
    }

    #[test]
    fn side_partition_example() {
        let set = pset(2, &[&[0, 0], &[2, 0], &[1, 1], &[1, -1]]);
        let part = side_partition(&set, &[0, 1]).unwrap();
        assert_eq!(part.on, vec![0, 1]);
        assert_eq!(part.above, vec![2]);
        assert_eq!(part.below, vec![3]);
    }

    #[test]
    fn side_partition_triangle_edge() {
        let set = pset(2, &[&[0, 0], &[3, 0], &[1, 2]]);
        let part = side_partition(&set, &[0, 1]).unwrap();
        assert_eq!(part.on.len(), 2);
        assert_eq!(part.above.len() + part.below.len(), 1);
    }

    #[test]
    fn side_partition_simplex_facet_3d() {
        let set = pset(3, &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let part = side_partition(&set, &[0, 1, 2]).unwrap();
        assert_eq!(part.on, vec![0, 1, 2]);
        assert_eq!(part.above.len() + part.below.len(), 1);
    }

    #[test]
    fn side_partition_degenerate_anchors() {
        // collinear anchors span no plane
        let set3 = pset(3, &[&[0, 0, 0], &[1, 1, 1], &[2, 2, 2], &[1, 0, 0]]);
        assert!(matches!(
            side_partition(&set3, &[0, 1, 2]),
            Err(Error::Degeneracy(_))
        ));
        // repeated anchor indices are rejected outright
        let set2 = pset(2, &[&[0, 0], &[1, 0], &[0, 1]]);
        assert!(matches!(side_partition(&set2, &[1, 1]), Err(Error::Input(_))));
    }

    #[test]
    fn side_partition_counts_cover_everything() {
        let set = random_point_set(9, 2, 11, 50).unwrap();
        let part = side_partition(&set, &[0, 1]).unwrap();
        assert_eq!(part.below.len() + part.on.len() + part.above.len(), 9);
        assert_eq!(part.on, vec![0, 1]);
    }

    #[test]
    fn general_position_examples() {
        let square = pset(2, &[&[0, 0], &[1, 0], &[1, 1], &[0, 1]]);
        assert!(is_general_position(&square));

        let square_center = pset(2, &[&[0, 0], &[2, 0], &[2, 2], &[0, 2], &[1, 1]]);
        assert!(!is_general_position(&square_center));

        let simplex = pset(3, &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(is_general_position(&simplex));
    }

    #[test]
    fn random_point_set_is_deterministic_and_general() {
        let a = random_point_set(10, 3, 7, 1_000_000).unwrap();
        let b = random_point_set(10, 3, 7, 1_000_000).unwrap();
        assert_eq!(a, b);
        assert!(is_general_position(&a));
        assert_eq!(a.len(), 10);
    }

    #[test]
    fn random_point_set_rejection() {
        assert!(matches!(
            random_point_set(2, 2, 1, 0),
            Err(Error::RejectionLimit(_))
        ));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn small_point() -> impl Strategy<Value = Point> {
            (-50i64..=50, -50i64..=50).prop_map(|(x, y)| Point::from_ints(&[x, y]))
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn orientation_flips_under_swaps(a in small_point(), b in small_point(), c in small_point()) {
                let s1 = orientation(&[&a, &b, &c]).unwrap();
                let s2 = orientation(&[&a, &c, &b]).unwrap();
                prop_assert_eq!(s1.as_i32(), -s2.as_i32());
            }

            #[test]
            fn orientation_ignores_translation(
                a in small_point(), b in small_point(), c in small_point(),
                dx in -100i64..=100, dy in -100i64..=100,
            ) {
                let delta = [rat(dx), rat(dy)];
                let s1 = orientation(&[&a, &b, &c]).unwrap();
                let s2 = orientation(&[
                    &a.translate(&delta),
                    &b.translate(&delta),
                    &c.translate(&delta),
                ]).unwrap();
                prop_assert_eq!(s1, s2);
            }

            #[test]
            fn side_partition_covers_every_index(seed in 0u64..500, n in 4usize..10) {
                let set = random_point_set(n, 2, seed, 60).unwrap();
                let part = side_partition(&set, &[0, 1]).unwrap();
                prop_assert_eq!(part.below.len() + part.on.len() + part.above.len(), n);
                prop_assert_eq!(part.on, vec![0, 1]);
            }

            #[test]
            fn random_sets_are_reproducible(seed in 0u64..500) {
                let a = random_point_set(6, 2, seed, 40).unwrap();
                let b = random_point_set(6, 2, seed, 40).unwrap();
                prop_assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn polygon_points_lie_on_unit_circle() {
        let pts = approx_regular_polygon(7).unwrap();
        assert_eq!(pts.len(), 7);
        for p in &pts {
            let norm2 = linalg::dot(p.coords(), p.coords());
            assert_eq!(norm2, rat(1));
        }
        let set = PointSet::new(2, pts).unwrap();
        assert!(is_general_position(&set));
        let _ = ratio(1, 2);
    }
}
