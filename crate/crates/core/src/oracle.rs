//! Independent brute-force depth oracles used to cross-validate the engine.
//!
//! These implement the raw definition — an exhaustive minimization over
//! halfspace directions — on a code path deliberately separate from the
//! combinatorial algorithms in [`crate::depth`]: the planar oracle sweeps a
//! direction around the circle and evaluates the count once per arc, the
//! spatial oracle enumerates hyperplanes with hand-expanded determinants.

use num_traits::Zero;

use crate::depth::{DepthMode, FlatSpec};
use crate::error::{Error, Result};
use crate::geometry::{is_general_position, Point, PointSet};
use crate::rational::Rational;

/// What the oracle measures the depth of.
#[derive(Debug, Clone)]
pub enum DepthQuery {
    Point(usize),
    Flat(FlatSpec),
}

fn dot2(v: &(Rational, Rational), p: &Point) -> Rational {
    &v.0 * p.coord(0) + &v.1 * p.coord(1)
}

fn cross2(a: &(Rational, Rational), b: &(Rational, Rational)) -> Rational {
    &a.0 * &b.1 - &a.1 * &b.0
}

fn normalize2(v: (Rational, Rational)) -> (Rational, Rational) {
    // Scale-free canonical form so equal directions dedup exactly.
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::One;
    let lcm: BigInt = v.0.denom().lcm(v.1.denom());
    let a = v.0.numer() * (&lcm / v.0.denom());
    let b = v.1.numer() * (&lcm / v.1.denom());
    let mut g = a.gcd(&b);
    if g.is_zero() {
        g = BigInt::one();
    }
    (
        Rational::from_integer(a / &g),
        Rational::from_integer(b / &g),
    )
}

/// All event directions (both signs of every pairwise difference normal),
/// deduplicated and sorted counterclockwise.
fn sorted_events(set: &PointSet) -> Vec<(Rational, Rational)> {
    let n = set.len();
    let mut events: Vec<(Rational, Rational)> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let dx = set.point(j).coord(0) - set.point(i).coord(0);
            let dy = set.point(j).coord(1) - set.point(i).coord(1);
            // normal of the difference vector
            events.push(normalize2((-dy, dx)));
        }
    }
    events.sort_by(circ_cmp);
    events.dedup();
    events
}

fn circ_cmp(a: &(Rational, Rational), b: &(Rational, Rational)) -> std::cmp::Ordering {
    let half = |v: &(Rational, Rational)| -> u8 {
        if v.1 > Rational::zero() || (v.1.is_zero() && v.0 > Rational::zero()) {
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

/// One direction strictly inside every arc between consecutive events.
fn arc_probes(events: &[(Rational, Rational)]) -> Vec<(Rational, Rational)> {
    let m = events.len();
    let mut probes = Vec::with_capacity(m);
    for i in 0..m {
        let a = &events[i];
        let b = &events[(i + 1) % m];
        let mut probe = (&a.0 + &b.0, &a.1 + &b.1);
        if probe.0.is_zero() && probe.1.is_zero() {
            probe = (-a.1.clone(), a.0.clone());
        }
        assert!(cross2(a, &probe) > Rational::zero(), "probe outside its arc");
        assert!(cross2(&probe, b) > Rational::zero(), "probe outside its arc");
        probes.push(probe);
    }
    probes
}

/// Planar depth by exhaustive direction sweep; same contract as the engine's
/// `tukey_depth` / `affine_depth` / `convex_depth`, different algorithm.
pub fn sweep_depth_oracle_2d(set: &PointSet, query: &DepthQuery, mode: DepthMode) -> Result<u32> {
    if set.dim() != 2 {
        return Err(Error::input("the sweep oracle works in dimension 2"));
    }
    if !is_general_position(set) {
        return Err(Error::degenerate("point set is not in general position"));
    }
    let anchor_indices: Vec<usize> = match query {
        DepthQuery::Point(i) => {
            set.check_index(*i)?;
            vec![*i]
        }
        DepthQuery::Flat(flat) => {
            for &i in flat.indices() {
                set.check_index(i)?;
            }
            if flat.k() >= 2 {
                return Err(Error::input("planar flats have dimension 0 or 1"));
            }
            flat.indices().to_vec()
        }
    };

    if set.len() == 1 {
        return Ok(1);
    }

    // A halfspace containing a full line admits only the two line normals as
    // outer directions; everything else sweeps the whole circle.
    if mode == DepthMode::Affine && anchor_indices.len() == 2 {
        let a = set.point(anchor_indices[0]);
        let b = set.point(anchor_indices[1]);
        let dx = b.coord(0) - a.coord(0);
        let dy = b.coord(1) - a.coord(1);
        if dx.is_zero() && dy.is_zero() {
            return Err(Error::degenerate("flat spanned by coincident points"));
        }
        let normal = (-dy, dx);
        let mut best = u32::MAX;
        for v in [normal.clone(), (-normal.0.clone(), -normal.1.clone())] {
            let bound = dot2(&v, a);
            let count = set
                .points()
                .iter()
                .filter(|p| dot2(&v, p) >= bound)
                .count() as u32;
            best = best.min(count);
        }
        return Ok(best);
    }

    let events = sorted_events(set);
    let mut best = u32::MAX;
    for v in arc_probes(&events) {
        let bound = anchor_indices
            .iter()
            .map(|&i| dot2(&v, set.point(i)))
            .min()
            .expect("at least one anchor");
        let count = set
            .points()
            .iter()
            .filter(|p| dot2(&v, p) >= bound)
            .count() as u32;
        best = best.min(count);
    }
    Ok(best)
}

fn det3(a: &[Rational], b: &[Rational], c: &[Rational]) -> Rational {
    &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * (&b[0] * &c[2] - &b[2] * &c[0])
        + &a[2] * (&b[0] * &c[1] - &b[1] * &c[0])
}

/// Spatial point depth by brute-force enumeration of all hyperplanes through
/// the query and two other points, with cofactor-expanded determinants.
pub fn tukey_depth_oracle_3d(set: &PointSet, q_index: usize) -> Result<u32> {
    if set.dim() != 3 {
        return Err(Error::input("the brute-force oracle works in dimension 3"));
    }
    set.check_index(q_index)?;
    if !is_general_position(set) {
        return Err(Error::degenerate("point set is not in general position"));
    }
    let n = set.len();
    if n <= 3 {
        return Ok(1);
    }
    let q = set.point(q_index);
    let mut best = u32::MAX;
    // Enumeration deliberately runs over ordered index pairs (j descending
    // inner loop) to keep the traversal independent of the engine's.
    for a in (0..n).rev() {
        if a == q_index {
            continue;
        }
        for b in (0..a).rev() {
            if b == q_index {
                continue;
            }
            let u = set.point(a).diff(q);
            let w = set.point(b).diff(q);
            let (mut pos, mut neg) = (0u32, 0u32);
            for p in 0..n {
                if p == q_index || p == a || p == b {
                    continue;
                }
                let s = det3(&u, &w, &set.point(p).diff(q));
                if s > Rational::zero() {
                    pos += 1;
                } else if s < Rational::zero() {
                    neg += 1;
                } else {
                    return Err(Error::degenerate(
                        "four points on a common plane through the query",
                    ));
                }
            }
            best = best.min(1 + pos.min(neg));
        }
    }
    Ok(best)
}

/// Histogram of directed j-edges of a planar set: entry `j` counts ordered
/// pairs `(a, b)` with exactly `j` points strictly to the left of the
/// directed line `a -> b`. Length `n-1`, total `n(n-1)`.
pub fn directed_j_edge_histogram(set: &PointSet) -> Result<Vec<u64>> {
    if set.dim() != 2 {
        return Err(Error::input("j-edges are counted in dimension 2"));
    }
    if !is_general_position(set) {
        return Err(Error::degenerate("point set is not in general position"));
    }
    let n = set.len();
    if n < 2 {
        return Err(Error::input("j-edges need at least two points"));
    }
    let mut hist = vec![0u64; n - 1];
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let pa = set.point(a);
            let d = set.point(b).diff(pa);
            let left = set
                .points()
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != a && *i != b)
                .filter(|(_, p)| {
                    let r = p.diff(pa);
                    &d[0] * &r[1] - &d[1] * &r[0] > Rational::zero()
                })
                .count();
            hist[left] += 1;
        }
    }
    Ok(hist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::depth::{affine_depth, convex_depth, depth_histogram, tukey_depth};
    use crate::geometry::{approx_regular_polygon, random_point_set};
    use itertools::Itertools;

    fn pentagon_with_center() -> PointSet {
        let mut pts = approx_regular_polygon(5).unwrap();
        pts.push(Point::from_ints(&[0, 0]));
        PointSet::new(2, pts).unwrap()
    }

    #[test]
    fn oracle_pentagon_center() {
        let set = pentagon_with_center();
        assert_eq!(
            sweep_depth_oracle_2d(&set, &DepthQuery::Point(5), DepthMode::Affine).unwrap(),
            3
        );
    }

    #[test]
    fn oracle_square_diagonal() {
        let set = PointSet::new(
            2,
            [[0, 0], [1, 0], [1, 1], [0, 1]]
                .iter()
                .map(|c| Point::from_ints(c))
                .collect(),
        )
        .unwrap();
        let diag = FlatSpec::new(vec![0, 2]).unwrap();
        assert_eq!(
            sweep_depth_oracle_2d(&set, &DepthQuery::Flat(diag.clone()), DepthMode::Affine).unwrap(),
            3
        );
        assert_eq!(
            sweep_depth_oracle_2d(&set, &DepthQuery::Flat(diag), DepthMode::Convex).unwrap(),
            3
        );
    }

    #[test]
    fn oracle_matches_engine_on_seeded_planar_sets() {
        for seed in 0..10u64 {
            let n = 5 + (seed as usize % 5);
            let set = random_point_set(n, 2, seed, 50).unwrap();
            for i in 0..n {
                let by_engine = tukey_depth(&set, i).unwrap();
                let by_oracle =
                    sweep_depth_oracle_2d(&set, &DepthQuery::Point(i), DepthMode::Affine).unwrap();
                assert_eq!(by_engine, by_oracle, "seed {seed}, point {i}");
            }
            for pair in (0..n).combinations(2) {
                let flat = FlatSpec::new(pair).unwrap();
                for mode in [DepthMode::Affine, DepthMode::Convex] {
                    let by_engine = match mode {
                        DepthMode::Affine => affine_depth(&set, &flat).unwrap(),
                        DepthMode::Convex => convex_depth(&set, &flat).unwrap(),
                    };
                    let by_oracle =
                        sweep_depth_oracle_2d(&set, &DepthQuery::Flat(flat.clone()), mode).unwrap();
                    assert_eq!(by_engine, by_oracle, "seed {seed}, flat {flat:?}, {mode}");
                }
            }
        }
    }

    #[test]
    fn spatial_oracle_matches_engine() {
        for seed in 0..8u64 {
            let set = random_point_set(7, 3, seed, 40).unwrap();
            for i in 0..7 {
                assert_eq!(
                    tukey_depth(&set, i).unwrap(),
                    tukey_depth_oracle_3d(&set, i).unwrap(),
                    "seed {seed}, point {i}"
                );
            }
        }
    }

    #[test]
    fn spatial_oracle_simplex() {
        let set = PointSet::new(
            3,
            [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [4, 4, 4]]
                .iter()
                .map(|c| Point::from_ints(c))
                .collect(),
        )
        .unwrap();
        for i in 0..5 {
            assert_eq!(tukey_depth_oracle_3d(&set, i).unwrap(), 1);
        }
    }

    /// Directed j-edge counts determine the affine pair histogram: a pair
    /// whose open sides hold s and n-2-s points spans a line of depth
    /// 2 + min(s, n-2-s).
    #[test]
    #[allow(clippy::needless_range_loop)] // s indexes a computed histogram position
    fn j_edges_match_pair_histogram_up_to_index_shift() {
        for seed in [1u64, 4, 6] {
            let n = 7;
            let set = random_point_set(n, 2, seed, 40).unwrap();
            let j_edges = directed_j_edge_histogram(&set).unwrap();
            assert_eq!(j_edges.iter().sum::<u64>(), (n * (n - 1)) as u64);
            let pairs = depth_histogram(&set, 1, DepthMode::Affine).unwrap();
            for s in 0..=(n - 2) / 2 {
                let expected = if 2 * s == n - 2 {
                    j_edges[s] / 2
                } else {
                    j_edges[s]
                };
                assert_eq!(
                    pairs.at_depth((2 + s) as u32),
                    expected,
                    "depth index shift at s={s}, seed {seed}"
                );
            }
        }
    }
}
