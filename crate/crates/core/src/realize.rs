//! Construction of a general-position point set realizing any feasible
//! depth histogram.
//!
//! The construction grows a point set around the origin while keeping the
//! configuration balanced: a new point dropped at the origin of a balanced
//! configuration has the maximum possible depth, and pushing it outwards
//! along a suitable ray lowers its depth one order-type event at a time
//! without disturbing anyone else. Push directions come in pairs: a generic
//! ray breaks a symmetric configuration into an eccentric one, and a
//! repair ray (constructed by descending to a lower-dimensional quotient)
//! restores symmetry. Everything is verified exactly after every step, so a
//! successful run is self-validating; degenerate luck is retried with fresh
//! seeded directions.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::depth::{depth_histogram, tukey_depth_unchecked, DepthMode};
use crate::error::{Error, Result};
use crate::geometry::{
    canonical_integer_vector, circular_cmp, is_general_position, Direction, Point, PointSet,
};
use crate::histogram::{validate_point_histogram, CandidateHistogram};
use crate::linalg;
use crate::rational::Rational;

/// Balance classification of a configuration around a central point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConfigKind {
    /// Every hyperplane through the center and `d-1` other points splits
    /// the remaining points exactly evenly.
    Symmetric,
    /// Every such hyperplane splits the remaining points with imbalance
    /// exactly one.
    Eccentric,
    Neither,
}

impl std::fmt::Display for ConfigKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigKind::Symmetric => write!(f, "symmetric"),
            ConfigKind::Eccentric => write!(f, "eccentric"),
            ConfigKind::Neither => write!(f, "neither"),
        }
    }
}

/// One order-type event while pushing a point along a ray.
#[derive(Debug, Clone)]
pub struct PushEvent {
    /// Motion parameter at which the moving point crosses a hyperplane.
    pub t: Rational,
    /// The `d` point indices spanning the crossed hyperplane.
    pub crossed: Vec<usize>,
    /// Whether the crossing point lies inside the convex hull of the
    /// crossed points; depth can change only then.
    pub through_convex_hull: bool,
    pub depth_before: u32,
    pub depth_after: u32,
}

/// One insertion of the construction: where the point was pushed and what
/// happened on the way.
#[derive(Debug, Clone)]
pub struct RealizationStep {
    pub inserted_index: usize,
    pub target_depth: u32,
    pub direction: Direction,
    pub events: Vec<PushEvent>,
    pub final_position: Point,
}

/// Full audit trail of a realization; placing every step's point at its
/// final position reproduces the output set exactly.
#[derive(Debug, Clone)]
pub struct RealizationTrace {
    pub steps: Vec<RealizationStep>,
    pub final_set: PointSet,
}

/// Classification of the rays of a configuration around the origin (the
/// center itself excluded). Hyperplanes are spanned by the origin and
/// `d-1` rays; their side counts over the remaining rays decide the kind.
pub(crate) fn classify_rays(rays: &[Vec<Rational>], dim: usize) -> Result<ConfigKind> {
    let m = rays.len();
    if dim < 2 {
        return Err(Error::input("classification needs dimension at least 2"));
    }
    for r in rays {
        if linalg::is_zero_vec(r) {
            return Err(Error::input("a ray through the center is undefined"));
        }
    }
    if m < dim {
        return Ok(ConfigKind::Symmetric); // no points left to split
    }
    let mut max_diff: i64 = 0;
    for subset in (0..m).combinations(dim - 1) {
        let rows: Vec<Vec<Rational>> = subset.iter().map(|&i| rays[i].clone()).collect();
        if linalg::rank(&rows) != dim - 1 {
            return Err(Error::degenerate(
                "rays through the center are linearly dependent",
            ));
        }
        let normal = linalg::nullspace(&rows)
            .into_iter()
            .next()
            .expect("one-dimensional null space");
        let (mut pos, mut neg) = (0i64, 0i64);
        for (i, r) in rays.iter().enumerate() {
            if subset.contains(&i) {
                continue;
            }
            let v = linalg::dot(&normal, r);
            if v > Rational::zero() {
                pos += 1;
            } else if v < Rational::zero() {
                neg += 1;
            } else {
                return Err(Error::degenerate(
                    "too many rays on a common hyperplane through the center",
                ));
            }
        }
        max_diff = max_diff.max((pos - neg).abs());
        if max_diff >= 2 {
            return Ok(ConfigKind::Neither);
        }
    }
    Ok(match max_diff {
        0 => ConfigKind::Symmetric,
        1 => ConfigKind::Eccentric,
        _ => ConfigKind::Neither,
    })
}

fn rays_around(set: &PointSet, center: usize) -> Vec<Vec<Rational>> {
    let c = set.point(center);
    set.points()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != center)
        .map(|(_, p)| p.diff(c))
        .collect()
}

/// Exact balance classification of a point set around one of its points.
pub fn classify_configuration(set: &PointSet, center_index: usize) -> Result<ConfigKind> {
    set.check_index(center_index)?;
    if set.len() < set.dim() {
        return Err(Error::input("classification needs at least d points"));
    }
    if !is_general_position(set) {
        return Err(Error::degenerate("point set is not in general position"));
    }
    classify_rays(&rays_around(set, center_index), set.dim())
}

fn isqrt(n: &BigInt) -> BigInt {
    debug_assert!(!n.is_negative());
    n.sqrt()
}

/// Radially rescales every point towards a common sphere around the center.
/// Rays from the center are preserved exactly; radii are equalized only
/// approximately (a rational point exactly on the sphere generally does not
/// exist), which is enough for every classification and side count through
/// the center.
pub fn induced_spherical(set: &PointSet, center_index: usize) -> Result<PointSet> {
    set.check_index(center_index)?;
    let c = set.point(center_index);
    let rays = rays_around(set, center_index);
    if rays.is_empty() {
        return Ok(set.clone());
    }
    let target: Rational = rays
        .iter()
        .map(|r| linalg::dot(r, r))
        .max()
        .expect("nonempty rays");
    const SCALE: u32 = 32;
    let mut points = Vec::with_capacity(set.len());
    for (i, p) in set.points().iter().enumerate() {
        if i == center_index {
            points.push(p.clone());
            continue;
        }
        let r = p.diff(c);
        let len2 = linalg::dot(&r, &r);
        // lambda ~ sqrt(target/len2), computed from an integer square root
        let ratio = &target / &len2;
        let scaled = ratio.numer() * BigInt::from(2u8).pow(2 * SCALE) / ratio.denom();
        let lambda = Rational::new(isqrt(&scaled), BigInt::from(2u8).pow(SCALE));
        debug_assert!(lambda > Rational::zero());
        points.push(c.translate(&linalg::scale(&r, &lambda)));
    }
    PointSet::new(set.dim(), points)
}

/// Stereographic projection of a set lying exactly on a sphere around the
/// origin, from the pole opposite `north`, sending `north` to the origin of
/// the target space. Hyperplanes through the origin, `north` and a data
/// point correspond to hyperplanes through the image origin and the data
/// point's image, with identical side counts.
pub fn stereographic_to_lower(set: &PointSet, north: &Point) -> Result<PointSet> {
    let d = set.dim();
    if d < 2 {
        return Err(Error::input("projection needs dimension at least 2"));
    }
    if north.dim() != d {
        return Err(Error::input("pole dimension mismatch"));
    }
    let radius2 = linalg::dot(north.coords(), north.coords());
    if radius2.is_zero() {
        return Err(Error::input("pole must be a nonzero sphere point"));
    }
    let south: Vec<Rational> = linalg::neg(north.coords());
    let basis = linalg::nullspace(&[north.coords().to_vec()]);
    debug_assert_eq!(basis.len(), d - 1);
    let mut images = Vec::with_capacity(set.len());
    for p in set.points() {
        if linalg::dot(p.coords(), p.coords()) != radius2 {
            return Err(Error::input("point off the common sphere"));
        }
        let from_south = linalg::sub(p.coords(), &south);
        let denom = linalg::dot(&from_south, north.coords());
        if denom.is_zero() {
            return Err(Error::degenerate("point at the projection pole"));
        }
        let s = &radius2 / &denom;
        debug_assert!(s > Rational::zero());
        let hit = linalg::add(&south, &linalg::scale(&from_south, &s));
        debug_assert!(linalg::dot(&hit, north.coords()).is_zero());
        images.push(Point::new(solve_in_basis(&basis, &hit)));
    }
    PointSet::new(d - 1, images)
}

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

const DIRECTION_TRIES: usize = 64;
const REPAIR_SEARCH_TRIES: usize = 512;

fn random_direction(dim: usize, range: i64, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    loop {
        let v: Vec<Rational> = (0..dim)
            .map(|_| Rational::from_integer(rng.gen_range(-range..=range).into()))
            .collect();
        if !linalg::is_zero_vec(&v) {
            return v;
        }
    }
}

/// True iff `v` lies on no hyperplane spanned by the origin and `dim - 1`
/// of the rays.
fn spherically_generic(v: &[Rational], rays: &[Vec<Rational>], dim: usize) -> bool {
    (0..rays.len()).combinations(dim - 1).all(|subset| {
        let mut m: Vec<Vec<Rational>> = subset.iter().map(|&i| rays[i].clone()).collect();
        m.push(v.to_vec());
        !linalg::determinant(&m).is_zero()
    })
}

/// Repair direction for an eccentric configuration of plane rays: a new ray
/// making the configuration symmetric. The circular sequence of rays and
/// their negations alternates in a symmetric configuration; an eccentric
/// one has exactly one adjacent same-polarity gap and its antipode, and the
/// new ray belongs in that gap. All gaps are tried and the result verified.
fn eccentric_repair_2d(rays: &[Vec<Rational>]) -> Result<Vec<Rational>> {
    #[derive(Clone)]
    struct Event {
        dir: Vec<Rational>,
        negated: bool,
    }
    let mut events: Vec<Event> = Vec::new();
    for r in rays {
        let canon = canonical_integer_vector(r);
        events.push(Event { dir: canon.clone(), negated: false });
        events.push(Event { dir: linalg::neg(&canon), negated: true });
    }
    events.sort_by(|a, b| circular_cmp(&a.dir, &b.dir));
    let m = events.len();
    let mut candidates: Vec<Vec<Rational>> = Vec::new();
    for i in 0..m {
        let a = &events[i];
        let b = &events[(i + 1) % m];
        if a.negated != b.negated {
            continue;
        }
        let inside = linalg::add(&a.dir, &b.dir);
        if linalg::is_zero_vec(&inside) {
            continue;
        }
        // a gap of negated events receives the new ray itself; a gap of
        // plain events receives its negation
        let candidate = if a.negated { inside } else { linalg::neg(&inside) };
        candidates.push(candidate);
    }
    for w in candidates {
        let mut extended = rays.to_vec();
        extended.push(w.clone());
        if classify_rays(&extended, 2)? == ConfigKind::Symmetric {
            return Ok(w);
        }
    }
    Err(Error::degenerate(
        "no gap of the eccentric configuration admits a symmetric repair",
    ))
}

/// Repair direction for an eccentric configuration in any dimension. The
/// plane case is solved exactly by the gap search; higher dimensions fall
/// back to a seeded verified search.
fn eccentric_repair(rays: &[Vec<Rational>], dim: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Rational>> {
    if dim == 2 {
        return eccentric_repair_2d(rays);
    }
    for attempt in 0..REPAIR_SEARCH_TRIES {
        let range = 4 + (attempt as i64 / 32) * 4;
        let w = random_direction(dim, range, rng);
        let mut extended = rays.to_vec();
        extended.push(w.clone());
        if let Ok(ConfigKind::Symmetric) = classify_rays(&extended, dim) {
            return Ok(w);
        }
    }
    Err(Error::degenerate(
        "no symmetric repair direction found by search",
    ))
}

/// Core direction-pair construction around the origin. `rays` is a
/// symmetric configuration missing its central point; the first returned
/// direction turns it eccentric, pushing along the second restores
/// symmetry. Both claims are verified exactly before returning.
fn push_direction_pair(
    rays: &[Vec<Rational>],
    dim: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(Direction, Direction)> {
    debug_assert_eq!(classify_rays(rays, dim)?, ConfigKind::Symmetric);
    let mut last_err = Error::degenerate("no direction candidates tried");
    for attempt in 0..DIRECTION_TRIES {
        let range = 8 + (attempt as i64) * 2;
        let v1 = random_direction(dim, range, rng);
        if !spherically_generic(&v1, rays, dim) {
            continue;
        }
        if dim >= 4 {
            // quotient images of distinct rays must stay distinct
            let collapse = rays.iter().tuple_combinations().any(|(a, b)| {
                linalg::rank(&[v1.clone(), a.clone(), b.clone()]) < 3
            });
            if collapse {
                continue;
            }
        }
        let mut eccentric_rays = rays.to_vec();
        eccentric_rays.push(v1.clone());
        match classify_rays(&eccentric_rays, dim) {
            Ok(ConfigKind::Eccentric) => {}
            Ok(_) => continue,
            Err(e) => {
                last_err = e;
                continue;
            }
        }
        match second_direction(rays, &v1, dim, rng) {
            Ok(v2) => {
                let mut symmetric_rays = eccentric_rays.clone();
                symmetric_rays.push(v2.clone());
                match classify_rays(&symmetric_rays, dim) {
                    Ok(ConfigKind::Symmetric) => {
                        return Ok((Direction::new(v1)?, Direction::new(v2)?));
                    }
                    Ok(_) => continue,
                    Err(e) => {
                        last_err = e;
                        continue;
                    }
                }
            }
            Err(e) => {
                last_err = e;
                continue;
            }
        }
    }
    Err(Error::RealizationFailed(format!(
        "no verified push direction pair after {DIRECTION_TRIES} attempts: {last_err}"
    )))
}

/// Constructs the symmetry-restoring companion of `v1`: almost opposite to
/// `v1`, corrected by a repair direction of the quotient configuration
/// along the `v1` axis. In the plane the repair acts directly on the rays.
fn second_direction(
    rays: &[Vec<Rational>],
    v1: &[Rational],
    dim: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Rational>> {
    if dim == 2 {
        let mut eccentric_rays = rays.to_vec();
        eccentric_rays.push(v1.to_vec());
        return eccentric_repair_2d(&eccentric_rays);
    }

    // Quotient along the v1 axis: hyperplanes through the origin containing
    // v1 correspond to hyperplanes through the origin of the quotient, with
    // identical side counts.
    let quotient = linalg::nullspace(&[v1.to_vec()]);
    debug_assert_eq!(quotient.len(), dim - 1);
    let project =
        |x: &[Rational]| -> Vec<Rational> { quotient.iter().map(|row| linalg::dot(row, x)).collect() };
    let q_rays: Vec<Vec<Rational>> = rays.iter().map(|r| project(r)).collect();
    for q in &q_rays {
        if linalg::is_zero_vec(q) {
            return Err(Error::degenerate("ray collapses onto the push axis"));
        }
    }
    let w = eccentric_repair(&q_rays, dim - 1, rng)?;

    // Lift the repair back and lean it against the opposite of v1, close
    // enough that no hyperplane spanned by origin and old rays separates
    // the result from -v1.
    let mut matrix = vec![vec![Rational::zero(); dim]; dim - 1];
    for (i, row) in quotient.iter().enumerate() {
        matrix[i] = row.clone();
    }
    let lift = linalg::solve(&matrix, &w).expect("quotient map is surjective");

    let mut epsilon = Rational::one();
    for subset in (0..rays.len()).combinations(dim - 1) {
        let rows: Vec<Vec<Rational>> = subset.iter().map(|&i| rays[i].clone()).collect();
        if linalg::rank(&rows) != dim - 1 {
            return Err(Error::degenerate("rays through the center are dependent"));
        }
        let normal = linalg::nullspace(&rows).into_iter().next().unwrap();
        let against_v1 = linalg::dot(&normal, v1);
        let against_lift = linalg::dot(&normal, &lift);
        if against_v1.is_zero() {
            return Err(Error::degenerate("push axis lies on a ray hyperplane"));
        }
        if !against_lift.is_zero() {
            let bound = (against_v1 / against_lift).abs();
            if bound < epsilon {
                epsilon = bound;
            }
        }
    }
    epsilon /= Rational::from_integer(2.into());

    let mut rays_with_v1 = rays.to_vec();
    rays_with_v1.push(v1.to_vec());
    for _ in 0..64 {
        let candidate = linalg::add(&linalg::neg(v1), &linalg::scale(&lift, &epsilon));
        if !linalg::is_zero_vec(&candidate) && spherically_generic(&candidate, &rays_with_v1, dim) {
            return Ok(candidate);
        }
        epsilon /= Rational::from_integer(2.into());
    }
    Err(Error::degenerate("no generic epsilon for the second direction"))
}

/// Two directions for growing a symmetric configuration around its center:
/// pushing the center along the first and re-centering yields an eccentric
/// configuration, pushing the new center along the second restores a
/// symmetric one. Both properties are verified exactly on the rays.
pub fn find_push_directions(set: &PointSet, center_index: usize) -> Result<(Direction, Direction)> {
    set.check_index(center_index)?;
    if !is_general_position(set) {
        return Err(Error::degenerate("point set is not in general position"));
    }
    let rays = rays_around(set, center_index);
    if classify_rays(&rays, set.dim())? != ConfigKind::Symmetric {
        return Err(Error::input(
            "push directions are constructed for symmetric configurations",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    push_direction_pair(&rays, set.dim(), &mut rng)
}

/// Moves `set[moving_index]` along `direction`, processing order-type
/// events in increasing motion order, and stops at the first moment the
/// moving point's depth equals `target_depth`. The final position is an
/// exact rational point strictly between the last crossed event and the
/// next one. No other point's depth changes.
pub fn push_to_depth(
    set: &PointSet,
    moving_index: usize,
    direction: &Direction,
    target_depth: u32,
) -> Result<(PointSet, Vec<PushEvent>)> {
    set.check_index(moving_index)?;
    if !is_general_position(set) {
        return Err(Error::degenerate("point set is not in general position"));
    }
    push_to_depth_with(set, moving_index, direction, target_depth, &|_, _| false)
}

/// Push engine; `forbid` rejects stop positions (used by the realization
/// loop to keep the origin clear for the next insertion).
pub(crate) fn push_to_depth_with(
    set: &PointSet,
    moving_index: usize,
    direction: &Direction,
    target_depth: u32,
    forbid: &dyn Fn(&PointSet, usize) -> bool,
) -> Result<(PointSet, Vec<PushEvent>)> {
    let d = set.dim();
    let n = set.len();
    if direction.dim() != d {
        return Err(Error::input("direction dimension mismatch"));
    }
    if target_depth < 1 {
        return Err(Error::input("target depth must be at least 1"));
    }
    let start = set.point(moving_index).clone();
    let v = direction.vector();

    let others: Vec<usize> = (0..n).filter(|&i| i != moving_index).collect();
    let depth_start = tukey_depth_unchecked(set, moving_index)?;
    for &i in &others {
        if tukey_depth_unchecked(set, i)? > depth_start {
            return Err(Error::input(
                "moving point must be at maximal depth in the set",
            ));
        }
    }
    if depth_start < target_depth {
        return Err(Error::input(format!(
            "moving point has depth {depth_start}, below the target {target_depth}"
        )));
    }
    let other_depths: Vec<u32> = others
        .iter()
        .map(|&i| tukey_depth_unchecked(set, i))
        .collect::<Result<_>>()?;

    // Crossing times: roots of the orientation determinant against every
    // hyperplane spanned by d other points, linear in the motion parameter.
    let mut crossings: Vec<(Rational, Vec<usize>)> = Vec::new();
    if others.len() >= d {
        for subset in others.iter().copied().combinations(d) {
            let base = set.point(subset[0]);
            let mut rows: Vec<Vec<Rational>> = subset[1..]
                .iter()
                .map(|&i| set.point(i).diff(base))
                .collect();
            rows.push(start.diff(base));
            let offset = linalg::determinant(&rows);
            *rows.last_mut().unwrap() = v.to_vec();
            let slope = linalg::determinant(&rows);
            if offset.is_zero() {
                return Err(Error::degenerate(
                    "moving point starts on a hyperplane of other points",
                ));
            }
            if slope.is_zero() {
                continue; // motion parallel to this hyperplane
            }
            let t = -offset / slope;
            if t > Rational::zero() {
                crossings.push((t, subset));
            }
        }
    }
    crossings.sort_by(|a, b| a.0.cmp(&b.0));
    for pair in crossings.windows(2) {
        if pair[0].0 == pair[1].0 {
            return Err(Error::degenerate(
                "simultaneous hyperplane crossings; push along a perturbed direction",
            ));
        }
    }

    let place = |t: &Rational| -> Point { start.translate(&linalg::scale(v, t)) };
    let probe_between = |lo: &Rational, hi: Option<&Rational>| -> Rational {
        match hi {
            Some(hi) => (lo + hi) / Rational::from_integer(2.into()),
            None => lo + Rational::one(),
        }
    };

    let mut events: Vec<PushEvent> = Vec::new();
    let mut depth_current = depth_start;
    let mut stop_interval: Option<(Rational, Option<Rational>)> = None;

    if depth_current == target_depth {
        let hi = crossings.first().map(|(t, _)| t.clone());
        stop_interval = Some((Rational::zero(), hi));
    } else {
        for (idx, (t, subset)) in crossings.iter().enumerate() {
            let crossing_point = place(t);
            let hull = crossing_in_hull(set, subset, &crossing_point)?;
            let next_t = crossings.get(idx + 1).map(|(t, _)| t.clone());
            let probe = probe_between(t, next_t.as_ref());
            let probed_set = set.replace_point(moving_index, place(&probe));
            let depth_after = tukey_depth_unchecked(&probed_set, moving_index)?;
            let delta = depth_after as i64 - depth_current as i64;
            if delta.abs() > 1 {
                return Err(Error::degenerate(
                    "depth changed by more than one across a single event",
                ));
            }
            if delta != 0 && !hull {
                return Err(Error::degenerate(
                    "depth changed across a crossing outside the convex hull",
                ));
            }
            // no other point's depth may move while the pushed point stays
            // deepest
            for (oi, &other) in others.iter().enumerate() {
                let od = tukey_depth_unchecked(&probed_set, other)?;
                if od != other_depths[oi] {
                    return Err(Error::degenerate(
                        "a non-moving point changed depth during the push",
                    ));
                }
            }
            events.push(PushEvent {
                t: t.clone(),
                crossed: subset.clone(),
                through_convex_hull: hull,
                depth_before: depth_current,
                depth_after,
            });
            depth_current = depth_after;
            if depth_current == target_depth {
                stop_interval = Some((t.clone(), next_t));
                break;
            }
        }
    }

    let Some((lo, hi)) = stop_interval else {
        return Err(Error::RealizationFailed(format!(
            "depth never reached {target_depth} along the ray (ended at {depth_current})"
        )));
    };

    // Pick an allowed stop position strictly inside the interval.
    let mut result = None;
    'search: for level in 1..40u32 {
        let denom = BigInt::from(2u8).pow(level);
        let mut step = BigInt::one();
        while step < denom {
            let frac = Rational::new(step.clone(), denom.clone());
            let t = match &hi {
                Some(hi) => &lo + (hi - &lo) * &frac,
                None => &lo + &frac * Rational::from_integer(2.into()),
            };
            if t > lo {
                let candidate = set.replace_point(moving_index, place(&t));
                if !forbid(&candidate, moving_index) {
                    result = Some(candidate);
                    break 'search;
                }
            }
            step += BigInt::from(2u8); // odd numerators only, fresh points per level
        }
    }
    let Some(final_set) = result else {
        return Err(Error::RealizationFailed(
            "no admissible stop position in the target interval".into(),
        ));
    };
    debug_assert_eq!(
        tukey_depth_unchecked(&final_set, moving_index)?,
        target_depth
    );
    Ok((final_set, events))
}

/// Whether the crossing point lies strictly inside the convex hull of the
/// crossed points (a `(d-1)`-simplex inside its hyperplane).
fn crossing_in_hull(set: &PointSet, subset: &[usize], point: &Point) -> Result<bool> {
    let d = set.dim();
    // barycentric coordinates: solve sum(l_i * s_i) = point, sum(l_i) = 1
    let mut matrix = vec![vec![Rational::zero(); subset.len()]; d + 1];
    for (j, &s) in subset.iter().enumerate() {
        for (i, coord) in set.point(s).coords().iter().enumerate() {
            matrix[i][j] = coord.clone();
        }
        matrix[d][j] = Rational::one();
    }
    let mut rhs: Vec<Rational> = point.coords().to_vec();
    rhs.push(Rational::one());
    let Some(lambda) = linalg::solve(&matrix, &rhs) else {
        return Err(Error::degenerate("crossing point off its hyperplane"));
    };
    if lambda.iter().any(|l| l.is_zero()) {
        return Err(Error::degenerate(
            "crossing through a face of the crossed simplex",
        ));
    }
    Ok(lambda.iter().all(|l| l > &Rational::zero()))
}

const REALIZE_ATTEMPTS: u64 = 24;

/// Constructs a general-position point set whose point depth histogram is
/// exactly `hist`. The output is re-measured before returning, so a
/// successful result is self-validated; the trace records every insertion
/// and push event.
pub fn realize(hist: &CandidateHistogram, seed: u64) -> Result<(PointSet, RealizationTrace)> {
    if !validate_point_histogram(hist)? {
        return Err(Error::input("histogram is not feasible"));
    }
    let d = hist.d();
    let n = hist.total();
    if n < d as u64 + 1 {
        return Err(Error::input(format!(
            "need at least {} points in dimension {d}",
            d + 1
        )));
    }
    let mut last = Error::RealizationFailed("no attempts made".into());
    for attempt in 0..REALIZE_ATTEMPTS {
        let rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15)));
        match realize_attempt(hist, rng) {
            Ok(out) => return Ok(out),
            Err(e @ (Error::Degeneracy(_) | Error::RealizationFailed(_))) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(Error::RealizationFailed(format!(
        "all {REALIZE_ATTEMPTS} attempts failed; last error: {last}"
    )))
}

/// Simplex with rational coordinates forming a symmetric configuration
/// around the origin: the standard basis vectors plus the all-minus-one
/// point.
fn starting_simplex(d: usize) -> PointSet {
    let mut points: Vec<Point> = (0..d)
        .map(|i| {
            let mut coords = vec![Rational::zero(); d];
            coords[i] = Rational::one();
            Point::new(coords)
        })
        .collect();
    points.push(Point::new(vec![-Rational::one(); d]));
    PointSet::new(d, points).expect("simplex points are distinct")
}

/// The origin may not lie on any hyperplane spanned by `dim` current
/// points; checked over all subsets, optionally treating the point at
/// `moving` as placed elsewhere.
fn origin_is_clear(set: &PointSet, skip: Option<usize>) -> bool {
    let d = set.dim();
    let indices: Vec<usize> = (0..set.len()).filter(|&i| Some(i) != skip).collect();
    indices.iter().copied().combinations(d).all(|subset| {
        let rows: Vec<Vec<Rational>> = subset
            .iter()
            .map(|&i| set.point(i).coords().to_vec())
            .collect();
        !linalg::determinant(&rows).is_zero()
    })
}

fn realize_attempt(
    hist: &CandidateHistogram,
    mut rng: ChaCha8Rng,
) -> Result<(PointSet, RealizationTrace)> {
    let d = hist.d();
    let mut set = starting_simplex(d);
    debug_assert!(is_general_position(&set));
    debug_assert!(origin_is_clear(&set, None));

    let mut targets: Vec<u32> = Vec::new();
    let simplex_size = d as u64 + 1;
    let depth_one = hist.entries()[0];
    debug_assert!(depth_one >= simplex_size);
    targets.resize((depth_one - simplex_size) as usize, 1);
    for (idx, &count) in hist.entries().iter().enumerate().skip(1) {
        for _ in 0..count {
            targets.push(idx as u32 + 1);
        }
    }

    let mut steps: Vec<RealizationStep> = Vec::new();
    let mut pending: Option<Direction> = None;
    let mut unsnapped: Vec<usize> = Vec::new();

    for &target in &targets {
        let rays: Vec<Vec<Rational>> = set.points().iter().map(|p| p.coords().to_vec()).collect();

        let fresh = pending.is_none();
        let direction = if fresh {
            if classify_rays(&rays, d)? != ConfigKind::Symmetric {
                return Err(Error::degenerate(
                    "expected a symmetric configuration before a fresh pair",
                ));
            }
            let (v1, v2) = push_direction_pair(&rays, d, &mut rng)?;
            pending = Some(v2);
            v1
        } else {
            pending.take().expect("pending direction checked above")
        };

        if !origin_is_clear(&set, None) {
            return Err(Error::degenerate("origin blocked by a spanned hyperplane"));
        }
        set = set.with_point(Point::origin(d))?;
        let moving = set.len() - 1;

        let expected = if fresh { ConfigKind::Symmetric } else { ConfigKind::Eccentric };
        let got = classify_rays(&rays, d)?;
        if got != expected {
            return Err(Error::degenerate(format!(
                "configuration is {got}, expected {expected}"
            )));
        }
        let center_depth = tukey_depth_unchecked(&set, moving)?;
        let expected_depth = ((set.len() - d + 2) / 2) as u32;
        if center_depth != expected_depth {
            return Err(Error::degenerate(format!(
                "central depth {center_depth}, expected {expected_depth}"
            )));
        }
        if center_depth < target {
            return Err(Error::RealizationFailed(format!(
                "target depth {target} exceeds the central depth {center_depth}"
            )));
        }

        let forbid = |candidate: &PointSet, moving: usize| -> bool {
            !origin_is_clear(candidate, None) || {
                // the moved point may not land on a ray hyperplane with the
                // origin (same determinant family, explicit for clarity)
                let _ = moving;
                false
            }
        };
        let (pushed, events) = push_to_depth_with(&set, moving, &direction, target, &forbid)?;
        set = pushed;
        unsnapped.push(moving);
        steps.push(RealizationStep {
            inserted_index: moving,
            target_depth: target,
            direction,
            events,
            final_position: set.point(moving).clone(),
        });

        if pending.is_none() {
            for &i in &unsnapped {
                set = snap_point(&set, i);
            }
            unsnapped.clear();
        }
    }
    for &i in &unsnapped {
        set = snap_point(&set, i);
    }
    for step in &mut steps {
        step.final_position = set.point(step.inserted_index).clone();
    }

    if !is_general_position(&set) {
        return Err(Error::degenerate("constructed set left general position"));
    }
    let measured = depth_histogram(&set, 0, DepthMode::Affine)?;
    if CandidateHistogram::from_measured(&measured) != *hist {
        return Err(Error::RealizationFailed(format!(
            "self-validation failed: measured {:?}, wanted {:?}",
            measured.entries(),
            hist.entries()
        )));
    }
    let trace = RealizationTrace { steps, final_set: set.clone() };
    Ok((set, trace))
}

/// Rounds the point's coordinates to the coarsest dyadic grid that leaves
/// every orientation sign involving the point (and the origin) unchanged,
/// keeping all depths, classifications and origin clearance intact while
/// bounding coordinate growth.
fn snap_point(set: &PointSet, index: usize) -> PointSet {
    let d = set.dim();
    let p = set.point(index).clone();
    let mut witnesses: Vec<Vec<usize>> = Vec::new();
    // subsets of other points and the virtual origin (encoded as usize::MAX)
    let mut pool: Vec<usize> = (0..set.len()).filter(|&i| i != index).collect();
    pool.push(usize::MAX);
    for subset in pool.iter().copied().combinations(d) {
        witnesses.push(subset);
    }
    let origin = Point::origin(d);
    let sign_of = |q: &Point, subset: &[usize]| -> i32 {
        let base = if subset[0] == usize::MAX { &origin } else { set.point(subset[0]) };
        let mut rows: Vec<Vec<Rational>> = subset[1..]
            .iter()
            .map(|&i| {
                let pt = if i == usize::MAX { &origin } else { set.point(i) };
                pt.diff(base)
            })
            .collect();
        rows.push(q.diff(base));
        crate::rational::sign_of(&linalg::determinant(&rows))
    };
    let original: Vec<i32> = witnesses.iter().map(|s| sign_of(&p, s)).collect();
    debug_assert!(original.iter().all(|&s| s != 0));

    for level in 0..48u32 {
        let scale = BigInt::from(2u8).pow(level);
        let snapped = Point::new(
            p.coords()
                .iter()
                .map(|c| {
                    let scaled = c * Rational::from_integer(scale.clone());
                    Rational::new(scaled.round().to_integer(), scale.clone())
                })
                .collect(),
        );
        let ok = witnesses
            .iter()
            .zip(&original)
            .all(|(s, &want)| sign_of(&snapped, s) == want);
        if ok {
            return set.replace_point(index, snapped);
        }
    }
    set.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::depth::tukey_depth;
    use crate::geometry::{approx_regular_polygon, side_partition};
    use crate::histogram::enumerate_valid;

    fn pentagon_with_center() -> PointSet {
        let mut pts = approx_regular_polygon(5).unwrap();
        pts.push(Point::from_ints(&[0, 0]));
        PointSet::new(2, pts).unwrap()
    }

    fn quad_with_center() -> PointSet {
        PointSet::new(
            2,
            [[3, 0], [0, 4], [-5, 1], [1, -3], [0, 0]]
                .iter()
                .map(|c| Point::from_ints(c))
                .collect(),
        )
        .unwrap()
    }

    fn simplex_with_origin(d: usize) -> PointSet {
        let base = starting_simplex(d);
        base.with_point(Point::origin(d)).unwrap()
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify_configuration(&pentagon_with_center(), 5).unwrap(),
            ConfigKind::Symmetric
        );
        assert_eq!(
            classify_configuration(&quad_with_center(), 4).unwrap(),
            ConfigKind::Eccentric
        );
        for d in 2..=4 {
            let set = simplex_with_origin(d);
            assert_eq!(
                classify_configuration(&set, d + 1).unwrap(),
                ConfigKind::Symmetric
            );
        }
    }

    #[test]
    fn classify_detects_unbalanced_sets() {
        // center far below a parabolic arc: every line through the center
        // and a point leaves almost everyone on one side
        let set = PointSet::new(
            2,
            [[0, -100], [1, 1], [2, 4], [3, 9], [4, 16], [5, 25], [6, 36]]
                .iter()
                .map(|c| Point::from_ints(c))
                .collect(),
        )
        .unwrap();
        assert!(is_general_position(&set));
        assert_eq!(classify_configuration(&set, 0).unwrap(), ConfigKind::Neither);
    }

    #[test]
    fn induced_spherical_preserves_structure() {
        let set = quad_with_center();
        let spherical = induced_spherical(&set, 4).unwrap();
        assert_eq!(
            classify_configuration(&spherical, 4).unwrap(),
            classify_configuration(&set, 4).unwrap()
        );
        // all side partitions through the center agree
        for other in 0..4 {
            let before = side_partition(&set, &[4, other]).unwrap();
            let after = side_partition(&spherical, &[4, other]).unwrap();
            assert_eq!(before, after);
        }

        let pent = pentagon_with_center();
        let spherical = induced_spherical(&pent, 5).unwrap();
        assert_eq!(
            classify_configuration(&spherical, 5).unwrap(),
            ConfigKind::Symmetric
        );

        let simplex = simplex_with_origin(3);
        let spherical = induced_spherical(&simplex, 4).unwrap();
        assert_eq!(
            classify_configuration(&spherical, 4).unwrap(),
            ConfigKind::Symmetric
        );
    }

    #[test]
    fn induced_spherical_keeps_points_on_rays() {
        let set = quad_with_center();
        let spherical = induced_spherical(&set, 4).unwrap();
        let c = set.point(4);
        for i in 0..4 {
            let before = set.point(i).diff(c);
            let after = spherical.point(i).diff(c);
            // after = lambda * before for a positive lambda
            let cross = &before[0] * &after[1] - &before[1] * &after[0];
            assert!(cross.is_zero(), "point {i} left its ray");
            assert!(linalg::dot(&before, &after) > Rational::zero());
        }
    }

    /// Exact sphere points from the rational parametrization: images of
    /// rational points under the inverse projection.
    fn sphere_lift(plane_points: &[&[i64]], radius: i64) -> PointSet {
        // p = (2 r^2 q, r (|q|^2 - r^2)) / (|q|^2 + r^2), the sphere point
        // whose projection from the south pole (0,..,0,-r) is (q, 0)
        let r = Rational::from_integer(radius.into());
        let r2 = &r * &r;
        let mut out = Vec::new();
        for q in plane_points {
            let qv: Vec<Rational> = q.iter().map(|&c| Rational::from_integer(c.into())).collect();
            let q2 = linalg::dot(&qv, &qv);
            let denom = &q2 + &r2;
            let mut coords: Vec<Rational> =
                qv.iter().map(|c| Rational::from_integer(2.into()) * &r2 * c / &denom).collect();
            coords.push(&r * (&q2 - &r2) / &denom);
            out.push(Point::new(coords));
        }
        PointSet::new(plane_points[0].len() + 1, out).unwrap()
    }

    #[test]
    fn stereographic_fixes_the_equator() {
        // equator points project to a circle of the same radius
        let sphere = sphere_lift(&[&[7, 0], &[0, 7], &[-7, 0]], 7);
        for p in sphere.points() {
            assert!(p.coord(2).is_zero());
        }
        let north = Point::from_ints(&[0, 0, 7]);
        let flat = stereographic_to_lower(&sphere, &north).unwrap();
        for q in flat.points() {
            assert_eq!(
                linalg::dot(q.coords(), q.coords()),
                Rational::from_integer(49.into())
            );
        }
    }

    #[test]
    fn stereographic_projection_is_exact_and_preserves_sides() {
        let sphere = sphere_lift(&[&[3, 1], &[-2, 4], &[1, -5], &[-3, -2], &[6, 2]], 7);
        let north = Point::from_ints(&[0, 0, 7]);
        let flat = stereographic_to_lower(&sphere, &north).unwrap();
        assert_eq!(flat.dim(), 2);
        assert_eq!(flat.len(), 5);

        // side counts of planes through origin, north and a data point match
        // side counts of the image lines through the image origin
        let with_poles = sphere
            .with_point(north.clone())
            .unwrap()
            .with_point(Point::from_ints(&[0, 0, -7]))
            .unwrap();
        let with_origin = flat.with_point(Point::from_ints(&[0, 0])).unwrap();
        for i in 0..5 {
            let space = side_partition(&with_poles, &[5, 6, i]).unwrap();
            let plane = side_partition(&with_origin, &[5, i]).unwrap();
            let orientations_match = (space.above.len() == plane.above.len()
                && space.below.len() == plane.below.len())
                || (space.above.len() == plane.below.len()
                    && space.below.len() == plane.above.len());
            assert!(orientations_match, "side counts diverge at point {i}");
        }
    }

    #[test]
    fn stereographic_rejects_bad_inputs() {
        let sphere = sphere_lift(&[&[3, 1], &[-2, 4]], 7);
        let north = Point::from_ints(&[0, 0, 7]);
        let off = sphere.with_point(Point::from_ints(&[1, 1, 1])).unwrap();
        assert!(stereographic_to_lower(&off, &north).is_err());
        // a data point at the projection pole (opposite the sent-to-origin
        // pole) has no image
        let with_pole = sphere.with_point(Point::from_ints(&[0, 0, -7])).unwrap();
        assert!(matches!(
            stereographic_to_lower(&with_pole, &north),
            Err(Error::Degeneracy(_))
        ));
    }

    #[test]
    fn push_directions_pentagon() {
        let set = pentagon_with_center();
        let (v1, v2) = find_push_directions(&set, 5).unwrap();
        let mut rays = rays_around(&set, 5);
        rays.push(v1.vector().to_vec());
        assert_eq!(classify_rays(&rays, 2).unwrap(), ConfigKind::Eccentric);
        rays.push(v2.vector().to_vec());
        assert_eq!(classify_rays(&rays, 2).unwrap(), ConfigKind::Symmetric);
    }

    #[test]
    fn push_directions_simplex_3d() {
        let set = simplex_with_origin(3);
        let (v1, v2) = find_push_directions(&set, 4).unwrap();
        let mut rays = rays_around(&set, 4);
        rays.push(v1.vector().to_vec());
        assert_eq!(classify_rays(&rays, 3).unwrap(), ConfigKind::Eccentric);
        rays.push(v2.vector().to_vec());
        assert_eq!(classify_rays(&rays, 3).unwrap(), ConfigKind::Symmetric);
    }

    #[test]
    fn push_directions_need_symmetry() {
        let set = quad_with_center();
        assert!(matches!(
            find_push_directions(&set, 4),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn push_pentagon_center_to_depth_two() {
        let set = pentagon_with_center();
        let (v1, _) = find_push_directions(&set, 5).unwrap();
        let (pushed, events) = push_to_depth(&set, 5, &v1, 2).unwrap();
        assert_eq!(tukey_depth(&pushed, 5).unwrap(), 2);
        let h = depth_histogram(&pushed, 0, DepthMode::Affine).unwrap();
        assert_eq!(h.entries(), &[5, 1]);
        assert!(events.iter().all(|e| {
            (e.depth_after as i64 - e.depth_before as i64).abs() <= 1
                && (e.depth_after == e.depth_before || e.through_convex_hull)
        }));
    }

    #[test]
    fn push_pentagon_center_all_the_way_out() {
        let set = pentagon_with_center();
        let (v1, _) = find_push_directions(&set, 5).unwrap();
        let (pushed, _) = push_to_depth(&set, 5, &v1, 1).unwrap();
        assert_eq!(tukey_depth(&pushed, 5).unwrap(), 1);
        let h = depth_histogram(&pushed, 0, DepthMode::Affine).unwrap();
        assert_eq!(h.entries(), &[6]);
    }

    #[test]
    fn push_rejects_non_maximal_movers() {
        let set = pentagon_with_center();
        let dir = Direction::from_ints(&[1, 1]).unwrap();
        assert!(matches!(
            push_to_depth(&set, 0, &dir, 1),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn realize_simplex_histograms() {
        for d in 2..=3usize {
            let hist = CandidateHistogram::new(vec![d as u64 + 1], d);
            let (set, trace) = realize(&hist, 0).unwrap();
            assert_eq!(set.len(), d + 1);
            assert!(trace.steps.is_empty());
        }
    }

    #[test]
    fn realize_small_plane_histograms() {
        for entries in [vec![4u64, 1], vec![5, 1], vec![3, 2], vec![5, 0, 1], vec![6]] {
            let hist = CandidateHistogram::new(entries.clone(), 2);
            let (set, trace) = realize(&hist, 42).unwrap();
            let measured = depth_histogram(&set, 0, DepthMode::Affine).unwrap();
            assert_eq!(measured.entries(), hist.entries(), "histogram {entries:?}");
            // replaying the trace reproduces the final set
            let mut replay = starting_simplex(2);
            for step in &trace.steps {
                replay = replay.with_point(step.final_position.clone()).unwrap();
                assert_eq!(replay.len() - 1, step.inserted_index);
            }
            assert_eq!(&replay, &trace.final_set);
        }
    }

    #[test]
    fn realize_rejects_infeasible_histograms() {
        let bad = CandidateHistogram::new(vec![2, 1], 2);
        assert!(matches!(realize(&bad, 0), Err(Error::Input(_))));
    }

    #[test]
    fn realize_roundtrip_plane_n7() {
        for hist in enumerate_valid(7, 2).unwrap() {
            let (set, _) = realize(&hist, 7).unwrap();
            let measured = depth_histogram(&set, 0, DepthMode::Affine).unwrap();
            assert_eq!(
                measured.entries(),
                hist.entries(),
                "roundtrip for {:?}",
                hist.entries()
            );
        }
    }

    #[test]
    fn realize_small_spatial_histograms() {
        for entries in [vec![4u64, 1], vec![5, 1], vec![6, 1], vec![5, 2]] {
            let hist = CandidateHistogram::new(entries.clone(), 3);
            let (set, _) = realize(&hist, 3).unwrap();
            let measured = depth_histogram(&set, 0, DepthMode::Affine).unwrap();
            assert_eq!(measured.entries(), hist.entries(), "histogram {entries:?}");
        }
    }
}
