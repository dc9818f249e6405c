//! Feasibility, counting and enumeration of point depth histograms.
//!
//! A vector is a depth histogram of a general-position point set iff every
//! nonzero entry at depth `i >= 2` is preceded by at least `2i + d - 3`
//! points of smaller depth. Counting the vectors satisfying this constraint
//! has a closed form, two recurrences, and a closed-form total; all are
//! implemented exactly over big integers and cross-checked against explicit
//! enumeration.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::depth::DepthHistogram;
use crate::error::{Error, Result};

/// Arbitrary-precision nonnegative integer holding histogram counts.
pub type CountValue = BigUint;

/// Candidate point depth histogram: `entries[i]` is the number of points of
/// depth `i+1`. Canonical form keeps the last entry nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CandidateHistogram {
    entries: Vec<u64>,
    d: usize,
}

impl CandidateHistogram {
    pub fn new(mut entries: Vec<u64>, d: usize) -> Self {
        while entries.last() == Some(&0) {
            entries.pop();
        }
        CandidateHistogram { entries, d }
    }

    pub fn from_measured(h: &DepthHistogram) -> Self {
        CandidateHistogram::new(h.entries().to_vec(), h.d())
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().sum()
    }

    pub fn max_depth(&self) -> u32 {
        self.entries.len() as u32
    }
}

/// Binomial coefficient with the empty convention: zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= BigUint::from(n - i);
        den *= BigUint::from(i + 1);
    }
    debug_assert!((&num % &den).is_zero());
    num / den
}

fn factorial(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 2..=n {
        acc *= BigUint::from(i);
    }
    acc
}

/// Largest possible Tukey depth of a point among `n` points in dimension
/// `d`, clamped below at 1.
pub fn max_depth_bound(n: u64, d: u64) -> Result<u64> {
    if n < 1 || d < 1 {
        return Err(Error::input("need n >= 1 and d >= 1"));
    }
    if n + 2 <= d {
        return Ok(1);
    }
    Ok(((n + 2 - d) / 2).max(1))
}

/// Feasibility of a candidate point histogram: every nonzero entry at depth
/// `i >= 2` needs at least `2i + d - 3` points of smaller depth. Interior
/// zero entries are allowed; only the partial sums are constrained.
pub fn validate_point_histogram(h: &CandidateHistogram) -> Result<bool> {
    if h.d() < 2 {
        return Err(Error::input("histogram feasibility is defined for d >= 2"));
    }
    let mut prefix: u64 = 0;
    for (idx, &entry) in h.entries().iter().enumerate() {
        let depth = (idx + 1) as u64;
        if depth >= 2 && entry > 0 && prefix < 2 * depth + h.d() as u64 - 3 {
            return Ok(false);
        }
        prefix += entry;
    }
    Ok(true)
}

/// Necessary condition for a k-flat histogram: a nonzero entry at depth
/// `i >= 2` forces at least `2i + d + k - 3` points of smaller depth, read
/// off the companion point histogram of the same set.
pub fn check_kflat_necessary(
    kflat: &[u64],
    point_hist: &[u64],
    k: usize,
    d: usize,
) -> Result<bool> {
    if d < 2 || k >= d {
        return Err(Error::input("need d >= 2 and 0 <= k < d"));
    }
    let n: u64 = point_hist.iter().sum();
    let flats: u64 = kflat.iter().sum();
    if binomial(n, k as u64 + 1) != BigUint::from(flats) {
        return Err(Error::input(format!(
            "histogram mismatch: {n} points span {} {k}-flats, got {flats}",
            binomial(n, k as u64 + 1)
        )));
    }
    for (idx, &entry) in kflat.iter().enumerate() {
        let depth = (idx + 1) as u64;
        if depth < 2 || entry == 0 {
            continue;
        }
        let smaller: u64 = point_hist.iter().take(idx).sum();
        if smaller < 2 * depth + d as u64 + k as u64 - 3 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Cross necessary condition between two convex histograms of the same set:
/// a k-flat of convex depth `i` forces at least `2 * C(i-k-1, m+1)` m-flats
/// of smaller depth.
pub fn check_convex_cross_necessary(
    ck: &[u64],
    cm: &[u64],
    k: usize,
    m: usize,
    d: usize,
) -> Result<bool> {
    if d < 2 || k >= d || m >= d {
        return Err(Error::input("need d >= 2 and 0 <= k, m < d"));
    }
    for (idx, &entry) in ck.iter().enumerate() {
        let depth = (idx + 1) as u64;
        if depth < 2 || entry == 0 {
            continue;
        }
        if depth < (k as u64 + 1) + 1 {
            continue; // i - k - 1 < 1, the bound is vacuous
        }
        let bound = BigUint::from(2u8) * binomial(depth - k as u64 - 1, m as u64 + 1);
        let smaller: u64 = cm.iter().take(idx).sum();
        if BigUint::from(smaller) < bound {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_count_domain(n: u64, d: u64) -> Result<()> {
    if d < 2 {
        return Err(Error::input("counting needs d >= 2"));
    }
    if n < d + 1 {
        return Err(Error::input("counting needs n >= d + 1"));
    }
    Ok(())
}

/// Number of feasible histograms of `n` points in dimension `d` whose
/// deepest point has depth exactly `l`, by the closed form
/// `(n - 2l - d + 3) (n + l - d - 1)! / ((l-1)! (n - d + 1)!)`,
/// evaluated in integer arithmetic with the factorials cancelled first.
pub fn count_with_max_depth(n: u64, d: u64, l: u64) -> Result<BigUint> {
    check_count_domain(n, d)?;
    if l < 1 || l > max_depth_bound(n, d)? {
        return Err(Error::input(format!(
            "max depth {l} out of range 1..={} for n={n}, d={d}",
            max_depth_bound(n, d)?
        )));
    }
    if l == 1 {
        return Ok(BigUint::one());
    }
    // (n+l-d-1)! / (n-d+1)! is the rising product over l-2 factors.
    let mut acc = BigUint::from(n + 3 - 2 * l - d);
    for t in (n - d + 2)..=(n + l - d - 1) {
        acc *= BigUint::from(t);
    }
    let den = factorial(l - 1);
    debug_assert!((&acc % &den).is_zero(), "closed form must be integral");
    Ok(acc / den)
}

/// Memoized recurrence for the same count: remove one deepest point, so
/// `D(n,d,l)` is the sum of `D(n-1,d,i)` over all `i <= l`. Out-of-range
/// arguments count zero; `l = 1` always counts one histogram.
pub fn count_recurrence(n: u64, d: u64, l: u64) -> BigUint {
    fn rec(n: u64, d: u64, l: u64, memo: &mut HashMap<(u64, u64), BigUint>) -> BigUint {
        if l < 1 || n + 2 < 2 * l + d {
            return BigUint::zero();
        }
        if l == 1 {
            return BigUint::one();
        }
        if let Some(v) = memo.get(&(n, l)) {
            return v.clone();
        }
        let mut acc = BigUint::zero();
        for i in 1..=l {
            acc += rec(n - 1, d, i, memo);
        }
        memo.insert((n, l), acc.clone());
        acc
    }
    rec(n, d, l, &mut HashMap::new())
}

/// The second summation form of the recurrence: histograms of `n` points
/// with maximum depth `l` correspond to smaller sets capped one level lower,
/// `D(n,d,l) = sum_{j=2l+d-2}^{n} D(j,d,l-1)`. Needs `l >= 2`.
pub fn count_recurrence_size_sum(n: u64, d: u64, l: u64) -> Result<BigUint> {
    if l < 2 {
        return Err(Error::input("the size-sum recurrence form needs l >= 2"));
    }
    if n + 2 < 2 * l + d {
        return Ok(BigUint::zero());
    }
    let mut acc = BigUint::zero();
    for j in (2 * l + d - 2)..=n {
        acc += count_recurrence(j, d, l - 1);
    }
    Ok(acc)
}

/// Total number of feasible histograms of `n` points in dimension `d`.
pub fn count_total(n: u64, d: u64) -> Result<BigUint> {
    check_count_domain(n, d)?;
    let m = n - d;
    let (factor, binom) = if m % 2 == 0 {
        (BigUint::from(2u8), binomial(3 * m / 2 + 1, m / 2))
    } else {
        (BigUint::from(3u8), binomial((3 * m).div_ceil(2), (m - 1) / 2))
    };
    let num = factor * binom;
    let den = BigUint::from(m + 2);
    debug_assert!((&num % &den).is_zero(), "total count must be integral");
    Ok(num / den)
}

/// All feasible histograms of `n` points in dimension `d`, in lexicographic
/// order. Entries are generated depth by depth; a nonzero entry is only
/// placed once the running prefix sum meets the feasibility bound, which
/// prunes exactly the infeasible branches.
pub fn enumerate_valid(n: u64, d: u64) -> Result<Vec<CandidateHistogram>> {
    check_count_domain(n, d)?;
    let mut out = Vec::new();
    let mut current: Vec<u64> = Vec::new();
    fn go(
        depth: u64,
        placed: u64,
        n: u64,
        d: u64,
        current: &mut Vec<u64>,
        out: &mut Vec<CandidateHistogram>,
    ) {
        let remaining = n - placed;
        if remaining == 0 {
            debug_assert!(current.last().is_some_and(|&a| a > 0));
            out.push(CandidateHistogram::new(current.clone(), d as usize));
            return;
        }
        let bound = 2 * depth + d - 3;
        if depth >= 2 && placed < bound {
            return; // no nonzero entry can ever be placed again
        }
        current.push(0);
        go(depth + 1, placed, n, d, current, out);
        for a in 1..=remaining {
            *current.last_mut().unwrap() = a;
            go(depth + 1, placed + a, n, d, current, out);
        }
        current.pop();
    }
    go(1, 0, n, d, &mut current, &mut out);
    out.sort();
    Ok(out)
}

/// Truncation of a histogram at index `i` (1-based): the plain prefix, or
/// the prefix with the `i`-th entry capped to a single point. Feasible
/// inputs stay feasible under both.
pub fn truncate(h: &CandidateHistogram, i: usize, cap: bool) -> Result<CandidateHistogram> {
    if i < 1 || i > h.entries().len() {
        return Err(Error::input(format!(
            "truncation index {i} out of range 1..={}",
            h.entries().len()
        )));
    }
    let mut entries: Vec<u64> = h.entries()[..i].to_vec();
    if cap {
        entries[i - 1] = 1;
    }
    Ok(CandidateHistogram::new(entries, h.d()))
}

fn rational_factorial(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(factorial(n)))
}

/// Mechanically checks the summation identity behind the closed-form count:
/// `sum_{j=0}^{n-2k-d+2} (j+3)(j+3k-4)! / ((k-2)!(j+2k-1)!)` equals
/// `(n-2k-d+3)(n+k-d-1)! / ((k-1)!(n-d+1)!)`, evaluated exactly.
pub fn simplesum_identity_check(n: u64, d: u64, k: u64) -> Result<bool> {
    if d < 2 || k < 2 {
        return Err(Error::input("the identity needs d >= 2 and k >= 2"));
    }
    if n + 2 < 2 * k + d {
        return Err(Error::input("the identity needs n >= 2k + d - 2"));
    }
    let mut lhs = BigRational::zero();
    for j in 0..=(n + 2 - 2 * k - d) {
        let term = BigRational::from_integer(BigInt::from(j + 3)) * rational_factorial(j + 3 * k - 4)
            / (rational_factorial(k - 2) * rational_factorial(j + 2 * k - 1));
        lhs += term;
    }
    let rhs = BigRational::from_integer(BigInt::from(n + 3 - 2 * k - d))
        * rational_factorial(n + k - d - 1)
        / (rational_factorial(k - 1) * rational_factorial(n - d + 1));
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hist(entries: &[u64], d: usize) -> CandidateHistogram {
        CandidateHistogram::new(entries.to_vec(), d)
    }

    #[test]
    fn validator_examples() {
        assert!(validate_point_histogram(&hist(&[3, 1], 2)).unwrap());
        assert!(!validate_point_histogram(&hist(&[2, 1], 2)).unwrap());
        assert!(validate_point_histogram(&hist(&[5, 0, 1], 2)).unwrap());
        for n in 1..10 {
            assert!(validate_point_histogram(&hist(&[n], 2)).unwrap());
            assert!(validate_point_histogram(&hist(&[n], 3)).unwrap());
        }
        assert!(validate_point_histogram(&hist(&[4, 1], 2)).unwrap());
        assert!(validate_point_histogram(&hist(&[4, 1], 3)).unwrap());
        assert!(!validate_point_histogram(&hist(&[3, 1], 3)).unwrap());
    }

    #[test]
    fn validator_requires_plane_or_higher() {
        assert!(validate_point_histogram(&hist(&[3, 1], 1)).is_err());
    }

    #[test]
    fn max_depth_bound_examples() {
        assert_eq!(max_depth_bound(6, 2).unwrap(), 3);
        assert_eq!(max_depth_bound(8, 3).unwrap(), 3);
        for d in 1..6 {
            assert_eq!(max_depth_bound(d + 1, d).unwrap(), 1);
        }
        assert_eq!(max_depth_bound(1, 5).unwrap(), 1);
    }

    #[test]
    fn closed_form_examples() {
        for n in 3..12 {
            assert_eq!(count_with_max_depth(n, 2, 1).unwrap(), BigUint::from(1u8));
        }
        assert_eq!(count_with_max_depth(5, 2, 2).unwrap(), BigUint::from(2u8));
        assert_eq!(count_with_max_depth(3, 2, 1).unwrap(), BigUint::from(1u8));
        assert!(count_with_max_depth(5, 2, 3).is_err());
        assert!(count_with_max_depth(2, 2, 1).is_err());
    }

    #[test]
    fn total_count_examples() {
        assert_eq!(count_total(3, 2).unwrap(), BigUint::from(1u8));
        assert_eq!(count_total(4, 2).unwrap(), BigUint::from(2u8));
        assert_eq!(count_total(5, 2).unwrap(), BigUint::from(3u8));
        assert_eq!(count_total(9, 2).unwrap(), BigUint::from(55u8));
    }

    #[test]
    fn recurrence_matches_closed_form() {
        for d in 2..=4u64 {
            for n in (d + 1)..=(d + 12) {
                for l in 1..=max_depth_bound(n, d).unwrap() {
                    let closed = count_with_max_depth(n, d, l).unwrap();
                    assert_eq!(count_recurrence(n, d, l), closed, "D({n},{d},{l})");
                    if l >= 2 {
                        assert_eq!(
                            count_recurrence_size_sum(n, d, l).unwrap(),
                            closed,
                            "size-sum D({n},{d},{l})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn recurrence_unrolled_example() {
        // D(5,2,2) = D(4,2,1) + D(4,2,2) = 1 + 1
        assert_eq!(count_recurrence(4, 2, 2), BigUint::one());
        assert_eq!(count_recurrence(5, 2, 2), BigUint::from(2u8));
    }

    #[test]
    fn recurrence_is_zero_below_the_size_bound() {
        for d in 2..=4u64 {
            for l in 2..=5u64 {
                for n in 1..(2 * l + d - 2) {
                    assert!(count_recurrence(n, d, l).is_zero());
                }
            }
        }
    }

    #[test]
    fn totals_tie_out_with_the_per_depth_split() {
        for d in 2..=4u64 {
            for n in (d + 1)..=(d + 10) {
                let mut sum = BigUint::zero();
                for l in 1..=max_depth_bound(n, d).unwrap() {
                    sum += count_with_max_depth(n, d, l).unwrap();
                }
                let total = count_total(n, d).unwrap();
                assert_eq!(sum, total, "sum of D({n},{d},l)");
                let shifted =
                    count_with_max_depth(n + 1, d, max_depth_bound(n, d).unwrap()).unwrap();
                assert_eq!(total, shifted, "D({n},{d}) = D({},{d},lmax)", n + 1);
            }
        }
    }

    #[test]
    fn enumeration_examples() {
        let got = enumerate_valid(4, 2).unwrap();
        assert_eq!(got, vec![hist(&[3, 1], 2), hist(&[4], 2)]);
        let got = enumerate_valid(5, 2).unwrap();
        assert_eq!(got, vec![hist(&[3, 2], 2), hist(&[4, 1], 2), hist(&[5], 2)]);
        for d in 2..=4 {
            let got = enumerate_valid(d + 1, d).unwrap();
            assert_eq!(got, vec![hist(&[d + 1], d as usize)]);
        }
    }

    #[test]
    fn enumeration_counts_and_split_match_the_formulas() {
        for d in 2..=4u64 {
            for n in (d + 1)..=(d + 8) {
                let all = enumerate_valid(n, d).unwrap();
                assert_eq!(BigUint::from(all.len()), count_total(n, d).unwrap());
                for h in &all {
                    assert!(validate_point_histogram(h).unwrap());
                    assert_eq!(h.total(), n);
                }
                for l in 1..=max_depth_bound(n, d).unwrap() {
                    let split = all.iter().filter(|h| h.max_depth() as u64 == l).count();
                    assert_eq!(
                        BigUint::from(split),
                        count_with_max_depth(n, d, l).unwrap(),
                        "split at l={l} for n={n}, d={d}"
                    );
                }
            }
        }
    }

    #[test]
    fn truncation_examples_and_closure() {
        assert_eq!(
            truncate(&hist(&[5, 1, 1], 2), 2, false).unwrap(),
            hist(&[5, 1], 2)
        );
        assert_eq!(truncate(&hist(&[3, 2], 2), 2, true).unwrap(), hist(&[3, 1], 2));
        assert!(truncate(&hist(&[3, 2], 2), 3, false).is_err());
        assert!(truncate(&hist(&[3, 2], 2), 0, false).is_err());

        for h in enumerate_valid(9, 2).unwrap() {
            for i in 1..=h.entries().len() {
                for cap in [false, true] {
                    let t = truncate(&h, i, cap).unwrap();
                    assert!(
                        validate_point_histogram(&t).unwrap(),
                        "truncation of {h:?} at {i} (cap={cap}) must stay feasible"
                    );
                }
            }
        }
    }

    #[test]
    fn kflat_condition_on_plausible_data() {
        // The bound is satisfiable: all pair mass at depth 2 over four
        // extreme points needs a prefix of 2*2+2+1-3 = 4.
        assert!(check_kflat_necessary(&[0, 6], &[4], 1, 2).unwrap());
        // The unit square's measured pair histogram [0,4,2] against its
        // point histogram [4] fails the literal bound at depth 3 (needs 6
        // smaller-depth points, only 4 exist). The checker reports exactly
        // what the formula says about real data.
        assert!(!check_kflat_necessary(&[0, 4, 2], &[4], 1, 2).unwrap());
        // k = 0 reduces to the point bound 2i + d - 3
        assert!(check_kflat_necessary(&[4, 1], &[4, 1], 0, 2).unwrap());
        assert!(!check_kflat_necessary(&[2, 1], &[2, 1], 0, 2).unwrap());
        // all mass at depth 1 is vacuously fine
        assert!(check_kflat_necessary(&[6], &[4], 1, 2).unwrap());
        // histogram pairing consistency is validated
        assert!(check_kflat_necessary(&[0, 5], &[4], 1, 2).is_err());
    }

    #[test]
    fn convex_cross_condition() {
        // all mass at depth <= k+1 is vacuous
        assert!(check_convex_cross_necessary(&[0, 9], &[1], 1, 1, 2).unwrap());
        // k = m = 0: a depth-2 point needs 2*C(1,1) = 2 shallower points
        assert!(check_convex_cross_necessary(&[4, 1], &[4, 1], 0, 0, 2).unwrap());
        assert!(!check_convex_cross_necessary(&[1, 1], &[1, 1], 0, 0, 2).unwrap());
    }

    #[test]
    fn simplesum_identity_holds() {
        assert!(simplesum_identity_check(2 * 3 + 2 - 2, 2, 3).unwrap());
        assert!(simplesum_identity_check(10, 2, 2).unwrap());
        assert!(simplesum_identity_check(12, 3, 3).unwrap());
        for d in 2..=4u64 {
            for k in 2..=6u64 {
                for n in (2 * k + d - 2)..=(2 * k + d + 10) {
                    assert!(simplesum_identity_check(n, d, k).unwrap(), "n={n} d={d} k={k}");
                }
            }
        }
    }

    #[test]
    fn binomial_conventions() {
        assert_eq!(binomial(5, 2), BigUint::from(10u8));
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(binomial(0, 0), BigUint::one());
    }
}
