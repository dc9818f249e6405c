//! Named reproducible property suites binding the modules together, plus
//! per-file checks for user-supplied point sets.

use serde_json::{json, Value};
use tukey_core::{
    binomial, count_recurrence, count_recurrence_size_sum, count_total, count_with_max_depth,
    depth_histogram, enumerate_valid, max_depth_bound, random_point_set, realize,
    simplesum_identity_check, sweep_depth_oracle_2d, tukey_depth, tukey_depth_oracle_3d,
    validate_point_histogram, CandidateHistogram, CountValue, DepthMode, DepthQuery, FlatSpec,
    PointSet, Result,
};

pub struct CheckReport {
    pub results: Vec<(String, bool, String)>,
}

impl CheckReport {
    fn new() -> Self {
        CheckReport { results: vec![] }
    }

    fn record(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.results.push((name.to_string(), pass, detail.into()));
    }

    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|(_, pass, _)| *pass)
    }

    pub fn to_value(&self) -> Value {
        Value::Array(
            self.results
                .iter()
                .map(|(name, pass, detail)| {
                    json!({
                        "invariant": name,
                        "pass": pass,
                        "detail": detail,
                    })
                })
                .collect(),
        )
    }
}

fn corpus(d: usize, max_n: usize, count: usize, seed0: u64) -> Result<Vec<PointSet>> {
    (0..count)
        .map(|i| {
            let n = d + 2 + (i % (max_n - d - 1));
            random_point_set(n, d, seed0 + i as u64, 60)
        })
        .collect()
}

/// Measured point histograms are feasible and respect the depth bound.
pub fn suite_necessity() -> Result<CheckReport> {
    let mut report = CheckReport::new();
    let mut sets = corpus(2, 10, 24, 100)?;
    sets.extend(corpus(3, 8, 16, 200)?);
    let mut feasible = true;
    let mut bounded = true;
    for set in &sets {
        let h = depth_histogram(set, 0, DepthMode::Affine)?;
        if !validate_point_histogram(&CandidateHistogram::from_measured(&h))? {
            feasible = false;
        }
        if h.max_depth() as u64 > max_depth_bound(set.len() as u64, set.dim() as u64)? {
            bounded = false;
        }
    }
    report.record(
        "measured histograms are feasible",
        feasible,
        format!("{} seeded sets", sets.len()),
    );
    report.record(
        "no depth beyond (n-d+2)/2",
        bounded,
        format!("{} seeded sets", sets.len()),
    );
    Ok(report)
}

/// Deleting one deepest point leaves every other depth unchanged.
#[allow(clippy::needless_range_loop)] // index arithmetic across two sets
pub fn suite_removal_invariance() -> Result<CheckReport> {
    let mut report = CheckReport::new();
    let mut sets = corpus(2, 10, 16, 300)?;
    sets.extend(corpus(3, 8, 8, 400)?);
    let mut pass = true;
    for set in &sets {
        let depths: Vec<u32> = (0..set.len())
            .map(|i| tukey_depth(set, i))
            .collect::<Result<_>>()?;
        let deepest = (0..set.len()).max_by_key(|&i| depths[i]).unwrap();
        let smaller = set.without(deepest);
        for i in 0..set.len() {
            if i == deepest {
                continue;
            }
            let j = if i < deepest { i } else { i - 1 };
            if tukey_depth(&smaller, j)? != depths[i] {
                pass = false;
            }
        }
    }
    report.record(
        "removal of a deepest point preserves depths",
        pass,
        format!("{} seeded sets", sets.len()),
    );
    Ok(report)
}

/// Engine depths agree with the independent sweep and brute-force oracles.
pub fn suite_oracle_equivalence() -> Result<CheckReport> {
    let mut report = CheckReport::new();
    let planar = corpus(2, 9, 12, 500)?;
    let mut points_ok = true;
    let mut flats_ok = true;
    for set in &planar {
        for i in 0..set.len() {
            let engine = tukey_depth(set, i)?;
            let oracle = sweep_depth_oracle_2d(set, &DepthQuery::Point(i), DepthMode::Affine)?;
            if engine != oracle {
                points_ok = false;
            }
        }
        for a in 0..set.len() {
            for b in a + 1..set.len() {
                let flat = FlatSpec::new(vec![a, b])?;
                for mode in [DepthMode::Affine, DepthMode::Convex] {
                    let engine = match mode {
                        DepthMode::Affine => tukey_core::affine_depth(set, &flat)?,
                        DepthMode::Convex => tukey_core::convex_depth(set, &flat)?,
                    };
                    let oracle =
                        sweep_depth_oracle_2d(set, &DepthQuery::Flat(flat.clone()), mode)?;
                    if engine != oracle {
                        flats_ok = false;
                    }
                }
            }
        }
    }
    report.record(
        "planar point depths match the sweep oracle",
        points_ok,
        format!("{} sets", planar.len()),
    );
    report.record(
        "planar flat depths match the sweep oracle",
        flats_ok,
        format!("{} sets, both modes", planar.len()),
    );

    let spatial = corpus(3, 8, 8, 600)?;
    let mut spatial_ok = true;
    for set in &spatial {
        for i in 0..set.len() {
            if tukey_depth(set, i)? != tukey_depth_oracle_3d(set, i)? {
                spatial_ok = false;
            }
        }
    }
    report.record(
        "spatial point depths match the brute-force oracle",
        spatial_ok,
        format!("{} sets", spatial.len()),
    );
    Ok(report)
}

/// Closed forms, recurrences and enumeration agree.
pub fn suite_counting_identities() -> Result<CheckReport> {
    let mut report = CheckReport::new();
    let mut enumeration_ok = true;
    let mut recurrence_ok = true;
    let mut identity_ok = true;
    for d in 2..=4u64 {
        for n in (d + 1)..=(d + 8) {
            let all = enumerate_valid(n, d)?;
            if count_total(n, d)? != all.len().into() {
                enumeration_ok = false;
            }
            let bound = max_depth_bound(n, d)?;
            let mut sum = CountValue::ZERO;
            for l in 1..=bound {
                let closed = count_with_max_depth(n, d, l)?;
                let split = all.iter().filter(|h| h.max_depth() as u64 == l).count();
                if closed != split.into() || count_recurrence(n, d, l) != closed {
                    recurrence_ok = false;
                }
                if l >= 2 && count_recurrence_size_sum(n, d, l)? != closed {
                    recurrence_ok = false;
                }
                sum += closed;
            }
            if sum != count_total(n, d)?
                || count_total(n, d)? != count_with_max_depth(n + 1, d, bound)?
            {
                identity_ok = false;
            }
        }
    }
    let mut simplesum_ok = true;
    for d in 2..=4u64 {
        for k in 2..=5u64 {
            for n in (2 * k + d - 2)..=(2 * k + d + 6) {
                if !simplesum_identity_check(n, d, k)? {
                    simplesum_ok = false;
                }
            }
        }
    }
    report.record("enumeration count equals the closed-form total", enumeration_ok, "d in 2..=4");
    report.record("recurrences equal the closed form", recurrence_ok, "both summation forms");
    report.record("total equals the per-depth sum and its shift", identity_ok, "d in 2..=4");
    report.record("summation identity holds", simplesum_ok, "k in 2..=5");
    Ok(report)
}

/// Realize-and-remeasure roundtrip over all feasible histograms of small
/// sets.
pub fn suite_roundtrip() -> Result<CheckReport> {
    let mut report = CheckReport::new();
    let mut plane_ok = true;
    let mut count = 0;
    for n in 3..=7u64 {
        for hist in enumerate_valid(n, 2)? {
            let (set, _) = realize(&hist, 17)?;
            let measured = depth_histogram(&set, 0, DepthMode::Affine)?;
            if CandidateHistogram::from_measured(&measured) != hist {
                plane_ok = false;
            }
            count += 1;
        }
    }
    report.record(
        "planar realizations reproduce their histograms",
        plane_ok,
        format!("{count} histograms, n <= 7"),
    );
    let mut space_ok = true;
    let mut count = 0;
    for n in 4..=6u64 {
        for hist in enumerate_valid(n, 3)? {
            let (set, _) = realize(&hist, 23)?;
            let measured = depth_histogram(&set, 0, DepthMode::Affine)?;
            if CandidateHistogram::from_measured(&measured) != hist {
                space_ok = false;
            }
            count += 1;
        }
    }
    report.record(
        "spatial realizations reproduce their histograms",
        space_ok,
        format!("{count} histograms, n <= 6"),
    );
    Ok(report)
}

/// Checks one user-supplied point set: feasibility of its measured
/// histogram, the depth bound, histogram totals, and (in the plane)
/// agreement with the sweep oracle.
pub fn check_point_set(set: &PointSet) -> Result<CheckReport> {
    let mut report = CheckReport::new();
    let n = set.len() as u64;
    let d = set.dim() as u64;
    let h = depth_histogram(set, 0, DepthMode::Affine)?;
    report.record(
        "measured point histogram is feasible",
        validate_point_histogram(&CandidateHistogram::from_measured(&h))?,
        format!("{:?}", h.entries()),
    );
    report.record(
        "no depth beyond (n-d+2)/2",
        h.max_depth() as u64 <= max_depth_bound(n, d)?,
        format!("max depth {}", h.max_depth()),
    );
    report.record(
        "histogram entries sum to n",
        h.total() == n,
        format!("total {}", h.total()),
    );
    if set.dim() == 2 {
        let mut agree = true;
        for i in 0..set.len() {
            if tukey_depth(set, i)?
                != sweep_depth_oracle_2d(set, &DepthQuery::Point(i), DepthMode::Affine)?
            {
                agree = false;
            }
        }
        report.record("point depths match the sweep oracle", agree, "all points");
        let pairs = depth_histogram(set, 1, DepthMode::Affine)?;
        report.record(
            "pair histogram sums to C(n,2)",
            binomial(n, 2) == pairs.total().into(),
            format!("{:?}", pairs.entries()),
        );
    }
    Ok(report)
}

pub fn run_suite(name: &str) -> Result<CheckReport> {
    match name {
        "necessity" => suite_necessity(),
        "removal-invariance" => suite_removal_invariance(),
        "oracle-equivalence" => suite_oracle_equivalence(),
        "counting-identities" => suite_counting_identities(),
        "roundtrip" => suite_roundtrip(),
        "all" => {
            let mut all = CheckReport::new();
            for sub in [
                "necessity",
                "removal-invariance",
                "oracle-equivalence",
                "counting-identities",
                "roundtrip",
            ] {
                let sub_report = run_suite(sub)?;
                for (name, pass, detail) in sub_report.results {
                    all.results.push((name, pass, detail));
                }
            }
            Ok(all)
        }
        other => Err(tukey_core::Error::Input(format!(
            "unknown suite {other:?}; available: necessity, removal-invariance, oracle-equivalence, counting-identities, roundtrip, all"
        ))),
    }
}
