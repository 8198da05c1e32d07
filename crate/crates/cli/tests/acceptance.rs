//! The ten acceptance criteria, one printed line each.
//!
//! Every comparison is an exact integer equality: [`TOLERANCE`] is zero and
//! all numeric checks go through [`within_tolerance`]. Each criterion also
//! has a wall-clock limit.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use powmap_core::codes::{constacyclic_check, weight_distribution, weight_distribution_closed, Selection, WeightMethod};
use powmap_core::curve::{count_points_closed, count_points_oracle, curve_sweep, quad_sweep, CurveCase, CurveSpec};
use powmap_core::expsum::{
    distribution_closed, distribution_oracle, distribution_reduced, moments, Moments, DEFAULT_PAIR_BUDGET,
};
use powmap_core::spectrum::{c_diff_sweep, classify_derivative_counts, diff_spectrum_closed, diff_spectrum_oracle};
use powmap_core::{Element, Family, FieldContext};

/// Allowed absolute difference for every numeric comparison.
const TOLERANCE: i128 = 0;

/// Constacyclic sample size for fields too large to exhaust.
const SHIFT_SAMPLES: u64 = 10_000;

type Outcome = Result<String, String>;

fn within_tolerance(actual: i128, expected: i128) -> bool {
    (actual - expected).abs() <= TOLERANCE
}

fn check_num(what: &str, actual: impl Into<i128>, expected: impl Into<i128>) -> Result<(), String> {
    let (a, e) = (actual.into(), expected.into());
    if within_tolerance(a, e) {
        Ok(())
    } else {
        Err(format!("{what}: got {a}, expected {e}"))
    }
}

/// Same keys, and every value within tolerance.
fn check_map<K: Ord + Debug, V: Copy + Into<i128>>(
    what: &str,
    actual: &BTreeMap<K, V>,
    expected: &BTreeMap<K, V>,
) -> Result<(), String> {
    let same_keys = actual.keys().eq(expected.keys());
    let same_values = actual.values().zip(expected.values()).all(|(&a, &e)| within_tolerance(a.into(), e.into()));
    if same_keys && same_values {
        Ok(())
    } else {
        let a: Vec<_> = actual.iter().map(|(k, &v)| (k, v.into())).collect();
        let e: Vec<_> = expected.iter().map(|(k, &v)| (k, v.into())).collect();
        Err(format!("{what}: got {a:?}, expected {e:?}"))
    }
}

fn check(what: &str, cond: bool) -> Result<(), String> {
    cond.then_some(()).ok_or_else(|| what.to_string())
}

fn family(p: u32, l: u32) -> (Family, FieldContext) {
    let fam = Family::new(p, l).unwrap();
    let field = fam.field().unwrap();
    (fam, field)
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn criterion_1() -> Outcome {
    for (p, l) in [(2, 1), (2, 2), (3, 1), (5, 1)] {
        let (fam, f) = family(p, l);
        let closed = diff_spectrum_closed(fam).map_err(err)?;
        for d in [fam.d(), fam.d1()] {
            let oracle = diff_spectrum_oracle(&f, d as i64).map_err(err)?;
            check_map(&format!("spectrum p={p} l={l} d={d}"), oracle.counts(), closed.counts())?;
        }
    }
    let s = diff_spectrum_oracle(&family(3, 1).1, 21).map_err(err)?;
    check_map("(3,1) spectrum", s.counts(), &BTreeMap::from([(0, 47), (2, 30), (3, 1), (6, 3)]))?;
    let s = diff_spectrum_oracle(&family(2, 1).1, 6).map_err(err)?;
    check_map("(2,1) merged spectrum", s.counts(), &BTreeMap::from([(0, 8), (2, 8)]))?;
    Ok("4 families, d and d1 oracles equal the closed form".into())
}

fn criterion_2() -> Outcome {
    for (p, l) in [(2, 1), (2, 2), (3, 1), (5, 1)] {
        let (fam, f) = family(p, l);
        let r = classify_derivative_counts(&f, fam.d1() as i64).map_err(err)?;
        let tag = format!("p={p} l={l}");
        check_num(&format!("{tag} delta(1)"), r.delta_one, fam.q_l())?;
        check_num(&format!("{tag} |mu \\ 1|"), r.mu_members, fam.q_l())?;
        check_num(&format!("{tag} mu members with p^2l - p^l"), r.mu_matching, fam.q_l())?;
        check_num(&format!("{tag} other counts outside {{0,2}}"), r.other_violations, 0)?;
    }
    Ok("every b classified on 4 fields".into())
}

fn criterion_3() -> Outcome {
    let mut worst = Vec::new();
    for (p, l) in [(2, 1), (3, 1), (5, 1)] {
        let (fam, f) = family(p, l);
        let s = c_diff_sweep(&f, fam.d1() as i64).map_err(err)?;
        check_num("c values swept", s.checked, fam.field_size() - fam.q_l() - 1)?;
        check(&format!("bound fails at p={p} l={l}"), s.bound_holds)?;
        check(&format!("gcd term {} exceeds 3", s.gcd_term), s.gcd_term <= 3)?;
        worst.push(format!("{}<={}", s.max_uniformity, s.bound));
    }
    Ok(format!("max uniformity vs bound: {}", worst.join(", ")))
}

fn criterion_4() -> Outcome {
    for (p, l) in [(2, 1), (5, 1)] {
        let (fam, f) = family(p, l);
        let d1 = fam.d1() as i64;
        let oracle = distribution_oracle(&f, d1, DEFAULT_PAIR_BUDGET).map_err(err)?;
        let reduced = distribution_reduced(&f, d1).map_err(err)?;
        let closed = distribution_closed(fam).map_err(err)?;
        check_map(&format!("oracle vs closed p={p}"), oracle.values(), closed.values())?;
        check_map(&format!("reduced vs closed p={p}"), reduced.values(), closed.values())?;
        check_num("domain size", oracle.total(), fam.field_size() * (fam.field_size() - 1))?;
    }
    let merged = distribution_closed(Family::new(2, 1).unwrap()).map_err(err)?;
    check_map("(2,1) merged values", merged.values(), &BTreeMap::from([(-8, 5), (-4, 60), (0, 60), (4, 100), (8, 15)]))?;
    for (p, l) in [(2, 3), (11, 1)] {
        let (fam, f) = family(p, l);
        let reduced = distribution_reduced(&f, fam.d1() as i64).map_err(err)?;
        check_map(&format!("reduced vs closed p={p} l={l}"), reduced.values(), distribution_closed(fam).map_err(err)?.values())?;
    }
    Ok("oracle = reduced = closed on (2,1),(5,1); reduced = closed on (2,3),(11,1)".into())
}

fn criterion_5() -> Outcome {
    for (p, l) in [(2, 1), (5, 1)] {
        let (fam, f) = family(p, l);
        let m = moments(&f, fam.d1() as i64, DEFAULT_PAIR_BUDGET).map_err(err)?;
        let e = Moments::expected(fam);
        check_num("sum S", m.m1, e.m1)?;
        check_num("sum S^2", m.m2, e.m2)?;
        check_num("sum S^3", m.m3, e.m3)?;
    }
    let e = Moments::expected(Family::new(2, 1).unwrap());
    check_num("(2,1) m1", e.m1, 256)?;
    check_num("(2,1) m2", e.m2, 4096)?;
    check_num("(2,1) m3", e.m3, 11776)?;
    Ok("three power sums exact on (2,1),(5,1)".into())
}

fn enumerator(pairs: &[(u64, u64)]) -> BTreeMap<u64, u64> {
    pairs.iter().copied().collect()
}

fn criterion_6() -> Outcome {
    type Case = (u32, u32, WeightMethod, (u64, u32, u64), &'static [(u64, u64)]);
    let cases: [Case; 4] = [
        (2, 1, WeightMethod::Direct, (15, 8, 4), &[(0, 1), (4, 15), (6, 100), (8, 75), (10, 60), (12, 5)]),
        (
            5,
            1,
            WeightMethod::Direct,
            (156, 8, 100),
            &[(0, 1), (100, 624), (105, 3120), (120, 128960), (125, 162240), (130, 62400), (135, 33280)],
        ),
        (
            2,
            3,
            WeightMethod::Direct,
            (4095, 24, 1792),
            &[(0, 1), (1792, 4095), (1824, 32760), (2016, 5580120), (2048, 7452900), (2080, 1834560), (2112, 1872780)],
        ),
        (
            11,
            1,
            WeightMethod::ViaSums,
            (1464, 8, 1210),
            &[
                (0, 1),
                (1210, 14640),
                (1221, 161040),
                (1320, 71394400),
                (1331, 98234400),
                (1342, 17714400),
                (1353, 26840000),
            ],
        ),
    ];
    for (p, l, method, (len, dim, dist), want) in cases {
        let (fam, f) = family(p, l);
        let tag = format!("p={p} l={l}");
        let w = weight_distribution(&f, fam.d1() as i64, method, DEFAULT_PAIR_BUDGET).map_err(err)?;
        let closed = weight_distribution_closed(fam).map_err(err)?;
        check_map(&format!("{tag} {method:?}"), w.weights(), &enumerator(want))?;
        check_map(&format!("{tag} closed"), closed.weights(), &enumerator(want))?;
        check_num(&format!("{tag} length"), w.length, len)?;
        check_num(&format!("{tag} dimension"), w.dimension, dim)?;
        check_num(&format!("{tag} min distance"), w.min_distance().unwrap_or(0), dist)?;
    }
    Ok("[15,8,4], [156,8,100], [4095,24,1792] direct; [1464,8,1210] via sums; all equal closed".into())
}

fn criterion_7() -> Outcome {
    let mut tested = Vec::new();
    for (p, l, sel) in [
        (2, 1, Selection::Exhaustive),
        (3, 1, Selection::Exhaustive),
        (5, 1, Selection::Sampled { count: SHIFT_SAMPLES, seed: 1 }),
        (2, 3, Selection::Sampled { count: SHIFT_SAMPLES, seed: 2 }),
    ] {
        let (fam, f) = family(p, l);
        let r = constacyclic_check(&f, fam.d1() as i64, sel).map_err(err)?;
        match sel {
            Selection::Exhaustive => check_num("exhaustive count", r.tested, fam.field_size().pow(2))?,
            _ => check(&format!("only {} samples", r.tested), r.tested >= SHIFT_SAMPLES)?,
        }
        tested.push(r.tested.to_string());
    }
    Ok(format!("shift closure on {} codewords", tested.join("/")))
}

fn criterion_8() -> Outcome {
    let mut per_case = [0u64; 5];
    let mut total = 0;
    for (p, n) in [(2, 4), (3, 4), (2, 8)] {
        let f = FieldContext::standard(p, n).map_err(err)?;
        let s = curve_sweep(&f).map_err(err)?;
        check_num(&format!("mismatches at {p}^{n}"), s.mismatches, 0)?;
        total += s.covered;
        for (a, b) in per_case.iter_mut().zip(s.per_case) {
            *a += b;
        }
    }
    for (case, count) in CurveCase::ALL.iter().zip(per_case) {
        check(&format!("case {case} never exercised"), count > 0)?;
    }
    let f = FieldContext::standard(2, 4).map_err(err)?;
    for (r1, r2, want) in [(0, 0, 60u64), (1, 2, 25)] {
        let spec = CurveSpec::from_classes(&f, 1, 2, 5, 5, r1, r2).map_err(err)?;
        check_num("spot oracle", count_points_oracle(&f, &spec).map_err(err)?, want)?;
        check_num("spot closed", count_points_closed(&spec).map_err(err)?.1, want)?;
    }
    Ok(format!("{total} covered configurations, per case {per_case:?}"))
}

fn criterion_9() -> Outcome {
    let mut pairs = 0;
    for m in [2, 3] {
        let f = FieldContext::standard(2, 2 * m).map_err(err)?;
        let s = quad_sweep(&f, m).map_err(err)?;
        check_num("pairs", s.pairs, f.mult_order().pow(2))?;
        check_num("disagreements", s.disagreements, 0)?;
        pairs += s.pairs;
    }
    let f = FieldContext::standard(2, 4).map_err(err)?;
    let q = powmap_core::QuadInMuQuery { m: 2, a: f.exp(2), b: f.exp(9) };
    check("(psi^2, psi^9) should qualify", powmap_core::curve::quad_roots_in_mu(&f, &q).map_err(err)?)?;
    let q = powmap_core::QuadInMuQuery { m: 2, a: Element::ONE, b: Element::ONE };
    check("(1, 1) should not qualify", !powmap_core::curve::quad_roots_in_mu(&f, &q).map_err(err)?)?;
    Ok(format!("{pairs} (a, b) pairs agree"))
}

fn criterion_10() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_powmap"))
            .args(["verify", "--preset", "desk"])
            .env_remove("POWMAP_CACHE_DIR")
            .output()
            .map_err(err)
    };
    let (a, b) = (run()?, run()?);
    check_num("first exit code", a.status.code().unwrap_or(-1), 0)?;
    check_num("second exit code", b.status.code().unwrap_or(-1), 0)?;
    check("reports differ between runs", a.stdout == b.stdout)?;
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).map_err(err)?;
    check("verify status is not pass", report["status"] == "pass")?;
    Ok(format!("{} identical bytes, {} checks passed", a.stdout.len(), report["passed"]))
}

type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        (1, "differential spectra", Duration::from_secs(10), criterion_1),
        (2, "derivative count classes", Duration::from_secs(10), criterion_2),
        (3, "c-differential bound", Duration::from_secs(60), criterion_3),
        (4, "exponential sum distributions", Duration::from_secs(300), criterion_4),
        (5, "moment identities", Duration::from_secs(60), criterion_5),
        (6, "weight enumerators", Duration::from_secs(300), criterion_6),
        (7, "constacyclic closure", Duration::from_secs(60), criterion_7),
        (8, "curve point counts", Duration::from_secs(60), criterion_8),
        (9, "quadratic roots in mu", Duration::from_secs(10), criterion_9),
        (10, "verify determinism", Duration::from_secs(300), criterion_10),
    ];
    let mut failures = Vec::new();
    for (id, title, limit, f) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > limit => Err(format!("took {elapsed:.1?}, limit {limit:?}")),
            other => other,
        };
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d.clone()),
            Err(e) => ("FAIL", e.clone()),
        };
        println!("criterion {id:>2} {status}: {title} (tolerance {TOLERANCE}, {elapsed:.2?}) {detail}");
        if outcome.is_err() {
            failures.push(id);
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
