use std::collections::BTreeMap;

use powmap_core::expsum::*;
use powmap_core::{Element, Family, FieldContext};

fn family(p: u32, l: u32) -> (Family, FieldContext) {
    let fam = Family::new(p, l).unwrap();
    let f = fam.field().unwrap();
    (fam, f)
}

#[test]
fn three_routes_agree_on_small_families() {
    for (p, l) in [(2, 1), (5, 1)] {
        let (fam, f) = family(p, l);
        let d1 = fam.d1() as i64;
        let oracle = distribution_oracle(&f, d1, DEFAULT_PAIR_BUDGET).unwrap();
        assert_eq!(oracle, distribution_reduced(&f, d1).unwrap());
        assert_eq!(oracle, distribution_closed(fam).unwrap());
        assert_eq!(oracle.total(), fam.field_size() * (fam.field_size() - 1));
    }
    let (fam, _) = family(2, 1);
    let want = BTreeMap::from([(-8, 5), (-4, 60), (0, 60), (4, 100), (8, 15)]);
    assert_eq!(distribution_closed(fam).unwrap().values(), &want);
}

#[test]
fn closed_multiplicities_before_merging() {
    let counts: Vec<u64> = closed_multiplicities(Family::new(2, 1).unwrap())
        .unwrap()
        .iter()
        .map(|&(_, c)| c)
        .collect();
    assert_eq!(counts, [5, 60, 60, 70, 30, 15]);
    let e = closed_multiplicities(Family::new(5, 1).unwrap()).unwrap();
    assert_eq!(e[5], (125, 624));
}

#[test]
fn reduced_matches_closed_on_larger_fields() {
    for (p, l) in [(2, 3), (11, 1)] {
        let (fam, f) = family(p, l);
        assert_eq!(distribution_reduced(&f, fam.d1() as i64).unwrap(), distribution_closed(fam).unwrap());
    }
}

#[test]
fn full_oracle_respects_the_budget() {
    let (fam, f) = family(11, 1);
    assert!(distribution_oracle(&f, fam.d1() as i64, DEFAULT_PAIR_BUDGET).is_err());
}

#[test]
fn moment_identities() {
    for (p, l) in [(2, 1), (5, 1)] {
        let (fam, f) = family(p, l);
        let r = moment_check(&f, fam.d1() as i64, DEFAULT_PAIR_BUDGET).unwrap();
        let dist = distribution_closed(fam).unwrap();
        assert_eq!(Moments::from_distribution(&dist, fam.field_size()), r.actual);
    }
    let (fam, _) = family(2, 1);
    assert_eq!(Moments::expected(fam), Moments { m1: 256, m2: 4096, m3: 11776 });
    let (fam, _) = family(5, 1);
    let five = |k: u32| 5i128.pow(k);
    assert_eq!(Moments::expected(fam), Moments { m1: five(8), m2: five(12), m3: five(13) + five(12) - five(9) });
}

#[test]
fn ncount_claims_hold_for_every_u() {
    for (p, l) in [(2, 1), (5, 1)] {
        let (fam, f) = family(p, l);
        let audit = ncount_audit(&f, fam.d1() as i64, f.nonzero()).unwrap();
        assert!(audit.holds(), "{audit:?}");
        assert_eq!(audit.pairs, fam.field_size() * (fam.field_size() - 1));
    }
    let (fam, f) = family(2, 3);
    let us = [Element::ONE, f.psi(), f.exp(2), f.exp(1000)];
    assert!(ncount_audit(&f, fam.d1() as i64, us).unwrap().holds());
}

#[test]
fn pointwise_sums() {
    let (fam, f) = family(2, 1);
    let d1 = fam.d1() as i64;
    assert_eq!(trace_counts(&f, d1, Element::ONE, Element::ONE).unwrap().counts(), &[12, 4]);
    assert_eq!(exp_sum(&f, d1, Element::ZERO, Element::ZERO).unwrap(), 16);
    assert_eq!(exp_sum_via_ncounts(&f, d1, Element::ONE, Element::ONE).unwrap(), 8);
    let (fam, f) = family(5, 1);
    let d1 = fam.d1() as i64;
    let c = trace_counts(&f, d1, Element::ZERO, f.exp(17)).unwrap();
    assert!(c.counts().iter().all(|&n| n == 125));
    assert_eq!(sum_from_ntriple(fam, NTriple { n_inf: 1, n0: 0, n1: 5 }).unwrap(), 125);
    assert_eq!(sum_from_ntriple(fam, NTriple { n_inf: 1, n0: 1, n1: 4 }).unwrap(), 100);
}

#[test]
fn quadratic_form_sums() {
    for (p, l) in [(2, 1), (3, 1), (2, 2)] {
        let (_, f) = family(p, l);
        for a in f.elements() {
            gauss_like(&f, a).unwrap();
        }
    }
}
