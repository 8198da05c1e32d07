use std::collections::BTreeMap;

use powmap_core::spectrum::*;
use powmap_core::{Element, Family, FieldContext};

const FAMILIES: [(u32, u32); 4] = [(2, 1), (2, 2), (3, 1), (5, 1)];

type Case = (u32, u32, i64, &'static [(u64, u64)]);

#[test]
fn oracle_matches_closed_form_for_d_and_d1() {
    for (p, l) in FAMILIES {
        let fam = Family::new(p, l).unwrap();
        let f = fam.field().unwrap();
        let closed = diff_spectrum_closed(fam).unwrap();
        closed.check_identities().unwrap();
        for d in [fam.d(), fam.d1()] {
            let s = diff_spectrum_oracle(&f, d as i64).unwrap();
            s.check_identities().unwrap();
            assert_eq!(s, closed, "p={p} l={l} d={d}");
        }
    }
}

#[test]
fn brute_force_spectra() {
    let cases: [Case; 4] = [
        (2, 4, 3, &[(0, 8), (2, 8)]),
        (3, 4, 7, &[(0, 47), (2, 30), (3, 1), (6, 3)]),
        (2, 8, 13, &[(0, 149), (2, 102), (4, 1), (12, 4)]),
        (5, 4, 21, &[(0, 359), (2, 260), (5, 1), (20, 5)]),
    ];
    for (p, n, d, want) in cases {
        let f = FieldContext::standard(p, n).unwrap();
        let s = diff_spectrum_oracle(&f, d).unwrap();
        assert_eq!(s.counts(), &want.iter().copied().collect::<BTreeMap<_, _>>());
    }
}

#[test]
fn audit_over_every_a_agrees() {
    for (p, n, d) in [(2, 4, 6), (3, 4, 21)] {
        let f = FieldContext::standard(p, n).unwrap();
        assert_eq!(diff_spectrum_audit(&f, d).unwrap(), diff_spectrum_oracle(&f, d).unwrap());
    }
}

#[test]
fn frobenius_twists_share_spectra() {
    for (p, n, d) in [(2, 6, 5), (3, 4, 5), (2, 8, 7)] {
        let f = FieldContext::standard(p, n).unwrap();
        let base = diff_spectrum_oracle(&f, d).unwrap();
        let mut e = d;
        for _ in 0..n {
            e = e * p as i64 % f.mult_order() as i64;
            assert_eq!(diff_spectrum_oracle(&f, e).unwrap(), base);
        }
    }
}

#[test]
fn per_b_classification() {
    for (p, l) in FAMILIES {
        let fam = Family::new(p, l).unwrap();
        let f = fam.field().unwrap();
        let r = classify_derivative_counts(&f, fam.d1() as i64).unwrap();
        assert!(r.holds, "{r:?}");
        assert_eq!(r.delta_one, fam.q_l());
    }
    let f = FieldContext::standard(3, 4).unwrap();
    assert_eq!(delta_b(&f, 21, Element::ONE).unwrap(), 3);
    assert_eq!(delta_b(&f, 21, f.exp(20)).unwrap(), 6);
    for b in f.elements().filter(|&b| !f.in_mu(b, 4)) {
        assert!(matches!(delta_b(&f, 21, b).unwrap(), 0 | 2));
    }
}

#[test]
fn c_differential_bound() {
    for (p, l) in [(2, 1), (3, 1), (5, 1)] {
        let fam = Family::new(p, l).unwrap();
        let f = fam.field().unwrap();
        let sweep = c_diff_sweep(&f, fam.d1() as i64).unwrap();
        assert!(sweep.bound_holds);
        assert_eq!(sweep.bound, (fam.q_l() + 1).pow(2));
        assert_eq!(sweep.checked, fam.field_size() - fam.q_l() - 1);
        assert!(sweep.gcd_term <= 3);
    }
}

#[test]
fn c_zero_counts_preimages() {
    let f = FieldContext::standard(2, 4).unwrap();
    for b in f.nonzero() {
        let expect = if f.coset_class(b, 3).unwrap() == 0 { 3 } else { 0 };
        assert_eq!(c_delta(&f, 6, Element::ZERO, b).unwrap(), expect);
    }
    let r = c_diff_uniformity(&f, 6, Element::ZERO).unwrap();
    assert_eq!(r.uniformity, 3);
    let r = c_diff_uniformity(&f, 6, f.psi()).unwrap();
    assert!(r.uniformity <= 9 && r.bound == Some(9));
}
