use powmap_core::codes::*;
use powmap_core::expsum::DEFAULT_PAIR_BUDGET;
use powmap_core::{Element, Family, FieldContext};

fn family(p: u32, l: u32) -> (Family, FieldContext) {
    let fam = Family::new(p, l).unwrap();
    let f = fam.field().unwrap();
    (fam, f)
}

#[test]
fn gf16_code_every_method() {
    let (fam, f) = family(2, 1);
    let d1 = fam.d1() as i64;
    let want = vec![(0, 1), (4, 15), (6, 100), (8, 75), (10, 60), (12, 5)];
    for m in [WeightMethod::Direct, WeightMethod::ViaSums, WeightMethod::Closed] {
        let w = weight_distribution(&f, d1, m, DEFAULT_PAIR_BUDGET).unwrap();
        assert_eq!(w.enumerator(), want);
        assert_eq!((w.length, w.dimension, w.min_distance()), (15, 8, Some(4)));
    }
}

#[test]
fn p5_example_enumerator_by_direct_enumeration() {
    let (fam, f) = family(5, 1);
    let w = weight_distribution(&f, fam.d1() as i64, WeightMethod::Direct, DEFAULT_PAIR_BUDGET).unwrap();
    let want = vec![(0, 1), (100, 624), (105, 3120), (120, 128960), (125, 162240), (130, 62400), (135, 33280)];
    assert_eq!(w.enumerator(), want);
    assert_eq!((w.length, w.dimension, w.min_distance()), (156, 8, Some(100)));
    assert_eq!(weight_distribution_closed(fam).unwrap(), w);
}

#[test]
fn p11_example_enumerator_without_enumeration() {
    let (fam, f) = family(11, 1);
    let want = vec![
        (0, 1),
        (1210, 14640),
        (1221, 161040),
        (1320, 71394400),
        (1331, 98234400),
        (1342, 17714400),
        (1353, 26840000),
    ];
    let closed = weight_distribution_closed(fam).unwrap();
    assert_eq!(closed.enumerator(), want);
    assert_eq!((closed.length, closed.dimension, closed.min_distance()), (1464, 8, Some(1210)));
    let sums = weight_distribution(&f, fam.d1() as i64, WeightMethod::ViaSums, DEFAULT_PAIR_BUDGET).unwrap();
    assert_eq!(sums, closed);
    assert!(weight_distribution(&f, fam.d1() as i64, WeightMethod::Direct, DEFAULT_PAIR_BUDGET).is_err());
}

#[test]
fn direct_weights_match_sum_weights_word_by_word() {
    for (p, n, d1) in [(2, 4, 6), (3, 4, 21)] {
        let f = FieldContext::standard(p, n).unwrap();
        for u in f.elements().step_by(2) {
            for v in f.elements().step_by(3) {
                for variant in [CodeVariant::Full, CodeVariant::Short] {
                    let c = codeword(&f, d1, u, v, variant).unwrap();
                    assert_eq!(c.weight(), weight_via_sum(&f, d1, u, v, variant).unwrap());
                }
            }
        }
    }
}

#[test]
fn short_weight_of_linear_words() {
    let (fam, f) = family(5, 1);
    for v in f.nonzero().step_by(37) {
        assert_eq!(weight_via_sum(&f, fam.d1() as i64, Element::ZERO, v, CodeVariant::Short).unwrap(), 125);
    }
}

#[test]
fn constacyclic_closure() {
    for (p, l) in [(2, 1), (3, 1)] {
        let (fam, f) = family(p, l);
        let r = constacyclic_check(&f, fam.d1() as i64, Selection::Exhaustive).unwrap();
        assert!(r.exhaustive);
        assert_eq!(r.tested, fam.field_size().pow(2));
        assert_eq!(r.cyclic, p == 2);
    }
    let (fam, f) = family(5, 1);
    let r = constacyclic_check(&f, fam.d1() as i64, Selection::Sampled { count: 2000, seed: 7 }).unwrap();
    assert!(!r.cyclic && r.tested == 2000);
}

#[test]
fn concatenation_and_dimension() {
    let (fam, f) = family(5, 1);
    let d1 = fam.d1() as i64;
    for (u, v) in [(1, 1), (0, 3), (17, 0), (300, 411)] {
        assert!(concatenation_holds(&f, d1, f.exp(u), f.exp(v)).unwrap());
    }
    assert_eq!(dimension_check(&f, d1).unwrap(), 8);
    let (fam, f) = family(2, 1);
    assert_eq!(dimension_check(&f, fam.d1() as i64).unwrap(), 8);
    let f = FieldContext::standard(3, 4).unwrap();
    assert_eq!(generator_rank(&f, 21).unwrap(), 8);
}
