//! Points on diagonal curves `alpha x^n1 + beta y^n2 + 1 = 0`, and a root
//! criterion for quadratics over binary fields.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{gcd, lcm};
use crate::field::{Element, FieldContext, FieldParams};

/// A diagonal curve over GF(p^n) with `n = 2ks` and `lcm(n1, n2) | p^s + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveSpec {
    pub field: FieldParams,
    pub k: u32,
    pub s: u32,
    pub n1: u64,
    pub n2: u64,
    pub r1: u64,
    pub r2: u64,
    pub t: u64,
    pub alpha: Element,
    pub beta: Element,
}

impl CurveSpec {
    /// Validates the shape and derives `r1 = ind(alpha) mod n1`, `r2 = ind(beta) mod n2`.
    pub fn new(field: &FieldContext, k: u32, s: u32, n1: u64, n2: u64, alpha: Element, beta: Element) -> Result<Self> {
        if k == 0 || s == 0 || 2 * k * s != field.n() {
            return Err(Error::Precondition(format!("n = {} is not 2ks for k={k}, s={s}", field.n())));
        }
        if n1 == 0 || n2 == 0 {
            return Err(Error::Precondition("n1 and n2 must be positive".into()));
        }
        let ps1 = (field.p() as u64).pow(s) + 1;
        if !ps1.is_multiple_of(lcm(n1, n2)) {
            return Err(Error::Precondition(format!("lcm({n1}, {n2}) does not divide {ps1}")));
        }
        if alpha.is_zero() || beta.is_zero() {
            return Err(Error::Precondition("alpha and beta must be nonzero".into()));
        }
        Ok(CurveSpec {
            field: field.params().clone(),
            k,
            s,
            n1,
            n2,
            r1: field.coset_class(alpha, n1)?,
            r2: field.coset_class(beta, n2)?,
            t: gcd(n1, n2),
            alpha,
            beta,
        })
    }

    /// A curve with `alpha = psi^r1` and `beta = psi^r2`.
    pub fn from_classes(field: &FieldContext, k: u32, s: u32, n1: u64, n2: u64, r1: u64, r2: u64) -> Result<Self> {
        if r1 >= n1.max(1) || r2 >= n2.max(1) {
            return Err(Error::Precondition(format!("need r1 < n1 and r2 < n2, got r1={r1}, r2={r2}")));
        }
        Self::new(field, k, s, n1, n2, field.exp(r1), field.exp(r2))
    }

    fn check_field(&self, field: &FieldContext) -> Result<()> {
        if field.params() != &self.field {
            return Err(Error::Precondition("curve spec belongs to a different field".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveCase {
    I,
    Ii,
    Iii,
    Iv,
    V,
}

impl CurveCase {
    pub const ALL: [CurveCase; 5] = [CurveCase::I, CurveCase::Ii, CurveCase::Iii, CurveCase::Iv, CurveCase::V];

    pub fn label(self) -> &'static str {
        match self {
            CurveCase::I => "i",
            CurveCase::Ii => "ii",
            CurveCase::Iii => "iii",
            CurveCase::Iv => "iv",
            CurveCase::V => "v",
        }
    }
}

impl fmt::Display for CurveCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Picks the branch of the closed form. Branches are tried in order; a
/// spec matching none of them is reported as not covered.
pub fn curve_case(spec: &CurveSpec) -> Result<CurveCase> {
    let (r1, r2, t) = (spec.r1, spec.r2, spec.t);
    let diff_divisible = (r1 as i64 - r2 as i64).rem_euclid(t as i64) == 0;
    let case = match (r1 == 0, r2 == 0) {
        (true, true) => Some(CurveCase::I),
        (true, false) if r2 % t != 0 => Some(CurveCase::Ii),
        (false, true) if r1 % t != 0 => Some(CurveCase::Iii),
        (false, false) if !diff_divisible => Some(CurveCase::Iv),
        (false, false) => Some(CurveCase::V),
        _ => None,
    };
    case.ok_or_else(|| {
        Error::NotCovered(format!("n1={}, n2={}, r1={r1}, r2={r2}, t={t}", spec.n1, spec.n2))
    })
}

/// Closed-form point count and the branch that produced it.
pub fn count_points_closed(spec: &CurveSpec) -> Result<(CurveCase, u64)> {
    let case = curve_case(spec)?;
    let p = spec.field.p as i128;
    let q = p.pow(spec.field.n);
    let h = p.pow(spec.field.n / 2);
    // sign = (-1)^(k-1); (-1)^k terms use -sign.
    let sign: i128 = if spec.k % 2 == 1 { 1 } else { -1 };
    let (n1, n2, t) = (spec.n1 as i128, spec.n2 as i128, spec.t as i128);
    let value = match case {
        CurveCase::I => q + sign * ((n1 - 1) * (n2 - 1) + 1 - t) * h - t + 1,
        CurveCase::Ii => q - sign * (n1 - 2) * h + 1,
        CurveCase::Iii => q - sign * (n2 - 2) * h + 1,
        CurveCase::Iv => q + sign * 2 * h + 1,
        CurveCase::V => q - sign * (t - 2) * h - t + 1,
    };
    u64::try_from(value)
        .map(|v| (case, v))
        .map_err(|_| Error::Verification(format!("negative point count {value}")))
}

/// `#{x : c x^e = a}` for every `a`, indexed by [`Element::index`].
fn preimage_counts(field: &FieldContext, c: Element, e: u64) -> Vec<u64> {
    let mut counts = vec![0u64; field.order() as usize];
    for x in field.elements() {
        counts[field.mul(c, field.pow_u(x, e)).index()] += 1;
    }
    counts
}

/// Exact point count by folding the image multiplicities of the two
/// monomials: `sum_a #{alpha x^n1 = a} * #{beta y^n2 = -1 - a}`.
pub fn count_points_oracle(field: &FieldContext, spec: &CurveSpec) -> Result<u64> {
    spec.check_field(field)?;
    let c1 = preimage_counts(field, spec.alpha, spec.n1);
    let c2 = preimage_counts(field, spec.beta, spec.n2);
    Ok(fold_counts(field, &c1, &c2))
}

fn fold_counts(field: &FieldContext, c1: &[u64], c2: &[u64]) -> u64 {
    let minus_one = field.neg(Element::ONE);
    field
        .elements()
        .map(|a| c1[a.index()] * c2[field.sub(minus_one, a).index()])
        .sum()
}

/// Point count by the plain double loop over `(x, y)`.
pub fn count_points_naive(field: &FieldContext, spec: &CurveSpec) -> Result<u64> {
    spec.check_field(field)?;
    let mut count = 0;
    for x in field.elements() {
        let ax = field.add(field.mul(spec.alpha, field.pow_u(x, spec.n1)), Element::ONE);
        for y in field.elements() {
            if field.add(ax, field.mul(spec.beta, field.pow_u(y, spec.n2))).is_zero() {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Outcome of comparing the closed form with the oracle on one spec.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveComparison {
    pub curve: CurveSpec,
    pub oracle: u64,
    pub closed: Option<u64>,
    pub case: Option<CurveCase>,
    #[serde(rename = "match")]
    pub matches: bool,
}

pub fn compare_curve(field: &FieldContext, spec: &CurveSpec) -> Result<CurveComparison> {
    let oracle = count_points_oracle(field, spec)?;
    let (case, closed) = match count_points_closed(spec) {
        Ok((case, v)) => (Some(case), Some(v)),
        Err(Error::NotCovered(_)) => (None, None),
        Err(e) => return Err(e),
    };
    Ok(CurveComparison {
        curve: spec.clone(),
        oracle,
        closed,
        case,
        matches: closed == Some(oracle),
    })
}

/// Every `(k, s, n1, n2)` admissible over the field: `2ks = n` and
/// `lcm(n1, n2) | p^s + 1`.
pub fn admissible_shapes(field: &FieldContext) -> Vec<(u32, u32, u64, u64)> {
    let n = field.n();
    let mut out = Vec::new();
    for s in 1..=n / 2 {
        if !n.is_multiple_of(2 * s) {
            continue;
        }
        let k = n / (2 * s);
        let ps1 = (field.p() as u64).pow(s) + 1;
        let divs: Vec<u64> = (1..=ps1).filter(|d| ps1 % d == 0).collect();
        for &n1 in &divs {
            for &n2 in &divs {
                if ps1 % lcm(n1, n2) == 0 {
                    out.push((k, s, n1, n2));
                }
            }
        }
    }
    out
}

/// Totals from an exhaustive sweep over shapes and all nonzero `alpha, beta`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CurveSweep {
    pub shapes: u64,
    pub configurations: u64,
    pub covered: u64,
    pub not_covered: u64,
    /// Covered configurations per branch, in the order i..v.
    pub per_case: [u64; 5],
    pub mismatches: u64,
    /// Up to a few offending comparisons, for diagnostics.
    pub examples: Vec<CurveComparison>,
}

impl CurveSweep {
    pub fn holds(&self) -> bool {
        self.mismatches == 0
    }

    fn merge(mut self, other: CurveSweep) -> CurveSweep {
        self.shapes += other.shapes;
        self.configurations += other.configurations;
        self.covered += other.covered;
        self.not_covered += other.not_covered;
        for (a, b) in self.per_case.iter_mut().zip(other.per_case) {
            *a += b;
        }
        self.mismatches += other.mismatches;
        self.examples.extend(other.examples);
        self.examples.truncate(8);
        self
    }
}

/// Compares closed form and oracle for every admissible shape and every
/// `alpha, beta` in `F*`.
pub fn curve_sweep(field: &FieldContext) -> Result<CurveSweep> {
    let shapes = admissible_shapes(field);
    let nonzero: Vec<Element> = field.nonzero().collect();
    let mut total = CurveSweep::default();
    for (k, s, n1, n2) in shapes {
        let c1: Vec<Vec<u64>> = nonzero.par_iter().map(|&a| preimage_counts(field, a, n1)).collect();
        let c2: Vec<Vec<u64>> = nonzero.par_iter().map(|&b| preimage_counts(field, b, n2)).collect();
        let part = nonzero
            .par_iter()
            .zip(c1.par_iter())
            .map(|(&alpha, ca)| -> Result<CurveSweep> {
                let mut acc = CurveSweep::default();
                for (&beta, cb) in nonzero.iter().zip(&c2) {
                    let spec = CurveSpec::new(field, k, s, n1, n2, alpha, beta)?;
                    let oracle = fold_counts(field, ca, cb);
                    acc.configurations += 1;
                    match count_points_closed(&spec) {
                        Ok((case, closed)) => {
                            acc.covered += 1;
                            acc.per_case[case as usize] += 1;
                            if closed != oracle {
                                acc.mismatches += 1;
                                if acc.examples.len() < 8 {
                                    acc.examples.push(CurveComparison {
                                        curve: spec,
                                        oracle,
                                        closed: Some(closed),
                                        case: Some(case),
                                        matches: false,
                                    });
                                }
                            }
                        }
                        Err(Error::NotCovered(_)) => acc.not_covered += 1,
                        Err(e) => return Err(e),
                    }
                }
                Ok(acc)
            })
            .try_reduce(CurveSweep::default, |a, b| Ok(a.merge(b)))?;
        total = total.merge(CurveSweep { shapes: 1, ..part });
    }
    Ok(total)
}

/// Does `x^2 + a x + b` have both roots in `mu_{2^m+1}` over GF(2^2m)?
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QuadInMuQuery {
    pub m: u32,
    pub a: Element,
    pub b: Element,
}

fn check_quad(field: &FieldContext, q: &QuadInMuQuery) -> Result<u64> {
    if field.p() != 2 || q.m == 0 || field.n() != 2 * q.m {
        return Err(Error::Precondition(format!(
            "need GF(2^2m) with m = {}, got GF({}^{})",
            q.m,
            field.p(),
            field.n()
        )));
    }
    if q.a.is_zero() || q.b.is_zero() {
        return Err(Error::Precondition("a and b must be nonzero".into()));
    }
    Ok((1u64 << q.m) + 1)
}

/// The criterion `b = a^(1 - 2^m)` and `Tr_1^m(a^(-2^m - 1)) = 1`.
pub fn quad_roots_in_mu(field: &FieldContext, q: &QuadInMuQuery) -> Result<bool> {
    let e = check_quad(field, q)? as i64;
    if q.b != field.pow(q.a, 2 - e)? {
        return Ok(false);
    }
    Ok(field.subfield_trace(field.pow(q.a, -e)?, q.m)? == 1)
}

/// Counts the roots of `x^2 + a x + b` lying in `mu_{2^m+1}` by enumeration.
pub fn quad_roots_in_mu_oracle(field: &FieldContext, q: &QuadInMuQuery) -> Result<bool> {
    let e = check_quad(field, q)?;
    let step = field.mult_order() / e;
    let roots = (0..e)
        .map(|j| field.exp(j * step))
        .filter(|&x| field.add(field.add(field.mul(x, x), field.mul(q.a, x)), q.b).is_zero())
        .count();
    // With a != 0 the two roots are distinct, so "both roots" means two.
    Ok(roots == 2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadSweep {
    pub pairs: u64,
    pub criterion_true: u64,
    pub disagreements: u64,
}

/// Criterion versus oracle over all `(a, b)` in `F* x F*`.
pub fn quad_sweep(field: &FieldContext, m: u32) -> Result<QuadSweep> {
    let nonzero: Vec<Element> = field.nonzero().collect();
    let rows = nonzero
        .par_iter()
        .map(|&a| -> Result<(u64, u64, u64)> {
            let (mut pairs, mut yes, mut bad) = (0, 0, 0);
            for &b in &nonzero {
                let q = QuadInMuQuery { m, a, b };
                let c = quad_roots_in_mu(field, &q)?;
                pairs += 1;
                yes += c as u64;
                bad += (c != quad_roots_in_mu_oracle(field, &q)?) as u64;
            }
            Ok((pairs, yes, bad))
        })
        .collect::<Result<Vec<_>>>()?;
    let (pairs, criterion_true, disagreements) =
        rows.into_iter().fold((0, 0, 0), |acc, r| (acc.0 + r.0, acc.1 + r.1, acc.2 + r.2));
    Ok(QuadSweep { pairs, criterion_true, disagreements })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf16() -> FieldContext {
        FieldContext::standard(2, 4).unwrap()
    }

    #[test]
    fn spot_counts_over_gf16() {
        let f = gf16();
        let s = CurveSpec::from_classes(&f, 1, 2, 5, 5, 0, 0).unwrap();
        assert_eq!(count_points_oracle(&f, &s).unwrap(), 60);
        assert_eq!(count_points_naive(&f, &s).unwrap(), 60);
        assert_eq!(count_points_closed(&s).unwrap(), (CurveCase::I, 60));

        let s = CurveSpec::from_classes(&f, 1, 2, 5, 5, 1, 2).unwrap();
        assert_eq!(count_points_oracle(&f, &s).unwrap(), 25);
        assert_eq!(count_points_closed(&s).unwrap(), (CurveCase::Iv, 25));
    }

    #[test]
    fn lines_have_q_points() {
        let f = FieldContext::standard(3, 4).unwrap();
        for k in [1, 2] {
            let s = CurveSpec::new(&f, k, 2 / k, 1, 1, f.exp(7), f.exp(30)).unwrap();
            assert_eq!(count_points_oracle(&f, &s).unwrap(), 81);
            assert_eq!(count_points_closed(&s).unwrap(), (CurveCase::I, 81));
        }
    }

    #[test]
    fn preconditions() {
        let f = gf16();
        assert!(CurveSpec::from_classes(&f, 1, 1, 1, 1, 0, 0).is_err());
        assert!(CurveSpec::from_classes(&f, 1, 2, 3, 1, 0, 0).is_err());
        assert!(CurveSpec::new(&f, 1, 2, 5, 5, Element::ZERO, Element::ONE).is_err());
        assert!(CurveSpec::from_classes(&f, 1, 2, 5, 5, 5, 0).is_err());
    }

    #[test]
    fn uncovered_branch_is_reported() {
        // r1 != 0, r2 = 0 and t | r1 is none of the five branches.
        let f = FieldContext::standard(3, 4).unwrap();
        let s = CurveSpec::from_classes(&f, 1, 2, 10, 2, 2, 0).unwrap();
        assert_eq!(s.t, 2);
        assert!(matches!(curve_case(&s), Err(Error::NotCovered(_))));
        let c = compare_curve(&f, &s).unwrap();
        assert!(c.closed.is_none() && !c.matches);
    }

    #[test]
    fn oracle_agrees_with_double_loop() {
        let f = gf16();
        for (n1, n2) in [(1, 5), (5, 1), (3, 3), (1, 3)] {
            let s = if 5 % lcm(n1, n2) == 0 { 2 } else { 1 };
            let k = 2 / s;
            for (a, b) in [(0, 0), (1, 2), (4, 7)] {
                let spec = CurveSpec::new(&f, k, s, n1, n2, f.exp(a), f.exp(b)).unwrap();
                assert_eq!(count_points_oracle(&f, &spec).unwrap(), count_points_naive(&f, &spec).unwrap());
            }
        }
    }

    #[test]
    fn shapes_of_gf16() {
        let shapes = admissible_shapes(&gf16());
        // s = 1: divisors of 3; s = 2: divisors of 5.
        assert_eq!(shapes.len(), 8);
        assert!(shapes.contains(&(1, 2, 5, 5)) && shapes.contains(&(2, 1, 3, 1)));
    }

    #[test]
    fn quad_examples() {
        let f = gf16();
        let q = QuadInMuQuery { m: 2, a: Element::ONE, b: Element::ONE };
        assert!(!quad_roots_in_mu(&f, &q).unwrap());
        assert!(!quad_roots_in_mu_oracle(&f, &q).unwrap());
        let q = QuadInMuQuery { m: 2, a: f.exp(2), b: f.exp(9) };
        assert!(quad_roots_in_mu(&f, &q).unwrap());
        assert!(quad_roots_in_mu_oracle(&f, &q).unwrap());
        let q = QuadInMuQuery { m: 2, a: f.exp(2), b: f.exp(8) };
        assert!(!quad_roots_in_mu(&f, &q).unwrap());
        let bad = QuadInMuQuery { m: 3, a: Element::ONE, b: Element::ONE };
        assert!(quad_roots_in_mu(&f, &bad).is_err());
    }
}
