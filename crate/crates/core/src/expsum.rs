//! The exponential sum `S(u, v) = sum_x zeta_p^Tr(u x^d1 - v x)`.
//!
//! Sums are never evaluated in floating point. A sum is carried as the vector
//! of trace-value counts `N_j = #{x : Tr(u x^d1 - v x) = j}`; it is a rational
//! integer exactly when `N_1 = ... = N_{p-1}`, and then equals `N_0 - N_1`.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{gcd, Family};
use crate::field::{Element, FieldContext};

/// Default limit on the number of `(u, v)` pairs a full sweep may evaluate.
pub const DEFAULT_PAIR_BUDGET: u128 = 1 << 26;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceCountVector(Vec<u64>);

impl TraceCountVector {
    pub fn new(counts: Vec<u64>) -> Self {
        TraceCountVector(counts)
    }

    pub fn counts(&self) -> &[u64] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn to_sum_value(&self) -> SumValue {
        let n1 = self.0.get(1).copied().unwrap_or(0);
        SumValue {
            value: self.0[0] as i64 - n1 as i64,
            rational: self.0[1..].iter().all(|&c| c == n1),
        }
    }

    /// The sum as an integer, or an error if it is not rational.
    pub fn value(&self) -> Result<i64> {
        let s = self.to_sum_value();
        if !s.rational {
            return Err(Error::Verification(format!("irrational exponential sum, counts {:?}", self.0)));
        }
        Ok(s.value)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SumValue {
    pub value: i64,
    pub rational: bool,
}

/// Trace-value counts of `u x^d1 - v x` by one pass over the field.
pub fn trace_counts(field: &FieldContext, d1: i64, u: Element, v: Element) -> Result<TraceCountVector> {
    let mut counts = vec![0u64; field.p() as usize];
    for x in field.elements() {
        let arg = field.sub(field.mul(u, field.pow(x, d1)?), field.mul(v, x));
        counts[field.trace(arg) as usize] += 1;
    }
    Ok(TraceCountVector(counts))
}

pub fn exp_sum(field: &FieldContext, d1: i64, u: Element, v: Element) -> Result<i64> {
    trace_counts(field, d1, u, v)?.value()
}

/// Value of `sum_y zeta^Tr(a y^(p^l+1))` predicted from the class of `a`:
/// `p^n` for `a = 0`, `-p^3l` for nonzero `(p^l+1)`-th powers, `p^2l` otherwise.
pub fn gauss_like_closed(field: &FieldContext, a: Element) -> Result<i64> {
    let fam = Family::of_field(field)?;
    if a.is_zero() {
        return Ok(fam.pl(4) as i64);
    }
    Ok(if field.coset_class(a, fam.q_l() + 1)? == 0 {
        -(fam.pl(3) as i64)
    } else {
        fam.pl(2) as i64
    })
}

/// Brute-force `sum_y zeta^Tr(a y^(p^l+1))`, checked against
/// [`gauss_like_closed`].
pub fn gauss_like(field: &FieldContext, a: Element) -> Result<i64> {
    let fam = Family::of_field(field)?;
    let e = fam.q_l() + 1;
    let mut counts = vec![0u64; field.p() as usize];
    for y in field.elements() {
        counts[field.trace(field.mul(a, field.pow_u(y, e))) as usize] += 1;
    }
    let value = TraceCountVector(counts).value()?;
    let expected = gauss_like_closed(field, a)?;
    if value != expected {
        return Err(Error::Verification(format!(
            "quadratic-form sum at a = {a} is {value}, expected {expected}"
        )));
    }
    Ok(value)
}

/// How many of `u psi^(d1 j) - v psi^j`, `0 <= j <= p^l`, fall in `{0}`, in
/// the nonzero `(p^l+1)`-th powers, and in the remaining nonzero elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NTriple {
    pub n_inf: u64,
    pub n0: u64,
    pub n1: u64,
}

fn family_for_sums(field: &FieldContext) -> Result<Family> {
    let fam = Family::of_field(field)?;
    fam.require_two_mod_three()?;
    Ok(fam)
}

pub fn n_counts(field: &FieldContext, d1: i64, u: Element, v: Element) -> Result<NTriple> {
    if u.is_zero() {
        return Err(Error::Precondition("n-counts need u != 0".into()));
    }
    let fam = family_for_sums(field)?;
    let m = fam.q_l() + 1;
    let d1 = field.reduce_exponent(d1);
    let mut t = NTriple { n_inf: 0, n0: 0, n1: 0 };
    for j in 0..m {
        let a = field.sub(field.mul(u, field.exp(d1 * j)), field.mul(v, field.exp(j)));
        if a.is_zero() {
            t.n_inf += 1;
        } else if field.coset_class(a, m)? == 0 {
            t.n0 += 1;
        } else {
            t.n1 += 1;
        }
    }
    Ok(t)
}

/// `(p^4l n_inf - p^3l n0 + p^2l n1) / (p^l + 1)`, which must divide exactly.
pub fn sum_from_ntriple(family: Family, t: NTriple) -> Result<i64> {
    let num = family.pl(4) * t.n_inf as i128 - family.pl(3) * t.n0 as i128 + family.pl(2) * t.n1 as i128;
    let den = family.pl(1) + 1;
    if num % den != 0 {
        return Err(Error::Verification(format!("{num} is not divisible by {den} for {t:?}")));
    }
    Ok((num / den) as i64)
}

pub fn exp_sum_via_ncounts(field: &FieldContext, d1: i64, u: Element, v: Element) -> Result<i64> {
    let fam = family_for_sums(field)?;
    sum_from_ntriple(fam, n_counts(field, d1, u, v)?)
}

/// Evaluates whole rows `v -> S(u, v)` for a fixed `u`.
///
/// With `x = psi^k` and `v = psi^m`, `Tr(v x)` is the trace table shifted by
/// `m`, so a row costs one pass over a rotated table per `v`. For `p = 2` the
/// tables are bit-packed and a sum is a popcount.
pub struct SumRows<'a> {
    field: &'a FieldContext,
    d1: u64,
    p: u32,
    q1: usize,
    trace: Vec<u8>,
    /// `(p - Tr(psi^k)) mod p`, stored twice so any rotation is a slice.
    neg_trace2: Vec<u8>,
    /// `Tr(psi^k)` bit-packed twice over, `p = 2` only.
    trace_bits2: Vec<u64>,
}

impl<'a> SumRows<'a> {
    pub fn new(field: &'a FieldContext, d1: i64) -> Result<Self> {
        let p = field.p();
        if p > 127 {
            return Err(Error::Precondition(format!("row engine supports p < 128, got {p}")));
        }
        let q1 = field.mult_order() as usize;
        let trace: Vec<u8> = field.trace_log_table().iter().map(|&t| t as u8).collect();
        let neg: Vec<u8> = trace.iter().map(|&t| (p as u8 - t) % p as u8).collect();
        let neg_trace2 = [neg.as_slice(), neg.as_slice()].concat();
        let trace_bits2 = if p == 2 {
            let mut bits = vec![0u64; (2 * q1).div_ceil(64) + 1];
            for (i, &t) in trace.iter().chain(trace.iter()).enumerate() {
                bits[i / 64] |= (t as u64) << (i % 64);
            }
            bits
        } else {
            Vec::new()
        };
        Ok(SumRows {
            field,
            d1: field.reduce_exponent(d1),
            p,
            q1,
            trace,
            neg_trace2,
            trace_bits2,
        })
    }

    pub fn field(&self) -> &FieldContext {
        self.field
    }

    /// `Tr(u psi^(d1 k))` for `0 <= k < q - 1`.
    fn u_trace(&self, u: Element) -> Vec<u8> {
        let Some(lu) = u.log() else {
            return vec![0; self.q1];
        };
        let mut idx = lu as u64 % self.q1 as u64;
        let step = self.d1 % self.q1 as u64;
        (0..self.q1)
            .map(|_| {
                let t = self.trace[idx as usize];
                idx += step;
                if idx >= self.q1 as u64 {
                    idx -= self.q1 as u64;
                }
                t
            })
            .collect()
    }

    /// `S(u, v)` for every `v`, indexed by [`Element::index`].
    pub fn row(&self, u: Element) -> Result<Vec<i64>> {
        let g = self.u_trace(u);
        let q = self.q1 + 1;
        if self.p == 2 {
            let words = self.q1.div_ceil(64);
            let mut gbits = vec![0u64; words];
            for (i, &t) in g.iter().enumerate() {
                gbits[i / 64] |= (t as u64) << (i % 64);
            }
            let ones_v0 = g.iter().filter(|&&t| t == 1).count();
            let row = (0..q)
                .into_par_iter()
                .map(|vi| {
                    let ones = if vi == 0 {
                        ones_v0
                    } else {
                        self.popcount_xor(&gbits, vi - 1)
                    };
                    q as i64 - 2 * ones as i64
                })
                .collect();
            return Ok(row);
        }
        (0..q)
            .into_par_iter()
            .map(|vi| {
                let counts = if vi == 0 {
                    let mut c = vec![0u64; self.p as usize];
                    for &t in &g {
                        c[t as usize] += 1;
                    }
                    c
                } else {
                    self.counts_at(&g, vi - 1)
                };
                let mut counts = counts;
                counts[0] += 1;
                TraceCountVector(counts).value()
            })
            .collect()
    }

    fn popcount_xor(&self, gbits: &[u64], shift: usize) -> usize {
        let t = &self.trace_bits2;
        let (w0, s) = (shift / 64, shift % 64);
        let last = gbits.len() - 1;
        let tail = self.q1 % 64;
        let mut ones = 0u32;
        for (i, &g) in gbits.iter().enumerate() {
            let lo = t[w0 + i] >> s;
            let hi = if s == 0 { 0 } else { t[w0 + i + 1] << (64 - s) };
            let mut x = g ^ (lo | hi);
            if i == last && tail != 0 {
                x &= (1u64 << tail) - 1;
            }
            ones += x.count_ones();
        }
        ones as usize
    }

    fn counts_at(&self, g: &[u8], shift: usize) -> Vec<u64> {
        let p = self.p as usize;
        let mut wide = [0u32; 256];
        let t = &self.neg_trace2[shift..shift + self.q1];
        for (&a, &b) in g.iter().zip(t) {
            wide[(a + b) as usize] += 1;
        }
        (0..p).map(|j| (wide[j] + wide[j + p]) as u64).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SumDomain {
    /// `u != 0`, any `v`.
    #[serde(rename = "F*xF")]
    NonzeroU,
    #[serde(rename = "FxF")]
    All,
}

/// Multiset of sum values over a domain of `(u, v)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SumDistribution {
    values: BTreeMap<i64, u64>,
    domain: SumDomain,
}

impl SumDistribution {
    pub fn from_pairs(domain: SumDomain, pairs: impl IntoIterator<Item = (i64, u64)>) -> Self {
        let mut values = BTreeMap::new();
        for (v, c) in pairs {
            if c > 0 {
                *values.entry(v).or_insert(0) += c;
            }
        }
        SumDistribution { values, domain }
    }

    pub fn values(&self) -> &BTreeMap<i64, u64> {
        &self.values
    }

    pub fn domain(&self) -> SumDomain {
        self.domain
    }

    pub fn total(&self) -> u64 {
        self.values.values().sum()
    }

    pub fn count(&self, value: i64) -> u64 {
        self.values.get(&value).copied().unwrap_or(0)
    }

    /// `sum value^k * count` for `k = 1, 2, 3`.
    pub fn power_sums(&self) -> [i128; 3] {
        let mut out = [0i128; 3];
        for (&v, &c) in &self.values {
            let (v, c) = (v as i128, c as i128);
            out[0] += v * c;
            out[1] += v * v * c;
            out[2] += v * v * v * c;
        }
        out
    }
}

fn check_budget(pairs: u128, budget: u128, hint: &'static str) -> Result<()> {
    if pairs > budget {
        return Err(Error::Budget {
            cost: pairs,
            budget,
            hint,
        });
    }
    Ok(())
}

/// Exact tally of `S(u, v)` over every `u != 0` and every `v`.
pub fn distribution_oracle(field: &FieldContext, d1: i64, budget: u128) -> Result<SumDistribution> {
    let q = field.order() as u128;
    check_budget((q - 1) * q, budget, "use the reduced distribution instead")?;
    let rows = SumRows::new(field, d1)?;
    let mut tally: BTreeMap<i64, u64> = BTreeMap::new();
    for u in field.nonzero() {
        for s in rows.row(u)? {
            *tally.entry(s).or_insert(0) += 1;
        }
    }
    Ok(SumDistribution::from_pairs(SumDomain::NonzeroU, tally))
}

/// Distribution over `F* x F` from the three cube-class rows `u = 1, psi, psi^2`.
///
/// Substituting `x -> t x` gives `S(u t^d1, v) = S(u, v / t)`, and `t -> t^d1`
/// maps onto the cubes when `gcd(d1, q - 1) = 3`, so every row in a cube class
/// is a permutation of the representative's row. The stronger claim that the
/// `psi` and `psi^2` rows agree as multisets over `v != 0` is checked, not
/// assumed.
pub fn distribution_reduced(field: &FieldContext, d1: i64) -> Result<SumDistribution> {
    let q1 = field.mult_order();
    if !q1.is_multiple_of(3) {
        return Err(Error::Precondition(format!("3 does not divide {q1}")));
    }
    let g = gcd(field.reduce_exponent(d1), q1);
    if g != 3 {
        return Err(Error::Precondition(format!("gcd(d1, q - 1) = {g}, expected 3")));
    }
    let rows = SumRows::new(field, d1)?;
    let reps = [field.exp(0), field.exp(1), field.exp(2)];
    let rows: Vec<Vec<i64>> = reps.iter().map(|&u| rows.row(u)).collect::<Result<_>>()?;
    let nonzero_multiset = |row: &[i64]| {
        let mut v = row[1..].to_vec();
        v.sort_unstable();
        v
    };
    if nonzero_multiset(&rows[1]) != nonzero_multiset(&rows[2]) {
        return Err(Error::Verification(
            "rows u = psi and u = psi^2 differ as multisets over v != 0".into(),
        ));
    }
    let scale = q1 / 3;
    let mut tally: BTreeMap<i64, u64> = BTreeMap::new();
    for row in &rows {
        for &s in row {
            *tally.entry(s).or_insert(0) += scale;
        }
    }
    Ok(SumDistribution::from_pairs(SumDomain::NonzeroU, tally))
}

/// Value set `{-2p^2l, -p^2l, 0, p^2l, p^3l - p^2l, p^3l}`.
pub fn family_sum_values(family: Family) -> BTreeSet<i64> {
    let (p2, p3) = (family.pl(2) as i64, family.pl(3) as i64);
    BTreeSet::from([-2 * p2, -p2, 0, p2, p3 - p2, p3])
}

/// The six multiplicities `E_0..E_5`, in the order of the values
/// `-2p^2l, -p^2l, 0, p^2l, p^3l - p^2l, p^3l`.
pub fn closed_multiplicities(family: Family) -> Result<[(i64, u64); 6]> {
    family.require_two_mod_three()?;
    let pk = |k: u32| family.pl(k);
    let exact = |num: i128, den: i128, what: &str| -> Result<u64> {
        if num < 0 || num % den != 0 {
            return Err(Error::Verification(format!("{what}: {num}/{den} is not a nonnegative integer")));
        }
        Ok((num / den) as u64)
    };
    let e0 = exact(
        pk(8) - 3 * pk(7) + 3 * pk(6) - pk(5) - pk(4) + 3 * pk(3) - 3 * pk(2) + pk(1),
        6,
        "E_0",
    )?;
    let e1 = exact(pk(7) - pk(6) - pk(3) + pk(2), 1, "E_1")?;
    let e2 = exact(
        pk(8) - pk(7) + pk(6) - pk(5) - 3 * pk(4) + pk(3) - pk(2) + pk(1) + 2,
        2,
        "E_2",
    )?;
    let e3 = exact(pk(8) - pk(5) - pk(4) + pk(1), 3, "E_3")?;
    let e4 = exact(pk(1) * (pk(4) - 1), 1, "E_4")?;
    let e5 = exact(pk(4) - 1, 1, "E_5")?;
    let (p2, p3) = (pk(2) as i64, pk(3) as i64);
    Ok([
        (-2 * p2, e0),
        (-p2, e1),
        (0, e2),
        (p2, e3),
        (p3 - p2, e4),
        (p3, e5),
    ])
}

/// Closed-form distribution over `F* x F`, equal values merged.
pub fn distribution_closed(family: Family) -> Result<SumDistribution> {
    Ok(SumDistribution::from_pairs(SumDomain::NonzeroU, closed_multiplicities(family)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Moments {
    pub m1: i128,
    pub m2: i128,
    pub m3: i128,
}

impl Moments {
    /// Power sums over all of `F x F`: a `u != 0` distribution plus the
    /// `u = 0` row, where only `S(0, 0) = p^n` is nonzero.
    pub fn from_distribution(dist: &SumDistribution, field_size: u64) -> Self {
        let [m1, m2, m3] = dist.power_sums();
        let q = field_size as i128;
        match dist.domain() {
            SumDomain::All => Moments { m1, m2, m3 },
            SumDomain::NonzeroU => Moments {
                m1: m1 + q,
                m2: m2 + q * q,
                m3: m3 + q * q * q,
            },
        }
    }

    /// `(p^2n, p^3n, p^13l + p^3n - p^9l)`.
    pub fn expected(family: Family) -> Self {
        let pk = |k: u32| family.pl(k);
        Moments {
            m1: pk(8),
            m2: pk(12),
            m3: pk(13) + pk(12) - pk(9),
        }
    }
}

/// First three power sums of `S(u, v)` by direct evaluation of every row,
/// `u = 0` included.
pub fn moments(field: &FieldContext, d1: i64, budget: u128) -> Result<Moments> {
    let q = field.order() as u128;
    check_budget(q * q, budget, "moments need every (u, v) pair")?;
    let rows = SumRows::new(field, d1)?;
    let mut m = Moments { m1: 0, m2: 0, m3: 0 };
    for u in field.elements() {
        for s in rows.row(u)? {
            let s = s as i128;
            m.m1 += s;
            m.m2 += s * s;
            m.m3 += s * s * s;
        }
    }
    Ok(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MomentReport {
    pub actual: Moments,
    pub expected: Moments,
}

/// [`moments`] compared with the closed forms; a mismatch is an error.
pub fn moment_check(field: &FieldContext, d1: i64, budget: u128) -> Result<MomentReport> {
    let family = Family::of_field(field)?;
    let actual = moments(field, d1, budget)?;
    let expected = Moments::expected(family);
    if actual != expected {
        return Err(Error::Verification(format!("moments {actual:?} != {expected:?}")));
    }
    Ok(MomentReport { actual, expected })
}

/// Violation counts for the structural claims about [`NTriple`] and the
/// agreement of the n-count formula with direct sums.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct NCountAudit {
    pub pairs: u64,
    pub n_inf_criterion: u64,
    pub at_most_three: u64,
    pub u_one_rule: u64,
    pub u_psi_rule: u64,
    pub sum_mismatch: u64,
    pub value_outside_set: u64,
}

impl NCountAudit {
    pub fn holds(&self) -> bool {
        self.n_inf_criterion
            + self.at_most_three
            + self.u_one_rule
            + self.u_psi_rule
            + self.sum_mismatch
            + self.value_outside_set
            == 0
    }
}

/// Checks every `v` for each given `u != 0`.
pub fn ncount_audit(
    field: &FieldContext,
    d1: i64,
    us: impl IntoIterator<Item = Element>,
) -> Result<NCountAudit> {
    let fam = family_for_sums(field)?;
    let ql = fam.q_l();
    let m = ql + 1;
    if m % 3 != 0 {
        return Err(Error::Precondition(format!("3 does not divide p^l + 1 = {m}")));
    }
    let d1r = field.reduce_exponent(d1);
    let third = (d1r + field.mult_order() - 1) % field.mult_order() * (m / 3);
    let special: [Element; 3] = [Element::ONE, field.exp(third), field.exp(2 * third)];
    let allowed = family_sum_values(fam);
    let rows = SumRows::new(field, d1)?;
    let mut audit = NCountAudit::default();
    for u in us {
        if u.is_zero() {
            return Err(Error::Precondition("audit needs u != 0".into()));
        }
        let row = rows.row(u)?;
        for v in field.elements() {
            audit.pairs += 1;
            let t = n_counts(field, d1, u, v)?;
            let ratio = field.div(v, u)?;
            let expect_inf = u64::from(field.pow_u(ratio, m) == Element::ONE);
            audit.n_inf_criterion += u64::from(t.n_inf != expect_inf);
            audit.at_most_three += u64::from(t.n0 + t.n_inf > 3);
            if t.n_inf == 1 && u == Element::ONE {
                let expect = if special.contains(&v) { 0 } else { 1 };
                audit.u_one_rule += u64::from(t.n0 != expect);
            }
            if t.n_inf == 1 && u == field.psi() {
                audit.u_psi_rule += u64::from(t.n0 != 1);
            }
            let s = sum_from_ntriple(fam, t)?;
            audit.sum_mismatch += u64::from(s != row[v.index()]);
            audit.value_outside_set += u64::from(!allowed.contains(&row[v.index()]));
        }
    }
    Ok(audit)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf16() -> FieldContext {
        FieldContext::standard(2, 4).unwrap()
    }

    #[test]
    fn trivial_trace_counts() {
        let f = FieldContext::standard(3, 4).unwrap();
        assert_eq!(trace_counts(&f, 21, Element::ZERO, Element::ZERO).unwrap().counts(), &[81, 0, 0]);
        assert_eq!(trace_counts(&f, 21, Element::ZERO, f.exp(7)).unwrap().counts(), &[27, 27, 27]);
        assert_eq!(exp_sum(&f, 21, Element::ZERO, Element::ZERO).unwrap(), 81);
        assert_eq!(exp_sum(&f, 21, Element::ZERO, f.psi()).unwrap(), 0);
    }

    #[test]
    fn gf16_unit_pair() {
        let f = gf16();
        assert_eq!(trace_counts(&f, 6, Element::ONE, Element::ONE).unwrap().counts(), &[12, 4]);
        assert_eq!(exp_sum(&f, 6, Element::ONE, Element::ONE).unwrap(), 8);
        let t = n_counts(&f, 6, Element::ONE, Element::ONE).unwrap();
        assert_eq!(t, NTriple { n_inf: 1, n0: 0, n1: 2 });
        assert_eq!(exp_sum_via_ncounts(&f, 6, Element::ONE, Element::ONE).unwrap(), 8);
    }

    #[test]
    fn psi_psi_triple() {
        for (p, n, d1) in [(2, 4, 6), (5, 4, 105), (2, 12, 456)] {
            let f = FieldContext::standard(p, n).unwrap();
            let t = n_counts(&f, d1, f.psi(), f.psi()).unwrap();
            assert_eq!((t.n_inf, t.n0), (1, 1), "p={p} n={n}");
        }
    }

    #[test]
    fn ntriple_formula_rows() {
        let fam = Family::new(5, 1).unwrap();
        let ql = fam.q_l();
        let s = |n_inf, n0, n1| sum_from_ntriple(fam, NTriple { n_inf, n0, n1 }).unwrap();
        assert_eq!(s(1, 0, ql), 125);
        assert_eq!(s(1, 1, ql - 1), 100);
        assert_eq!(s(0, 0, ql + 1), 25);
        assert_eq!(s(0, 1, ql), 0);
        assert_eq!(s(0, 2, ql - 1), -25);
        assert_eq!(s(0, 3, ql - 2), -50);
        assert!(sum_from_ntriple(fam, NTriple { n_inf: 0, n0: 0, n1: 1 }).is_err());
    }

    #[test]
    fn gauss_like_classes() {
        let f = gf16();
        assert_eq!(gauss_like(&f, Element::ZERO).unwrap(), 16);
        assert_eq!(gauss_like(&f, f.exp(3)).unwrap(), -8);
        assert_eq!(gauss_like(&f, f.exp(1)).unwrap(), 4);
    }

    #[test]
    fn closed_distribution_p2_l1() {
        let fam = Family::new(2, 1).unwrap();
        let raw: Vec<u64> = closed_multiplicities(fam).unwrap().iter().map(|e| e.1).collect();
        assert_eq!(raw, vec![5, 60, 60, 70, 30, 15]);
        let d = distribution_closed(fam).unwrap();
        assert_eq!(d.values(), &BTreeMap::from([(-8, 5), (-4, 60), (0, 60), (4, 100), (8, 15)]));
        assert_eq!(d.total(), 16 * 15);
    }

    #[test]
    fn closed_needs_two_mod_three() {
        assert!(distribution_closed(Family::new(3, 1).unwrap()).is_err());
        assert!(distribution_closed(Family::new(2, 2).unwrap()).is_err());
        assert_eq!(distribution_closed(Family::new(5, 1).unwrap()).unwrap().count(125), 624);
    }

    #[test]
    fn rows_match_element_api() {
        for (p, n, d1) in [(2, 4, 6), (5, 4, 105), (3, 4, 21)] {
            let f = FieldContext::standard(p, n).unwrap();
            let rows = SumRows::new(&f, d1).unwrap();
            for u in [Element::ZERO, Element::ONE, f.psi(), f.exp(7)] {
                let row = rows.row(u).unwrap();
                for v in f.elements().step_by(if p == 2 { 1 } else { 7 }) {
                    assert_eq!(row[v.index()], exp_sum(&f, d1, u, v).unwrap(), "p={p} u={u} v={v}");
                }
            }
        }
    }

    #[test]
    fn oracle_small() {
        let f = gf16();
        let d = distribution_oracle(&f, 6, DEFAULT_PAIR_BUDGET).unwrap();
        assert_eq!(d.values(), &BTreeMap::from([(-8, 5), (-4, 60), (0, 60), (4, 100), (8, 15)]));
        assert_eq!(distribution_reduced(&f, 6).unwrap(), d);
        assert!(matches!(distribution_oracle(&f, 6, 100), Err(Error::Budget { .. })));
    }

    #[test]
    fn moments_small() {
        let f = gf16();
        let r = moment_check(&f, 6, DEFAULT_PAIR_BUDGET).unwrap();
        assert_eq!((r.actual.m1, r.actual.m2, r.actual.m3), (256, 4096, 11776));
        let d = distribution_oracle(&f, 6, DEFAULT_PAIR_BUDGET).unwrap();
        assert_eq!(Moments::from_distribution(&d, 16), r.actual);
    }

    #[test]
    fn audit_small() {
        let f = gf16();
        let a = ncount_audit(&f, 6, f.nonzero()).unwrap();
        assert!(a.holds(), "{a:?}");
        assert_eq!(a.pairs, 15 * 16);
    }

    #[test]
    fn reduced_preconditions() {
        let f = FieldContext::standard(3, 4).unwrap();
        assert!(distribution_reduced(&f, 21).is_err());
        assert!(n_counts(&f, 21, Element::ONE, Element::ONE).is_err());
        let f = gf16();
        assert!(n_counts(&f, 6, Element::ZERO, Element::ONE).is_err());
    }
}
