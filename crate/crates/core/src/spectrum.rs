//! Differential spectra and c-differential uniformity of power maps.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{gcd, Family};
use crate::field::{Element, FieldContext};

/// Sparse histogram `i -> omega_i` of derivative solution counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Spectrum {
    counts: BTreeMap<u64, u64>,
    field_size: u64,
}

impl Spectrum {
    /// Collects `(i, omega_i)` pairs; repeated indices are summed and empty
    /// bins dropped.
    pub fn from_bins(field_size: u64, bins: impl IntoIterator<Item = (u64, u64)>) -> Self {
        let mut counts = BTreeMap::new();
        for (i, w) in bins {
            if w > 0 {
                *counts.entry(i).or_insert(0) += w;
            }
        }
        Spectrum { counts, field_size }
    }

    /// Histogram of a per-`b` solution count table.
    pub fn from_solution_counts(field_size: u64, per_b: &[u32]) -> Self {
        Self::from_bins(field_size, per_b.iter().map(|&c| (c as u64, 1)))
    }

    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    pub fn omega(&self, i: u64) -> u64 {
        self.counts.get(&i).copied().unwrap_or(0)
    }

    /// Differential uniformity: the largest `i` with `omega_i > 0`.
    pub fn delta(&self) -> u64 {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }

    pub fn field_size(&self) -> u64 {
        self.field_size
    }

    /// `sum omega_i = p^n` and `sum i * omega_i = p^n`.
    pub fn check_identities(&self) -> Result<()> {
        let total: u64 = self.counts.values().sum();
        let weighted: u64 = self.counts.iter().map(|(i, w)| i * w).sum();
        if total != self.field_size || weighted != self.field_size {
            return Err(Error::Verification(format!(
                "spectrum identities fail: sum={total}, weighted={weighted}, field size={}",
                self.field_size
            )));
        }
        Ok(())
    }
}

/// `x -> x^d` for every element, indexed by [`Element::index`].
pub fn power_map(field: &FieldContext, d: i64) -> Result<Vec<Element>> {
    let zero_image = field.pow(Element::ZERO, d)?;
    let e = field.reduce_exponent(d);
    let q1 = field.mult_order();
    let mut out = Vec::with_capacity(field.order() as usize);
    out.push(zero_image);
    let mut k = 0u64;
    for _ in 0..q1 {
        out.push(field.exp(k));
        k += e;
        if k >= q1 {
            k -= q1;
        }
    }
    Ok(out)
}

/// Solution counts of `(x + a)^d - c x^d = b` for every `b`, indexed by
/// [`Element::index`].
pub fn derivative_counts(field: &FieldContext, d: i64, a: Element, c: Element) -> Result<Vec<u32>> {
    let pow = power_map(field, d)?;
    let mut counts = vec![0u32; field.order() as usize];
    for x in field.elements() {
        let shifted = pow[field.add(x, a).index()];
        let y = field.sub(shifted, field.mul(c, pow[x.index()]));
        counts[y.index()] += 1;
    }
    Ok(counts)
}

/// `#{x : (x+1)^d - x^d = b}` by enumeration.
pub fn delta_b(field: &FieldContext, d: i64, b: Element) -> Result<u64> {
    c_delta(field, d, Element::ONE, b)
}

/// `#{x : (x+1)^d - c x^d = b}` by enumeration.
pub fn c_delta(field: &FieldContext, d: i64, c: Element, b: Element) -> Result<u64> {
    let mut count = 0;
    for x in field.elements() {
        let lhs = field.sub(field.pow(field.add(x, Element::ONE), d)?, field.mul(c, field.pow(x, d)?));
        if lhs == b {
            count += 1;
        }
    }
    Ok(count)
}

/// Differential spectrum of `x^d` by a single pass over `x` with `a = 1`.
pub fn diff_spectrum_oracle(field: &FieldContext, d: i64) -> Result<Spectrum> {
    let counts = derivative_counts(field, d, Element::ONE, Element::ONE)?;
    Ok(Spectrum::from_solution_counts(field.order(), &counts))
}

/// Slow audit over every `a != 0`: checks `delta(a, b) = delta(1, b / a^d)`
/// for all `b` and returns the `a = 1` spectrum.
pub fn diff_spectrum_audit(field: &FieldContext, d: i64) -> Result<Spectrum> {
    let base = derivative_counts(field, d, Element::ONE, Element::ONE)?;
    let bad = field
        .nonzero()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|a| -> Result<Option<Element>> {
            let row = derivative_counts(field, d, a, Element::ONE)?;
            let ad = field.pow(a, d)?;
            for b in field.elements() {
                if row[b.index()] != base[field.div(b, ad)?.index()] {
                    return Ok(Some(a));
                }
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(a) = bad.into_iter().flatten().next() {
        return Err(Error::Verification(format!("delta(a, b) != delta(1, b/a^d) at a = {a}")));
    }
    Ok(Spectrum::from_solution_counts(field.order(), &base))
}

/// Closed-form spectrum of the family over GF(p^4l). Symbolic bins that
/// coincide (only when `p^l = 2`) are merged.
pub fn diff_spectrum_closed(family: Family) -> Result<Spectrum> {
    let q = family.pl(4);
    let (p1, p2, p3) = (family.pl(1), family.pl(2), family.pl(3));
    let halve = |v: i128, what: &str| -> Result<u64> {
        if v < 0 || v % 2 != 0 {
            return Err(Error::Verification(format!("{what} = {v}/2 is not a nonnegative integer")));
        }
        Ok((v / 2) as u64)
    };
    let omega0 = halve(q + p3 - p2 - p1 - 2, "omega_0")?;
    let omega2 = halve(q - p3 + p2 - p1, "omega_2")?;
    Ok(Spectrum::from_bins(
        q as u64,
        [(0, omega0), (2, omega2), (p1 as u64, 1), ((p2 - p1) as u64, p1 as u64)],
    ))
}

/// Per-`b` check of the three-way classification of derivative counts:
/// `delta(1) = p^l`, `delta(b) = p^2l - p^l` on `mu_{p^l+1} \ {1}`, and
/// `delta(b) in {0, 2}` elsewhere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub delta_one: u64,
    pub mu_members: u64,
    pub mu_matching: u64,
    pub other_violations: u64,
    pub holds: bool,
}

pub fn classify_derivative_counts(field: &FieldContext, d: i64) -> Result<ClassificationReport> {
    let family = Family::of_field(field)?;
    let ql = family.q_l();
    let high = ql * ql - ql;
    let counts = derivative_counts(field, d, Element::ONE, Element::ONE)?;
    let delta_one = counts[Element::ONE.index()] as u64;
    let (mut mu_members, mut mu_matching, mut other_violations) = (0, 0, 0);
    for b in field.elements() {
        if b == Element::ONE {
            continue;
        }
        let c = counts[b.index()] as u64;
        if field.in_mu(b, ql + 1) {
            mu_members += 1;
            if c == high {
                mu_matching += 1;
            }
        } else if c != 0 && c != 2 {
            other_violations += 1;
        }
    }
    Ok(ClassificationReport {
        delta_one,
        mu_members,
        mu_matching,
        other_violations,
        holds: delta_one == ql && mu_members == ql && mu_matching == ql && other_violations == 0,
    })
}

/// c-differential uniformity of `x^d` for one `c != 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CDiffReport {
    pub c: Element,
    pub uniformity: u64,
    /// `(b, count)` attaining the maximum over `b` (smallest such `b`).
    pub max_witness: (Element, u64),
    pub gcd_term: u64,
    /// `(p^l + 1)^2` when `n = 4l` and `c` lies outside `mu_{p^l+1}`.
    pub bound: Option<u64>,
    pub bound_holds: Option<bool>,
}

pub fn c_diff_uniformity(field: &FieldContext, d: i64, c: Element) -> Result<CDiffReport> {
    if c == Element::ONE {
        return Err(Error::Precondition(
            "c = 1 is classical uniformity; use the spectrum's delta".into(),
        ));
    }
    let counts = derivative_counts(field, d, Element::ONE, c)?;
    let (best_b, best) = counts
        .iter()
        .enumerate()
        .fold((0usize, 0u32), |acc, (b, &v)| if v > acc.1 { (b, v) } else { acc });
    let gcd_term = gcd(field.reduce_exponent(d), field.mult_order());
    let uniformity = (best as u64).max(gcd_term);
    let bound = Family::of_field(field)
        .ok()
        .filter(|fam| !field.in_mu(c, fam.q_l() + 1))
        .map(|fam| (fam.q_l() + 1).pow(2));
    Ok(CDiffReport {
        c,
        uniformity,
        max_witness: (Element::from_index(best_b), best as u64),
        gcd_term,
        bound,
        bound_holds: bound.map(|b| uniformity <= b),
    })
}

/// Aggregate of [`c_diff_uniformity`] over every `c` outside `mu_{p^l+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CDiffSweep {
    pub checked: u64,
    pub bound: u64,
    pub max_uniformity: u64,
    pub worst_c: Element,
    pub gcd_term: u64,
    pub bound_holds: bool,
}

pub fn c_diff_sweep(field: &FieldContext, d: i64) -> Result<CDiffSweep> {
    let family = Family::of_field(field)?;
    let m = family.q_l() + 1;
    let cs: Vec<Element> = field.elements().filter(|&c| !field.in_mu(c, m)).collect();
    let reports = cs
        .par_iter()
        .map(|&c| c_diff_uniformity(field, d, c))
        .collect::<Result<Vec<_>>>()?;
    let worst = reports
        .iter()
        .fold(None::<&CDiffReport>, |acc, r| match acc {
            Some(a) if a.uniformity >= r.uniformity => Some(a),
            _ => Some(r),
        })
        .ok_or_else(|| Error::Precondition("no c outside mu_{p^l+1}".into()))?;
    Ok(CDiffSweep {
        checked: reports.len() as u64,
        bound: m * m,
        max_uniformity: worst.uniformity,
        worst_c: worst.c,
        gcd_term: worst.gcd_term,
        bound_holds: reports.iter().all(|r| r.bound_holds == Some(true)),
    })
}
