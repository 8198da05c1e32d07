//! Trace codes `c_{u,v} = (Tr(u psi^(j d1) + v psi^j))_j`.
//!
//! The full code has length `p^n - 1`; the short code keeps the first
//! `(p^n - 1)/(p - 1)` coordinates, since the full word is the short word
//! followed by its multiples by `beta, beta^2, ..., beta^(p-2)`.

use std::collections::{BTreeMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expsum::{distribution_closed, distribution_oracle, distribution_reduced, exp_sum, SumDistribution, SumRows};
use crate::family::Family;
use crate::field::{Element, FieldContext, FieldParams};

/// Codeword count up to which constacyclic closure and distinctness are
/// checked exhaustively.
pub const EXHAUSTIVE_CODEWORDS: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CodeVariant {
    Full,
    Short,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodeSpec {
    pub field: FieldParams,
    pub d1: u64,
    pub length_full: u64,
    pub length_short: u64,
    pub dimension: u32,
    pub beta: Element,
}

impl CodeSpec {
    pub fn new(field: &FieldContext, d1: i64) -> Result<Self> {
        let pm1 = field.p() as u64 - 1;
        let d1r = field.reduce_exponent(d1);
        if pm1 > 1 && d1r % pm1 != 1 {
            return Err(Error::Precondition(format!("d1 = {d1} is not 1 mod p - 1")));
        }
        Ok(CodeSpec {
            field: field.params().clone(),
            d1: d1r,
            length_full: field.mult_order(),
            length_short: field.mult_order() / pm1,
            dimension: 2 * field.n(),
            beta: field.beta(),
        })
    }

    pub fn length(&self, variant: CodeVariant) -> u64 {
        match variant {
            CodeVariant::Full => self.length_full,
            CodeVariant::Short => self.length_short,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Codeword {
    pub coords: Vec<u32>,
    pub u: Element,
    pub v: Element,
}

impl Codeword {
    pub fn weight(&self) -> u64 {
        self.coords.iter().filter(|&&c| c != 0).count() as u64
    }
}

/// Direct trace evaluation of `c_{u,v}`.
pub fn codeword(field: &FieldContext, d1: i64, u: Element, v: Element, variant: CodeVariant) -> Result<Codeword> {
    let spec = CodeSpec::new(field, d1)?;
    let len = spec.length(variant);
    let coords = (0..len)
        .map(|j| {
            let a = field.add(field.mul(u, field.exp(j * spec.d1)), field.mul(v, field.exp(j)));
            field.trace(a)
        })
        .collect();
    Ok(Codeword { coords, u, v })
}

fn weight_from_sum(field: &FieldContext, s: i64) -> Result<u64> {
    let p = field.p() as i64;
    if s % p != 0 {
        return Err(Error::Verification(format!("sum {s} is not divisible by p = {p}")));
    }
    let pn1 = (field.order() / field.p() as u64) as i64;
    let w = pn1 - s / p;
    u64::try_from(w).map_err(|_| Error::Verification(format!("negative weight from sum {s}")))
}

/// Hamming weight from the exponential sum: the short word has weight
/// `p^(n-1) - S(u, -v)/p` (the code uses `+v`, the sum `-v`), and the full
/// word `p - 1` times that.
pub fn weight_via_sum(field: &FieldContext, d1: i64, u: Element, v: Element, variant: CodeVariant) -> Result<u64> {
    CodeSpec::new(field, d1)?;
    let s = exp_sum(field, d1, u, field.neg(v))?;
    let short = weight_from_sum(field, s)?;
    Ok(match variant {
        CodeVariant::Short => short,
        CodeVariant::Full => short * (field.p() as u64 - 1),
    })
}

/// Weight distribution of the short code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightDistribution {
    pub length: u64,
    pub dimension: u32,
    weights: BTreeMap<u64, u64>,
}

impl WeightDistribution {
    pub fn from_pairs(length: u64, dimension: u32, pairs: impl IntoIterator<Item = (u64, u64)>) -> Self {
        let mut weights = BTreeMap::new();
        for (w, c) in pairs {
            if c > 0 {
                *weights.entry(w).or_insert(0) += c;
            }
        }
        WeightDistribution {
            length,
            dimension,
            weights,
        }
    }

    pub fn weights(&self) -> &BTreeMap<u64, u64> {
        &self.weights
    }

    pub fn total(&self) -> u64 {
        self.weights.values().sum()
    }

    pub fn count(&self, w: u64) -> u64 {
        self.weights.get(&w).copied().unwrap_or(0)
    }

    pub fn min_distance(&self) -> Option<u64> {
        self.weights.keys().copied().find(|&w| w > 0)
    }

    /// `(weight, count)` pairs in ascending weight order.
    pub fn enumerator(&self) -> Vec<(u64, u64)> {
        self.weights.iter().map(|(&w, &c)| (w, c)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMethod {
    Direct,
    ViaSums,
    Closed,
}

/// Weight distribution of the short code by the requested method. `budget`
/// bounds the number of codewords (direct) or `(u, v)` pairs (sums) a full
/// sweep may touch; beyond it the sum route falls back to the three
/// cube-class rows.
pub fn weight_distribution(
    field: &FieldContext,
    d1: i64,
    method: WeightMethod,
    budget: u128,
) -> Result<WeightDistribution> {
    let spec = CodeSpec::new(field, d1)?;
    match method {
        WeightMethod::Direct => weights_direct(field, &spec, budget),
        WeightMethod::ViaSums => {
            let q = field.order() as u128;
            let dist = if (q - 1) * q <= budget {
                distribution_oracle(field, d1, budget)?
            } else {
                distribution_reduced(field, d1)?
            };
            let zero_row = SumRows::new(field, d1)?.row(Element::ZERO)?;
            let mut pairs = Vec::new();
            for s in zero_row {
                pairs.push((weight_from_sum(field, s)?, 1));
            }
            weights_from_sums(field, &spec, &dist, pairs)
        }
        WeightMethod::Closed => {
            let family = Family::of_field(field)?;
            if family.d1() != spec.d1 {
                return Err(Error::Precondition(format!("closed form needs d1 = {}", family.d1())));
            }
            weight_distribution_closed(family)
        }
    }
}

fn weights_from_sums(
    field: &FieldContext,
    spec: &CodeSpec,
    dist: &SumDistribution,
    mut pairs: Vec<(u64, u64)>,
) -> Result<WeightDistribution> {
    for (&s, &c) in dist.values() {
        pairs.push((weight_from_sum(field, s)?, c));
    }
    Ok(WeightDistribution::from_pairs(spec.length_short, spec.dimension, pairs))
}

/// Weight table built from the closed-form sum distribution plus the `u = 0`
/// words (one of weight 0, `p^n - 1` of weight `p^(n-1)`).
pub fn weight_distribution_closed(family: Family) -> Result<WeightDistribution> {
    let dist = distribution_closed(family)?;
    let p = family.p as i64;
    let q = family.field_size();
    let pn1 = (q / family.p as u64) as i64;
    let mut pairs = vec![(0u64, 1u64), (pn1 as u64, q - 1)];
    for (&s, &c) in dist.values() {
        if s % p != 0 {
            return Err(Error::Verification(format!("sum value {s} not divisible by p")));
        }
        pairs.push(((pn1 - s / p) as u64, c));
    }
    let length = (q - 1) / (family.p as u64 - 1);
    Ok(WeightDistribution::from_pairs(length, 2 * family.n(), pairs))
}

/// Every method whose cost fits the budget, required to agree.
pub fn weight_distribution_checked(
    field: &FieldContext,
    d1: i64,
    budget: u128,
) -> Result<(WeightDistribution, Vec<WeightMethod>)> {
    let mut results: Vec<(WeightMethod, WeightDistribution)> = Vec::new();
    for method in [WeightMethod::Direct, WeightMethod::ViaSums, WeightMethod::Closed] {
        match weight_distribution(field, d1, method, budget) {
            Ok(w) => results.push((method, w)),
            Err(Error::Budget { .. }) | Err(Error::Precondition(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let (first_method, first) = results
        .first()
        .cloned()
        .ok_or_else(|| Error::Precondition("no weight method applies".into()))?;
    for (m, w) in &results[1..] {
        if *w != first {
            return Err(Error::Verification(format!("weight distributions differ: {first_method:?} vs {m:?}")));
        }
    }
    Ok((first, results.into_iter().map(|(m, _)| m).collect()))
}

/// The `2n` short words `c_{psi^i, 0}` and `c_{0, psi^i}`, `i < n`. Because
/// `1, psi, ..., psi^(n-1)` is a basis over GF(p) and each word is GF(p)-linear
/// in `(u, v)`, these generate the code.
pub fn generator_rows(field: &FieldContext, d1: i64) -> Result<Vec<Vec<u32>>> {
    let n = field.n() as u64;
    let mut rows = Vec::with_capacity(2 * n as usize);
    for i in 0..n {
        rows.push(codeword(field, d1, field.exp(i), Element::ZERO, CodeVariant::Short)?.coords);
    }
    for i in 0..n {
        rows.push(codeword(field, d1, Element::ZERO, field.exp(i), CodeVariant::Short)?.coords);
    }
    Ok(rows)
}

fn weights_direct(field: &FieldContext, spec: &CodeSpec, budget: u128) -> Result<WeightDistribution> {
    let p = field.p();
    let dims = spec.dimension;
    let words = (p as u128).pow(dims);
    if words > budget {
        return Err(Error::Budget {
            cost: words,
            budget,
            hint: "use the sum-based or closed weight methods",
        });
    }
    if p > 127 {
        return Err(Error::Precondition("direct enumeration supports p < 128".into()));
    }
    let gens = generator_rows(field, spec.d1 as i64)?;
    let len = spec.length_short as usize;
    // Outer chunks fix the top digits of the enumeration counter.
    let inner = dims.min(if p == 2 { 16 } else { 6 }).min(dims);
    let outer_count = (p as u64).pow(dims - inner);
    let chunk = (p as u64).pow(inner);
    let hist = (0..outer_count)
        .into_par_iter()
        .map(|o| {
            let start = o * chunk;
            if p == 2 {
                enumerate_binary(&gens, len, start, chunk)
            } else {
                enumerate_pary(&gens, len, p as u8, start, chunk)
            }
        })
        .reduce(
            || vec![0u64; len + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(WeightDistribution::from_pairs(
        spec.length_short,
        dims,
        hist.into_iter().enumerate().map(|(w, c)| (w as u64, c)),
    ))
}

/// Modular Gray code: digit `i` of the code of `t` is `(t_i - t_(i+1)) mod p`.
/// Stepping `t -> t + 1` raises exactly one code digit by one, namely the
/// digit at the number of trailing `p - 1` digits of `t`.
fn gray_digits(t: u64, p: u64, dims: usize) -> Vec<u64> {
    let digits: Vec<u64> = (0..=dims).map(|i| t / p.pow(i as u32) % p).collect();
    (0..dims).map(|i| (digits[i] + p - digits[i + 1]) % p).collect()
}

fn step_digit(t: u64, p: u64) -> usize {
    let mut t = t;
    let mut j = 0;
    while t % p == p - 1 {
        t /= p;
        j += 1;
    }
    j
}

fn enumerate_binary(gens: &[Vec<u32>], len: usize, start: u64, count: u64) -> Vec<u64> {
    let nw = len.div_ceil(64);
    let packed: Vec<Vec<u64>> = gens
        .iter()
        .map(|g| {
            let mut w = vec![0u64; nw];
            for (i, &c) in g.iter().enumerate() {
                w[i / 64] |= (c as u64) << (i % 64);
            }
            w
        })
        .collect();
    let mut word = vec![0u64; nw];
    for (i, &d) in gray_digits(start, 2, gens.len()).iter().enumerate() {
        if d == 1 {
            word.iter_mut().zip(&packed[i]).for_each(|(a, b)| *a ^= b);
        }
    }
    let mut hist = vec![0u64; len + 1];
    let mut t = start;
    loop {
        let w: u32 = word.iter().map(|x| x.count_ones()).sum();
        hist[w as usize] += 1;
        if t + 1 == start + count {
            break;
        }
        let g = &packed[(!t).trailing_zeros() as usize];
        word.iter_mut().zip(g).for_each(|(a, b)| *a ^= b);
        t += 1;
    }
    hist
}

fn enumerate_pary(gens: &[Vec<u32>], len: usize, p: u8, start: u64, count: u64) -> Vec<u64> {
    let gens: Vec<Vec<u8>> = gens.iter().map(|g| g.iter().map(|&c| c as u8).collect()).collect();
    let mut word = vec![0u8; len];
    for (i, &d) in gray_digits(start, p as u64, gens.len()).iter().enumerate() {
        for _ in 0..d {
            add_mod(&mut word, &gens[i], p);
        }
    }
    let mut hist = vec![0u64; len + 1];
    let mut t = start;
    loop {
        let w = word.iter().filter(|&&c| c != 0).count();
        hist[w] += 1;
        if t + 1 == start + count {
            break;
        }
        add_mod(&mut word, &gens[step_digit(t, p as u64)], p);
        t += 1;
    }
    hist
}

#[inline]
fn add_mod(word: &mut [u8], g: &[u8], p: u8) {
    for (a, &b) in word.iter_mut().zip(g) {
        let s = *a + b;
        *a = if s >= p { s - p } else { s };
    }
}

/// `(c_0, ..., c_(L-1)) -> (beta^-1 c_(L-1), c_0, ..., c_(L-2))` over GF(p).
pub fn constacyclic_shift(coords: &[u32], beta_inv: u32, p: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(coords.len());
    if let Some(&last) = coords.last() {
        out.push((last as u64 * beta_inv as u64 % p as u64) as u32);
        out.extend_from_slice(&coords[..coords.len() - 1]);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
    /// Exhaustive up to [`EXHAUSTIVE_CODEWORDS`], sampled beyond.
    Auto { count: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstacyclicReport {
    pub tested: u64,
    pub exhaustive: bool,
    pub beta_inv: u32,
    /// The shift is the plain cyclic shift only when `beta = 1`, i.e. `p = 2`.
    pub cyclic: bool,
}

fn pairs_for(field: &FieldContext, selection: Selection) -> (Vec<(Element, Element)>, bool) {
    let q = field.order();
    let all = q as u128 * q as u128;
    let (exhaustive, count, seed) = match selection {
        Selection::Exhaustive => (true, 0, 0),
        Selection::Sampled { count, seed } => (false, count, seed),
        Selection::Auto { count, seed } => (all <= EXHAUSTIVE_CODEWORDS as u128, count, seed),
    };
    if exhaustive {
        let pairs = field
            .elements()
            .flat_map(|u| field.elements().map(move |v| (u, v)))
            .collect();
        return (pairs, true);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = (0..count)
        .map(|_| {
            let u = Element::from_index(rng.gen_range(0..q) as usize);
            let v = Element::from_index(rng.gen_range(0..q) as usize);
            (u, v)
        })
        .collect();
    (pairs, false)
}

/// Checks that the constacyclic shift of `c'_{u,v}` is `c'_{u psi^-d1, v psi^-1}`.
pub fn constacyclic_check(field: &FieldContext, d1: i64, selection: Selection) -> Result<ConstacyclicReport> {
    let spec = CodeSpec::new(field, d1)?;
    let p = field.p();
    let beta_inv = field
        .to_prime(field.inv(spec.beta)?)
        .ok_or_else(|| Error::Verification("beta is not in the prime field".into()))?;
    let u_step = field.pow(field.psi(), -(spec.d1 as i64))?;
    let v_step = field.inv(field.psi())?;
    let (pairs, exhaustive) = pairs_for(field, selection);
    pairs.par_iter().try_for_each(|&(u, v)| -> Result<()> {
        let c = codeword(field, d1, u, v, CodeVariant::Short)?;
        let shifted = constacyclic_shift(&c.coords, beta_inv, p);
        let target = codeword(field, d1, field.mul(u, u_step), field.mul(v, v_step), CodeVariant::Short)?;
        if shifted != target.coords {
            return Err(Error::Verification(format!("shift of c'_(u={u}, v={v}) is not a codeword")));
        }
        Ok(())
    })?;
    Ok(ConstacyclicReport {
        tested: pairs.len() as u64,
        exhaustive,
        beta_inv,
        cyclic: beta_inv == 1,
    })
}

/// Checks `c_{u,v} = (c', beta c', ..., beta^(p-2) c')`.
pub fn concatenation_holds(field: &FieldContext, d1: i64, u: Element, v: Element) -> Result<bool> {
    let full = codeword(field, d1, u, v, CodeVariant::Full)?.coords;
    let short = codeword(field, d1, u, v, CodeVariant::Short)?.coords;
    let beta = field.to_prime(field.beta()).unwrap_or(1) as u64;
    let p = field.p() as u64;
    let mut factor = 1u64;
    for block in full.chunks(short.len()) {
        let expect: Vec<u32> = short.iter().map(|&c| (c as u64 * factor % p) as u32).collect();
        if block != expect.as_slice() {
            return Ok(false);
        }
        factor = factor * beta % p;
    }
    Ok(true)
}

/// Rank over GF(p) of a matrix with entries in `[0, p)`.
pub fn rank_mod_p(rows: &[Vec<u32>], p: u32) -> u32 {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&c| c as u64).collect()).collect();
    let p = p as u64;
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = mod_pow(m[rank][col], p - 2, p);
        for x in m[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..m.len() {
            if r != rank && m[r][col] != 0 {
                let f = m[r][col];
                let (top, rest) = if r < rank {
                    let (a, b) = m.split_at_mut(rank);
                    (&b[0], &mut a[r])
                } else {
                    let (a, b) = m.split_at_mut(r);
                    (&a[rank], &mut b[0])
                };
                for (x, &y) in rest.iter_mut().zip(top.iter()) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank as u32
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

pub fn generator_rank(field: &FieldContext, d1: i64) -> Result<u32> {
    Ok(rank_mod_p(&generator_rows(field, d1)?, field.p()))
}

/// Dimension of the short code: counts distinct codewords when there are at
/// most [`EXHAUSTIVE_CODEWORDS`], otherwise the generator rank. Anything
/// below `2n` is an error.
pub fn dimension_check(field: &FieldContext, d1: i64) -> Result<u32> {
    let spec = CodeSpec::new(field, d1)?;
    let q = field.order();
    let dim = if (q as u128) * (q as u128) <= EXHAUSTIVE_CODEWORDS as u128 {
        let mut seen = HashSet::new();
        for u in field.elements() {
            for v in field.elements() {
                seen.insert(codeword(field, d1, u, v, CodeVariant::Short)?.coords);
            }
        }
        let distinct = seen.len() as u64;
        let mut dim = 0u32;
        let mut size = 1u64;
        while size < distinct {
            size *= field.p() as u64;
            dim += 1;
        }
        if size != distinct {
            return Err(Error::Verification(format!("{distinct} distinct codewords is not a power of p")));
        }
        dim
    } else {
        generator_rank(field, d1)?
    };
    if dim != spec.dimension {
        return Err(Error::Verification(format!("dimension {dim}, expected {}", spec.dimension)));
    }
    Ok(dim)
}

/// Minimal polynomial over GF(p) of `x`, constant term first.
pub fn minimal_polynomial(field: &FieldContext, x: Element) -> Result<Vec<u32>> {
    let mut conjugates = vec![x];
    loop {
        let next = field.frobenius(*conjugates.last().unwrap(), 1);
        if next == x {
            break;
        }
        conjugates.push(next);
    }
    // Multiply out prod (X - c) with coefficients in the field.
    let mut poly = vec![Element::ONE];
    for c in conjugates {
        let neg_c = field.neg(c);
        let mut next = vec![Element::ZERO; poly.len() + 1];
        for (i, &a) in poly.iter().enumerate() {
            next[i + 1] = field.add(next[i + 1], a);
            next[i] = field.add(next[i], field.mul(a, neg_c));
        }
        poly = next;
    }
    poly.into_iter()
        .map(|c| field.to_prime(c).ok_or_else(|| Error::Verification("minimal polynomial not over GF(p)".into())))
        .collect()
}

fn poly_mul_mod_p(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    out.into_iter().map(|c| c as u32).collect()
}

/// Quotient of `num` by the monic `den` over GF(p); errors on a remainder.
fn poly_div_exact(num: &[u32], den: &[u32], p: u32) -> Result<Vec<u32>> {
    let p = p as u64;
    let mut rem: Vec<u64> = num.iter().map(|&c| c as u64).collect();
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return Err(Error::Verification("division by a polynomial of higher degree".into()));
    }
    let mut quot = vec![0u64; rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        for (i, &d) in den.iter().enumerate() {
            rem[k + i] = (rem[k + i] + p - c * d as u64 % p) % p;
        }
    }
    if rem.iter().any(|&c| c != 0) {
        return Err(Error::Verification("polynomial division leaves a remainder".into()));
    }
    Ok(quot.into_iter().map(|c| c as u32).collect())
}

/// Parity-check polynomial `h1 h2` of the full-length cyclic code and its
/// generator `(x^(p^n - 1) - 1) / (h1 h2)`, both constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodePolynomials {
    pub h1: Vec<u32>,
    pub h2: Vec<u32>,
    pub parity_check: Vec<u32>,
    pub generator: Vec<u32>,
}

pub fn code_polynomials(field: &FieldContext, d1: i64) -> Result<CodePolynomials> {
    let h1 = minimal_polynomial(field, field.inv(field.psi())?)?;
    let h2 = minimal_polynomial(field, field.pow(field.psi(), -d1)?)?;
    let p = field.p();
    let parity_check = poly_mul_mod_p(&h1, &h2, p);
    let mut xn1 = vec![0u32; field.mult_order() as usize + 1];
    xn1[0] = p - 1;
    xn1[field.mult_order() as usize] = 1;
    let generator = poly_div_exact(&xn1, &parity_check, p)?;
    Ok(CodePolynomials {
        h1,
        h2,
        parity_check,
        generator,
    })
}
