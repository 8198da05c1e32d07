//! Table-driven arithmetic in GF(p^n).
//!
//! Elements live in the log domain: an [`Element`] is either zero or a power
//! `psi^k` of the fixed primitive element `psi` (the class of the indeterminate
//! modulo the defining polynomial). Multiplication and powering are index
//! arithmetic modulo `p^n - 1`; addition goes through a Zech logarithm table.
//! Every table is built once in [`FieldContext::build`] and never mutated, so a
//! context can be shared freely between threads.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default upper bound on the number of field elements.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 22;

/// Defining data of a field: characteristic, degree and a monic modulus with
/// the constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldParams {
    pub p: u32,
    pub n: u32,
    pub modulus: Vec<u32>,
}

impl FieldParams {
    /// Checks the shape of the descriptor (prime `p`, monic modulus of degree
    /// `n` with digits below `p`). Primitivity is checked when the field is
    /// built.
    pub fn new(p: u32, n: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::InvalidModulus("degree must be positive".into()));
        }
        if modulus.len() != n as usize + 1 {
            return Err(Error::InvalidModulus(format!(
                "expected {} coefficients, got {}",
                n + 1,
                modulus.len()
            )));
        }
        if modulus[n as usize] != 1 {
            return Err(Error::InvalidModulus("modulus must be monic".into()));
        }
        if let Some(c) = modulus.iter().find(|&&c| c >= p) {
            return Err(Error::InvalidModulus(format!("coefficient {c} not reduced mod {p}")));
        }
        Ok(Self { p, n, modulus })
    }

    /// The descriptor with the lexicographically smallest primitive modulus.
    pub fn standard(p: u32, n: u32) -> Result<Self> {
        Self::standard_with_cap(p, n, DEFAULT_FIELD_CAP)
    }

    pub fn standard_with_cap(p: u32, n: u32, cap: u64) -> Result<Self> {
        let modulus = find_primitive_polynomial_with_cap(p, n, cap)?;
        Self::new(p, n, modulus)
    }

    /// `p^n`, or `None` on overflow.
    pub fn order(&self) -> Option<u64> {
        (self.p as u64).checked_pow(self.n)
    }
}

/// Trial-division primality test; inputs here are at most a few million.
pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let p = p as u64;
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn checked_order(p: u32, n: u32, cap: u64) -> Result<u64> {
    match (p as u64).checked_pow(n) {
        Some(q) if q <= cap => Ok(q),
        _ => Err(Error::FieldTooLarge { p, n, cap }),
    }
}

/// Returns the lexicographically smallest monic primitive polynomial of degree
/// `n` over GF(p). Coefficients are compared constant term first; the result
/// includes the leading 1.
pub fn find_primitive_polynomial(p: u32, n: u32) -> Result<Vec<u32>> {
    find_primitive_polynomial_with_cap(p, n, DEFAULT_FIELD_CAP)
}

pub fn find_primitive_polynomial_with_cap(p: u32, n: u32, cap: u64) -> Result<Vec<u32>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n == 0 {
        return Err(Error::InvalidModulus("degree must be positive".into()));
    }
    let q = checked_order(p, n, cap)?;
    // Candidate number k encodes (c_0, ..., c_{n-1}) with c_0 most significant.
    for k in 0..q {
        let mut low = vec![0u32; n as usize];
        let mut rest = k;
        for i in (0..n as usize).rev() {
            low[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        if n > 1 && low[0] == 0 {
            continue;
        }
        if powers_of_x(p, n, &low, q).is_some() {
            low.push(1);
            return Ok(low);
        }
    }
    Err(Error::InvalidModulus(format!("no primitive polynomial of degree {n} over GF({p})")))
}

/// Multiplies the polynomial with the given digits by `x` modulo the monic
/// polynomial whose lower coefficients are `low`.
fn times_x(digits: &mut [u32], low: &[u32], p: u32) {
    let n = digits.len();
    let top = digits[n - 1] as u64;
    digits.copy_within(0..n - 1, 1);
    digits[0] = 0;
    if top != 0 {
        let p64 = p as u64;
        for (d, &c) in digits.iter_mut().zip(low) {
            let sub = top * c as u64 % p64;
            *d = ((*d as u64 + p64 - sub) % p64) as u32;
        }
    }
}

fn digits_to_index(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0u32, |acc, &d| acc * p + d)
}

fn index_to_digits(mut idx: u32, p: u32, n: u32) -> Vec<u32> {
    (0..n)
        .map(|_| {
            let d = idx % p;
            idx /= p;
            d
        })
        .collect()
}

/// Powers `x^0, ..., x^{q-2}` as vector indices, if `x` has multiplicative
/// order exactly `q - 1` modulo the polynomial.
fn powers_of_x(p: u32, n: u32, low: &[u32], q: u64) -> Option<Vec<u32>> {
    let q1 = (q - 1) as usize;
    let mut exp = Vec::with_capacity(q1);
    let mut digits = vec![0u32; n as usize];
    digits[0] = 1;
    for k in 0..q1 {
        let idx = digits_to_index(&digits, p);
        if k > 0 && idx == 1 {
            return None;
        }
        exp.push(idx);
        times_x(&mut digits, low, p);
    }
    (digits_to_index(&digits, p) == 1).then_some(exp)
}

/// A field element: zero or `psi^k` with `0 <= k < p^n - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(u32);

impl Element {
    pub const ZERO: Element = Element(0);
    pub const ONE: Element = Element(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Discrete logarithm to base `psi`, `None` for zero.
    #[inline]
    pub fn log(self) -> Option<u32> {
        self.0.checked_sub(1)
    }

    /// Dense position in `0..p^n`: zero first, then `psi^0, psi^1, ...`.
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Inverse of [`Element::index`]. The caller keeps `index < p^n`.
    #[inline]
    pub fn from_index(index: usize) -> Element {
        Element(index as u32)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.log() {
            None => write!(f, "0"),
            Some(k) => write!(f, "psi^{k}"),
        }
    }
}

impl FromStr for Element {
    type Err = Error;

    /// Accepts `0`, `1` and `psi^k`. The exponent is not reduced; use
    /// [`FieldContext::exp`] for that.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "0" => Ok(Element::ZERO),
            "1" => Ok(Element::ONE),
            _ => {
                let k = s
                    .strip_prefix("psi^")
                    .and_then(|k| k.parse::<u32>().ok())
                    .ok_or(Error::Domain("element must be 0, 1 or psi^k"))?;
                k.checked_add(1).map(Element).ok_or(Error::Domain("exponent too large"))
            }
        }
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
    Pow(i64),
}

/// Immutable arithmetic tables for GF(p^n).
#[derive(Clone, Debug)]
pub struct FieldContext {
    params: FieldParams,
    q: u64,
    q1: u64,
    /// `exp[k]` is the vector index of `psi^k`.
    exp: Vec<u32>,
    /// Vector index to raw element.
    log: Vec<u32>,
    /// `zech[k]` is the raw element `1 + psi^k`.
    zech: Vec<u32>,
    /// `trace_log[k] = Tr(psi^k)`.
    trace_log: Vec<u32>,
    neg_one_log: u64,
}

impl FieldContext {
    pub fn build(params: FieldParams) -> Result<Self> {
        Self::build_with_cap(params, DEFAULT_FIELD_CAP)
    }

    pub fn build_with_cap(params: FieldParams, cap: u64) -> Result<Self> {
        let params = FieldParams::new(params.p, params.n, params.modulus)?;
        let q = checked_order(params.p, params.n, cap)?;
        let low = &params.modulus[..params.n as usize];
        let exp = powers_of_x(params.p, params.n, low, q)
            .ok_or_else(|| Error::InvalidModulus("modulus is not primitive".into()))?;
        Ok(Self::from_validated_exp(params, q, exp))
    }

    /// Builds a context with the standard modulus for `(p, n)`.
    pub fn standard(p: u32, n: u32) -> Result<Self> {
        Self::build(FieldParams::standard(p, n)?)
    }

    pub fn standard_with_cap(p: u32, n: u32, cap: u64) -> Result<Self> {
        Self::build_with_cap(FieldParams::standard_with_cap(p, n, cap)?, cap)
    }

    /// Rebuilds a context from a persisted exponent table. The table must be a
    /// permutation of the nonzero vector indices starting at `1, x`, and is
    /// spot-checked against polynomial multiplication.
    pub fn from_exp_table(params: FieldParams, exp: Vec<u32>, cap: u64) -> Result<Self> {
        let params = FieldParams::new(params.p, params.n, params.modulus)?;
        let q = checked_order(params.p, params.n, cap)?;
        let q1 = (q - 1) as usize;
        let bad = |why: &str| Error::InvalidModulus(format!("persisted table rejected: {why}"));
        if exp.len() != q1 {
            return Err(bad("wrong length"));
        }
        let mut seen = vec![false; q as usize];
        for &e in &exp {
            if e == 0 || e as u64 >= q || std::mem::replace(&mut seen[e as usize], true) {
                return Err(bad("not a permutation of the nonzero elements"));
            }
        }
        let low = &params.modulus[..params.n as usize];
        // Check exp[k+1] = x * exp[k] on the first steps and a sparse stride.
        let checked = (0..q1.min(64)).chain((64..q1).step_by(97)).chain(std::iter::once(q1 - 1));
        for k in checked {
            let mut digits = index_to_digits(exp[k], params.p, params.n);
            times_x(&mut digits, low, params.p);
            if digits_to_index(&digits, params.p) != exp[(k + 1) % q1] {
                return Err(bad("table is not the power sequence of the indeterminate"));
            }
        }
        Ok(Self::from_validated_exp(params, q, exp))
    }

    fn from_validated_exp(params: FieldParams, q: u64, exp: Vec<u32>) -> Self {
        let p = params.p;
        let n = params.n;
        let q1 = q - 1;
        let mut log = vec![0u32; q as usize];
        for (k, &idx) in exp.iter().enumerate() {
            log[idx as usize] = k as u32 + 1;
        }
        let zech = exp
            .iter()
            .map(|&idx| {
                let c0 = idx % p;
                let plus_one = idx - c0 + (c0 + 1) % p;
                log[plus_one as usize]
            })
            .collect();
        let neg_one_log = if p == 2 { 0 } else { q1 / 2 };
        let mut ctx = FieldContext {
            params,
            q,
            q1,
            exp,
            log,
            zech,
            trace_log: Vec::new(),
            neg_one_log,
        };

        // Trace of the polynomial basis by definition, everything else by
        // linearity over the vector index digits.
        let basis: Vec<u32> = (0..n as u64)
            .map(|i| {
                ctx.trace_by_frobenius_sum(ctx.exp(i))
                    .expect("trace of a basis element lies in the prime field")
            })
            .collect();
        let mut trace_vec = vec![0u32; q as usize];
        let mut block = 1usize;
        for &t in &basis {
            for c in 1..p as usize {
                let shift = (c as u64 * t as u64 % p as u64) as u32;
                for j in 0..block {
                    trace_vec[c * block + j] = (trace_vec[j] + shift) % p;
                }
            }
            block *= p as usize;
        }
        ctx.trace_log = ctx.exp.iter().map(|&idx| trace_vec[idx as usize]).collect();
        ctx
    }

    pub fn params(&self) -> &FieldParams {
        &self.params
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.params.p
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.params.n
    }

    /// Number of elements, `p^n`.
    #[inline]
    pub fn order(&self) -> u64 {
        self.q
    }

    /// Order of the multiplicative group, `p^n - 1`.
    #[inline]
    pub fn mult_order(&self) -> u64 {
        self.q1
    }

    #[inline]
    pub fn psi(&self) -> Element {
        self.exp(1)
    }

    /// `psi^((p^n - 1)/(p - 1))`, a generator of the prime field's unit group.
    pub fn beta(&self) -> Element {
        self.exp(self.q1 / (self.p() as u64 - 1))
    }

    /// `psi^k`, with `k` reduced modulo `p^n - 1`.
    #[inline]
    pub fn exp(&self, k: u64) -> Element {
        Element((k % self.q1) as u32 + 1)
    }

    /// `ind_psi(x)`.
    pub fn ind(&self, x: Element) -> Result<u64> {
        x.log().map(u64::from).ok_or(Error::Domain("discrete log of zero"))
    }

    /// All elements in dense-index order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.q as u32).map(Element)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Element> + '_ {
        (1..self.q as u32).map(Element)
    }

    /// Reduces an arbitrary integer exponent modulo `p^n - 1`.
    pub fn reduce_exponent(&self, e: i64) -> u64 {
        (e as i128).rem_euclid(self.q1 as i128) as u64
    }

    #[inline]
    pub fn add(&self, x: Element, y: Element) -> Element {
        if x.is_zero() {
            return y;
        }
        if y.is_zero() {
            return x;
        }
        let a = x.0 - 1;
        let b = y.0 - 1;
        let q1 = self.q1 as u32;
        let diff = if b >= a { b - a } else { b + q1 - a };
        let z = self.zech[diff as usize];
        if z == 0 {
            Element::ZERO
        } else {
            let s = a as u64 + (z - 1) as u64;
            Element((s % self.q1) as u32 + 1)
        }
    }

    #[inline]
    pub fn neg(&self, x: Element) -> Element {
        if x.is_zero() || self.p() == 2 {
            x
        } else {
            self.exp(x.0 as u64 - 1 + self.neg_one_log)
        }
    }

    #[inline]
    pub fn sub(&self, x: Element, y: Element) -> Element {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: Element, y: Element) -> Element {
        if x.is_zero() || y.is_zero() {
            return Element::ZERO;
        }
        let s = (x.0 - 1) as u64 + (y.0 - 1) as u64;
        Element((s % self.q1) as u32 + 1)
    }

    pub fn inv(&self, x: Element) -> Result<Element> {
        let k = x.log().ok_or(Error::Domain("inverse of zero"))? as u64;
        Ok(self.exp(self.q1 - k))
    }

    pub fn div(&self, x: Element, y: Element) -> Result<Element> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// `x^e` for any integer `e`; `x^0 = 1` (also for `x = 0`) and `0^e = 0`
    /// for `e > 0`.
    pub fn pow(&self, x: Element, e: i64) -> Result<Element> {
        match x.log() {
            None if e > 0 => Ok(Element::ZERO),
            None if e == 0 => Ok(Element::ONE),
            None => Err(Error::Domain("negative power of zero")),
            Some(k) => {
                let r = (k as i128 * e as i128).rem_euclid(self.q1 as i128);
                Ok(self.exp(r as u64))
            }
        }
    }

    /// `x^e` for a nonnegative exponent.
    #[inline]
    pub fn pow_u(&self, x: Element, e: u64) -> Element {
        match x.log() {
            None if e == 0 => Element::ONE,
            None => Element::ZERO,
            Some(k) => self.exp(((k as u128 * e as u128) % self.q1 as u128) as u64),
        }
    }

    pub fn apply(&self, op: ArithOp, x: Element, y: Element) -> Result<Element> {
        match op {
            ArithOp::Add => Ok(self.add(x, y)),
            ArithOp::Sub => Ok(self.sub(x, y)),
            ArithOp::Mul => Ok(self.mul(x, y)),
            ArithOp::Div => self.div(x, y),
            ArithOp::Neg => Ok(self.neg(x)),
            ArithOp::Inv => self.inv(x),
            ArithOp::Pow(e) => self.pow(x, e),
        }
    }

    /// `x^(p^k)`.
    #[inline]
    pub fn frobenius(&self, x: Element, k: u32) -> Element {
        let pk = (self.p() as u128).pow(k % self.n());
        match x.log() {
            None => x,
            Some(l) => self.exp((l as u128 * pk % self.q1 as u128) as u64),
        }
    }

    /// Absolute trace, read from the table.
    #[inline]
    pub fn trace(&self, x: Element) -> u32 {
        match x.log() {
            None => 0,
            Some(k) => self.trace_log[k as usize],
        }
    }

    /// `Tr(psi^k)` for `0 <= k < p^n - 1`.
    pub fn trace_log_table(&self) -> &[u32] {
        &self.trace_log
    }

    /// Absolute trace computed as `sum_{i<n} x^(p^i)` with field additions.
    pub fn trace_by_frobenius_sum(&self, x: Element) -> Result<u32> {
        self.subfield_trace(x, self.n())
    }

    /// `Tr_1^m(x) = sum_{i<m} x^(p^i)` for `x` in the subfield GF(p^m).
    pub fn subfield_trace(&self, x: Element, m: u32) -> Result<u32> {
        if m == 0 || !self.n().is_multiple_of(m) {
            return Err(Error::Precondition(format!("{m} does not divide {}", self.n())));
        }
        if self.frobenius(x, m) != x {
            return Err(Error::Domain("element is not in the requested subfield"));
        }
        let sum = (0..m).fold(Element::ZERO, |acc, i| self.add(acc, self.frobenius(x, i)));
        self.to_prime(sum)
            .ok_or(Error::Verification("trace sum left the prime field".into()))
    }

    /// `ind(x) mod m` for a divisor `m` of `p^n - 1`.
    pub fn coset_class(&self, x: Element, m: u64) -> Result<u64> {
        if m == 0 || !self.q1.is_multiple_of(m) {
            return Err(Error::Precondition(format!("{m} does not divide {}", self.q1)));
        }
        Ok(self.ind(x)? % m)
    }

    /// Membership in `mu_e = {x : x^e = 1}`.
    #[inline]
    pub fn in_mu(&self, x: Element, e: u64) -> bool {
        match x.log() {
            None => false,
            Some(k) => (k as u128 * e as u128).is_multiple_of(self.q1 as u128),
        }
    }

    /// Embeds `c mod p` into the prime field.
    pub fn from_prime(&self, c: u64) -> Element {
        Element(self.log[(c % self.p() as u64) as usize])
    }

    /// The integer in `[0, p)` representing `x`, if `x` is in the prime field.
    pub fn to_prime(&self, x: Element) -> Option<u32> {
        let idx = self.vector_index(x);
        (idx < self.p()).then_some(idx)
    }

    /// Polynomial-basis coordinates packed as a base-`p` integer.
    #[inline]
    pub fn vector_index(&self, x: Element) -> u32 {
        match x.log() {
            None => 0,
            Some(k) => self.exp[k as usize],
        }
    }

    pub fn from_vector_index(&self, idx: u32) -> Result<Element> {
        self.log
            .get(idx as usize)
            .map(|&raw| Element(raw))
            .ok_or(Error::Domain("vector index out of range"))
    }

    /// Coefficients in the basis `1, psi, ..., psi^(n-1)`.
    pub fn to_coeffs(&self, x: Element) -> Vec<u32> {
        index_to_digits(self.vector_index(x), self.p(), self.n())
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Element> {
        if coeffs.len() > self.n() as usize || coeffs.iter().any(|&c| c >= self.p()) {
            return Err(Error::Domain("coefficients do not describe a field element"));
        }
        self.from_vector_index(digits_to_index(coeffs, self.p()))
    }

    /// Exponent table, `psi^k` as vector indices.
    pub fn exp_table(&self) -> &[u32] {
        &self.exp
    }
}
