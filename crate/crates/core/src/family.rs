use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{is_prime, FieldContext, DEFAULT_FIELD_CAP};

/// The exponent family over GF(p^n) with n = 4l:
/// `d = p^2l - p^l + 1` and its Frobenius twist `d1 = p^l * d = p^3l - p^2l + p^l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Family {
    pub p: u32,
    pub l: u32,
}

impl Family {
    pub fn new(p: u32, l: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if l == 0 {
            return Err(Error::Precondition("l must be positive".into()));
        }
        // p^(8l) must fit comfortably in i128 arithmetic for the closed forms.
        if (p as u128).checked_pow(8 * l).is_none_or(|v| v > (1u128 << 100)) {
            return Err(Error::Precondition(format!("p^(8l) too large for p={p}, l={l}")));
        }
        Ok(Self { p, l })
    }

    /// Recovers the family from a field whose degree is a multiple of 4.
    pub fn of_field(field: &FieldContext) -> Result<Self> {
        if !field.n().is_multiple_of(4) {
            return Err(Error::Precondition(format!("degree {} is not of the form 4l", field.n())));
        }
        Self::new(field.p(), field.n() / 4)
    }

    pub fn n(&self) -> u32 {
        4 * self.l
    }

    /// `p^(k*l)`.
    pub fn pl(&self, k: u32) -> i128 {
        (self.p as i128).pow(k * self.l)
    }

    /// `p^l`.
    pub fn q_l(&self) -> u64 {
        self.pl(1) as u64
    }

    pub fn field_size(&self) -> u64 {
        self.pl(4) as u64
    }

    pub fn d(&self) -> u64 {
        (self.pl(2) - self.pl(1) + 1) as u64
    }

    pub fn d1(&self) -> u64 {
        (self.pl(3) - self.pl(2) + self.pl(1)) as u64
    }

    /// The congruence `p^l = 2 (mod 3)` under which the sum and code results hold.
    pub fn is_two_mod_three(&self) -> bool {
        self.q_l() % 3 == 2
    }

    pub fn require_two_mod_three(&self) -> Result<()> {
        if self.is_two_mod_three() {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "p^l = {} is not 2 mod 3 (p={}, l={})",
                self.q_l(),
                self.p,
                self.l
            )))
        }
    }

    pub fn field(&self) -> Result<FieldContext> {
        self.field_with_cap(DEFAULT_FIELD_CAP)
    }

    pub fn field_with_cap(&self, cap: u64) -> Result<FieldContext> {
        FieldContext::standard_with_cap(self.p, self.n(), cap)
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}
