//! Exact computations for the power maps `x^(p^2l - p^l + 1)` and
//! `x^(p^3l - p^2l + p^l)` over GF(p^4l): differential spectra, c-differential
//! uniformity, exponential sum distributions, trace-code weight enumerators
//! and diagonal-curve point counts. Every closed form is paired with a
//! brute-force route so the two can be compared exactly.

pub mod codes;
pub mod curve;
pub mod error;
pub mod expsum;
pub mod family;
pub mod field;
pub mod spectrum;

pub use codes::{CodeVariant, WeightDistribution, WeightMethod};
pub use curve::{CurveCase, CurveSpec, QuadInMuQuery};
pub use error::{Error, Result};
pub use family::Family;
pub use field::{ArithOp, Element, FieldContext, FieldParams};
pub use expsum::{NTriple, SumDistribution, TraceCountVector};
pub use spectrum::{CDiffReport, Spectrum};
