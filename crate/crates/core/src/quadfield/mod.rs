//! Exact arithmetic in real quadratic fields and dyadic interval enclosures.

mod dyadic;
mod interval;
mod quadnum;

pub use dyadic::{Dyadic, Round};
pub use interval::{DyadicInterval, Interval};
pub use quadnum::{squarefree_decompose, QuadNum, DEFAULT_FACTOR_BOUND};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::Result;

/// `a + b·√d` with `d` reduced to its squarefree part.
pub fn make_quadnum(a: BigRational, b: BigRational, d: &BigInt) -> Result<QuadNum> {
    QuadNum::new(a, b, d)
}
