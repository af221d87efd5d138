//! Outward-rounded intervals over dyadic endpoints.
//!
//! Every operation rounds the lower endpoint down and the upper endpoint up,
//! so the result always encloses the exact value. Elementary functions are
//! evaluated with fixed-point series whose lower and upper sums are carried
//! separately; no floating-point value ever feeds a bound.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};

/// Closed interval `[lo, hi]` with dyadic endpoints.
#[derive(Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

pub type DyadicInterval = Interval;

impl Interval {
    /// Builds an interval from already-certified endpoints, rounding them outward to `prec` bits.
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Interval {
        assert!(lo <= hi, "interval endpoints out of order: {lo:?} > {hi:?}");
        Interval {
            lo: lo.round(prec, Round::Down),
            hi: hi.round(prec, Round::Up),
            prec,
        }
    }

    /// Keeps the endpoints verbatim (no re-rounding).
    pub(crate) fn from_exact_endpoints(lo: Dyadic, hi: Dyadic, prec: u32) -> Interval {
        assert!(lo <= hi);
        Interval { lo, hi, prec }
    }

    pub fn point(d: Dyadic, prec: u32) -> Interval {
        Interval::new(d.clone(), d, prec)
    }

    pub fn from_int(n: &BigInt, prec: u32) -> Interval {
        Interval::point(Dyadic::from_int(n), prec)
    }

    pub fn from_i64(n: i64, prec: u32) -> Interval {
        Interval::point(Dyadic::from_i64(n), prec)
    }

    pub fn from_ratio(num: i64, den: i64, prec: u32) -> Interval {
        Interval::from_rational(&BigRational::new(num.into(), den.into()), prec)
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Interval {
        Interval {
            lo: Dyadic::from_rational(r, prec, Round::Down),
            hi: Dyadic::from_rational(r, prec, Round::Up),
            prec,
        }
    }

    pub fn zero(prec: u32) -> Interval {
        Interval::from_i64(0, prec)
    }

    pub fn one(prec: u32) -> Interval {
        Interval::from_i64(1, prec)
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Interval {
        Interval::new(self.lo.clone(), self.hi.clone(), prec)
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, d: &Dyadic) -> bool {
        &self.lo <= d && d <= &self.hi
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        &self.lo.to_rational() <= r && r <= &self.hi.to_rational()
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Certified strict comparison; `None` when the intervals overlap.
    pub fn cmp_certain(&self, other: &Interval) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.is_point() && other.is_point() && self.lo == other.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn certainly_lt(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_le(&self, other: &Interval) -> bool {
        self.hi <= other.lo
    }

    pub fn certainly_gt(&self, other: &Interval) -> bool {
        other.certainly_lt(self)
    }

    pub fn certainly_positive(&self) -> bool {
        self.lo.signum() > 0
    }

    pub fn mid_f64(&self) -> f64 {
        (self.lo.to_f64() + self.hi.to_f64()) / 2.0
    }

    fn join_prec(&self, other: &Interval) -> u32 {
        self.prec.max(other.prec)
    }

    pub fn abs(&self) -> Interval {
        if self.lo.signum() >= 0 {
            self.clone()
        } else if self.hi.signum() <= 0 {
            -self
        } else {
            let hi = self.lo.abs().max(self.hi.clone());
            Interval::from_exact_endpoints(Dyadic::zero(), hi, self.prec)
        }
    }

    pub fn max(&self, other: &Interval) -> Interval {
        Interval::from_exact_endpoints(
            self.lo.clone().max(other.lo.clone()),
            self.hi.clone().max(other.hi.clone()),
            self.join_prec(other),
        )
    }

    pub fn min(&self, other: &Interval) -> Interval {
        Interval::from_exact_endpoints(
            self.lo.clone().min(other.lo.clone()),
            self.hi.clone().min(other.hi.clone()),
            self.join_prec(other),
        )
    }

    /// Convex hull of both intervals.
    pub fn hull(&self, other: &Interval) -> Interval {
        Interval::from_exact_endpoints(
            self.lo.clone().min(other.lo.clone()),
            self.hi.clone().max(other.hi.clone()),
            self.join_prec(other),
        )
    }

    pub fn mul_pow2(&self, k: i64) -> Interval {
        Interval::from_exact_endpoints(self.lo.mul_pow2(k), self.hi.mul_pow2(k), self.prec)
    }

    pub fn mul_int(&self, n: i64) -> Interval {
        self * &Interval::from_i64(n, self.prec)
    }

    pub fn div(&self, other: &Interval) -> Result<Interval> {
        if other.contains_zero() {
            return Err(Error::Indeterminate(
                "division by an interval containing zero".into(),
            ));
        }
        let p = self.join_prec(other);
        let mut los = Vec::with_capacity(4);
        let mut his = Vec::with_capacity(4);
        for a in [&self.lo, &self.hi] {
            for b in [&other.lo, &other.hi] {
                los.push(a.div(b, p, Round::Down));
                his.push(a.div(b, p, Round::Up));
            }
        }
        Ok(Interval {
            lo: los.into_iter().min().unwrap(),
            hi: his.into_iter().max().unwrap(),
            prec: p,
        })
    }

    pub fn recip(&self) -> Result<Interval> {
        Interval::one(self.prec).div(self)
    }

    pub fn sqr(&self) -> Interval {
        let a = self.abs();
        Interval::new(a.lo.mul(&a.lo), a.hi.mul(&a.hi), self.prec)
    }

    pub fn powi(&self, n: i64) -> Result<Interval> {
        if n < 0 {
            return self.powi(-n)?.recip();
        }
        let mut result = Interval::one(self.prec);
        let mut base = self.clone();
        let mut e = n as u64;
        // Squaring goes through `sqr`, so a base straddling zero stays tight.
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        Ok(result)
    }

    pub fn sqrt(&self) -> Result<Interval> {
        if self.hi.is_negative() {
            return Err(Error::InvalidInput("sqrt of a negative interval".into()));
        }
        let lo = if self.lo.is_negative() {
            Dyadic::zero()
        } else {
            self.lo.sqrt(self.prec, Round::Down)
        };
        Ok(Interval {
            lo,
            hi: self.hi.sqrt(self.prec, Round::Up),
            prec: self.prec,
        })
    }

    /// Natural logarithm; the interval must be bounded away from zero.
    pub fn ln(&self) -> Result<Interval> {
        if !self.certainly_positive() {
            return Err(Error::Indeterminate(
                "logarithm of an interval not bounded away from zero".into(),
            ));
        }
        if self.is_point() {
            return ln_dyadic(&self.lo, self.prec);
        }
        let lo = ln_dyadic(&self.lo, self.prec)?.lo;
        let hi = ln_dyadic(&self.hi, self.prec)?.hi;
        Ok(Interval { lo, hi, prec: self.prec })
    }

    pub fn exp(&self) -> Result<Interval> {
        if self.is_point() {
            return exp_dyadic(&self.lo, self.prec);
        }
        let lo = exp_dyadic(&self.lo, self.prec)?.lo;
        let hi = exp_dyadic(&self.hi, self.prec)?.hi;
        Ok(Interval { lo, hi, prec: self.prec })
    }

    /// `self^y` for a positive base.
    pub fn pow(&self, y: &Interval) -> Result<Interval> {
        if self.is_point() && self.lo.is_zero() {
            return Ok(Interval::zero(self.prec));
        }
        if y.is_point() && y.lo.exponent() >= 0 && y.lo.ilog2().unwrap_or(0) < 62 {
            if let Some(n) = y.lo.floor().to_i64() {
                return self.powi(n);
            }
        }
        (y * &self.ln()?).exp()
    }

    /// `log⁺ x = log max{x, 3}`.
    pub fn log_plus(&self) -> Result<Interval> {
        self.max(&Interval::from_i64(3, self.prec)).ln()
    }

    pub fn e(prec: u32) -> Interval {
        Interval::one(prec).exp().expect("exp(1)")
    }

    pub fn ln2(prec: u32) -> Interval {
        let w = prec + 16;
        let (lo, hi) = ln2_fixed(w);
        Interval::new(
            Dyadic::new(BigInt::from(lo), -(w as i64)),
            Dyadic::new(BigInt::from(hi), -(w as i64)),
            prec,
        )
    }

    /// Decimal strings `(lo, hi)` rounded outward.
    pub fn to_decimal_pair(&self, digits: usize) -> (String, String) {
        (
            self.lo.to_sci_string(digits, Round::Down),
            self.hi.to_sci_string(digits, Round::Up),
        )
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.to_decimal_pair(12);
        write!(f, "[{lo}, {hi}]")
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            prec: self.prec,
        }
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        -&self
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, other: &Interval) -> Interval {
        Interval::new(
            self.lo.add(&other.lo),
            self.hi.add(&other.hi),
            self.join_prec(other),
        )
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, other: &Interval) -> Interval {
        Interval::new(
            self.lo.sub(&other.hi),
            self.hi.sub(&other.lo),
            self.join_prec(other),
        )
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, other: &Interval) -> Interval {
        let p = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = p.iter().min().unwrap().clone();
        let hi = p.iter().max().unwrap().clone();
        Interval::new(lo, hi, self.join_prec(other))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Interval {
            type Output = Interval;
            fn $m(self, other: Interval) -> Interval {
                (&self).$m(&other)
            }
        }
        impl $tr<&Interval> for Interval {
            type Output = Interval;
            fn $m(self, other: &Interval) -> Interval {
                (&self).$m(other)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

// ---------------------------------------------------------------------------
// Fixed-point kernels. All values are non-negative integers scaled by 2^w;
// `(lo, hi)` pairs bracket the exact real value times 2^w.

fn div_ceil(a: &BigUint, b: &BigUint) -> BigUint {
    let (q, r) = a.div_rem(b);
    if r.is_zero() {
        q
    } else {
        q + 1u32
    }
}

fn shr_ceil(a: &BigUint, w: u32) -> BigUint {
    let q = a >> w as usize;
    if (&q << w as usize) == *a {
        q
    } else {
        q + 1u32
    }
}

/// Brackets `atanh(num/den) · 2^w` for `0 ≤ num/den ≤ 1/3`.
fn atanh_fixed(num: &BigUint, den: &BigUint, w: u32) -> (BigUint, BigUint) {
    let scaled = num << w as usize;
    let t_lo = &scaled / den;
    let t_hi = div_ceil(&scaled, den);
    let t2_lo = (&t_lo * &t_lo) >> w as usize;
    let t2_hi = shr_ceil(&(&t_hi * &t_hi), w);

    let mut sum_lo = BigUint::zero();
    let mut sum_hi = BigUint::zero();
    let mut p_lo = t_lo;
    let mut p_hi = t_hi;
    let mut k: u32 = 0;
    loop {
        let d = BigUint::from(2 * k + 1);
        sum_lo += &p_lo / &d;
        sum_hi += div_ceil(&p_hi, &d);
        p_lo = (&p_lo * &t2_lo) >> w as usize;
        p_hi = shr_ceil(&(&p_hi * &t2_hi), w);
        k += 1;
        // Remaining terms sum to at most p·(1 + t² + t⁴ + …) ≤ (9/8)·p.
        if p_hi <= BigUint::one() {
            sum_hi += 2u32;
            break;
        }
    }
    (sum_lo, sum_hi)
}

fn ln2_fixed(w: u32) -> (BigUint, BigUint) {
    let (lo, hi) = atanh_fixed(&BigUint::one(), &BigUint::from(3u32), w);
    (lo << 1usize, hi << 1usize)
}

fn ln_dyadic(x: &Dyadic, prec: u32) -> Result<Interval> {
    if x.signum() <= 0 {
        return Err(Error::InvalidInput("logarithm of a non-positive number".into()));
    }
    let mant = x.mantissa().magnitude().clone();
    let b = mant.bits();
    // x = m · 2^e with m = mant / 2^(b-1) in [1, 2)
    let e = x.exponent() + b as i64 - 1;
    let e_bits = 64 - (e.unsigned_abs()).leading_zeros();
    let w = prec + 24 + e_bits;
    let wi = -(w as i64);

    let (l2_lo, l2_hi) = ln2_fixed(w);
    let (eln_lo, eln_hi) = if e >= 0 {
        (
            BigInt::from(l2_lo) * e,
            BigInt::from(l2_hi) * e,
        )
    } else {
        (BigInt::from(l2_hi) * e, BigInt::from(l2_lo) * e)
    };

    let (m_lo, m_hi) = if mant.is_one() {
        (BigInt::zero(), BigInt::zero())
    } else {
        let half = BigUint::one() << (b - 1) as usize;
        let num = &mant - &half;
        let den = &mant + &half;
        let (lo, hi) = atanh_fixed(&num, &den, w);
        (BigInt::from(lo) << 1usize, BigInt::from(hi) << 1usize)
    };

    Ok(Interval::new(
        Dyadic::new(m_lo + eln_lo, wi),
        Dyadic::new(m_hi + eln_hi, wi),
        prec,
    ))
}

/// Brackets `exp(r) · 2^w` for a fixed-point `r_fp = r · 2^w` with `0 ≤ r < 1`.
fn exp_taylor_fixed(r_fp: &BigUint, w: u32, dir: Round) -> BigUint {
    let one = BigUint::one() << w as usize;
    let mut term = one.clone();
    let mut sum = one;
    let mut i: u32 = 1;
    loop {
        let prod = &term * r_fp;
        term = match dir {
            Round::Down => (prod >> w as usize) / BigUint::from(i),
            Round::Up => div_ceil(&shr_ceil(&prod, w), &BigUint::from(i)),
        };
        sum += &term;
        i += 1;
        match dir {
            Round::Down if term.is_zero() => break,
            // For i ≥ 2 the ratio of successive terms is below 1/2, so the tail is ≤ term.
            Round::Up if term <= BigUint::one() && i >= 3 => {
                sum += 2u32;
                break;
            }
            _ => {}
        }
    }
    sum
}

/// Directed bound on `exp(r) · 2^w` for a dyadic `|r| < 1`.
fn exp_small_fixed(r: &Dyadic, w: u32, dir: Round) -> BigUint {
    let scaled = r.mul_pow2(w as i64);
    if !r.is_negative() {
        let fp = match dir {
            Round::Down => scaled.floor(),
            Round::Up => scaled.ceil(),
        };
        exp_taylor_fixed(fp.magnitude(), w, dir)
    } else {
        // exp(r) = 1 / exp(-r)
        let neg = scaled.neg();
        let fp = match dir {
            Round::Down => neg.ceil(),
            Round::Up => neg.floor(),
        };
        let inv = exp_taylor_fixed(fp.magnitude(), w, dir.flip());
        let num = BigUint::one() << (2 * w) as usize;
        match dir {
            Round::Down => num / inv,
            Round::Up => div_ceil(&num, &inv),
        }
    }
}

fn exp_dyadic(x: &Dyadic, prec: u32) -> Result<Interval> {
    if x.is_zero() {
        return Ok(Interval::one(prec));
    }
    let xf = x.to_f64();
    if !xf.is_finite() || xf.abs() > 1e15 {
        return Err(Error::InvalidInput(format!(
            "exponential argument out of range ({xf:e})"
        )));
    }
    let k = (xf / std::f64::consts::LN_2).floor() as i64;
    let k_bits = 64 - k.unsigned_abs().leading_zeros();
    let w = prec + 32 + k_bits;
    let wi = -(w as i64);
    let (l2_lo, l2_hi) = ln2_fixed(w);
    let l2_lo = Dyadic::new(BigInt::from(l2_lo), wi);
    let l2_hi = Dyadic::new(BigInt::from(l2_hi), wi);
    let kd = Dyadic::from_i64(k);
    let (kl_lo, kl_hi) = if k >= 0 {
        (kd.mul(&l2_lo), kd.mul(&l2_hi))
    } else {
        (kd.mul(&l2_hi), kd.mul(&l2_lo))
    };
    let r_lo = x.sub(&kl_hi);
    let r_hi = x.sub(&kl_lo);
    let one = Dyadic::one();
    if r_lo.abs() >= one || r_hi.abs() >= one {
        return Err(Error::Indeterminate("exp argument reduction failed".into()));
    }
    let lo = exp_small_fixed(&r_lo, w, Round::Down);
    let hi = exp_small_fixed(&r_hi, w, Round::Up);
    Ok(Interval::new(
        Dyadic::new(BigInt::from(lo), wi + k),
        Dyadic::new(BigInt::from(hi), wi + k),
        prec,
    ))
}
