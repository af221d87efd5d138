use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::dyadic::Dyadic;
use super::interval::Interval;
use crate::error::{Error, Result};

/// Default bound for trial division when extracting squarefree parts.
pub const DEFAULT_FACTOR_BOUND: u64 = 1_000_000;

/// Exact element `a + b·√D` of a real quadratic field.
///
/// `D` is squarefree and at least 2, except for rational values built from a
/// perfect-square radicand, which carry `D = 1` and `b = 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadNum {
    a: BigRational,
    b: BigRational,
    d: BigInt,
}

/// Writes `d = f² · s` with `s` squarefree.
pub fn squarefree_decompose(d: &BigInt, bound: u64) -> Result<(BigInt, BigInt)> {
    if d.is_zero() {
        return Err(Error::CannotFactor { value: "0".into(), bound });
    }
    if d.is_negative() {
        return Err(Error::InvalidInput(format!("radicand {d} is negative")));
    }
    if let Some(small) = d.to_u128() {
        return squarefree_u128(small, bound)
            .map(|(f, s)| (BigInt::from(f), BigInt::from(s)))
            .ok_or_else(|| Error::CannotFactor { value: d.to_string(), bound });
    }
    let mut rest = d.clone();
    let mut f = BigInt::one();
    let mut s = BigInt::one();
    let mut p = 2u64;
    while p <= bound && BigInt::from(p) * BigInt::from(p) <= rest {
        let bp = BigInt::from(p);
        let mut e = 0u32;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            e += 1;
        }
        f *= num_traits::pow(bp.clone(), (e / 2) as usize);
        if e % 2 == 1 {
            s *= &bp;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    finish_cofactor(rest, f, s, p, bound, d)
}

fn finish_cofactor(
    rest: BigInt,
    f: BigInt,
    s: BigInt,
    p: u64,
    bound: u64,
    d: &BigInt,
) -> Result<(BigInt, BigInt)> {
    if rest.is_one() {
        return Ok((f, s));
    }
    // Every prime factor of `rest` is at least `p`; below p² it must be prime.
    let pp = BigInt::from(p) * BigInt::from(p);
    if rest < pp {
        return Ok((f, s * rest));
    }
    Err(Error::CannotFactor { value: d.to_string(), bound })
}

fn squarefree_u128(d: u128, bound: u64) -> Option<(u128, u128)> {
    let mut rest = d;
    let mut f: u128 = 1;
    let mut s: u128 = 1;
    let mut p: u128 = 2;
    while p <= bound as u128 && p * p <= rest {
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        for _ in 0..e / 2 {
            f *= p;
        }
        if e % 2 == 1 {
            s *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest == 1 {
        return Some((f, s));
    }
    if rest < p * p {
        return Some((f, s * rest));
    }
    None
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl QuadNum {
    /// `a + b·√d`, canonicalized so that the stored radicand is squarefree.
    pub fn new(a: BigRational, b: BigRational, d: &BigInt) -> Result<QuadNum> {
        QuadNum::with_factor_bound(a, b, d, DEFAULT_FACTOR_BOUND)
    }

    pub fn with_factor_bound(
        a: BigRational,
        b: BigRational,
        d: &BigInt,
        bound: u64,
    ) -> Result<QuadNum> {
        let (f, s) = squarefree_decompose(d, bound)?;
        let b = b * BigRational::from_integer(f);
        if s.is_one() {
            // Perfect-square radicand: the value is rational.
            return Ok(QuadNum { a: a + b, b: BigRational::zero(), d: s });
        }
        Ok(QuadNum { a, b, d: s })
    }

    /// Convenience constructor from small integers: `(an/ad) + (bn/bd)·√d`.
    pub fn from_parts(an: i64, ad: i64, bn: i64, bd: i64, d: i64) -> Result<QuadNum> {
        QuadNum::new(
            BigRational::new(an.into(), ad.into()),
            BigRational::new(bn.into(), bd.into()),
            &BigInt::from(d),
        )
    }

    /// The rational `r` viewed inside `Q(√d)`; `d` must already be squarefree.
    pub fn rational_in(r: BigRational, d: &BigInt) -> QuadNum {
        QuadNum { a: r, b: BigRational::zero(), d: d.clone() }
    }

    pub fn int_in(n: i64, d: &BigInt) -> QuadNum {
        QuadNum::rational_in(rat(n), d)
    }

    pub fn bigint_in(n: &BigInt, d: &BigInt) -> QuadNum {
        QuadNum::rational_in(BigRational::from_integer(n.clone()), d)
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    /// True for rational values (the "degenerate" case).
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn conjugate(&self) -> QuadNum {
        QuadNum { a: self.a.clone(), b: -&self.b, d: self.d.clone() }
    }

    /// `a² − b²D`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(self.d.clone())
    }

    /// `2a`.
    pub fn trace(&self) -> BigRational {
        &self.a + &self.a
    }

    fn join_field(&self, other: &QuadNum) -> Result<BigInt> {
        if self.d == other.d || other.b.is_zero() {
            Ok(self.d.clone())
        } else if self.b.is_zero() {
            Ok(other.d.clone())
        } else {
            Err(Error::FieldMismatch {
                left: self.d.to_string(),
                right: other.d.to_string(),
            })
        }
    }

    pub fn try_add(&self, other: &QuadNum) -> Result<QuadNum> {
        let d = self.join_field(other)?;
        Ok(QuadNum { a: &self.a + &other.a, b: &self.b + &other.b, d })
    }

    pub fn try_sub(&self, other: &QuadNum) -> Result<QuadNum> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &QuadNum) -> Result<QuadNum> {
        let d = self.join_field(other)?;
        let dr = BigRational::from_integer(d.clone());
        Ok(QuadNum {
            a: &self.a * &other.a + &self.b * &other.b * dr,
            b: &self.a * &other.b + &self.b * &other.a,
            d,
        })
    }

    pub fn try_div(&self, other: &QuadNum) -> Result<QuadNum> {
        let n = other.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let num = self.try_mul(&other.conjugate())?;
        Ok(QuadNum { a: num.a / &n, b: num.b / &n, d: num.d })
    }

    pub fn recip(&self) -> Result<QuadNum> {
        QuadNum::int_in(1, &self.d).try_div(self)
    }

    pub fn scale(&self, r: &BigRational) -> QuadNum {
        QuadNum { a: &self.a * r, b: &self.b * r, d: self.d.clone() }
    }

    pub fn pow(&self, n: u64) -> QuadNum {
        let mut result = QuadNum::int_in(1, &self.d);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn powi(&self, n: i64) -> Result<QuadNum> {
        if n >= 0 {
            Ok(self.pow(n as u64))
        } else {
            self.recip().map(|r| r.pow(n.unsigned_abs()))
        }
    }

    /// Exact sign by comparing `a²` with `b²D`.
    pub fn sign(&self) -> i32 {
        let sa = sgn(&self.a);
        let sb = sgn(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * BigRational::from_integer(self.d.clone());
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn abs(&self) -> QuadNum {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn cmp_exact(&self, other: &QuadNum) -> Result<Ordering> {
        Ok(self.try_sub(other)?.sign().cmp(&0))
    }

    /// Writes the value as `(P + Q√D)/R` with integers and `R > 0`.
    fn integer_form(&self) -> (BigInt, BigInt, BigInt) {
        let r = self.a.denom().lcm(self.b.denom());
        let p = (&self.a * BigRational::from_integer(r.clone())).to_integer();
        let q = (&self.b * BigRational::from_integer(r.clone())).to_integer();
        (p, q, r)
    }

    /// The unique integer `n` with `n ≤ x < n + 1`, computed exactly.
    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.a.floor().to_integer();
        }
        let (p, q, r) = self.integer_form();
        let m: BigInt = &q * &q * &self.d;
        let f = m.sqrt();
        // √m is irrational, so it lies strictly between f and f + 1.
        if q.is_positive() {
            (p + f).div_floor(&r)
        } else {
            (p - f - BigInt::one()).div_floor(&r)
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// Interval enclosure of width at most `2^(2−p)·max(1, |x|)`.
    ///
    /// Endpoints lie on the grid `2^−k` with `k` increasing in `p`, so
    /// enclosures at higher precision are nested inside lower ones.
    pub fn enclose(&self, precision_bits: u32) -> Interval {
        assert!(precision_bits >= 4, "precision must be at least 4 bits");
        if self.is_zero() {
            return Interval::zero(precision_bits);
        }
        let mag = self.abs().floor();
        let e = if mag.is_zero() { 0 } else { mag.bits() as i64 - 1 };
        let k = precision_bits as i64 - 2 - e;
        let scale = if k >= 0 {
            BigRational::from_integer(BigInt::one() << k as usize)
        } else {
            BigRational::new(BigInt::one(), BigInt::one() << (-k) as usize)
        };
        let scaled = self.scale(&scale);
        let fl = scaled.floor();
        let exact = scaled.is_rational() && scaled.a.is_integer();
        let lo = Dyadic::new(fl.clone(), -k);
        let hi = if exact { lo.clone() } else { Dyadic::new(fl + 1, -k) };
        Interval::from_exact_endpoints(lo, hi, precision_bits)
    }

    pub fn to_f64(&self) -> f64 {
        self.enclose(64).mid_f64()
    }
}

fn sgn(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl Neg for &QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum { a: -&self.a, b: -&self.b, d: self.d.clone() }
    }
}

impl Neg for QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        -&self
    }
}

// Operator forms panic on mixed fields; use the `try_*` methods where the
// fields are not known to agree.
impl Add for &QuadNum {
    type Output = QuadNum;
    fn add(self, other: &QuadNum) -> QuadNum {
        self.try_add(other).expect("QuadNum addition across different fields")
    }
}

impl Sub for &QuadNum {
    type Output = QuadNum;
    fn sub(self, other: &QuadNum) -> QuadNum {
        self.try_sub(other).expect("QuadNum subtraction across different fields")
    }
}

impl Mul for &QuadNum {
    type Output = QuadNum;
    fn mul(self, other: &QuadNum) -> QuadNum {
        self.try_mul(other).expect("QuadNum multiplication across different fields")
    }
}

impl fmt::Debug for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})√{}", self.a, self.b, self.d)
    }
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct QuadNumJson {
    a_num: String,
    a_den: String,
    b_num: String,
    b_den: String,
    #[serde(rename = "D")]
    d: String,
}

impl Serialize for QuadNum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QuadNumJson {
            a_num: self.a.numer().to_string(),
            a_den: self.a.denom().to_string(),
            b_num: self.b.numer().to_string(),
            b_den: self.b.denom().to_string(),
            d: self.d.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadNum {
    fn deserialize<De: Deserializer<'de>>(de: De) -> std::result::Result<Self, De::Error> {
        use serde::de::Error as _;
        let j = QuadNumJson::deserialize(de)?;
        let int = |s: &str| s.parse::<BigInt>().map_err(De::Error::custom);
        let (an, ad, bn, bd, d) = (
            int(&j.a_num)?,
            int(&j.a_den)?,
            int(&j.b_num)?,
            int(&j.b_den)?,
            int(&j.d)?,
        );
        if ad.is_zero() || bd.is_zero() {
            return Err(De::Error::custom("zero denominator"));
        }
        QuadNum::new(BigRational::new(an, ad), BigRational::new(bn, bd), &d)
            .map_err(De::Error::custom)
    }
}
