//! Arbitrary-precision dyadic rationals `m · 2^e` with directed rounding.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction for an inexact result.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

impl Round {
    pub fn flip(self) -> Round {
        match self {
            Round::Down => Round::Up,
            Round::Up => Round::Down,
        }
    }
}

/// `mant · 2^exp`, normalized so that `mant` is odd (or the value is zero with `exp == 0`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

fn bits(x: &BigInt) -> u64 {
    x.magnitude().bits()
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Dyadic {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        if let Some(tz) = self.mant.trailing_zeros() {
            if tz > 0 {
                self.mant >>= tz as usize;
                self.exp += tz as i64;
            }
        }
    }

    pub fn zero() -> Dyadic {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Dyadic {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn from_int(n: &BigInt) -> Dyadic {
        Dyadic::new(n.clone(), 0)
    }

    pub fn from_i64(n: i64) -> Dyadic {
        Dyadic::new(BigInt::from(n), 0)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    /// floor(log2 |x|); `None` for zero.
    pub fn ilog2(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(bits(&self.mant) as i64 - 1 + self.exp)
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &other.mant << (other.exp - e) as usize;
        Dyadic::new(a + b, e)
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    /// Rounds to at most `prec` significant bits in direction `dir`.
    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        let b = bits(&self.mant);
        if b <= prec as u64 {
            return self.clone();
        }
        let shift = b - prec as u64;
        let mag = self.mant.magnitude();
        let q = mag >> shift as usize;
        let inexact = (&q << shift as usize) != *mag;
        // Rounding the magnitude away from zero moves positive values up and negative values down.
        let away = matches!(
            (self.mant.sign(), dir),
            (Sign::Plus, Round::Up) | (Sign::Minus, Round::Down)
        );
        let q = if away && inexact { q + 1u32 } else { q };
        let mant = BigInt::from_biguint(self.mant.sign(), q);
        Dyadic::new(mant, self.exp + shift as i64)
    }

    /// Directed-rounded quotient `num / den` with at least `prec` significant bits.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32, dir: Round) -> Dyadic {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Dyadic::zero();
        }
        let negative = num.is_negative() != den.is_negative();
        let n = num.magnitude();
        let d = den.magnitude();
        let sh = prec as i64 + 2 + d.bits() as i64 - n.bits() as i64;
        let (n, d) = if sh >= 0 {
            (n << sh as usize, d.clone())
        } else {
            (n.clone(), d << (-sh) as usize)
        };
        let (q, r) = n.div_rem(&d);
        let away = negative == (dir == Round::Down);
        let q = if away && !r.is_zero() { q + 1u32 } else { q };
        let sign = if negative { Sign::Minus } else { Sign::Plus };
        Dyadic::new(BigInt::from_biguint(sign, q), -sh).round(prec, dir)
    }

    pub fn from_rational(r: &BigRational, prec: u32, dir: Round) -> Dyadic {
        Dyadic::from_ratio(r.numer(), r.denom(), prec, dir)
    }

    pub fn div(&self, other: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        Dyadic::from_ratio(&self.mant, &other.mant, prec, dir).mul_pow2(self.exp - other.exp)
    }

    /// Directed square root of a non-negative value.
    pub fn sqrt(&self, prec: u32, dir: Round) -> Dyadic {
        assert!(!self.is_negative(), "sqrt of negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let b = bits(&self.mant) as i64;
        let mut sh = (2 * prec as i64 + 4 - b).max(0);
        if (self.exp - sh).rem_euclid(2) != 0 {
            sh += 1;
        }
        let n: BigUint = self.mant.magnitude() << sh as usize;
        let mut s = n.sqrt();
        if dir == Round::Up && &s * &s != n {
            s += 1u32;
        }
        Dyadic::new(BigInt::from(s), (self.exp - sh) / 2).round(prec, dir)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as usize)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as usize
        } else {
            self.mant.div_floor(&(BigInt::one() << (-self.exp) as usize))
        }
    }

    pub fn ceil(&self) -> BigInt {
        -self.neg().floor()
    }

    /// Nearest-ish `f64`; for estimates only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = bits(&self.mant) as i64;
        let drop = (b - 60).max(0);
        let top = (&self.mant >> drop as usize).to_f64().unwrap_or(0.0);
        let e = self.exp + drop;
        if e > 2000 {
            return top.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0;
        }
        let mut v = top;
        let mut e = e;
        while e > 1000 {
            v *= 2f64.powi(1000);
            e -= 1000;
        }
        while e < -1000 {
            v *= 2f64.powi(-1000);
            e += 1000;
        }
        v * 2f64.powi(e as i32)
    }

    /// Scientific-notation decimal string with `digits` significant digits,
    /// rounded in direction `dir` (so the decimal is a certified bound).
    pub fn to_sci_string(&self, digits: usize, dir: Round) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let negative = self.is_negative();
        // Round the magnitude; for negative values the direction flips.
        let mag_dir = if negative { dir.flip() } else { dir };
        let v = self.abs().to_rational();
        let approx = self.ilog2().unwrap() as f64 * std::f64::consts::LOG10_2;
        let mut e10 = approx.floor() as i64;
        let ten = BigInt::from(10u32);
        let pow10 = |e: i64| -> BigRational {
            if e >= 0 {
                BigRational::from_integer(num_traits::pow(ten.clone(), e as usize))
            } else {
                BigRational::new(BigInt::one(), num_traits::pow(ten.clone(), (-e) as usize))
            }
        };
        while v >= pow10(e10 + 1) {
            e10 += 1;
        }
        while v < pow10(e10) {
            e10 -= 1;
        }
        let scaled = &v * pow10(digits as i64 - 1 - e10);
        let mut d = match mag_dir {
            Round::Down => scaled.floor().to_integer(),
            Round::Up => scaled.ceil().to_integer(),
        };
        let limit = num_traits::pow(ten.clone(), digits);
        if d >= limit {
            d /= &ten;
            e10 += 1;
        }
        let s = d.to_string();
        let (head, tail) = s.split_at(1);
        let tail = tail.trim_end_matches('0');
        let sign = if negative { "-" } else { "" };
        if tail.is_empty() {
            format!("{sign}{head}e{e10}")
        } else {
            format!("{sign}{head}.{tail}e{e10}")
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Dyadic) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let (la, lb) = (self.ilog2().unwrap(), other.ilog2().unwrap());
        if la != lb {
            let mag = la.cmp(&lb);
            return if sa > 0 { mag } else { mag.reverse() };
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &other.mant << (other.exp - e) as usize;
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Dyadic) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci_string(17, Round::Down))
    }
}
