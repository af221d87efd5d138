//! Absolute logarithmic heights of rational and quadratic numbers, and the
//! height estimates for the algebraic numbers entering the linear forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::cfrac::BinetData;
use crate::error::{Error, Result};
use crate::numeration::golden_ratio;
use crate::quadfield::{Interval, QuadNum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HeightKind {
    Exact,
    Bound,
}

/// An enclosure of `h(δ)` (kind `Exact`) or of an upper bound for it.
#[derive(Clone, Debug)]
pub struct HeightBound {
    pub value: Interval,
    pub kind: HeightKind,
}

impl HeightBound {
    pub fn exact(value: Interval) -> Self {
        HeightBound { value, kind: HeightKind::Exact }
    }

    pub fn bound(value: Interval) -> Self {
        HeightBound { value, kind: HeightKind::Bound }
    }

    pub fn zero(prec: u32) -> Self {
        HeightBound::exact(Interval::zero(prec))
    }
}

/// `log⁺x = log max{x, 3}`.
pub fn log_plus(x: &Interval) -> Interval {
    x.log_plus().expect("max{x, 3} is positive")
}

fn ln_int(n: &BigInt, prec: u32) -> Interval {
    Interval::from_int(n, prec).ln().expect("positive integer")
}

pub fn height_rational(r: &BigRational, prec: u32) -> HeightBound {
    let m = r.numer().abs().max(r.denom().clone());
    if m.is_zero() {
        return HeightBound::zero(prec);
    }
    HeightBound::exact(ln_int(&m, prec))
}

pub fn height_int(n: &BigInt, prec: u32) -> HeightBound {
    height_rational(&BigRational::from_integer(n.clone()), prec)
}

/// Primitive integer minimal polynomial `d0·X² + d1·X + d2` with `d0 > 0`.
pub fn minimal_polynomial(x: &QuadNum) -> [BigInt; 3] {
    assert!(!x.is_rational(), "rational input has a linear minimal polynomial");
    // X² − 2a·X + (a² − b²D)
    let c1 = -x.trace();
    let c2 = x.norm();
    let den = c1.denom().lcm(c2.denom());
    let scale = |c: &BigRational| (c * BigRational::from_integer(den.clone())).to_integer();
    let mut coeffs = [den.clone(), scale(&c1), scale(&c2)];
    let content = coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    for c in coeffs.iter_mut() {
        *c /= &content;
    }
    coeffs
}

/// `log max{1, |x|}` for an interval.
fn log_max_one(x: &Interval) -> Interval {
    let one = Interval::one(x.prec());
    x.abs().max(&one).ln().expect("at least one")
}

pub fn height_quadratic(x: &QuadNum, prec: u32) -> HeightBound {
    if let Some(r) = x.as_rational() {
        return height_rational(r, prec);
    }
    let [d0, _, _] = minimal_polynomial(x);
    let roots = log_max_one(&x.enclose(prec)) + log_max_one(&x.conjugate().enclose(prec));
    HeightBound::exact((ln_int(&d0, prec) + roots).mul_pow2(-1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeightOp {
    Product,
    Quotient,
}

/// `h(δ1·δ2^{±1}) ≤ h(δ1) + h(δ2)`.
pub fn height_combine(h1: &HeightBound, h2: &HeightBound, _op: HeightOp) -> HeightBound {
    HeightBound::bound(&h1.value + &h2.value)
}

/// `h(δ^k) = |k|·h(δ)`.
pub fn height_power(h: &HeightBound, k: i64) -> HeightBound {
    HeightBound { value: h.value.mul_int(k.abs()), kind: h.kind }
}

/// `Σ deg_i · h(δ_i) + log L(f)`, where `L(f)` is the sum of absolute values
/// of the coefficients of `f`.
pub fn height_poly_bound(degrees: &[u64], l: &BigInt, heights: &[HeightBound], prec: u32) -> Result<HeightBound> {
    if degrees.len() != heights.len() {
        return Err(Error::InvalidInput("degree and height lists differ in length".into()));
    }
    if !l.is_positive() {
        return Err(Error::InvalidInput("L(f) must be positive".into()));
    }
    let mut acc = ln_int(l, prec);
    for (&d, h) in degrees.iter().zip(heights) {
        acc = acc + h.value.mul_int(d as i64);
    }
    Ok(HeightBound::bound(acc))
}

/// Heights of `c1^(j)` for every residue `j`.
pub fn c1_heights(bd: &BinetData, prec: u32) -> Vec<Interval> {
    bd.c1.iter().map(|c| height_quadratic(c, prec).value).collect()
}

/// `h(θ1) = (log θ1)/2`.
pub fn theta1_height(bd: &BinetData, prec: u32) -> Interval {
    height_quadratic(&bd.theta1, prec).value
}

#[derive(Clone, Debug)]
pub struct Delta3Height {
    /// `Σ_{i ≤ w} h(c1^(j_i)) + (n1 − n_w)·h(θ1) + log Σ_{i ≤ w} d_i`.
    pub bound: HeightBound,
    /// A constant `κ` with `bound ≤ κ·w·max{n1 − n_w, 1}`.
    pub coefficient: Interval,
}

/// `max_j h(c1^(j)) + h(θ1) + log K`.
pub fn hd3_coefficient(bd: &BinetData, k_total: u64, prec: u32) -> Interval {
    let hc = c1_heights(bd, prec).into_iter().reduce(|a, b| a.max(&b)).expect("s >= 1");
    hc + theta1_height(bd, prec) + ln_int(&BigInt::from(k_total.max(1)), prec)
}

/// Height estimate for `δ3 = Σ_{i ≤ w} d_i c1^(j_i) θ1^(n_i − n_1)`.
///
/// `gaps[i]` is `n1 − n_{i+1}`. Without explicit residues every `h(c1^(j_i))`
/// is replaced by the maximum over all residues.
pub fn delta3_height_bound(
    w: usize,
    d: &[u64],
    gaps: &[u64],
    residues: Option<&[usize]>,
    bd: &BinetData,
    prec: u32,
) -> Result<Delta3Height> {
    if w == 0 || d.len() < w || gaps.len() < w {
        return Err(Error::InvalidInput("need 1 <= w <= k with aligned lists".into()));
    }
    if residues.is_some_and(|r| r.len() < w || r.iter().any(|&j| j >= bd.s)) {
        return Err(Error::InvalidInput("residues must lie in 0..s".into()));
    }
    let hc = c1_heights(bd, prec);
    let hmax = hc.iter().cloned().reduce(|a, b| a.max(&b)).expect("s >= 1");
    let mut acc = Interval::zero(prec);
    for i in 0..w {
        acc = acc + residues.map_or(hmax.clone(), |r| hc[r[i]].clone());
    }
    let dsum: u64 = d[..w].iter().sum();
    acc = acc + theta1_height(bd, prec).mul_int(gaps[w - 1] as i64) + ln_int(&BigInt::from(dsum), prec);
    let total: u64 = d.iter().sum();
    Ok(Delta3Height {
        bound: HeightBound::bound(acc),
        coefficient: hd3_coefficient(bd, total, prec),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Delta5Variant {
    Zeckendorf,
    /// Base and the leading digits `D_1 … D_v`; an empty list means unknown
    /// digits, each taken as `b − 1`.
    Radix { base: u64, digits: Vec<u64> },
}

#[derive(Clone, Debug)]
pub struct Delta5Height {
    /// The sharper intermediate estimate.
    pub intermediate: Interval,
    /// The uniform estimate used in the bound assembly.
    pub bound: HeightBound,
}

/// Height estimates for `δ5`; `gaps[i]` is `m1 − m_{i+1}`.
pub fn delta5_height_bound(v: usize, gaps: &[u64], variant: &Delta5Variant, prec: u32) -> Result<Delta5Height> {
    if v == 0 || gaps.len() < v {
        return Err(Error::InvalidInput("need v >= 1 with v gaps".into()));
    }
    let gap = gaps[v - 1];
    if v == 1 {
        // δ5 = 1.
        let z = Interval::zero(prec);
        return Ok(Delta5Height { intermediate: z.clone(), bound: HeightBound::bound(z) });
    }
    if gap == 0 {
        return Err(Error::InvalidInput("positions must be strictly decreasing".into()));
    }
    match variant {
        Delta5Variant::Zeckendorf => {
            let hphi = height_quadratic(&golden_ratio(), prec).value;
            let intermediate = hphi.mul_int(gap as i64) + ln_int(&BigInt::from(v), prec);
            let bound = Interval::from_i64(2 * v as i64 * gap as i64, prec);
            Ok(Delta5Height { intermediate, bound: HeightBound::bound(bound) })
        }
        Delta5Variant::Radix { base, digits } => {
            if *base < 2 {
                return Err(Error::InvalidInput("base must be at least 2".into()));
            }
            let digit_sum: u64 = if digits.is_empty() {
                v as u64 * (base - 1)
            } else {
                digits.iter().take(v).sum()
            };
            let b = Interval::from_i64(*base as i64, prec);
            let lb = b.ln().expect("b >= 2");
            let intermediate = lb.mul_int(gap as i64) + ln_int(&BigInt::from(digit_sum.max(1)), prec).mul_int(2);
            let bound = log_plus(&b).mul_int(5 * gap as i64);
            Ok(Delta5Height { intermediate, bound: HeightBound::bound(bound) })
        }
    }
}
