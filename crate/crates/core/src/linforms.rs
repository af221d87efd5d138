//! Matveev's lower bounds for linear forms in logarithms, the Pethő–de Weger
//! transfer lemma, and the bridge `|log x| ≤ 2|x − 1|`.

use std::cmp::Ordering;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::quadfield::{Dyadic, Interval, Round};

/// Data of one application of Matveev's theorem.
#[derive(Clone, Debug)]
pub struct LinFormInstance {
    /// Number of logarithms `T`.
    pub t: u32,
    /// Degree `D` of the number field.
    pub degree: u32,
    pub a: Vec<Interval>,
    pub b: Interval,
}

impl LinFormInstance {
    pub fn new(t: u32, degree: u32, a: Vec<Interval>, b: Interval) -> Result<Self> {
        if t == 0 || degree == 0 || a.len() != t as usize {
            return Err(Error::InvalidInput("need T >= 1, D >= 1 and T values A_j".into()));
        }
        let prec = b.prec();
        let floor = Interval::from_ratio(4, 25, prec);
        if a.iter().any(|x| x.lo() < floor.lo()) {
            return Err(Error::InvalidInput("every A_j must be at least 0.16".into()));
        }
        if b.lo() < &Dyadic::one() {
            return Err(Error::InvalidInput("B must be at least 1".into()));
        }
        Ok(LinFormInstance { t, degree, a, b })
    }
}

fn int(n: i64, prec: u32) -> Interval {
    Interval::from_i64(n, prec)
}

/// `D²·log(eD)`.
fn degree_factor(degree: u32, prec: u32) -> Interval {
    let d = int(degree as i64, prec);
    let log_ed = int(1, prec) + d.ln().expect("D >= 1");
    d.sqr() * log_ed
}

/// `1.4·30^(T+3)·(T+1)^4.5·D²·log(eD)`.
pub fn matveev_gamma_coefficient(t: u32, degree: u32, prec: u32) -> Interval {
    let tp1 = int(t as i64 + 1, prec);
    let t45 = tp1.powi(9).expect("positive").sqrt().expect("positive");
    let c = Interval::from_ratio(7, 5, prec) * int(30, prec).powi(t as i64 + 3).expect("positive");
    c * t45 * degree_factor(degree, prec)
}

/// `2·30^(T+4)·(T+1)^6·D²·log(eD)`.
pub fn matveev_lambda_coefficient(t: u32, degree: u32, prec: u32) -> Interval {
    let tp1 = int(t as i64 + 1, prec);
    let c = int(2, prec) * int(30, prec).powi(t as i64 + 4).expect("positive");
    c * tp1.powi(6).expect("positive") * degree_factor(degree, prec)
}

fn product_tail(inst: &LinFormInstance) -> Interval {
    let prec = inst.b.prec();
    let log_eb = int(1, prec) + inst.b.ln().expect("B >= 1");
    inst.a.iter().fold(log_eb, |acc, x| acc * x.clone())
}

/// Right-hand side of `log|Γ − 1| > −1.4·30^(T+3)(T+1)^4.5 D² log(eD) A_1⋯A_T log(eB)`.
pub fn matveev_gamma_bound(inst: &LinFormInstance) -> Interval {
    -(matveev_gamma_coefficient(inst.t, inst.degree, inst.b.prec()) * product_tail(inst))
}

/// Right-hand side of `log|Λ| > −2·30^(T+4)(T+1)^6 D² log(eD) A_1⋯A_T log(eB)`.
pub fn matveev_lambda_bound(inst: &LinFormInstance) -> Interval {
    -(matveev_lambda_coefficient(inst.t, inst.degree, inst.b.prec()) * product_tail(inst))
}

/// Precision escalation: a comparison that cannot be decided is retried with
/// doubled precision at most this many times.
pub const ESCALATIONS: u32 = 4;

/// `(e²/c)^c`.
fn pw_threshold(c: &Interval) -> Result<Interval> {
    let e2 = Interval::e(c.prec()).sqr();
    e2.div(c)?.pow(c)
}

fn check_pw_precondition(c: &Interval, g: &Interval) -> Result<()> {
    let one = int(1, c.prec());
    if c.certainly_lt(&one) {
        return Err(Error::PwPrecondition("c must be at least 1".into()));
    }
    let mut prec = c.prec().max(g.prec());
    for _ in 0..=ESCALATIONS {
        let (c, g) = (c.with_prec(prec), g.with_prec(prec));
        let rhs = pw_threshold(&c)?;
        match g.cmp_certain(&rhs) {
            Some(Ordering::Greater) => return Ok(()),
            Some(_) => {
                return Err(Error::PwPrecondition(format!(
                    "g = {} does not exceed (e^2/c)^c = {}",
                    g.mid_f64(),
                    rhs.mid_f64()
                )))
            }
            None if g.hi() <= rhs.lo() => {
                return Err(Error::PwPrecondition("g does not exceed (e^2/c)^c".into()))
            }
            None => prec *= 2,
        }
    }
    Err(Error::PwPrecondition("comparison of g with (e^2/c)^c is indeterminate".into()))
}

/// Upper bound `2^c·(a^(1/c) + g^(1/c)·log(c^c·g))^c` for the largest solution
/// of `x = a + g·(log x)^c`.
pub fn pw_transfer(a: &Interval, c: &Interval, g: &Interval) -> Result<Interval> {
    if a.lo().is_negative() {
        return Err(Error::PwPrecondition("a must be non-negative".into()));
    }
    check_pw_precondition(c, g)?;
    let prec = g.prec();
    let inv_c = c.recip()?;
    let a_root = a.pow(&inv_c)?;
    let g_root = g.pow(&inv_c)?;
    let log_term = (c.pow(c)? * g.clone()).ln()?;
    let inner = a_root + g_root * log_term;
    Ok(int(2, prec).pow(c)? * inner.pow(c)?)
}

/// Convenience form of [`pw_transfer`] for integer `c`.
pub fn pw_transfer_int(a: &Interval, c: u64, g: &Interval) -> Result<Interval> {
    pw_transfer(a, &Interval::from_int(&BigInt::from(c), g.prec()), g)
}

/// `x − a − g·(log x)^c` at a point.
fn pw_residual(x: &Dyadic, a: &Interval, c: &Interval, g: &Interval, prec: u32) -> Result<Interval> {
    let xi = Interval::point(x.clone(), prec);
    let lx = xi.ln()?;
    Ok(xi - a.clone() - g.clone() * lx.pow(c)?)
}

/// Encloses the largest solution of `x = a + g·(log x)^c` by bisection.
///
/// On `[e^c, ∞)` the residual `x − a − g(log x)^c` is convex, negative at
/// `e^c` under the lemma's hypothesis and positive at the transfer bound, so
/// the bracket always holds exactly one sign change.
pub fn pw_largest_root(a: &Interval, c: &Interval, g: &Interval) -> Result<Interval> {
    let upper = pw_transfer(a, c, g)?;
    let prec = g.prec();
    let mut lo = c.exp()?.lo().clone();
    let mut hi = upper.hi().clone();
    let sign_at = |x: &Dyadic| -> Result<Option<Ordering>> {
        let r = pw_residual(x, a, c, g, prec)?;
        Ok(r.cmp_certain(&Interval::zero(prec)))
    };
    if sign_at(&lo)? != Some(Ordering::Less) {
        return Err(Error::PwPrecondition("residual is not negative at e^c".into()));
    }
    if sign_at(&hi)? != Some(Ordering::Greater) {
        return Err(Error::PwPrecondition("residual is not positive at the transfer bound".into()));
    }
    let max_iter = 8 * prec as usize + 4096;
    let target = prec as i64 - 8;
    for _ in 0..max_iter {
        // Stop once the bracket is relatively tight.
        let width = hi.sub(&lo);
        let scale = lo.ilog2().unwrap_or(0);
        if width.is_zero() || width.ilog2().is_some_and(|w| scale - w >= target) {
            return Ok(Interval::new(lo, hi, prec));
        }
        let mid = bisection_point(&lo, &hi, prec);
        if mid <= lo || mid >= hi {
            return Ok(Interval::new(lo, hi, prec));
        }
        match sign_at(&mid)? {
            Some(Ordering::Less) => lo = mid,
            Some(Ordering::Greater) => hi = mid,
            // The residual cannot be separated from zero here, so the root
            // sits within rounding distance of `mid`.
            _ => return Ok(Interval::new(lo, hi, prec)),
        }
    }
    Err(Error::NonConvergence(max_iter))
}

/// Geometric midpoint while the bracket spans a large ratio, arithmetic after.
fn bisection_point(lo: &Dyadic, hi: &Dyadic, prec: u32) -> Dyadic {
    let four_lo = lo.mul_pow2(2);
    if hi > &four_lo && !lo.is_zero() {
        lo.mul(hi).sqrt(prec, Round::Down)
    } else {
        lo.add(hi).mul_pow2(-1).round(prec + 8, Round::Down)
    }
}

/// `|log x| ≤ 2|x − 1|` whenever `|x − 1| ≤ 1/2`; takes `|x − 1|`.
pub fn log_from_gamma(gamma_minus_1_abs: &Interval) -> Result<Interval> {
    let half = Dyadic::new(BigInt::from(1), -1);
    if gamma_minus_1_abs.hi() > &half || gamma_minus_1_abs.lo().is_negative() {
        return Err(Error::G2lDomain);
    }
    Ok(gamma_minus_1_abs.mul_pow2(1))
}
