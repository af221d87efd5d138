//! Periodic continued fractions of quadratic irrationals, convergent
//! denominators, and the splitting of `(q_N)` into binary recurrences.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json;
use crate::quadfield::{Dyadic, Interval, QuadNum};

/// Cap on the search for the threshold `N0`.
pub const N0_CAP: u64 = 1_000_000;

/// `α = [a0; a1, …, a_{r−1}, (b0, …, b_{s−1})]`.
///
/// `r` counts `a0` together with the preperiod, so `r ≥ 1` and `a0` never
/// belongs to the period. A purely periodic input is stored with its period
/// rotated by one place.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawContinuedFraction")]
pub struct ContinuedFraction {
    #[serde(with = "json::compact")]
    a0: BigInt,
    #[serde(with = "json::compact_vec")]
    preperiod: Vec<BigInt>,
    #[serde(with = "json::compact_vec")]
    period: Vec<BigInt>,
}

#[derive(Deserialize)]
struct RawContinuedFraction {
    #[serde(with = "json::compact")]
    a0: BigInt,
    #[serde(with = "json::compact_vec")]
    preperiod: Vec<BigInt>,
    #[serde(with = "json::compact_vec")]
    period: Vec<BigInt>,
}

impl TryFrom<RawContinuedFraction> for ContinuedFraction {
    type Error = Error;
    fn try_from(raw: RawContinuedFraction) -> Result<Self> {
        ContinuedFraction::new(raw.a0, raw.preperiod, raw.period)
    }
}

impl ContinuedFraction {
    /// Validates positivity and minimality of the period and preperiod.
    pub fn new(a0: BigInt, preperiod: Vec<BigInt>, period: Vec<BigInt>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidInput("period must be nonempty".into()));
        }
        if preperiod.iter().chain(&period).any(|a| !a.is_positive()) {
            return Err(Error::InvalidInput("partial quotients after a0 must be positive".into()));
        }
        let s = period.len();
        for d in 1..s {
            if s % d == 0 && (0..s).all(|i| period[i] == period[i % d]) {
                return Err(Error::InvalidInput(format!("period is not minimal (repeats every {d})")));
            }
        }
        if preperiod.last().is_some_and(|x| x == &period[s - 1]) {
            return Err(Error::InvalidInput("preperiod is not minimal".into()));
        }
        Ok(ContinuedFraction { a0, preperiod, period })
    }

    pub fn from_u64s(a0: i64, preperiod: &[u64], period: &[u64]) -> Result<Self> {
        let big = |v: &[u64]| v.iter().map(|&x| BigInt::from(x)).collect();
        ContinuedFraction::new(BigInt::from(a0), big(preperiod), big(period))
    }

    pub fn a0(&self) -> &BigInt {
        &self.a0
    }

    pub fn preperiod(&self) -> &[BigInt] {
        &self.preperiod
    }

    pub fn period(&self) -> &[BigInt] {
        &self.period
    }

    /// Index of the first partial quotient inside the period.
    pub fn r(&self) -> usize {
        self.preperiod.len() + 1
    }

    pub fn s(&self) -> usize {
        self.period.len()
    }

    /// Partial quotient `a_i`.
    pub fn quotient(&self, i: usize) -> &BigInt {
        let r = self.r();
        if i == 0 {
            &self.a0
        } else if i < r {
            &self.preperiod[i - 1]
        } else {
            &self.period[(i - r) % self.s()]
        }
    }

    /// Endless stream `a0, a1, a2, …`.
    pub fn quotients(&self) -> impl Iterator<Item = &BigInt> + '_ {
        (0..).map(move |i| self.quotient(i))
    }

    /// Iterator over `(p_i, q_i)` for `i = 0, 1, 2, …`.
    pub fn convergent_iter(&self) -> ConvergentIter<'_> {
        ConvergentIter {
            cf: self,
            i: 0,
            p: (BigInt::zero(), BigInt::one()),
            q: (BigInt::one(), BigInt::zero()),
        }
    }

    /// The exact value as an element of a real quadratic field.
    pub fn value(&self) -> Result<QuadNum> {
        // The purely periodic tail β is fixed by the period matrix
        // [[A, B], [C, E]]: Cβ² + (E − A)β − B = 0 with β > 1.
        let (a, _, c, e) = period_matrix(&self.period);
        let (g, m) = period_discriminant(&self.period);
        let two_c = BigInt::from(2) * &c;
        let beta = QuadNum::new(
            BigRational::new(&a - &e, two_c.clone()),
            BigRational::new(g, two_c),
            &m,
        )?;
        // α = (p_{r−1}β + p_{r−2}) / (q_{r−1}β + q_{r−2}).
        let (mut p0, mut p1) = (BigInt::zero(), BigInt::one());
        let (mut q0, mut q1) = (BigInt::one(), BigInt::zero());
        for i in 0..self.r() {
            let ai = self.quotient(i);
            let p2 = ai * &p1 + &p0;
            let q2 = ai * &q1 + &q0;
            (p0, p1, q0, q1) = (p1, p2, q1, q2);
        }
        let d = beta.radicand().clone();
        let num = &(&beta * &QuadNum::bigint_in(&p1, &d)) + &QuadNum::bigint_in(&p0, &d);
        let den = &(&beta * &QuadNum::bigint_in(&q1, &d)) + &QuadNum::bigint_in(&q0, &d);
        num.try_div(&den)
    }
}

fn period_matrix(period: &[BigInt]) -> (BigInt, BigInt, BigInt, BigInt) {
    let (mut a, mut b, mut c, mut e) = (BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one());
    for x in period {
        // [[a, b], [c, e]] · [[x, 1], [1, 0]]
        let (na, nc) = (&a * x + &b, &c * x + &e);
        (a, b, c, e) = (na, a, nc, c);
    }
    (a, b, c, e)
}

/// Writes the discriminant `(A − E)² + 4BC` of the period matrix as `g² · m`,
/// where `g` is the content of `Cx² + (E − A)x − B`. The reduced part `m` is
/// the discriminant of a primitive form, so it stays small even for long
/// periods and trial division can take its squarefree part.
fn period_discriminant(period: &[BigInt]) -> (BigInt, BigInt) {
    let (a, b, c, e) = period_matrix(period);
    let g = c.gcd(&(&a - &e)).gcd(&b);
    let disc = (&a - &e) * (&a - &e) + BigInt::from(4) * &b * &c;
    let m = disc / (&g * &g);
    (g, m)
}

/// Trace of the ordered product of `[[b_j, 1], [1, 0]]` over the period.
pub fn period_trace(period: &[BigInt]) -> BigInt {
    let (a, _, _, e) = period_matrix(period);
    a + e
}

pub struct ConvergentIter<'a> {
    cf: &'a ContinuedFraction,
    i: usize,
    p: (BigInt, BigInt),
    q: (BigInt, BigInt),
}

impl Iterator for ConvergentIter<'_> {
    type Item = (BigInt, BigInt);

    fn next(&mut self) -> Option<(BigInt, BigInt)> {
        // Seeded with p_{-2}, p_{-1} = 0, 1 and q_{-2}, q_{-1} = 1, 0.
        let a = self.cf.quotient(self.i);
        let (p, q) = (a * &self.p.1 + &self.p.0, a * &self.q.1 + &self.q.0);
        self.p = (std::mem::take(&mut self.p.1), p.clone());
        self.q = (std::mem::take(&mut self.q.1), q.clone());
        self.i += 1;
        Some((p, q))
    }
}

/// Convergent denominators `q_0 … q_n` and numerators `p_0 … p_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvergentTable {
    #[serde(serialize_with = "decimal_strings")]
    pub q: Vec<BigInt>,
    #[serde(skip)]
    pub p: Vec<BigInt>,
}

fn decimal_strings<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// Convergents `p_i/q_i` for `0 ≤ i ≤ n`.
pub fn convergents(cf: &ContinuedFraction, n: usize) -> ConvergentTable {
    let (p, q) = cf.convergent_iter().take(n + 1).unzip();
    ConvergentTable { q, p }
}

/// Denominators `q_0 … q_n` only.
pub fn denominators(cf: &ContinuedFraction, n: usize) -> Vec<BigInt> {
    cf.convergent_iter().take(n + 1).map(|(_, q)| q).collect()
}

/// Expands a quadratic irrational into its eventually periodic form.
pub fn expand(alpha: &QuadNum) -> Result<ContinuedFraction> {
    if alpha.is_rational() {
        return Err(Error::NotQuadraticIrrational);
    }
    // Write α = (P + √M)/Q with Q | M − P².
    let lcm = alpha.a().denom().lcm(alpha.b().denom());
    let a = (alpha.a() * BigRational::from_integer(lcm.clone())).to_integer();
    let b = (alpha.b() * BigRational::from_integer(lcm.clone())).to_integer();
    let m = &b * &b * &lcm * &lcm * alpha.radicand();
    let (mut p, mut q) = if b.is_positive() {
        (&a * &lcm, &lcm * &lcm)
    } else {
        (-&a * &lcm, -(&lcm * &lcm))
    };
    let root = m.sqrt();

    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut quotients: Vec<BigInt> = Vec::new();
    loop {
        if let Some(&first) = seen.get(&(p.clone(), q.clone())) {
            return Ok(assemble(quotients, first));
        }
        seen.insert((p.clone(), q.clone()), quotients.len());
        // floor((P + √M)/Q) from the integer square root; √M is irrational.
        let digit = if q.is_positive() {
            (&p + &root).div_floor(&q)
        } else {
            (-&p - &root - BigInt::one()).div_floor(&-&q)
        };
        let p_next = &digit * &q - &p;
        let q_next = (&m - &p_next * &p_next) / &q;
        quotients.push(digit);
        p = p_next;
        q = q_next;
    }
}

fn assemble(mut quotients: Vec<BigInt>, first: usize) -> ContinuedFraction {
    let a0 = quotients[0].clone();
    if first == 0 {
        // Purely periodic: a_s = a_0, so reading from index 1 rotates the period.
        let mut period: Vec<BigInt> = quotients.drain(1..).collect();
        period.push(a0.clone());
        ContinuedFraction { a0, preperiod: Vec::new(), period }
    } else {
        let period = quotients.split_off(first);
        let preperiod = quotients.split_off(1);
        ContinuedFraction { a0, preperiod, period }
    }
}

/// Data of the splitting `q_{sn+j+r} = c1^(j)·θ1^n − c2^(j)·θ2^n`.
#[derive(Clone, Debug)]
pub struct BinetData {
    pub t_alpha: BigInt,
    pub r: usize,
    pub s: usize,
    /// Squarefree radicand of `θ1`, that is of `t² − 4(−1)^s`.
    pub delta: BigInt,
    pub theta1: QuadNum,
    pub theta2: QuadNum,
    pub c1: Vec<QuadNum>,
    pub c2: Vec<QuadNum>,
    /// Exact `max_j (c1 + |c2|)`.
    pub c3_exact: QuadNum,
    /// Exact `min_j c1 / 2`.
    pub c4_exact: QuadNum,
    pub c3: Interval,
    pub c4: Interval,
    pub n0: u64,
    /// `q_r`, the first denominator inside the period.
    pub q_r: BigInt,
    pub precision: u32,
}

impl BinetData {
    /// `(−1)^s`.
    pub fn sign_s(&self) -> i64 {
        if self.s % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn theta1_enclosure(&self, prec: u32) -> Interval {
        self.theta1.enclose(prec)
    }

    pub fn log_theta1(&self, prec: u32) -> Interval {
        self.theta1.enclose(prec).ln().expect("theta1 > 1")
    }

    /// The upper constant as a point value, `c3.hi`.
    pub fn c3_upper(&self) -> Dyadic {
        self.c3.hi().clone()
    }

    /// The lower constant as a point value, `c4.lo`.
    pub fn c4_lower(&self) -> Dyadic {
        self.c4.lo().clone()
    }

    pub fn c1_max(&self) -> &QuadNum {
        extreme(&self.c1, std::cmp::Ordering::Greater)
    }

    pub fn c1_min(&self) -> &QuadNum {
        extreme(&self.c1, std::cmp::Ordering::Less)
    }

    pub fn c2_abs_max(&self) -> QuadNum {
        let abs: Vec<QuadNum> = self.c2.iter().map(QuadNum::abs).collect();
        extreme(&abs, std::cmp::Ordering::Greater).clone()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "t_alpha": self.t_alpha.to_string(),
            "r": self.r,
            "s": self.s,
            "Delta": self.delta.to_string(),
            "theta1": self.theta1,
            "theta2": self.theta2,
            "c1": self.c1,
            "c2": self.c2,
            "c3": json::interval_value(&self.c3),
            "c4": json::interval_value(&self.c4),
            "N0": self.n0,
        })
    }
}

fn extreme(v: &[QuadNum], want: std::cmp::Ordering) -> &QuadNum {
    let mut best = &v[0];
    for x in &v[1..] {
        if x.cmp_exact(best).expect("same field") == want {
            best = x;
        }
    }
    best
}

pub fn binet_data(cf: &ContinuedFraction, precision_bits: u32) -> Result<BinetData> {
    let (r, s) = (cf.r(), cf.s());
    let t = period_trace(cf.period());
    let sign_s: i64 = if s % 2 == 0 { 1 } else { -1 };
    let disc = &t * &t - BigInt::from(4 * sign_s);
    let (g, m) = period_discriminant(cf.period());
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let theta1 = QuadNum::new(BigRational::from_integer(t.clone()) * &half, BigRational::from_integer(g) * &half, &m)?;
    if theta1.is_rational() {
        return Err(Error::InvalidInput(format!("t^2 - 4(-1)^s = {disc} is a perfect square")));
    }
    let delta = theta1.radicand().clone();
    let theta2 = theta1.conjugate();
    let diff = &theta1 - &theta2;

    let q = denominators(cf, r + 2 * s);
    let mut c1 = Vec::with_capacity(s);
    let mut c2 = Vec::with_capacity(s);
    for j in 0..s {
        let x0 = QuadNum::bigint_in(&q[j + r], &delta);
        let x1 = QuadNum::bigint_in(&q[j + r + s], &delta);
        c1.push((&x1 - &(&theta2 * &x0)).try_div(&diff)?);
        c2.push((&x1 - &(&theta1 * &x0)).try_div(&diff)?);
    }

    let sums: Vec<QuadNum> = c1.iter().zip(&c2).map(|(a, b)| a + &b.abs()).collect();
    let c3_exact = extreme(&sums, std::cmp::Ordering::Greater).clone();
    let c4_exact = extreme(&c1, std::cmp::Ordering::Less).scale(&BigRational::new(1.into(), 2.into()));
    let c3 = c3_exact.enclose(precision_bits);
    let c4 = c4_exact.enclose(precision_bits);
    let n0 = find_n0(&theta1, &theta2, &c1, &c2)?;

    Ok(BinetData {
        t_alpha: t,
        r,
        s,
        delta,
        theta1,
        theta2,
        c1,
        c2,
        c3_exact,
        c4_exact,
        c3,
        c4,
        n0,
        q_r: q[r].clone(),
        precision: precision_bits,
    })
}

/// Smallest `i` with `c1^(j)·θ1^i > 2|c2^(j)|·|θ2|^i` for every `j`.
fn find_n0(theta1: &QuadNum, theta2: &QuadNum, c1: &[QuadNum], c2: &[QuadNum]) -> Result<u64> {
    let abs2 = theta2.abs();
    let two = BigRational::from_integer(2.into());
    let twice_c2: Vec<QuadNum> = c2.iter().map(|c| c.abs().scale(&two)).collect();
    let mut p1 = QuadNum::int_in(1, theta1.radicand());
    let mut p2 = p1.clone();
    for i in 0..=N0_CAP {
        let ok = c1
            .iter()
            .zip(&twice_c2)
            .all(|(a, b)| (&(a * &p1) - &(b * &p2)).sign() > 0);
        if ok {
            return Ok(i);
        }
        p1 = &p1 * theta1;
        p2 = &p2 * &abs2;
    }
    Err(Error::N0Cap(N0_CAP))
}

/// Checks `q_{i+2s} = t·q_{i+s} − (−1)^s·q_i` for `r ≤ i ≤ i_max − 2s`.
pub fn verify_shifted_recurrence(cf: &ContinuedFraction, bd: &BinetData, i_max: usize) -> bool {
    let (r, s) = (cf.r(), cf.s());
    if i_max < r + 2 * s {
        return false;
    }
    let q = denominators(cf, i_max);
    let sign = BigInt::from(bd.sign_s());
    (r..=i_max - 2 * s).all(|i| q[i + 2 * s] == &bd.t_alpha * &q[i + s] - &sign * &q[i])
}

/// Checks `q_{j+r+is} = c1^(j)·θ1^i − c2^(j)·θ2^i` exactly for `i ≤ i_max`.
pub fn verify_binet(cf: &ContinuedFraction, bd: &BinetData, i_max: usize) -> bool {
    let (r, s) = (cf.r(), cf.s());
    let q = denominators(cf, r + s * (i_max + 1));
    // c2 = −conj(c1), so the right-hand side is the trace of c1·θ1^i. Powers
    // θ1^i = (X + Y√Δ)/2 and c1 = (u + v√Δ)/w stay in integers.
    let two = BigRational::from_integer(BigInt::from(2));
    let (t, g) = ((bd.theta1.a() * &two).to_integer(), (bd.theta1.b() * &two).to_integer());
    let delta = &bd.delta;
    (0..s).all(|j| {
        let c1 = &bd.c1[j];
        if bd.c2[j] != -c1.conjugate() {
            return false;
        }
        let w = c1.a().denom().lcm(c1.b().denom());
        let u = (c1.a() * BigRational::from_integer(w.clone())).to_integer();
        let v = (c1.b() * BigRational::from_integer(w.clone())).to_integer() * delta;
        let (mut x, mut y) = (BigInt::from(2), BigInt::zero());
        (0..=i_max).all(|i| {
            let ok = &u * &x + &v * &y == &q[j + r + i * s] * &w;
            let nx = (&t * &x + &g * delta * &y) / 2;
            let ny = (&t * &y + &g * &x) / 2;
            (x, y) = (nx, ny);
            ok
        })
    })
}

/// Outcome of the certified check `c4·θ1^i ≤ q^(j)_i ≤ c3·θ1^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GrowthCheck {
    Holds,
    Violated { j: usize, i: usize, upper: bool },
    /// Not decided even after precision escalation.
    Undecided { j: usize, i: usize, upper: bool },
}

/// Certifies the growth sandwich for `i ≤ i_max`, with the lower side from `N0`.
///
/// The constants are the points `c3.hi` and `c4.lo`. Comparisons that cannot be
/// decided are retried with doubled precision, at most four times.
pub fn verify_growth(cf: &ContinuedFraction, bd: &BinetData, i_max: usize, prec: u32) -> GrowthCheck {
    let (r, s) = (cf.r(), cf.s());
    let q = denominators(cf, r + s * (i_max + 1));
    let mut prec = prec;
    let mut last = GrowthCheck::Holds;
    for _ in 0..5 {
        last = growth_pass(bd, &q, i_max, prec);
        match last {
            GrowthCheck::Undecided { .. } => prec *= 2,
            _ => return last,
        }
    }
    last
}

fn growth_pass(bd: &BinetData, q: &[BigInt], i_max: usize, prec: u32) -> GrowthCheck {
    let (r, s) = (bd.r, bd.s);
    let theta = bd.theta1.enclose(prec);
    let c3 = Interval::point(bd.c3_upper(), prec);
    let c4 = Interval::point(bd.c4_lower(), prec);
    let mut power = Interval::one(prec);
    for i in 0..=i_max {
        let upper = &c3 * &power;
        let lower = &c4 * &power;
        for j in 0..s {
            let value = Interval::from_int(&q[j + r + i * s], prec);
            if !value.certainly_le(&upper) {
                return if upper.certainly_lt(&value) {
                    GrowthCheck::Violated { j, i, upper: true }
                } else {
                    GrowthCheck::Undecided { j, i, upper: true }
                };
            }
            if i as u64 >= bd.n0 && !lower.certainly_le(&value) {
                return if value.certainly_lt(&lower) {
                    GrowthCheck::Violated { j, i, upper: false }
                } else {
                    GrowthCheck::Undecided { j, i, upper: false }
                };
            }
        }
        power = &power * &theta;
    }
    GrowthCheck::Holds
}
