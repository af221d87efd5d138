//! Exhaustive search for perfect powers among sums of `K` convergent
//! denominators, weight filters, and empirical checks of reported bounds.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{log_power_upper, reduced_index, BoundLimits, BoundReport};
use crate::cfrac::{denominators, BinetData, ContinuedFraction};
use crate::error::{Error, Result};
use crate::numeration::{radix_encode, zeckendorf_encode};

/// One solution `y^a = q_{N1} + ⋯ + q_{NK}` with `N1 ≥ ⋯ ≥ NK`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    #[serde(with = "crate::json::decimal")]
    pub y: BigInt,
    pub a: u32,
    #[serde(rename = "N")]
    pub n: Vec<usize>,
    #[serde(with = "crate::json::decimal")]
    pub value: BigInt,
}

impl Solution {
    /// Recomputes both sides exactly.
    pub fn is_consistent(&self, cf: &ContinuedFraction) -> bool {
        let Some(&top) = self.n.first() else { return false };
        let q = denominators(cf, top + 1);
        let sum: BigInt = self.n.iter().map(|&i| &q[i]).sum();
        let decreasing = self.n.windows(2).all(|w| w[0] >= w[1]);
        decreasing && sum == self.value && Pow::pow(&self.y, self.a) == self.value
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchRange {
    pub n_max: usize,
    pub a_max: u32,
    pub k: usize,
}

impl SearchRange {
    pub fn new(k: usize, n_max: usize, a_max: u32) -> Result<Self> {
        if k == 0 || a_max < 2 {
            return Err(Error::InvalidInput("need K >= 1 and a_max >= 2".into()));
        }
        Ok(SearchRange { n_max, a_max, k })
    }

    /// Number of weakly decreasing tuples with a fixed first index `n1`.
    pub fn tuples_at(&self, n1: usize) -> u128 {
        binomial((n1 + self.k - 1) as u128, (self.k - 1) as u128)
    }

    pub fn total_tuples(&self) -> u128 {
        (0..=self.n_max).map(|n1| self.tuples_at(n1)).fold(0u128, u128::saturating_add)
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Tuple budget used by [`enumerate_solutions`].
pub const DEFAULT_BUDGET: u64 = 500_000_000;

fn small_primes(limit: u64) -> Vec<u32> {
    let limit = limit.max(2) as usize;
    let mut sieve = vec![true; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if sieve[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j <= limit {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

/// Squares modulo 64 and 63 filter out most non-squares before a root.
fn may_be_square(n: &BigInt) -> bool {
    const SQ64: u64 = {
        let mut m = 0u64;
        let mut i = 0;
        while i < 64 {
            m |= 1 << ((i * i) % 64);
            i += 1;
        }
        m
    };
    let r64 = (n % 64u32).to_u64().unwrap_or(0);
    if SQ64 >> r64 & 1 == 0 {
        return false;
    }
    let r63 = (n % 63u32).to_u64().unwrap_or(0);
    (0..63u64).any(|i| i * i % 63 == r63)
}

fn exact_root(n: &BigInt, p: u32) -> Option<BigInt> {
    if p == 2 && !may_be_square(n) {
        return None;
    }
    let r = n.nth_root(p);
    (Pow::pow(&r, p) == *n).then_some(r)
}

/// `(y, a)` with `y^a = n` and `a ≥ 2` maximal.
pub fn is_perfect_power(n: &BigInt) -> Option<(BigInt, u32)> {
    if n < &BigInt::from(2) {
        return None;
    }
    let mut base = n.clone();
    let mut exp = 1u32;
    for p in small_primes(n.bits()) {
        if u64::from(p) > base.bits() {
            break;
        }
        while let Some(r) = exact_root(&base, p) {
            base = r;
            exp *= p;
        }
    }
    (exp >= 2).then_some((base, exp))
}

/// True for 0, 1 and every perfect power.
pub fn is_power_or_trivial(n: &BigInt) -> bool {
    n.is_zero() || n.is_one() || is_perfect_power(n).is_some()
}

/// Every `(y, a)` with `y^a = n` and `2 ≤ a ≤ a_max`, by increasing `a`.
pub fn power_splits(n: &BigInt, a_max: u32) -> Vec<(BigInt, u32)> {
    let Some((y, top)) = is_perfect_power(n) else { return Vec::new() };
    (2..=top.min(a_max))
        .filter(|a| top % a == 0)
        .map(|a| (Pow::pow(&y, top / a), a))
        .collect()
}

fn solutions_at(n1: usize, q: &[BigInt], range: &SearchRange) -> Vec<Solution> {
    let mut out = Vec::new();
    let mut tuple = vec![n1];
    let four = BigInt::from(4);
    fn rec(
        tuple: &mut Vec<usize>,
        sum: &BigInt,
        q: &[BigInt],
        range: &SearchRange,
        four: &BigInt,
        out: &mut Vec<Solution>,
    ) {
        if tuple.len() == range.k {
            if sum >= four {
                for (y, a) in power_splits(sum, range.a_max) {
                    out.push(Solution { y, a, n: tuple.clone(), value: sum.clone() });
                }
            }
            return;
        }
        let top = *tuple.last().expect("non-empty");
        for i in 0..=top {
            tuple.push(i);
            rec(tuple, &(sum + &q[i]), q, range, four, out);
            tuple.pop();
        }
    }
    rec(&mut tuple, &q[n1], q, range, &four, &mut out);
    out
}

/// All solutions in the range, ordered lexicographically by `N`, then by `a`.
pub fn enumerate_solutions(cf: &ContinuedFraction, range: &SearchRange) -> Result<Vec<Solution>> {
    enumerate_solutions_within(cf, range, DEFAULT_BUDGET)
}

/// As [`enumerate_solutions`], stopping before the first `N1` whose tuples would
/// push the total past `budget`.
pub fn enumerate_solutions_within(cf: &ContinuedFraction, range: &SearchRange, budget: u64) -> Result<Vec<Solution>> {
    let mut spent: u128 = 0;
    let mut stop = range.n_max + 1;
    for n1 in 0..=range.n_max {
        spent = spent.saturating_add(range.tuples_at(n1));
        if spent > budget as u128 {
            stop = n1;
            break;
        }
    }
    let q = denominators(cf, range.n_max + 1);
    let parts: Vec<Vec<Solution>> = (0..stop).into_par_iter().map(|n1| solutions_at(n1, &q, range)).collect();
    let found: Vec<Solution> = parts.into_iter().flatten().collect();
    if stop <= range.n_max {
        return Err(Error::BudgetExceeded { budget, next_n1: stop, partial: found });
    }
    Ok(found)
}

/// Weight restriction on `y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightFilter {
    Zeckendorf { l: usize },
    Radix { l: usize, b: u64 },
}

pub fn weight_of(y: &BigInt, filter: &WeightFilter) -> usize {
    match filter {
        WeightFilter::Zeckendorf { .. } => zeckendorf_encode(y).weight(),
        WeightFilter::Radix { b, .. } => radix_encode(y, *b).weight(),
    }
}

pub fn filter_by_weight(solutions: &[Solution], filter: &WeightFilter) -> Vec<Solution> {
    let l = match filter {
        WeightFilter::Zeckendorf { l } | WeightFilter::Radix { l, .. } => *l,
    };
    solutions
        .iter()
        .filter(|s| weight_of(&s.y, filter) <= l)
        .cloned()
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub index: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub checked: usize,
    /// Solutions outside the report's scope (a different `y`).
    pub skipped: usize,
    pub violations: Vec<Violation>,
}

impl BoundCheck {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Compares each solution with the limits: `n1`, `a` and `a·log y`.
pub fn check_limits(solutions: &[Solution], limits: &BoundLimits) -> BoundCheck {
    let mut check = BoundCheck { checked: 0, skipped: 0, violations: Vec::new() };
    for (index, sol) in solutions.iter().enumerate() {
        if limits.y.as_ref().is_some_and(|y| y != &sol.y) {
            check.skipped += 1;
            continue;
        }
        check.checked += 1;
        let n1 = reduced_index(sol.n.first().copied().unwrap_or(0), limits.r, limits.s);
        let as_q = |x: u64| BigRational::from_integer(BigInt::from(x));
        let mut fail = |reason: String| check.violations.push(Violation { index, reason });
        if as_q(n1 as u64) > limits.n1 {
            fail(format!("n1 = {n1} exceeds the bound"));
        }
        if as_q(u64::from(sol.a)) > limits.a {
            fail(format!("a = {} exceeds the bound", sol.a));
        }
        if log_power_upper(&sol.y, sol.a) > limits.log_ya {
            fail("log(y^a) exceeds the bound".to_string());
        }
    }
    check
}

/// True when every in-scope solution respects the report.
pub fn verify_bounds(solutions: &[Solution], report: &BoundReport, bd: &BinetData) -> bool {
    let mut limits = report.limits();
    limits.r = bd.r;
    limits.s = bd.s;
    check_limits(solutions, &limits).ok()
}
