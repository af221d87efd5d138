//! The double-indexed step counter `(v_j, w_j)` and its bound sequence `u(j)`.
//!
//! A walk starts at `(v, w) = (2, 2)` with `u(0) = 1` and `u(1) = C12·log n1`.
//! A `Down` step raises `v`, a `Right` step raises `w`, and each new index pair
//! produces `u(j) = C12·(v_j − 1)(w_j − 1)·u(j−1)·u(j−2)·log n1`. Moving `v`
//! past `ℓ + 1` or `w` past `k + 1` leaves the grid; that move ends the walk
//! and contributes no new term.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeration::fibonacci;
use crate::quadfield::Interval;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Step {
    Down,
    Right,
}

/// Values the walk recursion can run over.
pub trait WalkScalar: Clone + Debug {
    fn unit_like(&self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn times_int(&self, n: u64) -> Self;
    fn powu(&self, n: u64) -> Self;
    /// Order used to pick the worst path; intervals compare upper endpoints.
    fn upper_cmp(&self, other: &Self) -> Ordering;
    /// True when `self ≤ other` is certain.
    fn certainly_le(&self, other: &Self) -> bool;
}

impl WalkScalar for BigRational {
    fn unit_like(&self) -> Self {
        BigRational::one()
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn times_int(&self, n: u64) -> Self {
        self * BigRational::from_integer(BigInt::from(n))
    }
    fn powu(&self, n: u64) -> Self {
        Pow::pow(self, n)
    }
    fn upper_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
    fn certainly_le(&self, other: &Self) -> bool {
        self <= other
    }
}

impl WalkScalar for Interval {
    fn unit_like(&self) -> Self {
        Interval::one(self.prec())
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn times_int(&self, n: u64) -> Self {
        self * &Interval::from_int(&BigInt::from(n), self.prec())
    }
    fn powu(&self, n: u64) -> Self {
        self.powi(n as i64).expect("non-negative exponent")
    }
    fn upper_cmp(&self, other: &Self) -> Ordering {
        self.hi().cmp(other.hi())
    }
    fn certainly_le(&self, other: &Self) -> bool {
        Interval::certainly_le(self, other)
    }
}

/// Which path to simulate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WalkPath {
    Steps(Vec<Step>),
    /// Maximize the final `u` over every complete path.
    Worst,
}

#[derive(Clone, Debug)]
pub struct WalkState<T> {
    /// Index of the last computed term, so `u.len() == j + 1`.
    pub j: usize,
    pub v: usize,
    pub w: usize,
    pub u: Vec<T>,
    /// `(v_i, w_i)` for `i = 1..=j`.
    pub trace: Vec<(usize, usize)>,
    pub steps: Vec<Step>,
    pub exited: bool,
}

impl<T: WalkScalar> WalkState<T> {
    fn start(c12: &T, log_n1: &T) -> Self {
        let one = c12.unit_like();
        WalkState {
            j: 1,
            v: 2,
            w: 2,
            u: vec![one, c12.times(log_n1)],
            trace: vec![(2, 2)],
            steps: Vec::new(),
            exited: false,
        }
    }

    fn advance(&mut self, step: Step, k: usize, l: usize, c12: &T, log_n1: &T) -> Result<()> {
        if self.exited {
            return Err(Error::MalformedPath(format!("step {} follows the exit", self.steps.len() + 1)));
        }
        self.steps.push(step);
        let (v, w) = match step {
            Step::Down => (self.v + 1, self.w),
            Step::Right => (self.v, self.w + 1),
        };
        if v > l + 1 || w > k + 1 {
            self.exited = true;
            return Ok(());
        }
        let next = c12
            .times_int(((v - 1) * (w - 1)) as u64)
            .times(&self.u[self.j])
            .times(&self.u[self.j - 1])
            .times(log_n1);
        self.v = v;
        self.w = w;
        self.j += 1;
        self.u.push(next);
        self.trace.push((v, w));
        Ok(())
    }

    /// Final bound `u(j)`.
    pub fn last(&self) -> &T {
        self.u.last().expect("u(0) is always present")
    }
}

/// Runs the counter along `path`.
pub fn walk_simulate<T: WalkScalar>(k: usize, l: usize, c12: &T, log_n1: &T, path: &WalkPath) -> Result<WalkState<T>> {
    if k < 2 || l < 2 {
        return Err(Error::InvalidInput("walk needs k >= 2 and l >= 2".into()));
    }
    match path {
        WalkPath::Steps(steps) => {
            let mut st = WalkState::start(c12, log_n1);
            for &s in steps {
                st.advance(s, k, l, c12, log_n1)?;
            }
            // The counter never needs more than k + l − 1 indices.
            assert!(st.j < k + l, "walk exceeded k + l - 1 steps");
            Ok(st)
        }
        WalkPath::Worst => {
            let mut best: Option<WalkState<T>> = None;
            for steps in full_paths(k, l) {
                let st = walk_simulate(k, l, c12, log_n1, &WalkPath::Steps(steps))?;
                let better = match &best {
                    None => true,
                    Some(b) => st.last().upper_cmp(b.last()) == Ordering::Greater,
                };
                if better {
                    best = Some(st);
                }
            }
            Ok(best.expect("at least one path"))
        }
    }
}

/// Every in-grid path from `(2, 2)` to `(ℓ + 1, k + 1)`, in lexicographic order
/// with `Down < Right`.
pub fn full_paths(k: usize, l: usize) -> Vec<Vec<Step>> {
    fn rec(downs: usize, rights: usize, cur: &mut Vec<Step>, out: &mut Vec<Vec<Step>>) {
        if downs == 0 && rights == 0 {
            out.push(cur.clone());
            return;
        }
        for (step, left) in [(Step::Down, downs), (Step::Right, rights)] {
            if left > 0 {
                cur.push(step);
                match step {
                    Step::Down => rec(downs - 1, rights, cur, out),
                    Step::Right => rec(downs, rights - 1, cur, out),
                }
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(l.saturating_sub(1), k.saturating_sub(1), &mut Vec::new(), &mut out);
    out
}

/// Closed-form dominant `C12^(F_{j+2}−1)·(ℓk)^(F_{j+1}−1)·(log n1)^(F_{j+2}−1)`.
pub fn lemma_bound<T: WalkScalar>(j: usize, k: usize, l: usize, c12: &T, log_n1: &T) -> T {
    let e2 = fib_u64(j + 2) - 1;
    let e1 = fib_u64(j + 1) - 1;
    c12.powu(e2)
        .times(&c12.unit_like().times_int((l * k) as u64).powu(e1))
        .times(&log_n1.powu(e2))
}

fn fib_u64(t: usize) -> u64 {
    u64::try_from(fibonacci(t)).expect("walk lengths keep Fibonacci indices small")
}

/// Checks the counter and dominance invariants along a simulated walk.
pub fn check_walk<T: WalkScalar>(st: &WalkState<T>, k: usize, l: usize, c12: &T, log_n1: &T) -> bool {
    let counter = st.trace.windows(2).all(|p| p[1].0 + p[1].1 == p[0].0 + p[0].1 + 1);
    let monotone = st.u.windows(2).all(|p| p[0].certainly_le(&p[1]));
    let dominated = st
        .u
        .iter()
        .enumerate()
        .all(|(j, u)| u.certainly_le(&lemma_bound(j, k, l, c12, log_n1)));
    counter && monotone && dominated
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn worked_instance() {
        for path in full_paths(2, 2) {
            let st = walk_simulate(2, 2, &q(10), &q(2), &WalkPath::Steps(path)).unwrap();
            assert_eq!(st.u, vec![q(1), q(20), q(800), q(1_280_000)]);
            assert_eq!(lemma_bound(3, 2, 2, &q(10), &q(2)), q(2_560_000));
            assert!(check_walk(&st, 2, 2, &q(10), &q(2)));
        }
    }

    #[test]
    fn exit_and_malformed_paths() {
        use Step::*;
        let st = walk_simulate(2, 2, &q(10), &q(2), &WalkPath::Steps(vec![Down, Down])).unwrap();
        assert!(st.exited);
        assert_eq!(st.j, 2);
        let err = walk_simulate(2, 2, &q(10), &q(2), &WalkPath::Steps(vec![Down, Down, Right])).unwrap_err();
        assert_eq!(err.code(), "malformed-path");
        assert!(walk_simulate(1, 2, &q(10), &q(2), &WalkPath::Worst).is_err());
    }

    #[test]
    fn worst_path_on_intervals() {
        let c = Interval::from_i64(100, 128);
        let ln = Interval::from_i64(10, 128);
        let st = walk_simulate(3, 4, &c, &ln, &WalkPath::Worst).unwrap();
        assert_eq!(st.j, 3 + 4 - 1);
        assert!(check_walk(&st, 3, 4, &c, &ln));
        let exact = walk_simulate(3, 4, &q(100), &q(10), &WalkPath::Worst).unwrap();
        let hi = st.last().hi().to_rational();
        assert!(exact.last() <= &hi);
    }

    #[test]
    fn path_count_is_binomial() {
        assert_eq!(full_paths(3, 4).len(), 10);
        assert_eq!(full_paths(5, 5).len(), 70);
    }
}
