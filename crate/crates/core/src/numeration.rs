//! Ostrowski, Zeckendorf and radix representations, and the grouping of a sum
//! of convergent denominators by index.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cfrac::ContinuedFraction;
use crate::error::{Error, Result};
use crate::json;
use crate::quadfield::{Interval, QuadNum};

/// Digits `ε_0 … ε_l` of `n = Σ ε_i q_i`, least significant first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OstrowskiRep {
    #[serde(with = "json::compact_vec")]
    pub digits: Vec<BigInt>,
}

/// Greedy Ostrowski encoding of `n` with respect to the convergents of `cf`.
pub fn ostrowski_encode(n: &BigInt, cf: &ContinuedFraction) -> OstrowskiRep {
    assert!(!n.is_negative(), "Ostrowski encoding needs n >= 0");
    if n.is_zero() {
        return OstrowskiRep { digits: Vec::new() };
    }
    let q: Vec<BigInt> = cf
        .convergent_iter()
        .map(|(_, q)| q)
        .take_while(|q| q <= n)
        .collect();
    let mut rest = n.clone();
    let mut digits = vec![BigInt::zero(); q.len()];
    for i in (0..q.len()).rev() {
        let (d, m) = rest.div_rem(&q[i]);
        digits[i] = d;
        rest = m;
    }
    while digits.last().is_some_and(Zero::is_zero) {
        digits.pop();
    }
    OstrowskiRep { digits }
}

pub fn ostrowski_decode(rep: &OstrowskiRep, cf: &ContinuedFraction) -> BigInt {
    rep.digits
        .iter()
        .zip(cf.convergent_iter())
        .map(|(e, (_, q))| e * q)
        .sum()
}

/// Conditions i–iii: `ε_0 < a_1`, `ε_i ≤ a_{i+1}`, and `ε_i = a_{i+1}`
/// forces `ε_{i−1} = 0`.
pub fn ostrowski_conditions(digits: &[BigInt], cf: &ContinuedFraction) -> bool {
    for (i, e) in digits.iter().enumerate() {
        let cap = cf.quotient(i + 1);
        if e.is_negative() {
            return false;
        }
        if i == 0 {
            if e >= cap {
                return false;
            }
        } else if e > cap || (e == cap && !digits[i - 1].is_zero()) {
            return false;
        }
    }
    true
}

/// The partial-sum form: `Σ_{i ≤ j} ε_i q_i < q_{j+1}` for every `j`.
pub fn ostrowski_partial_sums(digits: &[BigInt], cf: &ContinuedFraction) -> bool {
    if digits.iter().any(Signed::is_negative) {
        return false;
    }
    let q: Vec<BigInt> = cf.convergent_iter().take(digits.len() + 1).map(|(_, q)| q).collect();
    let mut acc = BigInt::zero();
    for (j, e) in digits.iter().enumerate() {
        acc += e * &q[j];
        if acc >= q[j + 1] {
            return false;
        }
    }
    true
}

/// Validity of an Ostrowski digit vector. The two characterizations are
/// evaluated independently and must agree.
pub fn ostrowski_validate(rep: &OstrowskiRep, cf: &ContinuedFraction) -> bool {
    let by_conditions = ostrowski_conditions(&rep.digits, cf);
    let by_sums = ostrowski_partial_sums(&rep.digits, cf);
    assert_eq!(
        by_conditions, by_sums,
        "Ostrowski characterizations disagree on {:?}",
        rep.digits
    );
    by_conditions
}

/// `F_t` with `F_0 = 0`, `F_1 = 1`.
pub fn fibonacci(t: usize) -> BigInt {
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    for _ in 0..t {
        let c = &a + &b;
        a = std::mem::replace(&mut b, c);
    }
    a
}

/// `F_0 … F_n`.
pub fn fibonacci_table(n: usize) -> Vec<BigInt> {
    let mut f = vec![BigInt::zero(), BigInt::one()];
    while f.len() <= n {
        let next = &f[f.len() - 1] + &f[f.len() - 2];
        f.push(next);
    }
    f.truncate(n + 1);
    f
}

/// Certifies `φ^(t−2) ≤ F_t ≤ φ^(t−1)` with interval powers of `φ`.
pub fn fib_bounds_check(t: usize) -> bool {
    if t == 0 {
        return true;
    }
    let f = fibonacci(t);
    let mut prec = 128;
    for _ in 0..5 {
        let phi = golden_ratio().enclose(prec);
        let lower = phi.powi(t as i64 - 2).expect("phi > 0");
        let upper = phi.powi(t as i64 - 1).expect("phi > 0");
        let value = Interval::from_int(&f, prec);
        if lower.certainly_le(&value) && value.certainly_le(&upper) {
            return true;
        }
        if value.certainly_lt(&lower) || upper.certainly_lt(&value) {
            return false;
        }
        prec *= 2;
    }
    false
}

pub fn golden_ratio() -> QuadNum {
    QuadNum::from_parts(1, 2, 1, 2, 5).expect("5 is squarefree")
}

/// Fibonacci indices `m_1 > ⋯ > m_ℓ ≥ 2` with gaps of at least two.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeckendorfRep {
    pub indices: Vec<usize>,
}

impl ZeckendorfRep {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        let canonical = indices.last().is_none_or(|&m| m >= 2)
            && indices.windows(2).all(|w| w[0] >= w[1] + 2);
        if !canonical {
            return Err(Error::InvalidInput(format!("not a Zeckendorf index list: {indices:?}")));
        }
        Ok(ZeckendorfRep { indices })
    }

    pub fn value(&self) -> BigInt {
        self.indices.iter().map(|&m| fibonacci(m)).sum()
    }

    pub fn weight(&self) -> usize {
        self.indices.len()
    }
}

pub fn zeckendorf_encode(y: &BigInt) -> ZeckendorfRep {
    assert!(y.is_positive(), "Zeckendorf encoding needs y >= 1");
    let mut fib = vec![BigInt::zero(), BigInt::one()];
    while fib.last().unwrap() <= y {
        let next = &fib[fib.len() - 1] + &fib[fib.len() - 2];
        fib.push(next);
    }
    let mut rest = y.clone();
    let mut indices = Vec::new();
    let mut t = fib.len() - 1;
    while rest.is_positive() {
        while fib[t] > rest {
            t -= 1;
        }
        rest -= &fib[t];
        indices.push(t);
        t -= 1;
    }
    ZeckendorfRep { indices }
}

/// Re-encodes an arbitrary sum `Σ F_{m_i}` (repeats and neighbours allowed).
pub fn zeckendorf_canonicalize(indices: &[usize]) -> Result<ZeckendorfRep> {
    let total: BigInt = indices.iter().map(|&m| fibonacci(m)).sum();
    if total.is_zero() {
        return Err(Error::InvalidInput("sum of Fibonacci numbers is zero".into()));
    }
    Ok(zeckendorf_encode(&total))
}

/// Nonzero base-`b` digits `D_i` at positions `m_1 > ⋯ > m_ℓ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadixRep {
    pub base: u64,
    pub positions: Vec<usize>,
    pub digits: Vec<u64>,
}

impl RadixRep {
    pub fn value(&self) -> BigInt {
        let b = BigInt::from(self.base);
        self.positions
            .iter()
            .zip(&self.digits)
            .map(|(&m, &d)| BigInt::from(d) * num_traits::pow(b.clone(), m))
            .sum()
    }

    pub fn weight(&self) -> usize {
        self.digits.len()
    }
}

pub fn radix_encode(y: &BigInt, base: u64) -> RadixRep {
    assert!(y.is_positive() && base >= 2, "radix encoding needs y >= 1 and b >= 2");
    let b = BigInt::from(base);
    let mut rest = y.clone();
    let mut positions = Vec::new();
    let mut digits = Vec::new();
    let mut m = 0;
    while rest.is_positive() {
        let (q, d) = rest.div_rem(&b);
        if !d.is_zero() {
            positions.push(m);
            digits.push(d.to_u64().expect("digit below base"));
        }
        rest = q;
        m += 1;
    }
    positions.reverse();
    digits.reverse();
    RadixRep { base, positions, digits }
}

/// One distinct index `N'` of a sum, its multiplicity `d`, and its split
/// `N' = s·n + j + r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumTerm {
    pub d: usize,
    #[serde(rename = "N")]
    pub index: usize,
    pub n: usize,
    pub j: usize,
}

/// A sum `q_{N_1} + ⋯ + q_{N_K}` grouped by distinct index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumRepresentation {
    #[serde(rename = "K")]
    pub k_total: usize,
    /// Distinct indices `N' ≥ r`, strictly decreasing.
    pub terms: Vec<SumTerm>,
    /// Indices below `r`, with repetition.
    pub small_terms: Vec<usize>,
}

impl SumRepresentation {
    /// The number `k` of distinct indices in the periodic range.
    pub fn k(&self) -> usize {
        self.terms.len()
    }

    pub fn value(&self, cf: &ContinuedFraction) -> BigInt {
        let top = self
            .terms
            .iter()
            .map(|t| t.index)
            .chain(self.small_terms.iter().copied())
            .max()
            .unwrap_or(0);
        let q = crate::cfrac::denominators(cf, top);
        let main: BigInt = self.terms.iter().map(|t| BigInt::from(t.d) * &q[t.index]).sum();
        let small: BigInt = self.small_terms.iter().map(|&i| &q[i]).sum();
        main + small
    }
}

pub fn partition_sum(indices: &[usize], cf: &ContinuedFraction) -> Result<SumRepresentation> {
    if indices.is_empty() {
        return Err(Error::InvalidInput("at least one index is required".into()));
    }
    if indices.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidInput("indices must be weakly decreasing".into()));
    }
    let (r, s) = (cf.r(), cf.s());
    let mut terms: Vec<SumTerm> = Vec::new();
    let mut small_terms = Vec::new();
    for &idx in indices {
        if idx < r {
            small_terms.push(idx);
            continue;
        }
        match terms.last_mut() {
            Some(t) if t.index == idx => t.d += 1,
            _ => {
                let off = idx - r;
                terms.push(SumTerm { d: 1, index: idx, n: off / s, j: off % s });
            }
        }
    }
    Ok(SumRepresentation { k_total: indices.len(), terms, small_terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn example_cf() -> ContinuedFraction {
        ContinuedFraction::from_u64s(0, &[3], &[1, 2]).unwrap()
    }

    fn golden() -> ContinuedFraction {
        ContinuedFraction::from_u64s(0, &[], &[1]).unwrap()
    }

    #[test]
    fn worked_example() {
        let cf = example_cf();
        let rep = ostrowski_encode(&BigInt::from(6), &cf);
        assert_eq!(rep.digits, ints(&[2, 0, 1]));
        assert!(ostrowski_validate(&rep, &cf));
        assert!(!ostrowski_validate(&OstrowskiRep { digits: ints(&[0, 2]) }, &cf));
        assert!(!ostrowski_validate(&OstrowskiRep { digits: ints(&[3, 0, 1]) }, &cf));
        assert!(ostrowski_encode(&BigInt::zero(), &cf).digits.is_empty());
    }

    #[test]
    fn golden_ostrowski_is_zeckendorf() {
        let cf = golden();
        let rep = ostrowski_encode(&BigInt::from(100), &cf);
        assert_eq!(ostrowski_decode(&rep, &cf), BigInt::from(100));
        // q_i = F_{i+1}, so digit i set means Fibonacci index i + 1.
        let idx: Vec<usize> = rep
            .digits
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, e)| !e.is_zero())
            .map(|(i, _)| i + 1)
            .collect();
        assert_eq!(idx, vec![11, 6, 4]);
    }

    #[test]
    fn zeckendorf_examples() {
        assert_eq!(zeckendorf_encode(&BigInt::from(100)).indices, vec![11, 6, 4]);
        assert_eq!(zeckendorf_encode(&BigInt::from(1)).indices, vec![2]);
        assert_eq!(zeckendorf_encode(&BigInt::from(10)).indices, vec![6, 3]);
        assert_eq!(zeckendorf_canonicalize(&[4, 4, 1]).unwrap().indices, vec![5, 3]);
        assert!(ZeckendorfRep::new(vec![5, 4]).is_err());
        assert!(ZeckendorfRep::new(vec![5, 1]).is_err());
    }

    #[test]
    fn radix_examples() {
        let r = radix_encode(&BigInt::from(2024), 10);
        assert_eq!((r.positions.clone(), r.digits.clone()), (vec![3, 1, 0], vec![2, 2, 4]));
        let r = radix_encode(&BigInt::from(8), 2);
        assert_eq!((r.positions.clone(), r.digits.clone()), (vec![3], vec![1]));
        let r = radix_encode(&BigInt::from(255), 16);
        assert_eq!((r.positions.clone(), r.digits.clone()), (vec![1, 0], vec![15, 15]));
        assert_eq!(r.value(), BigInt::from(255));
    }

    #[test]
    fn partitions() {
        let cf = ContinuedFraction::from_u64s(1, &[], &[2]).unwrap();
        let p = partition_sum(&[7, 7, 3], &cf).unwrap();
        let pairs: Vec<_> = p.terms.iter().map(|t| (t.d, t.index, t.n, t.j)).collect();
        assert_eq!(pairs, vec![(2, 7, 6, 0), (1, 3, 2, 0)]);

        let cf2 = ContinuedFraction::from_u64s(1, &[], &[1, 2]).unwrap();
        let p = partition_sum(&[5, 4], &cf2).unwrap();
        let pairs: Vec<_> = p.terms.iter().map(|t| (t.n, t.j)).collect();
        assert_eq!(pairs, vec![(2, 0), (1, 1)]);

        let p = partition_sum(&[0, 0], &cf).unwrap();
        assert_eq!((p.k(), p.small_terms.clone()), (0, vec![0, 0]));
        assert!(partition_sum(&[1, 2], &cf).is_err());
    }

    #[test]
    fn fibonacci_values() {
        assert_eq!(fibonacci(12), BigInt::from(144));
        assert_eq!(fibonacci(36), BigInt::from(14930352));
        assert_eq!((fibonacci(0), fibonacci(1)), (BigInt::zero(), BigInt::one()));
        assert_eq!(fibonacci_table(6), ints(&[0, 1, 1, 2, 3, 5, 8]));
        assert!((0..200).all(fib_bounds_check));
    }
}
