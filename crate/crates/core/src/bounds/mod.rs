//! Effective bounds on the solutions of `y^a = q_{N1} + ⋯ + q_{NK}`.
//!
//! Three pipelines share one constant ledger: a bound depending on `y`, and
//! two walk-based bounds for `y` of small Zeckendorf or radix weight.

mod constants;
mod walk;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;

use crate::cfrac::BinetData;
use crate::error::{Error, Result};
use crate::json;
use crate::linforms::pw_transfer_int;
use crate::numeration::fibonacci;
use crate::quadfield::Interval;

pub use constants::{degenerate_bound, elementary_constants, BoundVariant, ConstantLedger};
pub use walk::{check_walk, full_paths, lemma_bound, walk_simulate, Step, WalkPath, WalkScalar, WalkState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundCase {
    Main,
    GammaEqualsOne,
    KEqualsOne,
    BelowN0,
}

impl BoundCase {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundCase::Main => "main",
            BoundCase::GammaEqualsOne => "gamma_equals_one",
            BoundCase::KEqualsOne => "k_equals_one",
            BoundCase::BelowN0 => "below_N0",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theorem {
    Y,
    Zeckendorf,
    Radix,
}

impl Theorem {
    pub fn as_str(self) -> &'static str {
        match self {
            Theorem::Y => "y",
            Theorem::Zeckendorf => "ham",
            Theorem::Radix => "ham2",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Applicability {
    pub field_not_q_sqrt5: bool,
    pub petho_preconditions_ok: bool,
}

/// Bound contributed by one count `k` of distinct indices.
#[derive(Clone, Debug)]
pub struct PerK {
    pub k: usize,
    pub n1_bound: Interval,
    /// Set when the bound relies on the separately certified `k = 1` case.
    pub conditional: bool,
}

#[derive(Clone, Debug)]
pub struct BoundReport {
    pub theorem: Theorem,
    pub k_total: usize,
    pub l: Option<usize>,
    pub b: Option<u64>,
    pub y: Option<BigInt>,
    pub r: usize,
    pub s: usize,
    pub ledger: ConstantLedger,
    pub n1_bound: Interval,
    pub a_bound: Interval,
    pub log_ya_bound: Interval,
    pub case: BoundCase,
    pub applicability: Applicability,
    pub conditional: bool,
    pub per_k: Vec<PerK>,
    pub degenerate: Interval,
}

impl BoundReport {
    pub fn limits(&self) -> BoundLimits {
        BoundLimits {
            r: self.r,
            s: self.s,
            y: self.y.clone(),
            n1: self.n1_bound.hi().to_rational(),
            a: self.a_bound.hi().to_rational(),
            log_ya: self.log_ya_bound.hi().to_rational(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let per_k: Vec<_> = self
            .per_k
            .iter()
            .map(|p| {
                serde_json::json!({
                    "k": p.k,
                    "n1_bound": json::upper(&p.n1_bound),
                    "conditional": p.conditional,
                })
            })
            .collect();
        serde_json::json!({
            "theorem": self.theorem.as_str(),
            "K": self.k_total,
            "l": self.l,
            "b": self.b,
            "y": self.y.as_ref().map(|y| y.to_string()),
            "r": self.r,
            "s": self.s,
            "ledger": self.ledger.to_json(),
            "n1_bound": json::upper(&self.n1_bound),
            "a_bound": json::upper(&self.a_bound),
            "log_ya_bound": json::upper(&self.log_ya_bound),
            "degenerate_bound": json::upper(&self.degenerate),
            "case": self.case.as_str(),
            "applicability": {
                "field_not_Q_sqrt5": self.applicability.field_not_q_sqrt5,
                "petho_preconditions_ok": self.applicability.petho_preconditions_ok,
            },
            "conditional": self.conditional,
            "per_k": per_k,
        })
    }
}

/// Certified upper limits of a report, as exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundLimits {
    pub r: usize,
    pub s: usize,
    /// Reports depending on `y` only cover that `y`.
    pub y: Option<BigInt>,
    pub n1: BigRational,
    pub a: BigRational,
    pub log_ya: BigRational,
}

impl BoundLimits {
    /// Reads the limits back from [`BoundReport::to_json`] output.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = |what: &str| Error::InvalidInput(format!("report is missing a valid {what:?}"));
        let field = |name: &str| v.get(name).and_then(json::decimal_value).ok_or_else(|| bad(name));
        let index = |name: &str| {
            v.get(name)
                .and_then(serde_json::Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| bad(name))
        };
        let y = match v.get("y") {
            None | Some(serde_json::Value::Null) => None,
            Some(y) => Some(json::parse_int(y).ok_or_else(|| bad("y"))?),
        };
        Ok(BoundLimits {
            r: index("r")?,
            s: index("s")?,
            y,
            n1: field("n1_bound")?,
            a: field("a_bound")?,
            log_ya: field("log_ya_bound")?,
        })
    }
}

/// Field-distinctness condition for the Zeckendorf pipeline; the radix
/// pipeline needs none.
pub fn nonvanishing_check(bd: &BinetData, variant: &BoundVariant) -> bool {
    match variant {
        BoundVariant::Zeckendorf { .. } => bd.delta != BigInt::from(5),
        BoundVariant::Plain | BoundVariant::Radix { .. } => true,
    }
}

/// `t² − 4(−1)^s` is not a square and `t² ≠ j(−1)^s` for `1 ≤ j ≤ 4`.
pub fn petho_conditions(t: &BigInt, s: usize) -> bool {
    let sign: i64 = if s % 2 == 0 { 1 } else { -1 };
    let t2 = t * t;
    let disc = &t2 - BigInt::from(4 * sign);
    let square = !disc.is_negative() && {
        let root = disc.sqrt();
        &root * &root == disc
    };
    let coincidence = (1..=4).any(|j| t2 == BigInt::from(j * sign));
    !square && !coincidence
}

pub fn petho_preconditions(bd: &BinetData) -> bool {
    petho_conditions(&bd.t_alpha, bd.s)
}

fn applicability(bd: &BinetData) -> Applicability {
    Applicability {
        field_not_q_sqrt5: bd.delta != BigInt::from(5),
        petho_preconditions_ok: petho_preconditions(bd),
    }
}

fn ln(x: &Interval) -> Interval {
    x.ln().expect("positive argument")
}

fn upper_max(a: &Interval, b: &Interval) -> bool {
    a.hi().cmp(b.hi()) == Ordering::Greater
}

/// Folds the per-`k` bounds, the vanishing branch and the `N0` floor into one
/// bound and records which branch attained it.
fn resolve(per_k: &[PerK], degenerate: &Interval, n0: u64, k_total: usize, prec: u32) -> (Interval, BoundCase) {
    let mut best = Interval::from_i64(n0.max(2) as i64, prec);
    let mut case = BoundCase::BelowN0;
    for p in per_k {
        if upper_max(&p.n1_bound, &best) {
            best = p.n1_bound.clone();
            case = if p.conditional { BoundCase::KEqualsOne } else { BoundCase::Main };
        }
    }
    if upper_max(degenerate, &best) {
        best = degenerate.clone();
        case = BoundCase::GammaEqualsOne;
    }
    if k_total == 1 && case == BoundCase::Main {
        case = BoundCase::KEqualsOne;
    }
    (best, case)
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    theorem: Theorem,
    bd: &BinetData,
    k_total: usize,
    l: Option<usize>,
    b: Option<u64>,
    y: Option<BigInt>,
    ledger: ConstantLedger,
    per_k: Vec<PerK>,
    prec: u32,
) -> BoundReport {
    let degenerate = degenerate_bound(bd, k_total, prec);
    let (n1_bound, case) = resolve(&per_k, &degenerate, bd.n0, k_total, prec);
    let n1_point = Interval::point(n1_bound.hi().clone(), prec);
    let a_bound = ledger.get("c6") * &n1_point;
    let log_ya_bound = ledger.get("c5") * &n1_point;
    let conditional = matches!(case, BoundCase::KEqualsOne);
    BoundReport {
        theorem,
        k_total,
        l,
        b,
        y,
        r: bd.r,
        s: bd.s,
        ledger,
        n1_bound,
        a_bound,
        log_ya_bound,
        case,
        applicability: applicability(bd),
        conditional,
        per_k,
        degenerate,
    }
}

/// `n1 ≤ PW(0, k, (c10·log y)^k)` for every `k ≤ K`.
pub fn theorem_y_bound(bd: &BinetData, k_total: usize, y: &BigInt, prec: u32) -> Result<BoundReport> {
    if k_total == 0 {
        return Err(Error::InvalidInput("K must be at least 1".into()));
    }
    if y < &BigInt::from(2) {
        return Err(Error::InvalidInput("y must be at least 2".into()));
    }
    let ledger = elementary_constants(bd, k_total, &BoundVariant::Plain, prec);
    let g1 = ledger.get("c10") * &ln(&Interval::from_int(y, prec));
    let zero = Interval::zero(prec);
    let mut per_k = Vec::with_capacity(k_total);
    for k in 1..=k_total {
        let g = g1.powi(k as i64)?;
        per_k.push(PerK { k, n1_bound: pw_transfer_int(&zero, k as u64, &g)?, conditional: false });
    }
    Ok(assemble(Theorem::Y, bd, k_total, None, None, Some(y.clone()), ledger, per_k, prec))
}

/// Per-`k` bound shared by the two walk-based pipelines.
///
/// With `j = k + ℓ − 1` the walk gives `min{m1, n1} ≤ X·(log n1)^c` where
/// `c = F_{j+2} − 1` and `X = C12^c·(ℓk)^(F_{j+1} − 1)`. If `n1` is the smaller
/// index this is a transfer-lemma instance directly. Otherwise `log y ≤ ρ·m1`
/// feeds the `y`-bound, giving `n1 ≤ (c10·ρ·X)^k·(log n1)^(k(c+1))`.
fn walk_bound(ledger: &ConstantLedger, k: usize, l: usize, rho: &Interval, prec: u32) -> Result<Interval> {
    let j = k + l - 1;
    let c = u64::try_from(fibonacci(j + 2)).expect("small index") - 1;
    let e1 = u64::try_from(fibonacci(j + 1)).expect("small index") - 1;
    let c12 = ledger.get("C12");
    let x = c12.powi(c as i64)? * Interval::from_i64((l * k) as i64, prec).powi(e1 as i64)?;
    let zero = Interval::zero(prec);
    let direct = pw_transfer_int(&zero, c, &x)?;
    let via_y = (ledger.get("c10") * rho * &x).powi(k as i64)?;
    let via_y = pw_transfer_int(&zero, k as u64 * (c + 1), &via_y)?;
    Ok(if upper_max(&via_y, &direct) { via_y } else { direct })
}

fn walk_pipeline(
    theorem: Theorem,
    bd: &BinetData,
    k_total: usize,
    l: usize,
    b: Option<u64>,
    variant: BoundVariant,
    rho: Interval,
    prec: u32,
) -> Result<BoundReport> {
    if k_total == 0 || l < 2 {
        return Err(Error::InvalidInput("need K >= 1 and l >= 2".into()));
    }
    let ledger = elementary_constants(bd, k_total, &variant, prec);
    let mut per_k = Vec::with_capacity(k_total);
    for k in 1..=k_total {
        let n1_bound = walk_bound(&ledger, k, l, &rho, prec)?;
        per_k.push(PerK { k, n1_bound, conditional: k == 1 });
    }
    Ok(assemble(theorem, bd, k_total, Some(l), b, None, ledger, per_k, prec))
}

/// Bound for `y` of Zeckendorf weight at most `ℓ`; needs `Q(α) ≠ Q(√5)`.
pub fn theorem_ham_bound(bd: &BinetData, k_total: usize, l: usize, prec: u32) -> Result<BoundReport> {
    let variant = BoundVariant::Zeckendorf { l };
    if !nonvanishing_check(bd, &variant) {
        return Err(Error::Inapplicable("Q(alpha) = Q(sqrt5)".into()));
    }
    let rho = Interval::one(prec);
    walk_pipeline(Theorem::Zeckendorf, bd, k_total, l, None, variant, rho, prec)
}

/// Bound for `y` with at most `ℓ` nonzero base-`b` digits.
pub fn theorem_ham2_bound(bd: &BinetData, k_total: usize, l: usize, b: u64, prec: u32) -> Result<BoundReport> {
    if b < 2 {
        return Err(Error::InvalidInput("base must be at least 2".into()));
    }
    let variant = BoundVariant::Radix { l, b };
    let rho = ln(&Interval::from_i64(b as i64, prec)).mul_int(2);
    walk_pipeline(Theorem::Radix, bd, k_total, l, Some(b), variant, rho, prec)
}

/// `n1` of a denominator index `N`: `(N − r)/s` inside the period, else 0.
pub fn reduced_index(n: usize, r: usize, s: usize) -> usize {
    if n >= r {
        (n - r) / s
    } else {
        0
    }
}

/// An upper enclosure of `a·log y` as a rational.
pub(crate) fn log_power_upper(y: &BigInt, a: u32) -> BigRational {
    let l = ln(&Interval::from_int(y, 96)).mul_int(a as i64);
    l.hi().to_rational()
}
