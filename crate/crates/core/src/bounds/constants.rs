//! Explicit constants feeding the three bound pipelines.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::cfrac::BinetData;
use crate::heights::{hd3_coefficient, log_plus};
use crate::linforms::{matveev_gamma_coefficient, matveev_lambda_coefficient};
use crate::numeration::golden_ratio;
use crate::quadfield::{Dyadic, Interval, QuadNum};

/// Which family of bounds the constants are assembled for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundVariant {
    /// Only the constants of the `y`-dependent bound.
    Plain,
    /// `y` has Zeckendorf weight at most `l`.
    Zeckendorf { l: usize },
    /// `y` has at most `l` nonzero base-`b` digits.
    Radix { l: usize, b: u64 },
}

/// Named interval constants, kept in a sorted map so JSON output is stable.
#[derive(Clone, Debug, Default)]
pub struct ConstantLedger {
    pub entries: BTreeMap<String, Interval>,
}

impl ConstantLedger {
    pub fn get(&self, name: &str) -> &Interval {
        self.entries
            .get(name)
            .unwrap_or_else(|| panic!("constant {name} missing from ledger"))
    }

    pub fn try_get(&self, name: &str) -> Option<&Interval> {
        self.entries.get(name)
    }

    fn put(&mut self, name: &str, value: Interval) {
        self.entries.insert(name.to_string(), value);
    }

    pub fn to_json(&self) -> serde_json::Value {
        let map = self
            .entries
            .iter()
            .map(|(k, v)| (k.clone(), crate::json::interval_value(v)))
            .collect::<serde_json::Map<_, _>>();
        serde_json::Value::Object(map)
    }
}

fn iv(n: i64, prec: u32) -> Interval {
    Interval::from_i64(n, prec)
}

fn ln(x: &Interval) -> Interval {
    x.ln().expect("positive argument")
}

fn div(x: &Interval, y: &Interval) -> Interval {
    x.div(y).expect("positive divisor")
}

/// `0.16`, the floor on every `A_j`.
fn a_floor(prec: u32) -> Interval {
    Interval::from_ratio(4, 25, prec)
}

/// `e²·(1 + 2⁻¹⁰)`, comfortably above the transfer lemma's threshold.
fn seed_floor(prec: u32) -> Interval {
    let e2 = Interval::e(prec).sqr();
    e2.clone() + e2.mul_pow2(-10)
}

/// Exact `K·(max|c2| + c3 + q_r)/min c1`: the tail constant in
/// `|Γ − 1| ≤ E·θ1^(−(n1 − n_{w+1}))`, with the terms below the period folded in.
fn tail_constant(bd: &BinetData, k_total: u64) -> QuadNum {
    let d = bd.theta1.radicand();
    let num = &(&bd.c2_abs_max() + &bd.c3_exact) + &QuadNum::bigint_in(&bd.q_r, d);
    let num = num.scale(&BigRational::from_integer(BigInt::from(k_total)));
    num.try_div(bd.c1_min()).expect("c1 > 0")
}

/// `max{|log min c1|, |log(K·max c1)|}`, bounding `|log δ3|`.
fn log_delta3_bound(bd: &BinetData, k_total: u64, prec: u32) -> Interval {
    let lo = ln(&bd.c1_min().enclose(prec)).abs();
    let kmax = bd.c1_max().scale(&BigRational::from_integer(BigInt::from(k_total)));
    let hi = ln(&kmax.enclose(prec)).abs();
    lo.max(&hi)
}

/// Assembles the ledger for `K` summands.
pub fn elementary_constants(bd: &BinetData, k_total: usize, variant: &BoundVariant, prec: u32) -> ConstantLedger {
    assert!(k_total >= 1, "K must be positive");
    let kk = k_total as u64;
    let mut led = ConstantLedger::default();
    let k_iv = iv(k_total as i64, prec);
    let log2 = Interval::ln2(prec);
    let log3 = ln(&iv(3, prec));
    let e = Interval::e(prec);
    let lt = bd.log_theta1(prec);
    let c3 = Interval::point(bd.c3_upper(), prec);
    let c4 = Interval::point(bd.c4_lower(), prec);
    let phi = golden_ratio().enclose(prec);
    let log_phi = ln(&phi);

    led.put("K", k_iv.clone());
    led.put("log_theta1", lt.clone());
    led.put("c3", c3.clone());
    led.put("c4", c4.clone());

    let c5 = log_plus(&(&k_iv * &c3)) + lt.clone();
    let c6 = div(&c5, &log2);
    led.put("c5", c5.clone());
    led.put("c6", c6.clone());

    let inv_c4_lp = log_plus(&c4.recip().expect("c4 > 0"));
    let c7 = div(&(log_plus(&(&(&k_iv * &phi.sqr()) * &c3)) + lt.clone()), &log_phi);
    let c8 = div(&(log_phi.clone() + inv_c4_lp.clone()), &lt).max(&iv(1, prec));
    led.put("c7", c7.clone());
    led.put("c8", c8.clone());

    let tail = tail_constant(bd, kk).enclose(prec);
    led.put("E", tail.clone());
    let log_d3 = log_delta3_bound(bd, kk, prec);
    led.put("log_delta3_bound", log_d3.clone());
    let hd3 = hd3_coefficient(bd, kk, prec);
    led.put("hd3_coefficient", hd3.clone());

    // Three logarithms over a quadratic field: y, θ1 and δ3.
    let a3_y = hd3.mul_int(2 * k_total as i64).max(&log_d3).max(&a_floor(prec));
    led.put("a3_coefficient", a3_y.clone());
    let c9 = matveev_gamma_coefficient(3, 2, prec) * iv(2, prec) * lt.max(&a_floor(prec)) * a3_y;
    led.put("c9", c9.clone());

    let log_eb = iv(1, prec) + div(&ln(&(&e * &c6.max(&iv(1, prec)))), &log3);
    let tail2_lp = log_plus(&tail.mul_int(2));
    let c10_main = div(&(c9 * log_eb + div(&tail2_lp, &(&log2 * &log3))), &lt);
    let c10_floor = div(&e.sqr(), &log2) + Interval::point(Dyadic::new(BigInt::from(1), -10), prec);
    let c10 = c10_main.max(&c10_floor);
    led.put("c10", c10);

    match variant {
        BoundVariant::Plain => {}
        BoundVariant::Zeckendorf { l } => {
            led.put("l", iv(*l as i64, prec));
            let a1 = ln(&iv(5, prec)).mul_int(2);
            let a2 = log_phi.mul_int(2).max(&a_floor(prec));
            let a3 = hd3.mul_int(4).max(&log_d3).max(&a_floor(prec));
            let a4 = lt.mul_int(2).max(&a_floor(prec));
            let a5 = iv(8, prec);
            let log_eb = iv(2, prec) + div(&(iv(1, prec) + log_plus(&(&(&c6 * &c7) * &c8))), &log3);
            let c11 = matveev_lambda_coefficient(5, 4, prec) * a1 * a2 * a3 * a4 * a5 * log_eb;
            led.put("c11", c11.clone());
            let absorb = log_plus(&(c6.mul_int(12) + tail.mul_int(2)));
            let main = div(&(div(&absorb, &log3) + iv(1, prec) + c11), &lt.min(&log_phi));
            let c12 = main
                .max(&div(&iv(6, prec), &log3))
                .max(&div(&tail2_lp, &(&lt * &log3)))
                .max(&seed_floor(prec));
            led.put("C12", c12);
        }
        BoundVariant::Radix { l, b } => {
            led.put("l", iv(*l as i64, prec));
            led.put("b", iv(*b as i64, prec));
            let b_iv = iv(*b as i64, prec);
            let log_b = ln(&b_iv);
            let lp_b = log_plus(&b_iv);
            let c7p = div(&(log_plus(&(&k_iv * &c3)) + lt.clone()), &log_b);
            let c8p = div(&(log_b.clone() + inv_c4_lp), &lt).max(&iv(1, prec));
            led.put("c7p", c7p.clone());
            led.put("c8p", c8p.clone());
            let a1 = lp_b.mul_int(2);
            let a2 = log_b.mul_int(2).max(&a_floor(prec));
            let a3 = hd3.mul_int(2).max(&log_d3).max(&a_floor(prec));
            let a4 = lt.max(&a_floor(prec));
            let a5 = lp_b.mul_int(10);
            let inner = &(&c8p * &c6) * &(c7p + iv(1, prec));
            let log_eb = iv(2, prec) + div(&(iv(1, prec) + log_plus(&inner)), &log3);
            let c11 = matveev_lambda_coefficient(5, 2, prec) * a1 * a2 * a3 * a4 * a5 * log_eb;
            led.put("c11", c11.clone());
            let absorb = log_plus(&(c6.mul_int(2 * *b as i64) + tail.mul_int(2)));
            let main = div(&(div(&absorb, &log3) + iv(1, prec) + c11), &lt.min(&log_b));
            let c12 = main
                .max(&div(&iv(2, prec), &log3))
                .max(&div(&tail2_lp, &(&lt * &log3)))
                .max(&seed_floor(prec));
            led.put("C12", c12);
        }
    }
    led
}

/// `log(K·max|c2| / min c1) / log θ1`, floored at zero: the index bound in the
/// case where the linear form vanishes.
pub fn degenerate_bound(bd: &BinetData, k_total: usize, prec: u32) -> Interval {
    let c2max = bd.c2_abs_max();
    if c2max.is_zero() {
        return Interval::zero(prec);
    }
    let ratio = c2max
        .scale(&BigRational::from_integer(BigInt::from(k_total)))
        .try_div(bd.c1_min())
        .expect("c1 > 0");
    let v = div(&ln(&ratio.enclose(prec)), &bd.log_theta1(prec));
    v.max(&Interval::zero(prec))
}
