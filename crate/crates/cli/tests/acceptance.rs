//! End-to-end acceptance run: each check prints one `[PASS]`/`[FAIL]` line
//! with its wall time, and the process fails if any check fails or overruns.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cfpow::bounds::{
    check_walk, full_paths, lemma_bound, petho_preconditions, theorem_ham2_bound, theorem_ham_bound,
    theorem_y_bound, walk_simulate, WalkPath,
};
use cfpow::cfrac::{
    binet_data, denominators, expand, verify_binet, verify_growth, verify_shifted_recurrence, ContinuedFraction,
    GrowthCheck,
};
use cfpow::linforms::{matveev_gamma_bound, matveev_lambda_bound, pw_largest_root, pw_transfer, LinFormInstance};
use cfpow::numeration::{
    fibonacci, ostrowski_conditions, ostrowski_decode, ostrowski_encode, ostrowski_partial_sums, ostrowski_validate,
};
use cfpow::search::{
    enumerate_solutions, filter_by_weight, is_power_or_trivial, verify_bounds, SearchRange, Solution, WeightFilter,
};
use cfpow::{make_quadnum, Interval, QuadNum};

const PREC: u32 = 128;

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn golden_cf() -> ContinuedFraction {
    ContinuedFraction::from_u64s(0, &[], &[1]).unwrap()
}

fn sqrt2_cf() -> ContinuedFraction {
    ContinuedFraction::from_u64s(1, &[], &[2]).unwrap()
}

fn phi_cf() -> ContinuedFraction {
    ContinuedFraction::from_u64s(1, &[], &[1]).unwrap()
}

fn cli(args: &[&str]) -> cfpow_cli::Outcome {
    cfpow_cli::run(std::iter::once("cfpow").chain(args.iter().copied()))
}

/// `(p + q√D)/r` with `|p|, |q|, r ≤ 10`, `2 ≤ D ≤ 50`, `q ≠ 0`, `D` not a square.
fn random_irrationals(seed: u64, count: usize) -> Vec<(String, QuadNum)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p: i64 = rng.gen_range(-10..=10);
        let q: i64 = rng.gen_range(-10..=10);
        let r: i64 = rng.gen_range(1..=10);
        let d: i64 = rng.gen_range(2..=50);
        if q == 0 || (d as f64).sqrt().fract() == 0.0 {
            continue;
        }
        let alpha = make_quadnum(
            BigRational::new(p.into(), r.into()),
            BigRational::new(q.into(), r.into()),
            &BigInt::from(d),
        )
        .expect("non-square radicand");
        out.push((format!("({p} + {q}*sqrt{d})/{r}"), alpha));
    }
    out
}

fn ac1() -> Check {
    let alpha = make_quadnum(BigRational::new((-1).into(), 2.into()), BigRational::new(1.into(), 2.into()), &5.into())
        .map_err(|e| e.to_string())?;
    let cf = expand(&alpha).map_err(|e| e.to_string())?;
    ensure(cf == golden_cf(), || format!("expansion was {cf:?}"))?;
    let q = denominators(&cf, 61);
    for (i, qi) in q.iter().enumerate() {
        ensure(*qi == fibonacci(i + 1), || format!("q_{i} = {qi} differs from F_{}", i + 1))?;
    }
    Ok(())
}

fn ac2() -> Check {
    let out = cli(&["search", "--K", "2", "--N-max", "40", "--a-max", "5", "--p", "-1", "--r", "2", "--d", "5"]);
    ensure(out.code == 0, || format!("exit {}", out.code))?;
    let sols: Vec<Solution> = out.stdout.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let hit = sols.iter().find(|s| s.value == BigInt::from(14_930_496u64));
    let hit = hit.ok_or("14930496 not found")?;
    ensure(hit.y == BigInt::from(3864) && hit.a == 2, || format!("{hit:?}"))?;
    ensure(hit.n == vec![35, 11], || format!("indices {:?}", hit.n))?;
    ensure(fibonacci(36) + fibonacci(12) == hit.value, || "F36 + F12 mismatch".into())?;
    let cf = golden_cf();
    ensure(sols.iter().all(|s| s.is_consistent(&cf)), || "inconsistent solution".into())
}

fn ac3() -> Check {
    let flagged: BTreeSet<BigInt> = (0..=60).map(fibonacci).filter(is_power_or_trivial).collect();
    let want: BTreeSet<BigInt> = [0, 1, 8, 144].into_iter().map(BigInt::from).collect();
    ensure(flagged == want, || format!("flagged {flagged:?}"))?;
    // Same answer through the searcher: q_i = F_{i+1} covers F_1 … F_60.
    let sols = enumerate_solutions(&golden_cf(), &SearchRange::new(1, 59, 64).unwrap()).map_err(|e| e.to_string())?;
    let values: BTreeSet<BigInt> = sols.into_iter().map(|s| s.value).collect();
    let want: BTreeSet<BigInt> = [8, 144].into_iter().map(BigInt::from).collect();
    ensure(values == want, || format!("search found {values:?}"))
}

fn ac4() -> Check {
    for (name, alpha) in random_irrationals(4, 20) {
        let cf = expand(&alpha).map_err(|e| e.to_string())?;
        let bd = binet_data(&cf, PREC).map_err(|e| format!("{name}: {e}"))?;
        let i_max = cf.r() + 4 * cf.s() + 200;
        ensure(verify_shifted_recurrence(&cf, &bd, i_max), || format!("{name}: recurrence fails"))?;
    }
    Ok(())
}

fn ac5() -> Check {
    for (name, alpha) in random_irrationals(4, 20) {
        let cf = expand(&alpha).map_err(|e| e.to_string())?;
        let bd = binet_data(&cf, PREC).map_err(|e| format!("{name}: {e}"))?;
        ensure(verify_binet(&cf, &bd, 200), || format!("{name}: Binet identity fails"))?;
    }
    Ok(())
}

fn ac6() -> Check {
    for (name, alpha) in random_irrationals(4, 20) {
        let cf = expand(&alpha).map_err(|e| e.to_string())?;
        let bd = binet_data(&cf, PREC).map_err(|e| format!("{name}: {e}"))?;
        let res = verify_growth(&cf, &bd, 500, PREC);
        ensure(res == GrowthCheck::Holds, || format!("{name}: {res:?}"))?;
    }
    Ok(())
}

fn ac7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (name, alpha) in random_irrationals(7, 10) {
        let cf = expand(&alpha).map_err(|e| e.to_string())?;
        for n in 0u32..100_000 {
            let n = BigInt::from(n);
            let rep = ostrowski_encode(&n, &cf);
            ensure(ostrowski_validate(&rep, &cf), || format!("{name}: {n} violates the digit conditions"))?;
            ensure(ostrowski_decode(&rep, &cf) == n, || format!("{name}: {n} does not round-trip"))?;
        }
        // The two characterizations agree on arbitrary digit strings too.
        for _ in 0..5_000 {
            let len = rng.gen_range(1..=8);
            let digits: Vec<BigInt> = (0..len)
                .map(|i| {
                    let cap = cf.quotient(i + 1).to_u64().unwrap_or(4).min(6) + 1;
                    BigInt::from(rng.gen_range(0..=cap))
                })
                .collect();
            let a = ostrowski_conditions(&digits, &cf);
            let b = ostrowski_partial_sums(&digits, &cf);
            ensure(a == b, || format!("{name}: characterizations differ on {digits:?}"))?;
        }
    }
    let cf = ContinuedFraction::from_u64s(0, &[3], &[1]).unwrap();
    let six = ostrowski_encode(&BigInt::from(6), &cf);
    let want: Vec<BigInt> = [2, 0, 1].into_iter().map(BigInt::from).collect();
    ensure(six.digits == want, || format!("6 encodes as {:?}", six.digits))?;
    let twice_q1: Vec<BigInt> = [0, 2].into_iter().map(BigInt::from).collect();
    ensure(!ostrowski_conditions(&twice_q1, &cf), || "2*q1 accepted".into())?;
    ensure(!ostrowski_partial_sums(&twice_q1, &cf), || "2*q1 passes the sum test".into())
}

fn ac8() -> Check {
    let iv = |x: i64| Interval::from_i64(x, PREC);
    let mut valid = 0;
    for a in [0, 10, 100] {
        for c in [1, 2, 3] {
            for g in [5, 10, 100] {
                let threshold = Interval::e(PREC).sqr().div(&iv(c)).unwrap().powi(c).unwrap();
                let res = pw_transfer(&iv(a), &iv(c), &iv(g));
                if !iv(g).certainly_gt(&threshold) {
                    ensure(res.is_err(), || format!("({a},{c},{g}) accepted below threshold"))?;
                    continue;
                }
                valid += 1;
                let bound = res.map_err(|e| e.to_string())?;
                let root = pw_largest_root(&iv(a), &iv(c), &iv(g)).map_err(|e| e.to_string())?;
                ensure(root.certainly_le(&bound), || format!("({a},{c},{g}): root {root} above {bound}"))?;
            }
        }
    }
    ensure(valid > 0, || "empty grid".into())?;
    let bound = pw_transfer(&iv(0), &iv(1), &iv(10)).unwrap().mid_f64();
    let root = pw_largest_root(&iv(0), &iv(1), &iv(10)).unwrap().mid_f64();
    ensure((bound - 46.0517).abs() < 1e-3, || format!("bound {bound}"))?;
    ensure((root - 35.7715).abs() < 1e-3, || format!("root {root}"))
}

fn matveev_oracle(t: u32, d: u32, a: &[f64], b: f64) -> (f64, f64) {
    let t1 = f64::from(t) + 1.0;
    let d = f64::from(d);
    let tail = d * d * (std::f64::consts::E * d).ln() * a.iter().product::<f64>() * (1.0 + b.ln());
    let gamma = -1.4 * 30f64.powi(t as i32 + 3) * t1.powf(4.5) * tail;
    let lambda = -2.0 * 30f64.powi(t as i32 + 4) * t1.powi(6) * tail;
    (gamma, lambda)
}

fn ac9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let t: u32 = rng.gen_range(1..=6);
        let d: u32 = rng.gen_range(1..=4);
        let a_hundredths: Vec<i64> = (0..t).map(|_| rng.gen_range(16..=5000)).collect();
        let b: i64 = rng.gen_range(1..=1_000_000);
        let a: Vec<Interval> = a_hundredths.iter().map(|&x| Interval::from_ratio(x, 100, PREC)).collect();
        let inst = LinFormInstance::new(t, d, a, Interval::from_i64(b, PREC)).map_err(|e| e.to_string())?;
        let af: Vec<f64> = a_hundredths.iter().map(|&x| x as f64 / 100.0).collect();
        let (g, l) = matveev_oracle(t, d, &af, b as f64);
        for (got, want, what) in [(matveev_gamma_bound(&inst), g, "gamma"), (matveev_lambda_bound(&inst), l, "lambda")] {
            let rel = ((got.mid_f64() - want) / want).abs();
            ensure(rel <= 1e-6, || format!("{what} T={t} D={d}: relative error {rel:e}"))?;
        }
    }
    Ok(())
}

fn ac10() -> Check {
    let q = |x: i64| BigRational::from_integer(x.into());
    for k in 2..=5 {
        for l in 2..=5 {
            for c12 in [10, 100] {
                for ln in [2, 10] {
                    let (c, g) = (q(c12), q(ln));
                    for path in full_paths(k, l) {
                        let st = walk_simulate(k, l, &c, &g, &WalkPath::Steps(path.clone())).map_err(|e| e.to_string())?;
                        ensure(check_walk(&st, k, l, &c, &g), || format!("k={k} l={l} path {path:?}"))?;
                        for (j, u) in st.u.iter().enumerate() {
                            ensure(*u <= lemma_bound(j, k, l, &c, &g), || format!("k={k} l={l} j={j}"))?;
                        }
                    }
                }
            }
        }
    }
    let st = walk_simulate(2, 2, &q(10), &q(2), &WalkPath::Worst).map_err(|e| e.to_string())?;
    ensure(st.u == vec![q(1), q(20), q(800), q(1_280_000)], || format!("{:?}", st.u))?;
    ensure(lemma_bound(3, 2, 2, &q(10), &q(2)) == q(2_560_000), || "closed form".into())
}

fn ac11() -> Check {
    let sqrt2 = sqrt2_cf();
    let bd = binet_data(&sqrt2, PREC).map_err(|e| e.to_string())?;
    let sols = enumerate_solutions(&sqrt2, &SearchRange::new(2, 30, 4).unwrap()).map_err(|e| e.to_string())?;
    ensure(!sols.is_empty(), || "no solutions to check".into())?;
    let ys: BTreeSet<BigInt> = sols.iter().map(|s| s.y.clone()).collect();
    for y in ys {
        let rep = theorem_y_bound(&bd, 2, &y, PREC).map_err(|e| e.to_string())?;
        ensure(verify_bounds(&sols, &rep, &bd), || format!("y-bound for y={y} fails"))?;
    }
    let ham = theorem_ham_bound(&bd, 2, 2, PREC).map_err(|e| e.to_string())?;
    ensure(verify_bounds(&sols, &ham, &bd), || "Zeckendorf bound fails".into())?;

    let phi = phi_cf();
    let bd_phi = binet_data(&phi, PREC).map_err(|e| e.to_string())?;
    let all = enumerate_solutions(&phi, &SearchRange::new(2, 30, 4).unwrap()).map_err(|e| e.to_string())?;
    let filtered = filter_by_weight(&all, &WeightFilter::Radix { l: 2, b: 10 });
    ensure(!filtered.is_empty(), || "no radix-filtered solutions".into())?;
    let ham2 = theorem_ham2_bound(&bd_phi, 2, 2, 10, PREC).map_err(|e| e.to_string())?;
    ensure(verify_bounds(&filtered, &ham2, &bd_phi), || "radix bound fails".into())?;

    // Negative control: a shrunken report must be rejected.
    let mut shrunk = ham.clone();
    shrunk.n1_bound = Interval::zero(PREC);
    shrunk.a_bound = Interval::one(PREC);
    ensure(!verify_bounds(&sols, &shrunk, &bd), || "shrunken report accepted".into())
}

fn ac12() -> Check {
    let bin = env!("CARGO_BIN_EXE_cfpow");
    let out = Command::new(bin)
        .args(["bounds", "ham", "--K", "2", "--l", "2", "--p", "1", "--q", "1", "--r", "2", "--d", "5"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(2), || format!("exit {:?}", out.status.code()))?;
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    ensure(v["error"] == "inapplicable", || format!("{v}"))?;
    for (name, alpha) in random_irrationals(12, 100) {
        let cf = expand(&alpha).map_err(|e| e.to_string())?;
        let bd = binet_data(&cf, 64).map_err(|e| format!("{name}: {e}"))?;
        ensure(petho_preconditions(&bd), || format!("{name}: preconditions fail"))?;
    }
    Ok(())
}

/// The JSON produced by a representative slice of every command.
fn pipeline_outputs(threads: &str) -> String {
    let golden = ["--p", "-1", "--r", "2", "--d", "5"];
    let phi = ["--p", "1", "--r", "2", "--d", "5"];
    let runs: Vec<Vec<&str>> = vec![
        [&["cf", "expand"][..], &golden].concat(),
        [&["cf", "convergents", "--n", "60"][..], &golden].concat(),
        vec!["cf", "binet", "--p", "3", "--q", "2", "--r", "7", "--d", "13"],
        vec!["rep", "zeckendorf", "--value", "14930496"],
        vec!["rep", "ostrowski", "--value", "99991", "--d", "7"],
        vec!["rep", "radix", "--value", "14930496", "--b", "7"],
        vec!["bounds", "y", "--K", "2", "--y", "2", "--d", "2"],
        [&["bounds", "y", "--K", "2", "--y", "3864"][..], &golden].concat(),
        vec!["bounds", "ham", "--K", "2", "--l", "2", "--d", "2"],
        [&["bounds", "ham2", "--K", "2", "--l", "2", "--b", "10"][..], &phi].concat(),
        [&["bounds", "ham"][..], &["--K", "2", "--l", "2"], &phi].concat(),
        [&["--threads", threads, "search", "--K", "2", "--N-max", "40", "--a-max", "5"][..], &golden].concat(),
        vec!["--threads", threads, "search", "--K", "3", "--N-max", "30", "--a-max", "4", "--d", "2"],
    ];
    runs.iter()
        .map(|args| {
            let out = cli(args);
            format!("{} {}", out.code, out.stdout)
        })
        .collect()
}

fn ac13() -> Check {
    let first = pipeline_outputs("1");
    let second = pipeline_outputs("4");
    ensure(first == second, || "outputs differ between runs".into())?;
    let bin = env!("CARGO_BIN_EXE_cfpow");
    let run = || {
        Command::new(bin)
            .args(["search", "--K", "2", "--N-max", "40", "--a-max", "5", "--p", "-1", "--r", "2", "--d", "5"])
            .output()
            .map(|o| o.stdout)
            .map_err(|e| e.to_string())
    };
    ensure(run()? == run()?, || "binary output differs between runs".into())
}

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Duration,
    run: fn() -> Check,
}

fn main() {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { id: 1, title: "golden continued fraction gives Fibonacci denominators", limit: secs(1), run: ac1 },
        Criterion { id: 2, title: "search finds 3864^2 = F36 + F12", limit: secs(60), run: ac2 },
        Criterion { id: 3, title: "Fibonacci powers up to F60 are 0, 1, 8, 144", limit: secs(10), run: ac3 },
        Criterion { id: 4, title: "shifted recurrence on 20 random irrationals", limit: secs(30), run: ac4 },
        Criterion { id: 5, title: "exact Binet representation on 20 random irrationals", limit: secs(30), run: ac5 },
        Criterion { id: 6, title: "certified growth sandwich up to i = 500", limit: secs(60), run: ac6 },
        Criterion { id: 7, title: "Ostrowski codec below 10^5 for 10 random irrationals", limit: secs(60), run: ac7 },
        Criterion { id: 8, title: "transfer bound dominates the largest root", limit: secs(5), run: ac8 },
        Criterion { id: 9, title: "Matveev evaluators against a float oracle", limit: secs(5), run: ac9 },
        Criterion { id: 10, title: "walk sequence below the closed form on all paths", limit: secs(5), run: ac10 },
        Criterion { id: 11, title: "bound pipelines dominate searched solutions", limit: secs(300), run: ac11 },
        Criterion { id: 12, title: "applicability gates", limit: secs(5), run: ac12 },
        Criterion { id: 13, title: "byte-identical output across runs", limit: secs(300), run: ac13 },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let res = std::panic::catch_unwind(c.run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let res = res.and_then(|()| {
            ensure(took <= c.limit, || format!("took {:.2} s, limit {} s", took.as_secs_f64(), c.limit.as_secs()))
        });
        match res {
            Ok(()) => println!("[PASS] AC-{}: {} ({:.2} s)", c.id, c.title, took.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("[FAIL] AC-{}: {} ({:.2} s): {why}", c.id, c.title, took.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
