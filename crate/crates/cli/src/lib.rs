//! Argument parsing and command dispatch for the `cfpow` binary.
//!
//! [`run`] never touches the process: it returns the exit code and the text
//! that belongs on standard output, which keeps it easy to test.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use cfpow::bounds::{theorem_ham2_bound, theorem_ham_bound, theorem_y_bound, BoundLimits};
use cfpow::cfrac::{binet_data, convergents, expand, BinetData, ContinuedFraction};
use cfpow::numeration::{ostrowski_encode, radix_encode, zeckendorf_encode};
use cfpow::search::{check_limits, enumerate_solutions_within, filter_by_weight, SearchRange, Solution, WeightFilter};
use cfpow::{make_quadnum, Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INAPPLICABLE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "cfpow", version, about = "Perfect powers in sums of convergent denominators of quadratic irrationals")]
pub struct Cli {
    /// Working precision in bits for interval arithmetic.
    #[arg(long, global = true, env = "CFPOW_PRECISION", default_value_t = 128)]
    pub precision: u32,
    /// Worker threads for the search (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

/// The quadratic irrational `(p + q·√D)/r`.
#[derive(Args, Debug, Clone)]
pub struct AlphaArgs {
    #[arg(long, allow_negative_numbers = true, default_value = "0")]
    pub p: BigInt,
    #[arg(long, allow_negative_numbers = true, default_value = "1")]
    pub q: BigInt,
    #[arg(long, allow_negative_numbers = true, default_value = "1")]
    pub r: BigInt,
    #[arg(long = "d", visible_alias = "D", allow_negative_numbers = true)]
    pub d: BigInt,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Continued-fraction data of α.
    Cf {
        #[command(subcommand)]
        action: CfAction,
    },
    /// Encode an integer in a numeration system.
    Rep(RepArgs),
    /// Effective bounds on n1, a and log(y^a).
    Bounds {
        #[command(subcommand)]
        theorem: BoundsCmd,
    },
    /// Exhaustive search; prints one JSON object per solution.
    Search(SearchArgs),
    /// Check solutions against a bound report.
    Verify {
        #[arg(long)]
        solutions: PathBuf,
        #[arg(long)]
        report: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum CfAction {
    Expand(AlphaArgs),
    Convergents {
        #[command(flatten)]
        alpha: AlphaArgs,
        /// Largest index to list.
        #[arg(long)]
        n: usize,
    },
    Binet(AlphaArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepKind {
    Ostrowski,
    Zeckendorf,
    Radix,
}

#[derive(Args, Debug)]
pub struct RepArgs {
    pub kind: RepKind,
    #[arg(long)]
    pub value: BigInt,
    /// Base for `radix`.
    #[arg(long, default_value_t = 10)]
    pub b: u64,
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<BigInt>,
    #[arg(long, allow_negative_numbers = true)]
    pub q: Option<BigInt>,
    #[arg(long, allow_negative_numbers = true)]
    pub r: Option<BigInt>,
    #[arg(long = "d", visible_alias = "D")]
    pub d: Option<BigInt>,
}

#[derive(Subcommand, Debug)]
pub enum BoundsCmd {
    Y {
        #[command(flatten)]
        alpha: AlphaArgs,
        #[arg(long = "K")]
        k: usize,
        #[arg(long)]
        y: BigInt,
    },
    Ham {
        #[command(flatten)]
        alpha: AlphaArgs,
        #[arg(long = "K")]
        k: usize,
        #[arg(long)]
        l: usize,
    },
    Ham2 {
        #[command(flatten)]
        alpha: AlphaArgs,
        #[arg(long = "K")]
        k: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        b: u64,
    },
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[command(flatten)]
    pub alpha: AlphaArgs,
    #[arg(long = "K")]
    pub k: usize,
    #[arg(long = "N-max")]
    pub n_max: usize,
    #[arg(long = "a-max")]
    pub a_max: u32,
    /// Keep solutions whose y has Zeckendorf weight at most L.
    #[arg(long = "filter-zeckendorf", value_name = "L", conflicts_with = "filter_radix")]
    pub filter_zeckendorf: Option<usize>,
    /// Keep solutions whose y has at most L nonzero base-B digits.
    #[arg(long = "filter-radix", value_name = "L,B")]
    pub filter_radix: Option<String>,
    /// Maximum number of index tuples to examine.
    #[arg(long, default_value_t = cfpow::search::DEFAULT_BUDGET)]
    pub budget: u64,
}

/// Exit code plus standard-output text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

impl Outcome {
    fn ok(v: &Value) -> Self {
        Outcome { code: EXIT_OK, stdout: format!("{v}\n") }
    }

    fn error(code: &str, detail: String, exit: i32) -> Self {
        let v = json!({ "error": code, "detail": detail });
        Outcome { code: exit, stdout: format!("{v}\n") }
    }

    fn from_error(e: &Error) -> Self {
        let exit = match e {
            Error::Inapplicable(_) => EXIT_INAPPLICABLE,
            _ => EXIT_PRECONDITION,
        };
        Outcome::error(e.code(), e.to_string(), exit)
    }
}

impl AlphaArgs {
    pub fn continued_fraction(&self) -> Result<ContinuedFraction, Error> {
        if self.r == BigInt::from(0) {
            return Err(Error::InvalidInput("r must be nonzero".into()));
        }
        let a = BigRational::new(self.p.clone(), self.r.clone());
        let b = BigRational::new(self.q.clone(), self.r.clone());
        expand(&make_quadnum(a, b, &self.d)?)
    }

    fn binet(&self, prec: u32) -> Result<BinetData, Error> {
        binet_data(&self.continued_fraction()?, prec)
    }
}

fn parse_radix_filter(text: &str) -> Result<WeightFilter, Error> {
    let bad = || Error::InvalidInput(format!("--filter-radix expects L,B but got {text:?}"));
    let (l, b) = text.split_once(',').ok_or_else(bad)?;
    let l = l.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim().parse().map_err(|_| bad())?;
    if b < 2 {
        return Err(Error::InvalidInput("radix base must be at least 2".into()));
    }
    Ok(WeightFilter::Radix { l, b })
}

fn solution_lines(sols: &[Solution]) -> String {
    sols.iter()
        .map(|s| serde_json::to_string(s).expect("solutions serialize") + "\n")
        .collect()
}

fn run_search(args: &SearchArgs) -> Result<Outcome, Error> {
    let cf = args.alpha.continued_fraction()?;
    let range = SearchRange::new(args.k, args.n_max, args.a_max)?;
    let filter = match (&args.filter_zeckendorf, &args.filter_radix) {
        (Some(l), _) => Some(WeightFilter::Zeckendorf { l: *l }),
        (None, Some(text)) => Some(parse_radix_filter(text)?),
        (None, None) => None,
    };
    let apply = |sols: Vec<Solution>| match &filter {
        Some(f) => filter_by_weight(&sols, f),
        None => sols,
    };
    match enumerate_solutions_within(&cf, &range, args.budget) {
        Ok(sols) => Ok(Outcome { code: EXIT_OK, stdout: solution_lines(&apply(sols)) }),
        Err(Error::BudgetExceeded { budget, next_n1, partial }) => {
            let e = Error::BudgetExceeded { budget, next_n1, partial: Vec::new() };
            let mut out = Outcome::from_error(&e);
            out.stdout = solution_lines(&apply(partial)) + &out.stdout;
            Ok(out)
        }
        Err(e) => Err(e),
    }
}

fn read_json_lines(path: &PathBuf) -> Result<Vec<Solution>, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| Error::InvalidInput(format!("bad solution line: {e}"))))
        .collect()
}

fn run_verify(solutions: &PathBuf, report: &PathBuf) -> Result<Outcome, Error> {
    let sols = read_json_lines(solutions)?;
    let text = std::fs::read_to_string(report)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", report.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("bad report: {e}")))?;
    let limits = BoundLimits::from_json(&v)?;
    let check = check_limits(&sols, &limits);
    let out = json!({
        "ok": check.ok(),
        "checked": check.checked,
        "skipped": check.skipped,
        "violations": check.violations,
    });
    let mut res = Outcome::ok(&out);
    if !check.ok() {
        res.code = EXIT_VERIFY_FAILED;
    }
    Ok(res)
}

fn dispatch(cli: &Cli) -> Result<Outcome, Error> {
    let prec = cli.precision;
    match &cli.command {
        Command::Cf { action } => match action {
            CfAction::Expand(alpha) => Ok(Outcome::ok(&json!(alpha.continued_fraction()?))),
            CfAction::Convergents { alpha, n } => {
                Ok(Outcome::ok(&json!(convergents(&alpha.continued_fraction()?, *n))))
            }
            CfAction::Binet(alpha) => Ok(Outcome::ok(&alpha.binet(prec)?.to_json())),
        },
        Command::Rep(args) => {
            if args.value < BigInt::from(0) {
                return Err(Error::InvalidInput("value must be non-negative".into()));
            }
            match args.kind {
                RepKind::Ostrowski => {
                    let d = args
                        .d
                        .clone()
                        .ok_or_else(|| Error::InvalidInput("ostrowski needs --d (and optionally --p --q --r)".into()))?;
                    let alpha = AlphaArgs {
                        p: args.p.clone().unwrap_or_else(|| 0.into()),
                        q: args.q.clone().unwrap_or_else(|| 1.into()),
                        r: args.r.clone().unwrap_or_else(|| 1.into()),
                        d,
                    };
                    let cf = alpha.continued_fraction()?;
                    Ok(Outcome::ok(&json!(ostrowski_encode(&args.value, &cf))))
                }
                RepKind::Zeckendorf | RepKind::Radix if args.value == BigInt::from(0) => {
                    Err(Error::InvalidInput("value must be positive".into()))
                }
                RepKind::Zeckendorf => Ok(Outcome::ok(&json!(zeckendorf_encode(&args.value)))),
                RepKind::Radix => {
                    if args.b < 2 {
                        return Err(Error::InvalidInput("radix base must be at least 2".into()));
                    }
                    Ok(Outcome::ok(&json!(radix_encode(&args.value, args.b))))
                }
            }
        }
        Command::Bounds { theorem } => {
            let report = match theorem {
                BoundsCmd::Y { alpha, k, y } => theorem_y_bound(&alpha.binet(prec)?, *k, y, prec)?,
                BoundsCmd::Ham { alpha, k, l } => theorem_ham_bound(&alpha.binet(prec)?, *k, *l, prec)?,
                BoundsCmd::Ham2 { alpha, k, l, b } => theorem_ham2_bound(&alpha.binet(prec)?, *k, *l, *b, prec)?,
            };
            Ok(Outcome::ok(&report.to_json()))
        }
        Command::Search(args) => {
            let work = || run_search(args);
            match cli.threads {
                Some(n) => rayon::ThreadPoolBuilder::new()
                    .num_threads(n.max(1))
                    .build()
                    .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?
                    .install(work),
                None => work(),
            }
        }
        Command::Verify { solutions, report } => run_verify(solutions, report),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: EXIT_OK, stdout: e.to_string() }
                }
                _ => Outcome::error("invalid-arguments", e.to_string().trim().to_string(), EXIT_PRECONDITION),
            };
        }
    };
    if cli.precision < 32 {
        return Outcome::error("invalid-input", "precision must be at least 32 bits".into(), EXIT_PRECONDITION);
    }
    match dispatch(&cli) {
        Ok(out) => out,
        Err(e) => Outcome::from_error(&e),
    }
}
