pub mod bounds;
pub mod cfrac;
pub mod error;
pub mod heights;
pub mod json;
pub mod linforms;
pub mod numeration;
pub mod quadfield;
pub mod search;

pub use cfrac::{binet_data, convergents, expand, BinetData, ContinuedFraction, ConvergentTable};
pub use error::{Error, Result};
pub use quadfield::{make_quadnum, Dyadic, DyadicInterval, Interval, QuadNum, Round};
pub use bounds::{
    theorem_ham2_bound, theorem_ham_bound, theorem_y_bound, walk_simulate, BoundCase, BoundLimits, BoundReport,
    BoundVariant, ConstantLedger, WalkPath, WalkState,
};
pub use linforms::{pw_largest_root, pw_transfer, LinFormInstance};
pub use numeration::{OstrowskiRep, RadixRep, ZeckendorfRep};
pub use search::{enumerate_solutions, filter_by_weight, verify_bounds, SearchRange, Solution, WeightFilter};
