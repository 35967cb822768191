//! Lower bounds on the weight of a class of polynomials with a fixed leading
//! monomial, from case splits on symbolic coefficients.

mod constraints;
mod search;
mod trace;
mod verify;

pub use constraints::{ConstraintStore, Satisfiability, EXHAUSTIVE_VARS};
pub use search::{auto_search, Budget};
pub use trace::{divisor_name, parse_trace, Action, Divisor, Step, Trace};
pub use verify::{
    divisibility_bound, figure2_map, instantiate_and_check, param_reduce_step, upset_in_footprint, verify_trace,
    BoundReport, ClassContext, InstanceReport, LeafReport, LeafStatus,
};
