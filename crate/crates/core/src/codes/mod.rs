//! Evaluation codes on a variety and their weight oracles.

mod code;
pub mod linalg;
pub mod oracle;
mod table;
mod variety;

pub use code::{
    build_code, count_weight_one, evaluation_vector, hamming_weight, monomial_vector, weight_via_footprint,
    EvaluationCode,
};
pub use oracle::{
    coset_min_weight, min_distance, CosetMin, DistanceStrategy, MinDistance, OracleLimits, OracleMode,
};
pub use table::{construct_table, DeltaMap, TableRow};
pub use variety::{enumerate_variety, verify_fano, Point, Variety};
