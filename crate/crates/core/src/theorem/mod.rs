//! End-to-end verifiers, example families, the Sharkovskii order and a fuzz generator.

mod examples;
mod fuzz;
mod report;
mod sharkovskii;
mod verify;

pub use examples::{
    example_degree_zero, example_negative_degree, example_zero_arrows, example_zero_coordinate_count,
    example_zero_odd_loops, loop_from_labels, ExampleZero,
};
pub use fuzz::{interpolating_lift, planted_case, random_large_orbit, random_pl_lift, FuzzCase};
pub use report::{Check, Status, VerificationReport};
pub use sharkovskii::{is_sharkovskii_tail, sharkovskii_forces, sharkovskii_sorted};
pub use verify::{
    fuzz_theorem_d1, verify_chained_remark, verify_example_negative, verify_example_zero, verify_example_zero_with,
    verify_theorem_d1, verify_theorem_dge2, DEFAULT_PERIOD_MAX, THEOREM_DENOMINATOR_BOUND,
};
