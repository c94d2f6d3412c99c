//! Refutation modules, clash-time bounds, message accounting and the
//! expected-runtime cost model.

mod accounting;
mod bounds;
mod cost;
mod modules;

pub use accounting::{account_messages, MessageAccount, BITS_PER_MESSAGE};
pub use bounds::{check_bounds, check_bounds_with_cap, BoundReport};
pub use cost::{condition_star, expected_runtime_bound, CostModel};
pub use modules::{
    enumerate_refutation_modules, minimal_refutation_module, RefutationModule, DEFAULT_MODULE_CAP,
};
