//! Constructive toolkit for graceful and near-graceful labelings of two
//! nested cycles graphs and conservative / near-conservative labelings of
//! snowflake trees, with independent verifiers and a backtracking oracle.

pub mod error;
pub mod graph;
pub mod io;
pub mod labeling;
pub mod nested;
pub mod oracle;
pub mod skolem;
pub mod snowflake;

pub use error::{Error, Result};
pub use graph::{semidual, Graph, SemidualMap, Snowflake, SnowflakeParity, TwoNestedGraph};
pub use labeling::{
    induce_semidual_labeling, shift_labels, verify_eulerian, verify_graceful,
    verify_kt_conservative, vertex_sum, Arc, Condition, OrientedLabeling, VerifierReport,
    VertexLabeling, Violation,
};
pub use nested::{
    base_edge_labels, build_two_nested, compute_params, construct, m2_lower_bound, NestedLabeling,
    NestedParams,
};
pub use oracle::{
    run_campaign, run_instance, search_conservative, search_graceful, search_signs, search_skolem,
    CampaignRecord, Instance, SearchBudget, SearchOutcome, SearchRun,
};
pub use skolem::{
    make_zero_sum, negate_block, order_r_prime, hooked_order6_pairing, skolem_pairing, system_35,
    system_from_pairing, table1_pairing, verify_r_order, verify_r_prime_order,
    verify_r_prime_order_at, verify_system,
    verify_zero_sum, zero_sum_system, zero_sum_system_35, SkolemPairing, SkolemSystem,
    ZeroSumSystem,
};
pub use snowflake::{
    attach, construct_conservative, decompose, even_block_shifted, even_snowflake, mixed_minimum,
    odd_center_large_sum, odd_center_small_sum, star_eulerian, two_star_center, BlockLabeling,
    ConservativeLabeling, Decomposition, MixedOutcome, Provenance, ShiftedVariant, StarAssignment,
    StarVariant, Weld, WindowShape,
};
