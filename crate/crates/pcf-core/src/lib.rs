//! Solvers for prize-collecting forests with a prescribed component count,
//! and the sweep-cover planner built on top of them.
//!
//! The pipeline: [`moat::rootless_grow`] raises dual variables on all active
//! components simultaneously, recording an exact event log;
//! [`prune::rootless_prune`] cuts the grown forest into the best `k`
//! components by a double dynamic program over an auxiliary tree
//! ([`prune::solve_urpcf`]); [`rooted::solve_rpcf`] instead splits multi-root
//! trees and reverse-deletes, for instances with prescribed roots. Both carry
//! factor-2 guarantees of the strong (Lagrangian-multiplier-preserving) kind:
//! `w(F) + 2·pi(unspanned) <= 2·opt`. [`sweep::plan_sweep_cover`] turns the
//! unrooted solver into a sensors-plus-penalty planner with factor 5.
//! Everything is exact rational arithmetic; [`oracle`] holds the exhaustive
//! solvers that the guarantees are machine-checked against.

pub mod fixtures;
pub mod instance;
pub mod moat;
pub mod num;
pub mod oracle;
pub mod prune;
pub mod rooted;
pub mod sweep;

pub use instance::{
    cost_plus_penalty, generate_random, lmp_value, metric_closure, parse_instance,
    serialize_instance, Forest, Instance,
};
pub use moat::{check_dual_feasibility, rootless_grow, Growth};
pub use num::Num;
pub use prune::{build_aux_tree, net_worth, rootless_prune, solve_urpcf, RootedTree};
pub use rooted::{k_forest_step, reverse_delete, solve_rpcf};
pub use sweep::{plan_sweep_cover, scale_for_lmp, tree_to_cycle, verify_plan, SweepInstance};
