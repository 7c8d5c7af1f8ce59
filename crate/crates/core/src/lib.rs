//! Exact solvers for multidimensional stable roommates with master lists and
//! master posets.
//!
//! Agents rank sets of `d-1` other agents and a matching partitions (some of)
//! them into disjoint groups of size `d`. A matching is stable when no `d`
//! agents would all rather form a group together. Preferences come from
//! explicit lists, a master list of `(d-1)`-sets, or a master poset over the
//! agents from which every agent's list is derived.
//!
//! The crate provides poset parameters ([`poset`], [`distance`]), stability
//! checks and a brute-force oracle ([`stability`]), the polynomial and
//! parameterised solvers ([`solvers`]), constructive reductions
//! ([`reductions`]) and JSON/text formats ([`format`]).

#![allow(clippy::needless_range_loop)]

pub mod bipartite;
pub mod config;
pub mod distance;
pub mod error;
pub mod format;
pub mod instance;
mod par;
pub mod poset;
pub mod reductions;
pub mod solvers;
pub mod stability;
pub mod types;

pub use config::{Execution, Limits, SolveConfig};
pub use error::{Error, Result};
pub use instance::{default_names, Instance, PreferenceSource, TieBreak};
pub use poset::{validate_poset, verify_lpo, LpoOrder, Poset};
pub use types::{AgentId, Matching, TupleSet};
