//! Exact solvers for poset-derived complete preferences and the dispatcher
//! choosing between them.

mod dp;
mod greedy;
mod strict;

pub use dp::{fpt_dp_solve, fpt_dp_solve_with, is_local, locality_bound, window_size, DpOutcome};
pub use greedy::{
    greedy_applies, greedy_big_d_solve, greedy_big_d_solve_with, greedy_threshold, GreedyOutcome, GreedyStep,
};
pub use strict::strict_order_solve;

use std::fmt;

use crate::config::SolveConfig;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::types::Matching;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Strict,
    Greedy,
    Dp,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Strict => "strict",
            Algorithm::Greedy => "greedy",
            Algorithm::Dp => "dp",
        })
    }
}

/// The solver the dispatcher uses for parameters `κ` and `d`.
pub fn choose_algorithm(kappa: usize, d: usize) -> Algorithm {
    if kappa == 0 {
        Algorithm::Strict
    } else if greedy_applies(kappa, d) {
        Algorithm::Greedy
    } else {
        Algorithm::Dp
    }
}

/// Strict orders are solved directly; when `d` is large compared to `κ` a
/// stable matching always exists and the greedy finds it; otherwise the
/// dynamic program decides.
pub fn auto_solve(inst: &Instance) -> Result<Option<Matching>> {
    Ok(auto_solve_with(inst, &SolveConfig::default())?.1)
}

pub fn auto_solve_with(inst: &Instance, cfg: &SolveConfig) -> Result<(Algorithm, Option<Matching>)> {
    let lpo = inst.lpo().ok_or(Error::UnsupportedSource)?;
    let algo = choose_algorithm(lpo.kappa(), inst.d());
    let m = match algo {
        Algorithm::Strict => Some(strict_order_solve(inst)?),
        Algorithm::Greedy => Some(greedy_big_d_solve_with(inst, cfg)?.matching),
        Algorithm::Dp => fpt_dp_solve_with(inst, cfg)?.matching,
    };
    Ok((algo, m))
}
