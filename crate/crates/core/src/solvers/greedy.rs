use std::collections::HashMap;

use crate::config::SolveConfig;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::par;
use crate::types::{AgentId, Matching, TupleSet};

/// `4κ·2^(4κ)`, or `None` on overflow.
pub fn greedy_threshold(kappa: usize) -> Option<u128> {
    let shift = u32::try_from(4 * kappa).ok()?;
    let pow = 1u128.checked_shl(shift).filter(|_| shift < 127)?;
    (4 * kappa as u128).checked_mul(pow)
}

/// Whether `d` is large enough for the greedy construction.
pub fn greedy_applies(kappa: usize, d: usize) -> bool {
    greedy_threshold(kappa).is_some_and(|t| t <= d as u128)
}

/// Evidence for one greedy step: `group` was the first choice (together
/// with the chooser) of `multiplicity` of the `candidates` inspected agents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedyStep {
    pub step: usize,
    pub group: TupleSet,
    pub multiplicity: usize,
    pub required: usize,
    pub candidates: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedyOutcome {
    pub matching: Matching,
    pub certificates: Vec<GreedyStep>,
}

/// Builds a stable matching when `4κ·2^(4κ) ≤ d`.
///
/// Each step looks at the first `d - 2κ` unmatched agents in the
/// approximating order, forms each one's favourite group among unmatched
/// agents, and commits the group chosen most often (ties go to the smallest
/// group). A group chosen by fewer than `max(1, 4κ)` agents is reported as
/// a certificate failure.
pub fn greedy_big_d_solve(inst: &Instance) -> Result<GreedyOutcome> {
    greedy_big_d_solve_with(inst, &SolveConfig::default())
}

pub fn greedy_big_d_solve_with(inst: &Instance, cfg: &SolveConfig) -> Result<GreedyOutcome> {
    if inst.poset().is_none() {
        return Err(Error::UnsupportedSource);
    }
    if !inst.is_complete() {
        return Err(Error::Incomplete);
    }
    let d = inst.d();
    let lpo = inst.lpo().expect("poset source");
    let kappa = lpo.kappa();
    if !greedy_applies(kappa, d) {
        return Err(Error::PreconditionViolated(format!(
            "greedy needs 4κ·2^(4κ) ≤ d, got κ = {kappa}, d = {d}"
        )));
    }
    let required = (4 * kappa).max(1);
    let n = inst.n();
    let mut matched = vec![false; n];
    let mut matched_list: Vec<AgentId> = Vec::new();
    let mut groups = Vec::new();
    let mut certificates = Vec::new();
    loop {
        let unmatched: Vec<AgentId> = lpo.order().iter().copied().filter(|a| !matched[a.index()]).collect();
        if unmatched.len() < d {
            break;
        }
        let inspected = &unmatched[..d - 2 * kappa];
        let choices = par::map(cfg.exec, inspected, |&a| {
            inst.first_choice(a, &matched_list).map(|t| t.with(a))
        });
        let mut counts: HashMap<TupleSet, usize> = HashMap::new();
        for t in choices {
            *counts.entry(t?).or_insert(0) += 1;
        }
        let (group, multiplicity) = counts
            .into_iter()
            .max_by(|(t1, c1), (t2, c2)| c1.cmp(c2).then_with(|| t2.cmp(t1)))
            .expect("at least one candidate");
        let step = certificates.len();
        if multiplicity < required {
            return Err(Error::CertificateFailure {
                step,
                multiplicity,
                required,
            });
        }
        for a in group.iter() {
            matched[a.index()] = true;
            matched_list.push(a);
        }
        certificates.push(GreedyStep {
            step,
            group: group.clone(),
            multiplicity,
            required,
            candidates: inspected.len(),
        });
        groups.push(group);
    }
    Ok(GreedyOutcome {
        matching: Matching::new(groups),
        certificates,
    })
}
