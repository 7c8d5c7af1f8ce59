//! Deciding whether a profile is derived from a strict order, and the
//! deletion distance to such a profile.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use crate::config::SolveConfig;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::par;
use crate::poset::Poset;
use crate::types::{for_each_subset, AgentId, TupleSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrictOrderRecovery {
    /// The profile is derived from this order, best agent first.
    Found(Vec<AgentId>),
    /// Single-swap comparisons force a cyclic relation.
    Conflict { cycle: Vec<AgentId> },
    /// The forced relation is acyclic but its extension does not explain
    /// the profile of `agent`.
    Rejected { order: Vec<AgentId>, agent: AgentId },
}

impl StrictOrderRecovery {
    pub fn order(&self) -> Option<&[AgentId]> {
        match self {
            StrictOrderRecovery::Found(o) => Some(o),
            _ => None,
        }
    }
}

/// `forced[b][c]` is set when some agent ranks `S ∪ {b}` above `S ∪ {c}`,
/// which any witnessing strict order must explain by `b ≻ c`.
fn swap_constraints(inst: &Instance) -> Result<Vec<Vec<bool>>> {
    let n = inst.n();
    let mut forced = vec![vec![false; n]; n];
    for x in 0..n {
        let x = AgentId::from(x);
        let list = inst.preference_list(x)?;
        let rank: HashMap<&TupleSet, usize> = list.iter().enumerate().map(|(r, t)| (t, r)).collect();
        for (r, t) in list.iter().enumerate() {
            for b in t.iter() {
                let base = t.without(b);
                for c in 0..n {
                    let c = AgentId::from(c);
                    if c == x || t.contains(c) {
                        continue;
                    }
                    if let Some(&r2) = rank.get(&base.with(c)) {
                        if r < r2 {
                            forced[b.index()][c.index()] = true;
                        }
                    }
                }
            }
        }
    }
    Ok(forced)
}

fn find_cycle(forced: &[Vec<bool>]) -> Option<Vec<AgentId>> {
    let n = forced.len();
    // 0 = new, 1 = on stack, 2 = done
    let mut state = vec![0u8; n];
    let mut stack: Vec<usize> = Vec::new();
    fn dfs(v: usize, forced: &[Vec<bool>], state: &mut [u8], stack: &mut Vec<usize>) -> Option<Vec<usize>> {
        state[v] = 1;
        stack.push(v);
        for w in 0..forced.len() {
            if !forced[v][w] {
                continue;
            }
            if state[w] == 1 {
                let pos = stack.iter().position(|&u| u == w).expect("on stack");
                return Some(stack[pos..].to_vec());
            }
            if state[w] == 0 {
                if let Some(c) = dfs(w, forced, state, stack) {
                    return Some(c);
                }
            }
        }
        stack.pop();
        state[v] = 2;
        None
    }
    (0..n).find_map(|v| {
        if state[v] == 0 {
            dfs(v, forced, &mut state, &mut stack)
        } else {
            None
        }
    })
    .map(|c| c.into_iter().map(AgentId::from).collect())
}

/// Finds a strict order from which the profile is derived, if the
/// single-swap constraints allow one.
///
/// Pairs left unconstrained are ordered smallest index first; the resulting
/// order is then checked against the whole profile.
pub fn recover_strict_order(inst: &Instance) -> Result<StrictOrderRecovery> {
    let n = inst.n();
    let forced = swap_constraints(inst)?;
    if let Some(cycle) = find_cycle(&forced) {
        return Ok(StrictOrderRecovery::Conflict { cycle });
    }
    let mut indeg = vec![0usize; n];
    for row in &forced {
        for (c, &f) in row.iter().enumerate() {
            indeg[c] += f as usize;
        }
    }
    let mut ready: BinaryHeap<Reverse<usize>> = (0..n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(v)) = ready.pop() {
        order.push(AgentId::from(v));
        for c in 0..n {
            if forced[v][c] {
                indeg[c] -= 1;
                if indeg[c] == 0 {
                    ready.push(Reverse(c));
                }
            }
        }
    }
    let poset = Poset::from_ranking(&order)?;
    match (0..n).find(|&a| !inst.agent_derived_from_poset(AgentId::from(a), &poset)) {
        None => Ok(StrictOrderRecovery::Found(order)),
        Some(a) => Ok(StrictOrderRecovery::Rejected {
            order,
            agent: AgentId::from(a),
        }),
    }
}

/// A smallest deletion set and the strict order explaining what remains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deletion {
    pub lambda: usize,
    /// Deleted agents, ascending.
    pub witness: Vec<AgentId>,
    /// Order of the remaining agents (original indices), best first.
    pub order: Vec<AgentId>,
}

/// The minimum number of agents whose deletion leaves a profile derived
/// from a strict order, searching deletion sets by size and then
/// lexicographically.
pub fn deletion_distance(inst: &Instance, max_budget: usize) -> Result<Deletion> {
    deletion_distance_with(inst, max_budget, &SolveConfig::default())
}

pub fn deletion_distance_with(inst: &Instance, max_budget: usize, cfg: &SolveConfig) -> Result<Deletion> {
    let n = inst.n();
    let all: Vec<u32> = (0..n as u32).collect();
    for size in 0..=max_budget.min(n) {
        let mut subsets = Vec::new();
        for_each_subset(&all, size, |s| {
            subsets.push(s.to_vec());
            true
        });
        let hit = par::find_map_first(cfg.exec, subsets.len(), |i| match try_deletion(inst, &subsets[i]) {
            Ok(None) => None,
            Ok(Some(order)) => Some(Ok((i, order))),
            Err(e) => Some(Err(e)),
        });
        if let Some(found) = hit {
            let (i, order) = found?;
            return Ok(Deletion {
                lambda: size,
                witness: subsets[i].iter().map(|&a| AgentId(a)).collect(),
                order,
            });
        }
    }
    Err(Error::BudgetExceeded { budget: max_budget })
}

/// The remaining agents' order if deleting `removed` leaves a profile
/// derived from a strict order.
fn try_deletion(inst: &Instance, removed: &[u32]) -> Result<Option<Vec<AgentId>>> {
    let kept: Vec<AgentId> = (0..inst.n() as u32)
        .filter(|a| !removed.contains(a))
        .map(AgentId)
        .collect();
    if kept.len() < inst.d() {
        // No agent ranks anything.
        return Ok(Some(kept));
    }
    let ids: Vec<AgentId> = removed.iter().map(|&a| AgentId(a)).collect();
    let sub = inst.without_agents(&ids)?;
    Ok(recover_strict_order(&sub)?
        .order()
        .map(|o| o.iter().map(|a| kept[a.index()]).collect()))
}
