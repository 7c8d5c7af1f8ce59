//! Sliding-window dynamic program over local matchings.
//!
//! Agents are processed along the approximating order `a_0, a_1, …`. After
//! step `p` a state records every group that meets the window
//! `[p-k, p]` (groups are stored by order position); groups lying entirely
//! to the left are forgotten, which is what keeps the table small. At step
//! `p` agent `a_p` either already belongs to a group, stays unmatched, or
//! opens a group with `d-1` free agents at most `span` positions ahead.
//! Every `d`-set containing `a_p` and otherwise drawn from
//! `a_{p-k-1}, …, a_{p-1}` is then checked for blocking, so the first
//! window checks every set inside `a_0, …, a_k` and each later step checks
//! the sets among `a_{p-k-1}, …, a_p` that contain the newly added agent.

use std::collections::HashMap;

use crate::config::SolveConfig;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::par;
use crate::stability::{blocks, find_blocking_with};
use crate::types::{binomial, for_each_subset, AgentId, Matching, TupleSet};

/// Largest gap between consecutive members (in the approximating order) of
/// a group of any stable matching: `2κd² + 4κ + 3d + 1`.
pub fn locality_bound(kappa: usize, d: usize) -> usize {
    2 * kappa * d * d + 4 * kappa + 3 * d + 1
}

/// Window size `k = 2d(d-1)·locality_bound(κ, d)`.
pub fn window_size(kappa: usize, d: usize) -> usize {
    2 * d * (d - 1) * locality_bound(kappa, d)
}

/// Result of a dynamic-program run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpOutcome {
    pub matching: Option<Matching>,
    /// Window size used.
    pub window: usize,
    /// Maximum distance between the first and last member of a group.
    pub span: usize,
    /// Whether the window meets the proven bound (or covers all agents), in
    /// which case a `None` verdict is exact.
    pub exact: bool,
    /// Largest number of states kept at one step.
    pub peak_states: usize,
}

struct Node {
    key: Vec<u32>,
    pred: u32,
    added: Option<Vec<u32>>,
}

/// A stable matching of a complete poset-derived instance, or `None` if
/// there is none.
pub fn fpt_dp_solve(inst: &Instance) -> Result<Option<Matching>> {
    Ok(fpt_dp_solve_with(inst, &SolveConfig::default())?.matching)
}

pub fn fpt_dp_solve_with(inst: &Instance, cfg: &SolveConfig) -> Result<DpOutcome> {
    if inst.poset().is_none() {
        return Err(Error::UnsupportedSource);
    }
    if !inst.is_complete() {
        return Err(Error::Incomplete);
    }
    let n = inst.n();
    let d = inst.d();
    let lpo = inst.lpo().expect("poset source");
    let kappa = lpo.kappa();
    let full = window_size(kappa, d);
    let k = cfg.window_override.unwrap_or(full).max(d - 1);
    let covered = (k + 1).min(n);
    if covered > cfg.limits.window_cap {
        return Err(Error::WindowTooLarge {
            window: covered,
            cap: cfg.limits.window_cap,
        });
    }
    let span = (d * locality_bound(kappa, d)).min(k);
    let exact = k >= full || k + 1 >= n;
    let agent_of: Vec<u32> = lpo.order().iter().map(|a| a.0).collect();

    let mut layers: Vec<Vec<Node>> = Vec::with_capacity(n + 1);
    layers.push(vec![Node {
        key: Vec::new(),
        pred: 0,
        added: None,
    }]);
    let mut peak = 1;
    for p in 0..n {
        let prev = layers.last().expect("initial layer");
        let succ = par::map(cfg.exec, prev, |node| {
            successors(inst, &agent_of, &node.key, p, k, span)
        });
        let mut index: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut layer = Vec::new();
        for (pi, list) in succ.into_iter().enumerate() {
            for (key, added) in list {
                if index.contains_key(&key) {
                    continue;
                }
                index.insert(key.clone(), layer.len() as u32);
                layer.push(Node {
                    key,
                    pred: pi as u32,
                    added,
                });
            }
        }
        if layer.len() > cfg.limits.max_dp_states {
            return Err(Error::TooLarge {
                what: "dynamic program states",
                count: layer.len() as u128,
                limit: cfg.limits.max_dp_states as u128,
            });
        }
        peak = peak.max(layer.len());
        let empty = layer.is_empty();
        layers.push(layer);
        if empty {
            break;
        }
    }

    let matching = if layers.len() == n + 1 && !layers[n].is_empty() {
        let mut groups = Vec::new();
        let mut idx = 0u32;
        for p in (1..=n).rev() {
            let node = &layers[p][idx as usize];
            if let Some(g) = &node.added {
                groups.push(to_agents(&agent_of, g));
            }
            idx = node.pred;
        }
        Some(Matching::new(groups))
    } else {
        None
    };

    if let Some(m) = &matching {
        if binomial(n as u64, d as u64) <= cfg.limits.max_groups {
            if let Some(b) = find_blocking_with(inst, m, cfg)? {
                return Err(Error::WitnessRejected {
                    blocking: b.group.as_slice().iter().map(|&a| a as usize).collect(),
                });
            }
        }
    }
    Ok(DpOutcome {
        matching,
        window: k,
        span,
        exact,
        peak_states: peak,
    })
}

fn to_agents(agent_of: &[u32], positions: &[u32]) -> TupleSet {
    let mut v: Vec<usize> = positions.iter().map(|&q| agent_of[q as usize] as usize).collect();
    v.sort_unstable();
    TupleSet::new(v).expect("distinct positions")
}

/// Successor states of `key` at step `p`, each with the group it opens.
fn successors(
    inst: &Instance,
    agent_of: &[u32],
    key: &[u32],
    p: usize,
    k: usize,
    span: usize,
) -> Vec<(Vec<u32>, Option<Vec<u32>>)> {
    let n = inst.n();
    let d = inst.d();
    let groups: Vec<&[u32]> = key.chunks(d).collect();
    let taken = |q: usize| groups.iter().any(|g| g.contains(&(q as u32)));

    let mut options: Vec<Option<Vec<u32>>> = vec![None];
    if !taken(p) {
        let hi = (p + span).min(n - 1);
        let free: Vec<u32> = (p + 1..=hi).filter(|&q| !taken(q)).map(|q| q as u32).collect();
        for_each_subset(&free, d - 1, |s| {
            let mut g = Vec::with_capacity(d);
            g.push(p as u32);
            g.extend_from_slice(s);
            options.push(Some(g));
            true
        });
    }

    let lo = p.saturating_sub(k + 1);
    let mut out = Vec::new();
    let mut partners: Vec<Option<TupleSet>> = vec![None; n];
    for added in options {
        let mut all: Vec<&[u32]> = groups.clone();
        if let Some(g) = &added {
            all.push(g);
        }
        for slot in partners.iter_mut() {
            *slot = None;
        }
        for g in &all {
            let members = to_agents(agent_of, g);
            for a in members.iter() {
                partners[a.index()] = Some(members.without(a));
            }
        }
        let window: Vec<u32> = (lo..p).map(|q| q as u32).collect();
        let mut stable = true;
        let mut cand = vec![0u32; d];
        for_each_subset(&window, d - 1, |s| {
            cand[..d - 1].copy_from_slice(s);
            cand[d - 1] = p as u32;
            let g = to_agents(agent_of, &cand);
            if blocks(inst, &partners, g.as_slice()) {
                stable = false;
            }
            stable
        });
        if !stable {
            continue;
        }
        // Keep the groups that still meet the next window.
        let keep_from = p.saturating_sub(k) as u32;
        let mut kept: Vec<&[u32]> = all
            .into_iter()
            .filter(|g| *g.last().expect("nonempty") >= keep_from)
            .collect();
        kept.sort_unstable();
        out.push((kept.concat(), added));
    }
    out
}

/// Whether every group spans at most `span` positions of the order.
pub fn is_local(inst: &Instance, m: &Matching, span: usize) -> bool {
    let Some(lpo) = inst.lpo() else {
        return false;
    };
    m.groups().iter().all(|g| {
        let pos: Vec<u32> = g.iter().map(|a: AgentId| lpo.position(a)).collect();
        let lo = *pos.iter().min().expect("nonempty");
        let hi = *pos.iter().max().expect("nonempty");
        (hi - lo) as usize <= span
    })
}
