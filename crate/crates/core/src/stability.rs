//! Blocking sets, stability checks and the exhaustive solver.

use std::cmp::Ordering;

use crate::config::{Execution, SolveConfig};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::par;
use crate::types::{binomial, for_each_subset, AgentId, Matching, TupleSet};

/// Why one member of a blocking set joins it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evidence {
    pub agent: AgentId,
    /// Current partners, `None` if unmatched.
    pub current: Option<TupleSet>,
    /// The other members of the blocking set.
    pub preferred: TupleSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockingReport {
    pub group: TupleSet,
    pub evidence: Vec<Evidence>,
}

/// Current partners of every agent.
pub(crate) fn partner_table(inst: &Instance, m: &Matching) -> Vec<Option<TupleSet>> {
    let mut out = vec![None; inst.n()];
    for g in m.groups() {
        for a in g.iter() {
            out[a.index()] = Some(g.without(a));
        }
    }
    out
}

/// Whether the sorted `d`-set `g` blocks. Members of `g` must be acceptable
/// to each other.
#[inline]
pub(crate) fn blocks(inst: &Instance, partners: &[Option<TupleSet>], g: &[u32]) -> bool {
    g.iter().all(|&a| {
        let a = AgentId(a);
        match &partners[a.index()] {
            None => true,
            Some(cur) => {
                let rest = without(g, a);
                &rest != cur && inst.compare(a, &rest, cur) == Ordering::Less
            }
        }
    })
}

fn without(g: &[u32], a: AgentId) -> TupleSet {
    let v: smallvec::SmallVec<[u32; 8]> = g.iter().copied().filter(|&x| x != a.0).collect();
    TupleSet::from_sorted(&v)
}

fn report(partners: &[Option<TupleSet>], g: &[u32]) -> BlockingReport {
    let group = TupleSet::from_sorted(g);
    let evidence = group
        .iter()
        .map(|a| Evidence {
            agent: a,
            current: partners[a.index()].clone(),
            preferred: group.without(a),
        })
        .collect();
    BlockingReport { group, evidence }
}

/// Lexicographically least blocking set, or the first blocking acceptable
/// group for incomplete preferences.
fn least_blocking(
    inst: &Instance,
    partners: &[Option<TupleSet>],
    cfg: &SolveConfig,
) -> Result<Option<BlockingReport>> {
    let n = inst.n();
    let d = inst.d();
    if let Some(groups) = inst.acceptable_groups() {
        let hit = par::find_map_first(cfg.exec, groups.len(), |i| {
            blocks(inst, partners, groups[i].as_slice()).then_some(i)
        });
        return Ok(hit.map(|i| report(partners, groups[i].as_slice())));
    }
    let total = binomial(n as u64, d as u64);
    if total > cfg.limits.max_groups {
        return Err(Error::TooLarge {
            what: "candidate groups for a blocking scan",
            count: total,
            limit: cfg.limits.max_groups,
        });
    }
    let hit = par::find_map_first(cfg.exec, n, |first| {
        let rest: Vec<u32> = (first as u32 + 1..n as u32).collect();
        let mut found = None;
        let mut g = vec![first as u32; d];
        for_each_subset(&rest, d - 1, |s| {
            g[1..].copy_from_slice(s);
            if blocks(inst, partners, &g) {
                found = Some(g.clone());
                false
            } else {
                true
            }
        });
        found
    });
    Ok(hit.map(|g| report(partners, &g)))
}

/// The lexicographically least blocking `d`-set of `m`, if any.
pub fn find_blocking(inst: &Instance, m: &Matching) -> Result<Option<BlockingReport>> {
    find_blocking_with(inst, m, &SolveConfig::default())
}

pub fn find_blocking_with(
    inst: &Instance,
    m: &Matching,
    cfg: &SolveConfig,
) -> Result<Option<BlockingReport>> {
    inst.check_matching(m)?;
    least_blocking(inst, &partner_table(inst, m), cfg)
}

pub fn is_stable(inst: &Instance, m: &Matching) -> Result<bool> {
    Ok(find_blocking(inst, m)?.is_none())
}

pub fn is_stable_with(inst: &Instance, m: &Matching, cfg: &SolveConfig) -> Result<bool> {
    Ok(find_blocking_with(inst, m, cfg)?.is_none())
}

/// Whether the specific set `group` blocks `m`, with the evidence if so.
pub fn check_blocking(inst: &Instance, m: &Matching, group: &TupleSet) -> Result<Option<BlockingReport>> {
    inst.check_matching(m)?;
    if group.len() != inst.d() || group.as_slice().iter().any(|&a| a as usize >= inst.n()) {
        return Err(Error::InvalidMatching(format!(
            "{} is not a group of {} agents",
            inst.format_set(group),
            inst.d()
        )));
    }
    if group.iter().any(|a| !inst.is_acceptable(a, &group.without(a))) {
        return Ok(None);
    }
    let partners = partner_table(inst, m);
    Ok(blocks(inst, &partners, group.as_slice()).then(|| report(&partners, group.as_slice())))
}

/// Number of matchings leaving exactly `n mod d` agents unmatched.
fn complete_matching_count(n: usize, d: usize) -> u128 {
    let q = n / d;
    let mut count = binomial(n as u64, (n % d) as u64);
    let mut left = q * d;
    for _ in 0..q {
        count = count.saturating_mul(binomial(left as u64 - 1, d as u64 - 1));
        left -= d;
    }
    count
}

struct Enumerator<'a> {
    inst: &'a Instance,
    decided: Vec<bool>,
    matched: Vec<bool>,
    groups: Vec<TupleSet>,
    out: Vec<Matching>,
    limit: u128,
}

impl Enumerator<'_> {
    fn emit(&mut self) -> Result<()> {
        if self.out.len() as u128 >= self.limit {
            return Err(Error::TooLarge {
                what: "matchings for brute force",
                count: self.out.len() as u128 + 1,
                limit: self.limit,
            });
        }
        self.out.push(Matching::new(self.groups.clone()));
        Ok(())
    }

    fn take(&mut self, g: &[u32]) {
        for &a in g {
            self.decided[a as usize] = true;
            self.matched[a as usize] = true;
        }
        self.groups.push(TupleSet::from_sorted(g));
    }

    fn release(&mut self, g: &[u32]) {
        for &a in g {
            self.decided[a as usize] = false;
            self.matched[a as usize] = false;
        }
        self.groups.pop();
    }

    /// Complete preferences: every matching with `n div d` groups. The
    /// smallest undecided agent is either one of the `spare` unmatched
    /// agents or opens a group with later agents.
    fn complete(&mut self, from: usize, spare: usize) -> Result<()> {
        let n = self.inst.n();
        let d = self.inst.d();
        let Some(v) = (from..n).find(|&v| !self.decided[v]) else {
            return self.emit();
        };
        if spare > 0 {
            self.decided[v] = true;
            self.complete(v + 1, spare - 1)?;
            self.decided[v] = false;
        }
        let free: Vec<u32> = (v + 1..n).filter(|&w| !self.decided[w]).map(|w| w as u32).collect();
        let mut g = vec![v as u32; d];
        let mut choices = Vec::new();
        for_each_subset(&free, d - 1, |s| {
            g[1..].copy_from_slice(s);
            choices.push(g.clone());
            true
        });
        for g in choices {
            self.take(&g);
            self.complete(v + 1, spare)?;
            self.release(&g);
        }
        Ok(())
    }

    /// Incomplete preferences: every maximal packing of acceptable groups.
    /// Each group is chosen when its smallest member is reached.
    fn incomplete(&mut self, by_min: &[Vec<TupleSet>], from: usize) -> Result<()> {
        let n = self.inst.n();
        let Some(v) = (from..n).find(|&v| !self.decided[v]) else {
            let groups = self.inst.acceptable_groups().expect("incomplete instance");
            let maximal = groups
                .iter()
                .all(|g| g.as_slice().iter().any(|&a| self.matched[a as usize]));
            return if maximal { self.emit() } else { Ok(()) };
        };
        for g in &by_min[v] {
            if g.as_slice()[1..].iter().any(|&a| self.decided[a as usize]) {
                continue;
            }
            self.take(g.as_slice());
            self.incomplete(by_min, v + 1)?;
            self.release(g.as_slice());
        }
        self.decided[v] = true;
        self.incomplete(by_min, v + 1)?;
        self.decided[v] = false;
        Ok(())
    }
}

/// Every matching that could be stable: for complete preferences those
/// leaving fewer than `d` agents unmatched, otherwise the maximal packings.
pub(crate) fn enumerate_candidates(inst: &Instance, cfg: &SolveConfig) -> Result<Vec<Matching>> {
    let n = inst.n();
    let d = inst.d();
    let mut e = Enumerator {
        inst,
        decided: vec![false; n],
        matched: vec![false; n],
        groups: Vec::new(),
        out: Vec::new(),
        limit: cfg.limits.max_matchings,
    };
    match inst.acceptable_groups() {
        None => {
            if n > cfg.limits.max_brute_agents {
                return Err(Error::TooLarge {
                    what: "agents for brute force",
                    count: n as u128,
                    limit: cfg.limits.max_brute_agents as u128,
                });
            }
            let count = complete_matching_count(n, d);
            if count > cfg.limits.max_matchings {
                return Err(Error::TooLarge {
                    what: "matchings for brute force",
                    count,
                    limit: cfg.limits.max_matchings,
                });
            }
            e.complete(0, n % d)?;
        }
        Some(groups) => {
            let mut by_min: Vec<Vec<TupleSet>> = vec![Vec::new(); n];
            for g in groups {
                by_min[g.as_slice()[0] as usize].push(g.clone());
            }
            e.incomplete(&by_min, 0)?;
        }
    }
    Ok(e.out)
}

/// All stable matchings in canonical order.
pub fn enumerate_stable(inst: &Instance) -> Result<Vec<Matching>> {
    enumerate_stable_with(inst, &SolveConfig::default())
}

pub fn enumerate_stable_with(inst: &Instance, cfg: &SolveConfig) -> Result<Vec<Matching>> {
    let candidates = enumerate_candidates(inst, cfg)?;
    let mut stable = par::filter(cfg.exec, candidates, |m| {
        let partners = partner_table(inst, m);
        let seq = SolveConfig {
            exec: Execution::Sequential,
            ..cfg.clone()
        };
        matches!(least_blocking(inst, &partners, &seq), Ok(None))
    });
    stable.sort_unstable();
    Ok(stable)
}

/// The first stable matching in canonical order, if one exists.
pub fn brute_force_solve(inst: &Instance) -> Result<Option<Matching>> {
    brute_force_solve_with(inst, &SolveConfig::default())
}

pub fn brute_force_solve_with(inst: &Instance, cfg: &SolveConfig) -> Result<Option<Matching>> {
    Ok(enumerate_stable_with(inst, cfg)?.into_iter().next())
}
