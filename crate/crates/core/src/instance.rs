//! Instances, preference sources and the preference oracle.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::poset::{LpoOrder, Poset};
use crate::types::{binomial, for_each_subset, AgentId, Matching, TupleSet};

/// Per-agent list size above which lists are never materialised.
pub const MAX_LIST_ENTRIES: u128 = 1_000_000;

/// How a master poset is completed into strict per-agent preferences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TieBreak {
    /// Sets compare by their sorted approximating-order positions,
    /// lexicographically, smaller first.
    Canonical,
    /// One strict list per agent, checked to respect dominance.
    Explicit(Vec<Vec<TupleSet>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PreferenceSource {
    /// One strict list per agent, best first.
    Explicit(Vec<Vec<TupleSet>>),
    /// A global ranking of every `(d-1)`-set; agents skip sets containing
    /// themselves.
    MasterListSets(Vec<TupleSet>),
    MasterPoset { poset: Poset, tiebreak: TieBreak },
}

#[derive(Clone, Debug)]
enum Oracle {
    /// Rank of each listed set, per agent.
    Lists(Vec<HashMap<TupleSet, u32>>),
    /// Rank in the master list.
    Global(HashMap<TupleSet, u32>),
    Canonical,
}

/// A validated instance. Immutable after construction.
#[derive(Clone, Debug)]
pub struct Instance {
    d: usize,
    names: Vec<String>,
    source: PreferenceSource,
    acceptability: Option<Vec<HashSet<TupleSet>>>,
    oracle: Oracle,
    lpo: Option<LpoOrder>,
    acceptable_groups: Option<Vec<TupleSet>>,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d
            && self.names == other.names
            && self.source == other.source
            && self.acceptability == other.acceptability
    }
}

/// Names `a1, a2, …, an`.
pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("a{i}")).collect()
}

impl Instance {
    /// Validates all structural invariants and builds the oracle.
    ///
    /// `acceptability`, when given, lists the acceptable `(d-1)`-sets of each
    /// agent. Explicit lists must then enumerate exactly those sets.
    pub fn new(
        d: usize,
        names: Vec<String>,
        source: PreferenceSource,
        acceptability: Option<Vec<Vec<TupleSet>>>,
    ) -> Result<Instance> {
        let n = names.len();
        if d < 2 {
            return Err(Error::invalid(format!("group size d = {d} must be at least 2")));
        }
        if d > n {
            return Err(Error::invalid(format!("group size d = {d} exceeds {n} agents")));
        }
        let mut seen = HashSet::new();
        for name in &names {
            if name.is_empty() {
                return Err(Error::invalid("agent names must be non-empty"));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::invalid(format!("agent name {name:?} is not unique")));
            }
        }
        let acceptability = match acceptability {
            None => None,
            Some(acc) => {
                if acc.len() != n {
                    return Err(Error::invalid(format!(
                        "acceptability given for {} agents, expected {n}",
                        acc.len()
                    )));
                }
                let mut out = Vec::with_capacity(n);
                for (a, sets) in acc.into_iter().enumerate() {
                    out.push(check_list(d, n, a, &sets, "acceptable set")?);
                }
                Some(out)
            }
        };
        let complete_len = binomial(n as u64 - 1, d as u64 - 1);

        let check_lists = |lists: &[Vec<TupleSet>]| -> Result<Vec<HashMap<TupleSet, u32>>> {
            if lists.len() != n {
                return Err(Error::invalid(format!(
                    "{} preference lists given for {n} agents",
                    lists.len()
                )));
            }
            let mut ranks = Vec::with_capacity(n);
            for (a, list) in lists.iter().enumerate() {
                let set = check_list(d, n, a, list, "preference list")?;
                match &acceptability {
                    None => {
                        if complete_len > MAX_LIST_ENTRIES {
                            return Err(Error::TooLarge {
                                what: "explicit list entries per agent",
                                count: complete_len,
                                limit: MAX_LIST_ENTRIES,
                            });
                        }
                        if list.len() as u128 != complete_len {
                            return Err(Error::invalid(format!(
                                "list of agent {} has {} entries, a complete list has {complete_len}",
                                names[a],
                                list.len()
                            )));
                        }
                    }
                    Some(acc) => {
                        if set != acc[a] {
                            return Err(Error::invalid(format!(
                                "list of agent {} differs from its acceptable sets",
                                names[a]
                            )));
                        }
                    }
                }
                ranks.push(
                    list.iter()
                        .enumerate()
                        .map(|(r, t)| (t.clone(), r as u32))
                        .collect(),
                );
            }
            Ok(ranks)
        };

        let (oracle, lpo) = match &source {
            PreferenceSource::Explicit(lists) => (Oracle::Lists(check_lists(lists)?), None),
            PreferenceSource::MasterListSets(list) => {
                let all = binomial(n as u64, d as u64 - 1);
                if all > MAX_LIST_ENTRIES {
                    return Err(Error::TooLarge {
                        what: "master list entries",
                        count: all,
                        limit: MAX_LIST_ENTRIES,
                    });
                }
                let mut ranks = HashMap::with_capacity(list.len());
                for (r, t) in list.iter().enumerate() {
                    check_set(d, n, None, t)?;
                    if ranks.insert(t.clone(), r as u32).is_some() {
                        return Err(Error::invalid(format!("set {t:?} listed twice in master list")));
                    }
                }
                if list.len() as u128 != all {
                    return Err(Error::invalid(format!(
                        "master list has {} entries, expected all {all} sets of size {}",
                        list.len(),
                        d - 1
                    )));
                }
                (Oracle::Global(ranks), None)
            }
            PreferenceSource::MasterPoset { poset, tiebreak } => {
                if poset.len() != n {
                    return Err(Error::invalid(format!(
                        "master poset has {} agents, instance has {n}",
                        poset.len()
                    )));
                }
                if acceptability.is_some() && !poset.is_total() {
                    return Err(Error::invalid(
                        "acceptability with a master poset requires a strict total order",
                    ));
                }
                let lpo = poset.lpo_order();
                let oracle = match tiebreak {
                    TieBreak::Canonical => Oracle::Canonical,
                    TieBreak::Explicit(lists) => Oracle::Lists(check_lists(lists)?),
                };
                (oracle, Some(lpo))
            }
        };

        let mut inst = Instance {
            d,
            names,
            source,
            acceptability,
            oracle,
            lpo,
            acceptable_groups: None,
        };
        if let PreferenceSource::MasterPoset {
            poset,
            tiebreak: TieBreak::Explicit(_),
        } = &inst.source
        {
            if let Some(a) = (0..n).find(|&a| !inst.agent_derived_from_poset(AgentId::from(a), poset)) {
                return Err(Error::invalid(format!(
                    "tiebreak list of agent {} does not respect dominance in the master poset",
                    inst.names[a]
                )));
            }
        }
        if inst.acceptability.is_some() {
            inst.acceptable_groups = Some(inst.compute_acceptable_groups());
        }
        Ok(inst)
    }

    pub fn from_explicit(d: usize, names: Vec<String>, lists: Vec<Vec<TupleSet>>) -> Result<Instance> {
        Instance::new(d, names, PreferenceSource::Explicit(lists), None)
    }

    pub fn from_master_list(d: usize, names: Vec<String>, list: Vec<TupleSet>) -> Result<Instance> {
        Instance::new(d, names, PreferenceSource::MasterListSets(list), None)
    }

    /// Complete preferences derived from `poset` with the canonical completion.
    pub fn from_poset(d: usize, names: Vec<String>, poset: Poset) -> Result<Instance> {
        Instance::new(
            d,
            names,
            PreferenceSource::MasterPoset {
                poset,
                tiebreak: TieBreak::Canonical,
            },
            None,
        )
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: AgentId) -> &str {
        &self.names[a.index()]
    }

    pub fn agent_by_name(&self, name: &str) -> Option<AgentId> {
        self.names.iter().position(|x| x == name).map(AgentId::from)
    }

    pub fn source(&self) -> &PreferenceSource {
        &self.source
    }

    /// The master poset, for poset sources.
    pub fn poset(&self) -> Option<&Poset> {
        match &self.source {
            PreferenceSource::MasterPoset { poset, .. } => Some(poset),
            _ => None,
        }
    }

    /// The approximating order used by the oracle and the solvers.
    pub fn lpo(&self) -> Option<&LpoOrder> {
        self.lpo.as_ref()
    }

    pub fn is_complete(&self) -> bool {
        self.acceptability.is_none()
    }

    /// `X_a`, when preferences are incomplete.
    pub fn acceptable_sets(&self, a: AgentId) -> Option<&HashSet<TupleSet>> {
        self.acceptability.as_ref().map(|acc| &acc[a.index()])
    }

    pub fn is_acceptable(&self, a: AgentId, t: &TupleSet) -> bool {
        match &self.acceptability {
            None => !t.contains(a) && t.len() == self.d - 1,
            Some(acc) => acc[a.index()].contains(t),
        }
    }

    /// Every `d`-set acceptable to all of its members, sorted; `None` for
    /// complete preferences.
    pub fn acceptable_groups(&self) -> Option<&[TupleSet]> {
        self.acceptable_groups.as_deref()
    }

    fn compute_acceptable_groups(&self) -> Vec<TupleSet> {
        let acc = self.acceptability.as_ref().expect("incomplete instance");
        let mut groups = Vec::new();
        for (a, sets) in acc.iter().enumerate() {
            for t in sets {
                if t.min().is_some_and(|m| (m as usize) < a) {
                    continue;
                }
                let g = t.with(AgentId::from(a));
                if g.iter().all(|b| acc[b.index()].contains(&g.without(b))) {
                    groups.push(g);
                }
            }
        }
        groups.sort_unstable();
        groups
    }

    /// Compares two `(d-1)`-sets from `a`'s point of view; `Less` means `t`
    /// is preferred. Both sets must be valid and acceptable for `a`.
    pub(crate) fn compare(&self, a: AgentId, t: &TupleSet, t2: &TupleSet) -> Ordering {
        match &self.oracle {
            Oracle::Lists(ranks) => {
                let r = &ranks[a.index()];
                r[t].cmp(&r[t2])
            }
            Oracle::Global(ranks) => ranks[t].cmp(&ranks[t2]),
            Oracle::Canonical => {
                let lpo = self.lpo.as_ref().expect("poset source");
                let key = |s: &TupleSet| {
                    let mut v: SmallVec<[u32; 8]> = s.iter().map(|b| lpo.position(b)).collect();
                    v.sort_unstable();
                    v
                };
                key(t).cmp(&key(t2))
            }
        }
    }

    fn check_query_set(&self, a: AgentId, t: &TupleSet) -> Result<()> {
        check_set(self.d, self.n(), None, t)?;
        if t.contains(a) {
            return Err(Error::SelfInclusion { agent: a.index() });
        }
        if !self.is_acceptable(a, t) {
            return Err(Error::UnacceptableSet { agent: a.index() });
        }
        Ok(())
    }

    /// Whether `a` strictly prefers `t` to `t2`.
    pub fn prefers(&self, a: AgentId, t: &TupleSet, t2: &TupleSet) -> Result<bool> {
        if a.index() >= self.n() {
            return Err(Error::AgentOutOfRange {
                index: a.index(),
                n: self.n(),
            });
        }
        if t.len() != t2.len() {
            return Err(Error::SizeMismatch {
                left: t.len(),
                right: t2.len(),
            });
        }
        self.check_query_set(a, t)?;
        self.check_query_set(a, t2)?;
        if t == t2 {
            return Err(Error::IdenticalSets);
        }
        Ok(self.compare(a, t, t2) == Ordering::Less)
    }

    /// The list `a` ranks, best first, when stored explicitly.
    fn stored_list(&self, a: AgentId) -> Option<&[TupleSet]> {
        match &self.source {
            PreferenceSource::Explicit(lists)
            | PreferenceSource::MasterPoset {
                tiebreak: TieBreak::Explicit(lists),
                ..
            } => Some(&lists[a.index()]),
            _ => None,
        }
    }

    /// `a`'s most preferred acceptable set avoiding `excluded`.
    ///
    /// Complete canonical instances answer from the approximating order
    /// directly; other sources scan the list.
    pub fn first_choice(&self, a: AgentId, excluded: &[AgentId]) -> Result<TupleSet> {
        let n = self.n();
        if a.index() >= n {
            return Err(Error::AgentOutOfRange { index: a.index(), n });
        }
        let mut blocked = vec![false; n];
        blocked[a.index()] = true;
        for x in excluded {
            if x.index() >= n {
                return Err(Error::AgentOutOfRange { index: x.index(), n });
            }
            blocked[x.index()] = true;
        }
        if blocked.iter().filter(|&&b| !b).count() < self.d - 1 {
            return Err(Error::InsufficientAgents);
        }
        let avoids = |t: &TupleSet| t.as_slice().iter().all(|&b| !blocked[b as usize]);
        if let Some(list) = self.stored_list(a) {
            return list.iter().find(|t| avoids(t)).cloned().ok_or(Error::InsufficientAgents);
        }
        if let Some(acc) = &self.acceptability {
            return acc[a.index()]
                .iter()
                .filter(|t| avoids(t))
                .min_by(|t, u| self.compare(a, t, u))
                .cloned()
                .ok_or(Error::InsufficientAgents);
        }
        match &self.source {
            PreferenceSource::MasterListSets(list) => list
                .iter()
                .find(|t| avoids(t))
                .cloned()
                .ok_or(Error::InsufficientAgents),
            _ => {
                let lpo = self.lpo.as_ref().expect("poset source");
                let picked: Vec<usize> = lpo
                    .order()
                    .iter()
                    .map(|b| b.index())
                    .filter(|&b| !blocked[b])
                    .take(self.d - 1)
                    .collect();
                TupleSet::new(picked)
            }
        }
    }

    /// `a`'s full preference list, best first.
    pub fn preference_list(&self, a: AgentId) -> Result<Vec<TupleSet>> {
        if let Some(list) = self.stored_list(a) {
            return Ok(list.to_vec());
        }
        if let Some(acc) = &self.acceptability {
            let mut v: Vec<TupleSet> = acc[a.index()].iter().cloned().collect();
            v.sort_by(|t, u| self.compare(a, t, u));
            return Ok(v);
        }
        if let PreferenceSource::MasterListSets(list) = &self.source {
            return Ok(list.iter().filter(|t| !t.contains(a)).cloned().collect());
        }
        let total = binomial(self.n() as u64 - 1, self.d as u64 - 1);
        if total > MAX_LIST_ENTRIES {
            return Err(Error::TooLarge {
                what: "preference list entries",
                count: total,
                limit: MAX_LIST_ENTRIES,
            });
        }
        // Lexicographic subsets of the order are already in canonical order.
        let lpo = self.lpo.as_ref().expect("poset source");
        let others: Vec<u32> = lpo.order().iter().filter(|&&b| b != a).map(|b| b.0).collect();
        let mut out = Vec::with_capacity(total as usize);
        for_each_subset(&others, self.d - 1, |s| {
            out.push(TupleSet::new(s.iter().map(|&x| x as usize)).expect("distinct"));
            true
        });
        Ok(out)
    }

    /// Whether `a`'s list is `master` with every set containing `a` (and,
    /// for incomplete preferences, every unacceptable set) removed.
    pub fn agent_follows_master_list(&self, a: AgentId, master: &[TupleSet]) -> bool {
        let Ok(list) = self.preference_list(a) else {
            return false;
        };
        let mut expected = master
            .iter()
            .filter(|t| !t.contains(a) && self.is_acceptable(a, t));
        list.iter().all(|t| expected.next() == Some(t)) && expected.next().is_none()
    }

    /// Whether every agent's list is derived from `master` by deletion.
    pub fn is_derived_from_master_list(&self, master: &[TupleSet]) -> bool {
        (0..self.n()).all(|a| self.agent_follows_master_list(AgentId::from(a), master))
    }

    /// Whether `a` ranks `t` above `t2` whenever `t` dominates `t2`.
    pub fn agent_derived_from_poset(&self, a: AgentId, poset: &Poset) -> bool {
        if poset.len() != self.n() {
            return false;
        }
        let Ok(list) = self.preference_list(a) else {
            return false;
        };
        for (i, t) in list.iter().enumerate() {
            for later in &list[i + 1..] {
                if poset.dominates(later, t).unwrap_or(false) {
                    return false;
                }
            }
        }
        true
    }

    /// Whether the whole profile respects dominance in `poset`.
    pub fn is_derived_from_poset(&self, poset: &Poset) -> bool {
        (0..self.n()).all(|a| self.agent_derived_from_poset(AgentId::from(a), poset))
    }

    /// Checks that `m` consists of disjoint `d`-sets of known agents, each
    /// acceptable to all of its members.
    pub fn check_matching(&self, m: &Matching) -> Result<()> {
        let n = self.n();
        let mut used = vec![false; n];
        for g in m.groups() {
            if g.len() != self.d {
                return Err(Error::InvalidMatching(format!(
                    "group {} has {} agents, expected {}",
                    self.format_set(g),
                    g.len(),
                    self.d
                )));
            }
            for a in g.iter() {
                if a.index() >= n {
                    return Err(Error::InvalidMatching(format!("unknown agent index {}", a.index())));
                }
                if used[a.index()] {
                    return Err(Error::InvalidMatching(format!(
                        "agent {} appears in two groups",
                        self.name(a)
                    )));
                }
                used[a.index()] = true;
            }
            if self.acceptability.is_some() {
                if let Some(a) = g.iter().find(|&a| !self.is_acceptable(a, &g.without(a))) {
                    return Err(Error::InvalidMatching(format!(
                        "group {} is not acceptable to {}",
                        self.format_set(g),
                        self.name(a)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn validate_matching(&self, m: &Matching) -> bool {
        self.check_matching(m).is_ok()
    }

    /// `{x,y,z}` using agent names.
    pub fn format_set(&self, t: &TupleSet) -> String {
        let parts: Vec<&str> = t
            .as_slice()
            .iter()
            .map(|&i| self.names.get(i as usize).map_or("?", |s| s.as_str()))
            .collect();
        format!("{{{}}}", parts.join(","))
    }

    /// The instance on the remaining agents, with every set mentioning a
    /// removed agent deleted. Agents are renumbered in their original order.
    /// Preferences among surviving sets are unchanged.
    pub fn without_agents(&self, removed: &[AgentId]) -> Result<Instance> {
        let n = self.n();
        let mut new_index = vec![None; n];
        let mut keep = Vec::new();
        let gone: HashSet<u32> = removed.iter().map(|a| a.0).collect();
        for a in 0..n as u32 {
            if !gone.contains(&a) {
                new_index[a as usize] = Some(keep.len() as u32);
                keep.push(AgentId(a));
            }
        }
        let rename = |t: &TupleSet| -> Option<TupleSet> {
            let v: Option<Vec<usize>> = t
                .as_slice()
                .iter()
                .map(|&b| new_index[b as usize].map(|x| x as usize))
                .collect();
            v.map(|v| TupleSet::new(v).expect("distinct"))
        };
        let filter_list = |list: &[TupleSet]| -> Vec<TupleSet> { list.iter().filter_map(rename).collect() };
        let names = keep.iter().map(|&a| self.names[a.index()].clone()).collect();
        let source = match &self.source {
            PreferenceSource::Explicit(lists) => {
                PreferenceSource::Explicit(keep.iter().map(|a| filter_list(&lists[a.index()])).collect())
            }
            PreferenceSource::MasterListSets(list) => PreferenceSource::MasterListSets(filter_list(list)),
            PreferenceSource::MasterPoset { poset, .. } => {
                // The canonical completion is tied to the approximating order
                // of the full poset, so restricted lists are kept explicitly.
                let lists = keep
                    .iter()
                    .map(|&a| self.preference_list(a).map(|l| filter_list(&l)))
                    .collect::<Result<Vec<_>>>()?;
                PreferenceSource::MasterPoset {
                    poset: poset.restrict(&keep),
                    tiebreak: TieBreak::Explicit(lists),
                }
            }
        };
        let acceptability = self.acceptability.as_ref().map(|acc| {
            keep.iter()
                .map(|a| {
                    let mut v: Vec<TupleSet> = acc[a.index()].iter().filter_map(rename).collect();
                    v.sort_unstable();
                    v
                })
                .collect()
        });
        Instance::new(self.d, names, source, acceptability)
    }
}

fn check_set(d: usize, n: usize, owner: Option<usize>, t: &TupleSet) -> Result<()> {
    if t.len() != d - 1 {
        return Err(Error::invalid(format!(
            "set {t:?} has {} agents, expected {}",
            t.len(),
            d - 1
        )));
    }
    if let Some(bad) = t.as_slice().iter().find(|&&b| b as usize >= n) {
        return Err(Error::AgentOutOfRange {
            index: *bad as usize,
            n,
        });
    }
    if let Some(a) = owner {
        if t.contains(AgentId::from(a)) {
            return Err(Error::SelfInclusion { agent: a });
        }
    }
    Ok(())
}

fn check_list(d: usize, n: usize, owner: usize, list: &[TupleSet], what: &str) -> Result<HashSet<TupleSet>> {
    let mut set = HashSet::with_capacity(list.len());
    for t in list {
        check_set(d, n, Some(owner), t)?;
        if !set.insert(t.clone()) {
            return Err(Error::invalid(format!("{what} of agent {owner} repeats {t:?}")));
        }
    }
    Ok(set)
}
