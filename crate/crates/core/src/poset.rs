//! Strict partial orders over agents and their similarity parameters.
//!
//! `a ≻ b` reads "a is better than b in the master poset". Two
//! representations are kept: a dense transitively closed relation (bit rows)
//! for general posets, and a rank vector for strict total orders so that
//! chains with millions of agents stay linear in memory.

use crate::bipartite;
use crate::error::{Error, Result};
use crate::types::{AgentId, TupleSet};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Relation {
    /// `better[v]` holds every `w` with `v ≻ w`.
    Dense { better: Vec<Vec<u64>>, words: usize },
    /// `order[r]` is the agent of rank `r`; `rank` is its inverse.
    Total { rank: Vec<u32>, order: Vec<u32> },
}

/// A strict partial order on `0..n`, transitively closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    n: usize,
    relation: Relation,
    source_pairs: Vec<(AgentId, AgentId)>,
}

#[inline]
fn bit(row: &[u64], j: usize) -> bool {
    row[j / 64] >> (j % 64) & 1 == 1
}

#[inline]
fn set_bit(row: &mut [u64], j: usize) {
    row[j / 64] |= 1 << (j % 64);
}

/// Builds a poset from `(better, worse)` pairs and closes it transitively.
pub fn validate_poset(pairs: &[(AgentId, AgentId)], n: usize) -> Result<Poset> {
    let words = n.div_ceil(64).max(1);
    let mut better = vec![vec![0u64; words]; n];
    for &(a, b) in pairs {
        for x in [a, b] {
            if x.index() >= n {
                return Err(Error::AgentOutOfRange { index: x.index(), n });
            }
        }
        if a == b {
            return Err(Error::CycleDetected { cycle: vec![a.index()] });
        }
        if bit(&better[b.index()], a.index()) {
            return Err(Error::DuplicateContradiction {
                a: a.index(),
                b: b.index(),
            });
        }
        set_bit(&mut better[a.index()], b.index());
    }
    // Warshall closure over bit rows.
    for k in 0..n {
        let row_k = better[k].clone();
        for row in better.iter_mut() {
            if bit(row, k) {
                for (w, rk) in row.iter_mut().zip(&row_k) {
                    *w |= rk;
                }
            }
        }
    }
    if let Some(v) = (0..n).find(|&v| bit(&better[v], v)) {
        return Err(Error::CycleDetected {
            cycle: find_cycle(pairs, v),
        });
    }
    Ok(Poset {
        n,
        relation: Relation::Dense { better, words },
        source_pairs: pairs.to_vec(),
    })
}

/// Shortest cycle through `v` in the raw pair graph, for diagnostics.
fn find_cycle(pairs: &[(AgentId, AgentId)], v: usize) -> Vec<usize> {
    use std::collections::{HashMap, VecDeque};
    let mut prev: HashMap<usize, usize> = HashMap::new();
    let mut queue = VecDeque::from([v]);
    while let Some(u) = queue.pop_front() {
        for &(a, b) in pairs {
            if a.index() != u {
                continue;
            }
            let w = b.index();
            if w == v {
                let mut cycle = vec![u];
                let mut cur = u;
                while cur != v {
                    cur = prev[&cur];
                    cycle.push(cur);
                }
                cycle.reverse();
                return cycle;
            }
            if let std::collections::hash_map::Entry::Vacant(e) = prev.entry(w) {
                e.insert(u);
                queue.push_back(w);
            }
        }
    }
    vec![v]
}

impl Poset {
    /// The empty relation: every pair incomparable.
    pub fn antichain(n: usize) -> Poset {
        validate_poset(&[], n).expect("empty relation is a poset")
    }

    /// The strict order `ranking[0] ≻ ranking[1] ≻ …`.
    pub fn from_ranking(ranking: &[AgentId]) -> Result<Poset> {
        let n = ranking.len();
        let mut rank = vec![u32::MAX; n];
        for (r, a) in ranking.iter().enumerate() {
            if a.index() >= n {
                return Err(Error::AgentOutOfRange { index: a.index(), n });
            }
            if rank[a.index()] != u32::MAX {
                return Err(Error::invalid(format!(
                    "agent {} listed twice in ranking",
                    a.index()
                )));
            }
            rank[a.index()] = r as u32;
        }
        Ok(Poset {
            n,
            relation: Relation::Total {
                rank,
                order: ranking.iter().map(|a| a.0).collect(),
            },
            source_pairs: Vec::new(),
        })
    }

    /// The chain `0 ≻ 1 ≻ … ≻ n-1`.
    pub fn chain(n: usize) -> Poset {
        let ranking: Vec<AgentId> = (0..n).map(AgentId::from).collect();
        Poset::from_ranking(&ranking).expect("identity ranking")
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Pairs as supplied before closure (empty for ranking-built orders).
    pub fn source_pairs(&self) -> &[(AgentId, AgentId)] {
        &self.source_pairs
    }

    /// The ranking, if this poset was built as a strict total order.
    pub fn ranking(&self) -> Option<Vec<AgentId>> {
        match &self.relation {
            Relation::Total { order, .. } => Some(order.iter().map(|&a| AgentId(a)).collect()),
            Relation::Dense { .. } => None,
        }
    }

    /// `a ≻ b`.
    #[inline]
    pub fn gt(&self, a: AgentId, b: AgentId) -> bool {
        match &self.relation {
            Relation::Dense { better, .. } => bit(&better[a.index()], b.index()),
            Relation::Total { rank, .. } => rank[a.index()] < rank[b.index()],
        }
    }

    /// `a ⪰ b`.
    #[inline]
    pub fn ge(&self, a: AgentId, b: AgentId) -> bool {
        a == b || self.gt(a, b)
    }

    /// `a ⊥ b`.
    #[inline]
    pub fn incomparable(&self, a: AgentId, b: AgentId) -> bool {
        a != b && !self.gt(a, b) && !self.gt(b, a)
    }

    /// Every pair `(a, b)` with `a ≻ b` after closure.
    pub fn closed_pairs(&self) -> Vec<(AgentId, AgentId)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in 0..self.n {
                if self.gt(AgentId::from(a), AgentId::from(b)) {
                    out.push((AgentId::from(a), AgentId::from(b)));
                }
            }
        }
        out
    }

    /// True iff every two distinct agents are comparable.
    pub fn is_total(&self) -> bool {
        match &self.relation {
            Relation::Total { .. } => true,
            Relation::Dense { .. } => self.kappa() == 0,
        }
    }

    /// `κ(v)`: the number of agents incomparable with `v`.
    pub fn kappa_of(&self, v: AgentId) -> usize {
        match &self.relation {
            Relation::Total { .. } => 0,
            Relation::Dense { .. } => (0..self.n)
                .filter(|&w| self.incomparable(v, AgentId::from(w)))
                .count(),
        }
    }

    /// `κ`: the maximum over agents of `κ(v)`.
    pub fn kappa(&self) -> usize {
        match &self.relation {
            Relation::Total { .. } => 0,
            Relation::Dense { better, words } => {
                let mut below = vec![0usize; self.n];
                let mut above = vec![0usize; self.n];
                for (v, row) in better.iter().enumerate() {
                    for w in 0..(*words * 64).min(self.n) {
                        if bit(row, w) {
                            below[v] += 1;
                            above[w] += 1;
                        }
                    }
                }
                (0..self.n)
                    .map(|v| self.n - 1 - below[v] - above[v])
                    .max()
                    .unwrap_or(0)
            }
        }
    }

    /// Size of a maximum antichain, computed as a minimum chain cover:
    /// `n` minus a maximum matching in the split graph of `≻`.
    pub fn width(&self) -> usize {
        if self.n == 0 {
            return 0;
        }
        if let Relation::Total { .. } = self.relation {
            return 1;
        }
        let adj: Vec<Vec<usize>> = (0..self.n)
            .map(|v| {
                (0..self.n)
                    .filter(|&w| self.gt(AgentId::from(v), AgentId::from(w)))
                    .collect()
            })
            .collect();
        self.n - bipartite::max_matching(&adj, self.n)
    }

    /// The sub-poset on `keep` (in that order), renumbered `0..keep.len()`.
    pub fn restrict(&self, keep: &[AgentId]) -> Poset {
        match &self.relation {
            Relation::Total { rank, .. } => {
                let mut kept: Vec<(u32, usize)> = keep
                    .iter()
                    .enumerate()
                    .map(|(new, a)| (rank[a.index()], new))
                    .collect();
                kept.sort_unstable();
                let ranking: Vec<AgentId> = kept.iter().map(|&(_, new)| AgentId::from(new)).collect();
                Poset::from_ranking(&ranking).expect("restricted ranking is a permutation")
            }
            Relation::Dense { .. } => {
                let mut pairs = Vec::new();
                for (i, &a) in keep.iter().enumerate() {
                    for (j, &b) in keep.iter().enumerate() {
                        if self.gt(a, b) {
                            pairs.push((AgentId::from(i), AgentId::from(j)));
                        }
                    }
                }
                validate_poset(&pairs, keep.len()).expect("restriction of a poset is a poset")
            }
        }
    }

    /// Whether `t` dominates `t'`: some bijection `σ: t → t'` has
    /// `a ⪰ σ(a)` for all `a`, and `t ≠ t'`.
    ///
    /// Decided by perfect bipartite matching over `{(a, b) : a ⪰ b}`; a
    /// greedy pairing is not enough once the order is partial.
    pub fn dominates(&self, t: &TupleSet, t2: &TupleSet) -> Result<bool> {
        if t.len() != t2.len() {
            return Err(Error::SizeMismatch {
                left: t.len(),
                right: t2.len(),
            });
        }
        if t == t2 {
            return Ok(false);
        }
        if let Relation::Total { rank, .. } = &self.relation {
            // Chains: componentwise comparison of sorted ranks.
            let mut r1: Vec<u32> = t.as_slice().iter().map(|&a| rank[a as usize]).collect();
            let mut r2: Vec<u32> = t2.as_slice().iter().map(|&a| rank[a as usize]).collect();
            r1.sort_unstable();
            r2.sort_unstable();
            return Ok(r1.iter().zip(&r2).all(|(x, y)| x <= y));
        }
        let a = t.as_slice();
        let b = t2.as_slice();
        Ok(bipartite::has_perfect_matching(a.len(), |i, j| {
            self.ge(AgentId(a[i]), AgentId(b[j]))
        }))
    }

    /// A linear extension `a_1, …, a_n` where earlier agents are never worse
    /// than later ones, and any agent more than `2κ` places later is strictly
    /// worse. Maximal elements are extracted repeatedly, smallest index first.
    pub fn lpo_order(&self) -> LpoOrder {
        let kappa = self.kappa();
        let order: Vec<AgentId> = match &self.relation {
            Relation::Total { order, .. } => order.iter().map(|&a| AgentId(a)).collect(),
            Relation::Dense { .. } => {
                let n = self.n;
                let mut above = vec![0usize; n];
                for v in 0..n {
                    for w in 0..n {
                        if self.gt(AgentId::from(v), AgentId::from(w)) {
                            above[w] += 1;
                        }
                    }
                }
                let mut done = vec![false; n];
                let mut order = Vec::with_capacity(n);
                for _ in 0..n {
                    let v = (0..n)
                        .find(|&v| !done[v] && above[v] == 0)
                        .expect("a finite poset has a maximal element");
                    done[v] = true;
                    order.push(AgentId::from(v));
                    for w in 0..n {
                        if self.gt(AgentId::from(v), AgentId::from(w)) {
                            above[w] -= 1;
                        }
                    }
                }
                order
            }
        };
        LpoOrder::new(order, kappa)
    }
}

/// An approximating order for a poset together with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpoOrder {
    order: Vec<AgentId>,
    position: Vec<u32>,
    kappa: usize,
}

impl LpoOrder {
    fn new(order: Vec<AgentId>, kappa: usize) -> Self {
        let mut position = vec![0u32; order.len()];
        for (p, a) in order.iter().enumerate() {
            position[a.index()] = p as u32;
        }
        LpoOrder {
            order,
            position,
            kappa,
        }
    }

    pub fn order(&self) -> &[AgentId] {
        &self.order
    }

    #[inline]
    pub fn position(&self, a: AgentId) -> u32 {
        self.position[a.index()]
    }

    pub fn positions(&self) -> &[u32] {
        &self.position
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Sorted positions of `t`'s members. Comparing these vectors
    /// lexicographically (smaller first) is the canonical completion.
    pub fn canonical_rank(&self, t: &TupleSet) -> Vec<u32> {
        let mut v: Vec<u32> = t.iter().map(|a| self.position(a)).collect();
        v.sort_unstable();
        v
    }
}

/// Checks both defining conditions of an approximating order in `O(n²)`.
pub fn verify_lpo(order: &[AgentId], poset: &Poset) -> bool {
    let n = poset.len();
    if order.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for a in order {
        if a.index() >= n || seen[a.index()] {
            return false;
        }
        seen[a.index()] = true;
    }
    let kappa = poset.kappa();
    for i in 0..n {
        for j in i + 1..n {
            if poset.gt(order[j], order[i]) {
                return false;
            }
            if j > i + 2 * kappa && !poset.gt(order[i], order[j]) {
                return false;
            }
        }
    }
    true
}
