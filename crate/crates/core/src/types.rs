use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Dense 0-based agent index within an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgentId(pub u32);

impl AgentId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for AgentId {
    fn from(i: usize) -> Self {
        AgentId(i as u32)
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A set of distinct agents, stored sorted ascending by index.
///
/// Used both for the `(d-1)`-sets that agents rank and for the `d`-sets
/// (groups) of a matching.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TupleSet(SmallVec<[u32; 4]>);

impl TupleSet {
    /// Builds a set from arbitrary indices. Rejects duplicates.
    pub fn new<I, T>(members: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<usize>,
    {
        let mut v: SmallVec<[u32; 4]> = members.into_iter().map(|m| m.into() as u32).collect();
        v.sort_unstable();
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("duplicate agent in set {v:?}")));
        }
        Ok(TupleSet(v))
    }

    /// Builds a set from indices that are already strictly increasing.
    pub fn from_sorted(members: &[u32]) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        TupleSet(SmallVec::from_slice(members))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = AgentId> + '_ {
        self.0.iter().map(|&i| AgentId(i))
    }

    pub fn contains(&self, a: AgentId) -> bool {
        self.0.binary_search(&a.0).is_ok()
    }

    pub fn min(&self) -> Option<u32> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<u32> {
        self.0.last().copied()
    }

    /// The set with `a` removed (unchanged if absent).
    pub fn without(&self, a: AgentId) -> TupleSet {
        TupleSet(self.0.iter().copied().filter(|&x| x != a.0).collect())
    }

    /// The set with `a` inserted.
    pub fn with(&self, a: AgentId) -> TupleSet {
        let mut v = self.0.clone();
        if let Err(pos) = v.binary_search(&a.0) {
            v.insert(pos, a.0);
        }
        TupleSet(v)
    }

    pub fn is_disjoint(&self, other: &TupleSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }
}

impl fmt::Debug for TupleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl From<&[u32]> for TupleSet {
    fn from(v: &[u32]) -> Self {
        TupleSet::new(v.iter().map(|&x| x as usize)).expect("distinct members")
    }
}

/// A set of pairwise disjoint groups, kept in canonical form: members sorted
/// within each group, groups sorted lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Debug)]
pub struct Matching {
    groups: Vec<TupleSet>,
}

impl Matching {
    pub fn new(mut groups: Vec<TupleSet>) -> Self {
        groups.sort_unstable();
        Matching { groups }
    }

    pub fn empty() -> Self {
        Matching { groups: Vec::new() }
    }

    /// Builds a matching from raw index groups, e.g. in tests.
    pub fn from_groups<G: AsRef<[usize]>>(groups: &[G]) -> Result<Self> {
        let gs = groups
            .iter()
            .map(|g| TupleSet::new(g.as_ref().iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matching::new(gs))
    }

    pub fn groups(&self) -> &[TupleSet] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Group index for each of `n` agents, or `None` if unmatched.
    ///
    /// Agents outside `0..n` are ignored; an agent in two groups keeps the
    /// later one (callers validate disjointness separately).
    pub fn assignment(&self, n: usize) -> Vec<Option<u32>> {
        let mut out = vec![None; n];
        for (gi, g) in self.groups.iter().enumerate() {
            for a in g.as_slice() {
                if let Some(slot) = out.get_mut(*a as usize) {
                    *slot = Some(gi as u32);
                }
            }
        }
        out
    }

    /// The group containing `a`, if any.
    pub fn group_of(&self, a: AgentId) -> Option<&TupleSet> {
        self.groups.iter().find(|g| g.contains(a))
    }

    /// `M(a)`: the other members of `a`'s group.
    pub fn partners(&self, a: AgentId) -> Option<TupleSet> {
        self.group_of(a).map(|g| g.without(a))
    }
}

impl FromIterator<TupleSet> for Matching {
    fn from_iter<T: IntoIterator<Item = TupleSet>>(iter: T) -> Self {
        Matching::new(iter.into_iter().collect())
    }
}

/// Binomial coefficient saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Advances `comb` (strictly increasing values in `0..n`) to the next
/// combination in lexicographic order. Returns false when exhausted.
pub(crate) fn next_combination(comb: &mut [u32], n: u32) -> bool {
    let k = comb.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if comb[i] < n - (k - i) as u32 {
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Calls `f` on every `k`-subset of `items` in lexicographic order of
/// positions. Stops early when `f` returns `false`.
pub(crate) fn for_each_subset(items: &[u32], k: usize, mut f: impl FnMut(&[u32]) -> bool) {
    if k > items.len() {
        return;
    }
    let mut idx: Vec<u32> = (0..k as u32).collect();
    let mut buf = vec![0u32; k];
    loop {
        for (b, &i) in buf.iter_mut().zip(&idx) {
            *b = items[i as usize];
        }
        if !f(&buf) {
            return;
        }
        if !next_combination(&mut idx, items.len() as u32) {
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuple_set_sorts_and_rejects_duplicates() {
        let t = TupleSet::new([3usize, 1, 2]).unwrap();
        assert_eq!(t.as_slice(), &[1, 2, 3]);
        assert!(TupleSet::new([1usize, 1]).is_err());
        assert_eq!(t.without(AgentId(2)).as_slice(), &[1, 3]);
        assert_eq!(t.with(AgentId(0)).as_slice(), &[0, 1, 2, 3]);
    }

    #[test]
    fn combinations_are_lexicographic() {
        let mut seen = Vec::new();
        for_each_subset(&[0, 1, 2, 3], 2, |s| {
            seen.push(s.to_vec());
            true
        });
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(binomial(69, 3), 52394);
        assert_eq!(binomial(5, 7), 0);
    }

    #[test]
    fn matching_is_canonical() {
        let m = Matching::from_groups(&[vec![5, 4, 3], vec![2, 0, 1]]).unwrap();
        assert_eq!(m.groups()[0].as_slice(), &[0, 1, 2]);
        assert_eq!(m.partners(AgentId(4)).unwrap().as_slice(), &[3, 5]);
        assert_eq!(m.assignment(7)[6], None);
    }
}
