//! Reduction from perfect stable marriage with ties and incomplete lists
//! under master lists to three-dimensional roommates with incomplete
//! preferences derived from a strict order.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::types::{AgentId, Matching, TupleSet};

use super::gadgets::{
    a_name, b_name, c_name, cp_name, cutoff_pairs, tie_completion, tie_d_agents, tie_d_pairs,
    tie_man_pairs, tie_triples, x_name, TiePattern,
};
use super::{pair, triple, Fragment};

/// Men in master order, women as a master list of tie groups (size one or
/// two), and each man's acceptable women. Women accept exactly the men that
/// accept them. Women are numbered by flattening the tie groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmtiInstance {
    men: Vec<String>,
    women: Vec<String>,
    /// Tie group of each woman.
    group: Vec<usize>,
    groups: Vec<Vec<String>>,
    acceptable: Vec<Vec<usize>>,
}

/// A set of man-woman pairs, sorted by man.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SmtiMatching {
    pairs: Vec<(usize, usize)>,
}

impl SmtiMatching {
    pub fn new(mut pairs: Vec<(usize, usize)>) -> Self {
        pairs.sort_unstable();
        SmtiMatching { pairs }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }
}

impl SmtiInstance {
    pub fn new(men: Vec<String>, women: Vec<Vec<String>>, acceptable: Vec<Vec<usize>>) -> Result<Self> {
        let bad = |m: String| Err(Error::MalformedSmti(m));
        if let Some(g) = women.iter().find(|g| g.is_empty() || g.len() > 2) {
            return bad(format!("tie group {g:?} must have one or two women"));
        }
        let flat: Vec<String> = women.iter().flatten().cloned().collect();
        let group: Vec<usize> = women
            .iter()
            .enumerate()
            .flat_map(|(gi, g)| std::iter::repeat_n(gi, g.len()))
            .collect();
        if men.len() != flat.len() {
            return bad(format!("{} men but {} women", men.len(), flat.len()));
        }
        let mut names = HashSet::new();
        for name in men.iter().chain(&flat) {
            if !names.insert(name.as_str()) {
                return bad(format!("duplicate name {name}"));
            }
        }
        if acceptable.len() != men.len() {
            return bad(format!("{} acceptability lists for {} men", acceptable.len(), men.len()));
        }
        let mut acc = Vec::with_capacity(men.len());
        for (i, list) in acceptable.into_iter().enumerate() {
            let mut list = list;
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return bad(format!("man {} lists a woman twice", men[i]));
            }
            if let Some(&j) = list.iter().find(|&&j| j >= flat.len()) {
                return bad(format!("man {} accepts unknown woman {}", men[i], j + 1));
            }
            acc.push(list);
        }
        Ok(SmtiInstance {
            men,
            women: flat,
            group,
            groups: women,
            acceptable: acc,
        })
    }

    pub fn men(&self) -> &[String] {
        &self.men
    }

    pub fn women(&self) -> &[String] {
        &self.women
    }

    pub fn women_groups(&self) -> &[Vec<String>] {
        &self.groups
    }

    pub fn acceptable(&self, i: usize) -> &[usize] {
        &self.acceptable[i]
    }

    pub fn is_acceptable(&self, i: usize, j: usize) -> bool {
        self.acceptable[i].binary_search(&j).is_ok()
    }

    /// Whether man `i` strictly prefers woman `j` to woman `k`.
    pub fn man_prefers(&self, j: usize, k: usize) -> bool {
        self.group[j] < self.group[k]
    }

    /// Women `j` with `j` and `j+1` tied and both acceptable to man `i`.
    pub fn ties_of(&self, i: usize) -> Vec<usize> {
        self.acceptable[i]
            .windows(2)
            .filter(|w| w[1] == w[0] + 1 && self.group[w[0]] == self.group[w[1]])
            .map(|w| w[0])
            .collect()
    }

    /// Checks that `m` pairs every man and woman exactly once along
    /// acceptable pairs.
    pub fn check_perfect(&self, m: &SmtiMatching) -> Result<()> {
        let n = self.men.len();
        let mut man = vec![false; n];
        let mut woman = vec![false; n];
        for &(i, j) in &m.pairs {
            if i >= n || j >= n || !self.is_acceptable(i, j) {
                return Err(Error::NotPerfect(format!("pair ({i}, {j}) is not acceptable")));
            }
            if std::mem::replace(&mut man[i], true) || std::mem::replace(&mut woman[j], true) {
                return Err(Error::NotPerfect(format!("pair ({i}, {j}) reuses an agent")));
            }
        }
        if m.pairs.len() != n {
            return Err(Error::NotPerfect(format!("{} of {n} men matched", m.pairs.len())));
        }
        Ok(())
    }

    /// A pair that weakly blocks `m`: both are unmatched or strictly prefer
    /// each other to their partners. Pairs are scanned by man, then woman.
    pub fn blocking_pair(&self, m: &SmtiMatching) -> Option<(usize, usize)> {
        let n = self.men.len();
        let mut wife = vec![None; n];
        let mut husband = vec![None; n];
        for &(i, j) in &m.pairs {
            wife[i] = Some(j);
            husband[j] = Some(i);
        }
        for i in 0..n {
            for &j in &self.acceptable[i] {
                if wife[i] == Some(j) {
                    continue;
                }
                let man_wants = wife[i].is_none_or(|w| self.man_prefers(j, w));
                let woman_wants = husband[j].is_none_or(|h| i < h);
                if man_wants && woman_wants {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Validates that `m` is perfect and weakly stable.
    pub fn check_perfect_stable(&self, m: &SmtiMatching) -> Result<()> {
        self.check_perfect(m)?;
        match self.blocking_pair(m) {
            Some((man, woman)) => Err(Error::NotStable { man, woman }),
            None => Ok(()),
        }
    }
}

/// Agent indices of the reduced instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmtiLayout {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    /// Agent `c{i}.{j}` for every acceptable pair.
    pub c: HashMap<(usize, usize), u32>,
    /// Ties `(i, j)` of man `i` between women `j` and `j+1`.
    pub ties: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct SmtiReduction {
    pub instance: Instance,
    pub layout: SmtiLayout,
}

fn fragment(s: &SmtiInstance) -> Fragment {
    let n = s.men.len();
    let ties: Vec<Vec<usize>> = (0..n).map(|i| s.ties_of(i)).collect();
    let in_tie = |i: usize, j: usize| {
        ties[i].contains(&j) || (j > 0 && ties[i].contains(&(j - 1)))
    };
    let mut f = Fragment::default();

    // D sublists, ordered by man then woman.
    for (i, ts) in ties.iter().enumerate() {
        for &j in ts {
            f.agents.extend(tie_d_agents(i + 1, j + 1));
            f.pairs.extend(tie_d_pairs(i + 1, j + 1));
        }
    }
    f.agents.extend((1..=n).map(a_name));
    f.agents.extend((1..=n).map(b_name));
    // C sublists, ordered by woman then man.
    for j in 0..n {
        for i in 0..n {
            if ties[i].contains(&j) {
                f.agents.extend([
                    c_name(i + 1, j + 1),
                    c_name(i + 1, j + 2),
                    cp_name(i + 1, j + 1),
                ]);
            } else if s.is_acceptable(i, j) && !in_tie(i, j) {
                f.agents.push(c_name(i + 1, j + 1));
            }
        }
    }
    for i in 1..=n {
        f.agents.extend((2..=6).map(|k| x_name(k, i)));
    }

    // A sublists.
    for i in 0..n {
        for &j in &s.acceptable[i] {
            if ties[i].contains(&j) {
                f.pairs.extend(tie_man_pairs(i + 1, j + 1));
                f.triples.extend(tie_triples(i + 1, j + 1));
            } else if !in_tie(i, j) {
                let (a, b, c) = (a_name(i + 1), b_name(j + 1), c_name(i + 1, j + 1));
                f.pairs.push(pair(&a, &c));
                f.pairs.push(pair(&b, &c));
                f.triples.push(triple(&a, &b, &c));
            }
        }
    }
    // Lists of the c agents.
    for i in 0..n {
        for &j in &s.acceptable[i] {
            f.pairs.push(pair(&a_name(i + 1), &b_name(j + 1)));
        }
    }
    for i in 1..=n {
        f.pairs.extend(cutoff_pairs(i));
        let x = |k| x_name(k, i);
        f.triples.push(triple(&a_name(i), &x(5), &x(6)));
        f.triples.push(triple(&x(2), &x(4), &x(6)));
        f.triples.push(triple(&x(3), &x(4), &x(5)));
    }
    f
}

/// Builds the three-dimensional instance with one agent per man and woman,
/// one per acceptable pair, a tie gadget per tie and a cut-off gadget per
/// man.
pub fn smti_reduce(s: &SmtiInstance) -> Result<SmtiReduction> {
    let instance = fragment(s).build()?;
    let id = |name: String| instance.agent_by_name(&name).expect("constructed agent").0;
    let n = s.men.len();
    let mut c = HashMap::new();
    let mut ties = Vec::new();
    for i in 0..n {
        for &j in &s.acceptable[i] {
            c.insert((i, j), id(c_name(i + 1, j + 1)));
        }
        ties.extend(s.ties_of(i).into_iter().map(|j| (i, j)));
    }
    let layout = SmtiLayout {
        a: (1..=n).map(|i| id(a_name(i))).collect(),
        b: (1..=n).map(|j| id(b_name(j))).collect(),
        c,
        ties,
    };
    Ok(SmtiReduction { instance, layout })
}

impl SmtiReduction {
    fn resolve(&self, groups: Vec<[String; 3]>) -> Result<Vec<TupleSet>> {
        groups
            .iter()
            .map(|g| {
                TupleSet::new(
                    g.iter()
                        .map(|name| self.instance.agent_by_name(name).expect("constructed agent").index()),
                )
            })
            .collect()
    }

    /// The stable matching built from a perfect weakly stable matching.
    pub fn forward(&self, s: &SmtiInstance, pm: &SmtiMatching) -> Result<Matching> {
        s.check_perfect_stable(pm)?;
        let l = &self.layout;
        let wife: HashMap<usize, usize> = pm.pairs.iter().copied().collect();
        let mut groups = Vec::new();
        for &(i, j) in &pm.pairs {
            groups.push(TupleSet::new([l.a[i], l.b[j], l.c[&(i, j)]].map(|a| a as usize))?);
        }
        let mut names = Vec::new();
        for &(i, j) in &l.ties {
            let pattern = match wife[&i] {
                w if w == j => TiePattern::First,
                w if w == j + 1 => TiePattern::Second,
                _ => TiePattern::Neither,
            };
            names.extend(tie_completion(i + 1, j + 1, pattern));
        }
        for i in 1..=s.men.len() {
            names.push(triple(&x_name(3, i), &x_name(4, i), &x_name(5, i)));
        }
        groups.extend(self.resolve(names)?);
        Ok(Matching::new(groups))
    }

    /// The perfect matching read off a stable matching of the reduced
    /// instance: man `i` gets the woman whose agent shares a group with `a{i}`.
    pub fn backward(&self, s: &SmtiInstance, m: &Matching) -> Result<SmtiMatching> {
        self.instance
            .check_matching(m)
            .map_err(|e| Error::NotWellFormed(e.to_string()))?;
        let woman_of: HashMap<u32, usize> = self.layout.b.iter().enumerate().map(|(j, &b)| (b, j)).collect();
        let mut pairs = Vec::new();
        for (i, &a) in self.layout.a.iter().enumerate() {
            let j = m
                .group_of(AgentId(a))
                .and_then(|g| g.as_slice().iter().find_map(|x| woman_of.get(x).copied()));
            match j {
                Some(j) => pairs.push((i, j)),
                None => {
                    return Err(Error::NotWellFormed(format!(
                        "{} is not grouped with a woman",
                        self.instance.name(AgentId(a))
                    )))
                }
            }
        }
        let pm = SmtiMatching::new(pairs);
        s.check_perfect_stable(&pm)?;
        Ok(pm)
    }
}

pub fn smti_forward(s: &SmtiInstance, pm: &SmtiMatching) -> Result<Matching> {
    smti_reduce(s)?.forward(s, pm)
}

pub fn smti_backward(s: &SmtiInstance, m: &Matching) -> Result<SmtiMatching> {
    smti_reduce(s)?.backward(s, m)
}
