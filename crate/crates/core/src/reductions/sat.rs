//! Reduction from 1-in-3 positive 3-occurrence SAT to three-dimensional
//! roommates with a master list of 2-sets.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::types::{AgentId, Matching, TupleSet};

use super::instable::INSTABLE_MASTER_LIST;

/// A positive formula where every clause has three distinct variables and
/// every variable occurs exactly three times. Variables are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneInThreeFormula {
    num_vars: usize,
    clauses: Vec<[usize; 3]>,
}

impl OneInThreeFormula {
    pub fn new(num_vars: usize, clauses: Vec<[usize; 3]>) -> Result<Self> {
        let mut count = vec![0usize; num_vars];
        for (j, c) in clauses.iter().enumerate() {
            for &v in c {
                if v >= num_vars {
                    return Err(Error::MalformedFormula(format!(
                        "clause {} uses variable {} but there are {num_vars}",
                        j + 1,
                        v + 1
                    )));
                }
                count[v] += 1;
            }
            if c[0] == c[1] || c[0] == c[2] || c[1] == c[2] {
                return Err(Error::MalformedFormula(format!(
                    "clause {} repeats a variable",
                    j + 1
                )));
            }
        }
        if let Some(v) = count.iter().position(|&c| c != 3) {
            return Err(Error::MalformedFormula(format!(
                "variable {} occurs {} times, expected 3",
                v + 1,
                count[v]
            )));
        }
        Ok(OneInThreeFormula { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[[usize; 3]] {
        &self.clauses
    }
}

/// Checks that `asg` has one value per variable and makes exactly one
/// literal of every clause true.
pub fn validate_assignment(f: &OneInThreeFormula, asg: &[bool]) -> Result<()> {
    if asg.len() != f.num_vars {
        return Err(Error::InvalidAssignment(format!(
            "{} values for {} variables",
            asg.len(),
            f.num_vars
        )));
    }
    for (j, c) in f.clauses.iter().enumerate() {
        let t = c.iter().filter(|&&v| asg[v]).count();
        if t != 1 {
            return Err(Error::InvalidAssignment(format!(
                "clause {} has {t} true literals",
                j + 1
            )));
        }
    }
    Ok(())
}

/// Agent indices of the reduced instance.
///
/// Clause `j` owns agents `c_j = 2j` and `d_j = 2j+1`. Variable `i` owns a
/// block of 21 agents after all clause agents: its three occurrence agents
/// followed by six `z` agents per occurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatLayout {
    m: usize,
    n: usize,
    /// `literal[j][l]` is the `(variable, occurrence)` of the `l`-th literal
    /// of clause `j`.
    literal: Vec<[(usize, usize); 3]>,
}

impl SatLayout {
    pub fn new(f: &OneInThreeFormula) -> Self {
        let mut seen = vec![0usize; f.num_vars];
        let literal = f
            .clauses
            .iter()
            .map(|c| {
                c.map(|v| {
                    seen[v] += 1;
                    (v, seen[v] - 1)
                })
            })
            .collect();
        SatLayout {
            m: f.clauses.len(),
            n: f.num_vars,
            literal,
        }
    }

    pub fn num_agents(&self) -> usize {
        2 * self.m + 21 * self.n
    }

    pub fn c(&self, j: usize) -> u32 {
        (2 * j) as u32
    }

    pub fn d(&self, j: usize) -> u32 {
        (2 * j + 1) as u32
    }

    /// Agent of the `k`-th occurrence of variable `i`.
    pub fn x(&self, i: usize, k: usize) -> u32 {
        (2 * self.m + 21 * i + k) as u32
    }

    pub fn z(&self, i: usize, k: usize, l: usize) -> u32 {
        (2 * self.m + 21 * i + 3 + 6 * k + l) as u32
    }

    /// Agent of the `l`-th literal of clause `j`.
    pub fn y(&self, j: usize, l: usize) -> u32 {
        let (i, k) = self.literal[j][l];
        self.x(i, k)
    }

    pub fn names(&self) -> Vec<String> {
        let mut names = Vec::with_capacity(self.num_agents());
        for j in 1..=self.m {
            names.push(format!("c{j}"));
            names.push(format!("d{j}"));
        }
        for i in 1..=self.n {
            for k in 1..=3 {
                names.push(format!("x{i}.{k}"));
            }
            for k in 1..=3 {
                for l in 1..=6 {
                    names.push(format!("z{i}.{k}.{l}"));
                }
            }
        }
        names
    }

    /// Clause-part of the master list for clause `j`.
    fn clause_list(&self, j: usize) -> Vec<[u32; 2]> {
        let (c, d) = (self.c(j), self.d(j));
        let y = |l| self.y(j, l);
        vec![
            [c, d],
            [y(0), d],
            [y(2), c],
            [y(1), d],
            [y(1), c],
            [y(2), d],
            [y(0), c],
        ]
    }

    /// Variable-part of the master list for variable `i`.
    fn variable_list(&self, i: usize) -> Vec<[u32; 2]> {
        let x = |k| self.x(i, k);
        let mut out = vec![[x(0), x(1)], [x(1), x(2)], [x(0), x(2)]];
        for k in 0..3 {
            // The first fifteen entries are the six-agent instance without a
            // stable matching on x, z1..z5; the rest attach z6.
            let agent = |p: u32| if p == 0 { x(k) } else { self.z(i, k, p as usize - 1) };
            out.extend(INSTABLE_MASTER_LIST.iter().map(|&[p, q]| [agent(p), agent(q)]));
            out.push([x(k), self.z(i, k, 5)]);
            out.extend((0..5).map(|l| [self.z(i, k, l), self.z(i, k, 5)]));
        }
        out
    }

    /// Whether `g` is `{c_j, d_j, y}` for some clause `j`; returns `j`.
    fn clause_of(&self, g: &TupleSet) -> Option<usize> {
        let s = g.as_slice();
        let lim = (2 * self.m) as u32;
        (s.len() == 3 && s[0] < lim && s[0].is_multiple_of(2) && s[1] == s[0] + 1 && s[2] >= lim)
            .then_some(s[0] as usize / 2)
    }
}

/// The reduced instance: agents per clause and per variable occurrence, and
/// a master list of 2-sets whose tail lists the remaining 2-sets in
/// increasing index order.
pub fn sat_reduce(f: &OneInThreeFormula) -> Result<Instance> {
    let layout = SatLayout::new(f);
    let mut list: Vec<[u32; 2]> = Vec::new();
    for j in 0..layout.m {
        list.extend(layout.clause_list(j));
    }
    for i in 0..layout.n {
        list.extend(layout.variable_list(i));
    }
    let mut seen: HashSet<[u32; 2]> = HashSet::with_capacity(list.len());
    let mut sets: Vec<TupleSet> = Vec::new();
    for [p, q] in list {
        let key = [p.min(q), p.max(q)];
        if !seen.insert(key) {
            return Err(Error::MalformedFormula(format!("2-set {key:?} listed twice")));
        }
        sets.push(TupleSet::from_sorted(&key));
    }
    let n = layout.num_agents() as u32;
    for p in 0..n {
        for q in p + 1..n {
            if !seen.contains(&[p, q]) {
                sets.push(TupleSet::from_sorted(&[p, q]));
            }
        }
    }
    Instance::from_master_list(3, layout.names(), sets)
}

/// The stable matching built from a satisfying assignment: each clause with
/// its true literal, the three occurrence agents of every false variable
/// together, and the `z` agents in two fixed triples per occurrence.
pub fn sat_forward_matching(f: &OneInThreeFormula, asg: &[bool]) -> Result<Matching> {
    validate_assignment(f, asg)?;
    let layout = SatLayout::new(f);
    let mut groups = Vec::new();
    for (j, c) in f.clauses.iter().enumerate() {
        let l = c.iter().position(|&v| asg[v]).expect("validated");
        groups.push(TupleSet::new([layout.c(j), layout.d(j), layout.y(j, l)].map(|a| a as usize))?);
    }
    for i in 0..f.num_vars {
        if !asg[i] {
            groups.push(TupleSet::new((0..3).map(|k| layout.x(i, k) as usize))?);
        }
        for k in 0..3 {
            groups.push(TupleSet::new((0..3).map(|l| layout.z(i, k, l) as usize))?);
            groups.push(TupleSet::new((3..6).map(|l| layout.z(i, k, l) as usize))?);
        }
    }
    Ok(Matching::new(groups))
}

/// Reads the assignment off a stable matching of the reduced instance: a
/// variable is true when all its occurrence agents sit with a clause pair.
pub fn sat_backward_assignment(f: &OneInThreeFormula, m: &Matching) -> Result<Vec<bool>> {
    let layout = SatLayout::new(f);
    let n = layout.num_agents();
    for g in m.groups() {
        if g.len() != 3 || g.as_slice().iter().any(|&a| a as usize >= n) {
            return Err(Error::NotWellFormed(format!("group {g:?} is not a 3-set of the instance")));
        }
    }
    let mut asg = Vec::with_capacity(f.num_vars);
    for i in 0..f.num_vars {
        let with_clause = (0..3)
            .filter(|&k| {
                m.group_of(AgentId(layout.x(i, k)))
                    .and_then(|g| layout.clause_of(g))
                    .is_some()
            })
            .count();
        match with_clause {
            0 => asg.push(false),
            3 => asg.push(true),
            c => {
                return Err(Error::NotWellFormed(format!(
                    "variable {} has {c} of 3 occurrences matched to clauses",
                    i + 1
                )))
            }
        }
    }
    validate_assignment(f, &asg).map_err(|e| Error::NotWellFormed(e.to_string()))?;
    Ok(asg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stability::find_blocking;

    fn triple_formula() -> OneInThreeFormula {
        OneInThreeFormula::new(3, vec![[0, 1, 2]; 3]).unwrap()
    }

    #[test]
    fn validation() {
        assert!(matches!(
            OneInThreeFormula::new(3, vec![[0, 1, 2]; 2]),
            Err(Error::MalformedFormula(_))
        ));
        assert!(matches!(
            OneInThreeFormula::new(3, vec![[0, 0, 2]; 3]),
            Err(Error::MalformedFormula(_))
        ));
        let f = triple_formula();
        assert!(matches!(
            validate_assignment(&f, &[true, true, false]),
            Err(Error::InvalidAssignment(_))
        ));
    }

    #[test]
    fn forward_is_stable_and_round_trips() {
        let f = triple_formula();
        let inst = sat_reduce(&f).unwrap();
        assert_eq!(inst.n(), 69);
        for v in 0..3 {
            let asg: Vec<bool> = (0..3).map(|i| i == v).collect();
            let m = sat_forward_matching(&f, &asg).unwrap();
            assert_eq!(m.len(), 23);
            assert_eq!(find_blocking(&inst, &m).unwrap(), None);
            assert_eq!(sat_backward_assignment(&f, &m).unwrap(), asg);
        }
    }
}
