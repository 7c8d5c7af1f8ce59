//! Constructive instances: the six-agent instance without a stable
//! matching, the reduction from 1-in-3 positive 3-occurrence SAT, and the
//! reduction from perfect stable marriage with ties and master lists,
//! including the witness conversions in both directions.

mod gadgets;
mod instable;
mod sat;
mod smti;

pub use gadgets::{cutoff_gadget, cutoff_instance, tie_gadget, tie_gadget_instance, TiePattern};
pub use instable::{instable_instance, INSTABLE_MASTER_LIST};
pub use sat::{
    sat_backward_assignment, sat_forward_matching, sat_reduce, validate_assignment, OneInThreeFormula,
    SatLayout,
};
pub use smti::{
    smti_backward, smti_forward, smti_reduce, SmtiInstance, SmtiLayout, SmtiMatching, SmtiReduction,
};

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::instance::{Instance, PreferenceSource, TieBreak};
use crate::poset::Poset;
use crate::types::TupleSet;

/// A named piece of a three-dimensional instance with incomplete lists:
/// agents in master order (best first), the acceptable 3-sets, and a master
/// list of 2-sets from which every agent's list arises by deletion.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Fragment {
    pub agents: Vec<String>,
    pub triples: Vec<[String; 3]>,
    pub pairs: Vec<[String; 2]>,
}

impl Fragment {
    /// Appends `other`. Agents already present are not duplicated.
    pub fn extend(&mut self, other: Fragment) {
        let known: HashSet<String> = self.agents.iter().cloned().collect();
        self.agents
            .extend(other.agents.into_iter().filter(|a| !known.contains(a)));
        self.triples.extend(other.triples);
        self.pairs.extend(other.pairs);
    }

    /// The instance with `d = 3`, master order equal to the agent order, and
    /// lists restricted to the acceptable sets.
    pub fn build(&self) -> Result<Instance> {
        let index: HashMap<&str, usize> = self
            .agents
            .iter()
            .enumerate()
            .map(|(i, a)| (a.as_str(), i))
            .collect();
        let id = |name: &str| -> Result<usize> {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::invalid(format!("unknown agent {name}")))
        };
        let n = self.agents.len();
        let mut acc: Vec<HashSet<TupleSet>> = vec![HashSet::new(); n];
        for t in &self.triples {
            let g = TupleSet::new([id(&t[0])?, id(&t[1])?, id(&t[2])?])?;
            for a in g.iter() {
                acc[a.index()].insert(g.without(a));
            }
        }
        let mut lists: Vec<Vec<TupleSet>> = vec![Vec::new(); n];
        let mut placed: HashSet<(usize, TupleSet)> = HashSet::new();
        for p in &self.pairs {
            let s = TupleSet::new([id(&p[0])?, id(&p[1])?])?;
            for (a, list) in lists.iter_mut().enumerate() {
                if acc[a].contains(&s) && placed.insert((a, s.clone())) {
                    list.push(s.clone());
                }
            }
        }
        for (a, sets) in acc.iter().enumerate() {
            if lists[a].len() != sets.len() {
                return Err(Error::invalid(format!(
                    "master list of 2-sets misses an acceptable set of {}",
                    self.agents[a]
                )));
            }
        }
        let acceptability = lists.iter().map(|l| l.to_vec()).collect();
        Instance::new(
            3,
            self.agents.clone(),
            PreferenceSource::MasterPoset {
                poset: Poset::chain(n),
                tiebreak: TieBreak::Explicit(lists),
            },
            Some(acceptability),
        )
    }
}

pub(crate) fn triple(a: &str, b: &str, c: &str) -> [String; 3] {
    [a.to_string(), b.to_string(), c.to_string()]
}

pub(crate) fn pair(a: &str, b: &str) -> [String; 2] {
    [a.to_string(), b.to_string()]
}
