//! Document formats: JSON instances, matchings and SMTI inputs, plus the
//! line-based formula and assignment formats.
//!
//! Every JSON document carries `"version": "1"`. Serialisation is pretty
//! printed with a trailing newline, and parsing a serialised document and
//! writing it again reproduces it byte for byte.

use std::collections::HashMap;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Instance, PreferenceSource, TieBreak};
use crate::poset::{validate_poset, Poset};
use crate::reductions::{OneInThreeFormula, SmtiInstance, SmtiMatching};
use crate::types::{AgentId, Matching, TupleSet};

const VERSION: &str = "1";

type SetLists = IndexMap<String, Vec<Vec<String>>>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    version: String,
    d: usize,
    agents: Vec<String>,
    source: SourceDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    acceptability: Option<SetLists>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum SourceDoc {
    Explicit {
        lists: SetLists,
    },
    MasterListSets {
        list: Vec<Vec<String>>,
    },
    MasterPoset {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pairs: Option<Vec<[String; 2]>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ranking: Option<Vec<String>>,
        tiebreak: TieBreakDoc,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum TieBreakDoc {
    Named(String),
    Explicit { explicit: SetLists },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatchingDoc {
    version: String,
    groups: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SmtiDoc {
    version: String,
    men: Vec<String>,
    women: Vec<Vec<String>>,
    acceptable: IndexMap<String, Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SmtiMatchingDoc {
    version: String,
    pairs: Vec<[String; 2]>,
}

fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        Error::parse(
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })
}

fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialise");
    s.push('\n');
    s
}

fn check_version(v: &str) -> Result<()> {
    if v == VERSION {
        Ok(())
    } else {
        Err(Error::parse("version", format!("unsupported version {v:?}, expected \"1\"")))
    }
}

/// Name lookup with field-path diagnostics.
struct Names<'a> {
    index: HashMap<&'a str, usize>,
}

impl<'a> Names<'a> {
    fn new(agents: &'a [String], field: &str) -> Result<Self> {
        let mut index = HashMap::with_capacity(agents.len());
        for (i, a) in agents.iter().enumerate() {
            if index.insert(a.as_str(), i).is_some() {
                return Err(Error::parse(format!("{field}[{i}]"), format!("duplicate name {a:?}")));
            }
        }
        Ok(Names { index })
    }

    fn id(&self, name: &str, at: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::parse(at, format!("unknown agent {name:?}")))
    }

    fn set(&self, names: &[String], at: &str) -> Result<TupleSet> {
        let ids = names
            .iter()
            .enumerate()
            .map(|(k, n)| self.id(n, &format!("{at}[{k}]")))
            .collect::<Result<Vec<_>>>()?;
        TupleSet::new(ids).map_err(|_| Error::parse(at, "set repeats an agent"))
    }

    fn sets(&self, list: &[Vec<String>], at: &str) -> Result<Vec<TupleSet>> {
        list.iter()
            .enumerate()
            .map(|(r, s)| self.set(s, &format!("{at}[{r}]")))
            .collect()
    }

    /// Per-agent lists keyed by name; agents absent from the map get an
    /// empty list.
    fn per_agent(&self, n: usize, map: &SetLists, at: &str) -> Result<Vec<Vec<TupleSet>>> {
        let mut out = vec![Vec::new(); n];
        for (name, list) in map {
            let a = self.id(name, at)?;
            out[a] = self.sets(list, &format!("{at}.{name}"))?;
        }
        Ok(out)
    }
}

fn set_names(inst: &Instance, t: &TupleSet) -> Vec<String> {
    t.iter().map(|a| inst.name(a).to_string()).collect()
}

fn lists_doc(inst: &Instance, lists: &[Vec<TupleSet>]) -> SetLists {
    lists
        .iter()
        .enumerate()
        .map(|(a, l)| {
            (
                inst.names()[a].clone(),
                l.iter().map(|t| set_names(inst, t)).collect(),
            )
        })
        .collect()
}

/// Parses and validates an instance document.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let doc: InstanceDoc = from_json(text)?;
    check_version(&doc.version)?;
    let names = Names::new(&doc.agents, "agents")?;
    let n = doc.agents.len();
    let source = match &doc.source {
        SourceDoc::Explicit { lists } => {
            PreferenceSource::Explicit(names.per_agent(n, lists, "source.lists")?)
        }
        SourceDoc::MasterListSets { list } => {
            PreferenceSource::MasterListSets(names.sets(list, "source.list")?)
        }
        SourceDoc::MasterPoset {
            pairs,
            ranking,
            tiebreak,
        } => {
            let poset = match (pairs, ranking) {
                (Some(pairs), None) => {
                    let ids = pairs
                        .iter()
                        .enumerate()
                        .map(|(k, [a, b])| {
                            let at = format!("source.pairs[{k}]");
                            Ok((AgentId::from(names.id(a, &at)?), AgentId::from(names.id(b, &at)?)))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    validate_poset(&ids, n)?
                }
                (None, Some(ranking)) => {
                    let ids = ranking
                        .iter()
                        .enumerate()
                        .map(|(k, a)| Ok(AgentId::from(names.id(a, &format!("source.ranking[{k}]"))?)))
                        .collect::<Result<Vec<_>>>()?;
                    if ids.len() != n {
                        return Err(Error::parse(
                            "source.ranking",
                            format!("ranking lists {} of {n} agents", ids.len()),
                        ));
                    }
                    Poset::from_ranking(&ids)?
                }
                (None, None) => validate_poset(&[], n)?,
                (Some(_), Some(_)) => {
                    return Err(Error::parse("source", "give either pairs or ranking, not both"))
                }
            };
            let tiebreak = match tiebreak {
                TieBreakDoc::Named(s) if s == "canonical" => TieBreak::Canonical,
                TieBreakDoc::Named(s) => {
                    return Err(Error::parse("source.tiebreak", format!("unknown tiebreak {s:?}")))
                }
                TieBreakDoc::Explicit { explicit } => {
                    TieBreak::Explicit(names.per_agent(n, explicit, "source.tiebreak.explicit")?)
                }
            };
            PreferenceSource::MasterPoset { poset, tiebreak }
        }
    };
    let acceptability = match &doc.acceptability {
        Some(map) => Some(names.per_agent(n, map, "acceptability")?),
        None => None,
    };
    Instance::new(doc.d, doc.agents.clone(), source, acceptability)
}

/// Serialises an instance. Acceptable sets are written in each agent's
/// preference order.
pub fn serialize_instance(inst: &Instance) -> String {
    let source = match inst.source() {
        PreferenceSource::Explicit(lists) => SourceDoc::Explicit {
            lists: lists_doc(inst, lists),
        },
        PreferenceSource::MasterListSets(list) => SourceDoc::MasterListSets {
            list: list.iter().map(|t| set_names(inst, t)).collect(),
        },
        PreferenceSource::MasterPoset { poset, tiebreak } => {
            let (pairs, ranking) = match poset.ranking() {
                Some(r) => (None, Some(r.iter().map(|&a| inst.name(a).to_string()).collect())),
                None => (
                    Some(
                        poset
                            .source_pairs()
                            .iter()
                            .map(|&(a, b)| [inst.name(a).to_string(), inst.name(b).to_string()])
                            .collect(),
                    ),
                    None,
                ),
            };
            let tiebreak = match tiebreak {
                TieBreak::Canonical => TieBreakDoc::Named("canonical".to_string()),
                TieBreak::Explicit(lists) => TieBreakDoc::Explicit {
                    explicit: lists_doc(inst, lists),
                },
            };
            SourceDoc::MasterPoset {
                pairs,
                ranking,
                tiebreak,
            }
        }
    };
    let acceptability = (!inst.is_complete()).then(|| {
        let lists: Vec<Vec<TupleSet>> = (0..inst.n())
            .map(|a| inst.preference_list(AgentId::from(a)).expect("incomplete lists are small"))
            .collect();
        lists_doc(inst, &lists)
    });
    to_json(&InstanceDoc {
        version: VERSION.to_string(),
        d: inst.d(),
        agents: inst.names().to_vec(),
        source,
        acceptability,
    })
}

/// Parses a matching document against `inst`. Groups must be valid for the
/// instance.
pub fn parse_matching(inst: &Instance, text: &str) -> Result<Matching> {
    let doc: MatchingDoc = from_json(text)?;
    check_version(&doc.version)?;
    let names = Names::new(inst.names(), "agents")?;
    let m = Matching::new(names.sets(&doc.groups, "groups")?);
    inst.check_matching(&m)?;
    Ok(m)
}

/// Serialises a matching with groups and members in index order.
pub fn serialize_matching(inst: &Instance, m: &Matching) -> String {
    to_json(&MatchingDoc {
        version: VERSION.to_string(),
        groups: m.groups().iter().map(|g| set_names(inst, g)).collect(),
    })
}

pub fn parse_smti(text: &str) -> Result<SmtiInstance> {
    let doc: SmtiDoc = from_json(text)?;
    check_version(&doc.version)?;
    let flat: Vec<String> = doc.women.iter().flatten().cloned().collect();
    let women = Names::new(&flat, "women")?;
    let men = Names::new(&doc.men, "men")?;
    let mut acceptable = vec![Vec::new(); doc.men.len()];
    for (man, list) in &doc.acceptable {
        let i = men.id(man, "acceptable")?;
        acceptable[i] = list
            .iter()
            .enumerate()
            .map(|(k, w)| women.id(w, &format!("acceptable.{man}[{k}]")))
            .collect::<Result<_>>()?;
    }
    SmtiInstance::new(doc.men, doc.women, acceptable)
}

pub fn serialize_smti(s: &SmtiInstance) -> String {
    let acceptable = s
        .men()
        .iter()
        .enumerate()
        .map(|(i, m)| {
            (
                m.clone(),
                s.acceptable(i).iter().map(|&j| s.women()[j].clone()).collect(),
            )
        })
        .collect();
    to_json(&SmtiDoc {
        version: VERSION.to_string(),
        men: s.men().to_vec(),
        women: s.women_groups().to_vec(),
        acceptable,
    })
}

pub fn parse_smti_matching(s: &SmtiInstance, text: &str) -> Result<SmtiMatching> {
    let doc: SmtiMatchingDoc = from_json(text)?;
    check_version(&doc.version)?;
    let men = Names::new(s.men(), "men")?;
    let women = Names::new(s.women(), "women")?;
    let pairs = doc
        .pairs
        .iter()
        .enumerate()
        .map(|(k, [m, w])| {
            let at = format!("pairs[{k}]");
            Ok((men.id(m, &at)?, women.id(w, &at)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SmtiMatching::new(pairs))
}

pub fn serialize_smti_matching(s: &SmtiInstance, m: &SmtiMatching) -> String {
    to_json(&SmtiMatchingDoc {
        version: VERSION.to_string(),
        pairs: m
            .pairs()
            .iter()
            .map(|&(i, j)| [s.men()[i].clone(), s.women()[j].clone()])
            .collect(),
    })
}

/// Meaningful lines with their 1-based numbers; `c` lines are comments.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !(l.starts_with('c') && (l.len() == 1 || l.as_bytes()[1] == b' ')))
}

/// Parses `p oit3 <vars> <clauses>` followed by one clause per line of
/// three 1-based variable indices.
pub fn parse_formula(text: &str) -> Result<OneInThreeFormula> {
    let mut lines = content_lines(text);
    let (ln, header) = lines
        .next()
        .ok_or_else(|| Error::parse("line 1", "missing header"))?;
    let at = |ln: usize| format!("line {ln}");
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 4 || h[0] != "p" || h[1] != "oit3" {
        return Err(Error::parse(at(ln), "expected `p oit3 <vars> <clauses>`"));
    }
    let num = |s: &str, ln: usize| -> Result<usize> {
        s.parse()
            .map_err(|_| Error::parse(at(ln), format!("expected a non-negative integer, got {s:?}")))
    };
    let vars = num(h[2], ln)?;
    let count = num(h[3], ln)?;
    let mut clauses = Vec::with_capacity(count);
    for (ln, line) in lines {
        let lits = line
            .split_whitespace()
            .map(|t| num(t, ln))
            .collect::<Result<Vec<_>>>()?;
        // A trailing 0 terminator is accepted.
        let lits = match lits.as_slice() {
            [x, y, z] | [x, y, z, 0] => [*x, *y, *z],
            _ => return Err(Error::parse(at(ln), "expected three variable indices")),
        };
        if lits.contains(&0) {
            return Err(Error::parse(at(ln), "variables are numbered from 1"));
        }
        clauses.push(lits.map(|v| v - 1));
    }
    if clauses.len() != count {
        return Err(Error::parse(
            "header",
            format!("header declares {count} clauses, found {}", clauses.len()),
        ));
    }
    OneInThreeFormula::new(vars, clauses)
}

pub fn serialize_formula(f: &OneInThreeFormula) -> String {
    let mut out = format!("p oit3 {} {}\n", f.num_vars(), f.clauses().len());
    for c in f.clauses() {
        out.push_str(&format!("{} {} {}\n", c[0] + 1, c[1] + 1, c[2] + 1));
    }
    out
}

/// Parses signed literals (`3` true, `-3` false), optionally prefixed by
/// `v` and terminated by `0`. Every variable must appear exactly once.
pub fn parse_assignment(text: &str, num_vars: usize) -> Result<Vec<bool>> {
    let mut asg: Vec<Option<bool>> = vec![None; num_vars];
    for (ln, line) in content_lines(text) {
        let at = format!("line {ln}");
        for tok in line.split_whitespace() {
            if tok == "v" {
                continue;
            }
            let lit: i64 = tok
                .parse()
                .map_err(|_| Error::parse(&at, format!("expected a literal, got {tok:?}")))?;
            if lit == 0 {
                continue;
            }
            let v = lit.unsigned_abs() as usize;
            if v > num_vars {
                return Err(Error::parse(&at, format!("variable {v} out of range")));
            }
            if asg[v - 1].replace(lit > 0).is_some() {
                return Err(Error::parse(&at, format!("variable {v} assigned twice")));
            }
        }
    }
    asg.iter()
        .enumerate()
        .map(|(v, x)| x.ok_or_else(|| Error::parse("assignment", format!("variable {} unassigned", v + 1))))
        .collect()
}

pub fn serialize_assignment(asg: &[bool]) -> String {
    let mut out: Vec<String> = asg
        .iter()
        .enumerate()
        .map(|(v, &t)| if t { format!("{}", v + 1) } else { format!("-{}", v + 1) })
        .collect();
    out.push("0".to_string());
    out.join(" ") + "\n"
}
