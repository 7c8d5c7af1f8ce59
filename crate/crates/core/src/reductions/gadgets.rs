//! Tie gadget and cut-off gadget used by the SMTI reduction.
//!
//! Agent names follow one scheme shared with the reduction: `a{i}` for man
//! `i`, `b{j}` for woman `j`, `c{i}.{j}` for an acceptable pair, `c'{i}.{j}`
//! and `d{k}.{i}.{j}` for the tie of man `i` between women `j` and `j+1`,
//! and `x{k}.{i}` for the cut-off gadget of man `i`. Indices are 1-based.

use super::{pair, triple, Fragment};
use crate::error::Result;
use crate::instance::Instance;
use crate::types::Matching;

pub(crate) fn a_name(i: usize) -> String {
    format!("a{i}")
}

pub(crate) fn b_name(j: usize) -> String {
    format!("b{j}")
}

pub(crate) fn c_name(i: usize, j: usize) -> String {
    format!("c{i}.{j}")
}

pub(crate) fn cp_name(i: usize, j: usize) -> String {
    format!("c'{i}.{j}")
}

pub(crate) fn d_name(k: usize, i: usize, j: usize) -> String {
    format!("d{k}.{i}.{j}")
}

pub(crate) fn x_name(k: usize, i: usize) -> String {
    format!("x{k}.{i}")
}

/// How a tie gadget is completed, depending on the partner of its man.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TiePattern {
    /// The man is matched to the second woman of the tie.
    Second,
    /// The man is matched to the first woman of the tie.
    First,
    /// The man is matched outside the tie.
    Neither,
}

/// Internal 3-sets completing tie gadget `(i, j)` under `pattern`.
pub(crate) fn tie_completion(i: usize, j: usize, pattern: TiePattern) -> Vec<[String; 3]> {
    let d = |k| d_name(k, i, j);
    match pattern {
        TiePattern::First => vec![
            triple(&d(1), &d(2), &d(8)),
            triple(&d(3), &d(4), &d(5)),
        ],
        TiePattern::Second | TiePattern::Neither => vec![
            triple(&c_name(i, j), &d(5), &d(8)),
            triple(&d(2), &d(3), &d(7)),
            triple(&d(1), &d(4), &d(6)),
        ],
    }
}

/// The `d` agents of a tie gadget, best first.
pub(crate) fn tie_d_agents(i: usize, j: usize) -> Vec<String> {
    (1..=8).map(|k| d_name(k, i, j)).collect()
}

/// The 2-sets ranked among the `d` agents and `c{i}.{j}`.
pub(crate) fn tie_d_pairs(i: usize, j: usize) -> Vec<[String; 2]> {
    let d = |k| d_name(k, i, j);
    let c = c_name(i, j);
    let mut out: Vec<[String; 2]> = [
        (1, 2),
        (1, 4),
        (2, 3),
        (3, 4),
        (1, 6),
        (3, 5),
        (4, 5),
        (2, 7),
        (3, 7),
        (1, 8),
        (2, 8),
        (4, 6),
        (5, 8),
    ]
    .iter()
    .map(|&(p, q)| pair(&d(p), &d(q)))
    .collect();
    out.push(pair(&d(5), &c));
    out.push(pair(&d(8), &c));
    out
}

/// The 2-sets ranked by the man and the two women of the tie.
pub(crate) fn tie_man_pairs(i: usize, j: usize) -> Vec<[String; 2]> {
    let (a, bj, bk) = (a_name(i), b_name(j), b_name(j + 1));
    let (c, c1, cp) = (c_name(i, j), c_name(i, j + 1), cp_name(i, j));
    vec![
        pair(&a, &c),
        pair(&a, &c1),
        pair(&a, &cp),
        pair(&bj, &c),
        pair(&bk, &c1),
        pair(&bj, &cp),
    ]
}

/// The acceptable 3-sets of tie gadget `(i, j)`, including the two
/// man-woman 3-sets through `c{i}.{j}` and `c{i}.{j+1}`.
pub(crate) fn tie_triples(i: usize, j: usize) -> Vec<[String; 3]> {
    let d = |k| d_name(k, i, j);
    let (a, bj, bk) = (a_name(i), b_name(j), b_name(j + 1));
    let (c, c1, cp) = (c_name(i, j), c_name(i, j + 1), cp_name(i, j));
    vec![
        triple(&a, &bj, &c),
        triple(&a, &bk, &c1),
        triple(&a, &bj, &cp),
        triple(&c, &d(5), &d(8)),
        triple(&d(1), &d(2), &d(8)),
        triple(&d(1), &d(4), &d(6)),
        triple(&d(2), &d(3), &d(7)),
        triple(&d(3), &d(4), &d(5)),
    ]
}

/// Standalone tie gadget for man `i` tying women `j` and `j+1`: the eight
/// `d` agents, the man, both women and the three `c` agents, in master order.
pub fn tie_gadget(i: usize, j: usize) -> Fragment {
    let mut agents = tie_d_agents(i, j);
    agents.extend([
        a_name(i),
        b_name(j),
        b_name(j + 1),
        c_name(i, j),
        c_name(i, j + 1),
        cp_name(i, j),
    ]);
    let mut pairs = tie_d_pairs(i, j);
    pairs.extend(tie_man_pairs(i, j));
    pairs.push(pair(&a_name(i), &b_name(j)));
    pairs.push(pair(&a_name(i), &b_name(j + 1)));
    Fragment {
        agents,
        triples: tie_triples(i, j),
        pairs,
    }
}

/// The tie gadget as an instance, together with its characteristic
/// matchings: the man with the second woman, the man with the first woman,
/// and the completion that leaves the man out.
pub fn tie_gadget_instance(i: usize, j: usize) -> Result<(Instance, [Matching; 3])> {
    let inst = tie_gadget(i, j).build()?;
    let resolve = |groups: Vec<[String; 3]>| -> Result<Matching> {
        let ids: Vec<Vec<usize>> = groups
            .iter()
            .map(|g| {
                g.iter()
                    .map(|name| inst.agent_by_name(name).expect("gadget agent").index())
                    .collect()
            })
            .collect();
        Matching::from_groups(&ids)
    };
    let mut second = tie_completion(i, j, TiePattern::Second);
    second.push(triple(&a_name(i), &b_name(j + 1), &c_name(i, j + 1)));
    let mut first = tie_completion(i, j, TiePattern::First);
    first.push(triple(&a_name(i), &b_name(j), &c_name(i, j)));
    let neither = tie_completion(i, j, TiePattern::Neither);
    let ms = [resolve(second)?, resolve(first)?, resolve(neither)?];
    Ok((inst, ms))
}

/// Cut-off gadget for man `i`: `a{i}` followed by `x2.{i} .. x6.{i}`.
pub fn cutoff_gadget(i: usize) -> Fragment {
    let a = a_name(i);
    let x = |k| x_name(k, i);
    let mut agents = vec![a.clone()];
    agents.extend((2..=6).map(x));
    Fragment {
        agents,
        triples: vec![
            triple(&a, &x(5), &x(6)),
            triple(&x(2), &x(4), &x(6)),
            triple(&x(3), &x(4), &x(5)),
        ],
        pairs: cutoff_pairs(i),
    }
}

pub(crate) fn cutoff_pairs(i: usize) -> Vec<[String; 2]> {
    let a = a_name(i);
    let x = |k| x_name(k, i);
    vec![
        pair(&x(2), &x(4)),
        pair(&a, &x(5)),
        pair(&a, &x(6)),
        pair(&x(3), &x(4)),
        pair(&x(3), &x(5)),
        pair(&x(2), &x(6)),
        pair(&x(4), &x(5)),
        pair(&x(4), &x(6)),
        pair(&x(5), &x(6)),
    ]
}

/// The cut-off gadget of man 1 as a six-agent instance.
pub fn cutoff_instance() -> Instance {
    cutoff_gadget(1).build().expect("fixed gadget is valid")
}
