//! Fixtures and independent oracles shared by the integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::HashMap;

use mdsr_core::{default_names, AgentId, Instance, Matching, Poset, PreferenceSource, TieBreak, TupleSet};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn names(s: &str) -> Vec<String> {
    s.chars().map(|c| c.to_string()).collect()
}

/// Sets written as strings of single-letter agent names, e.g. `"bd"`.
pub fn letter_sets(list: &str) -> Vec<TupleSet> {
    list.split_whitespace()
        .map(|s| TupleSet::new(s.chars().map(|c| (c as u8 - b'a') as usize)).unwrap())
        .collect()
}

/// Sets written as strings of 1-based digits, e.g. `"23"` for `{a2, a3}`.
pub fn digit_sets(list: &str) -> Vec<TupleSet> {
    list.split_whitespace()
        .map(|s| TupleSet::new(s.chars().map(|c| c.to_digit(10).unwrap() as usize - 1)).unwrap())
        .collect()
}

pub fn group(s: &str) -> Vec<usize> {
    s.chars().map(|c| (c as u8 - b'a') as usize).collect()
}

pub fn matching(groups: &str) -> Matching {
    let gs: Vec<Vec<usize>> = groups.split_whitespace().map(group).collect();
    Matching::from_groups(&gs).unwrap()
}

pub const SIX_AGENT_MASTER: &str = "ab ac ad ae af bc bd be bf cd ce cf de df ef";

/// Six agents `a..f`, `d = 3`, with explicit lists that follow a master
/// list for `d`, `e` and `f` only.
pub fn six_agents() -> Instance {
    let lists = [
        "bd bc be bf cd ce cf de df ef",
        "ad ac ae af cd ce cf de df ef",
        "ab ad ae bd af be bf de df ef",
        "ab ac ae af bc be bf ce cf ef",
        "ab ac ad af bc bd bf cd cf df",
        "ab ac ad ae bc bd be cd ce de",
    ]
    .iter()
    .map(|l| letter_sets(l))
    .collect();
    Instance::from_explicit(3, names("abcdef"), lists).unwrap()
}

/// Five agents whose profile is one deletion away from a strict order.
pub fn lambda_example() -> Instance {
    let lists = [
        "23 34 25 24 35 45",
        "13 34 15 14 35 45",
        "12 14 25 24 15 45",
        "15 12 25 13 35 23",
        "23 34 12 24 13 14",
    ]
    .iter()
    .map(|l| digit_sets(l))
    .collect();
    Instance::from_explicit(3, default_names(5), lists).unwrap()
}

/// Four agents, `d = 3`, master list `12 ≻ 24 ≻ 13 ≻ 34 ≻ 23 ≻ 14`.
pub fn small_master_list() -> Vec<TupleSet> {
    digit_sets("12 24 13 34 23 14")
}

pub fn poset_from(pairs: &[(usize, usize)], n: usize) -> Poset {
    let ids: Vec<(AgentId, AgentId)> = pairs.iter().map(|&(a, b)| (AgentId::from(a), AgentId::from(b))).collect();
    mdsr_core::validate_poset(&ids, n).unwrap()
}

/// A random poset: a hidden random permutation orients every pair, and each
/// pair is kept with probability `density`.
pub fn random_poset<R: Rng>(rng: &mut R, n: usize, density: f64) -> (Poset, Vec<(usize, usize)>) {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                pairs.push((perm[i], perm[j]));
            }
        }
    }
    (poset_from(&pairs, n), pairs)
}

/// Transitive closure by Floyd–Warshall, `gt[a][b]` meaning `a ≻ b`.
pub fn closure(pairs: &[(usize, usize)], n: usize) -> Vec<Vec<bool>> {
    let mut gt = vec![vec![false; n]; n];
    for &(a, b) in pairs {
        gt[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if gt[i][k] {
                for j in 0..n {
                    if gt[k][j] {
                        gt[i][j] = true;
                    }
                }
            }
        }
    }
    gt
}

/// Size of a largest antichain by trying every subset.
pub fn max_antichain(gt: &[Vec<bool>]) -> usize {
    let n = gt.len();
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let anti = members
            .iter()
            .all(|&a| members.iter().all(|&b| a == b || (!gt[a][b] && !gt[b][a])));
        if anti {
            best = best.max(members.len());
        }
    }
    best
}

/// Dominance by trying every bijection.
pub fn dominates_by_bijection(gt: &[Vec<bool>], t: &[usize], t2: &[usize]) -> bool {
    if t == t2 {
        return false;
    }
    fn go(gt: &[Vec<bool>], t: &[usize], rest: &mut Vec<usize>) -> bool {
        let Some((&a, tail)) = t.split_first() else {
            return true;
        };
        for k in 0..rest.len() {
            let b = rest[k];
            if a == b || gt[a][b] {
                rest.remove(k);
                let ok = go(gt, tail, rest);
                rest.insert(k, b);
                if ok {
                    return true;
                }
            }
        }
        false
    }
    go(gt, t, &mut t2.to_vec())
}

pub fn all_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                go(cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Per-agent rank of every listed set, from the public preference lists.
pub fn ranks(inst: &Instance) -> Vec<HashMap<Vec<u32>, usize>> {
    (0..inst.n())
        .map(|a| {
            inst.preference_list(AgentId::from(a))
                .unwrap()
                .iter()
                .enumerate()
                .map(|(r, t)| (t.as_slice().to_vec(), r))
                .collect()
        })
        .collect()
}

/// The lexicographically least blocking `d`-set, scanning every subset.
pub fn naive_blocking(inst: &Instance, m: &Matching) -> Option<Vec<usize>> {
    let rank = ranks(inst);
    let mut current: Vec<Option<usize>> = vec![None; inst.n()];
    for g in m.groups() {
        for a in g.iter() {
            let rest: Vec<u32> = g.as_slice().iter().copied().filter(|&x| x != a.0).collect();
            current[a.index()] = Some(rank[a.index()][&rest]);
        }
    }
    all_subsets(inst.n(), inst.d()).into_iter().find(|g| {
        g.iter().all(|&a| {
            let rest: Vec<u32> = g.iter().filter(|&&x| x != a).map(|&x| x as u32).collect();
            match (rank[a].get(&rest), current[a]) {
                (None, _) => false,
                (Some(_), None) => true,
                (Some(&r), Some(c)) => r < c,
            }
        })
    })
}

/// Whether every list respects dominance under the strict order `order`
/// (best first): a set whose sorted ranks are componentwise no worse must
/// come first.
pub fn derived_from_order(inst: &Instance, order: &[usize]) -> bool {
    let mut rank = vec![0; order.len()];
    for (r, &a) in order.iter().enumerate() {
        rank[a] = r;
    }
    let key = |t: &TupleSet| {
        let mut v: Vec<usize> = t.as_slice().iter().map(|&a| rank[a as usize]).collect();
        v.sort_unstable();
        v
    };
    (0..inst.n()).all(|a| {
        let list = inst.preference_list(AgentId::from(a)).unwrap();
        let keys: Vec<Vec<usize>> = list.iter().map(key).collect();
        (0..keys.len()).all(|i| {
            (i + 1..keys.len()).all(|j| !keys[j].iter().zip(&keys[i]).all(|(x, y)| x <= y))
        })
    })
}

/// A uniformly shuffled linear extension of dominance over the `(d-1)`-sets
/// not containing `a`.
pub fn random_extension<R: Rng>(rng: &mut R, gt: &[Vec<bool>], a: usize, d: usize) -> Vec<TupleSet> {
    let others: Vec<usize> = (0..gt.len()).filter(|&x| x != a).collect();
    let mut pool: Vec<Vec<usize>> = all_subsets(others.len(), d - 1)
        .into_iter()
        .map(|s| s.iter().map(|&i| others[i]).collect())
        .collect();
    let mut out = Vec::new();
    while !pool.is_empty() {
        let free: Vec<usize> = (0..pool.len())
            .filter(|&i| !(0..pool.len()).any(|j| j != i && dominates_by_bijection(gt, &pool[j], &pool[i])))
            .collect();
        let pick = *free.choose(rng).unwrap();
        out.push(TupleSet::new(pool.swap_remove(pick)).unwrap());
    }
    out
}

/// A poset-derived instance with random explicit tiebreak lists.
pub fn random_explicit_instance<R: Rng>(rng: &mut R, n: usize, d: usize, density: f64) -> Instance {
    let (poset, pairs) = random_poset(rng, n, density);
    let gt = closure(&pairs, n);
    let lists = (0..n).map(|a| random_extension(rng, &gt, a, d)).collect();
    Instance::new(
        d,
        default_names(n),
        PreferenceSource::MasterPoset {
            poset,
            tiebreak: TieBreak::Explicit(lists),
        },
        None,
    )
    .unwrap()
}

/// Two chains `a_1 ≻ a_2 ≻ …` and `b_1 ≻ b_2 ≻ …` of length `len` where
/// `a_i ⊥ b_i` and `a_i ≻ b_{i+1}`, `b_i ≻ a_{i+1}`. Agents `2i` and `2i+1`
/// are `a_{i+1}` and `b_{i+1}`.
pub fn twin_chains(len: usize) -> Poset {
    let mut pairs = Vec::new();
    for i in 0..len.saturating_sub(1) {
        for (x, y) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            pairs.push((2 * i + x, 2 * (i + 1) + y));
        }
    }
    poset_from(&pairs, 2 * len)
}
