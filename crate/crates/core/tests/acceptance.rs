//! One line per acceptance criterion. Exits nonzero if any criterion fails.
//!
//! Run with `cargo test -p mdsr-core --test acceptance`.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use mdsr_core::distance::deletion_distance;
use mdsr_core::reductions::{
    cutoff_instance, instable_instance, sat_backward_assignment, sat_forward_matching, sat_reduce, smti_reduce,
    tie_gadget_instance, OneInThreeFormula, SmtiInstance, SmtiMatching,
};
use mdsr_core::solvers::{
    fpt_dp_solve_with, greedy_big_d_solve, is_local, locality_bound, strict_order_solve,
};
use mdsr_core::stability::{brute_force_solve, check_blocking, enumerate_stable, enumerate_stable_with, is_stable};
use mdsr_core::{default_names, verify_lpo, AgentId, Instance, Limits, Matching, Poset, SolveConfig, TupleSet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const C1_LIMIT: Duration = Duration::from_secs(1);
const C2_LIMIT: Duration = Duration::from_secs(2);
const C2_LARGE_N: usize = 1_000_000;
const C3_INSTANCES: usize = 200;
const C3_LIMIT: Duration = Duration::from_secs(60);
const C4_POSETS: usize = 1000;
const C4_BRUTE_WIDTH_N: usize = 12;
const C6_LIMIT: Duration = Duration::from_secs(5);
const C7_SMTI_INSTANCES: usize = 40;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(t: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(t < limit, format!("{what} took {t:.2?}, limit {limit:?}"))
}

fn c1() -> Verdict {
    const ROWS: [(&str, &str); 10] = [
        ("abc def", "ade"),
        ("abd cef", "ace"),
        ("abe cdf", "bcd"),
        ("abf cde", "acd"),
        ("acd bef", "abe"),
        ("ace bdf", "abe"),
        ("acf bde", "abe"),
        ("ade bcf", "abe"),
        ("adf bce", "abe"),
        ("aef bcd", "acd"),
    ];
    let start = Instant::now();
    let inst = instable_instance();
    let none = brute_force_solve(&inst).map_err(|e| e.to_string())?;
    ensure(none.is_none(), "a stable matching was found")?;
    for (m, g) in ROWS {
        let g = TupleSet::new(group(g)).unwrap();
        let hit = check_blocking(&inst, &matching(m), &g).map_err(|e| e.to_string())?;
        ensure(hit.is_some(), format!("{g:?} does not block {m}"))?;
    }
    let t = start.elapsed();
    within(t, C1_LIMIT, "search and checks")?;
    Ok(format!("no stable matching, 10/10 rows blocked, {t:.2?}"))
}

fn c2() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut cases = 0;
    for d in 2..=4 {
        for n in d..=9 {
            for shuffled in [false, true] {
                let mut order: Vec<usize> = (0..n).collect();
                if shuffled {
                    order.shuffle(&mut rng);
                }
                let ranking: Vec<AgentId> = order.iter().map(|&a| AgentId::from(a)).collect();
                let inst = Instance::from_poset(d, default_names(n), Poset::from_ranking(&ranking).unwrap())
                    .map_err(|e| e.to_string())?;
                let groups: Vec<Vec<usize>> = order.chunks_exact(d).map(|c| c.to_vec()).collect();
                let blocks = Matching::from_groups(&groups).unwrap();
                let all = enumerate_stable(&inst).map_err(|e| e.to_string())?;
                ensure(all == vec![blocks], format!("d={d} n={n}: {} stable matchings", all.len()))?;
                cases += 1;
            }
        }
    }
    let order: Vec<AgentId> = (0..C2_LARGE_N as u32).rev().map(AgentId).collect();
    let inst = Instance::from_poset(3, default_names(C2_LARGE_N), Poset::from_ranking(&order).unwrap())
        .map_err(|e| e.to_string())?;
    let start = Instant::now();
    let m = strict_order_solve(&inst).map_err(|e| e.to_string())?;
    let t = start.elapsed();
    ensure(m.len() == C2_LARGE_N / 3, "wrong number of groups")?;
    ensure(m.group_of(AgentId(C2_LARGE_N as u32 - 1)).map(|g| g.as_slice().to_vec())
        == Some(vec![C2_LARGE_N as u32 - 3, C2_LARGE_N as u32 - 2, C2_LARGE_N as u32 - 1]), "first block is wrong")?;
    within(t, C2_LIMIT, "strict solve")?;
    Ok(format!("{cases} chains unique, n=10^6 solved in {t:.2?}"))
}

fn c3() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let start = Instant::now();
    let (mut done, mut stable, mut kappas) = (0, 0, [0usize; 4]);
    while done < C3_INSTANCES {
        let n = rng.gen_range(3..=9);
        let density = rng.gen_range(0.2..1.0);
        let (poset, _) = random_poset(&mut rng, n, density);
        let kappa = poset.kappa();
        if kappa > 3 {
            continue;
        }
        let inst = Instance::from_poset(3, default_names(n), poset).map_err(|e| e.to_string())?;
        let out = fpt_dp_solve_with(&inst, &SolveConfig::default()).map_err(|e| e.to_string())?;
        let brute = brute_force_solve(&inst).map_err(|e| e.to_string())?;
        ensure(out.matching.is_some() == brute.is_some(), format!("verdicts differ on n={n} κ={kappa}"))?;
        if let Some(m) = &out.matching {
            ensure(is_stable(&inst, m).unwrap(), "unstable witness")?;
            ensure(is_local(&inst, m, locality_bound(kappa, 3)), "witness is not local")?;
            stable += 1;
        }
        kappas[kappa] += 1;
        done += 1;
    }
    let t = start.elapsed();
    within(t, C3_LIMIT, "suite")?;
    Ok(format!("{done}/{done} agree ({stable} with a stable matching, κ counts {kappas:?}), {t:.2?}"))
}

fn c4() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let mut brute_checked = 0;
    for i in 0..C4_POSETS {
        let n = if i % 2 == 0 { rng.gen_range(1..=C4_BRUTE_WIDTH_N) } else { rng.gen_range(1..=50) };
        let density = rng.gen_range(0.0..1.0);
        let (p, pairs) = random_poset(&mut rng, n, density);
        ensure(verify_lpo(p.lpo_order().order(), &p), format!("poset {i}: order rejected"))?;
        if n <= C4_BRUTE_WIDTH_N {
            let w = max_antichain(&closure(&pairs, n));
            ensure(p.width() == w, format!("poset {i}: width {} vs {w}", p.width()))?;
            brute_checked += 1;
        }
    }
    Ok(format!("{C4_POSETS} orders verified, {brute_checked} widths match exhaustive search"))
}

fn c5() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for (n, d) in [(9, 3), (20, 4), (50, 6), (200, 64)] {
        let mut order: Vec<AgentId> = (0..n as u32).map(AgentId).collect();
        order.shuffle(&mut rng);
        let inst = Instance::from_poset(d, default_names(n), Poset::from_ranking(&order).unwrap())
            .map_err(|e| e.to_string())?;
        let g = greedy_big_d_solve(&inst).map_err(|e| e.to_string())?;
        ensure(g.matching == strict_order_solve(&inst).unwrap(), format!("n={n} d={d}: greedy differs"))?;
    }
    let poset = twin_chains(96);
    let kappa = poset.kappa();
    ensure(kappa == 1, format!("κ = {kappa}"))?;
    let inst = Instance::from_poset(64, default_names(192), poset).map_err(|e| e.to_string())?;
    let out = greedy_big_d_solve(&inst).map_err(|e| e.to_string())?;
    let least = out.certificates.iter().map(|c| c.multiplicity).min().unwrap_or(0);
    ensure(out.certificates.len() == 3, "expected three steps")?;
    ensure(least >= 4 * kappa, format!("multiplicity {least} < {}", 4 * kappa))?;
    Ok(format!("κ=0 greedy equals strict; d=64 n=192 certificates min multiplicity {least} ≥ 4"))
}

fn c6() -> Verdict {
    let f = OneInThreeFormula::new(3, vec![[0, 1, 2]; 3]).unwrap();
    let start = Instant::now();
    let inst = sat_reduce(&f).map_err(|e| e.to_string())?;
    ensure(inst.n() == 69, format!("{} agents", inst.n()))?;
    let mut valid = 0;
    for mask in 0u32..8 {
        let asg: Vec<bool> = (0..3).map(|v| mask >> v & 1 == 1).collect();
        if asg.iter().filter(|&&x| x).count() != 1 {
            continue;
        }
        let m = sat_forward_matching(&f, &asg).map_err(|e| e.to_string())?;
        ensure(is_stable(&inst, &m).unwrap(), format!("{asg:?}: forward matching is blocked"))?;
        ensure(sat_backward_assignment(&f, &m).map_err(|e| e.to_string())? == asg, "round trip differs")?;
        valid += 1;
    }
    let t = start.elapsed();
    within(t, C6_LIMIT, "suite")?;
    Ok(format!("{valid} assignments stable and round-tripped on 69 agents, {t:.2?}"))
}

fn c7() -> Verdict {
    let wide = SolveConfig {
        limits: Limits {
            max_brute_agents: 20,
            ..Limits::default()
        },
        ..SolveConfig::default()
    };
    let (tie, [second, first, neither]) = tie_gadget_instance(1, 1).map_err(|e| e.to_string())?;
    let stable = enumerate_stable_with(&tie, &wide).map_err(|e| e.to_string())?;
    ensure(stable.contains(&second) && stable.contains(&first), "M1 or M2 not stable")?;
    for gone in [vec!["a1"], vec!["b1", "b2"]] {
        let ids: Vec<AgentId> = gone.iter().map(|n| tie.agent_by_name(n).unwrap()).collect();
        let sub = tie.without_agents(&ids).unwrap();
        let groups: Vec<Vec<usize>> = neither
            .groups()
            .iter()
            .map(|g| g.iter().map(|a| sub.agent_by_name(tie.name(a)).unwrap().index()).collect())
            .collect();
        let m = Matching::from_groups(&groups).unwrap();
        ensure(is_stable(&sub, &m).unwrap(), format!("M not stable without {gone:?}"))?;
    }
    let cut = cutoff_instance();
    ensure(enumerate_stable_with(&cut, &wide).unwrap().is_empty(), "cut-off gadget has a stable matching")?;
    let rest = cut.without_agents(&[AgentId(0)]).unwrap();
    let only = enumerate_stable_with(&rest, &wide).unwrap();
    ensure(only.len() == 1 && only[0].len() == 1, "cut-off gadget without its agent is not forced")?;

    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let mut checked = 0;
    while checked < C7_SMTI_INSTANCES {
        let n = rng.gen_range(1..=4);
        let Some((s, pm)) = random_solvable_smti(&mut rng, n) else {
            continue;
        };
        let red = smti_reduce(&s).map_err(|e| e.to_string())?;
        let m = red.forward(&s, &pm).map_err(|e| e.to_string())?;
        ensure(is_stable(&red.instance, &m).unwrap(), format!("forward matching blocked for {s:?}"))?;
        ensure(red.backward(&s, &m).map_err(|e| e.to_string())? == pm, "extraction differs")?;
        checked += 1;
    }
    Ok(format!("gadgets verified; {checked} SMTI instances round-tripped"))
}

/// A random instance with at most `n` men and one perfect weakly stable
/// matching found by trying every permutation.
fn random_solvable_smti(rng: &mut ChaCha8Rng, n: usize) -> Option<(SmtiInstance, SmtiMatching)> {
    let mut group_of = Vec::new();
    let mut women = Vec::new();
    while group_of.len() < n {
        let size = if n - group_of.len() >= 2 && rng.gen_bool(0.5) { 2 } else { 1 };
        let first = group_of.len() + 1;
        women.push((first..first + size).map(|w| format!("w{w}")).collect::<Vec<_>>());
        group_of.extend(std::iter::repeat_n(women.len() - 1, size));
    }
    let acc: Vec<Vec<usize>> = (0..n).map(|_| (0..n).filter(|_| rng.gen_bool(0.6)).collect()).collect();
    let wife = all_permutations(n).into_iter().find(|wife| {
        let mut husband = vec![0; n];
        for (i, &j) in wife.iter().enumerate() {
            husband[j] = i;
        }
        wife.iter().enumerate().all(|(i, j)| acc[i].contains(j))
            && (0..n).all(|i| acc[i].iter().all(|&j| !(group_of[j] < group_of[wife[i]] && i < husband[j])))
    })?;
    let men = (1..=n).map(|i| format!("m{i}")).collect();
    let s = SmtiInstance::new(men, women, acc).ok()?;
    Some((s, SmtiMatching::new(wife.into_iter().enumerate().collect())))
}

fn c8() -> Verdict {
    let inst = lambda_example();
    let del = deletion_distance(&inst, inst.n()).map_err(|e| e.to_string())?;
    let witness: Vec<&str> = del.witness.iter().map(|&a| inst.name(a)).collect();
    ensure(
        del.lambda == 1 && del.witness == [AgentId(4)],
        format!("expected λ=1 with witness {{a5}}, got λ={} with witness {witness:?}", del.lambda),
    )?;
    Ok(format!("λ=1, witness {witness:?}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("C1 instability of the six-agent master list", c1),
        ("C2 strict chains", c2),
        ("C3 dynamic program vs brute force", c3),
        ("C4 approximating order and width", c4),
        ("C5 greedy certificates", c5),
        ("C6 1-in-3 SAT reduction", c6),
        ("C7 SMTI reduction", c7),
        ("C8 deletion distance example", c8),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {name}: {detail}");
            }
        }
    }
    println!("{} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
