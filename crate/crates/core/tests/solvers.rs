mod common;

use common::*;
use mdsr_core::solvers::{
    auto_solve_with, choose_algorithm, fpt_dp_solve, fpt_dp_solve_with, greedy_big_d_solve, greedy_big_d_solve_with,
    is_local, locality_bound, strict_order_solve, window_size, Algorithm,
};
use mdsr_core::stability::{brute_force_solve, enumerate_stable, is_stable};
use mdsr_core::{default_names, AgentId, Error, Instance, Matching, Poset, SolveConfig};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Consecutive blocks of `d` along `order`, computed directly.
fn blocks_along(order: &[usize], d: usize) -> Matching {
    let groups: Vec<Vec<usize>> = order.chunks_exact(d).map(|c| c.to_vec()).collect();
    Matching::from_groups(&groups).unwrap()
}

fn ranked(order: &[usize], d: usize) -> Instance {
    let ranking: Vec<AgentId> = order.iter().map(|&a| AgentId::from(a)).collect();
    Instance::from_poset(d, default_names(order.len()), Poset::from_ranking(&ranking).unwrap()).unwrap()
}

#[test]
fn strict_chains_have_one_stable_matching() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for d in 2..=4 {
        for n in d..=9 {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let inst = ranked(&order, d);
            let expected = blocks_along(&order, d);
            assert_eq!(enumerate_stable(&inst).unwrap(), vec![expected.clone()], "d={d} n={n}");
            assert_eq!(strict_order_solve(&inst).unwrap(), expected);
        }
    }
}

#[test]
fn strict_rejects_non_chain() {
    let inst = Instance::from_poset(3, default_names(6), twin_chains(3)).unwrap();
    assert_eq!(strict_order_solve(&inst), Err(Error::NotStrictOrder { kappa: 1 }));
}

#[test]
fn strict_handles_large_ranking() {
    let n = 200_000;
    let order: Vec<usize> = (0..n).rev().collect();
    let inst = ranked(&order, 5);
    let m = strict_order_solve(&inst).unwrap();
    assert_eq!(m, blocks_along(&order, 5));
}

#[test]
fn bounds() {
    assert_eq!(locality_bound(0, 2), 7);
    assert_eq!(locality_bound(2, 3), 2 * 2 * 9 + 8 + 9 + 1);
    assert_eq!(window_size(0, 2), 2 * 2 * 7);
    assert_eq!(choose_algorithm(0, 9), Algorithm::Strict);
    assert_eq!(choose_algorithm(1, 64), Algorithm::Greedy);
    assert_eq!(choose_algorithm(3, 5), Algorithm::Dp);
}

#[test]
fn dp_on_small_twin_chains() {
    let inst = Instance::from_poset(3, default_names(8), twin_chains(4)).unwrap();
    let out = fpt_dp_solve_with(&inst, &SolveConfig::default()).unwrap();
    assert!(out.exact);
    assert_eq!(out.matching.is_some(), brute_force_solve(&inst).unwrap().is_some());
    if let Some(m) = &out.matching {
        assert!(is_stable(&inst, m).unwrap());
    }
}

#[test]
fn dp_rejects_explicit_lists() {
    assert_eq!(fpt_dp_solve(&six_agents()), Err(Error::UnsupportedSource));
}

#[test]
fn greedy_matches_strict_on_chains() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (n, d) in [(6, 2), (10, 3), (40, 7), (130, 64)] {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let inst = ranked(&order, d);
        let out = greedy_big_d_solve(&inst).unwrap();
        assert_eq!(out.matching, strict_order_solve(&inst).unwrap());
        assert!(out.certificates.iter().all(|c| c.multiplicity >= c.required));
    }
}

/// Two chains of 96 agents each, so κ = 1 and 4κ·2^(4κ) = 64 = d.
#[test]
fn greedy_certificates_on_twin_chains() {
    let poset = twin_chains(96);
    assert_eq!(poset.kappa(), 1);
    let inst = Instance::from_poset(64, default_names(192), poset).unwrap();
    let out = greedy_big_d_solve(&inst).unwrap();
    assert_eq!(out.matching.len(), 3);
    assert_eq!(out.certificates.len(), 3);
    for c in &out.certificates {
        assert!(c.multiplicity >= 4, "step {} chosen {} times", c.step, c.multiplicity);
        assert_eq!(c.required, 4);
    }
    assert_eq!(
        greedy_big_d_solve_with(&inst, &SolveConfig::sequential()).unwrap(),
        out
    );
}

#[test]
fn greedy_refuses_small_d() {
    let inst = Instance::from_poset(3, default_names(6), twin_chains(3)).unwrap();
    assert!(matches!(greedy_big_d_solve(&inst), Err(Error::PreconditionViolated(_))));
}

#[test]
fn dispatcher_choices() {
    let chain = ranked(&[2, 0, 1, 3, 4, 5], 3);
    assert_eq!(auto_solve_with(&chain, &SolveConfig::default()).unwrap().0, Algorithm::Strict);
    let twins = Instance::from_poset(3, default_names(8), twin_chains(4)).unwrap();
    assert_eq!(auto_solve_with(&twins, &SolveConfig::default()).unwrap().0, Algorithm::Dp);
}

fn check_dp(inst: &Instance) -> Result<(), TestCaseError> {
    let out = fpt_dp_solve_with(inst, &SolveConfig::default()).unwrap();
    let brute = brute_force_solve(inst).unwrap();
    prop_assert!(out.exact);
    prop_assert_eq!(out.matching.is_some(), brute.is_some());
    if let Some(m) = &out.matching {
        prop_assert!(is_stable(inst, m).unwrap());
        let kappa = inst.lpo().unwrap().kappa();
        prop_assert!(is_local(inst, m, locality_bound(kappa, inst.d())));
    }
    let seq = fpt_dp_solve_with(inst, &SolveConfig::sequential()).unwrap();
    prop_assert_eq!(seq, out);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn dp_agrees_with_brute_force_canonical(seed in any::<u64>(), n in 3usize..=9, density in 0.3f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (poset, _) = random_poset(&mut rng, n, density);
        let inst = Instance::from_poset(3, default_names(n), poset).unwrap();
        check_dp(&inst)?;
    }

    /// Explicit tiebreaks can lack a stable matching, which canonical ones
    /// rarely do at this size.
    #[test]
    fn dp_agrees_with_brute_force_explicit(seed in any::<u64>(), n in 3usize..=8, d in 2usize..=3, density in 0.0f64..0.8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_explicit_instance(&mut rng, n, d, density);
        check_dp(&inst)?;
    }

    #[test]
    fn dispatcher_witness_is_stable(seed in any::<u64>(), n in 3usize..=8, density in 0.3f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (poset, _) = random_poset(&mut rng, n, density);
        let inst = Instance::from_poset(3, default_names(n), poset).unwrap();
        let (_, m) = auto_solve_with(&inst, &SolveConfig::default()).unwrap();
        prop_assert_eq!(m.is_some(), brute_force_solve(&inst).unwrap().is_some());
        if let Some(m) = m {
            prop_assert!(is_stable(&inst, &m).unwrap());
        }
    }
}
