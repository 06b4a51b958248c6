mod common;

use causal_procure::causal::{
    build_block_policy, causal_feasibility, dispatch_affine, dispatch_block, verify_dispatch,
    AffinePolicy, CausalVerdict, ScenarioTree,
};
use causal_procure::lp::SolverConfig;
use causal_procure::polytope::{
    hrep_to_vrep, minkowski_sum_vertices, BatterySpec, HPolytope, VPolytope,
};
use causal_procure::procurement::{
    affine_bound, battery_exact_jss, battery_fleet, ProcurementInstance, Resource,
};
use causal_procure::Error;
use common::{
    battery, battery_example, cfg, cloud_example, envelope_walk, random_fleet, rectangle_example,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdict(inst: &ProcurementInstance, signals: &[Vec<f64>], alphas: &[f64]) -> CausalVerdict {
    let tree = ScenarioTree::build(signals).unwrap();
    causal_feasibility(&tree, inst.resources(), alphas, &cfg()).unwrap()
}

#[test]
fn battery_pair_cannot_be_served_causally() {
    let inst = battery_example();
    let pair = [vec![1.0, 1.0, -2.0], vec![1.0, 1.0, 4.0]];
    assert_eq!(
        verdict(&inst, &pair, &[1.0, 1.0]),
        CausalVerdict::Infeasible
    );
    for s in &pair {
        assert!(verdict(&inst, std::slice::from_ref(s), &[1.0, 1.0]).is_feasible());
    }
}

#[test]
fn battery_high_signal_uses_the_slow_battery_only() {
    let inst = battery_example();
    let signal = vec![1.0, 1.0, 4.0];
    let tree = ScenarioTree::build(std::slice::from_ref(&signal)).unwrap();
    let CausalVerdict::Feasible(alloc) =
        causal_feasibility(&tree, inst.resources(), &[1.0, 1.0], &cfg()).unwrap()
    else {
        panic!("single signal should be feasible");
    };
    let leaf = tree.leaves()[0];
    let s1 = alloc.trajectory(&tree, leaf, 0);
    let s2 = alloc.trajectory(&tree, leaf, 1);
    for (got, want) in s1
        .iter()
        .zip([0.0, 0.0, 3.0])
        .chain(s2.iter().zip([1.0, 1.0, 1.0]))
    {
        assert!((got - want).abs() < 1e-7, "{s1:?} {s2:?}");
    }
}

#[test]
fn cloud_pair_cannot_be_served_causally() {
    let inst = cloud_example();
    let pair = [vec![1.0, 2.0, 1.0, 1.0], vec![1.0, 0.5, 1.5, 2.0]];
    assert_eq!(
        verdict(&inst, &pair, &[2.0, 1.0]),
        CausalVerdict::Infeasible
    );
    for s in &pair {
        assert!(verdict(&inst, std::slice::from_ref(s), &[2.0, 1.0]).is_feasible());
    }
}

#[test]
fn rectangle_pair_cannot_be_served_causally() {
    let inst = rectangle_example();
    let pair = [vec![0.0, 0.0, -5.0], vec![0.0, 0.0, 7.0]];
    let tree = ScenarioTree::build(&pair).unwrap();
    assert_eq!(tree.first_branch_depth(), Some(3));
    assert_eq!(
        verdict(&inst, &pair, &[1.0, 1.0]),
        CausalVerdict::Infeasible
    );
    for s in &pair {
        assert!(verdict(&inst, std::slice::from_ref(s), &[1.0, 1.0]).is_feasible());
    }
}

#[test]
fn other_optimal_mixes_are_causal() {
    // battery example: α = (0, 4) also costs 4 and is a single battery
    let inst = battery_example();
    assert_eq!(inst.cost(&[0.0, 4.0]), 4.0);
    let pair = [vec![1.0, 1.0, -2.0], vec![1.0, 1.0, 4.0]];
    assert!(verdict(&inst, &pair, &[0.0, 4.0]).is_feasible());

    // rectangle: α = (2.5, 0.4) also costs 7 and serves every box corner
    let inst = rectangle_example();
    assert!((inst.cost(&[2.5, 0.4]) - 7.0).abs() < 1e-12);
    let corners = inst.demand().vertices().to_vec();
    assert!(verdict(&inst, &corners, &[2.5, 0.4]).is_feasible());
}

fn battery_instance(specs: &[(f64, f64)], t: usize) -> ProcurementInstance {
    let resources = specs
        .iter()
        .map(|&(c, r)| Resource::new(battery(c, r, 0.0, t), 1.0, true).unwrap())
        .collect();
    let demand = VPolytope::new(vec![vec![0.0; t]]).unwrap();
    ProcurementInstance::new(resources, demand).unwrap()
}

/// Point membership in `⊕ α_i S_i` through explicit vertex enumeration.
fn in_scaled_sum(sets: &[HPolytope], alphas: &[f64], x: &[f64], cfg: &SolverConfig) -> bool {
    let parts: Vec<VPolytope> = sets
        .iter()
        .zip(alphas)
        .map(|(s, &a)| {
            let v = hrep_to_vrep(s, cfg).unwrap();
            VPolytope::new(
                v.vertices()
                    .iter()
                    .map(|p| p.iter().map(|q| q * a).collect())
                    .collect(),
            )
            .unwrap()
        })
        .collect();
    let sum = minkowski_sum_vertices(&parts, cfg).unwrap();
    sum.convex_certificate(x, 1.0, None, cfg).unwrap().is_some()
}

#[test]
fn single_scenario_matches_point_coverage() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut agree = 0;
    for _ in 0..200 {
        let t = rng.gen_range(2..=3);
        let specs: Vec<(f64, f64)> = (0..rng.gen_range(1..=2))
            .map(|_| {
                (
                    f64::from(rng.gen_range(1..=6)) / 2.0,
                    f64::from(rng.gen_range(1..=4)) / 2.0,
                )
            })
            .collect();
        let inst = battery_instance(&specs, t);
        let alphas: Vec<f64> = specs
            .iter()
            .map(|_| f64::from(rng.gen_range(0..=4)) / 2.0)
            .collect();
        let signal: Vec<f64> = (0..t).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let causal = verdict(&inst, std::slice::from_ref(&signal), &alphas).is_feasible();
        let sets: Vec<HPolytope> = inst.resources().iter().map(|r| r.set.clone()).collect();
        let oracle = in_scaled_sum(&sets, &alphas, &signal, &cfg());
        assert_eq!(
            causal, oracle,
            "specs {specs:?} alphas {alphas:?} signal {signal:?}"
        );
        agree += 1;
    }
    assert_eq!(agree, 200);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adding_a_scenario_never_helps(
        seed in 0u64..10_000,
        n_sig in 1usize..4,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = battery_instance(&[(3.0, 3.0), (3.0, 1.0)], 3);
        let alphas = [rng.gen_range(0.5..1.5), rng.gen_range(0.5..1.5)];
        // scenarios share a random prefix length so the tree branches
        let base: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let mut signals: Vec<Vec<f64>> = Vec::new();
        for _ in 0..n_sig {
            let keep = rng.gen_range(0..3);
            signals.push((0..3).map(|t| if t < keep { base[t] } else { rng.gen_range(-3.0..3.0) }).collect());
        }
        let extra: Vec<f64> = (0..3).map(|t| if t < 2 { base[t] } else { rng.gen_range(-4.0..4.0) }).collect();
        let before = verdict(&inst, &signals, &alphas).is_feasible();
        signals.push(extra);
        let after = verdict(&inst, &signals, &alphas).is_feasible();
        prop_assert!(before || !after);
    }

    #[test]
    fn doubling_scales_keeps_feasibility(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = battery_instance(&[(3.0, 3.0), (3.0, 1.0)], 3);
        let alphas = [rng.gen_range(0.0..1.5), rng.gen_range(0.0..1.5)];
        let pair = [
            vec![1.0, 1.0, rng.gen_range(-3.0..0.0)],
            vec![1.0, 1.0, rng.gen_range(0.0..5.0)],
        ];
        if verdict(&inst, &pair, &alphas).is_feasible() {
            let doubled = [2.0 * alphas[0], 2.0 * alphas[1]];
            prop_assert!(verdict(&inst, &pair, &doubled).is_feasible());
        }
    }

    #[test]
    fn affine_dispatch_sums_to_the_signal(
        seed in 0u64..10_000,
        n in 1usize..5,
        t in 1usize..6,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f: Vec<Vec<Vec<f64>>> = (0..n)
            .map(|_| (0..t).map(|r| (0..t).map(|c| if c <= r { rng.gen_range(-2.0..2.0) } else { 0.0 }).collect()).collect())
            .collect();
        let d: Vec<Vec<f64>> = (0..n).map(|_| (0..t).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let policy = AffinePolicy::normalized(f, d).unwrap();
        let signal: Vec<f64> = (0..t).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let traj = dispatch_affine(&policy, &signal).unwrap();
        for k in 0..t {
            let sum: f64 = traj.iter().map(|x| x[k]).sum();
            prop_assert!((sum - signal[k]).abs() <= 1e-12 * (1.0 + signal[k].abs()));
        }
    }
}

#[test]
fn identity_and_proportional_policies() {
    let id = AffinePolicy::single(1, 0, 4).unwrap();
    let e = [0.5, -1.0, 2.0, 0.0];
    assert_eq!(dispatch_affine(&id, &e).unwrap(), vec![e.to_vec()]);
    let beta = [vec![0.25; 4], vec![0.75; 4]];
    let prop = AffinePolicy::proportional(&beta).unwrap();
    let out = dispatch_affine(&prop, &e).unwrap();
    for k in 0..4 {
        assert_eq!(out[0][k], 0.25 * e[k]);
    }
    let sets = [battery(3.0, 1.0, 0.0, 4), battery(3.0, 1.0, 0.0, 4)];
    let resources: Vec<Resource> = sets
        .iter()
        .map(|s| Resource::new(s.clone(), 1.0, true).unwrap())
        .collect();
    let small = [0.5, -0.5, 0.5, -0.5];
    let out = dispatch_affine(&prop, &small).unwrap();
    assert!(verify_dispatch(&small, &out, &resources, &[1.0, 1.0], &cfg()).unwrap());
    let traj_id = dispatch_affine(&AffinePolicy::single(1, 0, 4).unwrap(), &small).unwrap();
    assert!(verify_dispatch(&small, &traj_id, &resources[..1], &[1.0], &cfg()).unwrap());
}

#[test]
fn affine_certificate_replays_on_sweep_fleet() {
    let bats = [
        BatterySpec::new(1.0, 1.0, 0.0, 3).unwrap(),
        BatterySpec::new(3.0, 1.0, 0.0, 3).unwrap(),
    ];
    let (sets, demand) = battery_fleet(&bats, &cfg()).unwrap();
    let resources: Vec<Resource> = sets
        .iter()
        .zip([1.0, 2.0])
        .map(|(s, p)| Resource::new(s.clone(), p, true).unwrap())
        .collect();
    let inst = ProcurementInstance::new(resources.clone(), demand.clone()).unwrap();
    let res = affine_bound(&inst, &cfg()).unwrap();
    let causal_procure::procurement::Certificate::Affine(policy) = &res.certificate else {
        panic!()
    };
    for v in demand.vertices() {
        let traj = dispatch_affine(policy, v).unwrap();
        assert!(
            verify_dispatch(v, &traj, &resources, &res.alphas, &cfg()).unwrap(),
            "vertex {v:?}"
        );
    }
}

#[test]
fn block_dispatch_of_zero_signal_is_idle() {
    let bats = [
        BatterySpec::new(1.0, 1.0, 0.0, 3).unwrap(),
        BatterySpec::new(3.0, 1.0, 0.0, 3).unwrap(),
    ];
    let s = build_block_policy(&bats, &[1.0, 2.0]).unwrap();
    let out = dispatch_block(&s, &[0.0; 5]).unwrap();
    assert!(out.power.iter().flatten().all(|&p| p == 0.0));
}

#[test]
fn block_dispatch_on_the_deep_battery_alone() {
    let bats = [
        BatterySpec::new(1.0, 1.0, 0.0, 3).unwrap(),
        BatterySpec::new(3.0, 1.0, 0.0, 3).unwrap(),
    ];
    let jss = battery_exact_jss(&bats, &[1.0, 2.0], &cfg()).unwrap();
    assert!((jss.alphas[0]).abs() < 1e-9 && (jss.alphas[1] - 2.0).abs() < 1e-9);
    let s = build_block_policy(&bats, &[0.0, 2.0]).unwrap();
    // the unprocured battery keeps a block of size zero
    assert_eq!(s.owners(), vec![1, 0, 1]);
    assert_eq!(s.sizes(), vec![2.0, 0.0, 2.0]);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..500 {
        let e = envelope_walk(&mut rng, 12, 2.0, 4.0, 0.0);
        let out = dispatch_block(&s, &e).unwrap();
        for k in 0..e.len() {
            assert!((out.power[0][k] + out.power[1][k] - e[k]).abs() < 1e-9);
        }
    }
}

#[test]
fn block_dispatch_is_sound_on_random_fleets() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut fleets = 0;
    while fleets < 10 {
        let n = rng.gen_range(1..=4);
        let bats = random_fleet(&mut rng, n, 3);
        let total_c: f64 = bats.iter().map(|b| b.capacity).sum();
        let total_r: f64 = bats.iter().map(|b| b.rate).sum();
        if total_c > 2.0 * total_r {
            continue;
        }
        let prices: Vec<f64> = bats.iter().map(|_| rng.gen_range(0.5..3.0)).collect();
        let jss = battery_exact_jss(&bats, &prices, &cfg()).unwrap();
        let s = build_block_policy(&bats, &jss.alphas).unwrap();
        for _ in 0..200 {
            let e = envelope_walk(&mut rng, 16, total_r, total_c, 0.0);
            if let Err(err) = dispatch_block(&s, &e) {
                panic!("fleet {bats:?} alphas {:?} signal {e:?}: {err}", jss.alphas);
            }
        }
        fleets += 1;
    }
}

#[test]
fn block_policy_rejects_outside_signals() {
    let bats = [BatterySpec::new(2.0, 1.0, 0.0, 3).unwrap()];
    let s = build_block_policy(&bats, &[1.0]).unwrap();
    assert!(matches!(
        dispatch_block(&s, &[1.0, 1.0, 0.5]),
        Err(Error::CoverageViolation { period: 3, .. })
    ));
}
