use causal_procure::lp::SolverConfig;
use causal_procure::polytope::{
    batch_workload_set, battery_set, instance_set, BatchJob, BatterySpec, HPolytope, VPolytope,
};
use causal_procure::procurement::{
    affine_bound, battery_exact_jss, certificate_violation, coverage_gap, kappa_sweep,
    proportional_bound, solve_oracle, tv_proportional_bound, Certificate, KappaSweepSpec,
    ProcurementInstance, Resource,
};
use causal_procure::Error;

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

fn battery(c: f64, r: f64, theta: f64, t: usize) -> HPolytope {
    battery_set(&BatterySpec::new(c, r, theta, t).unwrap()).unwrap()
}

fn battery_example() -> ProcurementInstance {
    let demand = VPolytope::new(vec![
        vec![0.0, 0.0, 0.0],
        vec![1.0, 1.0, -2.0],
        vec![1.0, 1.0, 4.0],
    ])
    .unwrap();
    ProcurementInstance::new(
        vec![
            Resource::new(battery(3.0, 3.0, 0.0, 3), 3.0, true).unwrap(),
            Resource::new(battery(3.0, 1.0, 0.0, 3), 1.0, true).unwrap(),
        ],
        demand,
    )
    .unwrap()
}

fn cloud_example() -> ProcurementInstance {
    let jobs = [
        BatchJob {
            arrival: 1,
            deadline: 2,
            work: 1.0,
        },
        BatchJob {
            arrival: 1,
            deadline: 4,
            work: 2.0,
        },
    ];
    let demand = VPolytope::new(vec![
        vec![0.0, 0.0, 0.0, 0.0],
        vec![1.0, 0.5, 1.5, 2.0],
        vec![1.0, 2.0, 1.0, 1.0],
    ])
    .unwrap();
    ProcurementInstance::new(
        vec![
            Resource::new(instance_set(4).unwrap(), 1.0, true).unwrap(),
            Resource::new(batch_workload_set(&jobs, 4).unwrap(), 0.0, false).unwrap(),
        ],
        demand,
    )
    .unwrap()
}

#[test]
fn battery_example_oracle_cost() {
    let inst = battery_example();
    let res = solve_oracle(&inst, &cfg()).unwrap();
    assert!((res.cost - 4.0).abs() < 1e-6, "cost {}", res.cost);
    assert!(
        (res.alphas[0] - 1.0).abs() < 1e-6 && (res.alphas[1] - 1.0).abs() < 1e-6,
        "{:?}",
        res.alphas
    );
    assert!(certificate_violation(&inst, &res, &cfg()).unwrap() <= 10.0 * cfg().feas_tol);
    // a hand decomposition of (1,1,4)
    let Certificate::Factorization { pieces } = &res.certificate else {
        panic!()
    };
    let p = &pieces[2];
    assert!((p[0][2] + p[1][2] - 4.0).abs() < 1e-9);
}

#[test]
fn battery_example_bounds_exceed_oracle() {
    let inst = battery_example();
    let jstar = solve_oracle(&inst, &cfg()).unwrap().cost;
    let aff = affine_bound(&inst, &cfg()).unwrap();
    let tv = tv_proportional_bound(&inst, &cfg()).unwrap();
    let prop = proportional_bound(&inst, &cfg()).unwrap();
    assert!(aff.cost > 4.0 - 1e-6);
    assert!(jstar <= aff.cost + 1e-7 && aff.cost <= tv.cost + 1e-7 && tv.cost <= prop.cost + 1e-7);
    for r in [&aff, &tv, &prop] {
        assert!(certificate_violation(&inst, r, &cfg()).unwrap() <= 10.0 * cfg().feas_tol);
    }
}

#[test]
fn cloud_example_oracle() {
    let inst = cloud_example();
    let res = solve_oracle(&inst, &cfg()).unwrap();
    assert!((res.alphas[0] - 2.0).abs() < 1e-6, "{:?}", res.alphas);
    assert_eq!(res.alphas[1], 1.0);
    assert!(certificate_violation(&inst, &res, &cfg()).unwrap() <= 10.0 * cfg().feas_tol);
}

#[test]
fn cloud_example_has_no_proportional_policy() {
    // the batch set excludes the origin, so no fixed share of the zero signal fits
    let err = proportional_bound(&cloud_example(), &cfg()).unwrap_err();
    assert!(matches!(err, Error::Infeasible(_)));
    let aff = affine_bound(&cloud_example(), &cfg()).unwrap();
    assert!(aff.alphas[0] >= 2.0 - 1e-7);
}

#[test]
fn zero_demand_costs_nothing() {
    let demand = VPolytope::new(vec![vec![0.0, 0.0, 0.0]]).unwrap();
    let inst = ProcurementInstance::new(
        vec![
            Resource::new(battery(3.0, 1.0, 0.0, 3), 2.0, true).unwrap(),
            Resource::new(instance_set(3).unwrap(), 1.0, true).unwrap(),
        ],
        demand,
    )
    .unwrap();
    let res = solve_oracle(&inst, &cfg()).unwrap();
    assert!(res.cost.abs() < 1e-12);
    assert!(res.alphas.iter().all(|a| a.abs() < 1e-12));
}

#[test]
fn rectangle_demand_instance() {
    let demand = VPolytope::new(
        (0..8)
            .map(|m| {
                vec![
                    if m & 1 == 0 { 0.0 } else { 1.0 },
                    if m & 2 == 0 { 0.0 } else { 1.0 },
                    if m & 4 == 0 { -5.0 } else { 7.0 },
                ]
            })
            .collect(),
    )
    .unwrap();
    let inst = ProcurementInstance::new(
        vec![
            Resource::new(battery(9.0, 2.0, 1.0 / 3.0, 3), 2.0, true).unwrap(),
            Resource::new(battery(5.0, 5.0, 0.4, 3), 5.0, true).unwrap(),
        ],
        demand,
    )
    .unwrap();
    let res = solve_oracle(&inst, &cfg()).unwrap();
    assert!((res.cost - 7.0).abs() < 1e-6, "cost {}", res.cost);
    // (1, 1) attains the optimum; the optimum is not unique
    assert!(coverage_gap(&inst, &[1.0, 1.0], &cfg()).unwrap() <= 1e-9);
    assert!((inst.cost(&[1.0, 1.0]) - res.cost).abs() < 1e-6);
}

#[test]
fn single_resource_bounds_agree() {
    let set = battery(3.0, 1.0, 0.0, 3);
    let demand = VPolytope::new(vec![
        vec![0.0, 0.0, 0.0],
        vec![1.0, 1.0, 1.0],
        vec![1.0, -1.0, 1.0],
    ])
    .unwrap();
    let inst =
        ProcurementInstance::new(vec![Resource::new(set, 2.0, true).unwrap()], demand).unwrap();
    let j = solve_oracle(&inst, &cfg()).unwrap().cost;
    for b in [
        proportional_bound(&inst, &cfg()).unwrap(),
        tv_proportional_bound(&inst, &cfg()).unwrap(),
        affine_bound(&inst, &cfg()).unwrap(),
    ] {
        assert!((b.cost - j).abs() < 1e-7, "{} vs {j}", b.cost);
    }
}

#[test]
fn exact_battery_values() {
    let b1 = BatterySpec::new(1.0, 1.0, 0.0, 3).unwrap();
    let b2 = BatterySpec::new(3.0, 1.0, 0.0, 3).unwrap();
    let r = battery_exact_jss(&[b1, b2], &[1.0, 2.0], &cfg()).unwrap();
    assert!((r.jss - 4.0).abs() < 1e-9);
    let r = battery_exact_jss(&[b1, b2], &[1.0, 1.5], &cfg()).unwrap();
    assert!((r.jss - 3.0).abs() < 1e-9);
    let one = BatterySpec::new(1.5, 1.0, 0.0, 3).unwrap();
    let r = battery_exact_jss(&[one], &[2.5], &cfg()).unwrap();
    assert!((r.alphas[0] - 1.0).abs() < 1e-12 && (r.jss - 2.5).abs() < 1e-12);
    let deep = BatterySpec::new(5.0, 1.0, 0.0, 3).unwrap();
    assert!(matches!(
        battery_exact_jss(&[deep], &[1.0], &cfg()),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn kappa_sweep_rows() {
    let start = std::time::Instant::now();
    let b1 = BatterySpec::new(1.0, 1.0, 0.0, 3).unwrap();
    let b2 = BatterySpec::new(3.0, 1.0, 0.0, 3).unwrap();
    let spec = KappaSweepSpec {
        batteries: vec![b1, b2],
        base_prices: None,
        kappa_slopes: None,
    };
    let rows = kappa_sweep(&spec, &[0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0], &cfg()).unwrap();
    let jstar = [0.0, 1.0, 2.0, 2.5, 3.0, 3.5, 4.0];
    let jss = [0.0, 1.0, 2.0, 3.0, 4.0, 4.0, 4.0];
    for (row, (a, b)) in rows.iter().zip(jstar.iter().zip(&jss)) {
        assert!((row.jstar - a).abs() < 1e-6, "{row:?}");
        assert!((row.jss - b).abs() < 1e-6, "{row:?}");
    }
    assert_eq!(rows[0].poc, None);
    assert!((rows[4].poc.unwrap() - 4.0 / 3.0).abs() < 1e-6);
    assert!((rows[5].poc.unwrap() - 4.0 / 3.5).abs() < 1e-6);
    eprintln!("sweep took {:?}", start.elapsed());
}
