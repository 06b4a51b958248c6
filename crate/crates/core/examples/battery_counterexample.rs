//! Two batteries, a three-period demand set, and a pair of signals that share
//! their first two periods. The oracle mix (1, 1) covers each signal, but no
//! causal policy covers both.

use causal_procure::causal::{causal_feasibility, ScenarioTree};
use causal_procure::lp::SolverConfig;
use causal_procure::polytope::{battery_set, BatterySpec, VPolytope};
use causal_procure::procurement::{solve_oracle, ProcurementInstance, Resource};

fn main() -> causal_procure::Result<()> {
    let cfg = SolverConfig::default();
    let fast = battery_set(&BatterySpec::new(3.0, 3.0, 0.0, 3)?)?;
    let slow = battery_set(&BatterySpec::new(3.0, 1.0, 0.0, 3)?)?;
    let demand = VPolytope::new(vec![
        vec![0.0, 0.0, 0.0],
        vec![1.0, 1.0, -2.0],
        vec![1.0, 1.0, 4.0],
    ])?;
    let inst = ProcurementInstance::new(
        vec![
            Resource::new(fast, 3.0, true)?,
            Resource::new(slow, 1.0, true)?,
        ],
        demand,
    )?;

    let oracle = solve_oracle(&inst, &cfg)?;
    println!("J* = {} at alpha = {:?}", oracle.cost, oracle.alphas);

    let pair = vec![vec![1.0, 1.0, -2.0], vec![1.0, 1.0, 4.0]];
    let tree = ScenarioTree::build(&pair)?;
    println!("tree branches at period {:?}", tree.first_branch_depth());
    for alphas in [[1.0, 1.0], [0.0, 4.0]] {
        let v = causal_feasibility(&tree, inst.resources(), &alphas, &cfg)?;
        println!(
            "alpha {alphas:?} (cost {}): causal = {}",
            inst.cost(&alphas),
            v.is_feasible()
        );
    }
    Ok(())
}
