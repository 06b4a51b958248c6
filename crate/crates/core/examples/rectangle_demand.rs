//! Box-shaped demand with two batteries that start partly charged.

use causal_procure::causal::{causal_feasibility, ScenarioTree};
use causal_procure::lp::SolverConfig;
use causal_procure::polytope::{battery_set, BatterySpec, VPolytope};
use causal_procure::procurement::{affine_bound, solve_oracle, ProcurementInstance, Resource};

fn main() -> causal_procure::Result<()> {
    let cfg = SolverConfig::default();
    let b1 = battery_set(&BatterySpec::new(9.0, 2.0, 1.0 / 3.0, 3)?)?;
    let b2 = battery_set(&BatterySpec::new(5.0, 5.0, 0.4, 3)?)?;
    let corners = (0..8)
        .map(|m| {
            vec![
                f64::from(m & 1),
                f64::from((m >> 1) & 1),
                if m & 4 == 0 { -5.0 } else { 7.0 },
            ]
        })
        .collect();
    let inst = ProcurementInstance::new(
        vec![Resource::new(b1, 2.0, true)?, Resource::new(b2, 5.0, true)?],
        VPolytope::new(corners)?,
    )?;
    let oracle = solve_oracle(&inst, &cfg)?;
    let affine = affine_bound(&inst, &cfg)?;
    println!(
        "J* = {} at {:?}; affine bound {} at {:?}",
        oracle.cost, oracle.alphas, affine.cost, affine.alphas
    );

    let tree = ScenarioTree::build(&[vec![0.0, 0.0, -5.0], vec![0.0, 0.0, 7.0]])?;
    for alphas in [[1.0, 1.0], [2.5, 0.4]] {
        let v = causal_feasibility(&tree, inst.resources(), &alphas, &cfg)?;
        println!(
            "alpha {alphas:?} (cost {}): causal on the pair = {}",
            inst.cost(&alphas),
            v.is_feasible()
        );
    }
    Ok(())
}
