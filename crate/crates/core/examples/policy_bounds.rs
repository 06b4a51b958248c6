//! Oracle cost and the three policy upper bounds for a random battery fleet
//! whose demand set is the sum of its own batteries.

use causal_procure::lp::SolverConfig;
use causal_procure::polytope::BatterySpec;
use causal_procure::procurement::{
    affine_bound, battery_exact_jss, battery_fleet, certificate_violation, proportional_bound,
    solve_oracle, tv_proportional_bound, ProcurementInstance, Resource,
};

fn main() -> causal_procure::Result<()> {
    let cfg = SolverConfig::default();
    let fleet = vec![
        BatterySpec::new(1.0, 1.0, 0.0, 4)?,
        BatterySpec::new(2.0, 1.0, 0.0, 4)?,
        BatterySpec::new(1.5, 0.75, 0.0, 4)?,
    ];
    let prices = [1.0, 1.75, 1.25];
    let (sets, demand) = battery_fleet(&fleet, &cfg)?;
    println!("demand set has {} extreme points", demand.len());
    let resources = sets
        .into_iter()
        .zip(prices)
        .map(|(s, p)| Resource::new(s, p, true))
        .collect::<causal_procure::Result<Vec<_>>>()?;
    let inst = ProcurementInstance::new(resources, demand)?;

    let runs = [
        ("oracle", solve_oracle(&inst, &cfg)?),
        ("affine", affine_bound(&inst, &cfg)?),
        ("time-varying", tv_proportional_bound(&inst, &cfg)?),
        ("proportional", proportional_bound(&inst, &cfg)?),
    ];
    for (name, r) in &runs {
        let audit = certificate_violation(&inst, r, &cfg)?;
        println!(
            "{name:>13}: cost {:.4}, alpha {:.3?}, certificate residual {audit:.1e}",
            r.cost, r.alphas
        );
    }
    let exact = battery_exact_jss(&fleet, &prices, &cfg)?;
    println!("battery LP causal cost: {:.4}", exact.jss);
    Ok(())
}
