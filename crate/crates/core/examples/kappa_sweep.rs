//! Price of causality of a two-battery fleet as the second battery's price
//! moves. Prints CSV.

use causal_procure::lp::SolverConfig;
use causal_procure::polytope::BatterySpec;
use causal_procure::procurement::{kappa_grid, kappa_sweep, KappaSweepSpec};

fn main() -> causal_procure::Result<()> {
    let spec = KappaSweepSpec {
        batteries: vec![
            BatterySpec::new(1.0, 1.0, 0.0, 3)?,
            BatterySpec::new(3.0, 1.0, 0.0, 3)?,
        ],
        base_prices: None,
        kappa_slopes: None,
    };
    println!("kappa,jstar,jss,poc");
    for row in kappa_sweep(
        &spec,
        &kappa_grid(0.5, 3.0, 0.25)?,
        &SolverConfig::default(),
    )? {
        let poc = row.poc.map_or("NA".to_string(), |p| format!("{p:.4}"));
        println!("{},{:.4},{:.4},{poc}", row.kappa, row.jstar, row.jss);
    }
    Ok(())
}
