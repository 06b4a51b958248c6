//! Sizes a battery fleet with the exact causal LP, then serves a random
//! envelope-respecting signal with the block policy.

use causal_procure::causal::{build_block_policy, dispatch_block};
use causal_procure::lp::SolverConfig;
use causal_procure::polytope::BatterySpec;
use causal_procure::procurement::battery_exact_jss;

fn main() -> causal_procure::Result<()> {
    let fleet = vec![
        BatterySpec::new(1.0, 1.0, 0.0, 24)?,
        BatterySpec::new(3.0, 1.5, 0.0, 24)?,
        BatterySpec::new(2.0, 1.0, 0.0, 24)?,
    ];
    let prices = [2.0, 1.0, 1.5];
    let sized = battery_exact_jss(&fleet, &prices, &SolverConfig::default())?;
    println!("alpha {:.3?}, cost {:.3}", sized.alphas, sized.jss);

    let schedule = build_block_policy(&fleet, &sized.alphas)?;
    println!(
        "blocks (owner, size): {:?}",
        schedule
            .owners()
            .iter()
            .zip(schedule.sizes())
            .collect::<Vec<_>>()
    );

    // a deterministic zig-zag inside the aggregate rate and capacity envelope
    let rate: f64 = fleet.iter().map(|b| b.rate).sum();
    let cap: f64 = fleet.iter().map(|b| b.capacity).sum();
    let mut fill = 0.0_f64;
    let signal: Vec<f64> = (0..24)
        .map(|t| {
            let want = if (t / 4) % 2 == 0 { rate } else { -rate } * (0.3 + 0.1 * (t % 5) as f64);
            let e = want.clamp(-fill, cap - fill);
            fill += e;
            e
        })
        .collect();
    let d = dispatch_block(&schedule, &signal)?;
    for t in 0..6 {
        let p: Vec<String> = d.power.iter().map(|p| format!("{:+.3}", p[t])).collect();
        println!("t={:>2} e={:+.3} -> [{}]", t + 1, signal[t], p.join(", "));
    }
    Ok(())
}
