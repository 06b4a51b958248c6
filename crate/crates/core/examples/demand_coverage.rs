//! Builds a demand set from the first part of a synthetic regulation-like
//! series and reports how much of the rest it covers as it is inflated.

use causal_procure::demandset::{coverage_curve, segment, split, Center, DemandSetModel};
use causal_procure::lp::SolverConfig;

fn main() -> causal_procure::Result<()> {
    let cfg = SolverConfig::default();
    // deterministic bursty series: slow oscillation plus occasional spikes
    let series: Vec<f64> = (0..2400)
        .map(|k| {
            let x = k as f64;
            let spike = if k % 97 == 0 { 2.5 } else { 0.0 };
            (x * 0.07).sin() + 0.4 * (x * 0.61).cos() + spike
        })
        .collect();
    let ds = segment(&series, 4)?;
    let (train, validation) = split(&ds, 450)?;
    let model = DemandSetModel::build(&train, Center::Centroid, 1.0)?;
    println!(
        "{} training samples, {} validation samples",
        train.len(),
        validation.len()
    );
    let grid: Vec<f64> = (0..=8).map(|k| 1.0 + 0.25 * k as f64).collect();
    for p in coverage_curve(&model, &validation, &grid, &cfg)? {
        println!("delta {:.2}: {:.1}% covered", p.delta, 100.0 * p.coverage);
    }
    Ok(())
}
