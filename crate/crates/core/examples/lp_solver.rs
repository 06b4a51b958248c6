//! A small production-planning LP solved with the dense simplex.

use causal_procure::lp::{solve_lp, LinearProgram, SolverConfig};

fn main() -> causal_procure::Result<()> {
    // max 3x + 5y  s.t.  x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18
    let mut lp = LinearProgram::new(2);
    lp.set_objective(0, -3.0);
    lp.set_objective(1, -5.0);
    lp.add_le([(0, 1.0)], 4.0)?;
    lp.add_le([(1, 2.0)], 12.0)?;
    lp.add_le([(0, 3.0), (1, 2.0)], 18.0)?;
    let sol = solve_lp(&lp, &SolverConfig::default())?;
    let x = sol.point.expect("optimal");
    println!(
        "status {:?}, x = {:?}, profit = {}",
        sol.status,
        x,
        -sol.objective_value.unwrap()
    );
    println!("row duals {:?}", sol.duals);
    Ok(())
}
