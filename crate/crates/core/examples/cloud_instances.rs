//! Virtual-machine instances plus two deferrable batch jobs.

use causal_procure::causal::{causal_feasibility, ScenarioTree};
use causal_procure::lp::SolverConfig;
use causal_procure::polytope::{batch_workload_set, instance_set, BatchJob, VPolytope};
use causal_procure::procurement::{solve_oracle, ProcurementInstance, Resource};

fn main() -> causal_procure::Result<()> {
    let cfg = SolverConfig::default();
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
    let signals = vec![vec![1.0, 2.0, 1.0, 1.0], vec![1.0, 0.5, 1.5, 2.0]];
    let mut vertices = vec![vec![0.0; 4]];
    vertices.extend(signals.iter().cloned());
    let inst = ProcurementInstance::new(
        vec![
            Resource::new(instance_set(4)?, 1.0, true)?,
            Resource::new(batch_workload_set(&jobs, 4)?, 0.0, false)?,
        ],
        VPolytope::new(vertices)?,
    )?;
    let oracle = solve_oracle(&inst, &cfg)?;
    println!("instances to reserve with hindsight: {}", oracle.alphas[0]);

    let tree = ScenarioTree::build(&signals)?;
    let v = causal_feasibility(&tree, inst.resources(), &oracle.alphas, &cfg)?;
    println!(
        "same reservation without hindsight: causal = {}",
        v.is_feasible()
    );
    Ok(())
}
