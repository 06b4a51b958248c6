//! Splits a procurement cost among market participants by their contribution
//! to the aggregate imbalance.

use causal_procure::costalloc::{aggregate, allocate_cost, Participant};

fn main() -> causal_procure::Result<()> {
    let participants = vec![
        Participant::new(vec![1.0, 0.5, -0.5, 2.0]),
        Participant::new(vec![0.5, 1.0, 1.5, -1.0]),
        Participant::new(vec![-0.5, 0.5, 1.0, 0.0]),
        Participant::new(vec![-0.2, -0.4, 0.1, -0.3]),
    ];
    let e = aggregate(&participants);
    let out = allocate_cost(&participants, &e, 10.0)?;
    println!("aggregate {e:?}");
    for (i, s) in out.shares.iter().enumerate() {
        println!("participant {i}: {s:+.4}");
    }
    println!(
        "sum {:.4}, audit {:?}",
        out.shares.iter().sum::<f64>(),
        out.audit.unwrap()
    );
    Ok(())
}
