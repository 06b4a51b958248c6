//! Shared helpers for integration tests: random instance generators and
//! independent brute-force oracles.
#![allow(dead_code)]

use std::path::PathBuf;

use causal_procure::lp::{Bound, LinearProgram, SolverConfig};
use causal_procure::polytope::{
    batch_workload_set, battery_set, instance_set, BatchJob, BatterySpec, HPolytope, VPolytope,
};
use causal_procure::procurement::{ProcurementInstance, Resource};
use rand::Rng;

pub fn cfg() -> SolverConfig {
    SolverConfig::default()
}

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

pub fn battery(c: f64, r: f64, theta: f64, t: usize) -> HPolytope {
    battery_set(&BatterySpec::new(c, r, theta, t).unwrap()).unwrap()
}

pub fn battery_example() -> ProcurementInstance {
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

pub fn cloud_example() -> ProcurementInstance {
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

pub fn rectangle_example() -> ProcurementInstance {
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
    ProcurementInstance::new(
        vec![
            Resource::new(battery(9.0, 2.0, 1.0 / 3.0, 3), 2.0, true).unwrap(),
            Resource::new(battery(5.0, 5.0, 0.4, 3), 5.0, true).unwrap(),
        ],
        demand,
    )
    .unwrap()
}

/// `n` empty batteries with `r ≤ C ≤ 3r`, drawn on a quarter grid.
pub fn random_fleet(rng: &mut impl Rng, n: usize, horizon: usize) -> Vec<BatterySpec> {
    (0..n)
        .map(|_| {
            let r = f64::from(rng.gen_range(2..=8)) / 4.0;
            let c = r * f64::from(rng.gen_range(4..=12)) / 4.0;
            BatterySpec::new(c, r, 0.0, horizon).unwrap()
        })
        .collect()
}

/// A random walk whose aggregate fill stays in `[0, capacity]` and whose
/// steps stay within `±rate`.
pub fn envelope_walk(
    rng: &mut impl Rng,
    len: usize,
    rate: f64,
    capacity: f64,
    start: f64,
) -> Vec<f64> {
    let mut fill = start;
    (0..len)
        .map(|_| {
            let lo = (-rate).max(-fill);
            let hi = rate.min(capacity - fill);
            // hit the envelope edges now and then
            let e = match rng.gen_range(0..6) {
                0 => lo,
                1 => hi,
                _ => rng.gen_range(lo..=hi),
            };
            fill = (fill + e).clamp(0.0, capacity);
            e
        })
        .collect()
}

/// Solves a square system by Gaussian elimination with partial pivoting.
/// Returns `None` when the matrix is numerically singular.
pub fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv =
            (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[piv][col].abs() < 1e-10 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                if f != 0.0 {
                    for c in col..n {
                        a[r][c] -= f * a[col][c];
                    }
                    b[r] -= f * b[col];
                }
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// A random bounded-feasible LP `min c·x, A x <= b, 0 <= x <= u`, returned
/// both as a [`LinearProgram`] and as dense data for the oracle.
pub struct BoxLp {
    pub c: Vec<f64>,
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub upper: Vec<f64>,
}

impl BoxLp {
    pub fn random(rng: &mut impl Rng, n: usize, m: usize) -> Self {
        let c = (0..n)
            .map(|_| rng.gen_range(-3.0..3.0f64).round())
            .collect();
        let a = (0..m)
            .map(|_| {
                (0..n)
                    .map(|_| rng.gen_range(-4.0..4.0f64).round())
                    .collect()
            })
            .collect();
        // b > 0 keeps the origin feasible
        let b = (0..m).map(|_| rng.gen_range(1.0..8.0f64).round()).collect();
        let upper = (0..n).map(|_| rng.gen_range(1.0..5.0f64).round()).collect();
        BoxLp { c, a, b, upper }
    }

    pub fn to_lp(&self) -> LinearProgram {
        let bounds = self.upper.iter().map(|&u| Bound::new(0.0, u)).collect();
        LinearProgram::from_dense(self.c.clone(), &[], &[], &self.a, &self.b, bounds).unwrap()
    }

    /// Minimum over every vertex obtained by making `n` of the constraints
    /// (rows and bound facets) tight.
    pub fn brute_force_min(&self) -> f64 {
        let n = self.c.len();
        let mut rows: Vec<(Vec<f64>, f64)> =
            self.a.iter().cloned().zip(self.b.iter().copied()).collect();
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            rows.push((e.clone(), self.upper[j]));
            e[j] = -1.0;
            rows.push((e, 0.0));
        }
        let mut best = f64::INFINITY;
        for s in subsets(rows.len(), n) {
            let a: Vec<Vec<f64>> = s.iter().map(|&i| rows[i].0.clone()).collect();
            let b: Vec<f64> = s.iter().map(|&i| rows[i].1).collect();
            let Some(x) = solve_square(a, b) else {
                continue;
            };
            let feasible = rows
                .iter()
                .all(|(r, rhs)| r.iter().zip(&x).map(|(p, q)| p * q).sum::<f64>() <= rhs + 1e-9);
            if feasible {
                let obj: f64 = self.c.iter().zip(&x).map(|(p, q)| p * q).sum();
                best = best.min(obj);
            }
        }
        best
    }
}

/// The box `lo ≤ x ≤ hi` in H-form.
pub fn box_set(lo: &[f64], hi: &[f64]) -> HPolytope {
    let t = lo.len();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for k in 0..t {
        let mut row = vec![0.0; t];
        row[k] = 1.0;
        a.push(row.clone());
        b.push(hi[k]);
        row[k] = -1.0;
        a.push(row);
        b.push(-lo[k]);
    }
    HPolytope::new(a, b, t, 0).unwrap()
}

/// Hull of 2 to 6 uniform points in `[-spread, spread]^horizon`.
pub fn random_demand(rng: &mut impl Rng, horizon: usize, spread: f64) -> VPolytope {
    let m = rng.gen_range(2..=6);
    let pts = (0..m)
        .map(|_| {
            (0..horizon)
                .map(|_| rng.gen_range(-spread..spread))
                .collect()
        })
        .collect();
    VPolytope::new(pts).unwrap()
}
