//! Causal allocation: scenario-tree feasibility, affine policies, and the
//! block dispatch policy for battery fleets.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{check_feasible, Bound, Feasibility, LinearProgram, SolverConfig};
use crate::polytope::BatterySpec;
use crate::procurement::{add_membership_rows_with_aux, Resource};

/// Prefixes closer than this (per coordinate) share a tree node.
pub const PREFIX_TOL: f64 = 1e-9;

/// Tolerance for the structural identities of affine policies.
pub const POLICY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeNode {
    pub id: usize,
    pub parent: Option<usize>,
    pub depth: usize,
    /// `e^t` at this node; `None` only at the root.
    pub value: Option<f64>,
}

/// Signals merged along common prefixes. The root sits at depth 0; a node at
/// depth `t` carries the value of period `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioTree {
    nodes: Vec<TreeNode>,
    children: Vec<Vec<usize>>,
    leaves: Vec<usize>,
    leaf_of_signal: Vec<usize>,
    horizon: usize,
}

impl ScenarioTree {
    pub fn build(signals: &[Vec<f64>]) -> Result<Self> {
        let Some(first) = signals.first() else {
            return Err(Error::invalid("a scenario tree needs at least one signal"));
        };
        let horizon = first.len();
        if horizon == 0 || signals.iter().any(|s| s.len() != horizon) {
            return Err(Error::invalid("signals must share one positive length"));
        }
        if signals.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::invalid("signals must be finite"));
        }
        let mut nodes = vec![TreeNode {
            id: 0,
            parent: None,
            depth: 0,
            value: None,
        }];
        let mut children: Vec<Vec<usize>> = vec![Vec::new()];
        let mut leaves = Vec::new();
        let mut leaf_of_signal = Vec::with_capacity(signals.len());
        for s in signals {
            let mut at = 0;
            for (t, &e) in s.iter().enumerate() {
                let hit = children[at]
                    .iter()
                    .copied()
                    .find(|&c| (nodes[c].value.unwrap() - e).abs() <= PREFIX_TOL);
                at = match hit {
                    Some(c) => c,
                    None => {
                        let id = nodes.len();
                        nodes.push(TreeNode {
                            id,
                            parent: Some(at),
                            depth: t + 1,
                            value: Some(e),
                        });
                        children.push(Vec::new());
                        children[at].push(id);
                        if t + 1 == horizon {
                            leaves.push(id);
                        }
                        id
                    }
                };
            }
            leaf_of_signal.push(at);
        }
        Ok(ScenarioTree {
            nodes,
            children,
            leaves,
            leaf_of_signal,
            horizon,
        })
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn leaves(&self) -> &[usize] {
        &self.leaves
    }

    pub fn children(&self, node: usize) -> &[usize] {
        &self.children[node]
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn num_signals(&self) -> usize {
        self.leaf_of_signal.len()
    }

    pub fn leaf_of_signal(&self, signal: usize) -> usize {
        self.leaf_of_signal[signal]
    }

    /// Input signals that end at `leaf`, in input order.
    pub fn signals_at_leaf(&self, leaf: usize) -> Vec<usize> {
        (0..self.leaf_of_signal.len())
            .filter(|&j| self.leaf_of_signal[j] == leaf)
            .collect()
    }

    /// Node ids from depth 1 to depth `T` ending at `leaf`.
    pub fn path(&self, leaf: usize) -> Vec<usize> {
        let mut path = Vec::with_capacity(self.horizon);
        let mut at = leaf;
        while let Some(p) = self.nodes[at].parent {
            path.push(at);
            at = p;
        }
        path.reverse();
        path
    }

    /// The signal spelled by the path to `leaf`.
    pub fn path_signal(&self, leaf: usize) -> Vec<f64> {
        self.path(leaf)
            .iter()
            .map(|&n| self.nodes[n].value.unwrap())
            .collect()
    }

    /// Depth of the first node with more than one child, if any.
    pub fn first_branch_depth(&self) -> Option<usize> {
        self.nodes
            .iter()
            .filter(|n| self.children[n.id].len() > 1)
            .map(|n| n.depth + 1)
            .min()
    }
}

/// Per-node, per-resource allocations from a feasible tree LP.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeAllocations {
    /// `alloc[node][i]`; the root row is all zeros.
    pub alloc: Vec<Vec<f64>>,
}

impl NodeAllocations {
    /// Trajectory of resource `i` along the path to `leaf`.
    pub fn trajectory(&self, tree: &ScenarioTree, leaf: usize, i: usize) -> Vec<f64> {
        tree.path(leaf).iter().map(|&n| self.alloc[n][i]).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CausalVerdict {
    Feasible(NodeAllocations),
    Infeasible,
}

impl CausalVerdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, CausalVerdict::Feasible(_))
    }
}

/// Whether one causal allocation, shared along common prefixes, keeps every
/// resource inside `α_i S_i` on every scenario.
///
/// Untagged auxiliary coordinates are chosen per scenario; period-tagged ones
/// (job schedules, say) are shared like the outputs.
pub fn causal_feasibility(
    tree: &ScenarioTree,
    resources: &[Resource],
    alphas: &[f64],
    cfg: &SolverConfig,
) -> Result<CausalVerdict> {
    if resources.len() != alphas.len() {
        return Err(Error::invalid("need one scale factor per resource"));
    }
    if let Some(a) = alphas.iter().find(|a| !(**a >= 0.0 && a.is_finite())) {
        return Err(Error::invalid(format!(
            "scale factor {a} must be finite and nonnegative"
        )));
    }
    if let Some(r) = resources.iter().find(|r| r.set.horizon() != tree.horizon) {
        return Err(Error::invalid(format!(
            "resource horizon {} differs from signal length {}",
            r.set.horizon(),
            tree.horizon
        )));
    }
    let n = resources.len();
    let mut lp = LinearProgram::new(0);
    let alpha_vars: Vec<usize> = alphas
        .iter()
        .map(|&a| lp.add_var(0.0, Bound::fixed(a)))
        .collect();
    let mut var = vec![Vec::new(); tree.nodes.len()];
    for node in &tree.nodes[1..] {
        var[node.id] = (0..n).map(|_| lp.add_var(0.0, Bound::FREE)).collect();
        lp.add_eq(var[node.id].iter().map(|&j| (j, 1.0)), node.value.unwrap())?;
    }
    // auxiliaries tagged with period t live on the node of period t
    let mut shared_aux: HashMap<(usize, usize, usize), usize> = HashMap::new();
    for &leaf in &tree.leaves {
        let path = tree.path(leaf);
        for (i, r) in resources.iter().enumerate() {
            let output: Vec<Vec<(usize, f64)>> =
                path.iter().map(|&node| vec![(var[node][i], 1.0)]).collect();
            let aux: Vec<usize> = r
                .set
                .aux_periods()
                .iter()
                .enumerate()
                .map(|(j, period)| match period {
                    Some(t) => *shared_aux
                        .entry((path[*t], i, j))
                        .or_insert_with(|| lp.add_var(0.0, Bound::FREE)),
                    None => lp.add_var(0.0, Bound::FREE),
                })
                .collect();
            add_membership_rows_with_aux(&mut lp, &r.set, &output, &aux, alpha_vars[i])?;
        }
    }
    Ok(match check_feasible(&lp, cfg)? {
        Feasibility::Infeasible => CausalVerdict::Infeasible,
        Feasibility::Feasible(x) => {
            let alloc = var
                .iter()
                .map(|vs| {
                    if vs.is_empty() {
                        vec![0.0; n]
                    } else {
                        vs.iter().map(|&j| x[j]).collect()
                    }
                })
                .collect();
            CausalVerdict::Feasible(NodeAllocations { alloc })
        }
    })
}

/// `φ_i(e) = F_i e + D_i` with lower-triangular `F_i`, `Σ F_i = I`, `Σ D_i = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AffinePolicyJson", into = "AffinePolicyJson")]
pub struct AffinePolicy {
    f: Vec<Vec<Vec<f64>>>,
    d: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AffinePolicyJson {
    #[serde(rename = "F")]
    pub f: Vec<Vec<Vec<f64>>>,
    #[serde(rename = "D")]
    pub d: Vec<Vec<f64>>,
}

impl TryFrom<AffinePolicyJson> for AffinePolicy {
    type Error = Error;

    fn try_from(j: AffinePolicyJson) -> Result<Self> {
        AffinePolicy::new(j.f, j.d)
    }
}

impl From<AffinePolicy> for AffinePolicyJson {
    fn from(p: AffinePolicy) -> Self {
        AffinePolicyJson { f: p.f, d: p.d }
    }
}

impl AffinePolicy {
    pub fn new(f: Vec<Vec<Vec<f64>>>, d: Vec<Vec<f64>>) -> Result<Self> {
        let n = f.len();
        if n == 0 || d.len() != n {
            return Err(Error::invalid(
                "need matching F and D for at least one resource",
            ));
        }
        let t = d[0].len();
        if t == 0
            || d.iter().any(|di| di.len() != t)
            || f.iter().flatten().any(|row| row.len() != t)
            || f.iter().any(|fi| fi.len() != t)
        {
            return Err(Error::invalid(
                "policy matrices must be T×T and offsets of length T",
            ));
        }
        if f.iter()
            .flatten()
            .chain(&d)
            .flatten()
            .any(|v| !v.is_finite())
        {
            return Err(Error::invalid("policy entries must be finite"));
        }
        for fi in &f {
            for (r, row) in fi.iter().enumerate() {
                if row[r + 1..].iter().any(|&v| v != 0.0) {
                    return Err(Error::invalid("policy matrices must be lower triangular"));
                }
            }
        }
        let policy = AffinePolicy { f, d };
        let v = policy.structure_violation();
        if v > POLICY_TOL {
            return Err(Error::invalid(format!(
                "policy matrices do not sum to the identity (off by {v:e})"
            )));
        }
        Ok(policy)
    }

    /// Zeroes the strict upper triangles and sets the last resource to the
    /// exact complement of the others before validating.
    pub fn normalized(mut f: Vec<Vec<Vec<f64>>>, mut d: Vec<Vec<f64>>) -> Result<Self> {
        let n = f.len();
        if n == 0 || d.len() != n {
            return Err(Error::invalid(
                "need matching F and D for at least one resource",
            ));
        }
        let t = d[0].len();
        for fi in &mut f {
            if fi.len() != t || fi.iter().any(|row| row.len() != t) {
                return Err(Error::invalid("policy matrices must be T×T"));
            }
            for (r, row) in fi.iter_mut().enumerate() {
                row[r + 1..].iter_mut().for_each(|v| *v = 0.0);
            }
        }
        for r in 0..t {
            for c in 0..=r {
                let others: f64 = f[..n - 1].iter().map(|fi| fi[r][c]).sum();
                f[n - 1][r][c] = if r == c { 1.0 } else { 0.0 } - others;
            }
            let others: f64 = d[..n - 1].iter().map(|di| di[r]).sum();
            d[n - 1][r] = -others;
        }
        AffinePolicy::new(f, d)
    }

    /// All of the signal to one resource out of `n`.
    pub fn single(n: usize, owner: usize, horizon: usize) -> Result<Self> {
        if owner >= n {
            return Err(Error::invalid("owner index out of range"));
        }
        let identity: Vec<Vec<f64>> = (0..horizon)
            .map(|r| {
                (0..horizon)
                    .map(|c| if r == c { 1.0 } else { 0.0 })
                    .collect()
            })
            .collect();
        let zero = vec![vec![0.0; horizon]; horizon];
        let f = (0..n)
            .map(|i| {
                if i == owner {
                    identity.clone()
                } else {
                    zero.clone()
                }
            })
            .collect();
        AffinePolicy::new(f, vec![vec![0.0; horizon]; n])
    }

    /// `φ_i(e) = β_i^t e^t`: diagonal `F_i`, zero offsets.
    pub fn proportional(beta: &[Vec<f64>]) -> Result<Self> {
        let horizon = beta.first().map_or(0, |b| b.len());
        let f = beta
            .iter()
            .map(|b| {
                (0..horizon)
                    .map(|r| {
                        (0..horizon)
                            .map(|c| if r == c { b[r] } else { 0.0 })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        AffinePolicy::new(f, vec![vec![0.0; horizon]; beta.len()])
    }

    pub fn num_resources(&self) -> usize {
        self.f.len()
    }

    pub fn horizon(&self) -> usize {
        self.d[0].len()
    }

    pub fn f(&self) -> &[Vec<Vec<f64>>] {
        &self.f
    }

    pub fn d(&self) -> &[Vec<f64>] {
        &self.d
    }

    /// Largest deviation from `Σ F_i = I`, `Σ D_i = 0`, or lower-triangularity.
    pub fn structure_violation(&self) -> f64 {
        let t = self.horizon();
        let mut worst = 0.0f64;
        for r in 0..t {
            for c in 0..t {
                let s: f64 = self.f.iter().map(|fi| fi[r][c]).sum();
                worst = worst.max((s - if r == c { 1.0 } else { 0.0 }).abs());
                if c > r {
                    worst = worst.max(self.f.iter().map(|fi| fi[r][c].abs()).fold(0.0, f64::max));
                }
            }
            let s: f64 = self.d.iter().map(|di| di[r]).sum();
            worst = worst.max(s.abs());
        }
        worst
    }

    /// Per-resource trajectories for one signal. The last resource takes the
    /// remainder so the trajectories sum to the signal.
    pub fn dispatch(&self, signal: &[f64]) -> Result<Vec<Vec<f64>>> {
        let t = self.horizon();
        if signal.len() != t {
            return Err(Error::invalid(
                "signal length differs from the policy horizon",
            ));
        }
        let n = self.f.len();
        let mut out: Vec<Vec<f64>> = Vec::with_capacity(n);
        for i in 0..n - 1 {
            out.push(
                (0..t)
                    .map(|r| {
                        (0..=r).map(|c| self.f[i][r][c] * signal[c]).sum::<f64>() + self.d[i][r]
                    })
                    .collect(),
            );
        }
        let last = (0..t)
            .map(|r| signal[r] - out.iter().map(|x| x[r]).sum::<f64>())
            .collect();
        out.push(last);
        Ok(out)
    }
}

/// Free-function form of [`AffinePolicy::dispatch`].
pub fn dispatch_affine(policy: &AffinePolicy, signal: &[f64]) -> Result<Vec<Vec<f64>>> {
    policy.dispatch(signal)
}

/// True iff the trajectories sum to `signal` and each lies in `α_i S_i`.
pub fn verify_dispatch(
    signal: &[f64],
    trajectories: &[Vec<f64>],
    resources: &[Resource],
    alphas: &[f64],
    cfg: &SolverConfig,
) -> Result<bool> {
    if trajectories.len() != resources.len() || alphas.len() != resources.len() {
        return Err(Error::invalid(
            "need one trajectory and one scale factor per resource",
        ));
    }
    let t_len = signal.len();
    if trajectories.iter().any(|x| x.len() != t_len) {
        return Err(Error::invalid("trajectory length differs from the signal"));
    }
    for t in 0..t_len {
        let total: f64 = trajectories.iter().map(|x| x[t]).sum();
        if (total - signal[t]).abs() > cfg.feas_tol * (1.0 + signal[t].abs()) {
            return Ok(false);
        }
    }
    for ((x, r), &a) in trajectories.iter().zip(resources).zip(alphas) {
        if r.set.gap(x, a, cfg)? > 10.0 * cfg.feas_tol {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---- block policy ------------------------------------------------------

/// A battery after splitting, in unit (unprocured) terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedBattery {
    pub origin: usize,
    pub capacity: f64,
    pub rate: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Block {
    /// Index into [`BlockSchedule::derived`].
    pub battery: usize,
    pub size: f64,
    pub start: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub original: usize,
    pub equal_part: usize,
    pub deep_part: usize,
}

/// Capacity blocks of a procured battery fleet, filled in a fixed order to
/// behave like one large battery.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockSchedule {
    pub originals: Vec<BatterySpec>,
    pub alphas: Vec<f64>,
    pub derived: Vec<DerivedBattery>,
    pub blocks: Vec<Block>,
    pub splits: Vec<Split>,
    /// Aggregate fill before the first period.
    pub initial_fill: f64,
    pub total_capacity: f64,
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// Builds the block order for batteries procured at `alphas`. Requires
/// `Σ α_i r_i ≥ Σ r_i`, `Σ α_i min(2r_i, C_i) ≥ Σ C_i`, and `C_i ≥ r_i`.
pub fn build_block_policy(batteries: &[BatterySpec], alphas: &[f64]) -> Result<BlockSchedule> {
    if batteries.is_empty() || batteries.len() != alphas.len() {
        return Err(Error::invalid(
            "need one scale factor per battery and at least one battery",
        ));
    }
    for b in batteries {
        b.validate()?;
    }
    if let Some(a) = alphas.iter().find(|a| !(**a >= 0.0 && a.is_finite())) {
        return Err(Error::invalid(format!(
            "scale factor {a} must be finite and nonnegative"
        )));
    }
    if let Some((i, _)) = batteries
        .iter()
        .enumerate()
        .find(|(_, b)| b.capacity < b.rate && !near(b.capacity, b.rate))
    {
        return Err(Error::precondition(format!(
            "battery {i} has capacity below its rate"
        )));
    }
    let total_r: f64 = batteries.iter().map(|b| b.rate).sum();
    let total_c: f64 = batteries.iter().map(|b| b.capacity).sum();
    let rate: f64 = batteries.iter().zip(alphas).map(|(b, a)| a * b.rate).sum();
    let energy: f64 = batteries
        .iter()
        .zip(alphas)
        .map(|(b, a)| a * (2.0 * b.rate).min(b.capacity))
        .sum();
    let slack = 1e-9 * (1.0 + total_c.max(total_r));
    if rate < total_r - slack {
        return Err(Error::precondition(format!(
            "procured rate {rate} is below the fleet rate {total_r}"
        )));
    }
    if energy < total_c - slack {
        return Err(Error::precondition(format!(
            "usable procured energy {energy} is below the fleet capacity {total_c}"
        )));
    }

    let mut derived = Vec::new();
    let mut splits = Vec::new();
    for (i, (b, &a)) in batteries.iter().zip(alphas).enumerate() {
        let (c, r) = (b.capacity, b.rate);
        if near(c, r) || c >= 2.0 * r || near(c, 2.0 * r) {
            derived.push(DerivedBattery {
                origin: i,
                capacity: c,
                rate: r,
                alpha: a,
            });
        } else {
            let equal = 2.0 * r - c;
            derived.push(DerivedBattery {
                origin: i,
                capacity: equal,
                rate: equal,
                alpha: a,
            });
            derived.push(DerivedBattery {
                origin: i,
                capacity: 2.0 * c - 2.0 * r,
                rate: c - r,
                alpha: a,
            });
            splits.push(Split {
                original: i,
                equal_part: derived.len() - 2,
                deep_part: derived.len() - 1,
            });
        }
    }
    let is_equal = |d: &DerivedBattery| near(d.capacity, d.rate);
    let mut deep: Vec<usize> = (0..derived.len())
        .filter(|&k| !is_equal(&derived[k]))
        .collect();
    deep.sort_by(|&x, &y| {
        let rx = derived[x].capacity / derived[x].rate;
        let ry = derived[y].capacity / derived[y].rate;
        ry.total_cmp(&rx).then(x.cmp(&y))
    });
    let equal: Vec<usize> = (0..derived.len())
        .filter(|&k| is_equal(&derived[k]))
        .collect();

    let mut blocks = Vec::new();
    let mut start = 0.0;
    let order = deep.iter().chain(&equal).chain(&deep);
    for &k in order {
        let d = &derived[k];
        let size = d.alpha * d.rate;
        blocks.push(Block {
            battery: k,
            size,
            start,
        });
        start += size;
    }
    let initial_fill = batteries.iter().map(|b| b.initial_soc * b.capacity).sum();
    Ok(BlockSchedule {
        originals: batteries.to_vec(),
        alphas: alphas.to_vec(),
        derived,
        blocks,
        splits,
        initial_fill,
        total_capacity: start,
    })
}

impl BlockSchedule {
    /// Block sizes in fill order.
    pub fn sizes(&self) -> Vec<f64> {
        self.blocks.iter().map(|b| b.size).collect()
    }

    /// Original battery index of each block in fill order.
    pub fn owners(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .map(|b| self.derived[b.battery].origin)
            .collect()
    }

    /// State of charge of every original battery at aggregate fill `x`.
    pub fn charge_at(&self, x: f64) -> Vec<f64> {
        let mut soc = vec![0.0; self.originals.len()];
        for b in &self.blocks {
            soc[self.derived[b.battery].origin] += (x - b.start).clamp(0.0, b.size);
        }
        soc
    }

    /// Initial state of charge, as a fraction of procured capacity, that each
    /// battery must start from for the schedule to apply.
    pub fn required_initial_soc(&self) -> Vec<f64> {
        self.charge_at(self.initial_fill)
            .iter()
            .zip(&self.originals)
            .zip(&self.alphas)
            .map(|((s, b), a)| {
                let cap = a * b.capacity;
                if cap > 0.0 {
                    s / cap
                } else {
                    0.0
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockDispatch {
    /// `power[i][t]`, charging positive.
    pub power: Vec<Vec<f64>>,
    /// `soc[i][t]` for `t = 0..=T`, in energy units.
    pub soc: Vec<Vec<f64>>,
}

/// Serves the signal one period at a time: the aggregate fill moves by `e^t`
/// and each battery holds the part of its blocks below the fill.
pub fn dispatch_block(schedule: &BlockSchedule, signal: &[f64]) -> Result<BlockDispatch> {
    let n = schedule.originals.len();
    let tol = 1e-9 * (1.0 + schedule.total_capacity);
    let mut fill = schedule.initial_fill;
    let mut prev = schedule.charge_at(fill);
    let mut power = vec![Vec::with_capacity(signal.len()); n];
    let mut soc: Vec<Vec<f64>> = prev.iter().map(|&s| vec![s]).collect();
    for (t, &e) in signal.iter().enumerate() {
        let period = t + 1;
        if !e.is_finite() {
            return Err(Error::invalid("signal must be finite"));
        }
        fill += e;
        if fill < -tol || fill > schedule.total_capacity + tol {
            return Err(Error::CoverageViolation {
                period,
                detail: format!(
                    "aggregate fill {fill} outside [0, {}]",
                    schedule.total_capacity
                ),
            });
        }
        let now = schedule.charge_at(fill);
        for i in 0..n {
            let p = now[i] - prev[i];
            let b = &schedule.originals[i];
            let a = schedule.alphas[i];
            if p.abs() > a * b.rate + tol {
                return Err(Error::CoverageViolation {
                    period,
                    detail: format!("battery {i} moves {p} against rate {}", a * b.rate),
                });
            }
            if now[i] < -tol || now[i] > a * b.capacity + tol {
                return Err(Error::CoverageViolation {
                    period,
                    detail: format!(
                        "battery {i} charge {} outside [0, {}]",
                        now[i],
                        a * b.capacity
                    ),
                });
            }
            power[i].push(p);
            soc[i].push(now[i]);
        }
        prev = now;
    }
    Ok(BlockDispatch { power, soc })
}
