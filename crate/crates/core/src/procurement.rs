//! Procurement costs: the oracle optimum `J*`, upper bounds on the causal
//! optimum `J**` from three policy classes, the exact battery-fleet `J**`,
//! and the price of causality.
//!
//! All formulations that quantify over demand vertices are solved by lazy
//! vertex generation: a restricted LP over a few vertices is solved, every
//! other vertex is checked against the candidate, and violated vertices are
//! added until none remain. The final answer is optimal for the full set.

use serde::{Deserialize, Serialize};

use crate::causal::AffinePolicy;
use crate::error::{Error, Result};
use crate::lp::{solve_lp, Bound, LinearProgram, LpSolution, LpStatus, SolverConfig};
use crate::polytope::{
    batch_workload_set, battery_set, hrep_to_vrep, instance_set, minkowski_sum_vertices, BatchJob,
    BatterySpec, HPolytope, HrepJson, VPolytope, VrepJson,
};

/// Oracle costs at or below this are treated as zero.
pub const ZERO_COST_TOL: f64 = 1e-9;

/// Vertices added to the restricted problem per round.
const MAX_CUTS_PER_ROUND: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct Resource {
    pub set: HPolytope,
    pub price: f64,
    pub scalable: bool,
}

impl Resource {
    pub fn new(set: HPolytope, price: f64, scalable: bool) -> Result<Self> {
        if !(price >= 0.0 && price.is_finite()) {
            return Err(Error::invalid(format!(
                "price {price} must be finite and nonnegative"
            )));
        }
        Ok(Resource {
            set,
            price,
            scalable,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProcurementInstance {
    resources: Vec<Resource>,
    demand: VPolytope,
}

impl ProcurementInstance {
    pub fn new(resources: Vec<Resource>, demand: VPolytope) -> Result<Self> {
        if resources.is_empty() {
            return Err(Error::invalid("an instance needs at least one resource"));
        }
        let t = demand.horizon();
        if let Some(r) = resources.iter().find(|r| r.set.horizon() != t) {
            return Err(Error::invalid(format!(
                "resource horizon {} differs from demand horizon {t}",
                r.set.horizon()
            )));
        }
        if let Some(r) = resources
            .iter()
            .find(|r| !(r.price >= 0.0 && r.price.is_finite()))
        {
            return Err(Error::invalid(format!(
                "price {} must be finite and nonnegative",
                r.price
            )));
        }
        Ok(ProcurementInstance { resources, demand })
    }

    pub fn resources(&self) -> &[Resource] {
        &self.resources
    }

    pub fn demand(&self) -> &VPolytope {
        &self.demand
    }

    pub fn horizon(&self) -> usize {
        self.demand.horizon()
    }

    pub fn cost(&self, alphas: &[f64]) -> f64 {
        self.resources
            .iter()
            .zip(alphas)
            .map(|(r, a)| r.price * a)
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    /// `pieces[k][i]`: the share of demand vertex `k` assigned to resource `i`.
    Factorization {
        pieces: Vec<Vec<Vec<f64>>>,
    },
    /// Fixed split `β_i`; `scale_factors[i]` is the smallest `k_i` with
    /// `E ⊆ k_i S_i` for scalable resources where it exists.
    Proportional {
        beta: Vec<f64>,
        scale_factors: Vec<Option<f64>>,
    },
    /// `beta[i][t]`.
    TimeVarying {
        beta: Vec<Vec<f64>>,
    },
    Affine(AffinePolicy),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProcurementResult {
    pub alphas: Vec<f64>,
    pub cost: f64,
    pub certificate: Certificate,
}

fn alpha_bound(r: &Resource) -> Bound {
    if r.scalable {
        Bound::NONNEG
    } else {
        Bound::fixed(1.0)
    }
}

fn optimal_point(sol: LpSolution, what: &str) -> Result<Vec<f64>> {
    match sol.status {
        LpStatus::Optimal => Ok(sol.point.unwrap()),
        LpStatus::Infeasible => Err(Error::infeasible(format!(
            "{what}: no feasible procurement"
        ))),
        LpStatus::Unbounded => Err(Error::Unbounded(what.to_string())),
    }
}

/// Starting vertices: extremes of every coordinate plus the longest vertex.
fn initial_active(demand: &VPolytope) -> Vec<usize> {
    let v = demand.vertices();
    let mut picks = Vec::new();
    for t in 0..demand.horizon() {
        let hi = (0..v.len())
            .max_by(|&a, &b| v[a][t].total_cmp(&v[b][t]).then(b.cmp(&a)))
            .unwrap();
        let lo = (0..v.len())
            .min_by(|&a, &b| v[a][t].total_cmp(&v[b][t]).then(a.cmp(&b)))
            .unwrap();
        picks.push(hi);
        picks.push(lo);
    }
    let norm = |p: &[f64]| p.iter().map(|x| x * x).sum::<f64>();
    let far = (0..v.len())
        .max_by(|&a, &b| norm(&v[a]).total_cmp(&norm(&v[b])).then(b.cmp(&a)))
        .unwrap();
    picks.push(far);
    picks.sort_unstable();
    picks.dedup();
    picks
}

/// Restricted-master loop shared by the vertex-indexed formulations.
fn generate<S>(
    demand: &VPolytope,
    cfg: &SolverConfig,
    mut solve: impl FnMut(&[usize]) -> Result<S>,
    mut gap: impl FnMut(&S, usize) -> Result<f64>,
) -> Result<S> {
    let k = demand.len();
    let mut active = initial_active(demand);
    let mut in_set = vec![false; k];
    for &j in &active {
        in_set[j] = true;
    }
    let tol = 2.0 * cfg.feas_tol;
    loop {
        let sol = solve(&active)?;
        let mut violated = Vec::new();
        for j in 0..k {
            if in_set[j] {
                continue;
            }
            let g = gap(&sol, j)?;
            if g > tol {
                violated.push((g, j));
            }
        }
        if violated.is_empty() {
            return Ok(sol);
        }
        violated.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        for &(_, j) in violated.iter().take(MAX_CUTS_PER_ROUND) {
            in_set[j] = true;
            active.push(j);
        }
        active.sort_unstable();
    }
}

/// Adds the rows `A [x; w] ≤ α b` where `x = Σ_j coef_j · var_j` per output
/// coordinate and `w` gets fresh free variables.
pub(crate) fn add_membership_rows(
    lp: &mut LinearProgram,
    set: &HPolytope,
    output: &[Vec<(usize, f64)>],
    alpha_var: usize,
) -> Result<()> {
    let aux: Vec<usize> = (0..set.n_aux())
        .map(|_| lp.add_var(0.0, Bound::FREE))
        .collect();
    add_membership_rows_with_aux(lp, set, output, &aux, alpha_var)
}

/// As [`add_membership_rows`], with caller-provided auxiliary variables.
pub(crate) fn add_membership_rows_with_aux(
    lp: &mut LinearProgram,
    set: &HPolytope,
    output: &[Vec<(usize, f64)>],
    aux: &[usize],
    alpha_var: usize,
) -> Result<()> {
    let t_len = set.horizon();
    for (row, &b) in set.rows().iter().zip(set.rhs()) {
        let mut coefs: Vec<(usize, f64)> = Vec::new();
        for t in 0..t_len {
            if row[t] != 0.0 {
                coefs.extend(output[t].iter().map(|&(j, c)| (j, row[t] * c)));
            }
        }
        coefs.extend(
            aux.iter()
                .zip(&row[t_len..])
                .filter(|(_, &a)| a != 0.0)
                .map(|(&j, &a)| (j, a)),
        );
        if b != 0.0 {
            coefs.push((alpha_var, -b));
        }
        lp.add_le(coefs, 0.0)?;
    }
    Ok(())
}

/// Smallest uniform violation of `v ∈ ⊕ α_i S_i`, with the factorization
/// attaining it.
fn factorization_gap(
    inst: &ProcurementInstance,
    alphas: &[f64],
    v: &[f64],
    cfg: &SolverConfig,
) -> Result<(f64, Vec<Vec<f64>>)> {
    let t_len = inst.horizon();
    let mut lp = LinearProgram::new(0);
    let slack = lp.add_var(1.0, Bound::NONNEG);
    let mut pieces_idx = Vec::new();
    for (r, &alpha) in inst.resources.iter().zip(alphas) {
        let q: Vec<usize> = (0..t_len).map(|_| lp.add_var(0.0, Bound::FREE)).collect();
        let w: Vec<usize> = (0..r.set.n_aux())
            .map(|_| lp.add_var(0.0, Bound::FREE))
            .collect();
        for (row, &b) in r.set.rows().iter().zip(r.set.rhs()) {
            let coefs = q
                .iter()
                .chain(&w)
                .zip(row)
                .filter(|(_, &a)| a != 0.0)
                .map(|(&j, &a)| (j, a))
                .chain(std::iter::once((slack, -1.0)));
            lp.add_le(coefs, alpha * b)?;
        }
        pieces_idx.push(q);
    }
    for t in 0..t_len {
        lp.add_eq(pieces_idx.iter().map(|q| (q[t], 1.0)), v[t])?;
    }
    let x = optimal_point(solve_lp(&lp, cfg)?, "factorization check")?;
    let pieces = pieces_idx
        .iter()
        .map(|q| q.iter().map(|&j| x[j]).collect())
        .collect();
    Ok((x[slack].max(0.0), pieces))
}

/// Largest factorization gap over the demand vertices at fixed `alphas`;
/// zero (up to solver tolerance) iff `E ⊆ ⊕ α_i S_i`.
pub fn coverage_gap(inst: &ProcurementInstance, alphas: &[f64], cfg: &SolverConfig) -> Result<f64> {
    if alphas.len() != inst.resources.len() {
        return Err(Error::invalid("need one scale factor per resource"));
    }
    let mut worst = 0.0f64;
    for v in inst.demand.vertices() {
        worst = worst.max(factorization_gap(inst, alphas, v, cfg)?.0);
    }
    Ok(worst)
}

/// The oracle cost `J*`: cover every demand vertex separately.
pub fn solve_oracle(inst: &ProcurementInstance, cfg: &SolverConfig) -> Result<ProcurementResult> {
    let t_len = inst.horizon();
    let n = inst.resources.len();
    let vertices = inst.demand.vertices();
    let mut stored: Vec<Option<Vec<Vec<f64>>>> = vec![None; vertices.len()];

    let solve = |active: &[usize]| -> Result<(Vec<f64>, Vec<(usize, Vec<Vec<f64>>)>)> {
        let mut lp = LinearProgram::new(0);
        let alpha: Vec<usize> = inst
            .resources
            .iter()
            .map(|r| lp.add_var(r.price, alpha_bound(r)))
            .collect();
        let mut q_index = Vec::new();
        for &k in active {
            let q: Vec<Vec<usize>> = (0..n)
                .map(|_| (0..t_len).map(|_| lp.add_var(0.0, Bound::FREE)).collect())
                .collect();
            for t in 0..t_len {
                lp.add_eq(q.iter().map(|qi| (qi[t], 1.0)), vertices[k][t])?;
            }
            for (i, r) in inst.resources.iter().enumerate() {
                let output: Vec<Vec<(usize, f64)>> = q[i].iter().map(|&j| vec![(j, 1.0)]).collect();
                add_membership_rows(&mut lp, &r.set, &output, alpha[i])?;
            }
            q_index.push((k, q));
        }
        let x = optimal_point(solve_lp(&lp, cfg)?, "oracle procurement")?;
        let alphas = alpha.iter().map(|&j| x[j]).collect();
        let pieces = q_index
            .into_iter()
            .map(|(k, q)| {
                (
                    k,
                    q.iter()
                        .map(|qi| qi.iter().map(|&j| x[j]).collect())
                        .collect(),
                )
            })
            .collect();
        Ok((alphas, pieces))
    };
    let gap = |sol: &(Vec<f64>, Vec<(usize, Vec<Vec<f64>>)>), k: usize| -> Result<f64> {
        let (g, pieces) = factorization_gap(inst, &sol.0, &vertices[k], cfg)?;
        stored[k] = Some(pieces);
        Ok(g)
    };
    let (alphas, master_pieces) = generate(&inst.demand, cfg, solve, gap)?;
    for (k, p) in master_pieces {
        stored[k] = Some(p);
    }
    let pieces = stored
        .into_iter()
        .map(|p| p.expect("every vertex checked or solved"))
        .collect();
    Ok(ProcurementResult {
        cost: inst.cost(&alphas),
        alphas,
        certificate: Certificate::Factorization { pieces },
    })
}

/// Closed-form interval `{β : β v_k ∈ S ∀k}` for sets without auxiliaries.
fn ray_interval(
    set: &HPolytope,
    points: &[Vec<f64>],
    lo: f64,
    hi: f64,
    tol: f64,
) -> Option<(f64, f64)> {
    let (mut lo, mut hi) = (lo, hi);
    for (row, &b) in set.rows().iter().zip(set.rhs()) {
        for v in points {
            let av: f64 = row.iter().zip(v).map(|(p, q)| p * q).sum();
            if av > 1e-12 {
                hi = hi.min(b / av);
            } else if av < -1e-12 {
                lo = lo.max(b / av);
            } else if b < -tol {
                return None;
            }
        }
    }
    (lo <= hi + tol).then_some((lo, hi.max(lo)))
}

/// `{β ∈ [0, 1] : β v_k ∈ S ∀k}` as an interval, or `None` if empty.
fn proportion_interval(
    set: &HPolytope,
    points: &[Vec<f64>],
    cfg: &SolverConfig,
) -> Result<Option<(f64, f64)>> {
    if set.n_aux() == 0 {
        return Ok(ray_interval(set, points, 0.0, 1.0, cfg.feas_tol));
    }
    let t_len = set.horizon();
    let mut ends = [0.0; 2];
    for (slot, sign) in [(0, 1.0), (1, -1.0)] {
        let mut lp = LinearProgram::new(1);
        lp.set_bounds(0, 0.0, 1.0)?;
        lp.set_objective(0, sign);
        for v in points {
            let w: Vec<usize> = (0..set.n_aux())
                .map(|_| lp.add_var(0.0, Bound::FREE))
                .collect();
            for (row, &b) in set.rows().iter().zip(set.rhs()) {
                let av: f64 = row[..t_len].iter().zip(v).map(|(p, q)| p * q).sum();
                let coefs = std::iter::once((0, av))
                    .chain(w.iter().zip(&row[t_len..]).map(|(&j, &a)| (j, a)));
                lp.add_le(coefs, b)?;
            }
        }
        let sol = solve_lp(&lp, cfg)?;
        match sol.status {
            LpStatus::Optimal => ends[slot] = sol.point.unwrap()[0],
            LpStatus::Infeasible => return Ok(None),
            LpStatus::Unbounded => return Err(Error::Unbounded("proportion interval".into())),
        }
    }
    Ok(Some((ends[0], ends[1])))
}

/// `min {α ≥ 0 : v_k ∈ α S ∀k}`, or `None` if no scale works.
pub fn covering_scale(
    set: &HPolytope,
    points: &[Vec<f64>],
    cfg: &SolverConfig,
) -> Result<Option<f64>> {
    let t_len = set.horizon();
    if set.n_aux() == 0 {
        // α b ≥ a·v for every row: lower bounds where b > 0, upper where b < 0
        let (mut lo, mut hi) = (0.0f64, f64::INFINITY);
        for (row, &b) in set.rows().iter().zip(set.rhs()) {
            for v in points {
                let av: f64 = row[..t_len].iter().zip(v).map(|(p, q)| p * q).sum();
                if b > 0.0 {
                    lo = lo.max(av / b);
                } else if b < 0.0 {
                    hi = hi.min(av / b);
                } else if av > cfg.feas_tol {
                    return Ok(None);
                }
            }
        }
        return Ok((lo <= hi + cfg.feas_tol).then_some(lo));
    }
    let mut lp = LinearProgram::new(1);
    lp.set_objective(0, 1.0);
    for v in points {
        let w: Vec<usize> = (0..set.n_aux())
            .map(|_| lp.add_var(0.0, Bound::FREE))
            .collect();
        for (row, &b) in set.rows().iter().zip(set.rhs()) {
            let av: f64 = row[..t_len].iter().zip(v).map(|(p, q)| p * q).sum();
            let coefs =
                std::iter::once((0, -b)).chain(w.iter().zip(&row[t_len..]).map(|(&j, &a)| (j, a)));
            lp.add_le(coefs, -av)?;
        }
    }
    let sol = solve_lp(&lp, cfg)?;
    Ok(match sol.status {
        LpStatus::Optimal => Some(sol.point.unwrap()[0]),
        _ => None,
    })
}

/// Best fixed-proportion policy: non-scalable resources take as large a share
/// as they can hold, the remainder goes to the scalable resource with the
/// lowest `k_i p_i`.
pub fn proportional_bound(
    inst: &ProcurementInstance,
    cfg: &SolverConfig,
) -> Result<ProcurementResult> {
    let n = inst.resources.len();
    let points = inst.demand.vertices();
    let mut beta = vec![0.0; n];
    let mut alphas = vec![0.0; n];
    let mut scale_factors = vec![None; n];
    let mut intervals = Vec::new();
    for (i, r) in inst.resources.iter().enumerate() {
        if r.scalable {
            scale_factors[i] = covering_scale(&r.set, points, cfg)?;
        } else {
            alphas[i] = 1.0;
            match proportion_interval(&r.set, points, cfg)? {
                Some(iv) => intervals.push((i, iv)),
                None => {
                    return Err(Error::infeasible(format!(
                        "no fixed proportion keeps non-scalable resource {i} inside its set"
                    )))
                }
            }
        }
    }
    let sum_lo: f64 = intervals.iter().map(|(_, iv)| iv.0).sum();
    let sum_hi: f64 = intervals.iter().map(|(_, iv)| iv.1).sum();
    if sum_lo > 1.0 + cfg.feas_tol {
        return Err(Error::infeasible(
            "non-scalable resources need more than the whole signal",
        ));
    }
    if sum_hi >= 1.0 {
        let spread = sum_hi - sum_lo;
        let lambda = if spread > 0.0 {
            ((1.0 - sum_lo) / spread).clamp(0.0, 1.0)
        } else {
            0.0
        };
        for &(i, (lo, hi)) in &intervals {
            beta[i] = lo + lambda * (hi - lo);
        }
    } else {
        for &(i, (_, hi)) in &intervals {
            beta[i] = hi;
        }
        let residual = 1.0 - sum_hi;
        let winner = (0..n)
            .filter_map(|i| scale_factors[i].map(|k| (i, k * inst.resources[i].price)))
            .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        let Some((w, _)) = winner else {
            return Err(Error::infeasible(
                "no scalable resource can cover the demand set at any scale",
            ));
        };
        beta[w] = residual;
        alphas[w] = scale_factors[w].unwrap() * residual;
    }
    Ok(ProcurementResult {
        cost: inst.cost(&alphas),
        alphas,
        certificate: Certificate::Proportional {
            beta,
            scale_factors,
        },
    })
}

/// Per-period proportions `β_i^t ≥ 0` with `Σ_i β_i^t = 1`.
pub fn tv_proportional_bound(
    inst: &ProcurementInstance,
    cfg: &SolverConfig,
) -> Result<ProcurementResult> {
    let t_len = inst.horizon();
    let vertices = inst.demand.vertices();
    type Sol = (Vec<f64>, Vec<Vec<f64>>);
    let solve = |active: &[usize]| -> Result<Sol> {
        let mut lp = LinearProgram::new(0);
        let alpha: Vec<usize> = inst
            .resources
            .iter()
            .map(|r| lp.add_var(r.price, alpha_bound(r)))
            .collect();
        let beta: Vec<Vec<usize>> = inst
            .resources
            .iter()
            .map(|_| (0..t_len).map(|_| lp.add_var(0.0, Bound::NONNEG)).collect())
            .collect();
        for t in 0..t_len {
            lp.add_eq(beta.iter().map(|b| (b[t], 1.0)), 1.0)?;
        }
        for &k in active {
            for (i, r) in inst.resources.iter().enumerate() {
                let output: Vec<Vec<(usize, f64)>> = (0..t_len)
                    .map(|t| vec![(beta[i][t], vertices[k][t])])
                    .collect();
                add_membership_rows(&mut lp, &r.set, &output, alpha[i])?;
            }
        }
        let x = optimal_point(solve_lp(&lp, cfg)?, "time-varying proportional policy")?;
        Ok((
            alpha.iter().map(|&j| x[j]).collect(),
            beta.iter()
                .map(|b| b.iter().map(|&j| x[j]).collect())
                .collect(),
        ))
    };
    let gap = |sol: &Sol, k: usize| -> Result<f64> {
        let mut worst = 0.0f64;
        for (i, r) in inst.resources.iter().enumerate() {
            let traj: Vec<f64> = (0..t_len).map(|t| sol.1[i][t] * vertices[k][t]).collect();
            worst = worst.max(r.set.gap(&traj, sol.0[i], cfg)?);
        }
        Ok(worst)
    };
    let (alphas, beta) = generate(&inst.demand, cfg, solve, gap)?;
    Ok(ProcurementResult {
        cost: inst.cost(&alphas),
        alphas,
        certificate: Certificate::TimeVarying { beta },
    })
}

/// Best causal-affine policy `φ_i(e) = F_i e + D_i`.
pub fn affine_bound(inst: &ProcurementInstance, cfg: &SolverConfig) -> Result<ProcurementResult> {
    let t_len = inst.horizon();
    let n = inst.resources.len();
    let vertices = inst.demand.vertices();
    type Sol = (Vec<f64>, AffinePolicy);
    let solve = |active: &[usize]| -> Result<Sol> {
        let mut lp = LinearProgram::new(0);
        let alpha: Vec<usize> = inst
            .resources
            .iter()
            .map(|r| lp.add_var(r.price, alpha_bound(r)))
            .collect();
        // f[i][t][c] for c <= t
        let f: Vec<Vec<Vec<usize>>> = (0..n)
            .map(|_| {
                (0..t_len)
                    .map(|t| (0..=t).map(|_| lp.add_var(0.0, Bound::FREE)).collect())
                    .collect()
            })
            .collect();
        let d: Vec<Vec<usize>> = (0..n)
            .map(|_| (0..t_len).map(|_| lp.add_var(0.0, Bound::FREE)).collect())
            .collect();
        for t in 0..t_len {
            for c in 0..=t {
                lp.add_eq(
                    f.iter().map(|fi| (fi[t][c], 1.0)),
                    if c == t { 1.0 } else { 0.0 },
                )?;
            }
            lp.add_eq(d.iter().map(|di| (di[t], 1.0)), 0.0)?;
        }
        for &k in active {
            let v = &vertices[k];
            for (i, r) in inst.resources.iter().enumerate() {
                let output: Vec<Vec<(usize, f64)>> = (0..t_len)
                    .map(|t| {
                        (0..=t)
                            .filter(|&c| v[c] != 0.0)
                            .map(|c| (f[i][t][c], v[c]))
                            .chain(std::iter::once((d[i][t], 1.0)))
                            .collect()
                    })
                    .collect();
                add_membership_rows(&mut lp, &r.set, &output, alpha[i])?;
            }
        }
        let x = optimal_point(solve_lp(&lp, cfg)?, "causal-affine policy")?;
        let fm = f
            .iter()
            .map(|fi| {
                (0..t_len)
                    .map(|t| {
                        (0..t_len)
                            .map(|c| if c <= t { x[fi[t][c]] } else { 0.0 })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let dm = d
            .iter()
            .map(|di| di.iter().map(|&j| x[j]).collect())
            .collect();
        Ok((
            alpha.iter().map(|&j| x[j]).collect(),
            AffinePolicy::normalized(fm, dm)?,
        ))
    };
    let gap = |sol: &Sol, k: usize| -> Result<f64> {
        let traj = sol.1.dispatch(&vertices[k])?;
        let mut worst = 0.0f64;
        for (i, r) in inst.resources.iter().enumerate() {
            worst = worst.max(r.set.gap(&traj[i], sol.0[i], cfg)?);
        }
        Ok(worst)
    };
    let (alphas, policy) = generate(&inst.demand, cfg, solve, gap)?;
    Ok(ProcurementResult {
        cost: inst.cost(&alphas),
        alphas,
        certificate: Certificate::Affine(policy),
    })
}

/// Largest constraint violation when the certificate is substituted back
/// into its formulation, over every demand vertex.
pub fn certificate_violation(
    inst: &ProcurementInstance,
    res: &ProcurementResult,
    cfg: &SolverConfig,
) -> Result<f64> {
    let n = inst.resources.len();
    let t_len = inst.horizon();
    if res.alphas.len() != n {
        return Err(Error::invalid(
            "alpha vector length differs from the resource count",
        ));
    }
    let mut worst = 0.0f64;
    for (r, &a) in inst.resources.iter().zip(&res.alphas) {
        worst = worst.max(-a);
        if !r.scalable {
            worst = worst.max((a - 1.0).abs());
        }
    }
    worst = worst.max((inst.cost(&res.alphas) - res.cost).abs());
    for (k, v) in inst.demand.vertices().iter().enumerate() {
        let traj: Vec<Vec<f64>> = match &res.certificate {
            Certificate::Factorization { pieces } => {
                let p = pieces
                    .get(k)
                    .ok_or_else(|| Error::invalid("factorization misses a vertex"))?;
                p.clone()
            }
            Certificate::Proportional { beta, .. } => beta
                .iter()
                .map(|b| v.iter().map(|x| b * x).collect())
                .collect(),
            Certificate::TimeVarying { beta } => beta
                .iter()
                .map(|b| b.iter().zip(v).map(|(p, q)| p * q).collect())
                .collect(),
            Certificate::Affine(policy) => {
                worst = worst.max(policy.structure_violation());
                policy.dispatch(v)?
            }
        };
        if traj.len() != n || traj.iter().any(|x| x.len() != t_len) {
            return Err(Error::invalid(
                "certificate shape differs from the instance",
            ));
        }
        for t in 0..t_len {
            let total: f64 = traj.iter().map(|x| x[t]).sum();
            worst = worst.max((total - v[t]).abs());
        }
        for (i, r) in inst.resources.iter().enumerate() {
            worst = worst.max(r.set.gap(&traj[i], res.alphas[i], cfg)?);
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatteryJss {
    pub alphas: Vec<f64>,
    pub jss: f64,
}

/// Exact causal cost for a battery fleet whose demand set is the Minkowski sum
/// of the unit batteries (valid for long enough horizons):
/// `min Σ α_i p_i` s.t. `Σ α_i r_i ≥ Σ r_i`, `Σ α_i min(2r_i, C_i) ≥ Σ C_i`.
pub fn battery_exact_jss(
    batteries: &[BatterySpec],
    prices: &[f64],
    cfg: &SolverConfig,
) -> Result<BatteryJss> {
    if batteries.is_empty() || batteries.len() != prices.len() {
        return Err(Error::invalid(
            "need one price per battery and at least one battery",
        ));
    }
    for b in batteries {
        b.validate()?;
    }
    if let Some(p) = prices.iter().find(|p| !(**p >= 0.0 && p.is_finite())) {
        return Err(Error::invalid(format!(
            "price {p} must be finite and nonnegative"
        )));
    }
    let total_c: f64 = batteries.iter().map(|b| b.capacity).sum();
    let total_r: f64 = batteries.iter().map(|b| b.rate).sum();
    if total_c > 2.0 * total_r * (1.0 + 1e-12) {
        return Err(Error::precondition(format!(
            "total capacity {total_c} exceeds twice the total rate {total_r}"
        )));
    }
    let n = batteries.len();
    let mut lp = LinearProgram::new(n);
    for (j, p) in prices.iter().enumerate() {
        lp.set_objective(j, *p);
    }
    lp.add_ge(
        batteries.iter().enumerate().map(|(j, b)| (j, b.rate)),
        total_r,
    )?;
    lp.add_ge(
        batteries
            .iter()
            .enumerate()
            .map(|(j, b)| (j, (2.0 * b.rate).min(b.capacity))),
        total_c,
    )?;
    let alphas = optimal_point(solve_lp(&lp, cfg)?, "battery causal cost")?;
    let jss = alphas.iter().zip(prices).map(|(a, p)| a * p).sum();
    Ok(BatteryJss { alphas, jss })
}

/// `J** / J*`.
pub fn price_of_causality(jstar: f64, jss: f64) -> Result<f64> {
    if !(jstar > ZERO_COST_TOL) {
        return Err(Error::precondition(format!(
            "price of causality is undefined for oracle cost {jstar}"
        )));
    }
    Ok(jss / jstar)
}

/// Unit battery sets and the exact vertex set of their Minkowski sum.
pub fn battery_fleet(
    batteries: &[BatterySpec],
    cfg: &SolverConfig,
) -> Result<(Vec<HPolytope>, VPolytope)> {
    let sets: Vec<HPolytope> = batteries.iter().map(battery_set).collect::<Result<_>>()?;
    let verts: Vec<VPolytope> = sets
        .iter()
        .map(|s| hrep_to_vrep(s, cfg))
        .collect::<Result<_>>()?;
    let demand = minkowski_sum_vertices(&verts, cfg)?;
    Ok((sets, demand))
}

/// A battery fleet whose demand set is the sum of its own batteries, with
/// prices `base_i + κ·slope_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KappaSweepSpec {
    pub batteries: Vec<BatterySpec>,
    #[serde(default)]
    pub base_prices: Option<Vec<f64>>,
    #[serde(default)]
    pub kappa_slopes: Option<Vec<f64>>,
}

impl KappaSweepSpec {
    /// Defaults: the first battery costs 1, every other battery costs κ.
    pub fn prices(&self, kappa: f64) -> Vec<f64> {
        let n = self.batteries.len();
        let base = self
            .base_prices
            .clone()
            .unwrap_or_else(|| (0..n).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect());
        let slope = self
            .kappa_slopes
            .clone()
            .unwrap_or_else(|| (0..n).map(|i| if i == 0 { 0.0 } else { 1.0 }).collect());
        base.iter()
            .zip(&slope)
            .map(|(b, s)| b + kappa * s)
            .collect()
    }

    fn validate(&self) -> Result<()> {
        let n = self.batteries.len();
        if n == 0 {
            return Err(Error::invalid("sweep needs at least one battery"));
        }
        let t = self.batteries[0].horizon;
        if self.batteries.iter().any(|b| b.horizon != t) {
            return Err(Error::invalid("all batteries must share one horizon"));
        }
        for v in [&self.base_prices, &self.kappa_slopes]
            .into_iter()
            .flatten()
        {
            if v.len() != n {
                return Err(Error::invalid("price vectors need one entry per battery"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub kappa: f64,
    pub jstar: f64,
    pub jss: f64,
    /// `None` when the oracle cost is zero.
    pub poc: Option<f64>,
}

/// Evaluates `J*`, the exact battery `J**`, and their ratio on each κ.
pub fn kappa_sweep(
    spec: &KappaSweepSpec,
    kappas: &[f64],
    cfg: &SolverConfig,
) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let (sets, demand) = battery_fleet(&spec.batteries, cfg)?;
    let mut rows = Vec::with_capacity(kappas.len());
    for &kappa in kappas {
        let prices = spec.prices(kappa);
        let jss = battery_exact_jss(&spec.batteries, &prices, cfg)?.jss;
        let resources = sets
            .iter()
            .zip(&prices)
            .map(|(s, &p)| Resource::new(s.clone(), p, true))
            .collect::<Result<Vec<_>>>()?;
        let inst = ProcurementInstance::new(resources, demand.clone())?;
        let jstar = solve_oracle(&inst, cfg)?.cost;
        let poc = price_of_causality(jstar, jss).ok();
        rows.push(SweepRow {
            kappa,
            jstar,
            jss,
            poc,
        });
    }
    Ok(rows)
}

/// `a, a+step, …, b` with both ends included (up to rounding of the last step).
pub fn kappa_grid(a: f64, b: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::invalid(format!("grid step {step} must be positive")));
    }
    if !(a.is_finite() && b.is_finite()) || b < a {
        return Err(Error::invalid(format!("grid end {b} precedes start {a}")));
    }
    let count = ((b - a) / step + 1e-9).floor() as usize;
    let mut grid: Vec<f64> = (0..=count).map(|i| a + step * i as f64).collect();
    if let Some(last) = grid.last_mut() {
        if (*last - b).abs() < 1e-9 * step.max(1.0) {
            *last = b;
        }
    }
    Ok(grid)
}

// ---- instance JSON -----------------------------------------------------

/// `{"horizon": T}` for a virtual-machine instance set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstancesJson {
    pub horizon: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResourceSetJson {
    Battery(BatterySpec),
    Hrep(HrepJson),
    Instances(InstancesJson),
    Jobs(Vec<BatchJob>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResourceJson {
    #[serde(flatten)]
    pub set: ResourceSetJson,
    pub price: f64,
    #[serde(default = "default_scalable")]
    pub scalable: bool,
}

fn default_scalable() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DemandJson {
    Vrep { vrep: VrepJson },
    MinkowskiOfResources { minkowski_of_resources: bool },
}

/// A procurement instance as read from disk. Job sets take their horizon from
/// `horizon`, or failing that from the demand or another resource.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceJson {
    pub resources: Vec<ResourceJson>,
    pub demand: DemandJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
}

impl InstanceJson {
    fn infer_horizon(&self) -> Option<usize> {
        if self.horizon.is_some() {
            return self.horizon;
        }
        if let DemandJson::Vrep { vrep } = &self.demand {
            if let Some(v) = vrep.vertices.first() {
                return Some(v.len());
            }
        }
        self.resources.iter().find_map(|r| match &r.set {
            ResourceSetJson::Battery(b) => Some(b.horizon),
            ResourceSetJson::Hrep(h) => Some(h.horizon),
            ResourceSetJson::Instances(i) => Some(i.horizon),
            ResourceSetJson::Jobs(_) => None,
        })
    }

    pub fn build(&self, cfg: &SolverConfig) -> Result<ProcurementInstance> {
        let horizon = self.infer_horizon();
        let mut resources = Vec::with_capacity(self.resources.len());
        for r in &self.resources {
            let set = match &r.set {
                ResourceSetJson::Battery(b) => battery_set(b)?,
                ResourceSetJson::Hrep(h) => h.clone().try_into()?,
                ResourceSetJson::Instances(i) => instance_set(i.horizon)?,
                ResourceSetJson::Jobs(jobs) => {
                    let t = horizon
                        .ok_or_else(|| Error::invalid("cannot infer the horizon of a job set"))?;
                    batch_workload_set(jobs, t)?
                }
            };
            resources.push(Resource::new(set, r.price, r.scalable)?);
        }
        let demand = match &self.demand {
            DemandJson::Vrep { vrep } => vrep.clone().try_into()?,
            DemandJson::MinkowskiOfResources {
                minkowski_of_resources: true,
            } => {
                let parts: Vec<VPolytope> = resources
                    .iter()
                    .map(|r| hrep_to_vrep(&r.set, cfg))
                    .collect::<Result<_>>()?;
                minkowski_sum_vertices(&parts, cfg)?
            }
            DemandJson::MinkowskiOfResources {
                minkowski_of_resources: false,
            } => {
                return Err(Error::invalid(
                    "demand needs a vrep or \"minkowski_of_resources\": true",
                ));
            }
        };
        ProcurementInstance::new(resources, demand)
    }
}

/// Parses and builds an instance from JSON text.
pub fn instance_from_json(text: &str, cfg: &SolverConfig) -> Result<ProcurementInstance> {
    let j: InstanceJson =
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("instance JSON: {e}")))?;
    j.build(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_closed() {
        assert_eq!(kappa_grid(0.0, 1.0, 0.5).unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(kappa_grid(0.5, 3.0, 0.5).unwrap().len(), 6);
        assert_eq!(*kappa_grid(0.0, 0.3, 0.1).unwrap().last().unwrap(), 0.3);
        assert!(kappa_grid(0.0, 1.0, 0.0).is_err());
        assert!(kappa_grid(1.0, 0.0, 0.1).is_err());
    }

    #[test]
    fn poc_definition() {
        assert!((price_of_causality(3.0, 4.0).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert!((price_of_causality(2.5, 3.0).unwrap() - 1.2).abs() < 1e-15);
        assert_eq!(price_of_causality(1.7, 1.7).unwrap(), 1.0);
        assert!(matches!(
            price_of_causality(0.0, 0.0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn default_sweep_prices() {
        let b = BatterySpec::new(1.0, 1.0, 0.0, 3).unwrap();
        let spec = KappaSweepSpec {
            batteries: vec![b, b],
            base_prices: None,
            kappa_slopes: None,
        };
        assert_eq!(spec.prices(2.5), vec![1.0, 2.5]);
    }
}
