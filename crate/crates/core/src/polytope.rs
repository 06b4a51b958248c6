//! Resource sets (H-representation, optionally lifted) and demand sets
//! (V-representation), with the constructions used throughout the crate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{check_feasible, solve_lp, Feasibility, LinearProgram, LpStatus, SolverConfig};

/// Points closer than this (max-coordinate distance) are treated as one.
pub const DEDUP_TOL: f64 = 1e-7;

/// Largest horizon accepted by [`hrep_to_vrep`].
pub const MAX_ENUM_HORIZON: usize = 8;

/// `{x ∈ ℝ^T : ∃ w ∈ ℝ^{n_aux}, A·[x; w] ≤ b}`.
///
/// An auxiliary coordinate may be tagged with the (0-based) period in which it
/// is decided; causal feasibility then shares it between scenarios that agree
/// up to that period.
#[derive(Debug, Clone, PartialEq)]
pub struct HPolytope {
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    horizon: usize,
    n_aux: usize,
    aux_periods: Vec<Option<usize>>,
}

impl HPolytope {
    pub fn new(a: Vec<Vec<f64>>, b: Vec<f64>, horizon: usize, n_aux: usize) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::invalid("horizon must be at least 1"));
        }
        if a.len() != b.len() {
            return Err(Error::invalid(format!(
                "{} rows but {} right-hand sides",
                a.len(),
                b.len()
            )));
        }
        let width = horizon + n_aux;
        if let Some(row) = a.iter().find(|r| r.len() != width) {
            return Err(Error::invalid(format!(
                "row of length {} in a polytope of width {width}",
                row.len()
            )));
        }
        if a.iter().flatten().chain(&b).any(|v| !v.is_finite()) {
            return Err(Error::invalid("polytope data must be finite"));
        }
        Ok(HPolytope {
            a,
            b,
            horizon,
            n_aux,
            aux_periods: vec![None; n_aux],
        })
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn n_aux(&self) -> usize {
        self.n_aux
    }

    /// Decision period of each auxiliary coordinate, if it has one.
    pub fn aux_periods(&self) -> &[Option<usize>] {
        &self.aux_periods
    }

    pub fn with_aux_periods(mut self, periods: Vec<Option<usize>>) -> Result<Self> {
        if periods.len() != self.n_aux {
            return Err(Error::invalid(format!(
                "{} aux periods for {} auxiliary coordinates",
                periods.len(),
                self.n_aux
            )));
        }
        if let Some(t) = periods.iter().flatten().find(|&&t| t >= self.horizon) {
            return Err(Error::invalid(format!(
                "aux period {t} is outside the horizon {}",
                self.horizon
            )));
        }
        self.aux_periods = periods;
        Ok(self)
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.a
    }

    pub fn rhs(&self) -> &[f64] {
        &self.b
    }

    pub fn num_rows(&self) -> usize {
        self.b.len()
    }

    /// `α·S = {x : A[x; w] ≤ α b}`; auxiliary coordinates scale with the set.
    pub fn scale(&self, alpha: f64) -> Result<HPolytope> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::invalid(format!(
                "scale factor {alpha} must be a finite nonnegative number"
            )));
        }
        Ok(HPolytope {
            a: self.a.clone(),
            b: self.b.iter().map(|v| v * alpha).collect(),
            horizon: self.horizon,
            n_aux: self.n_aux,
            aux_periods: self.aux_periods.clone(),
        })
    }

    /// Whether `x ∈ α·S`.
    pub fn contains_scaled(&self, x: &[f64], alpha: f64, cfg: &SolverConfig) -> Result<bool> {
        if x.len() != self.horizon {
            return Err(Error::invalid(
                "point dimension differs from the polytope horizon",
            ));
        }
        if self.n_aux == 0 {
            return Ok(self.a.iter().zip(&self.b).all(|(row, &b)| {
                let lhs: f64 = row.iter().zip(x).map(|(p, q)| p * q).sum();
                lhs <= alpha * b + cfg.feas_tol * (1.0 + (alpha * b).abs())
            }));
        }
        let mut lp = LinearProgram::new(self.n_aux);
        for j in 0..self.n_aux {
            lp.set_free(j);
        }
        for (row, &b) in self.a.iter().zip(&self.b) {
            let fixed: f64 = row[..self.horizon].iter().zip(x).map(|(p, q)| p * q).sum();
            lp.add_le(
                row[self.horizon..].iter().copied().enumerate(),
                alpha * b - fixed,
            )?;
        }
        Ok(matches!(
            check_feasible(&lp, cfg)?,
            Feasibility::Feasible(_)
        ))
    }

    /// Smallest uniform relaxation `t ≥ 0` such that `A[x; w] ≤ α b + t` for
    /// some `w`. Zero exactly when `x ∈ α·S`.
    pub fn gap(&self, x: &[f64], alpha: f64, cfg: &SolverConfig) -> Result<f64> {
        if x.len() != self.horizon {
            return Err(Error::invalid(
                "point dimension differs from the polytope horizon",
            ));
        }
        if self.n_aux == 0 {
            return Ok(self.a.iter().zip(&self.b).fold(0.0, |worst, (row, &b)| {
                let lhs: f64 = row.iter().zip(x).map(|(p, q)| p * q).sum();
                worst.max(lhs - alpha * b)
            }));
        }
        let mut lp = LinearProgram::new(1 + self.n_aux);
        lp.set_objective(0, 1.0);
        for j in 0..self.n_aux {
            lp.set_free(1 + j);
        }
        for (row, &b) in self.a.iter().zip(&self.b) {
            let fixed: f64 = row[..self.horizon].iter().zip(x).map(|(p, q)| p * q).sum();
            let coefs = std::iter::once((0, -1.0)).chain(
                row[self.horizon..]
                    .iter()
                    .enumerate()
                    .map(|(j, &v)| (1 + j, v)),
            );
            lp.add_le(coefs, alpha * b - fixed)?;
        }
        let sol = solve_lp(&lp, cfg)?;
        match sol.status {
            LpStatus::Optimal => Ok(sol.objective_value.unwrap().max(0.0)),
            LpStatus::Infeasible => Ok(f64::INFINITY),
            LpStatus::Unbounded => Err(Error::Unbounded("membership gap".into())),
        }
    }

    /// Maximizes each output coordinate in both directions. `Ok(false)` if any
    /// direction is unbounded; an empty set counts as bounded.
    pub fn is_bounded(&self, cfg: &SolverConfig) -> Result<bool> {
        for t in 0..self.horizon {
            for sign in [1.0, -1.0] {
                let lp = self.direction_lp(t, sign);
                match solve_lp(&lp, cfg)?.status {
                    LpStatus::Unbounded => return Ok(false),
                    LpStatus::Infeasible => return Ok(true),
                    LpStatus::Optimal => {}
                }
            }
        }
        Ok(true)
    }

    fn direction_lp(&self, t: usize, sign: f64) -> LinearProgram {
        let width = self.horizon + self.n_aux;
        let mut lp = LinearProgram::new(width);
        for j in 0..width {
            lp.set_free(j);
        }
        lp.set_objective(t, -sign);
        for (row, &b) in self.a.iter().zip(&self.b) {
            lp.add_le(row.iter().copied().enumerate(), b)
                .expect("row widths checked at construction");
        }
        lp
    }

    /// Probes whether the origin is interior to the (projected) set: for every
    /// axis direction `d = ±e_t`, the largest `λ ≤ 1` with `λ d ∈ S`. The origin
    /// is interior iff all `2T` margins are positive.
    pub fn interiority(&self, cfg: &SolverConfig) -> Result<Interiority> {
        let mut margin = f64::INFINITY;
        for t in 0..self.horizon {
            for sign in [1.0, -1.0] {
                // variables: lambda, then aux
                let mut lp = LinearProgram::new(1 + self.n_aux);
                lp.set_bounds(0, 0.0, 1.0)?;
                for j in 0..self.n_aux {
                    lp.set_free(1 + j);
                }
                lp.set_objective(0, -1.0);
                for (row, &b) in self.a.iter().zip(&self.b) {
                    let coefs = std::iter::once((0, sign * row[t])).chain(
                        row[self.horizon..]
                            .iter()
                            .enumerate()
                            .map(|(j, &v)| (1 + j, v)),
                    );
                    lp.add_le(coefs, b)?;
                }
                let sol = solve_lp(&lp, cfg)?;
                let reach = match sol.status {
                    LpStatus::Optimal => sol.point.unwrap()[0],
                    _ => f64::NEG_INFINITY,
                };
                margin = margin.min(reach);
            }
        }
        Ok(Interiority {
            margin,
            interior: margin > cfg.feas_tol,
        })
    }
}

/// Result of [`HPolytope::interiority`]. `margin` is `-inf` when some axis ray
/// never enters the set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interiority {
    pub margin: f64,
    pub interior: bool,
}

/// Convex hull of a finite point list. Non-extreme points are permitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "VrepJson", into = "VrepJson")]
pub struct VPolytope {
    vertices: Vec<Vec<f64>>,
}

impl VPolytope {
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let Some(first) = vertices.first() else {
            return Err(Error::invalid("a V-polytope needs at least one point"));
        };
        let t = first.len();
        if t == 0 {
            return Err(Error::invalid("points must have at least one coordinate"));
        }
        if vertices.iter().any(|v| v.len() != t) {
            return Err(Error::invalid("all points must share one dimension"));
        }
        if vertices.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::invalid("points must be finite"));
        }
        Ok(VPolytope { vertices })
    }

    pub fn horizon(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn centroid(&self) -> Vec<f64> {
        let k = self.vertices.len() as f64;
        let mut c = vec![0.0; self.horizon()];
        for v in &self.vertices {
            for (ci, vi) in c.iter_mut().zip(v) {
                *ci += vi;
            }
        }
        c.iter_mut().for_each(|ci| *ci /= k);
        c
    }

    /// Convex weights `λ` with `x = c + δ Σ λ_j (v_j − c)`, if any exist.
    pub fn convex_certificate(
        &self,
        x: &[f64],
        delta: f64,
        center: Option<&[f64]>,
        cfg: &SolverConfig,
    ) -> Result<Option<Vec<f64>>> {
        let t = self.horizon();
        if x.len() != t || center.is_some_and(|c| c.len() != t) {
            return Err(Error::invalid(
                "point dimension differs from the polytope horizon",
            ));
        }
        let zero = vec![0.0; t];
        let c = center.unwrap_or(&zero);
        let k = self.vertices.len();
        let mut lp = LinearProgram::new(k);
        for d in 0..t {
            let coefs = self
                .vertices
                .iter()
                .enumerate()
                .map(|(j, v)| (j, delta * (v[d] - c[d])));
            lp.add_eq(coefs, x[d] - c[d])?;
        }
        lp.add_eq((0..k).map(|j| (j, 1.0)), 1.0)?;
        Ok(match check_feasible(&lp, cfg)? {
            Feasibility::Feasible(lambda) => Some(lambda),
            Feasibility::Infeasible => None,
        })
    }

    /// Drops every point lying in the hull of the remaining ones.
    pub fn extreme_points(&self, cfg: &SolverConfig) -> Result<VPolytope> {
        let mut keep: Vec<Vec<f64>> = dedup_points(self.vertices.clone());
        let mut i = 0;
        while i < keep.len() && keep.len() > 1 {
            let candidate = keep.remove(i);
            let rest = VPolytope { vertices: keep };
            let redundant = rest
                .convex_certificate(&candidate, 1.0, None, cfg)?
                .is_some();
            keep = rest.vertices;
            if !redundant {
                keep.insert(i, candidate);
                i += 1;
            }
        }
        Ok(VPolytope { vertices: keep })
    }
}

/// Membership in a polytope inflated by `delta` about `center`.
pub trait Membership {
    fn horizon(&self) -> usize;

    fn contains_inflated(
        &self,
        x: &[f64],
        delta: f64,
        center: Option<&[f64]>,
        cfg: &SolverConfig,
    ) -> Result<bool>;

    fn contains(&self, x: &[f64], cfg: &SolverConfig) -> Result<bool> {
        self.contains_inflated(x, 1.0, None, cfg)
    }
}

impl Membership for HPolytope {
    fn horizon(&self) -> usize {
        self.horizon
    }

    fn contains_inflated(
        &self,
        x: &[f64],
        delta: f64,
        center: Option<&[f64]>,
        cfg: &SolverConfig,
    ) -> Result<bool> {
        if x.len() != self.horizon || center.is_some_and(|c| c.len() != self.horizon) {
            return Err(Error::invalid(
                "point dimension differs from the polytope horizon",
            ));
        }
        let y: Vec<f64> = match center {
            Some(c) => x.iter().zip(c).map(|(p, q)| p - q).collect(),
            None => x.to_vec(),
        };
        self.contains_scaled(&y, delta, cfg)
    }
}

impl Membership for VPolytope {
    fn horizon(&self) -> usize {
        VPolytope::horizon(self)
    }

    fn contains_inflated(
        &self,
        x: &[f64],
        delta: f64,
        center: Option<&[f64]>,
        cfg: &SolverConfig,
    ) -> Result<bool> {
        Ok(self.convex_certificate(x, delta, center, cfg)?.is_some())
    }
}

pub fn contains_point<P: Membership + ?Sized>(
    p: &P,
    x: &[f64],
    delta: f64,
    center: Option<&[f64]>,
    cfg: &SolverConfig,
) -> Result<bool> {
    p.contains_inflated(x, delta, center, cfg)
}

/// A battery: `−r ≤ s^t ≤ r` and `0 ≤ θC + Σ_{k≤t} s^k ≤ C`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BatterySpec {
    pub capacity: f64,
    pub rate: f64,
    #[serde(default)]
    pub initial_soc: f64,
    pub horizon: usize,
}

impl BatterySpec {
    pub fn new(capacity: f64, rate: f64, initial_soc: f64, horizon: usize) -> Result<Self> {
        let spec = BatterySpec {
            capacity,
            rate,
            initial_soc,
            horizon,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.capacity > 0.0 && self.capacity.is_finite()) {
            return Err(Error::invalid("battery capacity must be positive"));
        }
        if !(self.rate > 0.0 && self.rate.is_finite()) {
            return Err(Error::invalid("battery rate must be positive"));
        }
        if !(0.0..=1.0).contains(&self.initial_soc) {
            return Err(Error::invalid("initial state of charge must lie in [0, 1]"));
        }
        if self.horizon == 0 {
            return Err(Error::invalid("horizon must be at least 1"));
        }
        Ok(())
    }
}

pub fn battery_set(spec: &BatterySpec) -> Result<HPolytope> {
    spec.validate()?;
    let t_len = spec.horizon;
    let stored = spec.initial_soc * spec.capacity;
    let mut a = Vec::with_capacity(4 * t_len);
    let mut b = Vec::with_capacity(4 * t_len);
    for t in 0..t_len {
        let mut unit = vec![0.0; t_len];
        unit[t] = 1.0;
        a.push(unit.clone());
        b.push(spec.rate);
        a.push(unit.iter().map(|v| -v).collect());
        b.push(spec.rate);
        let cumulative: Vec<f64> = (0..t_len).map(|k| if k <= t { 1.0 } else { 0.0 }).collect();
        a.push(cumulative.clone());
        b.push(spec.capacity - stored);
        a.push(cumulative.iter().map(|v| -v).collect());
        b.push(stored);
    }
    HPolytope::new(a, b, t_len, 0)
}

/// One virtual-machine instance: the box `0 ≤ s^t ≤ 1`.
pub fn instance_set(horizon: usize) -> Result<HPolytope> {
    if horizon == 0 {
        return Err(Error::invalid("horizon must be at least 1"));
    }
    let mut a = Vec::with_capacity(2 * horizon);
    let mut b = Vec::with_capacity(2 * horizon);
    for t in 0..horizon {
        let mut unit = vec![0.0; horizon];
        unit[t] = 1.0;
        a.push(unit.clone());
        b.push(1.0);
        unit[t] = -1.0;
        a.push(unit);
        b.push(0.0);
    }
    HPolytope::new(a, b, horizon, 0)
}

/// An interruptible batch job. Periods are 1-based and inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BatchJob {
    pub arrival: usize,
    pub deadline: usize,
    pub work: f64,
}

impl BatchJob {
    pub fn window_len(&self) -> usize {
        self.deadline + 1 - self.arrival
    }

    fn validate(&self, horizon: usize) -> Result<()> {
        if self.arrival < 1 || self.arrival > self.deadline || self.deadline > horizon {
            return Err(Error::invalid(format!(
                "job window [{}, {}] must satisfy 1 <= arrival <= deadline <= {horizon}",
                self.arrival, self.deadline
            )));
        }
        if !(self.work >= 0.0) {
            return Err(Error::invalid("job work must be nonnegative"));
        }
        if self.work > self.window_len() as f64 {
            return Err(Error::infeasible(format!(
                "job needs {} units but its window has only {} periods",
                self.work,
                self.window_len()
            )));
        }
        Ok(())
    }
}

/// Batch workloads as a lifted set: outputs `s^t = −Σ_m r_m^t` with
/// auxiliaries `r_m^t ∈ [0, 1]` inside each window, zero outside, and
/// `Σ_t r_m^t = c_m`. Equalities become paired inequalities.
pub fn batch_workload_set(jobs: &[BatchJob], horizon: usize) -> Result<HPolytope> {
    if horizon == 0 {
        return Err(Error::invalid("horizon must be at least 1"));
    }
    for job in jobs {
        job.validate(horizon)?;
    }
    let m = jobs.len();
    let width = horizon + m * horizon;
    let aux = |job: usize, t: usize| horizon + job * horizon + t;
    let mut a = Vec::new();
    let mut b = Vec::new();
    let push_eq = |row: Vec<f64>, rhs: f64, a: &mut Vec<Vec<f64>>, b: &mut Vec<f64>| {
        a.push(row.iter().map(|v| -v).collect());
        b.push(-rhs);
        a.push(row);
        b.push(rhs);
    };
    for t in 0..horizon {
        let mut row = vec![0.0; width];
        row[t] = 1.0;
        for job in 0..m {
            row[aux(job, t)] = 1.0;
        }
        push_eq(row, 0.0, &mut a, &mut b);
    }
    for (job, spec) in jobs.iter().enumerate() {
        let mut total = vec![0.0; width];
        for t in 0..horizon {
            total[aux(job, t)] = 1.0;
        }
        push_eq(total, spec.work, &mut a, &mut b);
        for t in 0..horizon {
            let period = t + 1;
            let mut up = vec![0.0; width];
            up[aux(job, t)] = 1.0;
            let mut down = vec![0.0; width];
            down[aux(job, t)] = -1.0;
            a.push(up);
            b.push(if period >= spec.arrival && period <= spec.deadline {
                1.0
            } else {
                0.0
            });
            a.push(down);
            b.push(0.0);
        }
    }
    let periods = (0..m).flat_map(|_| (0..horizon).map(Some)).collect();
    HPolytope::new(a, b, horizon, m * horizon)?.with_aux_periods(periods)
}

/// Exact vertex set of a small non-lifted H-polytope by enumerating every
/// `T`-subset of rows.
pub fn hrep_to_vrep(p: &HPolytope, cfg: &SolverConfig) -> Result<VPolytope> {
    if p.n_aux != 0 {
        return Err(Error::precondition(
            "vertex enumeration needs a polytope without auxiliary coordinates",
        ));
    }
    let t = p.horizon;
    if t > MAX_ENUM_HORIZON {
        return Err(Error::precondition(format!(
            "vertex enumeration is limited to horizon {MAX_ENUM_HORIZON}, got {t}"
        )));
    }
    let rows = p.num_rows();
    let mut found = Vec::new();
    let mut idx: Vec<usize> = (0..t.min(rows)).collect();
    if rows < t {
        return Err(Error::infeasible("too few rows to define a vertex"));
    }
    loop {
        let a: Vec<Vec<f64>> = idx.iter().map(|&i| p.a[i].clone()).collect();
        let b: Vec<f64> = idx.iter().map(|&i| p.b[i]).collect();
        if let Some(x) = solve_square(a, b) {
            if p.contains_scaled(&x, 1.0, cfg)? {
                found.push(x);
            }
        }
        // next combination
        let mut k = t;
        loop {
            if k == 0 {
                let vertices = dedup_points(found);
                if vertices.is_empty() {
                    return Err(Error::infeasible("polytope has no vertices"));
                }
                return VPolytope::new(vertices);
            }
            k -= 1;
            if idx[k] < rows - t + k {
                idx[k] += 1;
                for j in k + 1..t {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// All sums taking one point from each input, deduplicated. The hull of the
/// result is the Minkowski sum of the hulls.
pub fn minkowski_candidate_vertices(parts: &[VPolytope]) -> Result<VPolytope> {
    let Some(first) = parts.first() else {
        return Err(Error::invalid("need at least one polytope"));
    };
    let t = first.horizon();
    if parts.iter().any(|p| p.horizon() != t) {
        return Err(Error::invalid("all polytopes must share one horizon"));
    }
    let mut acc = first.vertices.clone();
    for part in &parts[1..] {
        acc = pairwise_sums(&acc, &part.vertices);
    }
    VPolytope::new(dedup_points(acc))
}

/// Like [`minkowski_candidate_vertices`] but prunes to extreme points after
/// every pairwise sum, keeping the candidate list small.
pub fn minkowski_sum_vertices(parts: &[VPolytope], cfg: &SolverConfig) -> Result<VPolytope> {
    let Some(first) = parts.first() else {
        return Err(Error::invalid("need at least one polytope"));
    };
    let t = first.horizon();
    if parts.iter().any(|p| p.horizon() != t) {
        return Err(Error::invalid("all polytopes must share one horizon"));
    }
    let mut acc = first.extreme_points(cfg)?;
    for part in &parts[1..] {
        let sums = pairwise_sums(&acc.vertices, &part.vertices);
        acc = VPolytope::new(dedup_points(sums))?.extreme_points(cfg)?;
    }
    Ok(acc)
}

fn pairwise_sums(left: &[Vec<f64>], right: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(left.len() * right.len());
    for u in left {
        for v in right {
            out.push(u.iter().zip(v).map(|(p, q)| p + q).collect());
        }
    }
    out
}

/// Removes near-duplicates (max-coordinate distance below [`DEDUP_TOL`]),
/// keeping the first occurrence in input order.
pub fn dedup_points(points: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| points[i][0].total_cmp(&points[j][0]));
    let mut drop = vec![false; points.len()];
    for (pos, &i) in order.iter().enumerate() {
        if drop[i] {
            continue;
        }
        for &j in &order[pos + 1..] {
            if points[j][0] - points[i][0] > DEDUP_TOL {
                break;
            }
            if !drop[j] && chebyshev(&points[i], &points[j]) < DEDUP_TOL {
                // keep whichever came first in the input
                if j < i {
                    drop[i] = true;
                    break;
                }
                drop[j] = true;
            }
        }
    }
    points
        .into_iter()
        .zip(drop)
        .filter_map(|(p, d)| (!d).then_some(p))
        .collect()
}

fn chebyshev(u: &[f64], v: &[f64]) -> f64 {
    u.iter()
        .zip(v)
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max)
}

fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if a[r][col].abs() > a[piv][col].abs() {
                piv = r;
            }
        }
        if a[piv][col].abs() < 1e-10 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c in col..n {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

// ---- JSON schema -------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HrepJson {
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub horizon: usize,
    #[serde(default)]
    pub aux: usize,
    /// 0-based decision period per auxiliary coordinate (`null` for none).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aux_periods: Option<Vec<Option<usize>>>,
}

impl TryFrom<HrepJson> for HPolytope {
    type Error = Error;

    fn try_from(j: HrepJson) -> Result<Self> {
        let p = HPolytope::new(j.a, j.b, j.horizon, j.aux)?;
        match j.aux_periods {
            Some(periods) => p.with_aux_periods(periods),
            None => Ok(p),
        }
    }
}

impl From<&HPolytope> for HrepJson {
    fn from(p: &HPolytope) -> Self {
        let aux_periods = p
            .aux_periods
            .iter()
            .any(Option::is_some)
            .then(|| p.aux_periods.clone());
        HrepJson {
            a: p.a.clone(),
            b: p.b.clone(),
            horizon: p.horizon,
            aux: p.n_aux,
            aux_periods,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VrepJson {
    pub vertices: Vec<Vec<f64>>,
}

impl TryFrom<VrepJson> for VPolytope {
    type Error = Error;

    fn try_from(j: VrepJson) -> Result<Self> {
        VPolytope::new(j.vertices)
    }
}

impl From<VPolytope> for VrepJson {
    fn from(p: VPolytope) -> Self {
        VrepJson {
            vertices: p.vertices,
        }
    }
}

/// `{"hrep": {...}}` or `{"vrep": {...}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolytopeJson {
    Hrep(HrepJson),
    Vrep(VrepJson),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Polytope {
    H(HPolytope),
    V(VPolytope),
}

impl TryFrom<PolytopeJson> for Polytope {
    type Error = Error;

    fn try_from(j: PolytopeJson) -> Result<Self> {
        Ok(match j {
            PolytopeJson::Hrep(h) => Polytope::H(h.try_into()?),
            PolytopeJson::Vrep(v) => Polytope::V(v.try_into()?),
        })
    }
}

impl Membership for Polytope {
    fn horizon(&self) -> usize {
        match self {
            Polytope::H(p) => p.horizon(),
            Polytope::V(p) => VPolytope::horizon(p),
        }
    }

    fn contains_inflated(
        &self,
        x: &[f64],
        delta: f64,
        center: Option<&[f64]>,
        cfg: &SolverConfig,
    ) -> Result<bool> {
        match self {
            Polytope::H(p) => p.contains_inflated(x, delta, center, cfg),
            Polytope::V(p) => p.contains_inflated(x, delta, center, cfg),
        }
    }
}
