//! Linear programs and a dense, bounded-variable, two-phase primal simplex.
//!
//! Problems are stated as
//!
//! ```text
//! minimize    c·x
//! subject to  A_eq x  = b_eq
//!             A_le x <= b_le
//!             l <= x <= u        (l may be -inf, u may be +inf)
//! ```
//!
//! Constraint rows are stored sparsely; the solver works on a dense tableau,
//! which is adequate for the few-thousand-row problems this crate builds.
//! Pricing is Dantzig's rule with lowest-index tie breaking, switching to
//! Bland's rule permanently after [`DEGENERATE_PIVOTS_BEFORE_BLAND`]
//! degenerate pivots. In the ratio test, rows tied on step length are
//! resolved by the largest pivot magnitude, then the lowest basic index; under
//! Bland's rule the lowest index wins among tied pivots within a factor 100 of
//! the largest. Reduced costs and basic values are recomputed from scratch
//! every 50 pivots and before declaring optimality.

use crate::error::{Error, Result};

/// Degenerate pivots tolerated before switching to Bland's rule.
pub const DEGENERATE_PIVOTS_BEFORE_BLAND: usize = 1_000;

const DROP_TOL: f64 = 1e-14;
const STEP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub feas_tol: f64,
    pub pivot_tol: f64,
    pub max_iterations: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            feas_tol: 1e-9,
            pivot_tol: 1e-10,
            max_iterations: 100_000,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.feas_tol > 0.0 && self.pivot_tol > 0.0 && self.max_iterations > 0) {
            return Err(Error::invalid(
                "solver tolerances and iteration limit must be positive",
            ));
        }
        Ok(())
    }
}

/// Per-variable bounds. Infinite values mean "unbounded on that side".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound {
    pub lower: f64,
    pub upper: f64,
}

impl Bound {
    pub const NONNEG: Bound = Bound {
        lower: 0.0,
        upper: f64::INFINITY,
    };
    pub const FREE: Bound = Bound {
        lower: f64::NEG_INFINITY,
        upper: f64::INFINITY,
    };

    pub fn new(lower: f64, upper: f64) -> Self {
        Bound { lower, upper }
    }

    pub fn fixed(value: f64) -> Self {
        Bound {
            lower: value,
            upper: value,
        }
    }
}

/// One sparse constraint row.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coefs: Vec<(usize, f64)>,
    pub rhs: f64,
}

impl Row {
    pub fn dot(&self, x: &[f64]) -> f64 {
        self.coefs.iter().map(|&(j, a)| a * x[j]).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    objective: Vec<f64>,
    eq_rows: Vec<Row>,
    le_rows: Vec<Row>,
    bounds: Vec<Bound>,
}

impl LinearProgram {
    /// A program over `num_vars` nonnegative variables with zero objective.
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            objective: vec![0.0; num_vars],
            eq_rows: Vec::new(),
            le_rows: Vec::new(),
            bounds: vec![Bound::NONNEG; num_vars],
        }
    }

    /// Builds a program from dense data, checking every shape invariant.
    pub fn from_dense(
        objective: Vec<f64>,
        a_eq: &[Vec<f64>],
        b_eq: &[f64],
        a_le: &[Vec<f64>],
        b_le: &[f64],
        bounds: Vec<Bound>,
    ) -> Result<Self> {
        let n = objective.len();
        if a_eq.len() != b_eq.len() || a_le.len() != b_le.len() {
            return Err(Error::invalid(
                "constraint matrix and right-hand side lengths differ",
            ));
        }
        if bounds.len() != n {
            return Err(Error::invalid("one bound per variable required"));
        }
        let mut lp = LinearProgram::new(n);
        lp.objective = objective;
        for (j, b) in bounds.into_iter().enumerate() {
            lp.set_bounds(j, b.lower, b.upper)?;
        }
        for (row, &rhs) in a_eq.iter().zip(b_eq) {
            if row.len() != n {
                return Err(Error::invalid("equality row has wrong column count"));
            }
            lp.add_eq(row.iter().copied().enumerate(), rhs)?;
        }
        for (row, &rhs) in a_le.iter().zip(b_le) {
            if row.len() != n {
                return Err(Error::invalid("inequality row has wrong column count"));
            }
            lp.add_le(row.iter().copied().enumerate(), rhs)?;
        }
        Ok(lp)
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Appends a fresh nonnegative variable and returns its index.
    pub fn add_var(&mut self, cost: f64, bound: Bound) -> usize {
        self.objective.push(cost);
        self.bounds.push(bound);
        self.objective.len() - 1
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn eq_rows(&self) -> &[Row] {
        &self.eq_rows
    }

    pub fn le_rows(&self) -> &[Row] {
        &self.le_rows
    }

    pub fn bounds(&self) -> &[Bound] {
        &self.bounds
    }

    pub fn set_objective(&mut self, j: usize, cost: f64) {
        self.objective[j] = cost;
    }

    pub fn set_bounds(&mut self, j: usize, lower: f64, upper: f64) -> Result<()> {
        if j >= self.num_vars() {
            return Err(Error::invalid(format!("variable {j} out of range")));
        }
        if lower.is_nan()
            || upper.is_nan()
            || lower > upper
            || lower == f64::INFINITY
            || upper == f64::NEG_INFINITY
        {
            return Err(Error::invalid(format!(
                "bad bounds [{lower}, {upper}] on variable {j}"
            )));
        }
        self.bounds[j] = Bound { lower, upper };
        Ok(())
    }

    pub fn set_free(&mut self, j: usize) {
        self.bounds[j] = Bound::FREE;
    }

    fn make_row(&self, coefs: impl IntoIterator<Item = (usize, f64)>, rhs: f64) -> Result<Row> {
        if !rhs.is_finite() {
            return Err(Error::invalid("right-hand side must be finite"));
        }
        let mut merged: Vec<(usize, f64)> = Vec::new();
        for (j, a) in coefs {
            if j >= self.num_vars() {
                return Err(Error::invalid(format!("column {j} out of range")));
            }
            if !a.is_finite() {
                return Err(Error::invalid("coefficients must be finite"));
            }
            if a != 0.0 {
                merged.push((j, a));
            }
        }
        merged.sort_by_key(|&(j, _)| j);
        merged.dedup_by(|b, a| {
            if a.0 == b.0 {
                a.1 += b.1;
                true
            } else {
                false
            }
        });
        merged.retain(|&(_, a)| a != 0.0);
        Ok(Row { coefs: merged, rhs })
    }

    pub fn add_eq(
        &mut self,
        coefs: impl IntoIterator<Item = (usize, f64)>,
        rhs: f64,
    ) -> Result<()> {
        let row = self.make_row(coefs, rhs)?;
        self.eq_rows.push(row);
        Ok(())
    }

    pub fn add_le(
        &mut self,
        coefs: impl IntoIterator<Item = (usize, f64)>,
        rhs: f64,
    ) -> Result<()> {
        let row = self.make_row(coefs, rhs)?;
        self.le_rows.push(row);
        Ok(())
    }

    pub fn add_ge(
        &mut self,
        coefs: impl IntoIterator<Item = (usize, f64)>,
        rhs: f64,
    ) -> Result<()> {
        self.add_le(coefs.into_iter().map(|(j, a)| (j, -a)), -rhs)
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Largest violation of any row or bound at `x` (0 when feasible).
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for row in &self.eq_rows {
            worst = worst.max((row.dot(x) - row.rhs).abs());
        }
        for row in &self.le_rows {
            worst = worst.max(row.dot(x) - row.rhs);
        }
        for (v, b) in x.iter().zip(&self.bounds) {
            worst = worst.max(b.lower - v).max(v - b.upper);
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Dual information at an optimal basis.
///
/// With `y` the row multipliers, reduced costs are `d = c - Aᵀy`. Inequality
/// multipliers are nonpositive.
#[derive(Debug, Clone, PartialEq)]
pub struct Duals {
    pub eq: Vec<f64>,
    pub le: Vec<f64>,
    pub reduced_costs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub point: Option<Vec<f64>>,
    pub objective_value: Option<f64>,
    pub duals: Option<Duals>,
    pub iterations: usize,
}

impl LpSolution {
    fn without_point(status: LpStatus, iterations: usize) -> Self {
        LpSolution {
            status,
            point: None,
            objective_value: None,
            duals: None,
            iterations,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    Feasible(Vec<f64>),
    Infeasible,
}

pub fn solve_lp(lp: &LinearProgram, cfg: &SolverConfig) -> Result<LpSolution> {
    cfg.validate()?;
    let mut t = Tableau::build(lp, cfg);
    if !t.phase_one()? {
        return Ok(LpSolution::without_point(
            LpStatus::Infeasible,
            t.iterations,
        ));
    }
    if !t.phase_two(lp)? {
        return Ok(LpSolution::without_point(LpStatus::Unbounded, t.iterations));
    }
    let point = t.values[..lp.num_vars()].to_vec();
    let objective_value = lp.objective_value(&point);
    let duals = t.duals(lp);
    Ok(LpSolution {
        status: LpStatus::Optimal,
        point: Some(point),
        objective_value: Some(objective_value),
        duals: Some(duals),
        iterations: t.iterations,
    })
}

/// Phase one only: finds any point satisfying the constraints.
pub fn check_feasible(lp: &LinearProgram, cfg: &SolverConfig) -> Result<Feasibility> {
    cfg.validate()?;
    let mut t = Tableau::build(lp, cfg);
    if t.phase_one()? {
        Ok(Feasibility::Feasible(t.values[..lp.num_vars()].to_vec()))
    } else {
        Ok(Feasibility::Infeasible)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ColKind {
    Structural,
    Slack,
    Artificial,
}

/// Reduced costs and basic values are recomputed from the tableau this often.
const REFRESH_EVERY: usize = 50;

struct Tableau {
    cfg: SolverConfig,
    m: usize,
    /// columns excluding the rhs
    ncols: usize,
    width: usize,
    data: Vec<f64>,
    kinds: Vec<ColKind>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    values: Vec<f64>,
    head: Vec<usize>,
    is_basic: Vec<bool>,
    /// reduced costs for the active phase
    d: Vec<f64>,
    cost: Vec<f64>,
    /// column that was basic in each row initially, and its sign
    init_col: Vec<usize>,
    init_sign: Vec<f64>,
    rhs_scale: f64,
    iterations: usize,
    degenerate: usize,
    bland: bool,
}

impl Tableau {
    fn build(lp: &LinearProgram, cfg: &SolverConfig) -> Self {
        let n = lp.num_vars();
        let n_eq = lp.eq_rows.len();
        let n_le = lp.le_rows.len();
        let m = n_eq + n_le;

        let mut values = vec![0.0; n];
        for (j, b) in lp.bounds.iter().enumerate() {
            values[j] = if b.lower.is_finite() {
                b.lower
            } else if b.upper.is_finite() {
                b.upper
            } else {
                0.0
            };
        }

        let rows: Vec<&Row> = lp.eq_rows.iter().chain(lp.le_rows.iter()).collect();
        let residual: Vec<f64> = rows.iter().map(|r| r.rhs - r.dot(&values)).collect();

        // Which rows need an artificial column.
        let needs_art: Vec<bool> = (0..m).map(|r| r < n_eq || residual[r] < 0.0).collect();
        let n_art = needs_art.iter().filter(|&&b| b).count();
        let ncols = n + n_le + n_art;
        let width = ncols + 1;

        let mut kinds = vec![ColKind::Structural; n];
        kinds.extend(std::iter::repeat_n(ColKind::Slack, n_le));
        kinds.extend(std::iter::repeat_n(ColKind::Artificial, n_art));

        let mut lower: Vec<f64> = lp.bounds.iter().map(|b| b.lower).collect();
        let mut upper: Vec<f64> = lp.bounds.iter().map(|b| b.upper).collect();
        lower.extend(std::iter::repeat_n(0.0, n_le + n_art));
        upper.extend(std::iter::repeat_n(f64::INFINITY, n_le + n_art));
        values.extend(std::iter::repeat_n(0.0, n_le + n_art));

        let mut data = vec![0.0; m * width];
        let mut head = vec![0; m];
        let mut init_col = vec![0; m];
        let mut init_sign = vec![1.0; m];
        let mut art = n + n_le;
        for (r, row) in rows.iter().enumerate() {
            let sign = if needs_art[r] {
                if residual[r] < 0.0 {
                    -1.0
                } else {
                    1.0
                }
            } else {
                1.0
            };
            let base = r * width;
            for &(j, a) in &row.coefs {
                data[base + j] = a / sign;
            }
            if r >= n_eq {
                data[base + n + (r - n_eq)] = 1.0 / sign;
            }
            let basic = if needs_art[r] {
                data[base + art] = 1.0;
                art += 1;
                art - 1
            } else {
                n + (r - n_eq)
            };
            data[base + ncols] = row.rhs / sign;
            head[r] = basic;
            init_col[r] = basic;
            init_sign[r] = sign;
            values[basic] = residual[r] / sign;
        }

        let mut is_basic = vec![false; ncols];
        for &h in &head {
            is_basic[h] = true;
        }
        let rhs_scale = 1.0 + rows.iter().map(|r| r.rhs.abs()).fold(0.0, f64::max);

        Tableau {
            cfg: *cfg,
            m,
            ncols,
            width,
            data,
            kinds,
            lower,
            upper,
            values,
            head,
            is_basic,
            d: vec![0.0; ncols],
            cost: vec![0.0; ncols],
            init_col,
            init_sign,
            rhs_scale,
            iterations: 0,
            degenerate: 0,
            bland: false,
        }
    }

    #[inline]
    fn at(&self, r: usize, j: usize) -> f64 {
        self.data[r * self.width + j]
    }

    fn price(&mut self, cost: &[f64]) {
        self.cost = cost.to_vec();
        let mut d = cost.to_vec();
        for r in 0..self.m {
            let cb = cost[self.head[r]];
            if cb != 0.0 {
                let base = r * self.width;
                for (j, dj) in d.iter_mut().enumerate() {
                    let a = self.data[base + j];
                    if a != 0.0 {
                        *dj -= cb * a;
                    }
                }
            }
        }
        for r in 0..self.m {
            d[self.head[r]] = 0.0;
        }
        self.d = d;
    }

    /// Recompute basic values from the rhs column and nonbasic values.
    fn refresh_basics(&mut self) {
        for r in 0..self.m {
            let base = r * self.width;
            let mut v = self.data[base + self.ncols];
            for j in 0..self.ncols {
                if !self.is_basic[j] {
                    let a = self.data[base + j];
                    if a != 0.0 && self.values[j] != 0.0 {
                        v -= a * self.values[j];
                    }
                }
            }
            self.values[self.head[r]] = v;
        }
    }

    fn choose_entering(&self) -> Option<(usize, f64)> {
        let tol = self.cfg.feas_tol;
        let mut best: Option<(usize, f64)> = None;
        let mut best_mag = 0.0;
        for j in 0..self.ncols {
            if self.is_basic[j] || self.lower[j] == self.upper[j] {
                continue;
            }
            let dj = self.d[j];
            let v = self.values[j];
            let dir = if dj < -tol && v < self.upper[j] {
                1.0
            } else if dj > tol && v > self.lower[j] {
                -1.0
            } else {
                continue;
            };
            if self.bland {
                return Some((j, dir));
            }
            if dj.abs() > best_mag {
                best_mag = dj.abs();
                best = Some((j, dir));
            }
        }
        best
    }

    /// Runs simplex iterations on the current reduced costs. Returns false if
    /// the objective is unbounded below.
    fn iterate(&mut self) -> Result<bool> {
        let mut since_refresh = 0;
        loop {
            if since_refresh >= REFRESH_EVERY {
                self.reprice();
                since_refresh = 0;
            }
            let Some((q, dir)) = self.choose_entering() else {
                if since_refresh == 0 {
                    return Ok(true);
                }
                // confirm optimality against freshly computed reduced costs
                self.reprice();
                since_refresh = 0;
                continue;
            };
            since_refresh += 1;
            self.iterations += 1;
            if self.iterations > self.cfg.max_iterations {
                return Err(Error::IterationLimit(self.cfg.max_iterations));
            }

            // ratio test: minimum step, ties within STEP_TOL resolved below
            let mut cands: Vec<(usize, f64, f64)> = Vec::new();
            let mut best_theta = f64::INFINITY;
            for r in 0..self.m {
                let a = self.at(r, q);
                if a.abs() <= self.cfg.pivot_tol {
                    continue;
                }
                let rate = -dir * a;
                let b = self.head[r];
                let v = self.values[b];
                let lim = if rate < 0.0 {
                    if self.lower[b].is_finite() {
                        ((v - self.lower[b]) / -rate).max(0.0)
                    } else {
                        continue;
                    }
                } else if self.upper[b].is_finite() {
                    ((self.upper[b] - v) / rate).max(0.0)
                } else {
                    continue;
                };
                if lim <= best_theta + STEP_TOL {
                    best_theta = best_theta.min(lim);
                    cands.push((r, lim, a.abs()));
                }
            }
            let tied: Vec<&(usize, f64, f64)> = cands
                .iter()
                .filter(|c| c.1 <= best_theta + STEP_TOL)
                .collect();
            let biggest = tied.iter().map(|c| c.2).fold(0.0, f64::max);
            let best_row = if self.bland {
                // lowest basic index among pivots that are not tiny
                tied.iter()
                    .filter(|c| c.2 >= 1e-2 * biggest)
                    .min_by_key(|c| self.head[c.0])
                    .map(|c| c.0)
            } else {
                tied.iter()
                    .max_by(|x, y| {
                        x.2.total_cmp(&y.2)
                            .then(self.head[y.0].cmp(&self.head[x.0]))
                    })
                    .map(|c| c.0)
            };
            let span = self.upper[q] - self.lower[q];
            let flip = span.is_finite() && span <= best_theta;
            let theta = if flip { span } else { best_theta };
            if !theta.is_finite() {
                return Ok(false);
            }
            if theta <= STEP_TOL {
                self.degenerate += 1;
                if self.degenerate >= DEGENERATE_PIVOTS_BEFORE_BLAND {
                    self.bland = true;
                }
            }

            // move along the edge
            if theta != 0.0 {
                self.values[q] += dir * theta;
                for r in 0..self.m {
                    let a = self.at(r, q);
                    if a != 0.0 {
                        self.values[self.head[r]] -= dir * theta * a;
                    }
                }
            }
            if flip {
                self.values[q] = if dir > 0.0 {
                    self.upper[q]
                } else {
                    self.lower[q]
                };
                continue;
            }
            let r = best_row.expect("finite step implies a blocking row");
            let leaving = self.head[r];
            let rate = -dir * self.at(r, q);
            self.values[leaving] = if rate < 0.0 {
                self.lower[leaving]
            } else {
                self.upper[leaving]
            };
            self.pivot(r, q);
        }
    }

    fn reprice(&mut self) {
        let cost = std::mem::take(&mut self.cost);
        self.price(&cost);
        self.refresh_basics();
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let w = self.width;
        let piv = self.data[r * w + q];
        let prow: Vec<(usize, f64)> = {
            let base = r * w;
            let mut out = Vec::new();
            for j in 0..w {
                let v = self.data[base + j] / piv;
                let v = if v.abs() < DROP_TOL { 0.0 } else { v };
                self.data[base + j] = v;
                if v != 0.0 {
                    out.push((j, v));
                }
            }
            self.data[base + q] = 1.0;
            out
        };
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let base = i * w;
            let f = self.data[base + q];
            if f == 0.0 {
                continue;
            }
            for &(j, v) in &prow {
                let x = self.data[base + j] - f * v;
                self.data[base + j] = if x.abs() < DROP_TOL { 0.0 } else { x };
            }
            self.data[base + q] = 0.0;
        }
        let dq = self.d[q];
        if dq != 0.0 {
            for &(j, v) in &prow {
                if j < self.ncols {
                    self.d[j] -= dq * v;
                }
            }
            self.d[q] = 0.0;
        }
        let leaving = self.head[r];
        self.is_basic[leaving] = false;
        self.is_basic[q] = true;
        self.head[r] = q;
    }

    fn phase_one(&mut self) -> Result<bool> {
        let cost: Vec<f64> = self
            .kinds
            .iter()
            .map(|k| if *k == ColKind::Artificial { 1.0 } else { 0.0 })
            .collect();
        self.price(&cost);
        // phase-one objective is bounded below by zero
        self.iterate()?;
        self.refresh_basics();
        let infeas: f64 = (0..self.ncols)
            .filter(|&j| self.kinds[j] == ColKind::Artificial)
            .map(|j| self.values[j].max(0.0))
            .sum();
        if infeas > self.cfg.feas_tol * self.rhs_scale {
            return Ok(false);
        }
        // Pin artificials to zero and push basic ones out where possible.
        for j in 0..self.ncols {
            if self.kinds[j] == ColKind::Artificial {
                self.upper[j] = 0.0;
                if !self.is_basic[j] {
                    self.values[j] = 0.0;
                }
            }
        }
        for r in 0..self.m {
            let h = self.head[r];
            if self.kinds[h] != ColKind::Artificial {
                continue;
            }
            let mut best: Option<usize> = None;
            let mut best_mag = self.cfg.pivot_tol;
            for j in 0..self.ncols {
                if self.is_basic[j] || self.kinds[j] == ColKind::Artificial {
                    continue;
                }
                let a = self.at(r, j).abs();
                if a > best_mag {
                    best_mag = a;
                    best = Some(j);
                }
            }
            if let Some(j) = best {
                self.values[h] = 0.0;
                self.pivot(r, j);
            }
        }
        self.refresh_basics();
        Ok(true)
    }

    fn phase_two(&mut self, lp: &LinearProgram) -> Result<bool> {
        let mut cost = vec![0.0; self.ncols];
        cost[..lp.num_vars()].copy_from_slice(&lp.objective);
        self.price(&cost);
        let bounded = self.iterate()?;
        if bounded {
            self.refresh_basics();
        }
        Ok(bounded)
    }

    fn duals(&self, lp: &LinearProgram) -> Duals {
        let n_eq = lp.eq_rows.len();
        let y: Vec<f64> = (0..self.m)
            .map(|r| -self.init_sign[r] * self.d[self.init_col[r]])
            .collect();
        Duals {
            eq: y[..n_eq].to_vec(),
            le: y[n_eq..].to_vec(),
            reduced_costs: self.d[..lp.num_vars()].to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn bound_attained_minimum() {
        let mut lp = LinearProgram::new(1);
        lp.set_objective(0, 1.0);
        let sol = solve_lp(&lp, &cfg()).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.point.unwrap(), vec![0.0]);
        assert_eq!(sol.objective_value.unwrap(), 0.0);
    }

    #[test]
    fn two_resource_cover_lp() {
        // min 3a1 + a2  s.t. 3a1 + a2 >= 4, 3a1 + 3a2 >= 6
        let mut lp = LinearProgram::new(2);
        lp.set_objective(0, 3.0);
        lp.set_objective(1, 1.0);
        lp.add_ge([(0, 3.0), (1, 1.0)], 4.0).unwrap();
        lp.add_ge([(0, 3.0), (1, 3.0)], 6.0).unwrap();
        let sol = solve_lp(&lp, &cfg()).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        let x = sol.point.unwrap();
        assert!(
            (x[0] - 1.0).abs() < 1e-9 && (x[1] - 1.0).abs() < 1e-9,
            "{x:?}"
        );
        assert!((sol.objective_value.unwrap() - 4.0).abs() < 1e-9);
    }

    #[test]
    fn unbounded_ray() {
        let mut lp = LinearProgram::new(1);
        lp.set_objective(0, -1.0);
        let sol = solve_lp(&lp, &cfg()).unwrap();
        assert_eq!(sol.status, LpStatus::Unbounded);
        assert!(sol.point.is_none());
    }

    #[test]
    fn contradictory_rows_are_infeasible() {
        let mut lp = LinearProgram::new(1);
        lp.set_free(0);
        lp.add_eq([(0, 1.0)], 1.0).unwrap();
        lp.add_le([(0, 1.0)], 0.0).unwrap();
        assert_eq!(
            check_feasible(&lp, &cfg()).unwrap(),
            Feasibility::Infeasible
        );
        assert_eq!(solve_lp(&lp, &cfg()).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn simplex_point_is_feasible() {
        let mut lp = LinearProgram::new(2);
        lp.add_eq([(0, 1.0), (1, 1.0)], 1.0).unwrap();
        match check_feasible(&lp, &cfg()).unwrap() {
            Feasibility::Feasible(x) => assert!(lp.max_violation(&x) < 1e-9),
            Feasibility::Infeasible => panic!("expected feasible"),
        }
    }

    #[test]
    fn free_and_boxed_variables() {
        // min x - y, x free in rows, -2 <= y <= 3, x >= y - 1, x <= 5
        let mut lp = LinearProgram::new(2);
        lp.set_free(0);
        lp.set_bounds(1, -2.0, 3.0).unwrap();
        lp.set_objective(0, 1.0);
        lp.set_objective(1, -1.0);
        lp.add_ge([(0, 1.0), (1, -1.0)], -1.0).unwrap();
        lp.add_le([(0, 1.0)], 5.0).unwrap();
        let sol = solve_lp(&lp, &cfg()).unwrap();
        assert!((sol.objective_value.unwrap() + 1.0).abs() < 1e-9);
    }

    #[test]
    fn iteration_limit_is_an_error() {
        let mut lp = LinearProgram::new(2);
        lp.set_objective(0, -1.0);
        lp.set_objective(1, -1.0);
        lp.add_le([(0, 1.0), (1, 2.0)], 4.0).unwrap();
        lp.add_le([(0, 3.0), (1, 1.0)], 6.0).unwrap();
        let tight = SolverConfig {
            max_iterations: 1,
            ..SolverConfig::default()
        };
        assert_eq!(solve_lp(&lp, &tight), Err(Error::IterationLimit(1)));
    }

    #[test]
    fn rejects_bad_bounds_and_shapes() {
        let mut lp = LinearProgram::new(1);
        assert!(lp.set_bounds(0, 2.0, 1.0).is_err());
        assert!(lp.add_le([(3, 1.0)], 0.0).is_err());
        assert!(LinearProgram::from_dense(
            vec![1.0],
            &[vec![1.0, 2.0]],
            &[1.0],
            &[],
            &[],
            vec![Bound::NONNEG]
        )
        .is_err());
        assert!(SolverConfig {
            feas_tol: 0.0,
            ..SolverConfig::default()
        }
        .validate()
        .is_err());
    }

    #[test]
    fn duplicate_columns_in_a_row_are_merged() {
        let mut lp = LinearProgram::new(1);
        lp.add_le([(0, 1.0), (0, 1.0)], 4.0).unwrap();
        assert_eq!(lp.le_rows()[0].coefs, vec![(0, 2.0)]);
    }
}
