//! Dense two-phase tableau simplex with Bland's rule.
//!
//! Solves `max c'x` subject to linear rows and `x >= 0`.

use serde::Serialize;

/// Pivot and feasibility tolerance.
const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>) -> Self {
        Self { objective, constraints: Vec::new() }
    }

    pub fn variables(&self) -> usize {
        self.objective.len()
    }

    pub fn add(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        debug_assert_eq!(coeffs.len(), self.objective.len());
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    /// Largest violation of any row or sign constraint at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst = x.iter().map(|&v| (-v).max(0.0)).fold(0.0, f64::max);
        for c in &self.constraints {
            let lhs: f64 = c.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
            let v = match c.relation {
                Relation::Le => lhs - c.rhs,
                Relation::Ge => c.rhs - lhs,
                Relation::Eq => (lhs - c.rhs).abs(),
            };
            worst = worst.max(v);
        }
        worst
    }

    pub fn objective_at(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(a, b)| a * b).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    cost: Vec<f64>,
    basis: Vec<usize>,
    width: usize,
    iterations: usize,
}

impl Tableau {
    fn rhs(&self) -> usize {
        self.width
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let p = self.rows[r][e];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[e];
            if f != 0.0 {
                for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                row[e] = 0.0;
            }
        }
        let f = self.cost[e];
        if f != 0.0 {
            for (v, &pv) in self.cost.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            self.cost[e] = 0.0;
        }
        self.basis[r] = e;
        self.iterations += 1;
    }

    /// Reduced costs for maximizing `c` over the current basis.
    fn price(&mut self, c: &[f64]) {
        let mut cost = c.to_vec();
        cost.push(0.0);
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = c[b];
            if cb != 0.0 {
                for (v, &t) in cost.iter_mut().zip(&self.rows[r]) {
                    *v -= cb * t;
                }
            }
        }
        self.cost = cost;
    }

    /// Runs Bland's rule over columns `< allowed`.
    fn optimize(&mut self, allowed: usize, limit: usize) -> LpStatus {
        let rhs = self.rhs();
        loop {
            if self.iterations >= limit {
                return LpStatus::IterationLimit;
            }
            let Some(e) = (0..allowed).find(|&j| self.cost[j] > EPS) else {
                return LpStatus::Optimal;
            };
            let mut leave: Option<(usize, f64)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if row[e] > EPS {
                    let ratio = row[rhs] / row[e];
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((lr, lratio)) => {
                            if ratio < lratio - EPS || (ratio <= lratio + EPS && self.basis[r] < self.basis[lr]) {
                                Some((r, ratio))
                            } else {
                                Some((lr, lratio))
                            }
                        }
                    };
                }
            }
            match leave {
                None => return LpStatus::Unbounded,
                Some((r, _)) => self.pivot(r, e),
            }
        }
    }
}

/// Solves the program. Infeasible and unbounded problems are reported via
/// the status, never by panicking.
pub fn solve(lp: &LinearProgram) -> LpSolution {
    solve_with_limit(lp, 1_000_000)
}

pub fn solve_with_limit(lp: &LinearProgram, limit: usize) -> LpSolution {
    let n = lp.variables();
    let m = lp.constraints.len();
    let slacks = lp.constraints.iter().filter(|c| c.relation != Relation::Eq).count();
    let artificial_start = n + slacks;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut artificials = 0;
    let mut next_slack = n;
    let needs_artificial: Vec<bool> = lp
        .constraints
        .iter()
        .map(|c| {
            let flip = c.rhs < 0.0;
            match c.relation {
                Relation::Eq => true,
                Relation::Le => flip,
                Relation::Ge => !flip,
            }
        })
        .collect();
    let total_artificials = needs_artificial.iter().filter(|&&a| a).count();
    let width = artificial_start + total_artificials;

    for (c, &art) in lp.constraints.iter().zip(&needs_artificial) {
        let sign = if c.rhs < 0.0 { -1.0 } else { 1.0 };
        let mut row = vec![0.0; width + 1];
        for (v, &a) in row.iter_mut().zip(&c.coeffs) {
            *v = sign * a;
        }
        row[width] = sign * c.rhs;
        let mut slack_col = None;
        if c.relation != Relation::Eq {
            let s = if c.relation == Relation::Le { 1.0 } else { -1.0 };
            row[next_slack] = sign * s;
            slack_col = Some(next_slack);
            next_slack += 1;
        }
        if art {
            let a = artificial_start + artificials;
            row[a] = 1.0;
            basis.push(a);
            artificials += 1;
        } else {
            basis.push(slack_col.expect("non-artificial rows have a slack"));
        }
        rows.push(row);
    }

    let mut t = Tableau { rows, cost: Vec::new(), basis, width, iterations: 0 };

    if total_artificials > 0 {
        let mut phase1 = vec![0.0; width];
        for v in phase1.iter_mut().skip(artificial_start) {
            *v = -1.0;
        }
        t.price(&phase1);
        let status = t.optimize(width, limit);
        if status == LpStatus::IterationLimit {
            return finish(lp, &t, status);
        }
        let infeasibility = t.cost[width].abs().max(
            t.basis
                .iter()
                .enumerate()
                .filter(|(_, &b)| b >= artificial_start)
                .map(|(r, _)| t.rows[r][width].abs())
                .fold(0.0, f64::max),
        );
        if infeasibility > 1e-7 {
            return finish(lp, &t, LpStatus::Infeasible);
        }
        for r in 0..m {
            if t.basis[r] >= artificial_start {
                if let Some(e) = (0..artificial_start).find(|&j| t.rows[r][j].abs() > EPS) {
                    t.pivot(r, e);
                }
            }
        }
    }

    let mut phase2 = lp.objective.clone();
    phase2.resize(width, 0.0);
    t.price(&phase2);
    let status = t.optimize(artificial_start, limit);
    finish(lp, &t, status)
}

fn finish(lp: &LinearProgram, t: &Tableau, status: LpStatus) -> LpSolution {
    let n = lp.variables();
    let mut x = vec![0.0; n];
    for (r, &b) in t.basis.iter().enumerate() {
        if b < n {
            x[b] = t.rows[r][t.width].max(0.0);
        }
    }
    LpSolution { status, objective: lp.objective_at(&x), x, iterations: t.iterations }
}
