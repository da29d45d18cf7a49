//! Fluid relaxation: demand arrives as a continuous flow that splits
//! evenly over the acceptable offered slot types, and the scheduler picks a
//! mixture of offer sets in every period.

pub mod simplex;

use serde::Serialize;

use crate::dp::boundary_binomial;
use crate::error::{Error, Result};
use crate::model::{Instance, SlotSet};
use crate::policies::StaticRandomized;
use simplex::{LinearProgram, LpStatus, Relation};

/// Default limit on the number of LP variables `2^J * N * K`.
pub const DEFAULT_VARIABLE_BUDGET: u128 = 1_000_000;

/// Feasibility tolerance checked on every returned solution.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;

/// `r[k][j]`: rate at which slot type `j` is booked per unit of time spent
/// offering the set with bitmask `k`, assuming every type is available.
pub fn booking_rates(instance: &Instance) -> Vec<Vec<f64>> {
    SlotSet::full(instance.slot_types()).subsets().map(|s| instance.outcome_distribution(s).booked).collect()
}

/// The fluid LP over `periods` periods with capacity `m`.
#[derive(Debug, Clone)]
pub struct FluidLp {
    periods: usize,
    capacity: Vec<f64>,
    rates: Vec<Vec<f64>>,
    lp: LinearProgram,
}

impl FluidLp {
    pub fn periods(&self) -> usize {
        self.periods
    }

    pub fn actions(&self) -> usize {
        self.rates.len()
    }

    pub fn variables(&self) -> usize {
        self.lp.variables()
    }

    pub fn program(&self) -> &LinearProgram {
        &self.lp
    }

    fn var(&self, period: usize, k: usize) -> usize {
        period * self.actions() + k
    }
}

/// The LP for the `K`-scaled instance: horizon `N*K`, capacity `b*K`.
pub fn build_fluid(instance: &Instance, scale: usize) -> Result<FluidLp> {
    let scaled = instance.scaled(scale)?;
    build_fluid_at(&scaled, scaled.capacity(), scaled.horizon(), DEFAULT_VARIABLE_BUDGET)
}

/// The LP started from remaining capacity `m` with `n` periods to go.
///
/// Variables are `z_k(t)` for period `t = 0..n` (period 0 has `n` periods
/// to go) and action `k`. Each period's durations sum to one. Capacity
/// flows only decrease, so nonnegativity of every intermediate remaining
/// capacity reduces to the final one, which is the single capacity row per
/// slot type.
pub fn build_fluid_at(instance: &Instance, m: &[u32], n: usize, budget: u128) -> Result<FluidLp> {
    let rates = booking_rates(instance);
    let actions = rates.len();
    let vars = actions as u128 * n as u128;
    if vars > budget {
        return Err(Error::LpTooLarge { vars, budget });
    }
    let vars = vars as usize;
    let slots = instance.slot_types();
    let per_action: Vec<f64> = rates.iter().map(|r| r.iter().sum()).collect();

    let mut objective = Vec::with_capacity(vars);
    for _ in 0..n {
        objective.extend_from_slice(&per_action);
    }
    let mut lp = LinearProgram::new(objective);
    for t in 0..n {
        let mut row = vec![0.0; vars];
        row[t * actions..(t + 1) * actions].fill(1.0);
        lp.add(row, Relation::Eq, 1.0);
    }
    for j in 0..slots {
        let mut row = vec![0.0; vars];
        for t in 0..n {
            for (k, r) in rates.iter().enumerate() {
                row[t * actions + k] = r[j];
            }
        }
        lp.add(row, Relation::Le, f64::from(m[j]));
    }
    Ok(FluidLp { periods: n, capacity: m.iter().map(|&x| f64::from(x)).collect(), rates, lp })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FluidSolution {
    pub status: LpStatus,
    /// `z[t][k]`, period `t = 0` having the most periods to go.
    pub z: Vec<Vec<f64>>,
    pub objective: f64,
    /// `remaining[t][j]`: capacity left after `t` periods.
    pub remaining: Vec<Vec<f64>>,
    /// Largest constraint violation of `z`.
    pub max_violation: f64,
}

pub fn solve_fluid(lp: &FluidLp) -> Result<FluidSolution> {
    let sol = simplex::solve(&lp.lp);
    let actions = lp.actions();
    let z: Vec<Vec<f64>> = (0..lp.periods).map(|t| (0..actions).map(|k| sol.x[lp.var(t, k)]).collect()).collect();
    let mut remaining = vec![lp.capacity.clone()];
    let mut objective = 0.0;
    for zt in &z {
        let mut next = remaining.last().expect("starts nonempty").clone();
        for (k, &w) in zt.iter().enumerate() {
            for (j, r) in lp.rates[k].iter().enumerate() {
                next[j] -= w * r;
                objective += w * r;
            }
        }
        remaining.push(next);
    }
    let max_violation = lp.lp.max_violation(&sol.x);
    if sol.status != LpStatus::Optimal {
        return Err(Error::Solver(format!(
            "simplex stopped with status {:?} (max violation {max_violation:e})",
            sol.status
        )));
    }
    if max_violation > RESIDUAL_TOLERANCE || (objective - sol.objective).abs() > RESIDUAL_TOLERANCE {
        return Err(Error::Solver(format!(
            "solution residual {max_violation:e} exceeds tolerance {RESIDUAL_TOLERANCE:e}"
        )));
    }
    Ok(FluidSolution { status: sol.status, z, objective, remaining, max_violation })
}

/// `Z_{NK}(bK)`.
pub fn fluid_value(instance: &Instance, scale: usize) -> Result<f64> {
    Ok(solve_fluid(&build_fluid(instance, scale)?)?.objective)
}

/// `Z_n(m)`.
pub fn fluid_value_at(instance: &Instance, m: &[u32], n: usize) -> Result<f64> {
    Ok(solve_fluid(&build_fluid_at(instance, m, n, DEFAULT_VARIABLE_BUDGET)?)?.objective)
}

/// Time-averaged action durations of an optimal fluid solution.
pub fn extract_pstar(solution: &FluidSolution) -> Result<StaticRandomized> {
    let periods = solution.z.len().max(1) as f64;
    let actions = solution.z.first().map_or(1, Vec::len);
    let mut p = vec![0.0; actions];
    for zt in &solution.z {
        for (pk, &w) in p.iter_mut().zip(zt) {
            *pk += w / periods;
        }
    }
    let total: f64 = p.iter().sum();
    for pk in &mut p {
        *pk /= total;
    }
    StaticRandomized::new(p)
}

/// The static randomized policy built from the instance's own fluid LP.
pub fn pstar_policy(instance: &Instance) -> Result<StaticRandomized> {
    extract_pstar(&solve_fluid(&build_fluid(instance, 1)?)?)
}

/// `Upsilon_j`: per-period probability that a type `j` slot is taken under
/// `pi^p` while every slot type is still available.
pub fn upsilon(instance: &Instance, p: &StaticRandomized) -> Vec<f64> {
    let rates = booking_rates(instance);
    let mut out = vec![0.0; instance.slot_types()];
    for (pk, r) in p.probabilities().iter().zip(&rates) {
        for (o, &rj) in out.iter_mut().zip(r) {
            *o += pk * rj;
        }
    }
    out
}

/// `sum_j E[min(Bin(n, Upsilon_j), m_j)]`, a lower bound on the value of
/// `pi^p` at `(m, n)`.
pub fn binomial_lower_bound(instance: &Instance, p: &StaticRandomized, n: usize, m: &[u32]) -> f64 {
    upsilon(instance, p).iter().zip(m).map(|(&u, &mj)| boundary_binomial(u, mj, n)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CanonicalModel;

    fn n_model() -> Instance {
        Instance::canonical(CanonicalModel::N, &[0.5, 0.5], 2, &[1, 1]).unwrap()
    }

    #[test]
    fn n_model_variable_count() {
        assert_eq!(build_fluid(&n_model(), 1).unwrap().variables(), 8);
        assert_eq!(build_fluid(&n_model(), 3).unwrap().variables(), 24);
    }

    /// Offering everything for total time `a` and `{2}` otherwise books
    /// `0.25a` of slot 1 and `0.75a + 0.5(2 - a)` of slot 2; slot 1 never
    /// binds, slot 2 binds at `a = 4/3` once `{1}` fills the rest.
    #[test]
    fn n_model_hand_value() {
        let sol = solve_fluid(&build_fluid(&n_model(), 1).unwrap()).unwrap();
        assert!((sol.objective - 5.0 / 3.0).abs() < 1e-9);
        let p = extract_pstar(&sol).unwrap();
        assert!((p.probabilities()[3] - 2.0 / 3.0).abs() < 1e-9);
        assert!((p.probabilities().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(sol.remaining.last().unwrap().iter().all(|&x| x >= -1e-9));
    }

    #[test]
    fn ample_capacity_serves_all_demand() {
        let inst = Instance::canonical(CanonicalModel::M, &[0.3, 0.4], 5, &[10, 10, 10]).unwrap();
        let z = fluid_value(&inst, 1).unwrap();
        assert!((z - 5.0 * 0.7).abs() < 1e-9);
        let p = pstar_policy(&inst).unwrap();
        assert!(p.probabilities().iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn zero_capacity_has_zero_value() {
        assert_eq!(fluid_value_at(&n_model(), &[0, 0], 3).unwrap(), 0.0);
    }

    #[test]
    fn scaling_is_linear() {
        let z1 = fluid_value(&n_model(), 1).unwrap();
        for k in [2, 3] {
            assert!((fluid_value(&n_model(), k).unwrap() - k as f64 * z1).abs() < 1e-6);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let inst = Instance::canonical(CanonicalModel::M, &[0.5, 0.5], 100, &[40, 30, 30]).unwrap();
        assert!(matches!(
            build_fluid_at(&inst, &[40, 30, 30], 100, 100),
            Err(Error::LpTooLarge { vars: 800, budget: 100 })
        ));
    }

    #[test]
    fn upsilon_cases() {
        let m = Instance::canonical(CanonicalModel::M, &[0.5, 0.5], 2, &[1, 1, 1]).unwrap();
        let all = StaticRandomized::point_mass(3, SlotSet::full(3));
        assert_eq!(upsilon(&m, &all), vec![0.25, 0.5, 0.25]);
        let none = StaticRandomized::point_mass(3, SlotSet::EMPTY);
        assert_eq!(upsilon(&m, &none), vec![0.0; 3]);
    }

    #[test]
    fn binomial_bound_hand_value() {
        let all = StaticRandomized::point_mass(2, SlotSet::full(2));
        let lb = binomial_lower_bound(&n_model(), &all, 2, &[1, 1]);
        assert!((lb - 1.375).abs() < 1e-12);
        assert_eq!(binomial_lower_bound(&n_model(), &all, 2, &[0, 0]), 0.0);
    }
}
