//! Monte Carlo evaluation: independent single-day replications and a
//! rolling-horizon multi-day booking system.
//!
//! Every replication draws from its own ChaCha8 stream, selected by the
//! replication index, so results do not depend on thread scheduling.

mod stats;

pub use stats::{gap_statistics, GapFormula, GapSummary};

use rand::seq::index;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Instance, OfferAction, SlotSet};
use crate::policies::{Policy, PolicyName};

/// RNG for replication `stream` under `seed`.
pub fn replication_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    pub replications: usize,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self { replications: 1000, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub mean: f64,
    pub std_error: f64,
    pub counts: Vec<u32>,
    pub fill_rate: f64,
}

impl SimReport {
    fn from_counts(counts: Vec<u32>, total_capacity: u32) -> Self {
        let k = counts.len() as f64;
        let mean = counts.iter().map(|&c| f64::from(c)).sum::<f64>() / k;
        let var = if counts.len() > 1 {
            counts.iter().map(|&c| (f64::from(c) - mean).powi(2)).sum::<f64>() / (k - 1.0)
        } else {
            0.0
        };
        Self {
            mean,
            std_error: (var / k).sqrt(),
            fill_rate: if total_capacity > 0 { mean / f64::from(total_capacity) } else { 0.0 },
            counts,
        }
    }
}

/// Customer type arriving for uniform draw `u`, or `None` for no arrival.
fn arrival(lambda: &[f64], mut u: f64) -> Option<usize> {
    for (i, &l) in lambda.iter().enumerate() {
        if u < l {
            return Some(i);
        }
        u -= l;
    }
    None
}

fn checked_action(
    instance: &Instance,
    policy: &dyn Policy,
    m: &[u32],
    n: usize,
    rng: &mut dyn RngCore,
) -> Result<OfferAction> {
    let action = policy.act(m, n, rng)?;
    if instance.is_feasible_action(&action, SlotSet::available(m)) {
        Ok(action)
    } else {
        Err(Error::InfeasibleAction { action: action.to_string(), m: m.to_vec(), n })
    }
}

/// Fill count of one simulated day starting from the instance's capacity.
pub fn simulate_day(instance: &Instance, policy: &dyn Policy, rng: &mut dyn RngCore) -> Result<u32> {
    let mut m = instance.capacity().to_vec();
    let mut booked = 0;
    for n in (1..=instance.horizon()).rev() {
        let Some(i) = arrival(instance.lambda(), rng.random()) else {
            continue;
        };
        let available = SlotSet::available(&m);
        if available.is_empty() {
            break;
        }
        let action = checked_action(instance, policy, &m, n, rng)?;
        if let Some(j) = instance.resolve_choice(i, &action, available, rng.random()) {
            m[j] -= 1;
            booked += 1;
        }
    }
    Ok(booked)
}

/// Runs `config.replications` independent days in parallel.
pub fn simulate_single_day(instance: &Instance, policy: &dyn Policy, config: &SimConfig) -> Result<SimReport> {
    if config.replications == 0 {
        return Err(Error::Config("replications must be at least 1".into()));
    }
    let counts = (0..config.replications)
        .into_par_iter()
        .map(|r| simulate_day(instance, policy, &mut replication_rng(config.seed, r as u64)))
        .collect::<Result<Vec<u32>>>()?;
    Ok(SimReport::from_counts(counts, instance.total_capacity()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DemandMode {
    /// Exactly `N` arrivals per day.
    Det,
    /// `Poisson(N)` arrivals per day, capped at `10 N`.
    Poisson,
}

impl std::str::FromStr for DemandMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "det" | "deterministic" => Ok(Self::Det),
            "poisson" => Ok(Self::Poisson),
            _ => Err(Error::Config(format!("unknown demand mode `{s}` (expected det or poisson)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiDayConfig {
    /// Days bookable ahead, today included.
    pub window: usize,
    pub daily_demand: usize,
    pub demand: DemandMode,
    pub acceptable_days: usize,
    /// Per-day choice model, arrival weights and capacity. The horizon is
    /// ignored.
    pub template: Instance,
    pub days: usize,
    pub warmup: usize,
    pub seed: u64,
}

impl MultiDayConfig {
    pub fn new(template: Instance, acceptable_days: usize, demand: DemandMode, seed: u64) -> Self {
        Self { window: 15, daily_demand: 30, demand, acceptable_days, template, days: 1200, warmup: 200, seed }
    }

    fn validate(&self) -> Result<()> {
        if self.acceptable_days == 0 || self.acceptable_days > self.window {
            return Err(Error::Config(format!(
                "acceptable days D={} must lie in 1..={}",
                self.acceptable_days, self.window
            )));
        }
        if self.warmup >= self.days {
            return Err(Error::Config("warm-up must be shorter than the run".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiDayReport {
    pub mean: f64,
    pub std_error: f64,
    /// Fill count of every day closed after the warm-up.
    pub daily_fills: Vec<u32>,
    pub fill_rate: f64,
}

/// Policies that make sense without a per-day horizon.
pub const MULTIDAY_POLICIES: [PolicyName; 3] = [PolicyName::OfferingAll, PolicyName::Pi1, PolicyName::NestedSeq];

/// Rolling-horizon simulation. Each customer has one within-day type,
/// draws `D` distinct open days, and visits them in random order until one
/// of them yields a booking. The draws per customer do not depend on the
/// policy, so runs with the same seed share their demand sample path.
pub fn simulate_multiday(config: &MultiDayConfig, policy: &dyn Policy) -> Result<MultiDayReport> {
    config.validate()?;
    let inst = &config.template;
    let capacity = inst.capacity().to_vec();
    let window = config.window;
    let d = config.acceptable_days;
    let mut rng = replication_rng(config.seed, 0);
    let poisson = Poisson::new(config.daily_demand.max(1) as f64)
        .map_err(|e| Error::Config(format!("invalid daily demand: {e}")))?;
    let cap = 10 * config.daily_demand;
    let horizon = config.daily_demand;

    // open[k] is the day k days from today
    let mut open: std::collections::VecDeque<Vec<u32>> = (0..window).map(|_| capacity.clone()).collect();
    let mut fills = Vec::with_capacity(config.days - config.warmup);
    let mut visit_u = vec![0.0; d];

    for day in 0..config.days {
        let arrivals = match config.demand {
            DemandMode::Det => config.daily_demand,
            DemandMode::Poisson => (poisson.sample(&mut rng) as usize).min(cap),
        };
        for _ in 0..arrivals {
            let customer = pick_type(inst.lambda(), rng.random());
            let days = index::sample(&mut rng, window, d);
            for u in visit_u.iter_mut() {
                *u = rng.random();
            }
            for (k, visit) in days.iter().enumerate() {
                let m = &mut open[visit];
                let available = SlotSet::available(m);
                if available.is_empty() {
                    continue;
                }
                let action = checked_action(inst, policy, m, horizon, &mut rng)?;
                if let Some(j) = inst.resolve_choice(customer, &action, available, visit_u[k]) {
                    m[j] -= 1;
                    break;
                }
            }
        }
        let closed = open.pop_front().expect("window is nonempty");
        if day >= config.warmup {
            let booked: u32 = capacity.iter().zip(&closed).map(|(b, m)| b - m).sum();
            fills.push(booked);
        }
        open.push_back(capacity.clone());
    }

    let report = SimReport::from_counts(fills, inst.total_capacity());
    Ok(MultiDayReport {
        mean: report.mean,
        std_error: report.std_error,
        daily_fills: report.counts,
        fill_rate: report.fill_rate,
    })
}

/// Customer type for uniform `u`, with the weights renormalized to sum to
/// one.
fn pick_type(lambda: &[f64], u: f64) -> usize {
    let total: f64 = lambda.iter().sum();
    arrival(lambda, u * total).unwrap_or(lambda.len() - 1)
}
