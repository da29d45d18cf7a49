//! Named scheduling rules. Every policy exposes its (possibly randomized)
//! action both as a sample, for simulation, and as an explicit mixture,
//! for exact evaluation.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore};

use crate::dp::{self, SeqMode, SolveOptions, ValueTable, Variant};
use crate::error::{Error, Result};
use crate::fluid;
use crate::model::{CanonicalModel, Instance, OfferAction, OfferSequence, SlotSet};

/// A stationary Markov scheduling rule `(m, n) -> action`.
///
/// Returned actions are the effective ones: they only mention available
/// slot types.
pub trait Policy: Send + Sync {
    fn name(&self) -> String;

    fn variant(&self) -> Variant;

    /// Distribution over actions at `(m, n)`; weights sum to one.
    fn mixture(&self, m: &[u32], n: usize) -> Result<Vec<(f64, OfferAction)>>;

    fn act(&self, m: &[u32], n: usize, rng: &mut dyn RngCore) -> Result<OfferAction> {
        let mut mixture = self.mixture(m, n)?;
        if mixture.len() == 1 {
            return Ok(mixture.pop().expect("one entry").1);
        }
        let mut u: f64 = rng.random();
        let last = mixture.len() - 1;
        for (k, (w, action)) in mixture.into_iter().enumerate() {
            if u < w || k == last {
                return Ok(action);
            }
            u -= w;
        }
        unreachable!("mixture is nonempty")
    }
}

fn pure(action: OfferAction) -> Result<Vec<(f64, OfferAction)>> {
    Ok(vec![(1.0, action)])
}

/// Offer sequence made of the nonempty parts of `sets ∩ available`, or the
/// empty offer if nothing is left.
fn sequence_within(sets: &[SlotSet], available: SlotSet) -> OfferAction {
    let parts: Vec<SlotSet> = sets.iter().map(|s| s.intersect(available)).filter(|s| !s.is_empty()).collect();
    if parts.is_empty() {
        OfferAction::Set(SlotSet::EMPTY)
    } else {
        OfferAction::Sequence(OfferSequence::new(parts))
    }
}

fn singletons_or_empty(order: Vec<usize>) -> OfferAction {
    if order.is_empty() {
        OfferAction::Set(SlotSet::EMPTY)
    } else {
        OfferAction::Sequence(OfferSequence::singletons(order))
    }
}

/// Offer every available slot type.
#[derive(Debug, Clone, Copy, Default)]
pub struct OfferingAll;

impl Policy for OfferingAll {
    fn name(&self) -> String {
        "offering-all".into()
    }

    fn variant(&self) -> Variant {
        Variant::Nonseq
    }

    fn mixture(&self, m: &[u32], _n: usize) -> Result<Vec<(f64, OfferAction)>> {
        pure(OfferAction::Set(SlotSet::available(m)))
    }
}

fn require_model(instance: &Instance, models: &[CanonicalModel], policy: &str) -> Result<()> {
    if models.iter().any(|m| instance.omega() == &m.matrix()) {
        Ok(())
    } else {
        let names: Vec<&str> = models.iter().map(|m| m.name()).collect();
        Err(Error::PolicyNotApplicable {
            policy: policy.into(),
            reason: format!("requires the {} choice matrix", names.join(" or ")),
        })
    }
}

/// Rationing rule for the M model: hold back the middle slot type while
/// both outer types remain.
#[derive(Debug, Clone, Copy)]
pub struct Pi1;

impl Pi1 {
    pub fn new(instance: &Instance) -> Result<Self> {
        require_model(instance, &[CanonicalModel::M], "pi1")?;
        Ok(Pi1)
    }
}

impl Policy for Pi1 {
    fn name(&self) -> String {
        "pi1".into()
    }

    fn variant(&self) -> Variant {
        Variant::Nonseq
    }

    fn mixture(&self, m: &[u32], _n: usize) -> Result<Vec<(f64, OfferAction)>> {
        let s = if m[0] > 0 && m[2] > 0 { SlotSet::from_indices([0, 2]) } else { SlotSet::available(m) };
        pure(OfferAction::Set(s))
    }
}

/// Singletons ordered so that a slot type wanted by fewer customer types
/// comes before one wanted by a strict superset of them.
#[derive(Debug, Clone)]
pub struct NestedSequential {
    order: Vec<usize>,
}

impl NestedSequential {
    pub fn new(instance: &Instance) -> Result<Self> {
        let omega = instance.omega();
        if let crate::model::Nesting::NotNested { first, second } = omega.nesting() {
            return Err(Error::PolicyNotApplicable {
                policy: "nested-seq".into(),
                reason: format!("choice matrix is not nested (slot types {} and {})", first + 1, second + 1),
            });
        }
        let j = omega.slot_types();
        let before = |a: usize, b: usize| omega.accepting_subset(a, b) && !omega.accepting_subset(b, a);
        let mut indegree: Vec<usize> = (0..j).map(|b| (0..j).filter(|&a| before(a, b)).count()).collect();
        let mut done = vec![false; j];
        let mut order = Vec::with_capacity(j);
        while let Some(next) = (0..j).find(|&b| !done[b] && indegree[b] == 0) {
            done[next] = true;
            order.push(next);
            for (b, d) in indegree.iter_mut().enumerate() {
                if before(next, b) {
                    *d -= 1;
                }
            }
        }
        Ok(Self { order })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }
}

impl Policy for NestedSequential {
    fn name(&self) -> String {
        "nested-seq".into()
    }

    fn variant(&self) -> Variant {
        Variant::Seq
    }

    fn mixture(&self, m: &[u32], _n: usize) -> Result<Vec<(f64, OfferAction)>> {
        pure(singletons_or_empty(self.order.iter().copied().filter(|&j| m[j] > 0).collect()))
    }
}

/// Closed-form optimal sequential rule for the N model: `{1}-{2}`.
#[derive(Debug, Clone, Copy)]
pub struct CorollaryN;

impl CorollaryN {
    pub fn new(instance: &Instance) -> Result<Self> {
        require_model(instance, &[CanonicalModel::N], "corollary-n")?;
        Ok(CorollaryN)
    }
}

impl Policy for CorollaryN {
    fn name(&self) -> String {
        "corollary-n".into()
    }

    fn variant(&self) -> Variant {
        Variant::Seq
    }

    fn mixture(&self, m: &[u32], _n: usize) -> Result<Vec<(f64, OfferAction)>> {
        pure(sequence_within(&[SlotSet::singleton(0), SlotSet::singleton(1)], SlotSet::available(m)))
    }
}

/// Closed-form optimal sequential rule for the M and M+1 models:
/// `{1,3}-{2}` restricted to the available types.
#[derive(Debug, Clone, Copy)]
pub struct CorollaryM;

impl CorollaryM {
    pub fn new(instance: &Instance) -> Result<Self> {
        require_model(instance, &[CanonicalModel::M, CanonicalModel::MPlus1], "corollary-m")?;
        Ok(CorollaryM)
    }
}

impl Policy for CorollaryM {
    fn name(&self) -> String {
        "corollary-m".into()
    }

    fn variant(&self) -> Variant {
        Variant::Seq
    }

    fn mixture(&self, m: &[u32], _n: usize) -> Result<Vec<(f64, OfferAction)>> {
        pure(sequence_within(&[SlotSet::from_indices([0, 2]), SlotSet::singleton(1)], SlotSet::available(m)))
    }
}

/// Offers singletons in decreasing order of the drain index
/// `m_j / (expected remaining demand for j under offering-all)`.
#[derive(Debug, Clone)]
pub struct Drain {
    instance: Instance,
}

impl Drain {
    pub fn new(instance: &Instance) -> Self {
        Self { instance: instance.clone() }
    }

    /// Drain index of every available slot type; `None` for depleted ones.
    pub fn indices(&self, m: &[u32], n: usize) -> Vec<Option<f64>> {
        let available = SlotSet::available(m);
        let omega = self.instance.omega();
        let mut load = vec![0.0; m.len()];
        for (i, &lambda) in self.instance.lambda().iter().enumerate() {
            let acceptable = omega.row(i).intersect(available);
            if acceptable.is_empty() {
                continue;
            }
            let share = lambda / acceptable.len() as f64;
            for j in acceptable.iter() {
                load[j] += share;
            }
        }
        (0..m.len())
            .map(|j| {
                (m[j] > 0).then(|| {
                    let demand = n as f64 * load[j];
                    if demand > 0.0 {
                        f64::from(m[j]) / demand
                    } else {
                        f64::INFINITY
                    }
                })
            })
            .collect()
    }
}

impl Policy for Drain {
    fn name(&self) -> String {
        "drain".into()
    }

    fn variant(&self) -> Variant {
        Variant::Seq
    }

    fn mixture(&self, m: &[u32], n: usize) -> Result<Vec<(f64, OfferAction)>> {
        let idx = self.indices(m, n);
        let mut order: Vec<usize> = (0..m.len()).filter(|&j| idx[j].is_some()).collect();
        order.sort_by(|&a, &b| idx[b].unwrap().total_cmp(&idx[a].unwrap()).then(a.cmp(&b)));
        pure(singletons_or_empty(order))
    }
}

/// Available singletons in a uniformly random order.
#[derive(Debug, Clone, Copy, Default)]
pub struct RandomSequential;

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for k in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(k);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

impl Policy for RandomSequential {
    fn name(&self) -> String {
        "random-seq".into()
    }

    fn variant(&self) -> Variant {
        Variant::Seq
    }

    fn mixture(&self, m: &[u32], _n: usize) -> Result<Vec<(f64, OfferAction)>> {
        let available: Vec<usize> = SlotSet::available(m).iter().collect();
        let perms = permutations(&available);
        let w = 1.0 / perms.len() as f64;
        Ok(perms.into_iter().map(|p| (w, singletons_or_empty(p))).collect())
    }

    fn act(&self, m: &[u32], _n: usize, rng: &mut dyn RngCore) -> Result<OfferAction> {
        let mut order: Vec<usize> = SlotSet::available(m).iter().collect();
        order.shuffle(rng);
        Ok(singletons_or_empty(order))
    }
}

/// Offers the set with bitmask `k` with probability `p[k]`, regardless of
/// the state. Depleted types in the sampled set are ignored by customers,
/// so the effective offer is the sampled set intersected with the
/// available types.
#[derive(Debug, Clone, PartialEq)]
pub struct StaticRandomized {
    p: Vec<f64>,
}

impl StaticRandomized {
    /// Tolerance on `sum p = 1`.
    pub const TOLERANCE: f64 = 1e-10;

    pub fn new(p: Vec<f64>) -> Result<Self> {
        if !p.len().is_power_of_two() {
            return Err(Error::Config(format!("probability vector has {} entries, expected a power of two", p.len())));
        }
        if p.iter().any(|&x| x < 0.0 || !x.is_finite()) {
            return Err(Error::Config("probabilities must be finite and non-negative".into()));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > Self::TOLERANCE {
            return Err(Error::Config(format!("probabilities sum to {total}, expected 1")));
        }
        Ok(Self { p })
    }

    pub fn point_mass(slots: usize, offer: SlotSet) -> Self {
        let mut p = vec![0.0; 1 << slots];
        p[offer.bits() as usize] = 1.0;
        Self { p }
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }
}

impl Policy for StaticRandomized {
    fn name(&self) -> String {
        "static-randomized".into()
    }

    fn variant(&self) -> Variant {
        Variant::Nonseq
    }

    fn mixture(&self, m: &[u32], _n: usize) -> Result<Vec<(f64, OfferAction)>> {
        let available = SlotSet::available(m);
        let mut merged = vec![0.0; self.p.len()];
        for (k, &w) in self.p.iter().enumerate() {
            if w > 0.0 {
                merged[SlotSet(k as u16).intersect(available).bits() as usize] += w;
            }
        }
        Ok(merged
            .into_iter()
            .enumerate()
            .filter(|(_, w)| *w > 0.0)
            .map(|(k, w)| (w, OfferAction::Set(SlotSet(k as u16))))
            .collect())
    }

    fn act(&self, m: &[u32], _n: usize, rng: &mut dyn RngCore) -> Result<OfferAction> {
        let mut u: f64 = rng.random();
        let mut pick = self.p.iter().rposition(|&w| w > 0.0).unwrap_or(0);
        for (k, &w) in self.p.iter().enumerate() {
            if w > 0.0 && u < w {
                pick = k;
                break;
            }
            u -= w;
        }
        Ok(OfferAction::Set(SlotSet(pick as u16).intersect(SlotSet::available(m))))
    }
}

/// Follows the actions stored in a solved value table.
#[derive(Debug, Clone)]
pub struct TablePolicy {
    name: String,
    table: ValueTable,
}

impl TablePolicy {
    pub fn new(name: impl Into<String>, table: ValueTable) -> Self {
        Self { name: name.into(), table }
    }

    pub fn table(&self) -> &ValueTable {
        &self.table
    }
}

impl Policy for TablePolicy {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn variant(&self) -> Variant {
        self.table.variant()
    }

    fn mixture(&self, m: &[u32], n: usize) -> Result<Vec<(f64, OfferAction)>> {
        pure(self.table.action(m, n)?)
    }
}

/// Policy names accepted on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolicyName {
    OfferingAll,
    Pi1,
    NestedSeq,
    CorollaryN,
    CorollaryM,
    Drain,
    RandomSeq,
    StaticRandomized,
    OptimalNonseq,
    OptimalSeq,
    Fullinfo,
}

impl PolicyName {
    pub const ALL: [PolicyName; 11] = [
        Self::OfferingAll,
        Self::Pi1,
        Self::NestedSeq,
        Self::CorollaryN,
        Self::CorollaryM,
        Self::Drain,
        Self::RandomSeq,
        Self::StaticRandomized,
        Self::OptimalNonseq,
        Self::OptimalSeq,
        Self::Fullinfo,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::OfferingAll => "offering-all",
            Self::Pi1 => "pi1",
            Self::NestedSeq => "nested-seq",
            Self::CorollaryN => "corollary-n",
            Self::CorollaryM => "corollary-m",
            Self::Drain => "drain",
            Self::RandomSeq => "random-seq",
            Self::StaticRandomized => "static-randomized",
            Self::OptimalNonseq => "optimal-nonseq",
            Self::OptimalSeq => "optimal-seq",
            Self::Fullinfo => "fullinfo",
        }
    }

    /// Builds the policy for `instance`. Table-driven policies solve the
    /// corresponding recursion over the instance's capacity box, and the
    /// static randomized policy uses the fluid-optimal probabilities.
    pub fn build(self, instance: &Instance) -> Result<Box<dyn Policy>> {
        let opts = SolveOptions::with_actions();
        Ok(match self {
            Self::OfferingAll => Box::new(OfferingAll),
            Self::Pi1 => Box::new(Pi1::new(instance)?),
            Self::NestedSeq => Box::new(NestedSequential::new(instance)?),
            Self::CorollaryN => Box::new(CorollaryN::new(instance)?),
            Self::CorollaryM => Box::new(CorollaryM::new(instance)?),
            Self::Drain => Box::new(Drain::new(instance)),
            Self::RandomSeq => Box::new(RandomSequential),
            Self::StaticRandomized => Box::new(fluid::pstar_policy(instance)?),
            Self::OptimalNonseq => Box::new(TablePolicy::new(self.as_str(), dp::solve_nonseq_with(instance, &opts)?)),
            Self::OptimalSeq => {
                Box::new(TablePolicy::new(self.as_str(), dp::solve_seq_with(instance, SeqMode::Permutation, &opts)?))
            }
            Self::Fullinfo => Box::new(TablePolicy::new(self.as_str(), dp::solve_fullinfo_with(instance, &opts)?)),
        })
    }
}

impl fmt::Display for PolicyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PolicyName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownPolicy(s.to_string()))
    }
}
