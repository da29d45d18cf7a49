//! Backward induction over the capacity lattice.
//!
//! Every recursion here has the form
//! `V_n(m) = V_{n-1}(m) + sum_j q_j * (1 - Delta_j)` where `q` is the
//! booking distribution of the chosen action and
//! `Delta_j = V_{n-1}(m) - V_{n-1}(m - e_j)`. The variants differ only in
//! how the action is chosen: best offer set, best offer sequence, best
//! per-customer assignment, or a fixed policy.

mod boundary;
mod partitions;
mod space;

pub use boundary::boundary_binomial;
pub use partitions::{ordered_partitions, MAX_EXHAUSTIVE_TYPES};
pub use space::StateSpace;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Assignment, Instance, OfferAction, OfferSequence, SlotSet};
use crate::policies::Policy;

/// Default limit on `(N + 1) * prod (b_j + 1)`.
pub const DEFAULT_CELL_BUDGET: u128 = 1 << 27;

/// Absolute tolerance when deciding whether an action attains the maximum.
pub const ACTION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Variant {
    Nonseq,
    Seq,
    Fullinfo,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Nonseq => "nonseq",
            Variant::Seq => "seq",
            Variant::Fullinfo => "fullinfo",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nonseq" => Ok(Variant::Nonseq),
            "seq" => Ok(Variant::Seq),
            "fullinfo" => Ok(Variant::Fullinfo),
            _ => Err(Error::Config(format!("unknown model variant `{s}` (expected nonseq, seq or fullinfo)"))),
        }
    }
}

/// How the sequential recursion searches over offer sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeqMode {
    /// Singletons in decreasing order of `V_{n-1}(m - e_j)`.
    Permutation,
    /// Every ordered partition of the available types; with
    /// `partial_covers`, sequences that leave some available types out too.
    Exhaustive { partial_covers: bool },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub record_actions: bool,
    pub cell_budget: u128,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { record_actions: false, cell_budget: DEFAULT_CELL_BUDGET }
    }
}

impl SolveOptions {
    pub fn with_actions() -> Self {
        Self { record_actions: true, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Source {
    Nonseq,
    Seq(SeqMode),
    Fullinfo,
    Policy(String),
}

#[derive(Debug, Clone, Default, PartialEq)]
struct ActionStore {
    catalog: Vec<OfferAction>,
    lookup: HashMap<OfferAction, u32>,
    codes: Vec<Vec<u32>>,
}

impl ActionStore {
    fn intern(&mut self, action: OfferAction) -> u32 {
        if let Some(&c) = self.lookup.get(&action) {
            return c;
        }
        let c = self.catalog.len() as u32;
        self.catalog.push(action.clone());
        self.lookup.insert(action, c);
        c
    }
}

/// `V_n(m)` for every `0 <= n <= N` and every `m` in the capacity box.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueTable {
    variant: Variant,
    source: Source,
    instance: Instance,
    space: StateSpace,
    values: Vec<Vec<f64>>,
    actions: Option<ActionStore>,
}

/// Serialized form of a [`ValueTable`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueTableDoc {
    pub variant: Variant,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policy: Option<String>,
    pub radices: Vec<u32>,
    pub horizon: usize,
    pub values: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action_catalog: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actions: Option<Vec<Vec<u32>>>,
}

impl ValueTable {
    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn horizon(&self) -> usize {
        self.values.len() - 1
    }

    pub fn has_actions(&self) -> bool {
        self.actions.is_some()
    }

    /// Values of all states at `n` periods to go, in index order.
    pub fn values(&self, n: usize) -> &[f64] {
        &self.values[n]
    }

    pub fn value(&self, m: &[u32], n: usize) -> Result<f64> {
        let idx = self.locate(m, n)?;
        Ok(self.values[n][idx])
    }

    /// `V_N(b)` at the corner of the box.
    pub fn root_value(&self) -> f64 {
        *self.values[self.horizon()].last().expect("state space is never empty")
    }

    fn locate(&self, m: &[u32], n: usize) -> Result<usize> {
        if n > self.horizon() {
            return Err(out_of_lattice(m, n));
        }
        self.space.index(m).ok_or_else(|| out_of_lattice(m, n))
    }

    /// `Delta^j_{n-1}(m)` for every slot type with `m_j >= 1`.
    pub fn marginal_values(&self, m: &[u32], n: usize) -> Result<Vec<Option<f64>>> {
        if n == 0 {
            return Err(out_of_lattice(m, n));
        }
        let idx = self.locate(m, n)?;
        let prev = &self.values[n - 1];
        Ok((0..m.len()).map(|j| (m[j] > 0).then(|| prev[idx] - prev[idx - self.space.stride(j)])).collect())
    }

    fn cell(&self, m: &[u32], n: usize) -> Result<Cell<'_>> {
        if n == 0 {
            return Err(out_of_lattice(m, n));
        }
        let idx = self.locate(m, n)?;
        let prev = &self.values[n - 1];
        let after = (0..m.len()).map(|j| if m[j] > 0 { prev[idx - self.space.stride(j)] } else { f64::NAN }).collect();
        Ok(Cell {
            m: std::borrow::Cow::Owned(m.to_vec()),
            n,
            available: SlotSet::available(m),
            stay: prev[idx],
            after,
            want_action: true,
        })
    }

    /// The action this table prescribes at `(m, n)`. Stored actions are
    /// returned when present; optimal tables otherwise recompute the
    /// argmax from the stored values.
    pub fn action(&self, m: &[u32], n: usize) -> Result<OfferAction> {
        let idx = self.locate(m, n)?;
        if n == 0 {
            return Ok(OfferAction::Set(SlotSet::EMPTY));
        }
        if let Some(store) = &self.actions {
            return Ok(store.catalog[store.codes[n][idx] as usize].clone());
        }
        let cell = self.cell(m, n)?;
        let chooser = Chooser::new(&self.instance, &self.source)?;
        let (_, action) = chooser.step(&self.instance, &cell)?;
        action.ok_or_else(|| Error::Config("actions were not recorded for this table".into()))
    }

    /// Every candidate action at `(m, n)` with its one-period gain
    /// `sum_j q_j (1 - Delta_j)`. Non-sequential tables list all subsets of
    /// the available types; sequential tables list all ordered partitions
    /// when at most six types are available.
    pub fn action_gains(&self, m: &[u32], n: usize) -> Result<Vec<(OfferAction, f64)>> {
        let cell = self.cell(m, n)?;
        let inst = &self.instance;
        let candidates: Vec<OfferAction> = match self.source {
            Source::Nonseq => cell.available.subsets().map(OfferAction::Set).collect(),
            Source::Seq(_) if cell.available.is_empty() => vec![OfferAction::Set(SlotSet::EMPTY)],
            Source::Seq(_) if cell.available.len() <= MAX_EXHAUSTIVE_TYPES => {
                ordered_partitions(cell.available, false).into_iter().map(OfferAction::Sequence).collect()
            }
            _ => vec![self.action(m, n)?],
        };
        Ok(candidates
            .into_iter()
            .map(|a| {
                let g = cell.gain(&inst.action_outcome_distribution(&a).booked);
                (a, g)
            })
            .collect())
    }

    /// Actions whose gain is within [`ACTION_TOLERANCE`] of the best.
    pub fn optimal_actions(&self, m: &[u32], n: usize) -> Result<Vec<OfferAction>> {
        let gains = self.action_gains(m, n)?;
        let best = gains.iter().map(|g| g.1).fold(f64::NEG_INFINITY, f64::max);
        Ok(gains.into_iter().filter(|g| g.1 >= best - ACTION_TOLERANCE).map(|g| g.0).collect())
    }

    pub fn to_doc(&self) -> ValueTableDoc {
        ValueTableDoc {
            variant: self.variant,
            policy: match &self.source {
                Source::Policy(name) => Some(name.clone()),
                _ => None,
            },
            radices: self.space.radices().to_vec(),
            horizon: self.horizon(),
            values: self.values.clone(),
            action_catalog: self.actions.as_ref().map(|s| s.catalog.iter().map(ToString::to_string).collect()),
            actions: self.actions.as_ref().map(|s| s.codes.clone()),
        }
    }
}

fn out_of_lattice(m: &[u32], n: usize) -> Error {
    Error::OutOfLattice { m: m.to_vec(), n }
}

/// One state of the recursion together with the previous-stage values it
/// needs.
struct Cell<'a> {
    m: std::borrow::Cow<'a, [u32]>,
    n: usize,
    available: SlotSet,
    stay: f64,
    after: Vec<f64>,
    want_action: bool,
}

impl Cell<'_> {
    fn gain(&self, booked: &[f64]) -> f64 {
        booked.iter().enumerate().filter(|(_, &q)| q > 0.0).map(|(j, &q)| q * (1.0 + self.after[j] - self.stay)).sum()
    }
}

/// Booking probabilities of every offer set, indexed by bitmask.
struct SetTable {
    slots: usize,
    booked: Vec<f64>,
}

impl SetTable {
    fn new(instance: &Instance) -> Self {
        let slots = instance.slot_types();
        let mut booked = Vec::with_capacity(slots << slots);
        for s in SlotSet::full(slots).subsets() {
            booked.extend(instance.outcome_distribution(s).booked);
        }
        Self { slots, booked }
    }

    fn row(&self, s: SlotSet) -> &[f64] {
        let k = s.bits() as usize * self.slots;
        &self.booked[k..k + self.slots]
    }
}

type SequenceCache = HashMap<SlotSet, Vec<(OfferSequence, Vec<f64>)>>;

enum Chooser<'p> {
    Nonseq(SetTable),
    Permutation,
    Exhaustive { partial: bool, cache: std::cell::RefCell<SequenceCache> },
    Fullinfo,
    Policy { policy: &'p dyn Policy, sets: SetTable },
}

impl<'p> Chooser<'p> {
    fn new(instance: &Instance, source: &Source) -> Result<Self> {
        Ok(match source {
            Source::Nonseq => Chooser::Nonseq(SetTable::new(instance)),
            Source::Seq(SeqMode::Permutation) => Chooser::Permutation,
            Source::Seq(SeqMode::Exhaustive { partial_covers }) => {
                Chooser::Exhaustive { partial: *partial_covers, cache: Default::default() }
            }
            Source::Fullinfo => Chooser::Fullinfo,
            Source::Policy(name) => {
                return Err(Error::Config(format!(
                    "actions of policy `{name}` were not recorded; query the policy directly"
                )))
            }
        })
    }

    /// One-period gain of the chosen action and, if requested, the action.
    fn step(&self, instance: &Instance, cell: &Cell) -> Result<(f64, Option<OfferAction>)> {
        if cell.available.is_empty() {
            return Ok((0.0, cell.want_action.then_some(OfferAction::Set(SlotSet::EMPTY))));
        }
        match self {
            Chooser::Nonseq(sets) => Ok(best_set(sets, cell)),
            Chooser::Permutation => {
                let seq = permutation_order(cell);
                let g = cell.gain(&instance.sequence_outcome_distribution(&seq).booked);
                Ok((g, cell.want_action.then_some(OfferAction::Sequence(seq))))
            }
            Chooser::Exhaustive { partial, cache } => {
                if cell.available.len() > MAX_EXHAUSTIVE_TYPES {
                    return Err(Error::ExhaustiveTooLarge { got: cell.available.len(), max: MAX_EXHAUSTIVE_TYPES });
                }
                let mut cache = cache.borrow_mut();
                let options = cache.entry(cell.available).or_insert_with(|| {
                    ordered_partitions(cell.available, *partial)
                        .into_iter()
                        .map(|s| {
                            let q = instance.sequence_outcome_distribution(&s).booked;
                            (s, q)
                        })
                        .collect()
                });
                let gains: Vec<f64> = options.iter().map(|(_, q)| cell.gain(q)).collect();
                let best = gains.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let action = cell.want_action.then(|| {
                    let k = gains.iter().position(|&g| g >= best - ACTION_TOLERANCE).expect("at least one candidate");
                    OfferAction::Sequence(options[k].0.clone())
                });
                Ok((best, action))
            }
            Chooser::Fullinfo => Ok(best_assignment(instance, cell)),
            Chooser::Policy { policy, sets } => {
                let mixture = policy.mixture(&cell.m, cell.n)?;
                let mut g = 0.0;
                for (w, action) in &mixture {
                    check_feasible(instance, action, cell)?;
                    let q = match action {
                        OfferAction::Set(s) => cell.gain(sets.row(*s)),
                        other => cell.gain(&instance.action_outcome_distribution(other).booked),
                    };
                    g += w * q;
                }
                let action = match mixture.as_slice() {
                    [(_, a)] if cell.want_action => Some(a.clone()),
                    _ => None,
                };
                Ok((g, action))
            }
        }
    }
}

fn best_set(sets: &SetTable, cell: &Cell) -> (f64, Option<OfferAction>) {
    let weights: Vec<f64> = (0..sets.slots)
        .map(|j| if cell.available.contains(j) { 1.0 + cell.after[j] - cell.stay } else { 0.0 })
        .collect();
    let gain = |s: SlotSet| -> f64 { sets.row(s).iter().zip(&weights).map(|(q, w)| q * w).sum() };
    let best = cell.available.subsets().map(gain).fold(f64::NEG_INFINITY, f64::max);
    let action = cell.want_action.then(|| {
        let s = cell
            .available
            .subsets()
            .find(|&s| gain(s) >= best - ACTION_TOLERANCE)
            .expect("the empty set is always a candidate");
        OfferAction::Set(s)
    });
    (best, action)
}

/// Available singletons by decreasing `V_{n-1}(m - e_j)`, lower index
/// first on ties.
fn permutation_order(cell: &Cell) -> OfferSequence {
    let mut order: Vec<usize> = cell.available.iter().collect();
    order.sort_by(|&a, &b| cell.after[b].total_cmp(&cell.after[a]).then(a.cmp(&b)));
    OfferSequence::singletons(order)
}

/// Each customer type gets the acceptable available slot type with the
/// largest value-to-go.
fn best_assignment(instance: &Instance, cell: &Cell) -> (f64, Option<OfferAction>) {
    let mut booked = vec![0.0; instance.slot_types()];
    let mut targets = Vec::with_capacity(instance.customer_types());
    for (i, &lambda) in instance.lambda().iter().enumerate() {
        let mut pick: Option<usize> = None;
        for j in instance.omega().row(i).intersect(cell.available).iter() {
            if pick.is_none_or(|p| cell.after[j] > cell.after[p]) {
                pick = Some(j);
            }
        }
        if let Some(j) = pick {
            booked[j] += lambda;
        }
        targets.push(pick.map(|j| j as u8));
    }
    let action = cell.want_action.then_some(OfferAction::Assign(Assignment(targets)));
    (cell.gain(&booked), action)
}

fn check_feasible(instance: &Instance, action: &OfferAction, cell: &Cell) -> Result<()> {
    if instance.is_feasible_action(action, cell.available) {
        Ok(())
    } else {
        Err(Error::InfeasibleAction { action: action.to_string(), m: cell.m.to_vec(), n: cell.n })
    }
}

fn check_budget(instance: &Instance, budget: u128) -> Result<()> {
    let cells = StateSpace::cell_count(instance.capacity()) * (instance.horizon() as u128 + 1);
    if cells > budget {
        Err(Error::StateSpaceTooLarge { cells, budget })
    } else {
        Ok(())
    }
}

fn backward(
    instance: &Instance,
    variant: Variant,
    source: Source,
    chooser: Chooser,
    options: &SolveOptions,
) -> Result<ValueTable> {
    check_budget(instance, options.cell_budget)?;
    let space = StateSpace::new(instance.capacity());
    let slots = instance.slot_types();
    let horizon = instance.horizon();
    let record = options.record_actions && !matches!(source, Source::Policy(_));
    let mut values = Vec::with_capacity(horizon + 1);
    values.push(vec![0.0; space.len()]);
    let mut store = record.then(|| ActionStore { codes: vec![Vec::new()], ..ActionStore::default() });

    for n in 1..=horizon {
        let prev: &Vec<f64> = &values[n - 1];
        let mut cur = Vec::with_capacity(space.len());
        let mut codes = Vec::with_capacity(if record { space.len() } else { 0 });
        let mut m = vec![0u32; slots];
        let mut after = vec![f64::NAN; slots];
        for idx in 0..space.len() {
            for j in 0..slots {
                after[j] = if m[j] > 0 { prev[idx - space.stride(j)] } else { f64::NAN };
            }
            let cell = Cell {
                m: std::borrow::Cow::Borrowed(&m),
                n,
                available: SlotSet::available(&m),
                stay: prev[idx],
                after: std::mem::take(&mut after),
                want_action: record,
            };
            let (gain, action) = chooser.step(instance, &cell)?;
            after = cell.after;
            cur.push(prev[idx] + gain);
            if let (Some(store), Some(action)) = (store.as_mut(), action) {
                codes.push(store.intern(action));
            }
            space::advance(&mut m, space.radices());
        }
        if let Some(store) = store.as_mut() {
            store.codes.push(codes);
        }
        values.push(cur);
    }

    Ok(ValueTable { variant, source, instance: instance.clone(), space, values, actions: store })
}

/// Optimal values of the non-sequential offering problem.
pub fn solve_nonseq(instance: &Instance) -> Result<ValueTable> {
    solve_nonseq_with(instance, &SolveOptions::default())
}

pub fn solve_nonseq_with(instance: &Instance, options: &SolveOptions) -> Result<ValueTable> {
    let chooser = Chooser::new(instance, &Source::Nonseq)?;
    backward(instance, Variant::Nonseq, Source::Nonseq, chooser, options)
}

/// Optimal values of the sequential offering problem.
pub fn solve_seq(instance: &Instance, mode: SeqMode) -> Result<ValueTable> {
    solve_seq_with(instance, mode, &SolveOptions::default())
}

pub fn solve_seq_with(instance: &Instance, mode: SeqMode, options: &SolveOptions) -> Result<ValueTable> {
    let source = Source::Seq(mode);
    let chooser = Chooser::new(instance, &source)?;
    backward(instance, Variant::Seq, source, chooser, options)
}

/// Values when the scheduler sees each customer's type before offering.
pub fn solve_fullinfo(instance: &Instance) -> Result<ValueTable> {
    solve_fullinfo_with(instance, &SolveOptions::default())
}

pub fn solve_fullinfo_with(instance: &Instance, options: &SolveOptions) -> Result<ValueTable> {
    let chooser = Chooser::new(instance, &Source::Fullinfo)?;
    backward(instance, Variant::Fullinfo, Source::Fullinfo, chooser, options)
}

/// Dispatches on the variant; sequential problems use `mode`.
pub fn solve(instance: &Instance, variant: Variant, mode: SeqMode, options: &SolveOptions) -> Result<ValueTable> {
    match variant {
        Variant::Nonseq => solve_nonseq_with(instance, options),
        Variant::Seq => solve_seq_with(instance, mode, options),
        Variant::Fullinfo => solve_fullinfo_with(instance, options),
    }
}

/// Expected fill count of a fixed policy at every state of the box.
pub fn evaluate_policy(instance: &Instance, policy: &dyn Policy) -> Result<ValueTable> {
    evaluate_policy_with(instance, policy, &SolveOptions::default())
}

pub fn evaluate_policy_with(instance: &Instance, policy: &dyn Policy, options: &SolveOptions) -> Result<ValueTable> {
    let chooser = Chooser::Policy { policy, sets: SetTable::new(instance) };
    backward(instance, policy.variant(), Source::Policy(policy.name()), chooser, options)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CanonicalModel;

    fn n_model() -> Instance {
        Instance::canonical(CanonicalModel::N, &[0.5, 0.5], 2, &[1, 1]).unwrap()
    }

    #[test]
    fn n_model_two_periods() {
        let inst = n_model();
        assert!((solve_nonseq(&inst).unwrap().root_value() - 1.625).abs() < 1e-12);
        let seq = solve_seq(&inst, SeqMode::Permutation).unwrap();
        assert!((seq.root_value() - 1.75).abs() < 1e-12);
        assert_eq!(seq.action(&[1, 1], 2).unwrap().to_string(), "{1}-{2}");
        let full = solve_fullinfo(&inst).unwrap();
        assert!((full.root_value() - 1.75).abs() < 1e-12);
        assert_eq!(full.action(&[1, 1], 2).unwrap().to_string(), "[1>1,2>2]");
    }

    /// Two-period tree under offering-all on the N model, b=(1,1).
    #[test]
    fn n_model_hand_enumeration() {
        // period 1: type 1 (p=.5) picks slot 1 or 2 uniformly, type 2 picks slot 2
        // second booking happens iff the remaining slot is acceptable to the next arrival
        let p_slot1_first = 0.25;
        let p_slot2_first = 0.75;
        let expected = 1.0 + p_slot1_first * 1.0 + p_slot2_first * 0.5;
        assert!((solve_nonseq(&n_model()).unwrap().root_value() - expected).abs() < 1e-12);
    }

    #[test]
    fn m_model_values() {
        let inst = Instance::canonical(CanonicalModel::M, &[0.5, 0.5], 2, &[2, 1, 1]).unwrap();
        let v = solve_nonseq(&inst).unwrap();
        assert!((v.value(&[2, 1, 0], 2).unwrap() - 1.625).abs() < 1e-12);
        assert!((v.value(&[2, 0, 1], 2).unwrap() - 1.75).abs() < 1e-12);
        assert_eq!(v.value(&[2, 1, 1], 0).unwrap(), 0.0);
        assert!(matches!(v.value(&[3, 0, 0], 1), Err(Error::OutOfLattice { .. })));
    }

    #[test]
    fn last_period_books_all_covered_demand() {
        let inst = Instance::canonical(CanonicalModel::W, &[0.2, 0.3, 0.4], 1, &[2, 2]).unwrap();
        let v = solve_fullinfo(&inst).unwrap();
        assert!((v.value(&[1, 1], 1).unwrap() - 0.9).abs() < 1e-12);
    }

    #[test]
    fn recorded_actions_match_recomputed() {
        let inst = Instance::canonical(CanonicalModel::MPlus1, &[0.4, 0.4, 0.2], 5, &[3, 2, 3]).unwrap();
        for variant in [Variant::Nonseq, Variant::Seq, Variant::Fullinfo] {
            let stored = solve(&inst, variant, SeqMode::Permutation, &SolveOptions::with_actions()).unwrap();
            let bare = solve(&inst, variant, SeqMode::Permutation, &SolveOptions::default()).unwrap();
            assert_eq!(stored.values, bare.values);
            for n in 1..=5 {
                for m in bare.space().states() {
                    assert_eq!(stored.action(&m, n).unwrap(), bare.action(&m, n).unwrap());
                }
            }
        }
    }

    #[test]
    fn nonseq_ties_prefer_smallest_mask() {
        let v = solve_nonseq_with(&n_model(), &SolveOptions::with_actions()).unwrap();
        // one period left: {2} and {1,2} both book with certainty
        assert_eq!(v.action(&[1, 1], 1).unwrap(), OfferAction::Set(SlotSet(0b10)));
        assert_eq!(v.action(&[0, 0], 1).unwrap(), OfferAction::Set(SlotSet::EMPTY));
        let best = v.optimal_actions(&[1, 1], 1).unwrap();
        assert_eq!(best, vec![OfferAction::Set(SlotSet(0b10)), OfferAction::Set(SlotSet(0b11))]);
    }

    #[test]
    fn marginal_values_at_last_period_are_zero() {
        let v = solve_nonseq(&n_model()).unwrap();
        assert_eq!(v.marginal_values(&[1, 1], 1).unwrap(), vec![Some(0.0), Some(0.0)]);
        let d = v.marginal_values(&[1, 0], 2).unwrap();
        assert_eq!(d[1], None);
        assert!((d[0].unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn budget_is_enforced() {
        let inst = Instance::canonical(CanonicalModel::M, &[0.5, 0.5], 100, &[100, 100, 100]).unwrap();
        let opts = SolveOptions { cell_budget: 1_000_000, ..SolveOptions::default() };
        assert!(matches!(solve_nonseq_with(&inst, &opts), Err(Error::StateSpaceTooLarge { .. })));
    }

    #[test]
    fn exhaustive_guard() {
        let rows: Vec<Vec<u8>> = (0..7).map(|j| (0..7).map(|k| u8::from(k == j)).collect()).collect();
        let omega = crate::model::ChoiceMatrix::from_rows(&rows).unwrap();
        let inst = Instance::new(omega, vec![0.1; 7], 1, vec![1; 7]).unwrap();
        let err = solve_seq(&inst, SeqMode::Exhaustive { partial_covers: false }).unwrap_err();
        assert_eq!(err, Error::ExhaustiveTooLarge { got: 7, max: 6 });
    }

    #[test]
    fn doc_round_trip() {
        let v = solve_seq_with(&n_model(), SeqMode::Permutation, &SolveOptions::with_actions()).unwrap();
        let doc = v.to_doc();
        let text = serde_json::to_string(&doc).unwrap();
        assert!(text.starts_with(r#"{"variant":"SEQ","radices":[2,2],"horizon":2"#));
        let back: ValueTableDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
        let catalog = doc.action_catalog.unwrap();
        let code = doc.actions.unwrap()[2][3];
        assert_eq!(catalog[code as usize], "{1}-{2}");
    }
}
