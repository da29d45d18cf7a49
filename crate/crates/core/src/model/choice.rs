//! Customer choice: uniform choice over the acceptable offered slot types,
//! aggregated over customer types with the arrival probabilities.

use serde::Serialize;

use super::{Assignment, Instance, OfferAction, OfferSequence, SlotSet};

/// Probability of each slot type being booked in one period, plus the
/// probability that nothing is booked.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutcomeDistribution {
    pub booked: Vec<f64>,
    pub none: f64,
}

impl OutcomeDistribution {
    fn from_booked(booked: Vec<f64>) -> Self {
        let none = 1.0 - booked.iter().sum::<f64>();
        Self { booked, none }
    }

    /// Total booking probability.
    pub fn booking_mass(&self) -> f64 {
        self.booked.iter().sum()
    }
}

impl Instance {
    /// `q_ij(S)`: conditional choice probabilities of customer type `i`
    /// facing offer set `S`.
    pub fn conditional_choice(&self, customer: usize, offer: SlotSet) -> Vec<f64> {
        let acceptable = self.omega().row(customer).intersect(offer);
        let mut q = vec![0.0; self.slot_types()];
        let k = acceptable.len();
        if k > 0 {
            let share = 1.0 / k as f64;
            for j in acceptable.iter() {
                q[j] = share;
            }
        }
        q
    }

    /// `q_j(S)` and `q_0(S)` for a single offer set. The caller restricts
    /// `offer` to available slot types.
    pub fn outcome_distribution(&self, offer: SlotSet) -> OutcomeDistribution {
        let mut booked = vec![0.0; self.slot_types()];
        for (i, &lambda) in self.lambda().iter().enumerate() {
            add_uniform(&mut booked, self.omega().row(i).intersect(offer), lambda);
        }
        OutcomeDistribution::from_booked(booked)
    }

    /// Outcome distribution of a sequential offer: each customer type stops
    /// at the first set containing an acceptable slot type and chooses
    /// uniformly within it.
    pub fn sequence_outcome_distribution(&self, sequence: &OfferSequence) -> OutcomeDistribution {
        let mut booked = vec![0.0; self.slot_types()];
        for (i, &lambda) in self.lambda().iter().enumerate() {
            let row = self.omega().row(i);
            if let Some(hit) = sequence.sets().iter().map(|&s| row.intersect(s)).find(|s| !s.is_empty()) {
                add_uniform(&mut booked, hit, lambda);
            }
        }
        OutcomeDistribution::from_booked(booked)
    }

    /// Outcome distribution when each customer type is directed to a slot.
    pub fn assignment_outcome_distribution(&self, assignment: &Assignment) -> OutcomeDistribution {
        let mut booked = vec![0.0; self.slot_types()];
        for (i, &lambda) in self.lambda().iter().enumerate() {
            if let Some(j) = assignment.slot_for(i) {
                booked[j] += lambda;
            }
        }
        OutcomeDistribution::from_booked(booked)
    }

    pub fn action_outcome_distribution(&self, action: &OfferAction) -> OutcomeDistribution {
        match action {
            OfferAction::Set(s) => self.outcome_distribution(*s),
            OfferAction::Sequence(seq) => self.sequence_outcome_distribution(seq),
            OfferAction::Assign(a) => self.assignment_outcome_distribution(a),
        }
    }

    /// Whether `action` only offers slot types in `available`, with
    /// sequences valid and assignments acceptable.
    pub fn is_feasible_action(&self, action: &OfferAction, available: SlotSet) -> bool {
        match action {
            OfferAction::Set(s) => s.is_subset(available),
            OfferAction::Sequence(seq) => seq.is_valid_for(available),
            OfferAction::Assign(a) => {
                a.0.len() == self.customer_types()
                    && a.0.iter().enumerate().all(|(i, t)| match t {
                        Some(j) => {
                            let j = usize::from(*j);
                            self.omega().accepts(i, j) && available.contains(j)
                        }
                        None => true,
                    })
            }
        }
    }

    /// Slot type booked by customer type `i` under `action`, given the
    /// uniform draw `u` in `[0, 1)` that resolves ties among acceptable
    /// offered types. Offered but depleted types are ignored.
    pub fn resolve_choice(&self, customer: usize, action: &OfferAction, available: SlotSet, u: f64) -> Option<usize> {
        let row = self.omega().row(customer).intersect(available);
        let pick = |set: SlotSet| {
            let k = set.len();
            let idx = ((u * k as f64) as usize).min(k - 1);
            set.nth(idx)
        };
        match action {
            OfferAction::Set(s) => {
                let hit = row.intersect(*s);
                (!hit.is_empty()).then(|| pick(hit)).flatten()
            }
            OfferAction::Sequence(seq) => {
                seq.sets().iter().map(|&s| row.intersect(s)).find(|s| !s.is_empty()).and_then(pick)
            }
            OfferAction::Assign(a) => a.slot_for(customer).filter(|&j| row.contains(j)),
        }
    }
}

fn add_uniform(booked: &mut [f64], acceptable: SlotSet, mass: f64) {
    let k = acceptable.len();
    if k == 0 {
        return;
    }
    let share = mass / k as f64;
    for j in acceptable.iter() {
        booked[j] += share;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CanonicalModel;

    fn m_model() -> Instance {
        Instance::canonical(CanonicalModel::M, &[0.5, 0.5], 2, &[2, 1, 1]).unwrap()
    }

    fn set(ix: &[usize]) -> SlotSet {
        SlotSet::from_indices(ix.iter().copied())
    }

    #[test]
    fn conditional_choice_cases() {
        let inst = m_model();
        assert_eq!(inst.conditional_choice(0, set(&[0, 1, 2])), vec![0.5, 0.5, 0.0]);
        assert_eq!(inst.conditional_choice(0, set(&[0, 2])), vec![1.0, 0.0, 0.0]);
        assert_eq!(inst.conditional_choice(1, set(&[0])), vec![0.0, 0.0, 0.0]);
    }

    /// Enumerates customer types one at a time and applies the choice rule.
    fn enumerate_types(inst: &Instance, offer: SlotSet) -> Vec<f64> {
        let mut q = vec![0.0; inst.slot_types()];
        for i in 0..inst.customer_types() {
            let c = inst.conditional_choice(i, offer);
            for j in 0..q.len() {
                q[j] += inst.lambda()[i] * c[j];
            }
        }
        q
    }

    #[test]
    fn outcome_distribution_cases() {
        let inst = m_model();
        let d = inst.outcome_distribution(set(&[0, 2]));
        assert_eq!(d.booked, vec![0.5, 0.0, 0.5]);
        assert_eq!(d.none, 0.0);
        assert_eq!(d.booked, enumerate_types(&inst, set(&[0, 2])));

        let d = inst.outcome_distribution(set(&[0, 1, 2]));
        assert_eq!(d.booked, vec![0.25, 0.5, 0.25]);
        assert_eq!(d.none, 0.0);

        let d = inst.outcome_distribution(SlotSet::EMPTY);
        assert_eq!(d.booked, vec![0.0; 3]);
        assert_eq!(d.none, 1.0);
    }

    #[test]
    fn sequence_outcome_cases() {
        let n = Instance::canonical(CanonicalModel::N, &[0.5, 0.5], 2, &[1, 1]).unwrap();
        let d = n.sequence_outcome_distribution(&OfferSequence::singletons([0, 1]));
        assert_eq!(d.booked, vec![0.5, 0.5]);
        assert_eq!(d.none, 0.0);

        let m = m_model();
        let seq = OfferSequence::new(vec![set(&[0, 2]), set(&[1])]);
        assert_eq!(m.sequence_outcome_distribution(&seq).booked, vec![0.5, 0.0, 0.5]);

        for offer in SlotSet::full(3).subsets().skip(1) {
            let single = OfferSequence::new(vec![offer]);
            assert_eq!(m.sequence_outcome_distribution(&single), m.outcome_distribution(offer));
        }
    }

    #[test]
    fn choice_resolution_ignores_depleted_types() {
        let m = m_model();
        let all = OfferAction::Set(SlotSet::full(3));
        // type 1 with slot 1 depleted can only take slot 2
        let avail = set(&[1, 2]);
        assert_eq!(m.resolve_choice(0, &all, avail, 0.0), Some(1));
        assert_eq!(m.resolve_choice(0, &all, avail, 0.99), Some(1));
        assert_eq!(m.resolve_choice(1, &all, avail, 0.0), Some(1));
        assert_eq!(m.resolve_choice(1, &all, avail, 0.7), Some(2));
        let seq = OfferAction::Sequence(OfferSequence::singletons([0, 2, 1]));
        assert_eq!(m.resolve_choice(1, &seq, SlotSet::full(3), 0.3), Some(2));
        assert_eq!(m.resolve_choice(1, &OfferAction::Set(set(&[0])), SlotSet::full(3), 0.3), None);
    }
}
