use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ChoiceMatrix, Instance, SlotSet};
use crate::sim::replication_rng;

/// Arrival-probability schemes over `I` customer types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LambdaScheme {
    /// `1 / I`.
    Uniform,
    /// `2 (I + i - 2) / (3 I^2 - 3 I)`.
    Tilt2,
    /// `2 (I + 3 i - 4) / (5 I^2 - 5 I)`.
    Tilt4,
}

impl LambdaScheme {
    pub const ALL: [LambdaScheme; 3] = [Self::Uniform, Self::Tilt2, Self::Tilt4];

    pub fn label(self) -> &'static str {
        match self {
            Self::Uniform => "lambda(1)",
            Self::Tilt2 => "lambda(2)",
            Self::Tilt4 => "lambda(3)",
        }
    }

    /// Probabilities for `types` customer types (1-based `i` in the
    /// formulas). A single type gets probability one.
    pub fn lambda(self, types: usize) -> Vec<f64> {
        if types == 1 {
            return vec![1.0];
        }
        let n = types as f64;
        (1..=types)
            .map(|i| {
                let i = i as f64;
                match self {
                    Self::Uniform => 1.0 / n,
                    Self::Tilt2 => 2.0 * (n + i - 2.0) / (3.0 * n * n - 3.0 * n),
                    Self::Tilt4 => 2.0 * (n + 3.0 * i - 4.0) / (5.0 * n * n - 5.0 * n),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomInstanceSpec {
    pub slots: usize,
    pub horizon: usize,
    pub count: usize,
    pub scheme: LambdaScheme,
}

/// Random choice matrix: each of the `2^J - 1` nonempty acceptable sets is
/// a customer type independently with probability one half, redrawn if
/// none is selected. Rows are in increasing bitmask order.
pub fn random_choice_matrix<R: Rng + ?Sized>(slots: usize, rng: &mut R) -> ChoiceMatrix {
    loop {
        let rows: Vec<SlotSet> = SlotSet::full(slots).subsets().skip(1).filter(|_| rng.random_bool(0.5)).collect();
        if !rows.is_empty() {
            return ChoiceMatrix::from_masks(rows, slots);
        }
    }
}

/// `spec.count` seeded instances. The capacity is a placeholder even split
/// of `N`; table runners replace it per scenario.
pub fn generate_random_instances(spec: &RandomInstanceSpec, seed: u64) -> Result<Vec<Instance>> {
    if !(1..=crate::model::MAX_SLOT_TYPES).contains(&spec.slots) {
        return Err(Error::Config(format!("slot count {} out of range", spec.slots)));
    }
    let mut rng = replication_rng(seed, (spec.slots * 1000 + spec.horizon) as u64);
    let base = (spec.horizon / spec.slots).max(1) as u32;
    (0..spec.count)
        .map(|_| {
            let omega = random_choice_matrix(spec.slots, &mut rng);
            let lambda = spec.scheme.lambda(omega.customer_types());
            Instance::new(omega, lambda, spec.horizon, vec![base; spec.slots])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scheme_values() {
        assert_eq!(LambdaScheme::Uniform.lambda(4), vec![0.25; 4]);
        let l = LambdaScheme::Tilt2.lambda(2);
        assert!((l[0] - 1.0 / 3.0).abs() < 1e-15 && (l[1] - 2.0 / 3.0).abs() < 1e-15);
        for scheme in LambdaScheme::ALL {
            for types in 1..=31 {
                let l = scheme.lambda(types);
                assert!((l.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                assert!(l.iter().all(|&x| x > 0.0));
            }
        }
    }

    #[test]
    fn instances_are_valid_and_seeded() {
        let spec = RandomInstanceSpec { slots: 4, horizon: 10, count: 25, scheme: LambdaScheme::Tilt4 };
        let a = generate_random_instances(&spec, 5).unwrap();
        let b = generate_random_instances(&spec, 5).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 25);
        for inst in &a {
            assert!(inst.to_doc().validate().is_ok());
        }
        let c = generate_random_instances(&spec, 6).unwrap();
        assert_ne!(a, c);
    }
}
