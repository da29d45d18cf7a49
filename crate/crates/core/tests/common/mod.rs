#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use slotoffer::dp::ValueTable;
use slotoffer::experiments::random_choice_matrix;
use slotoffer::sim::replication_rng;
use slotoffer::Instance;

pub const TOL: f64 = 1e-9;

pub fn rng(stream: u64) -> ChaCha8Rng {
    replication_rng(20_240_917, stream)
}

/// Random instance with `2..=max_slots` slot types, capacities in
/// `1..=max_b`, horizon in `1..=max_n` and a positive no-arrival mass.
pub fn random_instance<R: Rng>(rng: &mut R, max_slots: usize, max_b: u32, max_n: usize) -> Instance {
    let slots = rng.random_range(2..=max_slots);
    let omega = random_choice_matrix(slots, rng);
    let mut weights: Vec<f64> = (0..omega.customer_types()).map(|_| rng.random_range(0.05..1.0)).collect();
    let idle = rng.random_range(0.0..0.5);
    let total: f64 = weights.iter().sum::<f64>() + idle;
    for w in &mut weights {
        *w /= total;
    }
    let capacity = (0..slots).map(|_| rng.random_range(1..=max_b)).collect();
    Instance::new(omega, weights, rng.random_range(1..=max_n), capacity).expect("valid random instance")
}

/// Largest absolute difference between two tables over every `(m, n)`.
pub fn max_table_diff(a: &ValueTable, b: &ValueTable) -> f64 {
    (0..=a.horizon()).flat_map(|n| a.values(n).iter().zip(b.values(n)).map(|(x, y)| (x - y).abs())).fold(0.0, f64::max)
}

/// First violation of `0 <= V_{n+1}(m) - V_n(m) <= 1` or
/// `0 <= V_n(m + e_j) - V_n(m) <= 1`, if any.
pub fn monotonicity_violation(table: &ValueTable) -> Option<String> {
    let space = table.space();
    for n in 0..=table.horizon() {
        for m in space.states() {
            let v = table.value(&m, n).unwrap();
            if n < table.horizon() {
                let d = table.value(&m, n + 1).unwrap() - v;
                if !(-TOL..=1.0 + TOL).contains(&d) {
                    return Some(format!("time step at m={m:?}, n={n}: {d}"));
                }
            }
            for j in 0..m.len() {
                let mut up = m.clone();
                up[j] += 1;
                if let Ok(w) = table.value(&up, n) {
                    let d = w - v;
                    if !(-TOL..=1.0 + TOL).contains(&d) {
                        return Some(format!("slot {} step at m={m:?}, n={n}: {d}", j + 1));
                    }
                }
            }
        }
    }
    None
}
