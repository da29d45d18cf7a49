use crate::model::{OfferSequence, SlotSet};

/// Largest available set for which exhaustive sequence search is allowed.
pub const MAX_EXHAUSTIVE_TYPES: usize = 6;

/// All ordered partitions of `set` into nonempty blocks. With
/// `partial_covers`, every sequence of disjoint nonempty subsets of `set`
/// is produced instead. Blocks are enumerated in increasing bitmask order,
/// so the output order is deterministic.
pub fn ordered_partitions(set: SlotSet, partial_covers: bool) -> Vec<OfferSequence> {
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    extend(set, &mut prefix, partial_covers, &mut out);
    out
}

fn extend(remaining: SlotSet, prefix: &mut Vec<SlotSet>, partial: bool, out: &mut Vec<OfferSequence>) {
    if remaining.is_empty() || (partial && !prefix.is_empty()) {
        if !prefix.is_empty() {
            out.push(OfferSequence::new(prefix.clone()));
        }
        if remaining.is_empty() {
            return;
        }
    }
    for block in remaining.subsets().skip(1) {
        prefix.push(block);
        extend(remaining.minus(block), prefix, partial, out);
        prefix.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn binomial(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn fubini_counts() {
        let expected = [1usize, 3, 13, 75, 541, 4683];
        for (k, &count) in expected.iter().enumerate() {
            let parts = ordered_partitions(SlotSet::full(k + 1), false);
            assert_eq!(parts.len(), count);
            let unique: HashSet<_> = parts.iter().collect();
            assert_eq!(unique.len(), count);
            assert!(parts.iter().all(|p| p.cover() == SlotSet::full(k + 1)));
        }
    }

    #[test]
    fn partial_cover_counts() {
        let fubini = [1u64, 1, 3, 13, 75];
        for n in 1..=4u64 {
            let expected: u64 = (1..=n).map(|k| binomial(n, k) * fubini[k as usize]).sum();
            let parts = ordered_partitions(SlotSet::full(n as usize), true);
            assert_eq!(parts.len() as u64, expected);
            let unique: HashSet<_> = parts.iter().collect();
            assert_eq!(unique.len() as u64, expected);
        }
    }

    #[test]
    fn two_type_partitions() {
        let labels: Vec<String> = ordered_partitions(SlotSet::full(2), false).iter().map(ToString::to_string).collect();
        assert_eq!(labels, vec!["{1}-{2}", "{2}-{1}", "{1,2}"]);
        assert!(ordered_partitions(SlotSet::EMPTY, true).is_empty());
    }
}
