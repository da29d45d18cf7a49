use std::fmt;

use serde::{Deserialize, Serialize};

/// A set of slot types as a bitmask; bit `j` is slot type `j` (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SlotSet(pub u16);

impl SlotSet {
    pub const EMPTY: SlotSet = SlotSet(0);

    pub fn full(slots: usize) -> Self {
        debug_assert!(slots <= 16);
        SlotSet(((1u32 << slots) - 1) as u16)
    }

    pub fn singleton(j: usize) -> Self {
        SlotSet(1 << j)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        SlotSet(indices.into_iter().fold(0u16, |acc, j| acc | (1 << j)))
    }

    /// Slot types with `m_j > 0`.
    pub fn available(m: &[u32]) -> Self {
        Self::from_indices(m.iter().enumerate().filter(|(_, &c)| c > 0).map(|(j, _)| j))
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    pub fn contains(self, j: usize) -> bool {
        j < 16 && self.0 & (1 << j) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: SlotSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersect(self, other: SlotSet) -> Self {
        SlotSet(self.0 & other.0)
    }

    pub fn union(self, other: SlotSet) -> Self {
        SlotSet(self.0 | other.0)
    }

    pub fn minus(self, other: SlotSet) -> Self {
        SlotSet(self.0 & !other.0)
    }

    /// Members in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let j = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(j)
            }
        })
    }

    /// The `k`-th member (0-based) in increasing order.
    pub fn nth(self, k: usize) -> Option<usize> {
        self.iter().nth(k)
    }

    /// All subsets in increasing bitmask order, starting with the empty set.
    pub fn subsets(self) -> impl Iterator<Item = SlotSet> {
        let full = self.0;
        let mut next = Some(0u16);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full { None } else { Some(cur.wrapping_sub(full) & full) };
            Some(SlotSet(cur))
        })
    }
}

impl fmt::Display for SlotSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, j) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", j + 1)?;
        }
        f.write_str("}")
    }
}

/// Disjoint offer sets shown one after another.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OfferSequence(Vec<SlotSet>);

impl OfferSequence {
    pub fn new(sets: Vec<SlotSet>) -> Self {
        Self(sets)
    }

    /// One singleton per slot type, in the given order.
    pub fn singletons<I: IntoIterator<Item = usize>>(order: I) -> Self {
        Self(order.into_iter().map(SlotSet::singleton).collect())
    }

    pub fn sets(&self) -> &[SlotSet] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Union of all offered sets.
    pub fn cover(&self) -> SlotSet {
        self.0.iter().fold(SlotSet::EMPTY, |acc, &s| acc.union(s))
    }

    /// Nonempty, pairwise disjoint, nonempty members, all within `available`.
    pub fn is_valid_for(&self, available: SlotSet) -> bool {
        if self.0.is_empty() {
            return false;
        }
        let mut seen = SlotSet::EMPTY;
        for &s in &self.0 {
            if s.is_empty() || !s.intersect(seen).is_empty() || !s.is_subset(available) {
                return false;
            }
            seen = seen.union(s);
        }
        true
    }
}

impl fmt::Display for OfferSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, s) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("-")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Full-information decision: which slot type each customer type is
/// directed to (`None` when it gets nothing).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Assignment(pub Vec<Option<u8>>);

impl Assignment {
    pub fn slot_for(&self, customer: usize) -> Option<usize> {
        self.0.get(customer).copied().flatten().map(usize::from)
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, target) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            match target {
                Some(j) => write!(f, "{}>{}", i + 1, j + 1)?,
                None => write!(f, "{}>-", i + 1)?,
            }
        }
        f.write_str("]")
    }
}

/// Any scheduler action.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OfferAction {
    Set(SlotSet),
    Sequence(OfferSequence),
    Assign(Assignment),
}

impl fmt::Display for OfferAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OfferAction::Set(s) => write!(f, "{s}"),
            OfferAction::Sequence(q) => write!(f, "{q}"),
            OfferAction::Assign(a) => write!(f, "{a}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_in_increasing_order() {
        let s = SlotSet(0b1010);
        let subs: Vec<u16> = s.subsets().map(|x| x.0).collect();
        assert_eq!(subs, vec![0b0000, 0b0010, 0b1000, 0b1010]);
        assert_eq!(SlotSet::EMPTY.subsets().count(), 1);
        assert_eq!(SlotSet::full(16).subsets().count(), 1 << 16);
    }

    #[test]
    fn labels_are_one_based() {
        assert_eq!(SlotSet::from_indices([0, 2]).to_string(), "{1,3}");
        assert_eq!(SlotSet::EMPTY.to_string(), "{}");
        let seq = OfferSequence::new(vec![SlotSet::from_indices([0, 2]), SlotSet::singleton(1)]);
        assert_eq!(seq.to_string(), "{1,3}-{2}");
        assert_eq!(Assignment(vec![Some(0), None]).to_string(), "[1>1,2>-]");
    }

    #[test]
    fn sequence_validity() {
        let avail = SlotSet::from_indices([0, 1, 2]);
        assert!(OfferSequence::singletons([0, 2, 1]).is_valid_for(avail));
        assert!(!OfferSequence::new(vec![]).is_valid_for(avail));
        assert!(!OfferSequence::new(vec![SlotSet(0b011), SlotSet(0b010)]).is_valid_for(avail));
        assert!(!OfferSequence::singletons([3]).is_valid_for(avail));
        assert!(!OfferSequence::new(vec![SlotSet::EMPTY]).is_valid_for(avail));
    }

    #[test]
    fn available_from_capacity() {
        assert_eq!(SlotSet::available(&[2, 0, 1]), SlotSet::from_indices([0, 2]));
        assert_eq!(SlotSet::available(&[0, 0]), SlotSet::EMPTY);
    }
}
