/// Mixed-radix index over the capacity box `0 <= m <= b`, with the first
/// slot type varying fastest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpace {
    radices: Vec<u32>,
    strides: Vec<usize>,
    len: usize,
}

impl StateSpace {
    pub fn new(capacity: &[u32]) -> Self {
        let radices: Vec<u32> = capacity.iter().map(|&b| b + 1).collect();
        let mut strides = Vec::with_capacity(radices.len());
        let mut len = 1usize;
        for &r in &radices {
            strides.push(len);
            len *= r as usize;
        }
        Self { radices, strides, len }
    }

    /// Number of cells `prod (b_j + 1)` without building the space.
    pub fn cell_count(capacity: &[u32]) -> u128 {
        capacity.iter().map(|&b| u128::from(b) + 1).product()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn dims(&self) -> usize {
        self.radices.len()
    }

    pub fn radices(&self) -> &[u32] {
        &self.radices
    }

    pub fn stride(&self, j: usize) -> usize {
        self.strides[j]
    }

    /// Upper corner of the box.
    pub fn capacity(&self) -> Vec<u32> {
        self.radices.iter().map(|&r| r - 1).collect()
    }

    pub fn contains(&self, m: &[u32]) -> bool {
        m.len() == self.radices.len() && m.iter().zip(&self.radices).all(|(&x, &r)| x < r)
    }

    pub fn index(&self, m: &[u32]) -> Option<usize> {
        self.contains(m).then(|| m.iter().zip(&self.strides).map(|(&x, &s)| x as usize * s).sum())
    }

    pub fn state(&self, mut index: usize) -> Vec<u32> {
        self.radices
            .iter()
            .map(|&r| {
                let x = index % r as usize;
                index /= r as usize;
                x as u32
            })
            .collect()
    }

    /// Every state in index order.
    pub fn states(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        (0..self.len).map(|i| self.state(i))
    }
}

/// Advances `m` to the next state in index order; returns `false` after
/// the last one.
pub(crate) fn advance(m: &mut [u32], radices: &[u32]) -> bool {
    for (x, &r) in m.iter_mut().zip(radices) {
        *x += 1;
        if *x < r {
            return true;
        }
        *x = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip() {
        let s = StateSpace::new(&[2, 1, 3]);
        assert_eq!(s.len(), 3 * 2 * 4);
        assert_eq!(s.stride(0), 1);
        assert_eq!(s.stride(1), 3);
        assert_eq!(s.stride(2), 6);
        for i in 0..s.len() {
            assert_eq!(s.index(&s.state(i)), Some(i));
        }
        assert_eq!(s.index(&[3, 0, 0]), None);
        assert_eq!(s.index(&[0, 0]), None);
        assert_eq!(StateSpace::cell_count(&[2, 1, 3]), 24);
    }

    #[test]
    fn advance_matches_index_order() {
        let s = StateSpace::new(&[1, 2]);
        let mut m = vec![0, 0];
        let mut seen = vec![m.clone()];
        while advance(&mut m, s.radices()) {
            seen.push(m.clone());
        }
        assert_eq!(seen, s.states().collect::<Vec<_>>());
    }
}
