use crate::error::{Error, Result};

/// Capacity vectors with `sum b_j = total` and every `b_j >= ceil(percent% of total)`,
/// in lexicographic order.
pub fn enumerate_scenarios_with_floor(total: usize, slots: usize, percent: usize) -> Result<Vec<Vec<u32>>> {
    let floor = (total * percent).div_ceil(100);
    if slots == 0 || floor * slots > total {
        return Err(Error::InfeasibleScenarios { horizon: total, slots });
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(slots);
    fill(total, slots, floor, &mut current, &mut out);
    Ok(out)
}

/// The standard grid: `b_j >= ceil(0.2 N)` and `sum b_j = N`.
pub fn enumerate_scenarios(horizon: usize, slots: usize) -> Result<Vec<Vec<u32>>> {
    enumerate_scenarios_with_floor(horizon, slots, 20)
}

fn fill(left: usize, slots: usize, floor: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    let remaining_slots = slots - current.len();
    if remaining_slots == 1 {
        current.push(left as u32);
        out.push(current.clone());
        current.pop();
        return;
    }
    let max_here = left - floor * (remaining_slots - 1);
    for b in floor..=max_here {
        current.push(b as u32);
        fill(left - b, slots, floor, current, out);
        current.pop();
    }
}

/// Componentwise maximum of the scenarios: one value table over this box
/// covers all of them.
pub fn bounding_box(scenarios: &[Vec<u32>]) -> Vec<u32> {
    let slots = scenarios.first().map_or(0, Vec::len);
    (0..slots).map(|j| scenarios.iter().map(|b| b[j]).max().unwrap_or(0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Stars and bars: `sum b_j = N`, `b_j >= f` has `C(N - J f + J - 1, J - 1)` solutions.
    fn stars_and_bars(total: usize, slots: usize, floor: usize) -> usize {
        let free = total - slots * floor;
        let (n, k) = (free + slots - 1, slots - 1);
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn grid_counts() {
        assert_eq!(enumerate_scenarios(20, 3).unwrap().len(), 45);
        assert_eq!(enumerate_scenarios(20, 2).unwrap().len(), 13);
        assert_eq!(enumerate_scenarios(30, 2).unwrap().len(), 19);
        assert_eq!(enumerate_scenarios(30, 3).unwrap().len(), 91);
        assert_eq!(enumerate_scenarios(40, 3).unwrap().len(), 153);
        assert_eq!(enumerate_scenarios(50, 3).unwrap().len(), 231);
        assert_eq!(enumerate_scenarios(50, 2).unwrap().len(), 31);
        for (n, j, f) in [(20usize, 3usize, 4usize), (37, 4, 8), (10, 5, 2)] {
            assert_eq!(enumerate_scenarios(n, j).unwrap().len(), stars_and_bars(n, j, f));
        }
    }

    #[test]
    fn tenth_floor_counts() {
        let expected = [(3, 10, 36), (3, 20, 120), (3, 30, 253), (3, 40, 435), (4, 10, 84), (4, 20, 455), (5, 10, 126)];
        for (j, n, count) in expected {
            assert_eq!(enumerate_scenarios_with_floor(n, j, 10).unwrap().len(), count);
        }
    }

    #[test]
    fn lexicographic_and_unique() {
        let s = enumerate_scenarios(20, 3).unwrap();
        assert_eq!(s[0], vec![4, 4, 12]);
        assert_eq!(s.last().unwrap(), &vec![12, 4, 4]);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert!(s.iter().all(|b| b.iter().sum::<u32>() == 20 && b.iter().all(|&x| x >= 4)));
        assert_eq!(bounding_box(&s), vec![12, 12, 12]);
    }

    #[test]
    fn infeasible_grid() {
        assert!(matches!(enumerate_scenarios_with_floor(3, 4, 100), Err(Error::InfeasibleScenarios { .. })));
    }
}
