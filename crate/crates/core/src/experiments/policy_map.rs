use serde::Serialize;

use crate::dp::ValueTable;
use crate::error::{Error, Result};

/// A coordinate of the state `(m, n)`: slot type `j` (0-based) or `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Coord {
    Slot(usize),
    Periods,
}

impl Coord {
    /// Parses `m1`, `m2`, ... (1-based) or `n`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "n" {
            return Ok(Self::Periods);
        }
        s.strip_prefix('m')
            .and_then(|d| d.parse::<usize>().ok())
            .filter(|&j| j >= 1)
            .map(|j| Self::Slot(j - 1))
            .ok_or_else(|| Error::Config(format!("bad coordinate `{s}` (expected m1, m2, ... or n)")))
    }

    pub fn label(self) -> String {
        match self {
            Self::Slot(j) => format!("m{}", j + 1),
            Self::Periods => "n".into(),
        }
    }
}

/// Parses `m1=4,n=5`.
pub fn parse_fixed(s: &str) -> Result<Vec<(Coord, u32)>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|part| {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("bad fixed coordinate `{part}` (expected name=value)")))?;
            let v = v.trim().parse::<u32>().map_err(|e| Error::Config(format!("bad value in `{part}`: {e}")))?;
            Ok((Coord::parse(k)?, v))
        })
        .collect()
}

/// Parses `m2,m3` into two 0-based slot indices.
pub fn parse_axes(s: &str) -> Result<(usize, usize)> {
    let coords: Vec<Coord> = s.split(',').map(Coord::parse).collect::<Result<_>>()?;
    match coords.as_slice() {
        [Coord::Slot(a), Coord::Slot(b)] if a != b => Ok((*a, *b)),
        _ => Err(Error::Config(format!("axes `{s}` must name two distinct slot types"))),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolicyMapCell {
    pub x: u32,
    pub y: u32,
    pub action: String,
    /// No other action is within tolerance of the best.
    pub unique: bool,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolicyMap {
    pub x_axis: String,
    pub y_axis: String,
    pub n: usize,
    /// The full state with both axis coordinates set to zero.
    pub base_state: Vec<u32>,
    pub cells: Vec<PolicyMapCell>,
}

impl PolicyMap {
    pub fn get(&self, x: u32, y: u32) -> Option<&PolicyMapCell> {
        self.cells.iter().find(|c| c.x == x && c.y == y)
    }
}

/// Optimal action over the `(axes.0, axes.1)` grid with every other slot
/// coordinate and `n` fixed. Cells are ordered by `x`, then `y`.
pub fn emit_policy_map(table: &ValueTable, fixed: &[(Coord, u32)], axes: (usize, usize)) -> Result<PolicyMap> {
    let capacity = table.instance().capacity().to_vec();
    let slots = capacity.len();
    let (xa, ya) = axes;
    if xa >= slots || ya >= slots || xa == ya {
        return Err(Error::Config(format!("axes must be two distinct slot types out of {slots}")));
    }
    let mut state = vec![None; slots];
    let mut n = None;
    for &(coord, v) in fixed {
        match coord {
            Coord::Periods => n = Some(v as usize),
            Coord::Slot(j) if j < slots && j != xa && j != ya => state[j] = Some(v),
            Coord::Slot(j) => {
                return Err(Error::Config(format!("cannot fix m{} (not a free coordinate)", j + 1)));
            }
        }
    }
    state[xa] = Some(0);
    state[ya] = Some(0);
    let n = n.ok_or_else(|| Error::Config("n must be fixed".into()))?;
    let mut m: Vec<u32> = state
        .iter()
        .enumerate()
        .map(|(j, v)| v.ok_or_else(|| Error::Config(format!("m{} must be fixed", j + 1))))
        .collect::<Result<_>>()?;
    if n == 0 || n > table.horizon() || m.iter().zip(&capacity).any(|(a, b)| a > b) {
        return Err(Error::OutOfLattice { m, n });
    }
    let base_state = m.clone();
    let mut cells = Vec::new();
    for x in 0..=capacity[xa] {
        for y in 0..=capacity[ya] {
            m[xa] = x;
            m[ya] = y;
            let best = table.optimal_actions(&m, n)?;
            cells.push(PolicyMapCell {
                x,
                y,
                action: table.action(&m, n)?.to_string(),
                unique: best.len() == 1,
                value: table.value(&m, n)?,
            });
        }
    }
    Ok(PolicyMap { x_axis: Coord::Slot(xa).label(), y_axis: Coord::Slot(ya).label(), n, base_state, cells })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dp::{solve_seq, SeqMode};
    use crate::model::{CanonicalModel, Instance};

    #[test]
    fn parsing() {
        assert_eq!(parse_fixed("m1=4, n=5").unwrap(), vec![(Coord::Slot(0), 4), (Coord::Periods, 5)]);
        assert_eq!(parse_axes("m2,m3").unwrap(), (1, 2));
        assert!(parse_axes("m2,m2").is_err());
        assert!(parse_axes("m2,n").is_err());
        assert!(parse_fixed("m0=1").is_err());
        assert!(parse_fixed("m1").is_err());
    }

    #[test]
    fn w_grid_examples() {
        let inst = Instance::canonical(CanonicalModel::W, &[0.2, 0.5, 0.3], 6, &[6, 6]).unwrap();
        let table = solve_seq(&inst, SeqMode::Permutation).unwrap();
        let map = emit_policy_map(&table, &[(Coord::Periods, 6)], (0, 1)).unwrap();
        assert_eq!(map.cells.len(), 49);
        assert_eq!(map.get(3, 3).unwrap().action, "{1}-{2}");
        assert_eq!(map.get(3, 4).unwrap().action, "{2}-{1}");
        for c in map.cells.iter().filter(|c| c.y == 0 && c.x > 0) {
            assert!(!c.action.contains('2'), "{}", c.action);
        }
    }

    #[test]
    fn errors() {
        let inst = Instance::canonical(CanonicalModel::M, &[0.5, 0.5], 4, &[2, 2, 2]).unwrap();
        let table = solve_seq(&inst, SeqMode::Permutation).unwrap();
        assert!(matches!(
            emit_policy_map(&table, &[(Coord::Slot(0), 3), (Coord::Periods, 2)], (1, 2)),
            Err(Error::OutOfLattice { .. })
        ));
        assert!(emit_policy_map(&table, &[(Coord::Periods, 2)], (1, 2)).is_err());
        assert!(emit_policy_map(&table, &[(Coord::Slot(0), 1), (Coord::Periods, 9)], (1, 2)).is_err());
    }
}
