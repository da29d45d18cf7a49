//! Problem instances: the choice matrix, arrival probabilities, booking
//! horizon and slot capacities, together with the offer-set types used as
//! scheduler actions.
//!
//! Slot types and customer types are 0-based inside the library. Everything
//! that is rendered for people (labels, CSV, error messages) uses 1-based
//! indices.

mod choice;
mod sets;

pub use choice::OutcomeDistribution;
pub use sets::{Assignment, OfferAction, OfferSequence, SlotSet};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on the number of slot types; offer sets are `u16` bitmasks.
pub const MAX_SLOT_TYPES: usize = 16;

/// Tolerance on `sum(lambda) <= 1`.
pub const LAMBDA_TOLERANCE: f64 = 1e-12;

/// One violated instance invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum ValidationError {
    NoCustomerTypes,
    NoSlotTypes,
    TooManySlotTypes(usize),
    RaggedRow { row: usize, len: usize, expected: usize },
    NonBinaryEntry { row: usize, col: usize, value: i64 },
    EmptyCustomerType(usize),
    DuplicateCustomerType { first: usize, second: usize },
    LambdaLength { len: usize, expected: usize },
    NonPositiveArrival { index: usize, value: f64 },
    ArrivalsExceedOne(f64),
    ZeroHorizon,
    CapacityLength { len: usize, expected: usize },
    NegativeCapacity { index: usize, value: i64 },
    NoCapacity,
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ValidationError::*;
        match self {
            NoCustomerTypes => write!(f, "choice matrix has no rows"),
            NoSlotTypes => write!(f, "choice matrix has no columns"),
            TooManySlotTypes(j) => {
                write!(f, "{j} slot types exceed the maximum of {MAX_SLOT_TYPES}")
            }
            RaggedRow { row, len, expected } => {
                write!(f, "row {} of omega has {len} entries, expected {expected}", row + 1)
            }
            NonBinaryEntry { row, col, value } => write!(f, "omega[{}][{}] = {value} is not 0 or 1", row + 1, col + 1),
            EmptyCustomerType(i) => {
                write!(f, "customer type {} accepts no slot type", i + 1)
            }
            DuplicateCustomerType { first, second } => {
                write!(f, "duplicate customer type: rows {} and {} are identical", first + 1, second + 1)
            }
            LambdaLength { len, expected } => {
                write!(f, "lambda has {len} entries, expected {expected}")
            }
            NonPositiveArrival { index, value } => {
                write!(f, "arrival probability lambda[{}] = {value} must be positive", index + 1)
            }
            ArrivalsExceedOne(sum) => {
                write!(f, "arrival probabilities exceed 1 (sum = {sum})")
            }
            ZeroHorizon => write!(f, "horizon must be at least 1"),
            CapacityLength { len, expected } => {
                write!(f, "capacity has {len} entries, expected {expected}")
            }
            NegativeCapacity { index, value } => write!(f, "capacity[{}] = {value} is negative", index + 1),
            NoCapacity => write!(f, "at least one slot type needs positive capacity"),
        }
    }
}

/// The on-disk instance document. Every CLI subcommand reads this format.
///
/// ```json
/// {"omega": [[1,1,0],[0,1,1]], "lambda": [0.5,0.5], "horizon": 20, "capacity": [7,6,7]}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceDoc {
    pub omega: Vec<Vec<i64>>,
    pub lambda: Vec<f64>,
    pub horizon: usize,
    pub capacity: Vec<i64>,
}

impl InstanceDoc {
    /// Collects every violated invariant instead of stopping at the first.
    pub fn validate(&self) -> std::result::Result<(), Vec<ValidationError>> {
        let mut errors = Vec::new();
        let rows = self.omega.len();
        let cols = self.omega.first().map_or(0, Vec::len);
        if rows == 0 {
            errors.push(ValidationError::NoCustomerTypes);
        }
        if rows > 0 && cols == 0 {
            errors.push(ValidationError::NoSlotTypes);
        }
        if cols > MAX_SLOT_TYPES {
            errors.push(ValidationError::TooManySlotTypes(cols));
        }

        let mut masks: Vec<Option<&[i64]>> = Vec::with_capacity(rows);
        for (i, row) in self.omega.iter().enumerate() {
            if row.len() != cols {
                errors.push(ValidationError::RaggedRow { row: i, len: row.len(), expected: cols });
                masks.push(None);
                continue;
            }
            let mut binary = true;
            for (j, &v) in row.iter().enumerate() {
                match v {
                    0 | 1 => {}
                    _ => {
                        binary = false;
                        errors.push(ValidationError::NonBinaryEntry { row: i, col: j, value: v });
                    }
                }
            }
            if binary && row.iter().all(|&v| v == 0) {
                errors.push(ValidationError::EmptyCustomerType(i));
            }
            masks.push(binary.then_some(row.as_slice()));
        }
        for second in 0..masks.len() {
            let Some(b) = masks[second] else { continue };
            if let Some(first) = (0..second).find(|&first| masks[first] == Some(b)) {
                errors.push(ValidationError::DuplicateCustomerType { first, second });
            }
        }

        if self.lambda.len() != rows {
            errors.push(ValidationError::LambdaLength { len: self.lambda.len(), expected: rows });
        }
        for (index, &value) in self.lambda.iter().enumerate() {
            if value <= 0.0 || !value.is_finite() {
                errors.push(ValidationError::NonPositiveArrival { index, value });
            }
        }
        let total: f64 = self.lambda.iter().sum();
        if total > 1.0 + LAMBDA_TOLERANCE {
            errors.push(ValidationError::ArrivalsExceedOne(total));
        }

        if self.horizon == 0 {
            errors.push(ValidationError::ZeroHorizon);
        }
        if self.capacity.len() != cols {
            errors.push(ValidationError::CapacityLength { len: self.capacity.len(), expected: cols });
        }
        for (index, &value) in self.capacity.iter().enumerate() {
            if value < 0 {
                errors.push(ValidationError::NegativeCapacity { index, value });
            }
        }
        if !self.capacity.is_empty() && self.capacity.iter().all(|&b| b <= 0) {
            errors.push(ValidationError::NoCapacity);
        }

        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }
}

/// A 0/1 choice matrix stored as one acceptable-slot bitmask per customer
/// type.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChoiceMatrix {
    rows: Vec<SlotSet>,
    slots: usize,
}

impl ChoiceMatrix {
    /// Builds a matrix from 0/1 rows. Only the shape is checked here; the
    /// full invariants are enforced when the matrix becomes part of an
    /// [`Instance`].
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let slots = rows.first().map_or(0, Vec::len);
        let doc_rows: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|&v| i64::from(v)).collect()).collect();
        let probe = InstanceDoc {
            omega: doc_rows,
            lambda: vec![1.0 / rows.len().max(1) as f64; rows.len()],
            horizon: 1,
            capacity: vec![1; slots],
        };
        probe.validate().map_err(Error::Invalid)?;
        Ok(Self::from_masks(
            rows.iter()
                .map(|r| SlotSet::from_indices(r.iter().enumerate().filter(|(_, &v)| v == 1).map(|(j, _)| j)))
                .collect(),
            slots,
        ))
    }

    pub(crate) fn from_masks(rows: Vec<SlotSet>, slots: usize) -> Self {
        Self { rows, slots }
    }

    pub fn customer_types(&self) -> usize {
        self.rows.len()
    }

    pub fn slot_types(&self) -> usize {
        self.slots
    }

    /// Acceptable slot types of customer type `i`.
    pub fn row(&self, i: usize) -> SlotSet {
        self.rows[i]
    }

    pub fn rows(&self) -> &[SlotSet] {
        &self.rows
    }

    pub fn accepts(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        self.rows.iter().map(|r| (0..self.slots).map(|j| u8::from(r.contains(j))).collect()).collect()
    }

    /// Customer types that accept slot type `j`.
    pub fn accepting(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().enumerate().filter(move |(_, r)| r.contains(j)).map(|(i, _)| i)
    }

    /// `I(a) ⊆ I(b)`: every customer accepting `a` also accepts `b`.
    pub fn accepting_subset(&self, a: usize, b: usize) -> bool {
        self.rows.iter().all(|r| !r.contains(a) || r.contains(b))
    }

    fn accepting_disjoint(&self, a: usize, b: usize) -> bool {
        self.rows.iter().all(|r| !(r.contains(a) && r.contains(b)))
    }

    /// Nesting check: every pair of columns has disjoint or comparable
    /// accepting sets. Returns the first offending pair otherwise.
    pub fn nesting(&self) -> Nesting {
        for a in 0..self.slots {
            for b in (a + 1)..self.slots {
                if !(self.accepting_disjoint(a, b) || self.accepting_subset(a, b) || self.accepting_subset(b, a)) {
                    return Nesting::NotNested { first: a, second: b };
                }
            }
        }
        Nesting::Nested
    }

    pub fn is_nested(&self) -> bool {
        matches!(self.nesting(), Nesting::Nested)
    }
}

/// Result of [`ChoiceMatrix::nesting`]. Witness indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nesting {
    Nested,
    NotNested { first: usize, second: usize },
}

/// The four small instances used throughout the analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CanonicalModel {
    N,
    W,
    M,
    MPlus1,
}

impl CanonicalModel {
    pub const ALL: [CanonicalModel; 4] = [Self::N, Self::W, Self::M, Self::MPlus1];

    pub fn rows(self) -> Vec<Vec<u8>> {
        match self {
            Self::N => vec![vec![1, 1], vec![0, 1]],
            Self::W => vec![vec![1, 0], vec![1, 1], vec![0, 1]],
            Self::M => vec![vec![1, 1, 0], vec![0, 1, 1]],
            Self::MPlus1 => vec![vec![1, 1, 0], vec![0, 1, 1], vec![0, 1, 0]],
        }
    }

    pub fn matrix(self) -> ChoiceMatrix {
        ChoiceMatrix::from_rows(&self.rows()).expect("canonical matrices are valid")
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::N => "N",
            Self::W => "W",
            Self::M => "M",
            Self::MPlus1 => "M+1",
        }
    }
}

impl fmt::Display for CanonicalModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CanonicalModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "N" => Ok(Self::N),
            "W" => Ok(Self::W),
            "M" => Ok(Self::M),
            "M+1" | "M_PLUS_1" | "MPLUS1" | "M-PLUS-1" => Ok(Self::MPlus1),
            _ => Err(Error::UnknownModel(s.to_string())),
        }
    }
}

/// Looks up a canonical choice matrix by name.
pub fn canonical(name: &str) -> Result<ChoiceMatrix> {
    Ok(name.parse::<CanonicalModel>()?.matrix())
}

/// A validated problem instance. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    omega: ChoiceMatrix,
    lambda: Vec<f64>,
    horizon: usize,
    capacity: Vec<u32>,
}

impl Instance {
    pub fn new(omega: ChoiceMatrix, lambda: Vec<f64>, horizon: usize, capacity: Vec<u32>) -> Result<Self> {
        let doc = InstanceDoc {
            omega: omega.to_rows().into_iter().map(|r| r.into_iter().map(i64::from).collect()).collect(),
            lambda,
            horizon,
            capacity: capacity.iter().map(|&b| i64::from(b)).collect(),
        };
        Self::try_from(doc)
    }

    /// Convenience constructor for one of the canonical models.
    pub fn canonical(model: CanonicalModel, lambda: &[f64], horizon: usize, capacity: &[u32]) -> Result<Self> {
        Self::new(model.matrix(), lambda.to_vec(), horizon, capacity.to_vec())
    }

    pub fn omega(&self) -> &ChoiceMatrix {
        &self.omega
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    /// Probability that nobody arrives in a period.
    pub fn lambda0(&self) -> f64 {
        (1.0 - self.lambda.iter().sum::<f64>()).max(0.0)
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn capacity(&self) -> &[u32] {
        &self.capacity
    }

    pub fn slot_types(&self) -> usize {
        self.omega.slot_types()
    }

    pub fn customer_types(&self) -> usize {
        self.omega.customer_types()
    }

    pub fn total_capacity(&self) -> u32 {
        self.capacity.iter().sum()
    }

    /// Same demand model with a different horizon.
    pub fn with_horizon(&self, horizon: usize) -> Result<Self> {
        Self::new(self.omega.clone(), self.lambda.clone(), horizon, self.capacity.clone())
    }

    /// Same demand model with a different capacity vector.
    pub fn with_capacity(&self, capacity: Vec<u32>) -> Result<Self> {
        Self::new(self.omega.clone(), self.lambda.clone(), self.horizon, capacity)
    }

    /// The K-th problem in the scaled sequence: horizon `N*K`, capacity `b*K`.
    pub fn scaled(&self, factor: usize) -> Result<Self> {
        if factor == 0 {
            return Err(Error::Config("scale factor must be at least 1".into()));
        }
        let k = u32::try_from(factor).map_err(|_| Error::Config("scale factor too large".into()))?;
        Self::new(
            self.omega.clone(),
            self.lambda.clone(),
            self.horizon * factor,
            self.capacity.iter().map(|&b| b * k).collect(),
        )
    }

    pub fn to_doc(&self) -> InstanceDoc {
        InstanceDoc {
            omega: self.omega.to_rows().into_iter().map(|r| r.into_iter().map(i64::from).collect()).collect(),
            lambda: self.lambda.clone(),
            horizon: self.horizon,
            capacity: self.capacity.iter().map(|&b| i64::from(b)).collect(),
        }
    }
}

impl TryFrom<InstanceDoc> for Instance {
    type Error = Error;

    fn try_from(doc: InstanceDoc) -> Result<Self> {
        doc.validate().map_err(Error::Invalid)?;
        let slots = doc.omega[0].len();
        let rows = doc
            .omega
            .iter()
            .map(|r| SlotSet::from_indices(r.iter().enumerate().filter(|(_, &v)| v == 1).map(|(j, _)| j)))
            .collect();
        Ok(Self {
            omega: ChoiceMatrix::from_masks(rows, slots),
            lambda: doc.lambda,
            horizon: doc.horizon,
            capacity: doc.capacity.iter().map(|&b| b as u32).collect(),
        })
    }
}

impl Serialize for Instance {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_doc().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Instance {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = InstanceDoc::deserialize(deserializer)?;
        Instance::try_from(doc).map_err(serde::de::Error::custom)
    }
}

/// Remaining capacity together with the number of periods to go.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct State {
    pub m: Vec<u32>,
    pub n: usize,
}

impl State {
    pub fn new(m: Vec<u32>, n: usize) -> Self {
        Self { m, n }
    }

    /// Slot types with remaining capacity.
    pub fn available(&self) -> SlotSet {
        SlotSet::available(&self.m)
    }

    /// Checks `m <= b` componentwise and `n <= N`.
    pub fn is_within(&self, instance: &Instance) -> bool {
        self.m.len() == instance.slot_types()
            && self.n <= instance.horizon()
            && self.m.iter().zip(instance.capacity()).all(|(m, b)| m <= b)
    }
}
